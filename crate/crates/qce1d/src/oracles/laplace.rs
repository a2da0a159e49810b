//! Numeric bilateral Laplace transforms: forward by adaptive quadrature,
//! inverse by fixed-Talbot contour summation with convergence doubling.
//!
//! The inverse path needs the transform at complex arguments, so this module
//! carries a complex scaled error function (Faddeeva function via Weideman's
//! rational expansion) and complex continuations of the cluster addends
//! a_j(s). Everything here is oracle tier: accuracy targets are modest
//! (~1e-9) and no production path depends on it.

use crate::error::{QceError, Result};
use crate::quadrature;
use num_complex::Complex64;
use once_cell::sync::Lazy;
use std::f64::consts::PI;

/// Forward transform int_0^infty f(eps) e^{-s eps} d eps by adaptive
/// quadrature in the scaled variable u = s * eps.
pub fn numeric_laplace<F: Fn(f64) -> f64>(f: F, s: f64, rel_tol: f64) -> Result<f64> {
    assert!(s > 0.0, "forward transform needs s > 0");
    let g = |u: f64| f(u / s) * (-u).exp();
    quadrature::integrate_segmented(&g, &[0.0, 0.5, 2.0, 6.0, 15.0, 45.0], rel_tol, 2000)
        .map(|v| v / s)
}

/// Weideman rational expansion of the Faddeeva function w(z) for
/// Im z >= 0 (lower half-plane arguments are out of scope here).
struct Weideman {
    n: usize,
    big_l: f64,
    a: Vec<f64>,
}

impl Weideman {
    fn new(n: usize) -> Self {
        let big_l = (n as f64 / std::f64::consts::SQRT_2).sqrt();
        // a_m = (1/pi) int_0^pi g(theta) cos(m theta) d theta,
        // g(theta) = e^{-t^2} (L^2 + t^2), t = L tan(theta/2)
        let g = |theta: f64| {
            let t = big_l * (0.5 * theta).tan();
            (-t * t).exp() * (big_l * big_l + t * t)
        };
        // g is smooth and 2 pi - periodic (it vanishes with all derivatives
        // at theta = +-pi), so the trapezoid rule over one period is
        // spectrally accurate: a plain DFT gives the Fourier coefficients to
        // machine precision
        let big_m = 2 * n;
        let samples: Vec<(f64, f64)> = (0..2 * big_m)
            .map(|i| {
                let theta = (i as i64 - big_m as i64 + 1) as f64 * PI / big_m as f64;
                (theta, g(theta))
            })
            .collect();
        let mut a = Vec::with_capacity(n);
        for m in 1..=n {
            let sum: f64 = samples
                .iter()
                .map(|&(theta, gv)| gv * (m as f64 * theta).cos())
                .sum();
            a.push(sum / (2.0 * big_m as f64));
        }
        Weideman { n, big_l, a }
    }

    fn w(&self, z: Complex64) -> Complex64 {
        debug_assert!(z.im >= -1e-12, "Faddeeva expansion valid for Im z >= 0");
        let iz = Complex64::new(-z.im, z.re); // i z
        let denom = Complex64::new(self.big_l, 0.0) - iz;
        let rho = (Complex64::new(self.big_l, 0.0) + iz) / denom;
        let mut p = Complex64::new(0.0, 0.0);
        for m in (0..self.n).rev() {
            p = p * rho + self.a[m];
        }
        2.0 * p / (denom * denom) + Complex64::new(1.0 / PI.sqrt(), 0.0) / denom
    }
}

static FADDEEVA: Lazy<Weideman> = Lazy::new(|| Weideman::new(48));

/// Complex scaled complementary error function erfcx(z) = e^{z^2} erfc(z)
/// for Re z >= 0, via erfcx(z) = w(i z).
pub fn erfcx_complex(z: Complex64) -> Complex64 {
    debug_assert!(z.re >= -1e-12, "erfcx_complex requires Re z >= 0");
    FADDEEVA.w(Complex64::new(-z.im, z.re))
}

/// Gauss-Kronrod quadrature of a complex integrand over [a, b]
/// (non-adaptive K15 panels; integrands here are smooth on short ranges).
fn integrate_complex<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, panels: usize) -> Complex64 {
    let re = |x: f64| f(x).re;
    let im = |x: f64| f(x).im;
    let mut total = Complex64::new(0.0, 0.0);
    let h = (b - a) / panels as f64;
    for i in 0..panels {
        let lo = a + i as f64 * h;
        let hi = lo + h;
        let r = quadrature::integrate(&re, lo, hi, 1e-12, 60).unwrap_or(0.0);
        let m = quadrature::integrate(&im, lo, hi, 1e-12, 60).unwrap_or(0.0);
        total += Complex64::new(r, m);
    }
    total
}

/// Complex continuation of the cluster addends a_j(s), j = 1..4, for the
/// Talbot contour. Matches `clusters::a_terms` on the positive real axis.
pub fn a_term_complex(j: usize, nubar: f64, s: Complex64) -> Complex64 {
    let nv2 = nubar * nubar;
    let sqrt_s = s.sqrt();
    match j {
        1 => {
            let c = (2.0 / PI) * nubar.atan() - 1.0;
            c + 2.0 * nv2 / (PI * (1.0 + nv2)).sqrt() * sqrt_s
        }
        2 => -(2.0 / PI.sqrt()) * nubar * sqrt_s * erfcx_complex(sqrt_s),
        3 => a3_complex(nubar, s),
        4 => -2.0 * nv2 * s * a3_complex(nubar, s),
        _ => panic!("addend index must be 1..=4"),
    }
}

/// a_3(s) = (2/sqrt(pi)) F_nu(s) continued to complex s through the
/// stabilized representation with a finite-range tail integral:
///
///   a_3 = erfcx(sqrt((1+nu^2)s)) - erfcx(nu sqrt(s)) erfcx(sqrt(s))
///         + e^{nu^2 s} [ erfcx(sqrt(s)) - (2/pi) int_0^nu e^{-s x^2}/(1+x^2) dx ].
fn a3_complex(nubar: f64, s: Complex64) -> Complex64 {
    let sqrt_s = s.sqrt();
    if nubar == 0.0 {
        return erfcx_complex(sqrt_s);
    }
    let nv2 = nubar * nubar;
    let t1 = erfcx_complex((s * (1.0 + nv2)).sqrt());
    let t2 = erfcx_complex(sqrt_s * nubar) * erfcx_complex(sqrt_s);
    let finite = integrate_complex(
        |x| (-s * x * x).exp() / (1.0 + x * x),
        0.0,
        nubar,
        (2.0 * nubar).ceil() as usize + 2,
    );
    let tail = (s * nv2).exp() * (erfcx_complex(sqrt_s) - (2.0 / PI) * finite);
    t1 - t2 + tail
}

/// Inverse bilateral Laplace transform at eps > 0 by the fixed Talbot rule,
/// with the node count doubled until two successive estimates agree.
///
///   z(theta) = r theta (cot theta + i),  r = 2 M / (5 eps),
///   f(eps) = (r/M) [ e^{r eps} F(r)/2
///            + sum_{k=1}^{M-1} Re( e^{eps z_k} F(z_k) (1 + i sigma_k) ) ],
///   sigma(theta) = theta + (theta cot theta - 1) cot theta.
pub fn numeric_inverse_laplace<F: Fn(Complex64) -> Complex64>(
    f: F,
    eps: f64,
    rel_tol: f64,
) -> Result<f64> {
    assert!(eps > 0.0, "inverse transform evaluated at eps > 0");
    // returns (value, scale of the largest summand): cancellation against
    // the scale bounds the attainable absolute accuracy in f64
    let talbot = |m: usize| -> Option<(f64, f64)> {
        let r = 2.0 * m as f64 / (5.0 * eps);
        let first = 0.5 * (r * eps).exp() * f(Complex64::new(r, 0.0)).re;
        let mut sum = first;
        let mut scale = first.abs();
        for k in 1..m {
            let theta = k as f64 * PI / m as f64;
            let cot = theta.cos() / theta.sin();
            let z = Complex64::new(r * theta * cot, r * theta);
            let sigma = theta + (theta * cot - 1.0) * cot;
            let term = (z * eps).exp() * f(z) * Complex64::new(1.0, sigma);
            if !term.re.is_finite() {
                return None;
            }
            sum += term.re;
            scale = scale.max(term.re.abs());
        }
        Some((sum * r / m as f64, scale * r / m as f64))
    };
    // f64 roundoff grows like e^{2M/5} along the contour, so the useful node
    // counts sit near M ~ 20-34; step through them and accept the first
    // consecutive pair that agrees
    let mut prev: Option<(f64, f64)> = None;
    for &m in &[14usize, 18, 22, 26, 30, 34, 40] {
        match talbot(m) {
            None => break,
            Some((val, scale)) => {
                if let Some((p, ps)) = prev {
                    let floor = 1e-13 * scale.max(ps);
                    if (val - p).abs() <= rel_tol * val.abs().max(1e-30) + floor {
                        return Ok(val);
                    }
                }
                prev = Some((val, scale));
            }
        }
    }
    Err(QceError::ContourNotConverged { epsilon: eps })
}
