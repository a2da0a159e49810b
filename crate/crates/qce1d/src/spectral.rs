//! Energy-domain results: inverse-Laplace coefficient functions b_j,
//! counting-function coefficients g_l, the smooth counting function and
//! density of states, and the energy-shift interpolation.
//!
//! The b_j are the closed-form bilateral inverse Laplace transforms
//!
//!   b_j^{(m)}(eps) = eps^{-m/2} Linv[ s^{-m/2-1} a_j(s) ](eps),
//!
//! assembled into
//!
//!   g_l(eps) = sum_{n=2}^{N-l+1} sigma^n n^{-d/2} z_{l-1}^{(N-n)}
//!              sum_{n1} sum_j b_j^{(l d)}(eps),
//!
//! and the smooth counting function
//!
//!   Nbar(E) = sum_l [ z_l / Gamma(ld/2 + 1) + g_l(E/alpha) ]
//!             V_eff^l E^{ld/2} theta(E) / (4 pi)^{ld/2}.
//!
//! Closed forms exist whenever l*d is an integer, which covers the ring
//! (d = 1) and the harmonic trap (d = 2). All b-branch functions use the
//! index parity lambda = (m mod 2)/2.

use crate::combinatorics::{nonint_coefficients, nonint_coefficients_exact};
use crate::error::{QceError, Result};
use crate::model::{Statistics, SystemSpec};
use crate::partition::Regime;
use num::rational::BigRational;
use num::BigInt;
use std::f64::consts::PI;

fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

fn lambda_of(m: i32) -> f64 {
    0.5 * (((m % 2) + 2) % 2) as f64
}

/// Branch function h_lambda: (2/pi) atan(sqrt(eps)) for odd index, 1 for even.
fn h_lambda(lam: f64, eps: f64) -> f64 {
    if eps <= 0.0 {
        0.0
    } else if lam == 0.5 {
        (2.0 / PI) * eps.sqrt().atan()
    } else {
        1.0
    }
}

/// Branch function t_lambda entering b_3.
fn t_lambda(lam: f64, nubar: f64, eps: f64) -> f64 {
    if eps <= 0.0 {
        return 0.0;
    }
    if lam == 0.5 {
        if nubar == 0.0 {
            1.0
        } else {
            (2.0 / PI) * ((1.0 + (1.0 + nubar * nubar) / eps).sqrt() / nubar).atan()
        }
    } else {
        let nv2 = nubar * nubar;
        (2.0 / PI)
            * ((eps / (1.0 + nv2)).sqrt().atan() + (nv2 / (1.0 + eps)).sqrt().atan()
                - nubar.atan())
    }
}

/// b_1: inverse transform of the elementary addend a_1.
pub fn b1(m: i32, nubar: f64, eps: f64) -> f64 {
    if eps <= 0.0 {
        return 0.0;
    }
    let hm = 0.5 * m as f64;
    ((2.0 / PI) * nubar.atan() - 1.0) / gamma(hm + 1.0)
        + 2.0 * nubar * nubar / (PI * (1.0 + nubar * nubar)).sqrt() / (gamma(hm + 0.5) * eps.sqrt())
}

/// b_2: inverse transform of the erfcx addend a_2, by the known recursion.
pub fn b2(m: i32, nubar: f64, eps: f64) -> f64 {
    if eps <= 0.0 || nubar == 0.0 {
        return 0.0;
    }
    assert!(m >= 1, "b2 requires index >= 1, got {m}");
    let hm = 0.5 * m as f64;
    let lam = lambda_of(m);
    let first = -(2.0 * nubar / PI.sqrt()) * (1.0 + 1.0 / eps).powf(hm - 0.5)
        / (gamma(hm + 0.5) * eps.sqrt())
        * h_lambda(lam, eps);
    let mut sum = 0.0;
    for k in 1..=(m / 2) {
        let kf = k as f64;
        sum += gamma(hm - kf + 0.5) / (gamma(hm - kf + 1.0) * gamma(hm + 0.5))
            * (1.0 + 1.0 / eps).powi(k - 1)
            / eps;
    }
    first + (2.0 * nubar / PI) * sum
}

/// For nubar = 0 the closed form of b_3 cancels catastrophically as
/// eps -> 0 (terms grow like eps^{-m/2} while the sum shrinks like
/// sqrt(eps)). The truncated k-sum is the head of a hypergeometric-ratio
/// series whose total is known, so the combination equals the series tail:
///
///   Gamma(m/2+1) b_3^{(m)}(eps)
///     = (pi eps)^{-1/2} sum_{j>=1} Gamma(j+m/2)/Gamma(j+m/2+1/2) u^j,
///   u = eps/(1+eps),
///
/// with positive terms only. Used below the crossover; the closed form is
/// stable at large eps.
fn b3_zero_nubar_series(m: i32, eps: f64) -> f64 {
    let u = eps / (1.0 + eps);
    let hm = 0.5 * m as f64;
    let mut ratio = gamma(1.0 + hm) / gamma(1.5 + hm);
    let mut term = ratio * u;
    let mut sum = term;
    let mut j = 1.0f64;
    while term > 1e-18 * sum {
        ratio *= (j + hm) / (j + hm + 0.5);
        j += 1.0;
        term = ratio * u.powf(j);
        sum += term;
        if j > 400.0 {
            break;
        }
    }
    sum / ((PI * eps).sqrt() * gamma(hm + 1.0))
}

/// b_3: inverse transform of the F_nu addend a_3; valid for index >= -1.
pub fn b3(m: i32, nubar: f64, eps: f64) -> f64 {
    if eps <= 0.0 {
        return 0.0;
    }
    assert!(m >= -1, "b3 requires index >= -1, got {m}");
    if nubar == 0.0 && eps < 2.0 {
        return b3_zero_nubar_series(m, eps);
    }
    let hm = 0.5 * m as f64;
    let lam = lambda_of(m);
    let nv2 = nubar * nubar;
    let w = 1.0 + (1.0 + nv2) / eps;
    let kmax = if m <= 0 { 0 } else { (m + 1) / 2 }; // ceil(m/2) for m >= 0
    let mut sum = 0.0;
    for k in 1..=kmax {
        let kl = k as f64 - lam;
        sum += gamma(kl)
            * w.powf(lam - k as f64)
            * (0.5 * PI.sqrt() * b2((2.0 * kl) as i32, nubar, eps)
                + (1.0 + nv2).sqrt() / (gamma(kl + 0.5) * eps.sqrt()));
    }
    w.powf(hm) / gamma(hm + 1.0) * (t_lambda(lam, nubar, eps) - sum / PI.sqrt())
}

/// b_4 = -2 nubar^2 eps^{-1} b_3 at index m - 2; valid for index >= 1.
pub fn b4(m: i32, nubar: f64, eps: f64) -> f64 {
    if eps <= 0.0 || nubar == 0.0 {
        return 0.0;
    }
    assert!(m >= 1, "b4 requires index >= 1, got {m}");
    -2.0 * nubar * nubar / eps * b3(m - 2, nubar, eps)
}

/// Sum of the four b_j at index m (direct regime).
fn b_sum(m: i32, nubar: f64, eps: f64) -> f64 {
    b1(m, nubar, eps) + b2(m, nubar, eps) + b3(m, nubar, eps) + b4(m, nubar, eps)
}

/// Fermionized b~_1 (from a~_1); the other three follow by sign flips.
fn b1_ferm(m: i32, nubar: f64, eps: f64) -> f64 {
    if eps <= 0.0 {
        return 0.0;
    }
    let hm = 0.5 * m as f64;
    let nv2 = nubar * nubar;
    -(2.0 / PI) * nubar / (1.0 + nv2) / gamma(hm + 1.0)
        - 2.0 * nv2 / (PI * (1.0 + nv2)).sqrt() / (gamma(hm + 0.5) * eps.sqrt())
}

fn b_sum_ferm(m: i32, nubar: f64, eps: f64) -> f64 {
    b1_ferm(m, nubar, eps) - b2(m, nubar, eps) + b3(m, nubar, eps) - b4(m, nubar, eps)
}

fn integer_index(l: u32, d: f64) -> Result<i32> {
    let m = l as f64 * d;
    let rounded = m.round();
    if (m - rounded).abs() > 1e-9 {
        return Err(QceError::InvalidInput(format!(
            "spectral closed forms require l*d integer; got l = {l}, d = {d}"
        )));
    }
    Ok(rounded as i32)
}

/// Counting-function coefficient g_l^{(N)}(eps) for effective dimension d.
pub fn g_l(n: u32, d: f64, l: u32, statistics: Statistics, regime: Regime, eps: f64) -> Result<f64> {
    if l < 1 || l > n {
        return Err(QceError::InvalidInput(format!("l must lie in 1..=N, got l={l}, N={n}")));
    }
    if regime == Regime::Direct && statistics == Statistics::Fermi {
        return Ok(0.0);
    }
    if eps <= 0.0 || l == n {
        // g_N = 0: no interacting term at leading order
        return Ok(0.0);
    }
    let m = integer_index(l, d)?;
    let coeff_stats = match regime {
        Regime::Direct => statistics,
        Regime::Fermionized => Statistics::Fermi,
    };
    let sign = match regime {
        Regime::Direct => statistics.sign(),
        Regime::Fermionized => -1.0,
    };
    let mut total = 0.0;
    for nn in 2..=(n - l + 1) {
        let rest = n - nn;
        let z_rest = if rest == 0 {
            if l == 1 {
                1.0
            } else {
                0.0
            }
        } else {
            nonint_coefficients(rest, d, coeff_stats)?.z_l(l - 1)
        };
        if z_rest == 0.0 {
            continue;
        }
        let mut inner = 0.0;
        for n1 in 1..nn {
            let geom = crate::clusters::ClusterGeometry::new(n1, nn - n1);
            inner += match regime {
                Regime::Direct => b_sum(m, geom.nubar, eps),
                Regime::Fermionized => b_sum_ferm(m, geom.nubar, eps),
            };
        }
        total += sign.powi(nn as i32) * (nn as f64).powf(-0.5 * d) * z_rest * inner;
    }
    Ok(total)
}

/// Smooth level counting function Nbar(E) in the chosen regime.
pub fn counting_function_in_regime(spec: &SystemSpec, e: f64, regime: Regime) -> Result<f64> {
    let species = spec.single_species()?;
    let n = species.count;
    let d = spec.effective_dimension()?;
    let veff = spec.effective_volume()?;
    let alpha = spec.alpha_uniform();
    if e <= 0.0 {
        return Ok(0.0);
    }
    let coeff_stats = match regime {
        Regime::Direct => species.statistics,
        Regime::Fermionized => Statistics::Fermi,
    };
    let base = nonint_coefficients(n, d, coeff_stats)?;
    let interacting = alpha > 0.0;
    let mut total = 0.0;
    for l in 1..=n {
        let m = l as f64 * d;
        let mut coeff = base.z_l(l) / gamma(0.5 * m + 1.0);
        if interacting {
            coeff += g_l(n, d, l, species.statistics, regime, e / alpha)?;
        }
        total += coeff * veff.powi(l as i32) * e.powf(0.5 * m) / (4.0 * PI).powf(0.5 * m);
    }
    Ok(total)
}

/// Smooth level counting function Nbar(E); falls back to the closed
/// non-interacting form when alpha = 0.
pub fn counting_function(spec: &SystemSpec, e: f64) -> Result<f64> {
    counting_function_in_regime(spec, e, Regime::Direct)
}

/// Derivative of g_l by Richardson-extrapolated central differences
/// (step h = eps * 1e-4).
fn g_l_derivative(n: u32, d: f64, l: u32, statistics: Statistics, regime: Regime, eps: f64) -> Result<f64> {
    let h = eps * 1e-4;
    let diff = |hh: f64| -> Result<f64> {
        Ok((g_l(n, d, l, statistics, regime, eps + hh)? - g_l(n, d, l, statistics, regime, eps - hh)?)
            / (2.0 * hh))
    };
    let d1 = diff(h)?;
    let d2 = diff(0.5 * h)?;
    Ok((4.0 * d2 - d1) / 3.0)
}

/// Smooth many-body density of states rho(E) = d Nbar / dE.
pub fn dos(spec: &SystemSpec, e: f64) -> Result<f64> {
    dos_in_regime(spec, e, Regime::Direct)
}

pub fn dos_in_regime(spec: &SystemSpec, e: f64, regime: Regime) -> Result<f64> {
    let species = spec.single_species()?;
    let n = species.count;
    let d = spec.effective_dimension()?;
    let veff = spec.effective_volume()?;
    let alpha = spec.alpha_uniform();
    if e <= 0.0 {
        return Ok(0.0);
    }
    let coeff_stats = match regime {
        Regime::Direct => species.statistics,
        Regime::Fermionized => Statistics::Fermi,
    };
    let base = nonint_coefficients(n, d, coeff_stats)?;
    let interacting = alpha > 0.0;
    let mut total = 0.0;
    for l in 1..=n {
        let m = l as f64 * d;
        // non-interacting part: z_l E^{m/2-1} / Gamma(m/2)
        let mut term = base.z_l(l) * e.powf(0.5 * m - 1.0) / gamma(0.5 * m);
        if interacting {
            // d/dE [ g_l(E/alpha) E^{m/2} ]
            //   = E^{m/2-1} [ (m/2) g_l(eps) + eps g_l'(eps) ],  eps = E/alpha
            let eps = e / alpha;
            let g = g_l(n, d, l, species.statistics, regime, eps)?;
            let gp = g_l_derivative(n, d, l, species.statistics, regime, eps)?;
            term += e.powf(0.5 * m - 1.0) * (0.5 * m * g + eps * gp);
        }
        total += term * veff.powi(l as i32) / (4.0 * PI).powf(0.5 * m);
    }
    Ok(total)
}

/// Which counting function the energy shift is applied to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShiftBase {
    /// Shift the non-interacting Bose counting function (default).
    NonInteracting,
    /// Shift the full first-order interacting counting function.
    Qce1,
}

/// Energy-shift interpolation between the free and fermionized spectra.
///
/// The full shift is fixed by matching the subleading coefficient of the
/// shifted counting function to the free-fermion one:
///
///   N (d/2) a~ c_N^{1 + (2/d-1)/N} = -2 c_{N-1},
///   c_l = z_l / (Gamma(ld/2+1) (4 pi)^{ld/2}),
///
/// and the finite-coupling fraction is
///
///   chi(eps) = -Gamma((N-1)d/2 + 1) / (2 z_{N-1}) * g_{N-1}(eps),
///
/// so Delta E_alpha(E) = chi(E/alpha) * Delta E_inf(E). The shift is applied
/// explicitly: Nbar_alpha(E) = Nbar_base(E - Delta E_alpha(E)).
#[derive(Debug, Clone, Copy)]
pub struct ShiftModel {
    pub n: u32,
    pub d: f64,
    /// |a~| of the matching equation (the full-shift scale in Etilde units).
    pub a_tilde: f64,
    pub base: ShiftBase,
}

/// Builds the shift model for N bosons in effective dimension d.
pub fn shift_model(n: u32, d: f64) -> Result<ShiftModel> {
    if n < 2 {
        return Err(QceError::InvalidInput("shift model requires N >= 2".into()));
    }
    let z = nonint_coefficients(n, d, Statistics::Bose)?;
    let z_nm1 = z.z_l(n - 1);
    if z_nm1 == 0.0 {
        return Err(QceError::InvalidInput("z_{N-1} vanished; cannot match the shift".into()));
    }
    let c = |l: u32| -> f64 {
        let m = l as f64 * d;
        z.z_l(l) / (gamma(0.5 * m + 1.0) * (4.0 * PI).powf(0.5 * m))
    };
    let c_n = c(n);
    let c_nm1 = c(n - 1);
    let expo = 1.0 + (2.0 / d - 1.0) / n as f64;
    let a_tilde = 4.0 * c_nm1 / (n as f64 * d * c_n.powf(expo));
    Ok(ShiftModel { n, d, a_tilde, base: ShiftBase::NonInteracting })
}

impl ShiftModel {
    /// The interpolating fraction chi(eps) in [0, 1]: 1 at eps -> 0
    /// (fermionization), 0 at eps -> infinity (free bosons).
    pub fn chi(&self, eps: f64) -> Result<f64> {
        if eps <= 0.0 {
            return Ok(1.0);
        }
        let z = nonint_coefficients(self.n, self.d, Statistics::Bose)?;
        let m = (self.n - 1) as f64 * self.d;
        let g = g_l(self.n, self.d, self.n - 1, Statistics::Bose, Regime::Direct, eps)?;
        Ok(-gamma(0.5 * m + 1.0) / (2.0 * z.z_l(self.n - 1)) * g)
    }

    /// Full (infinite-coupling) shift at energy E for the given system.
    pub fn delta_e_inf(&self, spec: &SystemSpec, e: f64) -> Result<f64> {
        let veff = spec.effective_volume()?;
        let expo = (2.0 / self.d - 1.0) / self.n as f64;
        let free = SystemSpec { interaction: crate::model::Interaction::Uniform(0.0), ..spec.clone() };
        let nbar = counting_function(&free, e)?;
        Ok(self.a_tilde * nbar.powf(expo) * veff.powf(-2.0 / self.d))
    }

    /// Shifted counting function Nbar_alpha(E) = Nbar_base(E - chi * DeltaE_inf).
    pub fn shifted_counting(&self, spec: &SystemSpec, alpha: f64, e: f64) -> Result<f64> {
        if e <= 0.0 {
            return Ok(0.0);
        }
        let chi = if alpha.is_infinite() { 1.0 } else { self.chi(e / alpha)? };
        let shift = chi * self.delta_e_inf(spec, e)?;
        let shifted_e = e - shift;
        match self.base {
            ShiftBase::NonInteracting => {
                let free =
                    SystemSpec { interaction: crate::model::Interaction::Uniform(0.0), ..spec.clone() };
                counting_function(&free, shifted_e)
            }
            ShiftBase::Qce1 => counting_function(spec, shifted_e),
        }
    }
}

/// Exact rigid fermionization shift for the harmonic trap (d = 2), in units
/// of hbar omega: Delta E_inf = 2 z_{N-1} / z_N = N(N-1)/2, evaluated in
/// exact rational arithmetic.
pub fn harmonic_rigid_shift_exact(n: u32) -> Result<BigRational> {
    if n < 2 {
        return Err(QceError::InvalidInput("rigid shift requires N >= 2".into()));
    }
    let z = nonint_coefficients_exact(n, 2, Statistics::Bose)?;
    let z_nm1 = z[(n - 2) as usize]
        .as_rational()
        .ok_or_else(|| QceError::InvalidInput("z_{N-1} not rational at d = 2".into()))?;
    let z_n = z[(n - 1) as usize]
        .as_rational()
        .ok_or_else(|| QceError::InvalidInput("z_N not rational at d = 2".into()))?;
    Ok(BigRational::from(BigInt::from(2)) * z_nm1 / z_n)
}
