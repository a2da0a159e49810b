//! Brute-force cluster amplitude: direct nested quadrature of the raw
//! three-dimensional integral
//!
//!   a(s) = -(sqrt(2 s)/(4 pi)) int_0^inf dr int_-inf^inf dz int_0^inf du
//!          exp[ -z^2/8 - sqrt(s/2) u - (|nubar z + r| + |r| + u)^2 / 8 ],
//!
//! returned in the dimensionless convention (the V_eff lambda_T^{-d} n^{-d/2}
//! prefactor stripped). This path shares no formula code with the closed-form
//! amplitude in `clusters`; agreement between the two validates the whole
//! reduction chain.

use crate::clusters::ClusterGeometry;
use crate::error::{QceError, Result};
use crate::quadrature::integrate_segmented;

/// Relative accuracy budget per axis. The outer tolerance is looser than the
/// final target because errors add in quadrature across nesting levels.
const INNER_TOL: f64 = 2e-11;
const MIDDLE_TOL: f64 = 5e-11;
const OUTER_TOL: f64 = 1e-10;

/// Breakpoint ladder covering a decaying exponential of the given scale.
fn decade_breakpoints(scale: f64, hard_cut: f64) -> Vec<f64> {
    let mut pts = vec![0.0];
    let mut p = scale;
    while p < hard_cut {
        pts.push(p);
        p *= 8.0;
    }
    pts.push(hard_cut);
    pts
}

/// Raw-integral amplitude for cluster geometry (n1, n2) at thermal coupling s.
///
/// Relative error <= 1e-8 on the tested domain (n <= 12, s in [1e-3, 1e3]);
/// nested adaptive Gauss-Kronrod with scale-aware initial subdivisions.
pub fn amplitude_quadrature(geom: ClusterGeometry, s: f64) -> Result<f64> {
    if geom.n > 12 {
        return Err(QceError::InvalidInput(format!(
            "amplitude oracle supports n <= 12, got n = {}",
            geom.n
        )));
    }
    assert!(s >= 0.0);
    if s == 0.0 {
        return Ok(0.0);
    }
    let nv = geom.nubar;
    let su = (0.5 * s).sqrt();
    // u decays on scale 1/su from the linear term and within ~8/c from the
    // Gaussian; cover both with a breakpoint ladder
    let u_scale = (1.0 / su).min(1.0);
    // the Gaussian factor alone kills the integrand by u ~ 76; the linear
    // term alone by u ~ 760/su
    let u_cut = 76.0f64.min(760.0 / su);

    let inner_u = |c: f64| -> f64 {
        // int_0^inf du exp(-su*u - (c+u)^2/8)
        let f = |u: f64| (-su * u - 0.125 * (c + u) * (c + u)).exp();
        let pts = decade_breakpoints(u_scale.min(1.0), u_cut);
        integrate_segmented(&f, &pts, INNER_TOL, 600).unwrap_or(0.0)
    };
    let inner_r = |z: f64| -> f64 {
        // kink of |nubar z + r| at r = -nubar z (only reachable for z < 0)
        let f = |r: f64| inner_u((nv * z + r).abs() + r);
        let mut pts = vec![0.0];
        let kink = -nv * z;
        if kink > 0.0 && kink < 90.0 {
            pts.push(kink);
        }
        pts.extend_from_slice(&[95.0]);
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        integrate_segmented(&f, &pts, MIDDLE_TOL, 600).unwrap_or(0.0)
    };
    let outer = |z: f64| (-0.125 * z * z).exp() * inner_r(z);
    let pts: Vec<f64> = vec![-90.0, -30.0, -10.0, -3.0, 0.0, 3.0, 10.0, 30.0, 90.0];
    let triple = integrate_segmented(&outer, &pts, OUTER_TOL, 2000)?;
    Ok(-(2.0 * s).sqrt() / (4.0 * std::f64::consts::PI) * triple)
}
