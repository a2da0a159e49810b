//! Thermodynamic observables: mechanical equation of state, isothermal
//! compressibility, and the grand-canonical virial baseline.
//!
//! The canonical pressure follows from the polynomial form of Z_1,
//!
//!   P = (k_B T / V_eff) * sum_l l c_l x^l / sum_l c_l x^l,
//!   c_l = z_l + Delta z_l(beta alpha),
//!
//! exactly; the condensation-corrected variant differentiates ln Z of the
//! split ansatz numerically in V_eff. Temperatures are expressed through
//! beta, so k_B T = 1/beta in the working units.

use crate::error::{QceError, Result};
use crate::model::{Statistics, SystemSpec, ThermalPoint};
use crate::partition::{self, Regime, SplitAnsatz};
use crate::specfun::Accuracy;

/// One point of an equation-of-state sweep.
#[derive(Debug, Clone, Copy)]
pub struct EosPoint {
    pub veff: f64,
    pub beta: f64,
    pub pressure: f64,
    pub compressibility: Option<f64>,
    /// Split ansatz was used for this point.
    pub split: bool,
    /// First-order breakdown (Z_1 <= 0) was detected nearby.
    pub breakdown: bool,
}

fn with_volume(spec: &SystemSpec, veff: f64) -> SystemSpec {
    let mut s = spec.clone();
    s.confinement = crate::model::Confinement::ring(veff);
    s
}

/// ln Z as a function of V_eff, on either the plain first-order or the
/// split-corrected path. The confinement is mapped through (d, V_eff), so
/// volume derivatives treat V_eff as the only knob.
fn ln_z(spec: &SystemSpec, tp: &ThermalPoint, veff: f64, split: Option<&SplitAnsatz>) -> Result<f64> {
    let d = spec.effective_dimension()?;
    if (d - 1.0).abs() > 1e-12 && split.is_some() {
        return Err(QceError::InvalidInput(
            "split-ansatz pressure is implemented for d = 1 (ring) systems".into(),
        ));
    }
    match split {
        Some(ansatz) => {
            let s = with_volume(spec, veff);
            let z = partition::split_partition(&s, tp, ansatz)?;
            if z <= 0.0 {
                return Err(QceError::QceBreakdown {
                    z,
                    beta: tp.beta,
                    veff,
                    n: spec.total_count(),
                });
            }
            Ok(z.ln())
        }
        None => {
            let species = spec.single_species()?;
            let n = species.count;
            let s = tp.thermal_coupling(spec.alpha_uniform());
            let x = tp.cluster_size(veff, d);
            let coeffs = partition::z1_coefficients(
                n,
                d,
                species.statistics,
                Regime::Direct,
                s,
                Accuracy::default(),
            )?;
            let z: f64 = (1..=n).map(|l| coeffs[(l - 1) as usize] * x.powi(l as i32)).sum();
            if z <= 0.0 {
                return Err(QceError::QceBreakdown { z, beta: tp.beta, veff, n });
            }
            Ok(z.ln())
        }
    }
}

/// Canonical pressure at the system's own effective volume.
///
/// Without the split ansatz this is the exact polynomial ratio; with it,
/// P = k_B T d(ln Z)/dV_eff by central differences on the split form.
pub fn pressure(spec: &SystemSpec, tp: &ThermalPoint, split: Option<&SplitAnsatz>) -> Result<f64> {
    let veff = spec.effective_volume()?;
    let kt = 1.0 / tp.beta;
    match split {
        None => {
            let species = spec.single_species()?;
            let n = species.count;
            let d = spec.effective_dimension()?;
            let s = tp.thermal_coupling(spec.alpha_uniform());
            let x = tp.cluster_size(veff, d);
            let coeffs = partition::z1_coefficients(
                n,
                d,
                species.statistics,
                Regime::Direct,
                s,
                Accuracy::default(),
            )?;
            let mut num = 0.0;
            let mut den = 0.0;
            for l in (1..=n).rev() {
                let t = coeffs[(l - 1) as usize] * x.powi(l as i32);
                num += l as f64 * t;
                den += t;
            }
            if den <= 0.0 {
                return Err(QceError::QceBreakdown { z: den, beta: tp.beta, veff, n });
            }
            Ok(kt / veff * num / den)
        }
        Some(_) => {
            let h = 5e-6 * veff;
            let f = |v: f64| ln_z(spec, tp, v, split);
            let d1 = (f(veff + h)? - f(veff - h)?) / (2.0 * h);
            let d2 = (f(veff + 0.5 * h)? - f(veff - 0.5 * h)?) / h;
            Ok(kt * (4.0 * d2 - d1) / 3.0)
        }
    }
}

/// Isothermal compressibility kappa_T = -V_eff^{-1} (dV_eff/dP) at fixed
/// T and N, by Richardson-extrapolated central differences of the pressure
/// with relative step 1e-5.
pub fn compressibility(spec: &SystemSpec, tp: &ThermalPoint, split: Option<&SplitAnsatz>) -> Result<f64> {
    let veff = spec.effective_volume()?;
    let p_at = |v: f64| -> Result<f64> { pressure(&with_volume_like(spec, v), tp, split) };
    let h = 1e-5 * veff;
    let d1 = (p_at(veff + h)? - p_at(veff - h)?) / (2.0 * h);
    let d2 = (p_at(veff + 0.5 * h)? - p_at(veff - 0.5 * h)?) / h;
    let dpdv = (4.0 * d2 - d1) / 3.0;
    if dpdv >= 0.0 {
        return Err(QceError::NonMonotonePressure);
    }
    Ok(-1.0 / (veff * dpdv))
}

/// Rebuilds the spec at a different effective volume while preserving the
/// confinement family (ring length or harmonic frequency).
fn with_volume_like(spec: &SystemSpec, veff: f64) -> SystemSpec {
    use crate::model::{Confinement, PotentialShape};
    let mut s = spec.clone();
    s.confinement = match &spec.confinement.shape {
        PotentialShape::Ring { .. } => Confinement::ring(veff),
        PotentialShape::Harmonic { .. } => {
            // V_eff = 4 pi / (hbar omega)
            Confinement::harmonic(4.0 * std::f64::consts::PI / veff)
        }
        PotentialShape::Sampled { q, v } => {
            // rescale the coordinate samples: for a homogeneous potential,
            // V(q) -> V(q/c) multiplies V_eff by c without changing d
            let current = crate::model::effective_volume(&spec.confinement)
                .expect("sampled volume must be computable to rescale it");
            let c = veff / current;
            crate::model::Confinement {
                shape: PotentialShape::Sampled {
                    q: q.iter().map(|&x| c * x).collect(),
                    v: v.clone(),
                },
                ..spec.confinement.clone()
            }
        }
        PotentialShape::Analytic { v } => {
            let current = crate::model::effective_volume(&spec.confinement)
                .expect("analytic volume must be computable to rescale it");
            let c = veff / current;
            let inner = v.clone();
            crate::model::Confinement {
                shape: PotentialShape::Analytic {
                    v: std::sync::Arc::new(move |x: f64| inner(x / c)),
                },
                ..spec.confinement.clone()
            }
        }
    };
    s
}

/// Grand-canonical virial pressure of the ideal quantum gas in effective
/// dimension d, truncated at the given order in the dimensionless density
/// y = N lambda_T^d / V_eff.
///
/// This is the failure-mode baseline: it is intentionally evaluated from the
/// ideal gas only, whatever the spec's interaction strength says.
pub fn virial_pressure(spec: &SystemSpec, tp: &ThermalPoint, order: u32) -> Result<f64> {
    if order == 0 || order > 8 {
        return Err(QceError::InvalidInput(format!(
            "virial order must lie in 1..=8, got {order}"
        )));
    }
    let species = spec.single_species()?;
    let d = spec.effective_dimension()?;
    let veff = spec.effective_volume()?;
    let coeffs = virial_coefficients(d, species.statistics, order);
    let y = species.count as f64 * tp.lambda_t.powf(d) / veff;
    let kt = 1.0 / tp.beta;
    let mut p_over_class = 0.0;
    for (n, a) in coeffs.iter().enumerate() {
        p_over_class += a * y.powi(n as i32);
    }
    Ok(kt * species.count as f64 / veff * p_over_class)
}

/// Virial coefficients a_n of P V/(N k_B T) = sum_{n>=1} a_n y^{n-1} for the
/// ideal quantum gas: cluster integrals b_j = (+-1)^{j+1} j^{-(1+d/2)},
/// fugacity series inverted order by order.
pub fn virial_coefficients(d: f64, statistics: Statistics, order: u32) -> Vec<f64> {
    let m = order as usize;
    // b[j] for j = 1..=m
    let b: Vec<f64> = (1..=m)
        .map(|j| statistics.sign().powi(j as i32 + 1) * (j as f64).powf(-(1.0 + 0.5 * d)))
        .collect();
    // y(zeta) = sum_j j b_j zeta^j; invert to zeta(y) = sum c_k y^k
    let mut ycoef = vec![0.0; m + 1];
    for j in 1..=m {
        ycoef[j] = j as f64 * b[j - 1];
    }
    let mut zeta = vec![0.0; m + 1]; // zeta(y) power series
    zeta[1] = 1.0 / ycoef[1];
    for k in 2..=m {
        // impose [y^k] of y(zeta(y)) = 0
        let mut acc = 0.0;
        for j in 2..=k {
            acc += ycoef[j] * power_series_coeff(&zeta, j, k);
        }
        zeta[k] = -acc / ycoef[1];
    }
    // P lambda^d / kT = sum_j b_j zeta^j, composed with zeta(y)
    let mut p = vec![0.0; m + 1];
    for j in 1..=m {
        for k in j..=m {
            p[k] += b[j - 1] * power_series_coeff(&zeta, j, k);
        }
    }
    // a_n = [y^n] P / y in the classical normalization: P/(y kT/lambda^d)
    (1..=m).map(|n| p[n]).collect()
}

/// Coefficient of y^k in (sum_i s_i y^i)^j for a series with s_0 = 0.
fn power_series_coeff(s: &[f64], j: usize, k: usize) -> f64 {
    // repeated convolution; orders involved are tiny (<= 8)
    let mut cur = vec![0.0; k + 1];
    cur[0] = 1.0;
    for _ in 0..j {
        let mut next = vec![0.0; k + 1];
        for a in 0..=k {
            if cur[a] == 0.0 {
                continue;
            }
            for b in 1..=(k - a).min(s.len() - 1) {
                next[a + b] += cur[a] * s[b];
            }
        }
        cur = next;
    }
    cur[k]
}
