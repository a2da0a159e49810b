//! Canonical partition functions in first-order cluster expansion.
//!
//! The interacting correction to the coefficient of x^l is
//!
//!   Delta_1 z_l(s) = sum_{n=2}^{N-l+1} sigma^n n^{-d/2} z_{l-1}^{(N-n)}
//!                    sum_{n1=1}^{n-1} a_(n1,n-n1)(s),
//!
//! with sigma the exchange sign, z^{(N-n)} the non-interacting coefficients
//! of the smaller system (z_0^{(m)} = delta_{m0}) and a the internal cluster
//! amplitude. The full first-order partition function is
//! Z_1 = sum_l [z_l + Delta_1 z_l(s)] x^l.
//!
//! The fermionization regime re-expands around infinite coupling: fermionic
//! coefficients z~_l = (-1)^{N-l} z_l, fermionic sign (-1)^n and the
//! effective amplitudes a~ of the anti-delta theory.

use crate::clusters::{a_cluster, a_cluster_fermionized, a_cluster_multispecies, ClusterGeometry, MassPair};
use crate::combinatorics::nonint_coefficients;
use crate::error::{QceError, Result};
use crate::model::{Statistics, SystemSpec, ThermalPoint};
use crate::specfun::Accuracy;
use crate::spectral;

/// Which expansion the interacting coefficients belong to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// Expansion around the non-interacting system (small s).
    Direct,
    /// Expansion around the fermionized system (large s); Bose systems only.
    Fermionized,
}

/// Interacting first-order coefficient Delta_1 z_l(s).
pub fn delta_z(
    n: u32,
    d: f64,
    statistics: Statistics,
    regime: Regime,
    l: u32,
    s: f64,
    acc: Accuracy,
) -> Result<f64> {
    if l < 1 || l > n {
        return Err(QceError::InvalidInput(format!("l must lie in 1..=N, got l={l}, N={n}")));
    }
    assert!(s >= 0.0, "thermal coupling must be non-negative");
    // direct regime, spinless fermions: the symmetrized delta amplitude is 0
    if regime == Regime::Direct && statistics == Statistics::Fermi {
        return Ok(0.0);
    }
    // no coupling, no correction: exact zero so the alpha = 0 path is
    // bit-identical to the non-interacting one
    if regime == Regime::Direct && s == 0.0 {
        return Ok(0.0);
    }
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
            let geom = ClusterGeometry::new(n1, nn - n1);
            inner += match regime {
                Regime::Direct => a_cluster(geom, s, statistics, acc)?,
                Regime::Fermionized => a_cluster_fermionized(geom, s, acc)?,
            };
        }
        total += sign.powi(nn as i32) * (nn as f64).powf(-0.5 * d) * z_rest * inner;
    }
    Ok(total)
}

/// Result of a first-order partition-function evaluation. A non-positive
/// value signals first-order breakdown in that parameter regime, not a bug;
/// it is reported through the flag so sweeps can annotate instead of abort.
#[derive(Debug, Clone, Copy)]
pub struct Z1Result {
    pub value: f64,
    pub breakdown: bool,
}

/// Full coefficients z_l + Delta_1 z_l(s) for l = 1..=N.
pub fn z1_coefficients(
    n: u32,
    d: f64,
    statistics: Statistics,
    regime: Regime,
    s: f64,
    acc: Accuracy,
) -> Result<Vec<f64>> {
    let base = nonint_coefficients(n, d, match regime {
        Regime::Direct => statistics,
        Regime::Fermionized => Statistics::Fermi,
    })?;
    (1..=n)
        .map(|l| Ok(base.z_l(l) + delta_z(n, d, statistics, regime, l, s, acc)?))
        .collect()
}

/// Neumaier-compensated evaluation of sum_l c[l-1] x^l from l = N down.
fn poly_eval_compensated(coeffs: &[f64], x: f64) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for l in (1..=coeffs.len()).rev() {
        let term = coeffs[l - 1] * x.powi(l as i32);
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// First-order partition function Z_1 for a single-species system.
pub fn z1_partition(spec: &SystemSpec, tp: &ThermalPoint) -> Result<Z1Result> {
    z1_partition_in_regime(spec, tp, Regime::Direct)
}

/// Z_1 in the chosen regime (direct or fermionized).
pub fn z1_partition_in_regime(
    spec: &SystemSpec,
    tp: &ThermalPoint,
    regime: Regime,
) -> Result<Z1Result> {
    let species = spec.single_species()?;
    let n = species.count;
    let d = spec.effective_dimension()?;
    let veff = spec.effective_volume()?;
    let s = tp.thermal_coupling(spec.alpha_uniform());
    let x = tp.cluster_size(veff, d);
    let acc = Accuracy::default();
    if n == 1 {
        // a single particle has no pair to interact with
        return Ok(Z1Result { value: x, breakdown: x <= 0.0 });
    }
    let coeffs = z1_coefficients(n, d, species.statistics, regime, s, acc)?;
    let value = poly_eval_compensated(&coeffs, x);
    Ok(Z1Result { value, breakdown: value <= 0.0 })
}

/// Non-interacting partition function Z_0 = sum_l z_l x^l.
pub fn z0_partition(n: u32, statistics: Statistics, d: f64, x: f64) -> Result<f64> {
    if n == 0 {
        return Ok(1.0);
    }
    let c = nonint_coefficients(n, d, statistics)?;
    Ok(poly_eval_compensated(&c.z, x))
}

/// First-order interacting correction Delta Z for a multi-species system
/// (within-species corrections plus cross-species inter-cycle clusters with
/// mass-modified amplitudes).
pub fn multispecies_delta_z(spec: &SystemSpec, tp: &ThermalPoint) -> Result<f64> {
    let d = spec.effective_dimension()?;
    let veff = spec.effective_volume()?;
    let acc = Accuracy::default();
    let ns = spec.species.len();
    if ns < 2 {
        return Err(QceError::InvalidInput(
            "multispecies_delta_z requires at least two species".into(),
        ));
    }
    // per-species dimensionless size x_i = V_eff (sqrt(m_i)/lambda_T)^d
    let x_of = |mass: f64| veff * (mass.sqrt() / tp.lambda_t).powf(d);
    let z0 = |i: usize, count: u32| -> Result<f64> {
        z0_partition(count, spec.species[i].statistics, d, x_of(spec.species[i].mass_ratio))
    };
    let mut total = 0.0;

    // within-species corrections times the spectator factors
    for i in 0..ns {
        let sp = spec.species[i];
        if sp.count < 2 {
            continue;
        }
        let s_ii = tp.thermal_coupling(spec.interaction.alpha(i, i));
        let xi = x_of(sp.mass_ratio);
        let mut dz_i = 0.0;
        for l in 1..=sp.count {
            dz_i += delta_z(sp.count, d, sp.statistics, Regime::Direct, l, s_ii, acc)?
                * xi.powi(l as i32);
        }
        let mut spectators = 1.0;
        for j in 0..ns {
            if j != i {
                spectators *= z0(j, spec.species[j].count)?;
            }
        }
        total += dz_i * spectators;
    }

    // cross-species inter-cycle clusters
    for i in 0..ns {
        for j in (i + 1)..ns {
            let (si, sj) = (spec.species[i], spec.species[j]);
            let s_ij = tp.thermal_coupling(spec.interaction.alpha(i, j));
            let mut cross = 0.0;
            for n_i in 1..=si.count {
                for n_j in 1..=sj.count {
                    let mp = MassPair::new(si.mass_ratio, sj.mass_ratio, n_i, n_j);
                    let lam_mod = mp.lambda_mod(tp.beta);
                    let amp = a_cluster_multispecies(&mp, s_ij, acc)?
                        * (veff / lam_mod.powf(d))
                        * mp.n_mod.powf(-0.5 * d);
                    let sign = si.statistics.sign().powi(n_i as i32 - 1)
                        * sj.statistics.sign().powi(n_j as i32 - 1);
                    let mut weight = z0_partition(si.count - n_i, si.statistics, d, x_of(si.mass_ratio))?
                        * z0_partition(sj.count - n_j, sj.statistics, d, x_of(sj.mass_ratio))?;
                    for k in 0..ns {
                        if k != i && k != j {
                            weight *= z0(k, spec.species[k].count)?;
                        }
                    }
                    cross += sign * amp * weight;
                }
            }
            total += cross;
        }
    }
    Ok(total)
}

/// Full first-order multi-species partition function.
pub fn multispecies_z1(spec: &SystemSpec, tp: &ThermalPoint) -> Result<Z1Result> {
    let d = spec.effective_dimension()?;
    let veff = spec.effective_volume()?;
    let mut z = 1.0;
    for (i, sp) in spec.species.iter().enumerate() {
        let _ = i;
        let xi = veff * (sp.mass_ratio.sqrt() / tp.lambda_t).powf(d);
        z *= z0_partition(sp.count, sp.statistics, d, xi)?;
    }
    let value = z + multispecies_delta_z(spec, tp)?;
    Ok(Z1Result { value, breakdown: value <= 0.0 })
}

/// The lowest two many-body levels at a given effective volume.
#[derive(Debug, Clone, Copy)]
pub struct LowestTwo {
    pub e0: f64,
    pub g0: f64,
    pub e1: f64,
    pub g1: f64,
}

/// Supplies the lowest two many-body states as functions of V_eff.
pub trait LowestTwoProvider {
    fn lowest_two(&self, veff: f64) -> Result<LowestTwo>;
}

/// Tabulated provider with linear interpolation in V_eff.
#[derive(Debug, Clone)]
pub struct TabulatedLowestTwo {
    pub veff: Vec<f64>,
    pub rows: Vec<LowestTwo>,
}

impl LowestTwoProvider for TabulatedLowestTwo {
    fn lowest_two(&self, veff: f64) -> Result<LowestTwo> {
        let n = self.veff.len();
        if n < 2 || veff < self.veff[0] || veff > self.veff[n - 1] {
            return Err(QceError::MissingProvider(format!(
                "V_eff = {veff} outside tabulated range"
            )));
        }
        let idx = self.veff.partition_point(|&v| v <= veff).clamp(1, n - 1);
        let (v0, v1) = (self.veff[idx - 1], self.veff[idx]);
        let t = (veff - v0) / (v1 - v0);
        let (a, b) = (self.rows[idx - 1], self.rows[idx]);
        Ok(LowestTwo {
            e0: a.e0 * (1.0 - t) + b.e0 * t,
            g0: a.g0,
            e1: a.e1 * (1.0 - t) + b.e1 * t,
            g1: a.g1,
        })
    }
}

/// How the smooth expansion is matched to the two lowest states.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitScheme {
    /// Remove the smooth weight of the lowest g0 + g1 states from Z_1 and
    /// add their exact Boltzmann terms:
    ///
    ///   Z = g0 e^{-beta E0} + g1 e^{-beta E1} - (g0+g1) e^{-beta E*}
    ///       + beta int_{E*}^inf Nbar(E) e^{-beta E} dE,
    ///
    /// with Nbar(E*) = g0 + g1. Converges to Z_1 at large V_eff to all
    /// polynomial orders and stays positive at small V_eff.
    CountingConsistent,
    /// Literal two-exponential polynomial form
    /// Z = e^{-beta E0} + e^{-beta E1} (sum_l [z_l + Delta z_l] x^l - 1).
    Polynomial,
}

/// Condensation-corrected partition function built from minimal ground-state
/// information.
pub struct SplitAnsatz<'a> {
    pub provider: &'a dyn LowestTwoProvider,
    pub scheme: SplitScheme,
}

impl<'a> SplitAnsatz<'a> {
    pub fn new(provider: &'a dyn LowestTwoProvider) -> Self {
        SplitAnsatz { provider, scheme: SplitScheme::CountingConsistent }
    }

    /// Polynomial weight w_l(s) of the literal two-exponential form:
    /// w_0 = -1 and w_l = z_l + Delta_1 z_l(s) for l >= 1.
    pub fn w(&self, n: u32, d: f64, statistics: Statistics, l: u32, s: f64) -> Result<f64> {
        if l == 0 {
            return Ok(-1.0);
        }
        let base = nonint_coefficients(n, d, statistics)?;
        Ok(base.z_l(l) + delta_z(n, d, statistics, Regime::Direct, l, s, Accuracy::default())?)
    }
}

/// Condensation-corrected partition function.
pub fn split_partition(spec: &SystemSpec, tp: &ThermalPoint, ansatz: &SplitAnsatz) -> Result<f64> {
    let species = spec.single_species()?;
    let n = species.count;
    let d = spec.effective_dimension()?;
    let veff = spec.effective_volume()?;
    let low = ansatz.provider.lowest_two(veff)?;
    let beta = tp.beta;
    match ansatz.scheme {
        SplitScheme::Polynomial => {
            let s = tp.thermal_coupling(spec.alpha_uniform());
            let x = tp.cluster_size(veff, d);
            let mut poly = -1.0;
            for l in 1..=n {
                poly += ansatz.w(n, d, species.statistics, l, s)? * x.powi(l as i32);
            }
            Ok((-beta * low.e0).exp() + (-beta * low.e1).exp() * poly)
        }
        SplitScheme::CountingConsistent => {
            let target = low.g0 + low.g1;
            // E* where the smooth counting function reaches g0 + g1
            let count = |e: f64| spectral::counting_function(spec, e);
            let mut hi = 1.0;
            let mut guard = 0;
            while count(hi)? < target {
                hi *= 2.0;
                guard += 1;
                if guard > 200 {
                    return Err(QceError::InvalidInput(
                        "smooth counting function never reaches g0 + g1".into(),
                    ));
                }
            }
            let mut lo = 0.0;
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if count(mid)? < target {
                    lo = mid;
                } else {
                    hi = mid;
                }
                if hi - lo <= 1e-14 * hi.max(1.0) {
                    break;
                }
            }
            let e_star = 0.5 * (lo + hi);
            // beta int_{E*}^inf Nbar e^{-beta E} dE, w = beta (E - E*)
            let tail = crate::quadrature::integrate_segmented(
                &|w: f64| count(e_star + w / beta).unwrap_or(f64::NAN) * (-w).exp(),
                &[0.0, 1.0, 3.0, 8.0, 20.0, 45.0],
                1e-10,
                800,
            )?;
            Ok(low.g0 * (-beta * low.e0).exp() + low.g1 * (-beta * low.e1).exp()
                - target * (-beta * e_star).exp()
                + (-beta * e_star).exp() * tail)
        }
    }
}
