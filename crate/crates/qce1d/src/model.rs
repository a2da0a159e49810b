//! System description and derived scale quantities.
//!
//! Units fix hbar^2/2m = 1 for the reference mass throughout, so the thermal
//! wavelength is lambda_T = sqrt(4 pi beta) and energies carry units of
//! inverse length squared. A homogeneous confinement of degree mu in D
//! dimensions maps onto free-gas formulas through the effective dimension
//! d = D(1 + 2/mu) and the effective volume
//!
//!   V_eff = (2 pi hbar^2 / (m e0))^{D/mu} * int d^D q exp(-V(q)/e0),
//!
//! which is independent of the arbitrary reference energy e0. The prefactor
//! is normalized so that the single-particle partition function is exactly
//! x = V_eff / lambda_T^d in the smooth (high-temperature) limit, e.g.
//! 1/(beta hbar omega) for the harmonic trap and L/lambda_T on a ring.

use crate::error::{QceError, Result};
use crate::quadrature;

/// Exchange statistics of a particle species.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Statistics {
    Bose,
    Fermi,
}

impl Statistics {
    /// The sign (+-1) entering coefficient formulas as (+-1)^k.
    pub fn sign(self) -> f64 {
        match self {
            Statistics::Bose => 1.0,
            Statistics::Fermi => -1.0,
        }
    }
}

/// Degree of homogeneity of the confining potential.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Homogeneity {
    /// V(w q) = w^mu V(q) with mu > 0.
    Degree(f64),
    /// No external potential (mu -> infinity); volume is the physical one.
    Unconfined,
}

/// Shape of the confining potential.
#[derive(Clone)]
pub enum PotentialShape {
    /// V(q) = (hbar omega / 2)^2 q^2 in the working units; level spacing
    /// hbar omega.
    Harmonic { hbar_omega: f64 },
    /// Flat ring (periodic box) of the given length.
    Ring { length: f64 },
    /// User-supplied sampled 1D potential, integrated by quadrature.
    /// Samples must cover the confining region; values are interpolated
    /// linearly between nodes, so the effective volume carries the
    /// interpolation error of the grid.
    Sampled { q: Vec<f64>, v: Vec<f64> },
    /// User-supplied exact potential function, integrated by adaptive
    /// quadrature to relative tolerance 1e-12.
    Analytic { v: std::sync::Arc<dyn Fn(f64) -> f64 + Send + Sync> },
}

impl std::fmt::Debug for PotentialShape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PotentialShape::Harmonic { hbar_omega } => {
                write!(f, "Harmonic {{ hbar_omega: {hbar_omega} }}")
            }
            PotentialShape::Ring { length } => write!(f, "Ring {{ length: {length} }}"),
            PotentialShape::Sampled { q, .. } => write!(f, "Sampled {{ {} nodes }}", q.len()),
            PotentialShape::Analytic { .. } => write!(f, "Analytic {{ .. }}"),
        }
    }
}

/// Physical confinement: dimension, homogeneity, shape, and the arbitrary
/// reference energy used inside the effective-volume integral.
#[derive(Debug, Clone)]
pub struct Confinement {
    pub dimension: u32,
    pub homogeneity: Homogeneity,
    pub shape: PotentialShape,
    pub reference_energy: f64,
}

impl Confinement {
    pub fn harmonic(hbar_omega: f64) -> Self {
        assert!(hbar_omega > 0.0, "hbar omega must be positive");
        Confinement {
            dimension: 1,
            homogeneity: Homogeneity::Degree(2.0),
            shape: PotentialShape::Harmonic { hbar_omega },
            reference_energy: 1.0,
        }
    }

    pub fn ring(length: f64) -> Self {
        assert!(length > 0.0, "ring length must be positive");
        Confinement {
            dimension: 1,
            homogeneity: Homogeneity::Unconfined,
            shape: PotentialShape::Ring { length },
            reference_energy: 1.0,
        }
    }

    pub fn analytic<F: Fn(f64) -> f64 + Send + Sync + 'static>(
        v: F,
        mu: f64,
        reference_energy: f64,
    ) -> Self {
        assert!(mu > 0.0, "homogeneity degree must be positive");
        assert!(reference_energy > 0.0, "reference energy must be positive");
        Confinement {
            dimension: 1,
            homogeneity: Homogeneity::Degree(mu),
            shape: PotentialShape::Analytic { v: std::sync::Arc::new(v) },
            reference_energy,
        }
    }

    pub fn sampled(q: Vec<f64>, v: Vec<f64>, mu: f64, reference_energy: f64) -> Self {
        assert_eq!(q.len(), v.len(), "sample vectors must have equal length");
        assert!(q.len() >= 2, "need at least two samples");
        assert!(mu > 0.0, "homogeneity degree must be positive");
        assert!(reference_energy > 0.0, "reference energy must be positive");
        Confinement {
            dimension: 1,
            homogeneity: Homogeneity::Degree(mu),
            shape: PotentialShape::Sampled { q, v },
            reference_energy,
        }
    }
}

/// Effective dimension d = D(1 + 2/mu); the unconfined case gives d = D.
pub fn effective_dimension(c: &Confinement) -> Result<f64> {
    let d = c.dimension as f64;
    match c.homogeneity {
        Homogeneity::Unconfined => Ok(d),
        Homogeneity::Degree(mu) if mu > 0.0 => Ok(d * (1.0 + 2.0 / mu)),
        Homogeneity::Degree(mu) => Err(QceError::InvalidInput(format!(
            "homogeneity degree must be positive, got {mu}"
        ))),
    }
}

/// Effective volume of the confinement (units: length^D).
///
/// Harmonic and ring shapes use closed forms; sampled potentials go through
/// adaptive quadrature of exp(-V/e0) at relative tolerance 1e-10.
pub fn effective_volume(c: &Confinement) -> Result<f64> {
    match &c.shape {
        PotentialShape::Ring { length } => Ok(*length),
        PotentialShape::Harmonic { hbar_omega } => {
            // (4 pi / e0)^{1/2} * sqrt(pi e0 / k) with k = (hbar omega / 2)^2
            Ok(4.0 * std::f64::consts::PI / hbar_omega)
        }
        PotentialShape::Analytic { v } => {
            if matches!(c.homogeneity, Homogeneity::Unconfined) {
                return Err(QceError::InvalidInput(
                    "analytic potential requires a finite homogeneity degree".into(),
                ));
            }
            let mu = match c.homogeneity {
                Homogeneity::Degree(m) => m,
                Homogeneity::Unconfined => unreachable!(),
            };
            let e0 = c.reference_energy;
            // expand the domain until the Boltzmann factor is negligible at
            // both edges
            let mut edge = 1.0;
            let mut guard = 0;
            while v(edge) < 60.0 * e0 || v(-edge) < 60.0 * e0 {
                edge *= 2.0;
                guard += 1;
                if guard > 200 {
                    return Err(QceError::DivergentPotential(
                        "potential does not grow at large |q|".into(),
                    ));
                }
            }
            let f = |x: f64| (-v(x) / e0).exp();
            let pts = [
                -edge,
                -0.5 * edge,
                -0.25 * edge,
                -0.125 * edge,
                0.0,
                0.125 * edge,
                0.25 * edge,
                0.5 * edge,
                edge,
            ];
            let integral = quadrature::integrate_segmented(&f, &pts, 1e-12, 4000)?;
            let d_over_mu = c.dimension as f64 / mu;
            Ok((4.0 * std::f64::consts::PI / e0).powf(d_over_mu) * integral)
        }
        PotentialShape::Sampled { q, v } => {
            let mu = match c.homogeneity {
                Homogeneity::Degree(m) => m,
                Homogeneity::Unconfined => {
                    return Err(QceError::InvalidInput(
                        "sampled potential requires a finite homogeneity degree".into(),
                    ))
                }
            };
            let e0 = c.reference_energy;
            let interp = |x: f64| -> f64 {
                // linear interpolation; clamp to the end values outside range
                let n = q.len();
                if x <= q[0] {
                    return v[0];
                }
                if x >= q[n - 1] {
                    return v[n - 1];
                }
                let idx = q.partition_point(|&p| p <= x).min(n - 1);
                let (x0, x1) = (q[idx - 1], q[idx]);
                let t = (x - x0) / (x1 - x0);
                v[idx - 1] * (1.0 - t) + v[idx] * t
            };
            let edge = v[0].min(*v.last().unwrap());
            if edge / e0 < 25.0 {
                return Err(QceError::DivergentPotential(format!(
                    "potential at sample edges ({edge:.3e}) too small relative to e0 = {e0:.3e} \
                     to bound the Boltzmann tail"
                )));
            }
            let f = |x: f64| (-interp(x) / e0).exp();
            // the interpolant is only C0: pre-split at every sample node so
            // each panel is smooth
            let integral = quadrature::integrate_segmented(&f, q, 1e-10, 4 * q.len())?;
            let d_over_mu = c.dimension as f64 / mu;
            Ok((4.0 * std::f64::consts::PI / e0).powf(d_over_mu) * integral)
        }
    }
}

/// One particle species: count, statistics, mass relative to the reference.
#[derive(Debug, Clone, Copy)]
pub struct Species {
    pub count: u32,
    pub statistics: Statistics,
    pub mass_ratio: f64,
}

/// Pairwise interaction strengths alpha_ij (energy units).
#[derive(Debug, Clone)]
pub enum Interaction {
    /// One alpha for every pair.
    Uniform(f64),
    /// Symmetric matrix alpha[i][j] per species pair.
    PerPair(Vec<Vec<f64>>),
}

impl Interaction {
    pub fn alpha(&self, i: usize, j: usize) -> f64 {
        match self {
            Interaction::Uniform(a) => *a,
            Interaction::PerPair(m) => m[i][j],
        }
    }
}

/// Full system description.
#[derive(Debug, Clone)]
pub struct SystemSpec {
    pub species: Vec<Species>,
    pub confinement: Confinement,
    pub interaction: Interaction,
}

impl SystemSpec {
    /// Single-species system with uniform coupling.
    pub fn single(count: u32, statistics: Statistics, confinement: Confinement, alpha: f64) -> Self {
        assert!(count >= 1, "need at least one particle");
        assert!(alpha >= 0.0, "interaction strength must be non-negative");
        SystemSpec {
            species: vec![Species { count, statistics, mass_ratio: 1.0 }],
            confinement,
            interaction: Interaction::Uniform(alpha),
        }
    }

    pub fn total_count(&self) -> u32 {
        self.species.iter().map(|s| s.count).sum()
    }

    /// The single species of a one-species system.
    pub fn single_species(&self) -> Result<&Species> {
        if self.species.len() != 1 {
            return Err(QceError::InvalidInput(format!(
                "single-species path requires one species, found {}",
                self.species.len()
            )));
        }
        Ok(&self.species[0])
    }

    pub fn alpha_uniform(&self) -> f64 {
        self.interaction.alpha(0, 0)
    }

    pub fn effective_dimension(&self) -> Result<f64> {
        effective_dimension(&self.confinement)
    }

    pub fn effective_volume(&self) -> Result<f64> {
        effective_volume(&self.confinement)
    }
}

/// A thermal state: inverse temperature and the derived scales.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalPoint {
    pub beta: f64,
    /// lambda_T = sqrt(4 pi beta) in units hbar^2/2m = 1.
    pub lambda_t: f64,
}

impl ThermalPoint {
    pub fn new(beta: f64) -> Self {
        assert!(beta > 0.0, "inverse temperature must be positive");
        ThermalPoint { beta, lambda_t: (4.0 * std::f64::consts::PI * beta).sqrt() }
    }

    /// Thermal coupling s = beta * alpha.
    pub fn thermal_coupling(&self, alpha: f64) -> f64 {
        self.beta * alpha
    }

    /// Dimensionless size x = V_eff / lambda_T^d.
    pub fn cluster_size(&self, veff: f64, d: f64) -> f64 {
        veff / self.lambda_t.powf(d)
    }
}
