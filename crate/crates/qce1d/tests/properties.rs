//! Cross-module invariants: identities that tie the coefficient, spectral
//! and oracle layers together. Module-local invariants live next to their
//! modules; everything here crosses at least one module boundary.

use qce1d::clusters::{a_cluster, ClusterGeometry};
use qce1d::combinatorics::nonint_coefficients;
use qce1d::model::{Confinement, Statistics, SystemSpec, ThermalPoint};
use qce1d::oracles;
use qce1d::partition::{self, Regime, SplitAnsatz};
use qce1d::specfun::Accuracy;
use qce1d::spectral;
use qce1d::thermo;

/// Weyl-regime check of the non-interacting coefficients: the reconstructed
/// Z_0 for harmonic bosons matches the exact canonical recursion at high
/// temperature within 1%.
#[test]
fn nonint_partition_matches_exact_canonical_in_weyl_regime() {
    for n in [2u32, 3] {
        for &beta in &[0.2, 0.1] {
            let levels = oracles::harmonic_single_particle_levels(1.0, 80.0 / beta);
            let exact =
                oracles::canonical_ideal_recursion(&levels, n, Statistics::Bose, beta).unwrap();
            let x = 1.0 / beta; // V_eff/lambda_T^2 for hbar omega = 1
            let qce = partition::z0_partition(n, Statistics::Bose, 2.0, x).unwrap();
            let rel = (qce - exact).abs() / exact;
            assert!(rel <= 0.01, "N={n}, beta={beta}: rel={rel}");
        }
    }
}

/// Laplace consistency at N = 6 (the acceptance suite covers N <= 5): the
/// forward transform of eps^{l/2} g_l(eps) reproduces Delta_1 z_l(s) s^{-l/2-1}.
#[test]
fn laplace_consistency_at_n6() {
    let n = 6u32;
    let acc = Accuracy::default();
    for l in 1..n {
        for &s in &[0.05, 1.0, 8.0] {
            let lhs = oracles::numeric_laplace(
                |eps| {
                    eps.powf(0.5 * l as f64)
                        * spectral::g_l(n, 1.0, l, Statistics::Bose, Regime::Direct, eps).unwrap()
                },
                s,
                1e-9,
            )
            .unwrap();
            let rhs = partition::delta_z(n, 1.0, Statistics::Bose, Regime::Direct, l, s, acc)
                .unwrap()
                * s.powf(-0.5 * l as f64 - 1.0);
            let denom = rhs.abs().max(1e-12);
            assert!(
                ((lhs - rhs) / denom).abs() <= 1e-5,
                "N=6 l={l} s={s}: lhs={lhs}, rhs={rhs}"
            );
        }
    }
}

/// chi stays inside [0, 1] for all tested particle numbers.
#[test]
fn shift_fraction_bounded() {
    for n in 2..=8u32 {
        for &d in &[1.0, 2.0] {
            let model = spectral::shift_model(n, d).unwrap();
            for i in 0..60 {
                let eps = 10f64.powf(-6.0 + 12.0 * i as f64 / 59.0);
                let chi = model.chi(eps).unwrap();
                assert!(
                    (-1e-9..=1.0 + 1e-9).contains(&chi),
                    "chi out of [0,1]: N={n}, d={d}, eps={eps}, chi={chi}"
                );
            }
        }
    }
}

/// DOS integrates back to the counting function on an interacting harmonic
/// system (the ring case is unit-tested).
#[test]
fn dos_reintegrates_to_counting_harmonic() {
    let spec = SystemSpec::single(2, Statistics::Bose, Confinement::harmonic(1.0), 0.5);
    let e = 6.0;
    let integral =
        qce1d::quadrature::integrate(|x| spectral::dos(&spec, x).unwrap(), 0.0, e, 1e-9, 4000)
            .unwrap();
    let nbar = spectral::counting_function(&spec, e).unwrap();
    assert!(
        ((integral - nbar) / nbar).abs() <= 1e-8,
        "integral={integral}, counting={nbar}"
    );
}

/// The split ansatz converges to the plain first-order expansion at large
/// volume (x >= 1e3), for both matching schemes.
#[test]
fn split_partition_reaches_z1_at_large_volume() {
    let n = 3u32;
    let alpha = 0.1;
    let beta = 1.0;
    let tp = ThermalPoint::new(beta);
    let x = 1.0e3;
    let length = x * tp.lambda_t;
    let spec = SystemSpec::single(n, Statistics::Bose, Confinement::ring(length), alpha);
    let provider = oracles::BetheLowestTwo { n, alpha };
    let z1 = partition::z1_partition(&spec, &tp).unwrap().value;
    for scheme in [
        partition::SplitScheme::CountingConsistent,
        partition::SplitScheme::Polynomial,
    ] {
        let ansatz = SplitAnsatz { provider: &provider, scheme };
        let z = partition::split_partition(&spec, &tp, &ansatz).unwrap();
        let gap = ((z - z1) / z1).abs();
        assert!(gap <= 1e-4, "scheme {scheme:?}: relative gap {gap}");
    }
}

/// Split-ansatz pressure approaches the ideal canonical pressure as the
/// coupling vanishes at fixed volume.
#[test]
fn split_pressure_reaches_ideal_at_weak_coupling() {
    let n = 3u32;
    let beta = 1.0;
    let tp = ThermalPoint::new(beta);
    let length = 30.0;
    let alpha = 1e-6;
    let spec = SystemSpec::single(n, Statistics::Bose, Confinement::ring(length), alpha);
    let provider = oracles::BetheLowestTwo { n, alpha };
    let ansatz = SplitAnsatz::new(&provider);
    let p_split = thermo::pressure(&spec, &tp, Some(&ansatz)).unwrap();
    let ideal = SystemSpec::single(n, Statistics::Bose, Confinement::ring(length), 0.0);
    let p_ideal = thermo::pressure(&ideal, &tp, None).unwrap();
    let rel = ((p_split - p_ideal) / p_ideal).abs();
    assert!(rel <= 0.02, "split {p_split} vs ideal {p_ideal}: rel {rel}");
}

/// Ground-state dominance of the split form at low temperature.
#[test]
fn split_partition_low_temperature_limit() {
    let n = 3u32;
    let alpha = 0.5;
    let length = 4.0;
    let spec = SystemSpec::single(n, Statistics::Bose, Confinement::ring(length), alpha);
    let provider = oracles::BetheLowestTwo { n, alpha };
    let ansatz = SplitAnsatz::new(&provider);
    let low = oracles::lieb_liniger_lowest_two(n, length, alpha).unwrap();
    let beta = 24.0 / (low.e1 - low.e0);
    let tp = ThermalPoint::new(beta);
    let z = partition::split_partition(&spec, &tp, &ansatz).unwrap();
    let rel = (z.ln() - (-beta * low.e0)).abs();
    assert!(rel <= 1e-6, "ln Z = {}, -beta E0 = {}", z.ln(), -beta * low.e0);
}

/// Bose-to-fermionized coefficient convergence for N = 2, where it holds for
/// every l (the N = 3 case is part of the acceptance suite and breaks down
/// for the three-body cluster).
#[test]
fn two_boson_coefficients_fermionize() {
    let acc = Accuracy::default();
    let free_fermi = nonint_coefficients(2, 1.0, Statistics::Fermi).unwrap();
    let mut prev = f64::INFINITY;
    for &s in &[1.0, 10.0, 100.0, 1e3, 1e4] {
        let coeffs =
            partition::z1_coefficients(2, 1.0, Statistics::Bose, Regime::Direct, s, acc).unwrap();
        let max_dev = (1..=2u32)
            .map(|l| (coeffs[(l - 1) as usize] - free_fermi.z_l(l)).abs())
            .fold(0.0, f64::max);
        assert!(max_dev < prev, "not monotone at s={s}");
        prev = max_dev;
    }
    assert!(prev <= 0.02, "max deviation at s=1e4: {prev}");
}

/// The QCE pressure on a ring with weak coupling agrees with the Bethe
/// oracle pressure (validates the c = sqrt(2 alpha) mapping end to end).
#[test]
fn ring_pressure_matches_bethe_oracle_at_weak_coupling() {
    let n = 2u32;
    let alpha = 0.3;
    let beta = 1.0;
    let tp = ThermalPoint::new(beta);
    let length = 8.0;
    let spec = SystemSpec::single(n, Statistics::Bose, Confinement::ring(length), alpha);
    let p_qce = thermo::pressure(&spec, &tp, None).unwrap();
    let h = 0.01;
    let lnz = |l: f64| {
        let levels = oracles::lieb_liniger_levels(n, l, alpha, 40.0 / beta).unwrap();
        oracles::canonical_ln_partition_from_levels(&levels, beta).unwrap()
    };
    let p_oracle = (lnz(length + 0.5 * h) - lnz(length - 0.5 * h)) / (h * beta);
    let rel = ((p_qce - p_oracle) / p_oracle).abs();
    assert!(rel <= 2e-3, "QCE {p_qce} vs Bethe {p_oracle}: rel {rel}");
}

/// Pressure is positive wherever the partition function is positive, across
/// a parameter sweep.
#[test]
fn pressure_positive_where_z_positive() {
    let tp = ThermalPoint::new(0.7);
    for &n in &[1u32, 2, 4] {
        for &alpha in &[0.0, 0.4, 3.0] {
            for i in 1..=20 {
                let length = 0.8 * i as f64;
                let spec = SystemSpec::single(n, Statistics::Bose, Confinement::ring(length), alpha);
                match thermo::pressure(&spec, &tp, None) {
                    Ok(p) => assert!(p > 0.0, "P <= 0 at N={n}, alpha={alpha}, L={length}"),
                    Err(qce1d::QceError::QceBreakdown { .. }) => {}
                    Err(e) => panic!("unexpected error: {e}"),
                }
            }
        }
    }
}

/// Heavy-mass limit of the cross-species amplitude against a frozen-
/// coordinate oracle: one light particle scattering off a static contact
/// barrier on a ring. The cluster expansion predicts the conditional
/// interacting correction
///
///   Delta Z_light = A~_(1,1) / x_heavy  ->  a_(1,1)(s) / 2,  m_heavy -> inf;
///
/// the oracle diagonalizes the one-body delta-barrier problem exactly
/// (rank-one secular equation in a plane-wave basis).
#[test]
fn multispecies_heavy_limit_matches_frozen_coordinate_oracle() {
    let beta = 1.0f64;
    let alpha = 0.6f64;
    let s = beta * alpha;
    let length = 30.0;
    let g = (8.0 * alpha).sqrt(); // barrier strength of sqrt(8 alpha) delta(x)

    // cluster-side prediction in the m_j -> infinity limit: the coupling
    // scale doubles (reduced mass -> light mass), so the limit carries
    // a_(1,1)(2s)
    let mp = qce1d::clusters::MassPair::new(1.0, 1e10, 1, 1);
    let acc = Accuracy::default();
    let a_ms = qce1d::clusters::a_cluster_multispecies(&mp, s, acc).unwrap();
    let lam_ref = (4.0 * std::f64::consts::PI * beta).sqrt();
    let x_heavy_per_v = (1e10f64).sqrt() / lam_ref;
    let predict = a_ms / (mp.lambda_mod(beta) * mp.n_mod.sqrt()) / x_heavy_per_v;
    let limit = 0.5 * (-1.0 + qce1d::specfun::erfcx((2.0 * s).sqrt()));
    assert!(((predict - limit) / limit).abs() < 1e-4, "predict {predict} vs {limit}");

    // frozen-coordinate oracle: even-sector levels of -d2/dx2 + g delta(x)
    // on the ring, from the rank-one secular equation; odd sector unaffected
    let kmax = 400_000usize;
    let pole = |k: usize| (2.0 * std::f64::consts::PI * k as f64 / length).powi(2);
    let secular = |e: f64| -> f64 {
        let mut sum = 1.0 / (0.0 - e); // k = 0 mode, weight 1
        for k in 1..=kmax {
            sum += 2.0 / (pole(k) - e);
        }
        1.0 + (g / length) * sum
    };
    let mut delta_z = 0.0;
    for j in 0..40usize {
        // root between consecutive even-sector poles
        let (lo0, hi0) = if j == 0 {
            (1e-12, pole(1) - 1e-12)
        } else {
            (pole(j) + 1e-12, pole(j + 1) - 1e-12)
        };
        let (mut lo, mut hi) = (lo0, hi0);
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if secular(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let e_int = 0.5 * (lo + hi);
        let e_free = if j == 0 { 0.0 } else { pole(j) };
        delta_z += (-beta * e_int).exp() - (-beta * e_free).exp();
    }
    assert!(
        (delta_z - limit).abs() < 3e-4,
        "oracle {delta_z} vs cluster prediction {limit}"
    );
}

/// Forward-then-inverse Laplace round trip within 1e-7 on a decaying test
/// function, tying the two oracle transforms together.
#[test]
fn laplace_round_trip() {
    use num_complex::Complex64;
    for &eps in &[0.6, 2.0] {
        // f(eps) = eps e^{-eps}; F(s) = (1+s)^{-2}
        let f_rec =
            oracles::numeric_inverse_laplace(|s: Complex64| (s + 1.0).powi(-2), eps, 1e-9).unwrap();
        let want = eps * (-eps).exp();
        assert!(((f_rec - want) / want).abs() <= 1e-7);
    }
}

/// Virial baseline visibly fails at low temperature while the canonical
/// pressure stays physical (the documented contrast).
#[test]
fn virial_fails_where_canonical_works() {
    let spec = SystemSpec::single(3, Statistics::Bose, Confinement::harmonic(1.0), 0.0);
    let tp = ThermalPoint::new(1.0 / 0.7); // k_B T = 0.7 hbar omega
    let pv = thermo::virial_pressure(&spec, &tp, 3).unwrap();
    let levels = oracles::harmonic_single_particle_levels(1.0, 120.0);
    let z_exact = |beta: f64| {
        oracles::canonical_ideal_recursion(&levels, 3, Statistics::Bose, beta).unwrap()
    };
    // oracle pressure through the volume map omega = 4 pi / V
    let veff = spec.effective_volume().unwrap();
    let h = 1e-4 * veff;
    let lnz_of_v = |v: f64| {
        let beta_omega = tp.beta * 4.0 * std::f64::consts::PI / v;
        // Z depends on beta*omega only; recursion with scaled beta
        z_exact(beta_omega).ln()
    };
    let p_exact = (lnz_of_v(veff + 0.5 * h) - lnz_of_v(veff - 0.5 * h)) / (h * tp.beta);
    let rel = ((pv - p_exact) / p_exact).abs();
    assert!(rel >= 0.10, "virial should fail here: rel deviation {rel}");
}
