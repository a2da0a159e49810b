//! Exact two-boson spectrum in a harmonic trap with contact interaction.
//!
//! Center of mass and relative motion separate. The relative Hamiltonian
//! (hbar omega = 1 units, hbar^2/2m = 1)
//!
//!   h_rel = -d^2/dr^2 + r^2/4 + 2 sqrt(alpha) delta(r)
//!
//! leaves odd states untouched; the even sector is the oscillator plus a
//! rank-one update. The truncated even basis of size M gives the secular
//! equation 1 + g sum_{k<M} v_k^2/(d_k - E) = 0 with d_k = 2k + 1/2 and
//! v_k^2 = (2k)! / (4^k (k!)^2 sqrt(2 pi)); its roots are the eigenvalues of
//! the truncated matrix, found by bisection between the poles. Truncation
//! converges like M^{-1/2}, so eigenvalues are Richardson-extrapolated over
//! basis sizes (M, 2M, 4M) with exponents {1/2, 1}.

use super::levels::{LevelList, Provenance};
use crate::error::{QceError, Result};

/// v_k^2 table for the even oscillator states at the origin.
fn origin_weights(m: usize) -> Vec<f64> {
    let mut v = Vec::with_capacity(m);
    let mut cur = 1.0 / (2.0 * std::f64::consts::PI).sqrt();
    for k in 0..m {
        v.push(cur);
        cur *= (2.0 * k as f64 + 1.0) / (2.0 * k as f64 + 2.0);
    }
    v
}

/// Lowest `nroot` eigenvalues of the truncated even-sector matrix of size m.
fn secular_roots(alpha: f64, m: usize, nroot: usize) -> Vec<f64> {
    let g = 2.0 * alpha.sqrt();
    let v2 = origin_weights(m);
    let pole = |k: usize| 2.0 * k as f64 + 0.5;
    let f = |e: f64| -> f64 {
        let mut s = 0.0;
        for k in 0..m {
            s += v2[k] / (pole(k) - e);
        }
        1.0 + g * s
    };
    let mut roots = Vec::with_capacity(nroot);
    for j in 0..nroot {
        // repulsive coupling: root in (d_j, d_{j+1})
        let mut lo = pole(j) + 1e-12;
        let mut hi = pole(j + 1) - 1e-12;
        // f(lo) < 0 (dominated by the -1/eps pole), f(hi) > 0
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-14 * hi {
                break;
            }
        }
        roots.push(0.5 * (lo + hi));
    }
    roots
}

/// Relative-motion even-sector levels, Richardson-extrapolated in basis size.
/// Returns (levels, per-level extrapolation error estimates).
pub fn relative_even_levels(alpha: f64, basis_size: usize, nroot: usize) -> (Vec<f64>, Vec<f64>) {
    if alpha == 0.0 {
        return ((0..nroot).map(|k| 2.0 * k as f64 + 0.5).collect(), vec![0.0; nroot]);
    }
    let e1 = secular_roots(alpha, basis_size, nroot);
    let e2 = secular_roots(alpha, 2 * basis_size, nroot);
    let e4 = secular_roots(alpha, 4 * basis_size, nroot);
    let sqrt2 = std::f64::consts::SQRT_2;
    let mut out = Vec::with_capacity(nroot);
    let mut errs = Vec::with_capacity(nroot);
    for j in 0..nroot {
        // first stage removes the M^{-1/2} term, second the M^{-1} term
        let a1 = (sqrt2 * e2[j] - e1[j]) / (sqrt2 - 1.0);
        let a2 = (sqrt2 * e4[j] - e2[j]) / (sqrt2 - 1.0);
        out.push(2.0 * a2 - a1);
        errs.push((a2 - a1).abs());
    }
    (out, errs)
}

/// Symmetrized two-boson levels (center of mass x even relative sector)
/// below `e_max`, in oscillator quanta.
///
/// The extrapolation must be converged: each retained level's error estimate
/// has to be below 1e-5 quanta, otherwise the trend is reported.
pub fn two_body_harmonic_levels(alpha: f64, basis_size: usize, e_max: f64) -> Result<LevelList> {
    if alpha < 0.0 {
        return Err(QceError::InvalidInput("attractive couplings are out of scope".into()));
    }
    // relative levels needed up to e_max - 1/2 (CM ground state energy)
    let nroot = ((e_max / 2.0) as usize + 2).max(2);
    let (rel, errs) = relative_even_levels(alpha, basis_size, nroot);
    for (j, (&e, &de)) in rel.iter().zip(&errs).enumerate() {
        if e < e_max && de > 1e-5 {
            let trend: Vec<f64> = vec![
                secular_roots(alpha, basis_size, j + 1)[j],
                secular_roots(alpha, 2 * basis_size, j + 1)[j],
                secular_roots(alpha, 4 * basis_size, j + 1)[j],
            ];
            return Err(QceError::ExtrapolationNotConverged { trend });
        }
    }
    let mut pairs = Vec::new();
    let mut m = 0u32;
    loop {
        let cm = m as f64 + 0.5;
        if cm + rel[0] > e_max {
            break;
        }
        for &er in &rel {
            let e = cm + er;
            if e <= e_max {
                pairs.push((e, 1));
            }
        }
        m += 1;
    }
    Ok(LevelList::new(pairs, e_max, Provenance::Diagonalization, 1e-9))
}
