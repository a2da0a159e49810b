//! Integer partitions, cycle-type counting, and the non-interacting cluster
//! coefficients z_l.
//!
//! For N identical particles the non-interacting partition function is
//!
//!   Z_0 = sum_l z_l x^l,   x = V_eff / lambda_T^d,
//!   z_l = (+-1)^{N-l} (1/N!) sum_{partitions of N with l parts}
//!         c_part * prod_{n in part} n^{-d/2},
//!
//! where c_part counts permutations with that cycle type. Coefficients are
//! assembled in exact arithmetic for d in {1, 2}: each term is a rational
//! times the square root of a squarefree integer, collected per radical and
//! collapsed to f64 only at the boundary.

use crate::error::{QceError, Result};
use crate::model::Statistics;
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, ToPrimitive, Zero};
use once_cell::sync::Lazy;
use std::collections::{BTreeMap, HashMap};
use std::sync::RwLock;

/// Upper guard for partition enumeration; p(64) = 1_741_630 is still cheap,
/// beyond that the factorials stop being meaningful in this context.
pub const MAX_N: u32 = 64;

/// A partition of an integer into positive parts, stored in descending order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntegerPartition {
    parts: Vec<u32>,
}

impl IntegerPartition {
    pub fn new(mut parts: Vec<u32>) -> Self {
        assert!(parts.iter().all(|&p| p > 0), "parts must be positive");
        parts.sort_unstable_by(|a, b| b.cmp(a));
        IntegerPartition { parts }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Number of parts (cycles) in the partition.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Sum of the parts.
    pub fn total(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// Multiplicity of the part `n`.
    pub fn multiplicity(&self, n: u32) -> u32 {
        self.parts.iter().filter(|&&p| p == n).count() as u32
    }
}

/// All partitions of `n`, each exactly once, parts in descending order,
/// enumerated iteratively in lexicographically descending order.
pub fn partitions(n: u32) -> Result<Vec<IntegerPartition>> {
    if n == 0 || n > MAX_N {
        return Err(QceError::InvalidInput(format!(
            "partition enumeration supports 1 <= N <= {MAX_N}, got {n}"
        )));
    }
    let mut out = Vec::new();
    let mut cur: Vec<u32> = vec![n];
    loop {
        out.push(IntegerPartition { parts: cur.clone() });
        // find rightmost part > 1
        let Some(k) = cur.iter().rposition(|&p| p > 1) else { break };
        let mut rem: u32 = cur[k..].iter().sum::<u32>();
        let new_part = cur[k] - 1;
        cur.truncate(k);
        // greedily refill with parts of size new_part
        while rem > 0 {
            let p = new_part.min(rem);
            // a trailing part smaller than new_part is allowed only once at
            // the end; the greedy min handles it
            cur.push(p);
            rem -= p;
        }
    }
    Ok(out)
}

fn factorial_big(n: u32) -> BigInt {
    let mut f = BigInt::one();
    for k in 2..=n as u64 {
        f *= k;
    }
    f
}

/// Number of permutations of N elements whose cycle type is the given
/// partition: c = N! / (prod n * prod m(n)!).
pub fn cycle_count(p: &IntegerPartition) -> BigInt {
    let n = p.total();
    let mut denom = BigInt::one();
    for &part in p.parts() {
        denom *= part as u64;
    }
    let mut seen: HashMap<u32, u32> = HashMap::new();
    for &part in p.parts() {
        *seen.entry(part).or_insert(0) += 1;
    }
    for (_, m) in seen {
        denom *= factorial_big(m);
    }
    factorial_big(n) / denom
}

/// `cycle_count` collapsed to f64 (exact as long as it fits the mantissa).
pub fn cycle_count_f64(p: &IntegerPartition) -> f64 {
    cycle_count(p).to_f64().unwrap_or(f64::INFINITY)
}

/// An exact coefficient: sum over squarefree radicals r of q_r * sqrt(r).
///
/// Closed under addition and rational scaling, which is all the z_l assembly
/// needs for d in {1, 2}.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactCoefficient {
    terms: BTreeMap<u64, BigRational>,
}

impl ExactCoefficient {
    pub fn zero() -> Self {
        ExactCoefficient { terms: BTreeMap::new() }
    }

    pub fn add_term(&mut self, radical: u64, q: BigRational) {
        let entry = self.terms.entry(radical).or_insert_with(BigRational::zero);
        *entry += q;
        if entry.is_zero() {
            self.terms.remove(&radical);
        }
    }

    /// The purely rational value, if the coefficient has no irrational part.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&1).cloned(),
            _ => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(&r, q)| q.to_f64().unwrap_or(f64::NAN) * (r as f64).sqrt())
            .sum()
    }
}

/// Splits `m` into (squarefree radical, integer square root of the rest):
/// m = radical * square^2.
fn squarefree_split(mut m: u64) -> (u64, u64) {
    let mut radical = 1u64;
    let mut square = 1u64;
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            let mut e = 0u32;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            if e % 2 == 1 {
                radical *= p;
            }
            square *= p.pow(e / 2);
        }
        p += 1;
    }
    radical *= m; // leftover prime
    (radical, square)
}

/// Non-interacting coefficients of one species.
#[derive(Debug, Clone)]
pub struct NonintCoefficients {
    pub n: u32,
    pub d: f64,
    pub statistics: Statistics,
    /// z[l-1] is the coefficient of x^l, l = 1..=N.
    pub z: Vec<f64>,
}

impl NonintCoefficients {
    /// z_l with the convention z_0^{(m)} = delta_{m0} and z_l = 0 out of range.
    pub fn z_l(&self, l: u32) -> f64 {
        if l == 0 {
            return if self.n == 0 { 1.0 } else { 0.0 };
        }
        if l > self.n {
            return 0.0;
        }
        self.z[(l - 1) as usize]
    }
}

/// Exact z_l for d in {1, 2}. d = 2 yields pure rationals; d = 1 yields
/// rational combinations of square roots.
pub fn nonint_coefficients_exact(
    n: u32,
    d: u32,
    statistics: Statistics,
) -> Result<Vec<ExactCoefficient>> {
    if !(d == 1 || d == 2) {
        return Err(QceError::InvalidInput(format!(
            "exact coefficients are available for d in {{1, 2}}, got {d}"
        )));
    }
    let parts_list = partitions(n)?;
    let nfac = factorial_big(n);
    let mut out = vec![ExactCoefficient::zero(); n as usize];
    for p in &parts_list {
        let l = p.len() as u32;
        let c = cycle_count(p);
        let prod: u64 = p.parts().iter().map(|&k| k as u64).product();
        let sign = match statistics {
            Statistics::Bose => BigInt::one(),
            Statistics::Fermi => {
                if (n - l) % 2 == 0 {
                    BigInt::one()
                } else {
                    -BigInt::one()
                }
            }
        };
        let idx = (l - 1) as usize;
        match d {
            2 => {
                // weight 1/prod
                let q = BigRational::new(sign * c, &nfac * BigInt::from(prod));
                out[idx].add_term(1, q);
            }
            _ => {
                // weight 1/sqrt(prod) = sqrt(radical) / (radical * square)
                let (radical, square) = squarefree_split(prod);
                let denom = &nfac * BigInt::from(radical) * BigInt::from(square);
                let q = BigRational::new(sign * c, denom);
                out[idx].add_term(radical, q);
            }
        }
    }
    Ok(out)
}

type CacheKey = (u32, u64, bool);
static COEFF_CACHE: Lazy<RwLock<HashMap<CacheKey, Vec<f64>>>> =
    Lazy::new(|| RwLock::new(HashMap::new()));

/// Non-interacting coefficients z_l^{(N)} for arbitrary real d > 0.
///
/// Exact arithmetic is used for d in {1, 2}; otherwise each term is
/// accumulated in f64. Results are memoized behind a read-mostly cache.
pub fn nonint_coefficients(n: u32, d: f64, statistics: Statistics) -> Result<NonintCoefficients> {
    if n == 0 {
        return Err(QceError::InvalidInput("N must be at least 1".into()));
    }
    if d <= 0.0 {
        return Err(QceError::InvalidInput(format!("d must be positive, got {d}")));
    }
    let key: CacheKey = (n, d.to_bits(), statistics == Statistics::Bose);
    if let Some(z) = COEFF_CACHE.read().unwrap().get(&key) {
        return Ok(NonintCoefficients { n, d, statistics, z: z.clone() });
    }
    let z: Vec<f64> = if d == 1.0 || d == 2.0 {
        nonint_coefficients_exact(n, d as u32, statistics)?
            .iter()
            .map(|c| c.to_f64())
            .collect()
    } else {
        let parts_list = partitions(n)?;
        let nfac = factorial_big(n).to_f64().unwrap();
        let mut acc = vec![0.0f64; n as usize];
        for p in &parts_list {
            let l = p.len() as u32;
            let c = cycle_count_f64(p);
            let w: f64 = p.parts().iter().map(|&k| (k as f64).powf(-0.5 * d)).product();
            let sign = match statistics {
                Statistics::Bose => 1.0,
                Statistics::Fermi => if (n - l) % 2 == 0 { 1.0 } else { -1.0 },
            };
            acc[(l - 1) as usize] += sign * c * w / nfac;
        }
        acc
    };
    COEFF_CACHE.write().unwrap().insert(key, z.clone());
    Ok(NonintCoefficients { n, d, statistics, z })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use num::FromPrimitive;

    #[test]
    fn partition_counts() {
        assert_eq!(partitions(3).unwrap().len(), 3);
        assert_eq!(partitions(5).unwrap().len(), 7);
        // p(10) = 42, brute-force cross-checked
        assert_eq!(partitions(10).unwrap().len(), 42);
        assert_eq!(partitions(20).unwrap().len(), 627);
    }

    #[test]
    fn partitions_of_three_explicit() {
        let ps = partitions(3).unwrap();
        let got: Vec<Vec<u32>> = ps.iter().map(|p| p.parts().to_vec()).collect();
        assert_eq!(got, vec![vec![3], vec![2, 1], vec![1, 1, 1]]);
    }

    #[test]
    fn partitions_unique_and_complete() {
        for n in 1..=12u32 {
            let ps = partitions(n).unwrap();
            let mut seen = std::collections::HashSet::new();
            for p in &ps {
                assert_eq!(p.total(), n);
                assert!(seen.insert(p.parts().to_vec()), "duplicate partition");
                for &part in p.parts() {
                    assert_eq!(
                        p.multiplicity(part),
                        p.parts().iter().filter(|&&q| q == part).count() as u32
                    );
                }
            }
        }
    }

    #[test]
    fn partition_guard() {
        assert!(partitions(0).is_err());
        assert!(partitions(MAX_N + 1).is_err());
    }

    /// Brute force over all permutations of S_n, counting cycle types.
    fn brute_force_cycle_types(n: usize) -> HashMap<Vec<u32>, u64> {
        fn permutations(n: usize) -> Vec<Vec<usize>> {
            if n == 1 {
                return vec![vec![0]];
            }
            let mut out = Vec::new();
            for p in permutations(n - 1) {
                for pos in 0..n {
                    let mut q = p.clone();
                    q.insert(pos, n - 1);
                    out.push(q);
                }
            }
            out
        }
        let mut counts: HashMap<Vec<u32>, u64> = HashMap::new();
        for p in permutations(n) {
            let mut seen = vec![false; n];
            let mut cycles = Vec::new();
            for start in 0..n {
                if seen[start] {
                    continue;
                }
                let mut len = 0u32;
                let mut i = start;
                while !seen[i] {
                    seen[i] = true;
                    i = p[i];
                    len += 1;
                }
                cycles.push(len);
            }
            cycles.sort_unstable_by(|a, b| b.cmp(a));
            *counts.entry(cycles).or_insert(0) += 1;
        }
        counts
    }

    #[test]
    fn cycle_count_matches_brute_force() {
        for n in 1..=7u32 {
            let brute = brute_force_cycle_types(n as usize);
            for p in partitions(n).unwrap() {
                let want = brute[&p.parts().to_vec()];
                assert_eq!(cycle_count(&p), BigInt::from(want), "cycle type {:?}", p.parts());
            }
        }
    }

    #[test]
    fn cycle_counts_of_three() {
        let id = IntegerPartition::new(vec![1, 1, 1]);
        let swap = IntegerPartition::new(vec![2, 1]);
        let three = IntegerPartition::new(vec![3]);
        assert_eq!(cycle_count(&id), BigInt::from(1u32));
        assert_eq!(cycle_count(&swap), BigInt::from(3u32));
        assert_eq!(cycle_count(&three), BigInt::from(2u32));
    }

    #[test]
    fn cycle_counts_sum_to_n_factorial() {
        for n in 1..=12u32 {
            let total: BigInt = partitions(n).unwrap().iter().map(|p| cycle_count(p)).sum();
            assert_eq!(total, factorial_big(n), "N = {n}");
        }
    }

    #[test]
    fn z_last_is_inverse_factorial_and_signs_alternate() {
        for n in 1..=9u32 {
            for (d, stats) in [(1.0, Statistics::Bose), (2.0, Statistics::Fermi), (1.5, Statistics::Fermi)] {
                let c = nonint_coefficients(n, d, stats).unwrap();
                let nfac: f64 = (1..=n as u64).product::<u64>() as f64;
                assert_relative_eq!(c.z_l(n), 1.0 / nfac, max_relative = 1e-14);
                for l in 1..=n {
                    let z = c.z_l(l);
                    match stats {
                        Statistics::Bose => assert!(z > 0.0),
                        Statistics::Fermi => {
                            let expect_sign = if (n - l) % 2 == 0 { 1.0 } else { -1.0 };
                            assert!(z * expect_sign > 0.0, "N={n} l={l} z={z}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn z_one_particle() {
        for &d in &[1.0, 1.5, 2.0, 3.0] {
            let c = nonint_coefficients(1, d, Statistics::Bose).unwrap();
            assert_relative_eq!(c.z_l(1), 1.0);
        }
    }

    #[test]
    fn z_two_bosons_d1() {
        // brute force over the 2 permutations of S_2 with n^{-1/2} weights
        let c = nonint_coefficients(2, 1.0, Statistics::Bose).unwrap();
        assert_relative_eq!(c.z_l(2), 0.5, max_relative = 1e-15);
        assert_relative_eq!(c.z_l(1), 0.5 / 2f64.sqrt(), max_relative = 1e-15);
    }

    #[test]
    fn z_three_fermions_d2() {
        // brute force over the 6 permutations of S_3 with n^{-1} weights
        let c = nonint_coefficients(3, 2.0, Statistics::Fermi).unwrap();
        assert_relative_eq!(c.z_l(3), 1.0 / 6.0, max_relative = 1e-15);
        assert_relative_eq!(c.z_l(2), -0.25, max_relative = 1e-15);
        assert_relative_eq!(c.z_l(1), 1.0 / 9.0, max_relative = 1e-15);
    }

    #[test]
    fn fermi_bose_sign_relation() {
        for n in 1..=8u32 {
            for &d in &[1.0, 2.0, 2.7] {
                let b = nonint_coefficients(n, d, Statistics::Bose).unwrap();
                let f = nonint_coefficients(n, d, Statistics::Fermi).unwrap();
                for l in 1..=n {
                    let sign = if (n - l) % 2 == 0 { 1.0 } else { -1.0 };
                    assert_relative_eq!(f.z_l(l), sign * b.z_l(l), max_relative = 1e-14);
                }
            }
        }
    }

    #[test]
    fn exact_rational_values_at_d2() {
        let z = nonint_coefficients_exact(3, 2, Statistics::Bose).unwrap();
        let z2 = z[1].as_rational().unwrap();
        assert_eq!(z2, BigRational::from_f64(0.25).unwrap());
        // d=1 coefficients carry radicals: z_1^{(2)} = sqrt(2)/4
        let z1d1 = nonint_coefficients_exact(2, 1, Statistics::Bose).unwrap();
        assert!(z1d1[0].as_rational().is_none());
        assert_relative_eq!(z1d1[0].to_f64(), 2f64.sqrt() / 4.0, max_relative = 1e-15);
    }

    #[test]
    fn squarefree_split_examples() {
        assert_eq!(squarefree_split(1), (1, 1));
        assert_eq!(squarefree_split(8), (2, 2));
        assert_eq!(squarefree_split(12), (3, 2));
        assert_eq!(squarefree_split(360), (10, 6));
        assert_eq!(squarefree_split(49), (1, 7));
    }

    #[test]
    fn z_zero_convention() {
        let c = nonint_coefficients(3, 1.0, Statistics::Bose).unwrap();
        assert_eq!(c.z_l(0), 0.0);
        assert_eq!(c.z_l(4), 0.0);
    }

    #[test]
    fn cache_is_consistent_across_threads() {
        let handles: Vec<_> = (0..8)
            .map(|_| {
                std::thread::spawn(|| {
                    nonint_coefficients(10, 1.0, Statistics::Bose).unwrap().z
                })
            })
            .collect();
        let first = nonint_coefficients(10, 1.0, Statistics::Bose).unwrap().z;
        for h in handles {
            assert_eq!(h.join().unwrap(), first);
        }
    }
}
