//! Exact level lists and canonical partition sums built from them.

use crate::error::{QceError, Result};
use std::io::Write;
use std::path::PathBuf;

/// Where a level list came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Diagonalization,
    Bethe,
    Analytic,
}

impl Provenance {
    fn tag(&self) -> &'static str {
        match self {
            Provenance::Diagonalization => "diagonalization",
            Provenance::Bethe => "bethe",
            Provenance::Analytic => "analytic",
        }
    }

    fn from_tag(s: &str) -> Option<Self> {
        match s {
            "diagonalization" => Some(Provenance::Diagonalization),
            "bethe" => Some(Provenance::Bethe),
            "analytic" => Some(Provenance::Analytic),
            _ => None,
        }
    }
}

/// A complete list of exact many-body energies below a cutoff.
#[derive(Debug, Clone)]
pub struct LevelList {
    energies: Vec<f64>,
    degeneracies: Vec<u32>,
    pub e_max: f64,
    pub provenance: Provenance,
}

impl LevelList {
    /// Builds a list from raw (energy, degeneracy) pairs; sorts ascending and
    /// merges levels closer than `merge_tol`.
    pub fn new(
        mut pairs: Vec<(f64, u32)>,
        e_max: f64,
        provenance: Provenance,
        merge_tol: f64,
    ) -> Self {
        pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let mut energies: Vec<f64> = Vec::with_capacity(pairs.len());
        let mut degeneracies: Vec<u32> = Vec::with_capacity(pairs.len());
        for (e, g) in pairs {
            if let Some(last) = energies.last() {
                if (e - last).abs() <= merge_tol * (1.0 + last.abs()) {
                    *degeneracies.last_mut().unwrap() += g;
                    continue;
                }
            }
            energies.push(e);
            degeneracies.push(g);
        }
        LevelList { energies, degeneracies, e_max, provenance }
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn degeneracies(&self) -> &[u32] {
        &self.degeneracies
    }

    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    /// Number of states (counting degeneracy) at or below `e`.
    pub fn staircase(&self, e: f64) -> f64 {
        let mut n = 0u64;
        for (x, g) in self.energies.iter().zip(&self.degeneracies) {
            if *x <= e {
                n += *g as u64;
            } else {
                break;
            }
        }
        n as f64
    }

    /// Flat list of states (energies repeated by degeneracy).
    pub fn states(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for (x, g) in self.energies.iter().zip(&self.degeneracies) {
            for _ in 0..*g {
                out.push(*x);
            }
        }
        out
    }

    /// Columnar text serialization: a `# key value` header followed by
    /// `energy degeneracy` lines at full precision.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("# qce1d-levels v1\n# provenance {}\n# e_max {:.17e}\n", self.provenance.tag(), self.e_max));
        for (e, g) in self.energies.iter().zip(&self.degeneracies) {
            s.push_str(&format!("{:.17e} {}\n", e, g));
        }
        s
    }

    pub fn from_text(text: &str) -> Result<LevelList> {
        let mut e_max = f64::INFINITY;
        let mut provenance = Provenance::Analytic;
        let mut pairs = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                let toks: Vec<&str> = rest.split_whitespace().collect();
                match toks.as_slice() {
                    ["provenance", tag] => {
                        provenance = Provenance::from_tag(tag).ok_or_else(|| {
                            QceError::InvalidInput(format!("unknown provenance tag {tag}"))
                        })?;
                    }
                    ["e_max", v] => {
                        e_max = v.parse().map_err(|_| {
                            QceError::InvalidInput(format!("bad e_max {v}"))
                        })?;
                    }
                    _ => {}
                }
                continue;
            }
            let mut it = line.split_whitespace();
            let e: f64 = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| QceError::InvalidInput(format!("bad level line: {line}")))?;
            let g: u32 = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| QceError::InvalidInput(format!("bad level line: {line}")))?;
            pairs.push((e, g));
        }
        Ok(LevelList::new(pairs, e_max, provenance, 0.0))
    }

    /// Cache path for a parameter key under QCE1D_CACHE_DIR, if set.
    fn cache_path(key: &str) -> Option<PathBuf> {
        std::env::var_os("QCE1D_CACHE_DIR").map(|dir| {
            let mut p = PathBuf::from(dir);
            p.push(format!("{key}.levels"));
            p
        })
    }

    /// Loads a cached list or computes and stores it. The key must encode the
    /// full parameter tuple and an oracle version stamp.
    pub fn cached<F: FnOnce() -> Result<LevelList>>(key: &str, compute: F) -> Result<LevelList> {
        if let Some(path) = Self::cache_path(key) {
            if let Ok(text) = std::fs::read_to_string(&path) {
                if let Ok(list) = LevelList::from_text(&text) {
                    return Ok(list);
                }
            }
            let list = compute()?;
            if let Some(parent) = path.parent() {
                let _ = std::fs::create_dir_all(parent);
            }
            if let Ok(mut f) = std::fs::File::create(&path) {
                let _ = f.write_all(list.to_text().as_bytes());
            }
            return Ok(list);
        }
        compute()
    }
}

/// Exact canonical partition function by direct Boltzmann summation over a
/// level list, with a completeness guard: the cutoff's Boltzmann weight must
/// be below 1e-12 of the running sum.
pub fn canonical_partition_from_levels(levels: &LevelList, beta: f64) -> Result<f64> {
    assert!(beta > 0.0);
    if levels.is_empty() {
        return Err(QceError::InvalidInput("empty level list".into()));
    }
    let e0 = levels.energies()[0];
    let mut z = 0.0;
    for (e, g) in levels.energies().iter().zip(levels.degeneracies()) {
        z += *g as f64 * (-beta * (e - e0)).exp();
    }
    let tail = (-beta * (levels.e_max - e0)).exp();
    if tail >= 1e-12 * z {
        return Err(QceError::IncompleteLevelList { tail, bound: 1e-12 });
    }
    Ok(z * (-beta * e0).exp())
}

/// ln Z variant, safe at large beta where Z underflows.
pub fn canonical_ln_partition_from_levels(levels: &LevelList, beta: f64) -> Result<f64> {
    let e0 = levels.energies()[0];
    let mut z = 0.0;
    for (e, g) in levels.energies().iter().zip(levels.degeneracies()) {
        z += *g as f64 * (-beta * (e - e0)).exp();
    }
    let tail = (-beta * (levels.e_max - e0)).exp();
    if tail >= 1e-12 * z {
        return Err(QceError::IncompleteLevelList { tail, bound: 1e-12 });
    }
    Ok(z.ln() - beta * e0)
}

/// Exact N-body canonical partition function of the ideal gas from
/// single-particle levels, by the standard recursion
///
///   Z_N = (1/N) sum_{k=1}^{N} (+-1)^{k+1} Z_1(k beta) Z_{N-k}.
pub fn canonical_ideal_recursion(
    single_particle: &LevelList,
    n: u32,
    statistics: crate::model::Statistics,
    beta: f64,
) -> Result<f64> {
    let z1 = |b: f64| canonical_partition_from_levels(single_particle, b);
    let mut z: Vec<f64> = vec![1.0];
    for m in 1..=n as usize {
        let mut acc = 0.0;
        for k in 1..=m {
            let sign = statistics.sign().powi(k as i32 + 1);
            acc += sign * z1(k as f64 * beta)? * z[m - k];
        }
        z.push(acc / m as f64);
    }
    Ok(z[n as usize])
}

/// Single-particle harmonic-oscillator levels below the cutoff (hbar omega
/// units, ground state at 1/2).
pub fn harmonic_single_particle_levels(hbar_omega: f64, e_max: f64) -> LevelList {
    let mut pairs = Vec::new();
    let mut k = 0u32;
    loop {
        let e = hbar_omega * (k as f64 + 0.5);
        if e > e_max {
            break;
        }
        pairs.push((e, 1));
        k += 1;
    }
    LevelList::new(pairs, e_max, Provenance::Analytic, 0.0)
}
