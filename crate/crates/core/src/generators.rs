//! Deterministic test complexes, random vertex families, and complex file I/O.
//!
//! All randomness comes from SplitMix64 seeded directly with the user's 64-bit
//! seed (state := seed; each draw adds `0x9e3779b97f4a7c15` and mixes). Derived
//! draws are specified bit-exactly so other implementations can reproduce them:
//!
//! * uniform `[0, 1)`: `(next_u64() >> 11) · 2⁻⁵³`
//! * index below `m`: `(next_u64() · m) >> 64` computed in 128 bits

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;
use serde::{Deserialize, Serialize};

use crate::complex::{SimplicialComplex, VertexId};
use crate::error::{HdxError, Result};
use crate::mixing::VertexFamily;

/// Portable seeded generator used by every randomized routine in the crate.
#[derive(Clone, Debug)]
pub struct SeededRng(SplitMix64);

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self(SplitMix64::seed_from_u64(seed))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn below(&mut self, m: usize) -> usize {
        ((u128::from(self.next_u64()) * m as u128) >> 64) as usize
    }

    /// Fisher-Yates, drawing `below(i + 1)` for `i = len−1, …, 1`.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let k = self.below(i + 1);
            items.swap(i, k);
        }
    }
}

/// Visits all `size`-subsets of `0..n` in lexicographic order.
pub fn for_each_subset(n: usize, size: usize, mut f: impl FnMut(&[usize])) {
    if size > n {
        return;
    }
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        f(&idx);
        let Some(pos) = (0..size).rev().find(|&i| idx[i] != i + n - size) else {
            return;
        };
        idx[pos] += 1;
        for i in (pos + 1)..size {
            idx[i] = idx[i - 1] + 1;
        }
    }
}

/// `K_n^{(m)}`: every cell of dimension at most `m` on `n` vertices.
pub fn complete_skeleton(n: usize, m: usize) -> Result<SimplicialComplex> {
    if m >= n {
        return Err(HdxError::InvalidParameter(format!("skeleton dimension {m} needs more than {m} vertices, got {n}")));
    }
    let mut facets = Vec::new();
    for_each_subset(n, m + 1, |s| facets.push(s.to_vec()));
    SimplicialComplex::build_from_facets(n, &facets)
}

/// Linial–Meshulam: complete (d−1)-skeleton, each d-cell kept independently with
/// probability `p`, candidates visited in lexicographic order with one uniform draw each.
pub fn linial_meshulam(d: usize, n: usize, p: f64, seed: u64) -> Result<SimplicialComplex> {
    if d < 1 || n <= d {
        return Err(HdxError::InvalidParameter(format!("linial-meshulam needs 1 <= d < n, got d={d}, n={n}")));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(HdxError::InvalidParameter(format!("probability {p} outside [0, 1]")));
    }
    let mut rng = SeededRng::new(seed);
    let mut facets = Vec::new();
    for_each_subset(n, d, |s| facets.push(s.to_vec()));
    for_each_subset(n, d + 1, |s| {
        if rng.uniform() < p {
            facets.push(s.to_vec());
        }
    });
    SimplicialComplex::build_from_facets(n, &facets)
}

/// Disjoint vertex sets of the given sizes: the first `Σ sizes` entries of a seeded
/// shuffle of `0..n`, cut in order and sorted within each set.
pub fn random_disjoint_family(n: usize, sizes: &[usize], seed: u64) -> Result<VertexFamily> {
    let total: usize = sizes.iter().sum();
    if total > n {
        return Err(HdxError::InvalidParameter(format!("set sizes sum to {total}, more than {n} vertices")));
    }
    let mut rng = SeededRng::new(seed);
    let mut vertices: Vec<VertexId> = (0..n).collect();
    rng.shuffle(&mut vertices);
    let mut sets = Vec::with_capacity(sizes.len());
    let mut start = 0;
    for &s in sizes {
        sets.push(vertices[start..start + s].to_vec());
        start += s;
    }
    VertexFamily::new(sets)
}

/// How to obtain a complex.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorSpec {
    CompleteSkeleton { n: usize, m: usize },
    LinialMeshulam { d: usize, n: usize, p: f64, seed: u64 },
    FromFile { path: PathBuf },
}

impl GeneratorSpec {
    pub fn build(&self) -> Result<SimplicialComplex> {
        match self {
            Self::CompleteSkeleton { n, m } => complete_skeleton(*n, *m),
            Self::LinialMeshulam { d, n, p, seed } => linial_meshulam(*d, *n, *p, *seed),
            Self::FromFile { path } => read_complex(path),
        }
    }
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::CompleteSkeleton { n, m } => write!(f, "complete:{n}:{m}"),
            Self::LinialMeshulam { d, n, p, seed } => write!(f, "lm:{d}:{n}:{p}:{seed}"),
            Self::FromFile { path } => write!(f, "file:{}", path.display()),
        }
    }
}

/// Parses `complete:N:M`, `lm:D:N:P:SEED` (alias `linial-meshulam`), or `file:PATH`.
impl FromStr for GeneratorSpec {
    type Err = HdxError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || HdxError::Parse(format!("bad generator spec '{s}'"));
        let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
        let fields: Vec<&str> = rest.split(':').collect();
        let num = |i: usize| fields.get(i).ok_or_else(bad)?.parse::<usize>().map_err(|_| bad());
        match kind {
            "complete" if fields.len() == 2 => Ok(Self::CompleteSkeleton { n: num(0)?, m: num(1)? }),
            "lm" | "linial-meshulam" if fields.len() == 4 => Ok(Self::LinialMeshulam {
                d: num(0)?,
                n: num(1)?,
                p: fields[2].parse().map_err(|_| bad())?,
                seed: fields[3].parse().map_err(|_| bad())?,
            }),
            "file" => Ok(Self::FromFile { path: PathBuf::from(rest) }),
            _ => Err(bad()),
        }
    }
}

pub fn read_complex(path: impl AsRef<Path>) -> Result<SimplicialComplex> {
    let text = fs::read_to_string(path.as_ref())
        .map_err(|e| HdxError::Io(format!("{}: {e}", path.as_ref().display())))?;
    SimplicialComplex::from_json(&text)
}

pub fn write_complex(x: &SimplicialComplex, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, x.to_json() + "\n")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitmix_reference_values() {
        // published SplitMix64 outputs for seed 1234567
        let mut rng = SeededRng::new(1234567);
        let expected = [6457827717110365317u64, 3203168211198807973, 9817491932198370423];
        for e in expected {
            assert_eq!(rng.next_u64(), e);
        }
    }

    #[test]
    fn skeleton_counts() {
        assert_eq!(complete_skeleton(4, 1).unwrap().count(1), 6);
        assert_eq!(complete_skeleton(5, 2).unwrap().count(2), 10);
        let x = complete_skeleton(6, 0).unwrap();
        assert_eq!((x.dim(), x.count(0)), (0, 6));
        assert!(complete_skeleton(3, 3).is_err());
    }

    #[test]
    fn lm_extremes() {
        assert_eq!(linial_meshulam(2, 6, 1.0, 9).unwrap(), complete_skeleton(6, 2).unwrap());
        let empty_top = linial_meshulam(2, 6, 0.0, 9).unwrap();
        assert_eq!(empty_top, complete_skeleton(6, 1).unwrap());
        assert!(linial_meshulam(0, 6, 0.5, 1).is_err());
        assert!(linial_meshulam(2, 2, 0.5, 1).is_err());
        assert!(linial_meshulam(2, 5, 1.5, 1).is_err());
    }

    #[test]
    fn families() {
        let f = random_disjoint_family(4, &[1, 1, 1], 3).unwrap();
        assert!(f.sets().iter().all(|s| s.len() == 1));
        assert_eq!(f, random_disjoint_family(4, &[1, 1, 1], 3).unwrap());
        let p = random_disjoint_family(7, &[3, 4], 11).unwrap();
        let mut all: Vec<usize> = p.sets().concat();
        all.sort();
        assert_eq!(all, (0..7).collect::<Vec<_>>());
        assert!(random_disjoint_family(3, &[2, 2], 0).is_err());
    }

    #[test]
    fn spec_strings() {
        let s: GeneratorSpec = "lm:2:8:0.6:1".parse().unwrap();
        assert_eq!(s, GeneratorSpec::LinialMeshulam { d: 2, n: 8, p: 0.6, seed: 1 });
        assert_eq!(s.to_string().parse::<GeneratorSpec>().unwrap(), s);
        assert_eq!("complete:5:2".parse::<GeneratorSpec>().unwrap().build().unwrap().count(2), 10);
        assert!("complete:5".parse::<GeneratorSpec>().is_err());
        assert!("torus:3".parse::<GeneratorSpec>().is_err());
    }

    #[test]
    fn subsets_in_order() {
        let mut seen = Vec::new();
        for_each_subset(4, 2, |s| seen.push(s.to_vec()));
        assert_eq!(seen, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        let mut count = 0;
        for_each_subset(3, 0, |_| count += 1);
        assert_eq!(count, 1);
    }
}
