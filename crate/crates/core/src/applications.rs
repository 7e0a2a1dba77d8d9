//! Consequences of spectral expansion: chromatic bounds, geometric overlap, and
//! the ideal-expander rigidity check.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::complex::{SimplicialComplex, VertexId};
use crate::error::{HdxError, Result};
use crate::generators::{random_disjoint_family, SeededRng};
use crate::mixing::{c_d, count_galleries_bruteforce};
use crate::spectral::{nontrivial_spectrum, CertificateSet};

/// Largest vertex count accepted by [`chromatic_number_exact`].
pub const CHROMATIC_VERTEX_GUARD: usize = 20;
/// Barycentric coordinates above `-BARYCENTRIC_TOLERANCE` count as inside.
pub const BARYCENTRIC_TOLERANCE: f64 = 1e-12;
/// Spectra this close to a single value (relative) are treated as exactly concentrated.
pub const IDEAL_TOLERANCE: f64 = 1e-8;

/// A vertex coloring; proper when no top-dimensional cell is monochromatic.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring {
    pub colors: Vec<usize>,
}

impl Coloring {
    pub fn is_proper(&self, x: &SimplicialComplex) -> bool {
        let d = x.dim();
        if d < 1 {
            return true;
        }
        x.cells(d).iter().all(|c| {
            let first = self.colors[c.vertices()[0]];
            c.vertices().iter().any(|&v| self.colors[v] != first)
        })
    }

    pub fn color_count(&self) -> usize {
        self.colors.iter().copied().max().map_or(0, |m| m + 1)
    }
}

fn eps_sum(d: isize, certs: &CertificateSet) -> Result<f64> {
    (0..d).map(|j| certs.require(j).map(|c| c.eps)).sum()
}

/// `1 / ((d+1) · (c_d · Σ ε_j)^{1/d})`.
pub fn chromatic_bound_from_eps(d: isize, eps_sum: f64) -> Result<f64> {
    if !(eps_sum > 0.0) {
        return Err(HdxError::ZeroEpsilonSum);
    }
    let c = c_d(d)? as f64;
    Ok(1.0 / ((d + 1) as f64 * (c * eps_sum).powf(1.0 / d as f64)))
}

/// Spectral lower bound on the chromatic number of a d-dimensional expander.
pub fn chromatic_lower_bound(d: isize, certs: &CertificateSet) -> Result<f64> {
    chromatic_bound_from_eps(d, eps_sum(d, certs)?)
}

/// Smallest number of colors with no monochromatic top cell, if at most `c_max`.
///
/// Vertices are colored in order of decreasing top-cell incidence (ties by id);
/// a vertex may only open the next unused color, which fixes the first vertex
/// to color 0 and removes color permutations.
pub fn chromatic_number_exact(x: &SimplicialComplex, c_max: usize) -> Result<Option<usize>> {
    let n = x.n();
    if n > CHROMATIC_VERTEX_GUARD {
        return Err(HdxError::TooManyVertices { n, guard: CHROMATIC_VERTEX_GUARD });
    }
    let d = x.dim();
    if d < 1 {
        return Ok((c_max >= 1).then_some(1));
    }
    let top = x.cells(d);
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, c) in top.iter().enumerate() {
        for &v in c.vertices() {
            incident[v].push(i);
        }
    }
    let mut order: Vec<VertexId> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(incident[v].len()), v));
    for c in 1..=c_max {
        let mut colors = vec![usize::MAX; n];
        if color_from(0, 0, c, &order, &incident, top, &mut colors) {
            debug_assert!(Coloring { colors: colors.clone() }.is_proper(x));
            return Ok(Some(c));
        }
    }
    Ok(None)
}

fn color_from(
    pos: usize,
    used: usize,
    c: usize,
    order: &[VertexId],
    incident: &[Vec<usize>],
    top: &[crate::complex::Cell],
    colors: &mut [usize],
) -> bool {
    let Some(&v) = order.get(pos) else {
        return true;
    };
    for color in 0..c.min(used + 1) {
        colors[v] = color;
        let ok = incident[v].iter().all(|&i| {
            let vs = top[i].vertices();
            !vs.iter().all(|&u| colors[u] == color)
        });
        if ok && color_from(pos + 1, used.max(color + 1), c, order, incident, top, colors) {
            return true;
        }
    }
    colors[v] = usize::MAX;
    false
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OverlapBound {
    pub value: f64,
    /// The bound is non-positive and says nothing.
    pub vacuous: bool,
}

/// `(𝒫_d d!/2^d) [(𝒫_d/(d+1))^d − c_d Σ ε_j]`, from a pure `Σ ε`.
pub fn overlap_bound_from_eps(d: isize, pach: f64, eps_sum: f64) -> Result<OverlapBound> {
    if !(pach > 0.0 && pach <= 1.0) {
        return Err(HdxError::InvalidParameter(format!("Pach constant {pach} outside (0, 1]")));
    }
    let c = c_d(d)? as f64;
    let factorial: f64 = (1..=d).map(|i| i as f64).product();
    let value = pach * factorial / 2f64.powi(d as i32) * ((pach / (d + 1) as f64).powi(d as i32) - c * eps_sum);
    Ok(OverlapBound { value, vacuous: value <= 0.0 })
}

/// Lower bound on the geometric overlap of a d-dimensional expander; `pach` is Pach's constant `𝒫_d`.
pub fn overlap_bound(d: isize, pach: f64, certs: &CertificateSet) -> Result<OverlapBound> {
    overlap_bound_from_eps(d, pach, eps_sum(d, certs)?)
}

/// A straight-line map of the vertices into `ℝ^d`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Embedding {
    pub coords: Vec<Vec<f64>>,
}

impl Embedding {
    pub fn random(n: usize, d: usize, rng: &mut SeededRng) -> Self {
        Self { coords: (0..n).map(|_| (0..d).map(|_| rng.uniform()).collect()).collect() }
    }

    /// `coords[perm[v]]` takes the point of `v`, for use with a relabeled complex.
    pub fn relabeled(&self, perm: &[VertexId]) -> Self {
        let mut coords = self.coords.clone();
        for (v, &w) in perm.iter().enumerate() {
            coords[w] = self.coords[v].clone();
        }
        Self { coords }
    }
}

/// Precomputed barycentric solver for one image simplex; `None` when degenerate.
struct ImageSimplex {
    origin: DVector<f64>,
    inverse: DMatrix<f64>,
}

impl ImageSimplex {
    fn new(points: &[&[f64]]) -> Option<Self> {
        let d = points.len() - 1;
        let origin = DVector::from_column_slice(points[0]);
        let edges = DMatrix::from_fn(d, d, |r, c| points[c + 1][r] - points[0][r]);
        let inverse = edges.try_inverse()?;
        Some(Self { origin, inverse })
    }

    fn contains(&self, x: &DVector<f64>) -> bool {
        let mu = &self.inverse * (x - &self.origin);
        let rest = 1.0 - mu.sum();
        rest >= -BARYCENTRIC_TOLERANCE && mu.iter().all(|&m| m >= -BARYCENTRIC_TOLERANCE)
    }
}

fn image_simplices(x: &SimplicialComplex, embedding: &Embedding) -> Result<Vec<Option<ImageSimplex>>> {
    let d = x.dim();
    if d < 1 || x.count(d) == 0 {
        return Err(HdxError::NoTopCells);
    }
    if embedding.coords.len() != x.n() || embedding.coords.iter().any(|p| p.len() != d as usize) {
        return Err(HdxError::InvalidParameter(format!("embedding must give {} points in R^{d}", x.n())));
    }
    Ok(x.cells(d)
        .iter()
        .map(|c| {
            let pts: Vec<&[f64]> = c.vertices().iter().map(|&v| embedding.coords[v].as_slice()).collect();
            ImageSimplex::new(&pts)
        })
        .collect())
}

/// Fraction of top cells whose image contains `point`; degenerate images cover nothing.
fn coverage(simplices: &[Option<ImageSimplex>], point: &DVector<f64>) -> f64 {
    let hits = simplices.iter().flatten().filter(|s| s.contains(point)).count();
    hits as f64 / simplices.len() as f64
}

pub fn centroid(x: &SimplicialComplex, embedding: &Embedding, cell_index: usize) -> Vec<f64> {
    let cell = &x.cells(x.dim())[cell_index];
    let d = x.dim() as usize;
    let mut c = vec![0.0; d];
    for &v in cell.vertices() {
        for (ci, pi) in c.iter_mut().zip(&embedding.coords[v]) {
            *ci += pi;
        }
    }
    c.iter_mut().for_each(|ci| *ci /= cell.len() as f64);
    c
}

/// Max over `candidates` of the fraction of top cells covering the candidate.
pub fn overlap_of_embedding(x: &SimplicialComplex, embedding: &Embedding, candidates: &[Vec<f64>]) -> Result<f64> {
    let simplices = image_simplices(x, embedding)?;
    Ok(candidates
        .iter()
        .map(|p| coverage(&simplices, &DVector::from_column_slice(p)))
        .fold(0.0, f64::max))
}

/// Candidate points for the overlap estimator.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CandidateStrategy {
    /// Centroids of up to this many sampled top cells (all cells if fewer).
    pub centroid_cells: usize,
    /// Uniform points in the bounding box of the image.
    pub random_points: usize,
}

impl Default for CandidateStrategy {
    fn default() -> Self {
        Self { centroid_cells: 500, random_points: 500 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OverlapEstimate {
    /// Minimum over sampled embeddings of the best candidate coverage. A heuristic
    /// for the min-max; neither an upper nor a lower bound on the true overlap.
    pub estimate: f64,
    pub per_embedding: Vec<f64>,
    pub heuristic: bool,
    pub seed: u64,
}

/// Samples `embeddings` random maps into `[0,1]^d`. Embedding `e` uses the seed
/// `seed + e` (wrapping), so each embedding is reproducible on its own.
pub fn overlap_estimate(
    x: &SimplicialComplex,
    embeddings: usize,
    strategy: CandidateStrategy,
    seed: u64,
) -> Result<OverlapEstimate> {
    let d = x.dim();
    if d < 1 || x.count(d) == 0 {
        return Err(HdxError::NoTopCells);
    }
    if embeddings == 0 {
        return Err(HdxError::InvalidParameter("need at least one embedding".into()));
    }
    let du = d as usize;
    let top = x.count(d);
    let mut per_embedding = Vec::with_capacity(embeddings);
    for e in 0..embeddings {
        let mut rng = SeededRng::new(seed.wrapping_add(e as u64));
        let emb = Embedding::random(x.n(), du, &mut rng);
        let mut cells: Vec<usize> = (0..top).collect();
        if strategy.centroid_cells < top {
            rng.shuffle(&mut cells);
            cells.truncate(strategy.centroid_cells);
        }
        let mut candidates: Vec<Vec<f64>> = cells.iter().map(|&i| centroid(x, &emb, i)).collect();
        let (lo, hi) = bounding_box(&emb, du);
        for _ in 0..strategy.random_points {
            candidates.push((0..du).map(|a| lo[a] + rng.uniform() * (hi[a] - lo[a])).collect());
        }
        per_embedding.push(overlap_of_embedding(x, &emb, &candidates)?);
    }
    let estimate = per_embedding.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(OverlapEstimate { estimate, per_embedding, heuristic: true, seed })
}

fn bounding_box(emb: &Embedding, d: usize) -> (Vec<f64>, Vec<f64>) {
    let mut lo = vec![f64::INFINITY; d];
    let mut hi = vec![f64::NEG_INFINITY; d];
    for p in &emb.coords {
        for a in 0..d {
            lo[a] = lo[a].min(p[a]);
            hi[a] = hi[a].max(p[a]);
        }
    }
    (lo, hi)
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Whether `x` contains every cell of dimension at most `d` on its vertices.
pub fn is_complete_skeleton(x: &SimplicialComplex) -> bool {
    (0..=x.dim()).all(|j| x.count(j) as u128 == binomial(x.n(), j as usize + 1))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdealMixingSample {
    pub j: isize,
    pub l: usize,
    pub sets: Vec<usize>,
    pub count: u128,
    pub predicted: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdealReport {
    /// Every `0 ≤ j < d` has a concentrated nontrivial spectrum (`ε_j = 0`).
    pub ideal: bool,
    pub ks: Vec<Option<f64>>,
    pub eps: Vec<Option<f64>>,
    pub complete_skeleton: bool,
    /// Ideal and a complete skeleton.
    pub accepted: bool,
    /// An ideal complex must be a complete skeleton.
    pub rigidity_holds: bool,
    pub samples: Vec<IdealMixingSample>,
    pub mixing_holds: bool,
}

/// Decides whether `x` is an ideal expander and, if so, checks that gallery counts
/// between random disjoint families are exactly
/// `k₀⋯k_{j−2} k_{j−1}^{ℓ−j+1} Π|A_i| / n^ℓ`.
pub fn ideal_expander_check(x: &SimplicialComplex, families: usize, seed: u64) -> Result<IdealReport> {
    let d = x.dim();
    let mut ks = Vec::new();
    let mut eps = Vec::new();
    for j in 0..d {
        let spec = nontrivial_spectrum(x, j)?;
        let lo = spec.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = spec.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if spec.is_empty() || hi <= 0.0 {
            ks.push(None);
            eps.push(None);
        } else {
            ks.push(Some((lo + hi) / 2.0));
            eps.push(Some((hi - lo) / (hi + lo)));
        }
    }
    let ideal = eps.iter().all(|e| e.is_some_and(|e| e <= IDEAL_TOLERANCE));
    let complete_skeleton = is_complete_skeleton(x);
    let mut samples = Vec::new();
    if ideal && d >= 1 {
        let k: Vec<f64> = ks.iter().map(|k| k.expect("ideal spectra are nonzero")).collect();
        let mut rng = SeededRng::new(seed);
        let n = x.n();
        let mut attempts = 0;
        while samples.len() < families && attempts < 50 * families.max(1) {
            attempts += 1;
            let l = 1 + rng.below((d as usize + 1).min(n - 1));
            let cap = n / (l + 1);
            if cap == 0 {
                continue;
            }
            let sizes: Vec<usize> = (0..=l).map(|_| 1 + rng.below(cap)).collect();
            let j = 1 + rng.below(l.min(d as usize)) as isize;
            let family = random_disjoint_family(n, &sizes, rng.next_u64())?;
            let count = count_galleries_bruteforce(x, j, &family)?;
            let ju = j as usize;
            let k_part: f64 = k[..ju - 1].iter().product::<f64>() * k[ju - 1].powi((l - ju + 1) as i32);
            let sizes_product: f64 = sizes.iter().map(|&s| s as f64).product();
            let predicted = k_part * sizes_product / (n as f64).powi(l as i32);
            let holds = (count as f64 - predicted).abs() <= 1e-6 * predicted.max(1.0);
            samples.push(IdealMixingSample { j, l, sets: sizes, count, predicted, holds });
        }
    }
    let mixing_holds = samples.iter().all(|s| s.holds);
    Ok(IdealReport {
        ideal,
        ks,
        eps,
        complete_skeleton,
        accepted: ideal && complete_skeleton,
        rigidity_holds: !ideal || complete_skeleton,
        samples,
        mixing_holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::complete_skeleton;

    fn k4_graph() -> SimplicialComplex {
        complete_skeleton(4, 1).unwrap()
    }

    #[test]
    fn chromatic_examples() {
        let t = SimplicialComplex::build_from_facets(3, &[[0, 1, 2]]).unwrap();
        assert_eq!(chromatic_number_exact(&t, 5).unwrap(), Some(2));
        assert_eq!(chromatic_number_exact(&k4_graph(), 5).unwrap(), Some(4));
        assert_eq!(chromatic_number_exact(&k4_graph(), 3).unwrap(), None);
        assert_eq!(chromatic_number_exact(&complete_skeleton(3, 0).unwrap(), 5).unwrap(), Some(1));
        assert!(matches!(
            chromatic_number_exact(&complete_skeleton(21, 0).unwrap(), 3),
            Err(HdxError::TooManyVertices { .. })
        ));
    }

    #[test]
    fn chromatic_bound_values() {
        let b = chromatic_bound_from_eps(2, 0.01).unwrap();
        assert!((b - 5.0 / 3.0).abs() < 1e-12);
        assert!((chromatic_bound_from_eps(1, 0.2).unwrap() - 1.0 / (2.0 * 0.2)).abs() < 1e-12);
        assert!(matches!(chromatic_bound_from_eps(2, 0.0), Err(HdxError::ZeroEpsilonSum)));
        let near_one = chromatic_bound_from_eps(3, 0.999_999).unwrap();
        assert!((near_one - 1.0 / (4.0 * 16f64.cbrt())).abs() < 1e-6);
    }

    #[test]
    fn overlap_bound_values() {
        let b = overlap_bound_from_eps(2, 0.1, 0.0).unwrap();
        assert!((b.value - 0.05 / 900.0).abs() < 1e-15 && !b.vacuous);
        assert!(overlap_bound_from_eps(2, 0.1, 0.5).unwrap().vacuous);
        assert!(overlap_bound_from_eps(2, 0.0, 0.0).is_err());
        assert!(overlap_bound_from_eps(2, 1.5, 0.0).is_err());
    }

    #[test]
    fn overlap_single_cell() {
        let t = SimplicialComplex::build_from_facets(3, &[[0, 1, 2]]).unwrap();
        let est = overlap_estimate(&t, 5, CandidateStrategy::default(), 7).unwrap();
        assert_eq!(est.estimate, 1.0);
        assert!(overlap_estimate(&complete_skeleton(3, 0).unwrap(), 1, CandidateStrategy::default(), 0).is_err());
    }

    #[test]
    fn overlap_separated_triangles() {
        let x = SimplicialComplex::build_from_facets(6, &[[0, 1, 2], [3, 4, 5]]).unwrap();
        let emb = Embedding {
            coords: vec![
                vec![0.0, 0.0],
                vec![1.0, 0.0],
                vec![0.0, 1.0],
                vec![10.0, 10.0],
                vec![11.0, 10.0],
                vec![10.0, 11.0],
            ],
        };
        let candidates: Vec<Vec<f64>> = (0..2).map(|i| centroid(&x, &emb, i)).collect();
        assert_eq!(overlap_of_embedding(&x, &emb, &candidates).unwrap(), 0.5);
    }

    #[test]
    fn ideal_k5() {
        let r = ideal_expander_check(&complete_skeleton(5, 2).unwrap(), 20, 1).unwrap();
        assert!(r.ideal && r.accepted && r.rigidity_holds && r.mixing_holds);
        assert_eq!(r.samples.len(), 20);
        let c4 = SimplicialComplex::build_from_facets(4, &[[0, 1], [1, 2], [2, 3], [0, 3]]).unwrap();
        let r = ideal_expander_check(&c4, 20, 1).unwrap();
        assert!(!r.ideal && !r.accepted && r.samples.is_empty());
    }
}
