//! Gallery counting and the mixing-bound checkers.
//!
//! A j-gallery in `A₀, …, A_ℓ` is a sequence of j-cells `σ₀, …, σ_{ℓ−j}` with
//! `σ_i ∈ F(A_i, …, A_{i+j})` and consecutive cells meeting in a (j−1)-cell of
//! `F(A_{i+1}, …, A_{i+j})`. For disjoint sets the second condition is automatic;
//! when only consecutive windows are disjoint it has to be checked.
//! Counts are computed two ways: by dynamic programming over the layered
//! intersection graph, and as an inner product of characteristic forms through
//! a product of projected adjacency operators. The two must agree exactly.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::complex::{orientation_sign, Cell, SimplicialComplex, VertexId};
use crate::error::{HdxError, Result};
use crate::hodge::{adjacency_matrix, AdjacencyKind, Form, OperatorMatrix};
use crate::spectral::{CertificateSet, ExpanderCertificate};

/// Distance from an integer tolerated in operator-product counts.
pub const INTEGRALITY_TOLERANCE: f64 = 1e-6;

/// An ordered family of vertex sets `A₀, …, A_ℓ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexFamily {
    sets: Vec<Vec<VertexId>>,
}

impl VertexFamily {
    /// A family of pairwise disjoint sets.
    pub fn new(sets: Vec<Vec<VertexId>>) -> Result<Self> {
        let len = sets.len();
        Self::windowed(sets, len.max(1))
    }

    /// A family in which every `window` consecutive sets are pairwise disjoint.
    pub fn windowed(sets: Vec<Vec<VertexId>>, window: usize) -> Result<Self> {
        let sets: Vec<Vec<VertexId>> = sets
            .into_iter()
            .map(|mut s| {
                s.sort_unstable();
                s.dedup();
                s
            })
            .collect();
        for a in 0..sets.len() {
            for b in (a + 1)..sets.len().min(a + window) {
                if sets[a].iter().any(|v| sets[b].binary_search(v).is_ok()) {
                    return Err(HdxError::OverlappingSets(a, b));
                }
            }
        }
        Ok(Self { sets })
    }

    pub fn sets(&self) -> &[Vec<VertexId>] {
        &self.sets
    }

    /// `ℓ`, the index of the last set.
    pub fn last_index(&self) -> usize {
        self.sets.len().saturating_sub(1)
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.sets.iter().map(Vec::len).collect()
    }

    pub fn has_empty(&self) -> bool {
        self.sets.iter().any(Vec::is_empty)
    }

    pub fn is_disjoint_in_windows(&self, window: usize) -> bool {
        Self::windowed(self.sets.clone(), window).is_ok()
    }

    fn check_vertices(&self, x: &SimplicialComplex) -> Result<()> {
        for s in &self.sets {
            if let Some(&v) = s.iter().find(|&&v| v >= x.n()) {
                return Err(HdxError::VertexOutOfRange { vertex: v, n: x.n() });
            }
        }
        Ok(())
    }

    /// Sub-family `A_start, …, A_{start+len−1}`.
    pub fn window(&self, start: usize, len: usize) -> &[Vec<VertexId>] {
        &self.sets[start..start + len]
    }
}

/// `sgn(π)` when the vertices of `cell` lie one in each of `sets` (via `σ_i ∈ A_{π(i)}`), else 0.
pub fn characteristic_value(cell: &Cell, sets: &[Vec<VertexId>]) -> i8 {
    if cell.len() != sets.len() {
        return 0;
    }
    let mut pi = Vec::with_capacity(sets.len());
    for &v in cell.vertices() {
        match sets.iter().position(|s| s.binary_search(&v).is_ok()) {
            Some(i) => pi.push(i),
            None => return 0,
        }
    }
    orientation_sign(&pi).unwrap_or(0)
}

/// The characteristic j-form `δ_{A₀…A_j}` (`j = sets.len() − 1`).
pub fn characteristic_form(x: &SimplicialComplex, sets: &[Vec<VertexId>]) -> Result<Form> {
    VertexFamily::new(sets.to_vec())?.check_vertices(x)?;
    let dim = sets.len() as isize - 1;
    let values = x.cells(dim).iter().map(|c| f64::from(characteristic_value(c, sets))).collect();
    Ok(Form { dim, values })
}

/// Orthogonal projection onto forms supported where `delta` is nonzero.
pub fn projection_apply(delta: &Form, phi: &Form) -> Form {
    assert_eq!(delta.dim, phi.dim);
    let values = delta
        .values
        .iter()
        .zip(&phi.values)
        .map(|(&d, &p)| if d != 0.0 { p } else { 0.0 })
        .collect();
    Form { dim: phi.dim, values }
}

fn layer(x: &SimplicialComplex, j: isize, sets: &[Vec<VertexId>]) -> Vec<usize> {
    x.cells(j)
        .iter()
        .enumerate()
        .filter(|(_, c)| characteristic_value(c, sets) != 0)
        .map(|(i, _)| i)
        .collect()
}

/// Splits `cell` into its vertex in `set` and the remaining face. Cells of a layer
/// have exactly one vertex in each of the layer's sets.
fn split_at_set(cell: &Cell, set: &[VertexId]) -> (VertexId, Vec<VertexId>) {
    let (inside, rest): (Vec<VertexId>, Vec<VertexId>) =
        cell.vertices().iter().partition(|v| set.binary_search(v).is_ok());
    (inside[0], rest)
}

fn check_gallery_params(x: &SimplicialComplex, j: isize, family: &VertexFamily) -> Result<usize> {
    family.check_vertices(x)?;
    if family.sets().is_empty() {
        return Err(HdxError::InvalidParameter("empty family".into()));
    }
    let l = family.last_index();
    if j < 0 || j as usize > l {
        return Err(HdxError::InvalidParameter(format!("gallery dimension {j} outside [0, {l}]")));
    }
    Ok(l)
}

/// `|F^j(A₀, …, A_ℓ)|` by counting paths through the layers `F(A_i, …, A_{i+j})`.
pub fn count_galleries_bruteforce(x: &SimplicialComplex, j: isize, family: &VertexFamily) -> Result<u128> {
    let l = check_gallery_params(x, j, family)?;
    let ju = j as usize;
    if !family.is_disjoint_in_windows(ju + 1) {
        return Err(HdxError::InvalidParameter(format!("consecutive {}-tuples of sets must be disjoint", ju + 1)));
    }
    if j > x.dim() {
        return Ok(0);
    }
    let cells = x.cells(j);
    let sets = family.sets();
    let mut prev_layer = layer(x, j, family.window(0, ju + 1));
    let mut counts: Vec<u128> = vec![1; prev_layer.len()];
    for i in 1..=(l - ju) {
        // consecutive cells must meet in exactly their common face in F(A_i, …, A_{i+j−1}),
        // so the two remaining vertices have to differ
        let mut by_face: HashMap<Vec<VertexId>, Vec<(VertexId, u128)>> = HashMap::new();
        for (&a, &c) in prev_layer.iter().zip(&counts) {
            let (v, face) = split_at_set(&cells[a], &sets[i - 1]);
            by_face.entry(face).or_default().push((v, c));
        }
        let next_layer = layer(x, j, family.window(i, ju + 1));
        counts = next_layer
            .iter()
            .map(|&b| {
                let (w, face) = split_at_set(&cells[b], &sets[i + ju]);
                by_face.get(&face).map_or(0, |ends| ends.iter().filter(|(v, _)| *v != w).map(|(_, c)| c).sum())
            })
            .collect();
        prev_layer = next_layer;
    }
    Ok(counts.iter().sum())
}

/// Gallery count as `|⟨δ_{A₀…A_j}, (Π_i P_{A_i…A_{i+j}} (𝒜_j + T)) δ_{A_{ℓ−j}…A_ℓ}⟩|`.
///
/// With `kind = Similar` this is `|F^{j+1}(A₀, …, A_ℓ)|`; with `kind = Pitchfork` it
/// is `|F^j(A₀, …, A_ℓ)|`. `shift` is an optional diagonal `T` which cannot change
/// the result because consecutive characteristic forms have disjoint supports.
pub fn count_galleries_operator_shifted(
    x: &SimplicialComplex,
    j: isize,
    family: &VertexFamily,
    kind: AdjacencyKind,
    shift: Option<&[f64]>,
) -> Result<u128> {
    let l = check_gallery_params(x, j, family)?;
    let ju = j as usize;
    if kind == AdjacencyKind::Similar && ju >= l {
        return Err(HdxError::InvalidParameter(format!("similar-kind count needs j < l, got j={j}, l={l}")));
    }
    // galleries of dimension g have consecutive cells meeting in exactly a (g−1)-face
    // only if A_i and A_{i+g+1} are disjoint, so g+2 consecutive sets must be disjoint
    let window = match kind {
        AdjacencyKind::Pitchfork => ju + 2,
        AdjacencyKind::Similar => ju + 3,
    };
    if !family.is_disjoint_in_windows(window) {
        return Err(HdxError::InvalidParameter(format!("consecutive {window}-tuples of sets must be disjoint")));
    }
    let adjacency = adjacency_matrix(x, j, kind)?;
    if let Some(t) = shift {
        if t.len() != x.count(j) {
            return Err(HdxError::InvalidParameter(format!("shift has length {}, expected {}", t.len(), x.count(j))));
        }
    }
    let value = operator_product(x, j, family, &adjacency, shift)?;
    let rounded = value.round();
    if (value - rounded).abs() > INTEGRALITY_TOLERANCE {
        return Err(HdxError::NonIntegerCount(value));
    }
    Ok(rounded.abs() as u128)
}

fn operator_product(
    x: &SimplicialComplex,
    j: isize,
    family: &VertexFamily,
    adjacency: &OperatorMatrix,
    shift: Option<&[f64]>,
) -> Result<f64> {
    let ju = j as usize;
    let l = family.last_index();
    let mut v = characteristic_form(x, family.window(l - ju, ju + 1))?;
    for i in (0..(l - ju)).rev() {
        let mut w = Form { dim: j, values: adjacency.apply(&v.values) };
        if let Some(t) = shift {
            for (wi, (ti, vi)) in w.values.iter_mut().zip(t.iter().zip(&v.values)) {
                *wi += ti * vi;
            }
        }
        let delta = characteristic_form(x, family.window(i, ju + 1))?;
        v = projection_apply(&delta, &w);
    }
    let first = characteristic_form(x, family.window(0, ju + 1))?;
    Ok(first.inner(&v))
}

pub fn count_galleries_operator(
    x: &SimplicialComplex,
    j: isize,
    family: &VertexFamily,
    kind: AdjacencyKind,
) -> Result<u128> {
    count_galleries_operator_shifted(x, j, family, kind, None)
}

/// `c_{j,ℓ}` from `c_{j,ℓ} = c_{j−1,ℓ} + (ℓ−j)(1 + j·c_{j−1,j})` with `c_{−1,ℓ} = 0`.
///
/// Every step has integer coefficients, so the constants are integers.
pub fn cjl_constant(j: isize, l: isize) -> Result<u64> {
    if j < -1 || j >= l {
        return Err(HdxError::InvalidParameter(format!("c_(j,l) needs -1 <= j < l, got j={j}, l={l}")));
    }
    if j == -1 {
        return Ok(0);
    }
    let below = cjl_constant(j - 1, l)?;
    let inner = cjl_constant(j - 1, j)?;
    let step = (l - j) as u64 * (1 + j as u64 * inner);
    below
        .checked_add(step)
        .ok_or_else(|| HdxError::InvalidParameter("constant overflows u64".into()))
}

/// `c_d = c_{d−1,d}`, the constant of the top-dimensional mixing bound.
pub fn c_d(d: isize) -> Result<u64> {
    if d < 1 {
        return Err(HdxError::InvalidParameter(format!("c_d needs d >= 1, got {d}")));
    }
    cjl_constant(d - 1, d)
}

/// One Descent Lemma evaluation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DescentReport {
    pub j: isize,
    pub l: usize,
    /// `|F^{j+1}(A₀, …, A_ℓ)|`
    pub upper_count: u128,
    /// `|F^j(A₀, …, A_ℓ)|`
    pub lower_count: u128,
    /// `(k_j/k_{j−1})^{ℓ−j} |F^j|`
    pub estimate: f64,
    pub deviation: f64,
    pub bound: f64,
    pub improved_bound: f64,
    pub holds: bool,
    pub holds_improved: bool,
    pub degenerate: bool,
    pub certs: Vec<CertEntry>,
    pub sets: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertEntry {
    pub j: isize,
    pub k: f64,
    pub eps: f64,
}

impl From<ExpanderCertificate> for CertEntry {
    fn from(c: ExpanderCertificate) -> Self {
        Self { j: c.j, k: c.k, eps: c.eps }
    }
}

fn tolerance_scale(tol: f64, values: &[f64]) -> f64 {
    tol * values.iter().fold(1.0f64, |a, v| a.max(v.abs()))
}

/// Compares `|F^{j+1}|` with `(k_j/k_{j−1})^{ℓ−j} |F^j|` against
/// `(ℓ−j) k_j^{ℓ−j} (ε_j + ε_{j−1}) √(|F(A₀…A_j)| |F(A_{ℓ−j}…A_ℓ)|)` and its sharper
/// variant with `2ε((1+ε)/2)^{ℓ−j−1}` in place of `ε_j + ε_{j−1}`, `ε = max(ε_{j−1}, ε_j)`.
///
/// Only consecutive (j+3)-tuples of sets need to be disjoint, which is what the
/// (j+1)-gallery count needs to agree with its operator product.
pub fn descent_check(
    x: &SimplicialComplex,
    j: isize,
    family: &VertexFamily,
    certs: &CertificateSet,
    tol: f64,
) -> Result<DescentReport> {
    let l = check_gallery_params(x, j, family)?;
    let ju = j as usize;
    if ju >= l {
        return Err(HdxError::InvalidParameter(format!("descent needs j < l, got j={j}, l={l}")));
    }
    if !family.is_disjoint_in_windows(ju + 3) {
        return Err(HdxError::InvalidParameter(format!("consecutive {}-tuples of sets must be disjoint", ju + 3)));
    }
    let prev = certs.require(j - 1)?;
    let cur = certs.require(j)?;
    let upper_count = count_galleries_bruteforce(x, j + 1, family)?;
    let lower_count = count_galleries_bruteforce(x, j, family)?;
    let steps = (l - ju) as i32;
    let estimate = (cur.k / prev.k).powi(steps) * lower_count as f64;
    let deviation = (upper_count as f64 - estimate).abs();
    let head = VertexFamily::windowed(family.window(0, ju + 1).to_vec(), ju + 1)?;
    let tail = VertexFamily::windowed(family.window(l - ju, ju + 1).to_vec(), ju + 1)?;
    let f_head = count_galleries_bruteforce(x, j, &head)? as f64;
    let f_tail = count_galleries_bruteforce(x, j, &tail)? as f64;
    let root = (f_head * f_tail).sqrt();
    let scale = steps as f64 * cur.k.powi(steps) * root;
    let bound = scale * (cur.eps + prev.eps);
    let eps = cur.eps.max(prev.eps);
    let improved_bound = scale * 2.0 * eps * ((1.0 + eps) / 2.0).powi(steps - 1);
    let slack = tolerance_scale(tol, &[estimate, upper_count as f64]);
    Ok(DescentReport {
        j,
        l,
        upper_count,
        lower_count,
        estimate,
        deviation,
        bound,
        improved_bound,
        holds: deviation <= bound + slack,
        holds_improved: deviation <= improved_bound + slack,
        degenerate: family.has_empty(),
        certs: vec![prev.into(), cur.into()],
        sets: family.sizes(),
    })
}

/// Observed gallery count against a predicted main term and error bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixingReport {
    pub observed: u128,
    pub main_term: f64,
    pub bound: f64,
    /// `bound − |observed − main_term|`
    pub slack: f64,
    pub holds: bool,
    pub degenerate: bool,
    pub j: isize,
    pub l: usize,
    pub constant: u64,
    pub certs: Vec<CertEntry>,
    pub sets: Vec<usize>,
}

/// `|F^{j+1}(A₀…A_ℓ)|` against `k₀⋯k_{j−1} k_j^{ℓ−j} Π|A_i| / n^ℓ`, with error bound
/// `c_{j,ℓ} k₀⋯k_{j−1} k_j^{ℓ−j} (ε₀+⋯+ε_j) max|A_i|`. Sets must be pairwise disjoint.
pub fn from_j_to_l_check(
    x: &SimplicialComplex,
    j: isize,
    family: &VertexFamily,
    certs: &CertificateSet,
    tol: f64,
) -> Result<MixingReport> {
    let l = check_gallery_params(x, j, family)?;
    let ju = j as usize;
    if ju >= l {
        return Err(HdxError::InvalidParameter(format!("needs j < l, got j={j}, l={l}")));
    }
    VertexFamily::new(family.sets().to_vec())?;
    let used = (0..=j).map(|i| certs.require(i)).collect::<Result<Vec<_>>>()?;
    let steps = (l - ju) as i32;
    let k_product: f64 = used[..ju].iter().map(|c| c.k).product::<f64>() * used[ju].k.powi(steps);
    let eps_sum: f64 = used.iter().map(|c| c.eps).sum();
    let sizes = family.sizes();
    let size_product: f64 = sizes.iter().map(|&s| s as f64).product();
    let max_size = sizes.iter().copied().max().unwrap_or(0) as f64;
    let n = x.n() as f64;
    let main_term = k_product * size_product / n.powi(l as i32);
    let constant = cjl_constant(j, l as isize)?;
    let bound = constant as f64 * k_product * eps_sum * max_size;
    let observed = count_galleries_bruteforce(x, j + 1, family)?;
    let slack = bound - (observed as f64 - main_term).abs();
    Ok(MixingReport {
        observed,
        main_term,
        bound,
        slack,
        holds: slack >= -tolerance_scale(tol, &[main_term, observed as f64]),
        degenerate: family.has_empty(),
        j,
        l,
        constant,
        certs: used.into_iter().map(Into::into).collect(),
        sets: sizes,
    })
}

/// The top-dimensional mixing bound: `j = d−1`, `ℓ = d`, constant `c_d`.
pub fn mixing_check(
    x: &SimplicialComplex,
    family: &VertexFamily,
    certs: &CertificateSet,
    tol: f64,
) -> Result<MixingReport> {
    let d = x.dim();
    if d < 1 {
        return Err(HdxError::InvalidParameter("mixing needs a complex of dimension >= 1".into()));
    }
    if family.sets().len() != d as usize + 1 {
        return Err(HdxError::InvalidParameter(format!(
            "expected {} sets for a {d}-complex, got {}",
            d + 1,
            family.sets().len()
        )));
    }
    from_j_to_l_check(x, d - 1, family, certs, tol)
}
