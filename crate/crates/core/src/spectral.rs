//! Laplace spectra, Betti numbers and `(j, k, ε)`-expander certificates.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::complex::SimplicialComplex;
use crate::error::{HdxError, Result};
use crate::hodge::{boundary_matrix, laplacian, LaplacianKind, OperatorMatrix};

/// Values below this fraction of the largest Gram eigenvalue count as zero when taking ranks.
pub const RANK_TOLERANCE: f64 = 1e-10;
/// Eigenvalues within this (scaled) distance of zero are treated as zero.
pub const ZERO_TOLERANCE: f64 = 1e-8;
/// `ε` at or below this is eigensolver round-off and is reported as exactly 0.
pub const EPS_ROUNDOFF: f64 = 1e-12;
const MAX_SWEEPS_PER_ROW: usize = 1000;

/// Ascending eigenvalues of a symmetric matrix.
pub fn eigen_symmetric(m: &DMatrix<f64>) -> Result<Vec<f64>> {
    Ok(eigen_symmetric_with_vectors(m)?.0)
}

/// Ascending eigenvalues and the matching orthonormal eigenvectors (as columns).
pub fn eigen_symmetric_with_vectors(m: &DMatrix<f64>) -> Result<(Vec<f64>, DMatrix<f64>)> {
    if m.nrows() != m.ncols() {
        return Err(HdxError::NotSquare { rows: m.nrows(), cols: m.ncols() });
    }
    let n = m.nrows();
    if n == 0 {
        return Ok((Vec::new(), DMatrix::zeros(0, 0)));
    }
    let cap = MAX_SWEEPS_PER_ROW * n.max(1);
    let eig = SymmetricEigen::try_new(m.clone(), f64::EPSILON, cap).ok_or(HdxError::NoConvergence(cap))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok((values, vectors))
}

/// Spectral norm of a symmetric matrix (largest absolute eigenvalue).
pub fn symmetric_norm(m: &DMatrix<f64>) -> Result<f64> {
    Ok(eigen_symmetric(m)?.into_iter().fold(0.0, |acc, v| acc.max(v.abs())))
}

/// Rank over the reals, via eigenvalues of the smaller Gram matrix.
pub fn rank(m: &OperatorMatrix) -> Result<usize> {
    if m.rows() == 0 || m.cols() == 0 || m.is_zero() {
        return Ok(0);
    }
    let t = m.transpose();
    let gram = if m.rows() <= m.cols() { m.matmul(&t)? } else { t.matmul(m)? };
    let ev = eigen_symmetric(&gram.to_dense())?;
    let top = ev.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
    Ok(ev.iter().filter(|&&v| v > RANK_TOLERANCE * top).count())
}

/// Rank of `∂_j`, with the convention `∂_j = 0` outside `[0, d]`.
pub fn boundary_rank(x: &SimplicialComplex, j: isize) -> Result<usize> {
    if j < 0 || j > x.dim() {
        return Ok(0);
    }
    rank(&boundary_matrix(x, j)?)
}

fn check_upper_range(x: &SimplicialComplex, j: isize) -> Result<()> {
    if j < -1 || j > x.dim() - 1 {
        return Err(HdxError::DimensionOutOfRange { j, d: x.dim(), what: "upper spectrum" });
    }
    Ok(())
}

/// Full ascending spectrum of `Δ_j⁺`.
pub fn upper_spectrum(x: &SimplicialComplex, j: isize) -> Result<Vec<f64>> {
    check_upper_range(x, j)?;
    eigen_symmetric(&laplacian(x, j, LaplacianKind::Upper)?.to_dense())
}

/// Spectrum of `Δ_j⁺` restricted to `Z_j = ker ∂_j`.
///
/// `Δ_j⁺` vanishes on `B^j = im δ_j`, which has dimension `rank ∂_j`, so that many
/// of the smallest eigenvalues are discarded. For `j = -1` this is `{n}`.
pub fn nontrivial_spectrum(x: &SimplicialComplex, j: isize) -> Result<Vec<f64>> {
    check_upper_range(x, j)?;
    if j == -1 {
        return Ok(vec![x.n() as f64]);
    }
    let mut spectrum = upper_spectrum(x, j)?;
    let trivial = boundary_rank(x, j)?;
    spectrum.drain(..trivial);
    Ok(spectrum)
}

/// Reduced real Betti number `β_j = |X^j| − rank ∂_j − rank ∂_{j+1}`.
pub fn betti(x: &SimplicialComplex, j: isize) -> Result<usize> {
    if j < 0 || j > x.dim() {
        return Err(HdxError::DimensionOutOfRange { j, d: x.dim(), what: "betti" });
    }
    Ok(x.count(j) - boundary_rank(x, j)? - boundary_rank(x, j + 1)?)
}

pub fn is_zero_eigenvalue(value: f64, scale: f64) -> bool {
    value.abs() <= ZERO_TOLERANCE * scale.abs().max(1.0)
}

/// A claimed enclosure `Spec Δ_j⁺|_{Z_j} ⊆ [k(1−ε), k(1+ε)]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpanderCertificate {
    pub j: isize,
    pub k: f64,
    pub eps: f64,
    /// `ε < 1`, which also forces `β_j = 0`.
    pub valid: bool,
    /// Set when `Z_j = 0`; the enclosure holds for any `k` and `ε = 0` by convention.
    #[serde(default)]
    pub vacuous: bool,
}

impl ExpanderCertificate {
    /// A user-supplied certificate.
    pub fn new(j: isize, k: f64, eps: f64) -> Result<Self> {
        if !(k > 0.0) {
            return Err(HdxError::NonPositiveK(k));
        }
        if !(eps >= 0.0) {
            return Err(HdxError::InvalidParameter(format!("eps must be non-negative, got {eps}")));
        }
        Ok(Self { j, k, eps, valid: eps < 1.0, vacuous: false })
    }

    /// Every complex is a `(-1, n, 0)`-expander.
    pub fn minus_one(n: usize) -> Self {
        Self { j: -1, k: n as f64, eps: 0.0, valid: true, vacuous: false }
    }

    /// Whether every value of `spectrum` lies in the enclosure, up to `tol` relative to `k`.
    pub fn encloses(&self, spectrum: &[f64], tol: f64) -> bool {
        let slack = tol * self.k.max(1.0);
        spectrum
            .iter()
            .all(|&l| l >= self.k * (1.0 - self.eps) - slack && l <= self.k * (1.0 + self.eps) + slack)
    }
}

/// Certificate for a given nontrivial spectrum.
///
/// With `k` supplied, `ε = max |λ/k − 1|`. Otherwise the midpoint
/// `k* = (λ_min + λ_max)/2` gives the smallest symmetric enclosure,
/// `ε* = (λ_max − λ_min)/(λ_max + λ_min)`. A spectrum that is identically zero has
/// `ε = 1` for every `k`; it is reported with `k = 1`.
pub fn certify_spectrum(j: isize, nontrivial: &[f64], k: Option<f64>) -> Result<ExpanderCertificate> {
    if let Some(k) = k {
        if !(k > 0.0) {
            return Err(HdxError::NonPositiveK(k));
        }
    }
    if nontrivial.is_empty() {
        return Err(HdxError::EmptyNontrivialSpectrum(j));
    }
    let lo = nontrivial.iter().copied().fold(f64::INFINITY, f64::min).max(0.0);
    let hi = nontrivial.iter().copied().fold(f64::NEG_INFINITY, f64::max).max(0.0);
    let (k, eps) = match k {
        Some(k) => (k, nontrivial.iter().map(|&l| (l / k - 1.0).abs()).fold(0.0, f64::max)),
        None if hi <= 0.0 => (1.0, 1.0),
        None => ((lo + hi) / 2.0, (hi - lo) / (hi + lo)),
    };
    let eps = if eps <= EPS_ROUNDOFF { 0.0 } else { eps };
    Ok(ExpanderCertificate { j, k, eps, valid: eps < 1.0, vacuous: false })
}

pub fn certify(x: &SimplicialComplex, j: isize, k: Option<f64>) -> Result<ExpanderCertificate> {
    certify_spectrum(j, &nontrivial_spectrum(x, j)?, k)
}

/// Like [`certify`], but an empty nontrivial spectrum yields a flagged vacuous certificate.
pub fn certify_or_vacuous(x: &SimplicialComplex, j: isize, k: Option<f64>) -> Result<ExpanderCertificate> {
    match certify(x, j, k) {
        Err(HdxError::EmptyNontrivialSpectrum(_)) => {
            let k = k.unwrap_or(1.0);
            Ok(ExpanderCertificate { j, k, eps: 0.0, valid: true, vacuous: true })
        }
        other => other,
    }
}

/// Certificates for `j = -1, …, d-1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateSet {
    n: usize,
    certs: Vec<ExpanderCertificate>,
}

impl CertificateSet {
    /// `certs[i]` must be the certificate for dimension `i` (starting at 0).
    pub fn new(n: usize, certs: Vec<ExpanderCertificate>) -> Result<Self> {
        for (i, c) in certs.iter().enumerate() {
            if c.j != i as isize {
                return Err(HdxError::InvalidParameter(format!("certificate {i} is for j={}", c.j)));
            }
        }
        Ok(Self { n, certs })
    }

    /// Eigensolved certificates for every `0 ≤ j < d`; `overrides[j]` fixes `k_j` when given.
    pub fn compute(x: &SimplicialComplex, overrides: &[Option<f64>]) -> Result<Self> {
        let certs = (0..x.dim().max(0))
            .map(|j| certify_or_vacuous(x, j, overrides.get(j as usize).copied().flatten()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(x.n(), certs)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Certificate at `j`; `j = -1` is the automatic `(−1, n, 0)` certificate.
    pub fn get(&self, j: isize) -> Option<ExpanderCertificate> {
        if j == -1 {
            return Some(ExpanderCertificate::minus_one(self.n));
        }
        usize::try_from(j).ok().and_then(|i| self.certs.get(i).copied())
    }

    /// The certificate at `j`, required to be valid.
    pub fn require(&self, j: isize) -> Result<ExpanderCertificate> {
        let c = self.get(j).ok_or(HdxError::MissingCertificate(j))?;
        if !c.valid {
            return Err(HdxError::NotAnExpander { j, eps: c.eps });
        }
        Ok(c)
    }

    pub fn certs(&self) -> &[ExpanderCertificate] {
        &self.certs
    }

    pub fn len(&self) -> usize {
        self.certs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.certs.is_empty()
    }
}

/// Spectral data of `Δ_j⁺` at one dimension.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DimensionSpectrum {
    pub j: isize,
    pub cells: usize,
    pub eigenvalues: Vec<f64>,
    pub trivial_zero_count: usize,
    pub nontrivial: Vec<f64>,
    /// `dim ker Δ_j`; absent for `j = -1`.
    pub betti: Option<usize>,
    pub lambda: Option<f64>,
    pub cert: Option<ExpanderCertificate>,
}

/// Per-dimension spectra for `j ∈ [-1, d-1]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralSummary {
    pub n: usize,
    pub d: isize,
    pub dims: Vec<DimensionSpectrum>,
}

impl SpectralSummary {
    pub fn compute(x: &SimplicialComplex) -> Result<Self> {
        let mut dims = Vec::new();
        for j in -1..x.dim() {
            let eigenvalues = if j == -1 { vec![x.n() as f64] } else { upper_spectrum(x, j)? };
            let trivial_zero_count = if j == -1 { 0 } else { boundary_rank(x, j)? };
            let nontrivial = eigenvalues[trivial_zero_count..].to_vec();
            let lambda = (!nontrivial.is_empty()).then(|| nontrivial.iter().sum::<f64>() / nontrivial.len() as f64);
            let cert = if j == -1 {
                Some(ExpanderCertificate::minus_one(x.n()))
            } else {
                Some(certify_or_vacuous(x, j, None)?)
            };
            let betti = if j >= 0 { Some(betti(x, j)?) } else { None };
            dims.push(DimensionSpectrum {
                j,
                cells: x.count(j),
                eigenvalues,
                trivial_zero_count,
                nontrivial,
                betti,
                lambda,
                cert,
            });
        }
        Ok(Self { n: x.n(), d: x.dim(), dims })
    }

    pub fn at(&self, j: isize) -> Option<&DimensionSpectrum> {
        self.dims.iter().find(|s| s.j == j)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("summary serializes")
    }
}

/// Both sides of the average-degree and cell-count identities at one `m`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountLemmaRow {
    pub m: isize,
    /// Measured average degree of an m-cell (absent for `m = d`).
    pub avg_degree: Option<f64>,
    pub avg_degree_formula: Option<f64>,
    pub avg_degree_diff: Option<f64>,
    pub cell_count: usize,
    pub cell_count_formula: f64,
    pub cell_count_diff: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountLemmaReport {
    pub applicable: bool,
    pub reason: Option<String>,
    pub rows: Vec<CountLemmaRow>,
}

/// Average degree and number of cells predicted from mean nontrivial eigenvalues.
///
/// With `λ_j` the mean nontrivial eigenvalue of `Δ_j⁺` (`λ_{-1} = n`):
/// the average degree of an m-cell is `λ_m (1 − (m+1)/λ_{m−1})` and
/// `|X^m| = λ_{m−1}/(m+1) · Π_{j=−1}^{m−2} (λ_j/(j+2) − 1)`.
/// Requires `β_j = 0` for all `j < d`; otherwise the report is marked inapplicable.
pub fn verify_count_lemma(x: &SimplicialComplex) -> Result<CountLemmaReport> {
    let d = x.dim();
    let inapplicable = |reason: String| CountLemmaReport { applicable: false, reason: Some(reason), rows: Vec::new() };
    if d < 0 {
        return Ok(inapplicable("empty complex".into()));
    }
    for j in 0..d {
        if betti(x, j)? != 0 {
            return Ok(inapplicable(format!("betti_{j} is nonzero")));
        }
    }
    let mut lambda = Vec::new(); // lambda[j + 1]
    for j in -1..d {
        let spec = nontrivial_spectrum(x, j)?;
        if spec.is_empty() {
            return Ok(inapplicable(format!("nontrivial spectrum at j={j} is empty")));
        }
        lambda.push(spec.iter().sum::<f64>() / spec.len() as f64);
    }
    let lam = |j: isize| lambda[(j + 1) as usize];
    let mut rows = Vec::new();
    for m in 0..=d {
        let product: f64 = (-1..=m - 2).map(|j| lam(j) / (j + 2) as f64 - 1.0).product();
        let formula = lam(m - 1) / (m + 1) as f64 * product;
        let count = x.count(m);
        let (avg, avg_formula) = if m < d {
            let measured = x.degrees(m).iter().sum::<usize>() as f64 / count as f64;
            (Some(measured), Some(lam(m) * (1.0 - (m + 1) as f64 / lam(m - 1))))
        } else {
            (None, None)
        };
        rows.push(CountLemmaRow {
            m,
            avg_degree: avg,
            avg_degree_formula: avg_formula,
            avg_degree_diff: avg.zip(avg_formula).map(|(a, b)| (a - b).abs()),
            cell_count: count,
            cell_count_formula: formula,
            cell_count_diff: (count as f64 - formula).abs(),
        });
    }
    Ok(CountLemmaReport { applicable: true, reason: None, rows })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorOperatorReport {
    pub j: isize,
    pub norm: f64,
    pub bound: f64,
    pub holds: bool,
}

/// `‖E‖` for `E = k_j I − Δ_j⁺ − (k_j/k_{j−1}) Δ_j⁻`, against `k_j(ε_{j−1} + ε_j)`.
pub fn error_operator_norm(
    x: &SimplicialComplex,
    j: isize,
    prev: &ExpanderCertificate,
    cur: &ExpanderCertificate,
    tol: f64,
) -> Result<ErrorOperatorReport> {
    if j < 0 || j > x.dim() - 1 {
        return Err(HdxError::DimensionOutOfRange { j, d: x.dim(), what: "error operator" });
    }
    if prev.j != j - 1 {
        return Err(HdxError::MissingCertificate(j - 1));
    }
    if cur.j != j {
        return Err(HdxError::MissingCertificate(j));
    }
    for c in [prev, cur] {
        if !c.valid {
            return Err(HdxError::NotAnExpander { j: c.j, eps: c.eps });
        }
    }
    let size = x.count(j);
    let upper = laplacian(x, j, LaplacianKind::Upper)?.to_dense();
    let lower = laplacian(x, j, LaplacianKind::Lower)?.to_dense();
    let e = DMatrix::<f64>::identity(size, size) * cur.k - upper - lower * (cur.k / prev.k);
    let norm = symmetric_norm(&e)?;
    let bound = cur.k * (prev.eps + cur.eps);
    Ok(ErrorOperatorReport { j, norm, bound, holds: norm <= bound + tol })
}
