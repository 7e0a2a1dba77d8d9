//! Exact-integer operator matrices on the canonical form bases.
//!
//! A matrix acting on `Ω^j` has one row and column per j-cell, in the order of
//! [`SimplicialComplex::cells`]. Floating point only enters through [`Form`]
//! and [`OperatorMatrix::apply`].

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::{BufRead, Write};

use nalgebra::DMatrix;

use crate::complex::{orientation_sign, OrientedCell, Relation, SimplicialComplex};
use crate::error::{HdxError, Result};

/// Sparse integer matrix in row-major compressed form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorMatrix {
    rows: usize,
    cols: usize,
    // row -> (col, value), sorted by column, no explicit zeros
    data: Vec<Vec<(usize, i64)>>,
}

impl OperatorMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Vec::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![1; n])
    }

    pub fn diagonal(values: &[i64]) -> Self {
        Self::from_triplets(values.len(), values.len(), values.iter().enumerate().map(|(i, &v)| (i, i, v)))
    }

    /// Duplicate coordinates are summed; zero results are dropped.
    pub fn from_triplets(rows: usize, cols: usize, triplets: impl IntoIterator<Item = (usize, usize, i64)>) -> Self {
        let mut acc: Vec<BTreeMap<usize, i64>> = vec![BTreeMap::new(); rows];
        for (r, c, v) in triplets {
            assert!(r < rows && c < cols, "entry ({r},{c}) outside {rows}x{cols}");
            *acc[r].entry(c).or_insert(0) += v;
        }
        let data = acc
            .into_iter()
            .map(|row| row.into_iter().filter(|&(_, v)| v != 0).collect())
            .collect();
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        let row = &self.data[r];
        row.binary_search_by_key(&c, |&(c, _)| c).map(|i| row[i].1).unwrap_or(0)
    }

    /// Nonzero entries in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |&(c, v)| (r, c, v)))
    }

    pub fn row(&self, r: usize) -> &[(usize, i64)] {
        &self.data[r]
    }

    pub fn transpose(&self) -> Self {
        Self::from_triplets(self.cols, self.rows, self.iter().map(|(r, c, v)| (c, r, v)))
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(HdxError::InvalidParameter(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Vec::with_capacity(self.rows);
        for row in &self.data {
            let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
            for &(k, a) in row {
                for &(c, b) in &other.data[k] {
                    *acc.entry(c).or_insert(0) += a * b;
                }
            }
            out.push(acc.into_iter().filter(|&(_, v)| v != 0).collect());
        }
        Ok(Self { rows: self.rows, cols: other.cols, data: out })
    }

    fn combine(&self, other: &Self, sign: i64) -> Result<Self> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(HdxError::InvalidParameter(format!(
                "shape mismatch {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self::from_triplets(
            self.rows,
            self.cols,
            self.iter().chain(other.iter().map(|(r, c, v)| (r, c, sign * v))),
        ))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, 1)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, -1)
    }

    pub fn scaled(&self, s: i64) -> Self {
        Self::from_triplets(self.rows, self.cols, self.iter().map(|(r, c, v)| (r, c, s * v)))
    }

    pub fn is_zero(&self) -> bool {
        self.nnz() == 0
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && self.iter().all(|(r, c, v)| self.get(c, r) == v)
    }

    pub fn trace(&self) -> i64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.rows, self.cols);
        for (r, c, v) in self.iter() {
            m[(r, c)] = v as f64;
        }
        m
    }

    /// Matrix-vector product in floating point.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols, "vector length must match column count");
        self.data
            .iter()
            .map(|row| row.iter().map(|&(c, v)| v as f64 * x[c]).sum())
            .collect()
    }

    /// Coordinate-list text: a `rows cols nnz` header, then `row col value` lines.
    pub fn to_coo_string(&self) -> String {
        let mut s = format!("{} {} {}\n", self.rows, self.cols, self.nnz());
        for (r, c, v) in self.iter() {
            writeln!(s, "{r} {c} {v}").expect("writing to a string");
        }
        s
    }

    pub fn write_coo<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(self.to_coo_string().as_bytes())?;
        Ok(())
    }

    pub fn read_coo<R: BufRead>(reader: R) -> Result<Self> {
        let mut lines = reader.lines();
        let header = lines.next().ok_or_else(|| HdxError::Parse("missing header".into()))??;
        let nums = parse_ints(&header, 3)?;
        let (rows, cols, nnz) = (nums[0] as usize, nums[1] as usize, nums[2] as usize);
        let mut triplets = Vec::with_capacity(nnz);
        for line in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let t = parse_ints(&line, 3)?;
            if t[0] < 0 || t[1] < 0 || t[0] as usize >= rows || t[1] as usize >= cols {
                return Err(HdxError::Parse(format!("entry out of range: {line}")));
            }
            triplets.push((t[0] as usize, t[1] as usize, t[2]));
        }
        if triplets.len() != nnz {
            return Err(HdxError::Parse(format!("expected {nnz} entries, found {}", triplets.len())));
        }
        Ok(Self::from_triplets(rows, cols, triplets))
    }
}

fn parse_ints(line: &str, expected: usize) -> Result<Vec<i64>> {
    let v: std::result::Result<Vec<i64>, _> = line.split_whitespace().map(str::parse).collect();
    let v = v.map_err(|e| HdxError::Parse(format!("{e}: {line}")))?;
    if v.len() != expected {
        return Err(HdxError::Parse(format!("expected {expected} fields: {line}")));
    }
    Ok(v)
}

/// A j-form in the canonical basis: the value on each positively oriented j-cell.
#[derive(Clone, Debug, PartialEq)]
pub struct Form {
    pub dim: isize,
    pub values: Vec<f64>,
}

impl Form {
    pub fn zeros(x: &SimplicialComplex, dim: isize) -> Self {
        Self { dim, values: vec![0.0; x.count(dim)] }
    }

    pub fn inner(&self, other: &Form) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.values.iter().zip(&other.values).map(|(a, b)| a * b).sum()
    }

    pub fn norm_squared(&self) -> f64 {
        self.inner(self)
    }

    /// Value on an oriented cell; antisymmetric under orientation reversal.
    pub fn value_at(&self, x: &SimplicialComplex, cell: &OrientedCell) -> Result<f64> {
        let i = x
            .index_of(cell.cell())
            .ok_or_else(|| HdxError::CellNotFound(cell.cell().vertices().to_vec()))?;
        Ok(f64::from(cell.sign()) * self.values[i])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LaplacianKind {
    Upper,
    Lower,
    Full,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AdjacencyKind {
    Similar,
    Pitchfork,
}

fn out_of_range(j: isize, x: &SimplicialComplex, what: &'static str) -> HdxError {
    HdxError::DimensionOutOfRange { j, d: x.dim(), what }
}

/// `∂_j : Ω^j → Ω^{j-1}`, of shape `|X^{j-1}| × |X^j|`.
///
/// The column of a j-cell `τ` holds, at each face `σ = τ \ {v}`, the sign of the
/// presentation `v·σ` relative to sorted order, so that
/// `(∂f)(σ) = Σ_{v∪σ ∈ X^j} f(vσ)`.
pub fn boundary_matrix(x: &SimplicialComplex, j: isize) -> Result<OperatorMatrix> {
    if j < 0 || j > x.dim() {
        return Err(out_of_range(j, x, "boundary"));
    }
    let mut triplets = Vec::new();
    let mut presentation = Vec::new();
    for (col, tau) in x.cells(j).iter().enumerate() {
        for (pos, face) in tau.faces() {
            presentation.clear();
            presentation.push(tau.vertices()[pos]);
            presentation.extend_from_slice(face.vertices());
            let sign = orientation_sign(&presentation)?;
            let row = x.index_of(&face).expect("complex is downward closed");
            triplets.push((row, col, i64::from(sign)));
        }
    }
    Ok(OperatorMatrix::from_triplets(x.count(j - 1), x.count(j), triplets))
}

/// `δ_j = ∂_jᵀ : Ω^{j-1} → Ω^j`.
pub fn coboundary_matrix(x: &SimplicialComplex, j: isize) -> Result<OperatorMatrix> {
    Ok(boundary_matrix(x, j)?.transpose())
}

/// Upper, lower or full Laplacian on `Ω^j`.
///
/// Upper is defined for `-1 ≤ j ≤ d-1` (at `j = -1` it is the 1×1 matrix `[n]`),
/// lower for `0 ≤ j ≤ d`, and full for `0 ≤ j ≤ d-1`.
pub fn laplacian(x: &SimplicialComplex, j: isize, kind: LaplacianKind) -> Result<OperatorMatrix> {
    let d = x.dim();
    match kind {
        LaplacianKind::Upper => {
            if j < -1 || j > d - 1 {
                return Err(out_of_range(j, x, "upper Laplacian"));
            }
            let b = boundary_matrix(x, j + 1)?;
            b.matmul(&b.transpose())
        }
        LaplacianKind::Lower => {
            if j < 0 || j > d {
                return Err(out_of_range(j, x, "lower Laplacian"));
            }
            let b = boundary_matrix(x, j)?;
            b.transpose().matmul(&b)
        }
        LaplacianKind::Full => {
            if j < 0 || j > d - 1 {
                return Err(out_of_range(j, x, "full Laplacian"));
            }
            laplacian(x, j, LaplacianKind::Upper)?.add(&laplacian(x, j, LaplacianKind::Lower)?)
        }
    }
}

/// Signed adjacency matrix of the `∼` or `⋔` relation on canonically oriented j-cells.
///
/// Entry `(σ, σ')` is `+1` when `σ` relates to `σ'`, `-1` when it relates to the
/// reversal of `σ'`, and `0` otherwise. Built from [`SimplicialComplex::relation`]
/// directly, not from boundary matrices.
pub fn adjacency_matrix(x: &SimplicialComplex, j: isize, kind: AdjacencyKind) -> Result<OperatorMatrix> {
    let max = match kind {
        AdjacencyKind::Similar => x.dim() - 1,
        AdjacencyKind::Pitchfork => x.dim(),
    };
    if j < 0 || j > max {
        return Err(out_of_range(j, x, "adjacency"));
    }
    let wanted = |r: Relation| match kind {
        AdjacencyKind::Similar => r == Relation::Similar,
        AdjacencyKind::Pitchfork => r != Relation::Other,
    };
    // candidates share a (j-1)-face, so group cells by their faces
    let mut cofaces: Vec<Vec<usize>> = vec![Vec::new(); x.count(j - 1)];
    for (i, cell) in x.cells(j).iter().enumerate() {
        for (_, face) in cell.faces() {
            cofaces[x.index_of(&face).expect("downward closed")].push(i);
        }
    }
    let cells = x.cells(j);
    let mut triplets = Vec::new();
    for group in &cofaces {
        for &a in group {
            let sa = OrientedCell::canonical(cells[a].clone());
            for &b in group {
                if a == b {
                    continue;
                }
                let sb = OrientedCell::canonical(cells[b].clone());
                if wanted(x.relation(&sa, &sb)?) {
                    triplets.push((a, b, 1));
                } else if wanted(x.relation(&sa, &sb.reversed())?) {
                    triplets.push((a, b, -1));
                }
            }
        }
    }
    Ok(OperatorMatrix::from_triplets(cells.len(), cells.len(), triplets))
}

/// `D_j`, the diagonal matrix of j-cell degrees.
pub fn degree_matrix(x: &SimplicialComplex, j: isize) -> Result<OperatorMatrix> {
    if j < -1 || j > x.dim() {
        return Err(out_of_range(j, x, "degree"));
    }
    let degs: Vec<i64> = x.degrees(j).iter().map(|&d| d as i64).collect();
    Ok(OperatorMatrix::diagonal(&degs))
}

/// Outcome of one exact identity check.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub j: isize,
    pub holds: bool,
}

/// Runs every exact operator identity on `x`:
/// `∂_j∂_{j+1} = 0`, `Δ_j⁻ = (j+1)I + 𝒜_j^⋔`, `Δ_j⁺ = D_j − 𝒜_j^∼`, `Δ_j = Δ_j⁺ + Δ_j⁻`,
/// the full-Laplacian diagonal `deg σ + j + 1`, symmetry, and `Δ₋₁⁺ = [n]`.
pub fn identity_suite(x: &SimplicialComplex) -> Result<Vec<IdentityCheck>> {
    let d = x.dim();
    let mut out = Vec::new();
    let mut push = |name: &str, j: isize, holds: bool| out.push(IdentityCheck { name: name.to_string(), j, holds });
    for j in 0..d {
        let prod = boundary_matrix(x, j)?.matmul(&boundary_matrix(x, j + 1)?)?;
        push("boundary_squared_zero", j, prod.is_zero());
    }
    for j in 0..=d {
        let lower = laplacian(x, j, LaplacianKind::Lower)?;
        let rhs = OperatorMatrix::identity(x.count(j))
            .scaled(j as i64 + 1)
            .add(&adjacency_matrix(x, j, AdjacencyKind::Pitchfork)?)?;
        push("lower_equals_shifted_pitchfork", j, lower == rhs);
        push("lower_symmetric", j, lower.is_symmetric());
    }
    for j in 0..d {
        let upper = laplacian(x, j, LaplacianKind::Upper)?;
        let rhs = degree_matrix(x, j)?.sub(&adjacency_matrix(x, j, AdjacencyKind::Similar)?)?;
        push("upper_equals_degree_minus_similar", j, upper == rhs);
        push("upper_symmetric", j, upper.is_symmetric());
        let full = laplacian(x, j, LaplacianKind::Full)?;
        let sum = upper.add(&laplacian(x, j, LaplacianKind::Lower)?)?;
        push("full_equals_upper_plus_lower", j, full == sum);
        let diag_ok = x
            .degrees(j)
            .iter()
            .enumerate()
            .all(|(i, &deg)| full.get(i, i) == deg as i64 + j as i64 + 1);
        push("full_diagonal", j, diag_ok);
    }
    if d >= 0 {
        let m = laplacian(x, -1, LaplacianKind::Upper)?;
        push("upper_minus_one_is_n", -1, m == OperatorMatrix::diagonal(&[x.n() as i64]));
    }
    Ok(out)
}
