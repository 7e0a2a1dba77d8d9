//! Finite simplicial complexes with canonical (lexicographic) cell indexing.
//!
//! Cells are stored per dimension, from the unique (-1)-cell `∅` up to the top
//! dimension `d`. Every cell is kept with its vertices sorted, which fixes the
//! canonical orientation used by all operator matrices.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{HdxError, Result};

pub type VertexId = usize;

/// An unoriented cell: a strictly increasing tuple of vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Cell(Vec<VertexId>);

impl Cell {
    /// Builds a cell from vertices in any order. Repeated vertices are rejected.
    pub fn new(mut vertices: Vec<VertexId>) -> Result<Self> {
        vertices.sort_unstable();
        if let Some(w) = vertices.windows(2).find(|w| w[0] == w[1]) {
            return Err(HdxError::RepeatedVertex(w[0]));
        }
        Ok(Cell(vertices))
    }

    /// The (-1)-cell.
    pub fn empty() -> Self {
        Cell(Vec::new())
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn dim(&self) -> isize {
        self.0.len() as isize - 1
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    /// The codimension-one faces, paired with the position of the removed vertex.
    pub fn faces(&self) -> impl Iterator<Item = (usize, Cell)> + '_ {
        (0..self.0.len()).map(move |i| {
            let mut f = self.0.clone();
            f.remove(i);
            (i, Cell(f))
        })
    }

    /// The face obtained by removing vertex `v`, if `v` is in the cell.
    pub fn without(&self, v: VertexId) -> Option<Cell> {
        let pos = self.0.binary_search(&v).ok()?;
        let mut f = self.0.clone();
        f.remove(pos);
        Some(Cell(f))
    }

    pub fn with(&self, v: VertexId) -> Result<Cell> {
        match self.0.binary_search(&v) {
            Ok(_) => Err(HdxError::RepeatedVertex(v)),
            Err(pos) => {
                let mut f = self.0.clone();
                f.insert(pos, v);
                Ok(Cell(f))
            }
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// Sign of the permutation that sorts `ordered`.
pub fn orientation_sign(ordered: &[VertexId]) -> Result<i8> {
    let mut inversions = 0usize;
    for i in 0..ordered.len() {
        for j in (i + 1)..ordered.len() {
            if ordered[i] == ordered[j] {
                return Err(HdxError::RepeatedVertex(ordered[i]));
            }
            if ordered[i] > ordered[j] {
                inversions += 1;
            }
        }
    }
    Ok(if inversions % 2 == 0 { 1 } else { -1 })
}

/// A cell together with an orientation relative to its sorted presentation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrientedCell {
    cell: Cell,
    sign: i8,
}

impl OrientedCell {
    /// Orientation given by the order of `ordered`.
    pub fn from_ordered(ordered: &[VertexId]) -> Result<Self> {
        let sign = orientation_sign(ordered)?;
        let cell = Cell::new(ordered.to_vec())?;
        Ok(Self::with_sign(cell, sign))
    }

    pub fn canonical(cell: Cell) -> Self {
        Self { cell, sign: 1 }
    }

    fn with_sign(cell: Cell, sign: i8) -> Self {
        // vertices and the empty cell have a single orientation
        let sign = if cell.len() <= 1 { 1 } else { sign };
        Self { cell, sign }
    }

    pub fn reversed(&self) -> Self {
        Self::with_sign(self.cell.clone(), -self.sign)
    }

    pub fn cell(&self) -> &Cell {
        &self.cell
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn dim(&self) -> isize {
        self.cell.dim()
    }

    /// Orientation induced on the face missing `v`, as a sign relative to the
    /// sorted face, using the presentation `σ = v·τ`.
    fn induced_on_face_without(&self, v: VertexId) -> i8 {
        let face = self.cell.without(v).expect("vertex belongs to the cell");
        let mut presentation = Vec::with_capacity(self.cell.len());
        presentation.push(v);
        presentation.extend_from_slice(face.vertices());
        self.sign * orientation_sign(&presentation).expect("distinct vertices")
    }
}

/// Outcome of comparing two oriented cells of equal dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `σ ⋔ σ'` and the union is a cell of the complex.
    Similar,
    /// `σ ⋔ σ'` but the union is not in the complex.
    Pitchfork,
    /// No shared codimension-one face with matching induced orientation.
    Other,
}

/// On-disk complex description: vertex count plus facets, closed downward on load.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexFile {
    pub n: usize,
    pub facets: Vec<Vec<VertexId>>,
}

/// An immutable finite simplicial complex on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    n: usize,
    // cells[j + 1] holds the j-cells in lexicographic order
    cells: Vec<Vec<Cell>>,
    index: Vec<HashMap<Cell, usize>>,
    degrees: Vec<Vec<usize>>,
}

impl SimplicialComplex {
    /// Downward closure of `facets`, plus all `n` vertices and `∅`.
    pub fn build_from_facets<F>(n: usize, facets: &[F]) -> Result<Self>
    where
        F: AsRef<[VertexId]>,
    {
        let mut by_dim: Vec<BTreeSet<Vec<VertexId>>> = vec![BTreeSet::new(); 2];
        by_dim[0].insert(Vec::new());
        by_dim[1].extend((0..n).map(|v| vec![v]));
        for facet in facets {
            let facet = facet.as_ref();
            if facet.is_empty() {
                return Err(HdxError::EmptyFacet);
            }
            if let Some(&v) = facet.iter().find(|&&v| v >= n) {
                return Err(HdxError::VertexOutOfRange { vertex: v, n });
            }
            let sorted = Cell::new(facet.to_vec())?.0;
            if by_dim.len() < sorted.len() + 1 {
                by_dim.resize(sorted.len() + 1, BTreeSet::new());
            }
            if by_dim[sorted.len()].contains(&sorted) {
                continue;
            }
            // enumerate nonempty subsets; facets are small at desk scale
            let k = sorted.len();
            assert!(k < 24, "facet with {k} vertices is beyond desk scale");
            for mask in 1u32..(1u32 << k) {
                let sub: Vec<VertexId> = (0..k)
                    .filter(|i| mask & (1 << i) != 0)
                    .map(|i| sorted[i])
                    .collect();
                by_dim[sub.len()].insert(sub);
            }
        }
        while by_dim.len() > 2 && by_dim.last().is_some_and(|s| s.is_empty()) {
            by_dim.pop();
        }
        if n == 0 {
            by_dim.truncate(1);
        }
        let cells: Vec<Vec<Cell>> = by_dim
            .into_iter()
            .map(|s| s.into_iter().map(Cell).collect())
            .collect();
        Ok(Self::from_closed_cells(n, cells))
    }

    fn from_closed_cells(n: usize, cells: Vec<Vec<Cell>>) -> Self {
        let index: Vec<HashMap<Cell, usize>> = cells
            .iter()
            .map(|layer| layer.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect())
            .collect();
        let mut degrees: Vec<Vec<usize>> = cells.iter().map(|l| vec![0; l.len()]).collect();
        for (slot, layer) in cells.iter().enumerate().skip(1) {
            for cell in layer {
                for (_, face) in cell.faces() {
                    let i = index[slot - 1][&face];
                    degrees[slot - 1][i] += 1;
                }
            }
        }
        Self { n, cells, index, degrees }
    }

    pub fn from_file(file: &ComplexFile) -> Result<Self> {
        Self::build_from_facets(file.n, &file.facets)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ComplexFile = serde_json::from_str(text)?;
        Self::from_file(&file)
    }

    /// Maximal cells in dimension-then-lexicographic order.
    pub fn to_file(&self) -> ComplexFile {
        let mut facets = Vec::new();
        for j in 0..=self.dim() {
            for (i, c) in self.cells(j).iter().enumerate() {
                if self.degree_at(j, i) == 0 {
                    facets.push(c.vertices().to_vec());
                }
            }
        }
        ComplexFile { n: self.n, facets }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("complex file serializes")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Top dimension `d` (−1 for the empty complex on zero vertices).
    pub fn dim(&self) -> isize {
        self.cells.len() as isize - 2
    }

    fn slot(&self, j: isize) -> Option<usize> {
        let s = j + 1;
        (s >= 0 && (s as usize) < self.cells.len()).then_some(s as usize)
    }

    /// The j-cells in canonical order; empty outside `[-1, d]`.
    pub fn cells(&self, j: isize) -> &[Cell] {
        self.slot(j).map(|s| self.cells[s].as_slice()).unwrap_or(&[])
    }

    pub fn count(&self, j: isize) -> usize {
        self.cells(j).len()
    }

    pub fn index_of(&self, cell: &Cell) -> Option<usize> {
        let s = self.slot(cell.dim())?;
        self.index[s].get(cell).copied()
    }

    pub fn contains(&self, cell: &Cell) -> bool {
        self.index_of(cell).is_some()
    }

    pub fn contains_vertices(&self, vertices: &[VertexId]) -> bool {
        Cell::new(vertices.to_vec()).map(|c| self.contains(&c)).unwrap_or(false)
    }

    /// Number of (dim σ + 1)-cells containing σ.
    pub fn degree(&self, cell: &Cell) -> Result<usize> {
        let i = self
            .index_of(cell)
            .ok_or_else(|| HdxError::CellNotFound(cell.vertices().to_vec()))?;
        Ok(self.degree_at(cell.dim(), i))
    }

    pub fn degree_at(&self, j: isize, index: usize) -> usize {
        let s = self.slot(j).expect("dimension in range");
        self.degrees[s][index]
    }

    pub fn degrees(&self, j: isize) -> &[usize] {
        self.slot(j).map(|s| self.degrees[s].as_slice()).unwrap_or(&[])
    }

    /// Classifies an ordered pair of oriented cells under the `∼` / `⋔` relations.
    pub fn relation(&self, a: &OrientedCell, b: &OrientedCell) -> Result<Relation> {
        if a.dim() != b.dim() {
            return Err(HdxError::DimensionMismatch(a.dim(), b.dim()));
        }
        for c in [a.cell(), b.cell()] {
            if !self.contains(c) {
                return Err(HdxError::CellNotFound(c.vertices().to_vec()));
            }
        }
        if a.cell() == b.cell() || a.dim() < 0 {
            return Ok(Relation::Other);
        }
        let (Some(va), Some(vb)) = (lone_difference(a.cell(), b.cell()), lone_difference(b.cell(), a.cell())) else {
            return Ok(Relation::Other);
        };
        if a.induced_on_face_without(va) != b.induced_on_face_without(vb) {
            return Ok(Relation::Other);
        }
        let union = a.cell().with(vb)?;
        Ok(if self.contains(&union) { Relation::Similar } else { Relation::Pitchfork })
    }

    /// Applies the vertex permutation `perm` (old id -> new id).
    pub fn relabel(&self, perm: &[VertexId]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(HdxError::InvalidParameter(format!(
                "permutation of length {} for {} vertices",
                perm.len(),
                self.n
            )));
        }
        let facets: Vec<Vec<VertexId>> = self
            .to_file()
            .facets
            .into_iter()
            .map(|f| f.into_iter().map(|v| perm[v]).collect())
            .collect();
        Self::build_from_facets(self.n, &facets)
    }

    pub fn total_cells(&self) -> usize {
        self.cells.iter().map(Vec::len).sum()
    }
}

/// The single vertex of `a` not in `b`, when `a` and `b` differ in exactly one vertex.
fn lone_difference(a: &Cell, b: &Cell) -> Option<VertexId> {
    let mut missing = a.vertices().iter().filter(|v| !b.contains(**v));
    let v = *missing.next()?;
    missing.next().is_none().then_some(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> SimplicialComplex {
        SimplicialComplex::build_from_facets(3, &[[0, 1, 2]]).unwrap()
    }

    fn k4_graph() -> SimplicialComplex {
        let pairs: Vec<[usize; 2]> = (0..4).flat_map(|a| ((a + 1)..4).map(move |b| [a, b])).collect();
        SimplicialComplex::build_from_facets(4, &pairs).unwrap()
    }

    fn three_cycle() -> SimplicialComplex {
        SimplicialComplex::build_from_facets(3, &[[0, 1], [1, 2], [0, 2]]).unwrap()
    }

    #[test]
    fn closure_counts() {
        let t = triangle();
        assert_eq!((t.count(-1), t.count(0), t.count(1), t.count(2)), (1, 3, 3, 1));
        assert_eq!(t.dim(), 2);
        assert_eq!(k4_graph().count(1), 6);
        let c = three_cycle();
        assert_eq!(c.count(2), 0);
        assert_eq!(c.dim(), 1);
    }

    #[test]
    fn isolated_vertices_and_errors() {
        let x = SimplicialComplex::build_from_facets(5, &[[0, 1]]).unwrap();
        assert_eq!(x.count(0), 5);
        assert_eq!(x.degree(&Cell::new(vec![4]).unwrap()).unwrap(), 0);
        assert_eq!(
            SimplicialComplex::build_from_facets(3, &[[0, 3]]),
            Err(HdxError::VertexOutOfRange { vertex: 3, n: 3 })
        );
        assert_eq!(SimplicialComplex::build_from_facets(3, &[[1, 1]]), Err(HdxError::RepeatedVertex(1)));
        let empty: [[usize; 0]; 1] = [[]];
        assert_eq!(SimplicialComplex::build_from_facets(3, &empty), Err(HdxError::EmptyFacet));
        let edgeless = SimplicialComplex::build_from_facets::<[usize; 1]>(2, &[]).unwrap();
        assert_eq!(edgeless.dim(), 0);
    }

    #[test]
    fn signs() {
        assert_eq!(orientation_sign(&[0, 1, 2]).unwrap(), 1);
        assert_eq!(orientation_sign(&[1, 0, 2]).unwrap(), -1);
        assert_eq!(orientation_sign(&[2, 0, 1]).unwrap(), 1);
        assert!(orientation_sign(&[2, 0, 2]).is_err());
        assert_eq!(OrientedCell::from_ordered(&[3]).unwrap().reversed().sign(), 1);
        assert_eq!(OrientedCell::from_ordered(&[3, 1]).unwrap().sign(), -1);
    }

    #[test]
    fn degrees() {
        let c = |v: &[usize]| Cell::new(v.to_vec()).unwrap();
        assert_eq!(k4_graph().degree(&c(&[0])).unwrap(), 3);
        assert_eq!(triangle().degree(&c(&[0, 1])).unwrap(), 1);
        assert_eq!(three_cycle().degree(&c(&[0, 1])).unwrap(), 0);
        assert_eq!(triangle().degree(&Cell::empty()).unwrap(), 3);
        assert!(three_cycle().degree(&c(&[0, 1, 2])).is_err());
    }

    #[test]
    fn relations() {
        let o = |v: &[usize]| OrientedCell::from_ordered(v).unwrap();
        let k4 = k4_graph();
        assert_eq!(k4.relation(&o(&[0]), &o(&[1])).unwrap(), Relation::Similar);
        let c = three_cycle();
        // common endpoint 1 in (0,1) and (2,1)
        assert_eq!(c.relation(&o(&[0, 1]), &o(&[2, 1])).unwrap(), Relation::Pitchfork);
        // 1 is the endpoint of (0,1) but the origin of (1,2)
        assert_eq!(c.relation(&o(&[0, 1]), &o(&[1, 2])).unwrap(), Relation::Other);
        let t = triangle();
        assert_eq!(t.relation(&o(&[0, 1]), &o(&[2, 1])).unwrap(), Relation::Similar);
        assert_eq!(t.relation(&o(&[0, 1, 2]), &o(&[0, 1, 2])).unwrap(), Relation::Other);
        assert!(matches!(t.relation(&o(&[0]), &o(&[0, 1])), Err(HdxError::DimensionMismatch(0, 1))));
        let vertices = SimplicialComplex::build_from_facets::<[usize; 1]>(2, &[]).unwrap();
        assert_eq!(vertices.relation(&o(&[0]), &o(&[1])).unwrap(), Relation::Pitchfork);
    }

    #[test]
    fn json_round_trip() {
        let x = SimplicialComplex::from_json(r#"{"n": 5, "facets": [[0,1,2],[2,3]]}"#).unwrap();
        assert_eq!(x.to_json(), r#"{"n":5,"facets":[[4],[2,3],[0,1,2]]}"#);
        assert_eq!(SimplicialComplex::from_json(&x.to_json()).unwrap(), x);
    }
}
