//! Build a complex from facets, inspect its cells and operators, and check the
//! exact integer identities between them.
//!
//! ```text
//! cargo run --example build_complex
//! ```

use hdx_mixing::hodge::{adjacency_matrix, boundary_matrix, identity_suite, laplacian, AdjacencyKind, LaplacianKind};
use hdx_mixing::{OrientedCell, SimplicialComplex};

fn main() -> hdx_mixing::Result<()> {
    // a hollow tetrahedron with one filled face and a dangling edge
    let x = SimplicialComplex::build_from_facets(5, &[vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3], vec![3, 4]])?;
    println!("n = {}, d = {}", x.n(), x.dim());
    for j in -1..=x.dim() {
        let cells: Vec<String> = x.cells(j).iter().map(|c| c.to_string()).collect();
        println!("X^{j:<2} ({:>2}): {}", cells.len(), cells.join(" "));
    }

    let d1 = boundary_matrix(&x, 1)?;
    println!("\nboundary of 1-cells, COO:\n{}", d1.to_coo_string());

    let a = OrientedCell::from_ordered(&[0, 1])?;
    let b = OrientedCell::from_ordered(&[2, 1])?;
    println!("relation of (0,1) and (2,1): {:?}", x.relation(&a, &b)?);
    println!("relation of (0,1) and (1,2): {:?}", x.relation(&a, &b.reversed())?);

    let up = laplacian(&x, 1, LaplacianKind::Upper)?;
    let sim = adjacency_matrix(&x, 1, AdjacencyKind::Similar)?;
    println!("\ntrace of upper Laplacian on edges = {} (sum of edge degrees)", up.trace());
    println!("similar adjacency on edges has {} nonzeros", sim.nnz());

    for check in identity_suite(&x)? {
        println!("{:<36} j={:<2} {}", check.name, check.j, if check.holds { "ok" } else { "FAILS" });
    }
    Ok(())
}
