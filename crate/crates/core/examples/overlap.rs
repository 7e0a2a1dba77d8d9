//! Geometric overlap: the spectral lower bound for a given Pach constant and the
//! heuristic estimate from random embeddings.
//!
//! ```text
//! cargo run --example overlap -- 0.1
//! ```

use hdx_mixing::applications::{overlap_bound, overlap_estimate, CandidateStrategy};
use hdx_mixing::generators::{complete_skeleton, linial_meshulam};
use hdx_mixing::CertificateSet;

fn main() -> hdx_mixing::Result<()> {
    let pach: f64 = std::env::args().nth(1).map_or(Ok(0.1), |s| s.parse()).expect("pach constant");
    for (name, x) in [("K_7^(2)", complete_skeleton(7, 2)?), ("LM(2, 8, 0.5)", linial_meshulam(2, 8, 0.5, 2)?)] {
        let certs = CertificateSet::compute(&x, &[])?;
        let bound = overlap_bound(x.dim(), pach, &certs);
        let estimate = overlap_estimate(&x, 8, CandidateStrategy::default(), 99)?;
        match bound {
            Ok(b) => println!("{name}: bound {:.3e}{} ", b.value, if b.vacuous { " (vacuous)" } else { "" }),
            Err(e) => println!("{name}: bound unavailable, {e}"),
        }
        println!("  heuristic estimate {:.4} over {} embeddings", estimate.estimate, estimate.per_embedding.len());
    }
    Ok(())
}
