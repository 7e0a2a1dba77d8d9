//! Spectra of the upper Laplacians, Betti numbers, expansion certificates, and
//! the spectral count lemma.
//!
//! ```text
//! cargo run --example certify -- lm:2:9:0.7:5
//! ```

use hdx_mixing::generators::GeneratorSpec;
use hdx_mixing::spectral::{error_operator_norm, verify_count_lemma, CertificateSet, SpectralSummary};

fn main() -> hdx_mixing::Result<()> {
    let spec: GeneratorSpec = std::env::args().nth(1).unwrap_or_else(|| "lm:2:9:0.7:5".into()).parse()?;
    let x = spec.build()?;
    println!("{spec}: n = {}, d = {}", x.n(), x.dim());

    let summary = SpectralSummary::compute(&x)?;
    for dim in &summary.dims {
        let shown: Vec<String> = dim.nontrivial.iter().map(|l| format!("{l:.3}")).collect();
        println!("j={:<2} betti={:<4} nontrivial [{}]", dim.j, dim.betti.map_or("-".into(), |b| b.to_string()), shown.join(", "));
        if let Some(c) = dim.cert {
            println!("      k = {:.4}, eps = {:.4}, valid = {}", c.k, c.eps, c.valid);
        }
    }

    let certs = CertificateSet::compute(&x, &[])?;
    for j in 0..x.dim() {
        let (prev, cur) = (certs.get(j - 1).unwrap(), certs.get(j).unwrap());
        if prev.valid && cur.valid {
            let r = error_operator_norm(&x, j, &prev, &cur, 1e-8)?;
            println!("error operator at j={j}: norm {:.4} <= bound {:.4}: {}", r.norm, r.bound, r.holds);
        }
    }

    let lemma = verify_count_lemma(&x)?;
    match lemma.reason {
        Some(reason) => println!("count lemma not applicable: {reason}"),
        None => {
            for row in lemma.rows {
                println!("|X^{}| = {} predicted {:.6}", row.m, row.cell_count, row.cell_count_formula);
            }
        }
    }
    Ok(())
}
