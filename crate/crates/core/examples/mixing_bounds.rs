//! The descent lemma, the from-j-to-l estimate, and the top-dimensional mixing
//! lemma on a random complex, over several random families.
//!
//! ```text
//! cargo run --example mixing_bounds
//! ```

use hdx_mixing::generators::{linial_meshulam, random_disjoint_family};
use hdx_mixing::mixing::{cjl_constant, descent_check, from_j_to_l_check, mixing_check};
use hdx_mixing::CertificateSet;

fn main() -> hdx_mixing::Result<()> {
    let x = linial_meshulam(2, 12, 0.8, 17)?;
    let certs = CertificateSet::compute(&x, &[])?;
    for c in certs.certs() {
        println!("j={} k={:.3} eps={:.3}", c.j, c.k, c.eps);
    }
    println!("c_(0,2) = {}, c_(1,2) = {}", cjl_constant(0, 2)?, cjl_constant(1, 2)?);

    for seed in 0..5 {
        let family = random_disjoint_family(x.n(), &[3, 3, 3], seed)?;
        let descent = descent_check(&x, 1, &family, &certs, 1e-9)?;
        let from0 = from_j_to_l_check(&x, 0, &family, &certs, 1e-9)?;
        let top = mixing_check(&x, &family, &certs, 1e-9)?;
        println!(
            "seed {seed}: |F| = {:<3} main {:>7.3} bound {:>7.3} | descent dev {:.3} <= {:.3} | F^1 slack {:.3}",
            top.observed, top.main_term, top.bound, descent.deviation, descent.bound, from0.slack
        );
    }
    Ok(())
}
