//! Spectral chromatic lower bound next to the exact chromatic number.
//!
//! ```text
//! cargo run --example chromatic
//! ```

use hdx_mixing::applications::{chromatic_lower_bound, chromatic_number_exact};
use hdx_mixing::generators::{complete_skeleton, linial_meshulam};
use hdx_mixing::CertificateSet;

fn main() -> hdx_mixing::Result<()> {
    let fixtures = [
        ("K4 graph", complete_skeleton(4, 1)?),
        ("full triangle", complete_skeleton(3, 2)?),
        ("G(12, 0.9)", linial_meshulam(1, 12, 0.9, 4)?),
        ("LM(2, 10, 0.9)", linial_meshulam(2, 10, 0.9, 4)?),
    ];
    for (name, x) in &fixtures {
        let exact = chromatic_number_exact(x, x.n())?;
        let certs = CertificateSet::compute(x, &[])?;
        let bound = match chromatic_lower_bound(x.dim(), &certs) {
            Ok(b) => format!("{b:.3}"),
            Err(e) => e.to_string(),
        };
        println!("{name:<16} chi = {:<3} spectral bound: {bound}", exact.map_or("?".into(), |c| c.to_string()));
    }
    Ok(())
}
