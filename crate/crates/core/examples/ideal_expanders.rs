//! Ideal expanders: complexes whose every certificate has eps = 0. Only complete
//! skeletons qualify, and on them gallery counts depend only on set sizes.
//!
//! ```text
//! cargo run --example ideal_expanders
//! ```

use hdx_mixing::applications::ideal_expander_check;
use hdx_mixing::generators::{complete_skeleton, linial_meshulam};
use hdx_mixing::SimplicialComplex;

fn main() -> hdx_mixing::Result<()> {
    let c4 = SimplicialComplex::build_from_facets(4, &[[0, 1], [1, 2], [2, 3], [0, 3]])?;
    let fixtures = [
        ("K_6^(2)", complete_skeleton(6, 2)?),
        ("K_7^(3)", complete_skeleton(7, 3)?),
        ("C4", c4),
        ("LM(2, 7, 0.9)", linial_meshulam(2, 7, 0.9, 1)?),
    ];
    for (name, x) in &fixtures {
        let r = ideal_expander_check(x, 20, 7)?;
        let exact = r.samples.iter().filter(|s| s.holds).count();
        println!(
            "{name:<14} ideal={:<5} complete={:<5} samples {exact}/{} exact",
            r.ideal,
            r.complete_skeleton,
            r.samples.len()
        );
    }
    Ok(())
}
