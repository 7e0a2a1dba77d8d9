//! Count galleries by brute force and through products of projected adjacency
//! operators, with and without a random diagonal shift.
//!
//! ```text
//! cargo run --example galleries
//! ```

use hdx_mixing::generators::{linial_meshulam, random_disjoint_family, SeededRng};
use hdx_mixing::mixing::{count_galleries_bruteforce, count_galleries_operator, count_galleries_operator_shifted};
use hdx_mixing::AdjacencyKind;

fn main() -> hdx_mixing::Result<()> {
    let x = linial_meshulam(3, 10, 0.6, 8)?;
    let family = random_disjoint_family(x.n(), &[2, 2, 2, 2], 21)?;
    println!("sets {:?}", family.sets());
    for j in 0..=3 {
        let brute = count_galleries_bruteforce(&x, j, &family)?;
        let pitchfork = count_galleries_operator(&x, j, &family, AdjacencyKind::Pitchfork)?;
        print!("|F^{j}| = {brute:<5} pitchfork product {pitchfork:<5}");
        if j >= 1 {
            let similar = count_galleries_operator(&x, j - 1, &family, AdjacencyKind::Similar)?;
            print!(" similar product {similar}");
        }
        println!();
    }

    let mut rng = SeededRng::new(3);
    let shift: Vec<f64> = (0..x.count(1)).map(|_| 10.0 * rng.uniform() - 5.0).collect();
    let shifted = count_galleries_operator_shifted(&x, 1, &family, AdjacencyKind::Pitchfork, Some(&shift))?;
    println!("|F^1| with a random diagonal shift: {shifted}");
    Ok(())
}
