//! Seeded Linial–Meshulam complexes, their cell counts, and a JSON round trip.
//!
//! ```text
//! cargo run --example random_complexes -- 2 10 0.5
//! ```

use hdx_mixing::generators::{linial_meshulam, read_complex, write_complex};

fn main() -> hdx_mixing::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let d: usize = args.first().map_or(2, |s| s.parse().expect("d"));
    let n: usize = args.get(1).map_or(10, |s| s.parse().expect("n"));
    let p: f64 = args.get(2).map_or(0.5, |s| s.parse().expect("p"));

    let mut total = 0;
    for seed in 0..10 {
        let x = linial_meshulam(d, n, p, seed)?;
        total += x.count(d as isize);
        println!("seed {seed}: {} top cells", x.count(d as isize));
    }
    let candidates = (0..=d).fold(1usize, |acc, i| acc * (n - i) / (i + 1));
    println!("mean {:.1}, expected {:.1}", total as f64 / 10.0, p * candidates as f64);

    let path = std::env::temp_dir().join("hdx-example-complex.json");
    let x = linial_meshulam(d, n, p, 0)?;
    write_complex(&x, &path)?;
    assert_eq!(read_complex(&path)?, x);
    println!("round trip through {} ok", path.display());
    Ok(())
}
