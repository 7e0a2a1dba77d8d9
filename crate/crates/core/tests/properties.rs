use std::collections::BTreeSet;

use hdx_mixing::applications::{chromatic_number_exact, overlap_of_embedding, Embedding};
use hdx_mixing::cli::{run, Command, RunConfig};
use hdx_mixing::generators::{complete_skeleton, linial_meshulam, random_disjoint_family, GeneratorSpec, SeededRng};
use hdx_mixing::hodge::{laplacian, LaplacianKind};
use hdx_mixing::mixing::{count_galleries_bruteforce, count_galleries_operator, count_galleries_operator_shifted};
use hdx_mixing::spectral::{betti, certify, eigen_symmetric, nontrivial_spectrum, EPS_ROUNDOFF};
use hdx_mixing::{AdjacencyKind, OrientedCell, SimplicialComplex};
use proptest::prelude::*;

fn arb_complex() -> impl Strategy<Value = SimplicialComplex> {
    (3usize..8).prop_flat_map(|n| {
        prop::collection::vec(prop::collection::btree_set(0..n, 1..=4), 1..8).prop_map(move |facets| {
            let facets: Vec<Vec<usize>> = facets.into_iter().map(|f: BTreeSet<usize>| f.into_iter().collect()).collect();
            SimplicialComplex::build_from_facets(n, &facets).unwrap()
        })
    })
}

fn arb_lm() -> impl Strategy<Value = SimplicialComplex> {
    (1usize..=3, 0usize..4, 0.3f64..1.0, any::<u64>()).prop_map(|(d, extra, p, seed)| linial_meshulam(d, d + 3 + extra, p, seed).unwrap())
}

fn nonzero(mut v: Vec<f64>) -> Vec<f64> {
    let scale = v.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    v.retain(|x| x.abs() > 1e-8 * scale);
    v.sort_by(f64::total_cmp);
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn degrees_double_count(x in arb_complex()) {
        for j in -1..x.dim() {
            let total: usize = x.degrees(j).iter().sum();
            prop_assert_eq!(total, (j + 2) as usize * x.count(j + 1));
        }
    }

    #[test]
    fn closure_is_idempotent(x in arb_complex()) {
        let all: Vec<Vec<usize>> = (0..=x.dim()).flat_map(|j| x.cells(j).iter().map(|c| c.vertices().to_vec())).collect();
        prop_assert_eq!(SimplicialComplex::build_from_facets(x.n(), &all).unwrap(), x);
    }

    #[test]
    fn relation_is_symmetric(x in arb_complex(), flips in any::<u64>()) {
        for j in 0..=x.dim() {
            let cells = x.cells(j);
            for (a, ca) in cells.iter().enumerate() {
                for (b, cb) in cells.iter().enumerate() {
                    let mut oa = OrientedCell::canonical(ca.clone());
                    let mut ob = OrientedCell::canonical(cb.clone());
                    if flips >> (a % 64) & 1 == 1 { oa = oa.reversed(); }
                    if flips >> (b % 64) & 1 == 1 { ob = ob.reversed(); }
                    prop_assert_eq!(x.relation(&oa, &ob).unwrap(), x.relation(&ob, &oa).unwrap());
                }
            }
        }
    }

    #[test]
    fn upper_trace_is_degree_sum(x in arb_complex()) {
        for j in -1..x.dim() {
            let total: usize = x.degrees(j).iter().sum();
            prop_assert_eq!(laplacian(&x, j, LaplacianKind::Upper).unwrap().trace(), total as i64);
        }
    }

    #[test]
    fn upper_and_lower_share_nonzero_spectrum(x in arb_complex()) {
        for j in 0..x.dim() {
            let up = nonzero(eigen_symmetric(&laplacian(&x, j, LaplacianKind::Upper).unwrap().to_dense()).unwrap());
            let down = nonzero(eigen_symmetric(&laplacian(&x, j + 1, LaplacianKind::Lower).unwrap().to_dense()).unwrap());
            prop_assert_eq!(up.len(), down.len());
            for (a, b) in up.iter().zip(&down) {
                prop_assert!((a - b).abs() < 1e-8 * a.max(1.0));
            }
        }
    }

    #[test]
    fn zero_in_spectrum_iff_homology(x in arb_complex()) {
        for j in 0..x.dim() {
            let spec = nontrivial_spectrum(&x, j).unwrap();
            let has_zero = spec.iter().any(|l| l.abs() < 1e-8);
            prop_assert_eq!(has_zero, betti(&x, j).unwrap() > 0);
        }
    }

    #[test]
    fn certificate_is_optimal(x in arb_lm(), k in 0.5f64..20.0) {
        for j in 0..x.dim() {
            let spec = nontrivial_spectrum(&x, j).unwrap();
            if spec.is_empty() { continue; }
            let c = certify(&x, j, None).unwrap();
            prop_assert!(c.encloses(&spec, 1e-9));
            let other = certify(&x, j, Some(k)).unwrap();
            prop_assert!(other.eps >= c.eps - EPS_ROUNDOFF);
        }
    }

    #[test]
    fn operator_count_matches_bruteforce(x in arb_lm(), seed in any::<u64>()) {
        let d = x.dim() as usize;
        let size = (x.n() / (d + 1)).max(1);
        let family = random_disjoint_family(x.n(), &vec![size; d + 1], seed).unwrap();
        for j in 0..=x.dim() {
            let brute = count_galleries_bruteforce(&x, j, &family).unwrap();
            prop_assert_eq!(count_galleries_operator(&x, j, &family, AdjacencyKind::Pitchfork).unwrap(), brute);
            if j >= 1 {
                prop_assert_eq!(count_galleries_operator(&x, j - 1, &family, AdjacencyKind::Similar).unwrap(), brute);
            }
        }
    }

    #[test]
    fn diagonal_shift_is_invisible(x in arb_lm(), seed in any::<u64>()) {
        let d = x.dim() as usize;
        let family = random_disjoint_family(x.n(), &vec![1; d + 1], seed).unwrap();
        let mut rng = SeededRng::new(seed);
        for j in 0..x.dim() {
            let shift: Vec<f64> = (0..x.count(j)).map(|_| 20.0 * rng.uniform() - 10.0).collect();
            let plain = count_galleries_operator(&x, j, &family, AdjacencyKind::Pitchfork).unwrap();
            let shifted = count_galleries_operator_shifted(&x, j, &family, AdjacencyKind::Pitchfork, Some(&shift)).unwrap();
            prop_assert_eq!(plain, shifted);
        }
    }

    #[test]
    fn galleries_grow_with_top_cells(d in 1usize..=3, n in 5usize..9, p in 0.1f64..0.9, seed in any::<u64>(), fseed in any::<u64>()) {
        let sparse = linial_meshulam(d, n, p, seed).unwrap();
        let dense = linial_meshulam(d, n, (p + 0.3).min(1.0), seed).unwrap();
        let family = random_disjoint_family(n, &vec![n / (d + 1); d + 1], fseed).unwrap();
        let top = d as isize;
        prop_assert!(count_galleries_bruteforce(&sparse, top, &family).unwrap() <= count_galleries_bruteforce(&dense, top, &family).unwrap());
    }

    #[test]
    fn chromatic_number_is_relabel_invariant(x in arb_complex(), seed in any::<u64>()) {
        let mut perm: Vec<usize> = (0..x.n()).collect();
        SeededRng::new(seed).shuffle(&mut perm);
        let y = x.relabel(&perm).unwrap();
        prop_assert_eq!(chromatic_number_exact(&x, x.n()).unwrap(), chromatic_number_exact(&y, y.n()).unwrap());
    }

    #[test]
    fn overlap_is_relabel_invariant(n in 4usize..8, p in 0.3f64..1.0, seed in any::<u64>()) {
        let x = linial_meshulam(2, n, p, seed).unwrap();
        prop_assume!(x.count(2) > 0);
        let mut rng = SeededRng::new(seed ^ 0x5a5a);
        let mut perm: Vec<usize> = (0..n).collect();
        rng.shuffle(&mut perm);
        let embedding = Embedding::random(n, 2, &mut rng);
        let candidates: Vec<Vec<f64>> = (0..40).map(|_| vec![rng.uniform(), rng.uniform()]).collect();
        let a = overlap_of_embedding(&x, &embedding, &candidates).unwrap();
        let b = overlap_of_embedding(&x.relabel(&perm).unwrap(), &embedding.relabeled(&perm), &candidates).unwrap();
        prop_assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn full_probability_gives_complete_skeleton() {
    for d in 1..=3 {
        for n in d + 1..9 {
            assert_eq!(linial_meshulam(d, n, 1.0, 7).unwrap(), complete_skeleton(n, d).unwrap());
        }
    }
}

#[test]
fn top_cell_counts_are_binomial() {
    let (d, n, p) = (2usize, 10usize, 0.3f64);
    let candidates = 120.0;
    let counts: Vec<f64> = (0..200).map(|s| linial_meshulam(d, n, p, s).unwrap().count(2) as f64).collect();
    let mean = counts.iter().sum::<f64>() / counts.len() as f64;
    let sigma = (candidates * p * (1.0 - p) / counts.len() as f64).sqrt();
    assert!((mean - candidates * p).abs() < 4.0 * sigma, "mean {mean}");
}

#[test]
fn commands_are_deterministic() {
    for command in [Command::Mixing, Command::Descent, Command::Overlap, Command::Ideal] {
        let mut cfg = RunConfig::new(command).with_source(GeneratorSpec::LinialMeshulam { d: 2, n: 9, p: 0.8, seed: 3 });
        cfg.seed = 11;
        cfg.trials = 3;
        cfg.pach = Some(0.1);
        cfg.sizes = Some(vec![2, 2, 2]);
        if matches!(command, Command::Overlap | Command::Ideal) {
            cfg.sizes = None;
        }
        let a = run(&cfg).map(|o| o.text).map_err(|e| e.to_json());
        let b = run(&cfg).map(|o| o.text).map_err(|e| e.to_json());
        assert_eq!(a, b, "{}", command.name());
    }
}
