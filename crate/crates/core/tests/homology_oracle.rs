mod common;

use common::{minors_homology, mod_p_dimensions, random_complex, universal_coefficients, Expected};
use einf_core::algebra::{homology, ChainComplex};
use einf_core::{fixtures, simplicial::parse_sset, Int};
use num_traits::ToPrimitive;

fn snf_homology(cx: &ChainComplex<Int>) -> Expected {
    homology(cx).degrees.iter().map(|d| (d.free_rank, d.torsion.iter().map(|t| t.to_i64().unwrap()).collect())).collect()
}

#[test]
fn random_complexes_agree_with_every_oracle() {
    for seed in 0..300 {
        let (cx, expected) = random_complex(seed, 12);
        let got = snf_homology(&cx);
        assert_eq!(got, expected, "seed {seed}: construction");
        assert_eq!(minors_homology(&cx), expected, "seed {seed}: minors");
        for p in [2, 3] {
            if let Some(dims) = mod_p_dimensions(&cx, p) {
                assert_eq!(dims, universal_coefficients(&expected, p), "seed {seed}: mod {p}");
            }
        }
    }
}

#[test]
fn fixtures_agree_with_minors() {
    for (name, text) in fixtures::SSET {
        let cx = parse_sset(text).unwrap().normalized_chains::<Int>().unwrap();
        assert!(cx.len() <= 12);
        assert_eq!(snf_homology(&cx), minors_homology(&cx), "{name}");
    }
}

#[test]
fn representatives_are_cycles() {
    for seed in 0..50 {
        let (cx, _) = random_complex(seed, 12);
        for d in homology(&cx).degrees {
            for r in &d.representatives {
                assert!(cx.boundary_of_chain(r).is_zero(), "seed {seed}");
            }
        }
    }
}
