mod common;

use common::{bracket_span_rank, random_admissible};
use einf_core::algebra::{build_sdr, build_sdr_variant, GradedOperator, Matrix, TensorChain};
use einf_core::coalgebra::{chain_structure, CoalgebraStructure};
use einf_core::formats::parse_coalg;
use einf_core::invariants::*;
use einf_core::simplicial::parse_sset;
use einf_core::transfer::transfer;
use einf_core::{fixtures, Int};

fn coalg(name: &str) -> CoalgebraStructure<Int> {
    parse_coalg(fixtures::coalg(name).unwrap()).unwrap()
}

fn transferred(name: &str, seed: Option<u64>) -> CoalgebraStructure<Int> {
    let s = chain_structure::<Int>(&parse_sset(fixtures::sset(name).unwrap()).unwrap(), 2).unwrap();
    let canonical = build_sdr(s.complex().clone()).unwrap();
    let sdr = match seed {
        Some(seed) => build_sdr_variant(s.complex().clone(), seed).unwrap().align_to(&canonical).unwrap(),
        None => canonical,
    };
    transfer(&s, &sdr).unwrap().homology
}

#[test]
fn lie_lattice_ranks() {
    for m in 0..=5usize {
        let l = lie_lattice::<i64>(m);
        assert_eq!(l.degree2.len(), m * m.saturating_sub(1) / 2);
        assert_eq!(l.degree3.len(), m * (m * m).saturating_sub(1) / 3, "m = {m}");
        assert_eq!(bracket_span_rank(m), l.degree3.len());
        if !l.degree3.is_empty() {
            let snf = einf_core::algebra::smith_normal_form(&Matrix::from_columns(m * m * m, &l.degree3));
            assert!(snf.invariant_factors().iter().all(|&d| d == 1), "primitive basis");
        }
    }
}

#[test]
fn discrimination() {
    let b = massey_invariant(&coalg("borromean"), MasseyMode::Strict).unwrap();
    let z = massey_invariant(&coalg("zero"), MasseyMode::Strict).unwrap();
    assert!(!b.is_zero());
    assert!(z.is_zero());
    assert!(!class_equals(&b, &z).unwrap());
    assert!(class_equals(&b, &b).unwrap());
}

#[test]
fn exact_class_vanishes() {
    for mode in [MasseyMode::Strict, MasseyMode::Normalized] {
        assert!(massey_invariant(&coalg("exact"), mode).unwrap().is_zero());
    }
}

#[test]
fn delta_of_a_commutator() {
    let h = coalg("exact");
    let cx = h.complex().clone();
    let id = |n: &str| cx.index_of(n).unwrap();
    let (a, b, c, s) = (id("a"), id("b"), id("c"), id("s"));
    let mu = GradedOperator::from_fn(cx.clone(), cx.clone(), 2, 1, |x| {
        if x == a {
            let mut ch = TensorChain::term(vec![a, b], Int::from(1));
            ch.add_term(vec![b, a], Int::from(-1));
            ch
        } else {
            TensorChain::zero()
        }
    })
    .unwrap();
    let d = delta_map(h.get(einf_core::operad::Generator::M2(0)).unwrap(), &mu).unwrap();
    // [[a,b],b]
    let mut expected = TensorChain::zero();
    for (w, k) in [(vec![a, b, b], 1), (vec![b, a, b], -2), (vec![b, b, a], 1)] {
        expected.add_term(w, Int::from(k));
    }
    assert_eq!(d.image(s), &expected);
    assert!(d.image(id("t")).is_zero());
    let _ = c;
}

#[test]
fn perturbations_preserve_the_class() {
    for (name, mode) in [("borromean", MasseyMode::Strict), ("exact", MasseyMode::Strict), ("exact", MasseyMode::Normalized)] {
        let h = coalg(name);
        let base = massey_invariant(&h, mode).unwrap();
        for seed in 0..100 {
            let q = perturb(&h, &random_admissible(&h, seed, mode)).unwrap();
            assert!(q.verify().is_empty());
            assert!(class_equals(&base, &massey_invariant(&q, mode).unwrap()).unwrap(), "{name} {mode:?} seed {seed}");
        }
    }
}

#[test]
fn torus_and_wedges_are_independent_of_the_retraction() {
    for name in ["torus", "wedge2", "wedge3", "circle", "sphere", "tetra"] {
        let p = transferred(name, None);
        let sq = sq_dual_invariant(&p).unwrap();
        let m = massey_invariant(&p, MasseyMode::Normalized).unwrap();
        for seed in 0..4 {
            let q = transferred(name, Some(seed));
            assert!(class_equals(&sq, &sq_dual_invariant(&q).unwrap()).unwrap(), "{name} {seed}");
            assert!(class_equals(&m, &massey_invariant(&q, MasseyMode::Normalized).unwrap()).unwrap(), "{name} {seed}");
        }
    }
}

#[test]
fn strict_mode_depends_on_the_retraction_for_the_torus() {
    let outcomes: Vec<bool> = (0..4).map(|s| massey_invariant(&transferred("torus", Some(s)), MasseyMode::Strict).is_ok()).collect();
    assert!(outcomes.contains(&true) && outcomes.contains(&false), "{outcomes:?}");
    assert!(matches!(massey_invariant(&transferred("torus", None), MasseyMode::Strict), Err(InvariantError::NotNormalizable(_))));
}

#[test]
fn square_classes() {
    let h = coalg("zero");
    assert!(sq_dual_invariant(&h).unwrap().is_zero());
    for seed in 0..20 {
        // m2_1 = F - σF on H_1 is a boundary of the presentation
        let f = random_admissible(&h, seed, MasseyMode::Normalized);
        let g = GradedOperator::from_fn(h.complex().clone(), h.complex().clone(), 2, 1, |c| {
            let img = f.image(c).clone();
            img.map_words(|w| Some((vec![w[1], w[0]], Int::from(1))))
        })
        .unwrap();
        let q = perturb(&h, &g).unwrap();
        assert!(sq_dual_invariant(&q).unwrap().is_zero());
    }
    let torus = sq_dual_invariant(&transferred("torus", None)).unwrap();
    assert!(!torus.is_zero());
    assert_eq!(class_equals(&torus, &sq_dual_invariant(&coalg("zero")).unwrap()), Err(InvariantError::GroupMismatch));
}
