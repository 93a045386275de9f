//! The structure on normalized chains of a simplicial set.

use std::sync::Arc;

use super::universal::{CupTable, Unsolvable, Universal};
use super::{CoalgebraStructure, Level};
use crate::algebra::{ChainComplex, ComplexError, GradedOperator, OperatorError, TensorChain};
use crate::operad::Generator;
use crate::scalar::Scalar;
use crate::simplicial::{GenSimplex, SimplicialSet};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum CoalgebraError {
    #[error("reduction needs exactly one vertex, found {0}")]
    MultipleVertices(usize),
    #[error("structure violates {0}")]
    RelationViolation(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error(transparent)]
    Unsolvable(#[from] Unsolvable),
}

/// Sends every vertex to 1 and higher simplices to 0.
pub fn counit<T: Scalar>(k: Arc<ChainComplex<T>>) -> GradedOperator<T> {
    GradedOperator::from_fn(k.clone(), k.clone(), 0, 0, |c| {
        if k.degree(c) == 0 {
            TensorChain::scalar(T::one())
        } else {
            TensorChain::zero()
        }
    })
    .expect("counit has the right shape")
}

fn push_universal<T: Scalar>(
    x: &SimplicialSet,
    k: Arc<ChainComplex<T>>,
    degree: i64,
    table: impl Fn(usize) -> Universal<T>,
) -> Result<GradedOperator<T>, OperatorError> {
    GradedOperator::from_fn(k.clone(), k, 2, degree, |c| {
        let n = x.dim_of(c);
        let top = GenSimplex::nondegenerate(c, n);
        let mut out = TensorChain::zero();
        for ((a, b), coeff) in table(n) {
            let fa = x.vertex_face(&top, &bits(a));
            if fa.is_degenerate() {
                continue;
            }
            let fb = x.vertex_face(&top, &bits(b));
            if fb.is_degenerate() {
                continue;
            }
            out.add_term(vec![fa.base, fb.base], coeff);
        }
        out
    })
}

fn bits(a: u32) -> Vec<usize> {
    (0..32).filter(|v| a & (1 << v) != 0).collect()
}

/// Front-face/back-face diagonal.
pub fn aw_diagonal<T: Scalar>(x: &SimplicialSet, k: Arc<ChainComplex<T>>) -> Result<GradedOperator<T>, OperatorError> {
    GradedOperator::from_fn(k.clone(), k, 2, 0, |c| {
        let mut out = TensorChain::zero();
        for i in 0..=x.dim_of(c) {
            let (f, b) = x.front_back_faces(c, i).expect("split index in range");
            if !f.is_degenerate() && !b.is_degenerate() {
                out.add_term(vec![f.base, b.base], T::one());
            }
        }
        out
    })
}

/// The degree-`k` coproduct obtained from the standard-simplex table.
pub fn cup_k_coproduct<T: Scalar>(
    x: &SimplicialSet,
    k: Arc<ChainComplex<T>>,
    degree: usize,
) -> Result<GradedOperator<T>, CoalgebraError> {
    let table = CupTable::<T>::build(degree, x.dimension())?;
    Ok(push_universal(x, k, degree as i64, |n| table.get(degree, n).clone())?)
}

/// Counit, diagonal, `Δ_1 … Δ_max_k`, and `m3_1 = 0`, verified before returning.
pub fn chain_structure<T: Scalar>(x: &SimplicialSet, max_k: usize) -> Result<CoalgebraStructure<T>, CoalgebraError> {
    let k = Arc::new(x.normalized_chains::<T>()?);
    let table = CupTable::<T>::build(max_k, x.dimension())?;
    let mut s = CoalgebraStructure::new(k.clone(), Level::Chain, false);
    s.set(Generator::P, counit(k.clone()))?;
    for d in 0..=max_k {
        let op = push_universal(x, k.clone(), d as i64, |n| table.get(d, n).clone())?;
        s.set(Generator::M2(d as u32), op)?;
    }
    s.set(Generator::M3(1), GradedOperator::zero(k.clone(), k, 3, 1))?;
    if let Some(v) = s.verify().into_iter().next() {
        return Err(CoalgebraError::RelationViolation(v));
    }
    Ok(s)
}

/// Restriction to the kernel of the counit for a one-vertex simplicial set:
/// every term touching the vertex is dropped.
pub fn reduce<T: Scalar>(s: &CoalgebraStructure<T>) -> Result<CoalgebraStructure<T>, CoalgebraError> {
    let k = s.complex();
    let vertices = k.rank(0);
    if vertices != 1 {
        return Err(CoalgebraError::MultipleVertices(vertices));
    }
    let keep: Vec<usize> = (0..k.len()).filter(|&c| k.degree(c) > 0).collect();
    let mut new_index = vec![usize::MAX; k.len()];
    for (i, &c) in keep.iter().enumerate() {
        new_index[c] = i;
    }
    let relabel = |ch: &TensorChain<T>| {
        ch.map_words(|w| {
            if w.iter().all(|&c| new_index[c] != usize::MAX) {
                Some((w.iter().map(|&c| new_index[c]).collect(), T::one()))
            } else {
                None
            }
        })
    };
    let boundary = keep
        .iter()
        .map(|&c| relabel(k.boundary(c)).iter().map(|(w, v)| (w[0], v.clone())).collect())
        .collect();
    let labels = keep.iter().map(|&c| k.label(c).to_string()).collect();
    let degrees = keep.iter().map(|&c| k.degree(c)).collect();
    let kt = Arc::new(ChainComplex::new(labels, degrees, boundary)?);
    let mut out = CoalgebraStructure::new(kt.clone(), s.level(), true);
    for (g, op) in s.operators() {
        if *g == Generator::P {
            continue;
        }
        let images = keep.iter().map(|&c| relabel(op.image(c))).collect();
        out.set(*g, GradedOperator::new(kt.clone(), kt.clone(), op.arity(), op.degree(), images)?)?;
    }
    if let Some(v) = out.verify().into_iter().next() {
        return Err(CoalgebraError::RelationViolation(v));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::simplicial::parse_sset;

    fn structure(name: &str) -> CoalgebraStructure<i64> {
        chain_structure(&parse_sset(fixtures::sset(name).unwrap()).unwrap(), 3).unwrap()
    }

    #[test]
    fn diagonal_on_a_triangle() {
        let x = parse_sset("dim 0:\n u: []\n v: []\n w: []\ndim 1:\n a: [v, u]\n b: [w, u]\n c: [w, v]\ndim 2:\n t: [c, b, a]\n").unwrap();
        let k = Arc::new(x.normalized_chains::<i64>().unwrap());
        let aw = aw_diagonal(&x, k.clone()).unwrap();
        let t = k.index_of("t").unwrap();
        assert_eq!(k.render_chain(aw.image(t)), "u⊗t + a⊗c + t⊗w");
    }

    #[test]
    fn every_fixture_carries_a_structure() {
        for (name, _) in fixtures::SSET {
            let s = structure(name);
            assert!(s.verify().is_empty(), "{name}");
            assert_eq!(s.generators().count(), 6, "{name}");
        }
    }

    #[test]
    fn cup_one_of_an_edge() {
        let s = structure("circle");
        let k = s.complex();
        let a = k.cells(1)[0];
        assert_eq!(k.render_chain(s.get(Generator::M2(1)).unwrap().image(a)), format!("-{0}⊗{0}", k.label(a)));
    }

    #[test]
    fn reduced_torus() {
        let r = reduce(&structure("torus")).unwrap();
        let k = r.complex();
        let m = r.get(Generator::M2(0)).unwrap();
        assert_eq!(k.render_chain(m.image(k.index_of("U").unwrap())), "a⊗b");
        assert_eq!(k.render_chain(m.image(k.index_of("L").unwrap())), "b⊗a");
        assert!(r.get(Generator::P).is_none());
    }

    #[test]
    fn reduce_needs_one_vertex() {
        let s = chain_structure::<i64>(&parse_sset("dim 0:\n u: []\n v: []\n").unwrap(), 1).unwrap();
        assert_eq!(reduce(&s).unwrap_err(), CoalgebraError::MultipleVertices(2));
    }
}
