//! Transfer of the chain-level structure across a retraction onto homology.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::homology::Sdr;
use crate::algebra::operator::permute_chain;
use crate::algebra::snf::solve;
use crate::algebra::{ChainComplex, GradedOperator, Matrix, OperatorError, TensorChain};
use crate::coalgebra::{CoalgebraStructure, EvalError, Evaluator, Level};
use crate::operad::{generator_differential, Generator};
use crate::scalar::Scalar;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum TransferError {
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error("retraction does not start at the structure's complex")]
    WrongSource,
    #[error("chain structure lacks {0}")]
    Missing(Generator),
    #[error("transferred structure violates {0}")]
    VerificationFailed(String),
    #[error("packages use different homology bases")]
    BasisMismatch,
    #[error("packages have different m2_0")]
    ComultiplicationMismatch,
}

/// A chain-level structure, a retraction onto homology, the transferred structure
/// on homology and the components `F_w: K → H^{⊗n}` of the comparison morphism.
#[derive(Clone, Debug)]
pub struct TransferPackage<T: Scalar> {
    pub chain: CoalgebraStructure<T>,
    pub sdr: Sdr<T>,
    pub homology: CoalgebraStructure<T>,
    pub morphism: BTreeMap<Generator, GradedOperator<T>>,
}

fn retarget<T: Scalar>(op: &GradedOperator<T>, source: &Arc<ChainComplex<T>>, target: &Arc<ChainComplex<T>>) -> Result<GradedOperator<T>, OperatorError> {
    GradedOperator::new(source.clone(), target.clone(), op.arity(), op.degree(), op.images().to_vec())
}

/// Transfers counit, `m2_k` (`k <= 2`), `m3_1` and the morphism components
/// `f0_0, f1_0, f2_1, f2_2, f3_2`, then verifies every relation.
pub fn transfer<T: Scalar>(chain: &CoalgebraStructure<T>, sdr: &Sdr<T>) -> Result<TransferPackage<T>, TransferError> {
    let k = chain.complex();
    if sdr.source() != k {
        return Err(TransferError::WrongSource);
    }
    let h_cx = sdr.target().clone();
    let (f, g, h) = (&sdr.f, &sdr.g, &sdr.h);
    let get = |gen: Generator| chain.get(gen).ok_or(TransferError::Missing(gen));
    let delta0 = get(Generator::M2(0))?;
    let eps = get(Generator::P)?;

    let mut hom = CoalgebraStructure::new(h_cx.clone(), Level::Homology, chain.is_reduced());
    let mut morphism = BTreeMap::new();
    hom.set(Generator::P, retarget(&eps.after(g)?, &h_cx, &h_cx)?)?;
    morphism.insert(Generator::F0, retarget(eps, k, &h_cx)?);
    morphism.insert(Generator::F1, f.clone());

    let ff = |x: &GradedOperator<T>| GradedOperator::parallel(&[f, f], x);
    let top = (0..=2u32).take_while(|&j| chain.get(Generator::M2(j)).is_some()).last().unwrap_or(0);
    for j in 0..=top {
        let dj = get(Generator::M2(j))?;
        hom.set(Generator::M2(j), ff(&dj.after(g)?)?)?;
        if j < 2 {
            let fj = ff(&dj.after(h)?)?;
            let fj = if j % 2 == 0 { fj } else { fj.neg() };
            morphism.insert(Generator::F2(j + 1), fj);
        }
    }
    let f21 = morphism[&Generator::F2(1)].clone();
    let left = GradedOperator::parallel(&[&f21, f], delta0)?;
    let right = GradedOperator::parallel(&[f, &f21], delta0)?;
    let diff = left.sub(&right)?;
    hom.set(Generator::M3(1), diff.after(g)?)?;
    morphism.insert(Generator::F3(2), diff.after(h)?.neg());

    let pkg = TransferPackage { chain: chain.clone(), sdr: sdr.clone(), homology: hom, morphism };
    if let Some(v) = verify_relations(&pkg).into_iter().next() {
        return Err(TransferError::VerificationFailed(v));
    }
    Ok(pkg)
}

impl<T: Scalar> TransferPackage<T> {
    pub fn evaluator(&self) -> Evaluator<'_, T> {
        Evaluator { lower: &self.chain, upper: &self.homology, morphism: Some(&self.morphism) }
    }
}

/// Every violated relation: the retraction identities, the homology-level table,
/// `f1_0 = f`, and `[∂, F_w] = F(∂w)` for each morphism component.
pub fn verify_relations<T: Scalar>(p: &TransferPackage<T>) -> Vec<String> {
    let mut bad: Vec<String> = p.sdr.verify().into_iter().map(|s| format!("retraction: {s}")).collect();
    bad.extend(p.homology.verify().into_iter().map(|s| format!("homology: {s}")));
    match p.morphism.get(&Generator::F1) {
        Some(f1) if f1.equals(&p.sdr.f) => {}
        _ => bad.push("f1_0 = f".into()),
    }
    let ev = p.evaluator();
    for (w, op) in &p.morphism {
        let res: Result<bool, EvalError> = generator_differential(*w)
            .map_err(EvalError::from)
            .and_then(|d| ev.element(&d))
            .map(|rhs| op.commutator_with_differential().equals(&rhs));
        match res {
            Ok(true) => {}
            Ok(false) => bad.push(format!("d({w})")),
            Err(e) => bad.push(format!("d({w}): {e}")),
        }
    }
    bad
}

/// Differences between two structures on the same homology basis.
#[derive(Clone, Debug)]
pub struct Comparison<T: Scalar> {
    /// `k -> q.m2_k - p.m2_k` for `k >= 1`.
    pub m2: BTreeMap<u32, GradedOperator<T>>,
    pub m3: GradedOperator<T>,
    /// `F` with `F - σF = q.m2_1 - p.m2_1`, when one exists.
    pub witness: Option<GradedOperator<T>>,
}

pub fn compare_structures<T: Scalar>(p: &TransferPackage<T>, q: &TransferPackage<T>) -> Result<Comparison<T>, TransferError> {
    compare_homology(&p.homology, &q.homology)
}

/// [`compare_structures`] on bare homology-level structures.
pub fn compare_homology<T: Scalar>(p: &CoalgebraStructure<T>, q: &CoalgebraStructure<T>) -> Result<Comparison<T>, TransferError> {
    let (hp, hq) = (p.complex(), q.complex());
    if hp.labels() != hq.labels() || hp.degrees() != hq.degrees() {
        return Err(TransferError::BasisMismatch);
    }
    let get = |s: &CoalgebraStructure<T>, g: Generator| s.get(g).cloned().ok_or(TransferError::Missing(g));
    let align = |op: GradedOperator<T>| retarget(&op, hp, hp);
    if !get(p, Generator::M2(0))?.equals(&align(get(q, Generator::M2(0))?)?) {
        return Err(TransferError::ComultiplicationMismatch);
    }
    let mut m2 = BTreeMap::new();
    for k in 1u32.. {
        match (p.get(Generator::M2(k)), q.get(Generator::M2(k))) {
            (Some(a), Some(b)) => {
                m2.insert(k, align(b.clone())?.sub(a)?);
            }
            _ => break,
        }
    }
    let m3 = align(get(q, Generator::M3(1))?)?.sub(&get(p, Generator::M3(1))?)?;
    let witness = match m2.get(&1) {
        Some(d1) => solve_symmetrization(d1, -1),
        None => None,
    };
    Ok(Comparison { m2, m3, witness })
}

/// Some `F` with `F + s·σF = target` (arity 2), solved cell by cell.
pub fn solve_symmetrization<T: Scalar>(target: &GradedOperator<T>, s: i64) -> Option<GradedOperator<T>> {
    let cx = target.target().clone();
    let mut images = Vec::with_capacity(target.source().len());
    for c in 0..target.source().len() {
        let d = target.source().degree(c) as i64 + target.degree();
        if d < 0 {
            images.push(TensorChain::zero());
            continue;
        }
        let words = cx.words_of_degree(2, d as usize);
        let index: BTreeMap<&Vec<usize>, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let mut m = Matrix::zeros(words.len(), words.len());
        for (j, w) in words.iter().enumerate() {
            let mut col = TensorChain::word(w.clone());
            col.add_scaled(&permute_chain(&cx, &TensorChain::word(w.clone()), &[1, 0]), &T::from_int(s));
            for (u, v) in col.iter() {
                m[(index[u], j)] = v.clone();
            }
        }
        let mut b = vec![T::zero(); words.len()];
        for (u, v) in target.image(c).iter() {
            b[index[u]] = v.clone();
        }
        let x = solve(&m, &b)?;
        images.push(words.iter().zip(x).map(|(w, v)| (w.clone(), v)).collect());
    }
    GradedOperator::new(target.source().clone(), cx, 2, target.degree(), images).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_sdr, build_sdr_variant};
    use crate::coalgebra::chain_structure;
    use crate::fixtures;
    use crate::simplicial::parse_sset;

    fn package(name: &str, seed: Option<u64>) -> TransferPackage<i64> {
        let s = chain_structure(&parse_sset(fixtures::sset(name).unwrap()).unwrap(), 2).unwrap();
        let canonical = build_sdr(s.complex().clone()).unwrap();
        let sdr = match seed {
            Some(seed) => build_sdr_variant(s.complex().clone(), seed).unwrap().align_to(&canonical).unwrap(),
            None => canonical,
        };
        transfer(&s, &sdr).unwrap()
    }

    #[test]
    fn relations_hold_on_torsion_free_inputs() {
        for name in fixtures::TORSION_FREE {
            assert!(verify_relations(&package(name, None)).is_empty(), "{name}");
            assert!(verify_relations(&package(name, Some(7))).is_empty(), "{name} variant");
        }
    }

    #[test]
    fn torus_comultiplication_is_a_commutator() {
        let p = package("torus", None);
        let h = p.homology.complex();
        let top = h.cells(2)[0];
        let ones: Vec<Vec<usize>> = p.homology.get(Generator::M2(0)).unwrap().image(top).iter()
            .filter(|(w, _)| w.iter().all(|&x| h.degree(x) == 1))
            .map(|(w, _)| w.clone())
            .collect();
        assert_eq!(ones.len(), 2);
        let m = p.homology.get(Generator::M2(0)).unwrap().image(top);
        assert_eq!(m.coefficient(&ones[0]), -m.coefficient(&ones[1]));
        assert_eq!(ones[0], vec![ones[1][1], ones[1][0]]);
    }

    #[test]
    fn variants_differ_by_a_symmetrization() {
        let p = package("torus", None);
        for seed in 0..3 {
            let c = compare_structures(&p, &package("torus", Some(seed))).unwrap();
            let w = c.witness.expect("witness");
            let d1 = &c.m2[&1];
            assert!(w.add(&w.swap().unwrap().scale(&-1)).unwrap().equals(d1));
        }
    }

    #[test]
    fn mismatched_inputs() {
        let p = package("torus", None);
        assert_eq!(compare_structures(&p, &package("wedge2", None)).unwrap_err(), TransferError::BasisMismatch);
        let sdr = build_sdr(package("circle", None).chain.complex().clone()).unwrap();
        assert_eq!(transfer(&p.chain, &sdr).unwrap_err(), TransferError::WrongSource);
    }
}
