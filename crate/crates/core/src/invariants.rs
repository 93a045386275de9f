//! Invariant classes of homology-level structures: the dual square and the dual
//! triple Massey product, as elements of finitely presented abelian groups.

use std::sync::Arc;

use crate::algebra::operator::permute_chain;
use crate::algebra::snf::{saturate, smith_normal_form, solve};
use crate::algebra::{ChainComplex, GradedOperator, Matrix, OperatorError, TensorChain};
use crate::coalgebra::CoalgebraStructure;
use crate::operad::Generator;
use crate::scalar::Scalar;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum InvariantError {
    #[error("structure lacks {0}")]
    Missing(Generator),
    #[error("m2_1 on H_1 is not anti-invariant under the swap")]
    NotAntiInvariant,
    #[error("m3_1 on {0} does not lie in the Lie lattice plus the allowed denominator")]
    NotNormalizable(String),
    #[error("classes live in different groups")]
    GroupMismatch,
    #[error(transparent)]
    Operator(#[from] OperatorError),
}

/// `Z^rank / span(relations)`, relations stored as columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpAbelianGroup<T: Scalar> {
    rank: usize,
    relations: Matrix<T>,
}

impl<T: Scalar> FpAbelianGroup<T> {
    pub fn new(rank: usize, relations: Vec<Vec<T>>) -> Self {
        FpAbelianGroup { rank, relations: Matrix::from_columns(rank, &relations) }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn relations(&self) -> &Matrix<T> {
        &self.relations
    }

    /// `(free rank, torsion coefficients)`.
    pub fn structure(&self) -> (usize, Vec<T>) {
        let snf = smith_normal_form(&self.relations);
        let torsion = snf.invariant_factors().into_iter().filter(|c| !c.is_one()).collect();
        (self.rank - snf.rank, torsion)
    }

    pub fn is_trivial(&self) -> bool {
        let (free, torsion) = self.structure();
        free == 0 && torsion.is_empty()
    }

    /// Whether `v` lies in the relation span.
    pub fn is_relation(&self, v: &[T]) -> bool {
        if v.iter().all(|c| c.is_zero()) {
            return true;
        }
        solve(&self.relations, v).is_some()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantClass<T: Scalar> {
    pub group: Arc<FpAbelianGroup<T>>,
    pub representative: Vec<T>,
}

impl<T: Scalar> InvariantClass<T> {
    pub fn is_zero(&self) -> bool {
        self.group.is_relation(&self.representative)
    }
}

/// Equality of classes in the same group.
pub fn class_equals<T: Scalar>(x: &InvariantClass<T>, y: &InvariantClass<T>) -> Result<bool, InvariantError> {
    if x.group != y.group {
        return Err(InvariantError::GroupMismatch);
    }
    let diff: Vec<T> = x.representative.iter().zip(&y.representative).map(|(a, b)| a.clone() - b.clone()).collect();
    Ok(x.group.is_relation(&diff))
}

/// Vectors in ungraded tensor powers of `Z^m`, lexicographic word index.
fn bracket<T: Scalar>(m: usize, x: &[T], y: &[T]) -> Vec<T> {
    let (p, q) = (x.len(), y.len());
    let mut out = vec![T::zero(); p * q];
    for i in 0..p {
        if x[i].is_zero() {
            continue;
        }
        for j in 0..q {
            if y[j].is_zero() {
                continue;
            }
            let c = x[i].clone() * y[j].clone();
            out[i * q + j] = out[i * q + j].clone() + c.clone();
            out[j * p + i] = out[j * p + i].clone() - c;
        }
    }
    let _ = m;
    out
}

fn unit<T: Scalar>(n: usize, i: usize) -> Vec<T> {
    let mut v = vec![T::zero(); n];
    v[i] = T::one();
    v
}

/// Bases of `[H_1, H_1] ⊂ H_1^{⊗2}` and of the saturated `[H_1, [H_1, H_1]] ⊂ H_1^{⊗3}`.
#[derive(Clone, Debug)]
pub struct LieLattice<T> {
    pub m: usize,
    pub degree2: Vec<Vec<T>>,
    pub degree3: Vec<Vec<T>>,
}

pub fn lie_lattice<T: Scalar>(m: usize) -> LieLattice<T> {
    let e: Vec<Vec<T>> = (0..m).map(|i| unit(m, i)).collect();
    let mut degree2 = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            degree2.push(bracket(m, &e[i], &e[j]));
        }
    }
    let mut spanning = Vec::new();
    for x in &e {
        for w in &degree2 {
            spanning.push(bracket(m, x, w));
        }
    }
    let degree3 = if spanning.is_empty() { Vec::new() } else { saturate(&Matrix::from_columns(m * m * m, &spanning)) };
    LieLattice { m, degree2, degree3 }
}

/// Positions of `H_1` cells and the map from tensor words to ungraded coordinates.
struct Window<'a, T: Scalar> {
    cx: &'a ChainComplex<T>,
    m: usize,
}

impl<'a, T: Scalar> Window<'a, T> {
    fn new(cx: &'a ChainComplex<T>) -> Self {
        Window { cx, m: cx.rank(1) }
    }

    /// Projection of a chain onto `H_1^{⊗n}`.
    fn project(&self, ch: &TensorChain<T>, n: usize) -> Vec<T> {
        let mut v = vec![T::zero(); self.m.pow(n as u32)];
        for (w, c) in ch.iter() {
            if w.len() == n && w.iter().all(|&x| self.cx.degree(x) == 1) {
                let idx = w.iter().fold(0, |acc, &x| acc * self.m + self.cx.position(x));
                v[idx] = v[idx].clone() + c.clone();
            }
        }
        v
    }

    fn h1_word(&self, idx: usize, n: usize) -> Vec<usize> {
        let mut w = vec![0; n];
        let mut r = idx;
        for slot in (0..n).rev() {
            w[slot] = self.cx.cells(1)[r % self.m];
            r /= self.m;
        }
        w
    }
}

/// Basis of the kernel of `1 - s·σ` (σ the Koszul swap) on the listed tensor words.
fn swap_kernel<T: Scalar>(cx: &ChainComplex<T>, words: &[Vec<usize>], s: i64) -> Vec<TensorChain<T>> {
    let index: std::collections::HashMap<&Vec<usize>, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let mut m = Matrix::<T>::zeros(words.len(), words.len());
    for (j, w) in words.iter().enumerate() {
        m[(j, j)] = m[(j, j)].clone() + T::one();
        for (u, c) in permute_chain(cx, &TensorChain::word(w.clone()), &[1, 0]).iter() {
            let i = index[u];
            m[(i, j)] = m[(i, j)].clone() - T::from_int(s) * c.clone();
        }
    }
    smith_normal_form(&m)
        .kernel_basis()
        .into_iter()
        .map(|v| words.iter().zip(v).map(|(w, c)| (w.clone(), c)).collect())
        .collect()
}

fn coords<T: Scalar>(basis: &[Vec<T>], dim: usize, v: &[T]) -> Option<Vec<T>> {
    if basis.is_empty() {
        return if v.iter().all(|c| c.is_zero()) { Some(Vec::new()) } else { None };
    }
    solve(&Matrix::from_columns(dim, basis), v)
}

fn op<T: Scalar>(s: &CoalgebraStructure<T>, g: Generator) -> Result<&GradedOperator<T>, InvariantError> {
    s.get(g).ok_or(InvariantError::Missing(g))
}

/// Class of the `H_1 → H_1^{⊗2}` part of `m2_1` in
/// `Hom(H_1, ker(1 + σ)) / {F - σF}`.
pub fn sq_dual_invariant<T: Scalar>(s: &CoalgebraStructure<T>) -> Result<InvariantClass<T>, InvariantError> {
    let cx = s.complex();
    let win = Window::new(cx);
    let m = win.m;
    let m21 = op(s, Generator::M2(1))?;
    let words: Vec<Vec<usize>> = (0..m * m).map(|i| win.h1_word(i, 2)).collect();
    let kernel: Vec<Vec<T>> = swap_kernel(cx, &words, -1).iter().map(|c| win.project(c, 2)).collect();
    let k = kernel.len();
    let mut relations = Vec::new();
    let mut rep = Vec::with_capacity(m * k);
    for (i, &a) in cx.cells(1).iter().enumerate() {
        let img = m21.image(a).filter(|w| w.iter().all(|&x| cx.degree(x) == 1));
        let mut sym = img.clone();
        sym.add_scaled(&permute_chain(cx, &img, &[1, 0]), &T::one());
        if !sym.is_zero() {
            return Err(InvariantError::NotAntiInvariant);
        }
        let c = coords(&kernel, m * m, &win.project(&img, 2)).ok_or(InvariantError::NotAntiInvariant)?;
        rep.extend(c);
        for w in &words {
            let mut d = TensorChain::word(w.clone());
            d.add_scaled(&permute_chain(cx, &TensorChain::word(w.clone()), &[1, 0]), &-T::one());
            let local = coords(&kernel, m * m, &win.project(&d, 2)).expect("F - σF is anti-invariant");
            let mut full = vec![T::zero(); m * k];
            full[i * k..(i + 1) * k].clone_from_slice(&local);
            relations.push(full);
        }
    }
    Ok(InvariantClass { group: Arc::new(FpAbelianGroup::new(m * k, relations)), representative: rep })
}

/// Change of `m3_1` induced by `F` in the `f2_1` slot of a morphism extending the
/// identity between structures with comultiplications `m0` (source) and `m0q` (target).
pub fn m3_change<T: Scalar>(
    m0: &GradedOperator<T>,
    m0q: &GradedOperator<T>,
    f: &GradedOperator<T>,
) -> Result<GradedOperator<T>, OperatorError> {
    let id = GradedOperator::identity(m0.source().clone());
    let a = GradedOperator::compose(m0q, f, 1)?;
    let b = GradedOperator::compose(m0q, f, 2)?;
    let c = GradedOperator::parallel(&[f, &id], m0)?;
    let d = GradedOperator::parallel(&[&id, f], m0)?;
    a.sub(&b)?.add(&c)?.sub(&d)
}

/// Which freedom is quotiented out of the `H_2 → H_1^{⊗3}` component.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MasseyMode {
    /// Denominator `[H_1, m2_0(H_2)]`; `m3_1` must already land in the Lie lattice.
    Strict,
    /// Also quotients the changes coming from arbitrary `H_2` components of `f2_1`,
    /// i.e. `H_1·W + W·H_1` with `W = m2_0(H_2)`.
    Normalized,
}

fn unit_operator<T: Scalar>(cx: &Arc<ChainComplex<T>>, source: usize, image: TensorChain<T>) -> GradedOperator<T> {
    let deg = image.iter().next().map(|(w, _)| cx.word_degree(w) as i64 - cx.degree(source) as i64).unwrap_or(1);
    GradedOperator::from_fn(cx.clone(), cx.clone(), 2, deg, |c| if c == source { image.clone() } else { TensorChain::zero() })
        .expect("well-formed unit operator")
}

/// Class of the `H_2 → H_1^{⊗3}` part of `m3_1` in
/// `Hom(H_2, Λ / Den) / δ Hom(H_1, [H_1, H_1])`, `Λ = [H_1,[H_1,H_1]] + Den`.
pub fn massey_invariant<T: Scalar>(s: &CoalgebraStructure<T>, mode: MasseyMode) -> Result<InvariantClass<T>, InvariantError> {
    let cx = s.complex();
    let win = Window::new(cx);
    let m = win.m;
    let n3 = m * m * m;
    let m20 = op(s, Generator::M2(0))?;
    let m31 = op(s, Generator::M3(1))?;
    let h2 = cx.cells(2).to_vec();
    let lie = lie_lattice::<T>(m);

    // Den: images of f2_1 components H_2 → H_1⊗H_2 ⊕ H_2⊗H_1 (only the swap-invariant ones in strict mode).
    let mixed: Vec<Vec<usize>> = cx
        .words_of_degree(2, 3)
        .into_iter()
        .filter(|w| w.iter().any(|&x| cx.degree(x) == 1) && w.iter().any(|&x| cx.degree(x) == 2))
        .collect();
    let choices: Vec<TensorChain<T>> = match mode {
        MasseyMode::Strict => swap_kernel(cx, &mixed, 1),
        MasseyMode::Normalized => mixed.iter().map(|w| TensorChain::word(w.clone())).collect(),
    };
    let mut den = Vec::new();
    if let Some(&s0) = h2.first() {
        for x in &choices {
            let f = unit_operator(cx, s0, x.clone());
            let change = m3_change(m20, m20, &f)?;
            den.push(win.project(change.image(s0), 3));
        }
    }
    den.retain(|v| v.iter().any(|c| !c.is_zero()));

    let mut spanning = lie.degree3.clone();
    spanning.extend(den.iter().cloned());
    let lambda: Vec<Vec<T>> = if spanning.is_empty() { Vec::new() } else { column_span_basis(&Matrix::from_columns(n3, &spanning)) };
    let l = lambda.len();
    let r2 = h2.len();
    let block = |k: usize, local: Vec<T>| {
        let mut full = vec![T::zero(); r2 * l];
        full[k * l..(k + 1) * l].clone_from_slice(&local);
        full
    };

    let mut relations = Vec::new();
    for k in 0..r2 {
        for d in &den {
            relations.push(block(k, coords(&lambda, n3, d).expect("denominator lies in Λ")));
        }
    }
    // δ on H_1 → [H_1,H_1]
    let words2: Vec<Vec<usize>> = (0..m * m).map(|i| win.h1_word(i, 2)).collect();
    let commutators = swap_kernel(cx, &words2, 1);
    for &a in cx.cells(1) {
        for x in &commutators {
            let f = unit_operator(cx, a, x.clone());
            let change = m3_change(m20, m20, &f)?;
            let mut full = Vec::with_capacity(r2 * l);
            for &s2 in &h2 {
                let v = win.project(change.image(s2), 3);
                full.extend(coords(&lambda, n3, &v).ok_or_else(|| InvariantError::NotNormalizable(cx.label(s2).to_string()))?);
            }
            relations.push(full);
        }
    }

    let mut rep = Vec::with_capacity(r2 * l);
    for &s2 in &h2 {
        let v = win.project(m31.image(s2), 3);
        rep.extend(coords(&lambda, n3, &v).ok_or_else(|| InvariantError::NotNormalizable(cx.label(s2).to_string()))?);
    }
    Ok(InvariantClass { group: Arc::new(FpAbelianGroup::new(r2 * l, relations)), representative: rep })
}

/// `δμ` for `μ: H_1 → H_1^{⊗2}`, as the `H_2 → H_1^{⊗3}` part of the induced change.
pub fn delta_map<T: Scalar>(m20: &GradedOperator<T>, mu: &GradedOperator<T>) -> Result<GradedOperator<T>, OperatorError> {
    let cx = m20.source();
    let restricted = GradedOperator::from_fn(cx.clone(), cx.clone(), 2, 1, |c| {
        if cx.degree(c) == 1 {
            mu.image(c).clone()
        } else {
            TensorChain::zero()
        }
    })?;
    let change = m3_change(m20, m20, &restricted)?;
    GradedOperator::from_fn(cx.clone(), cx.clone(), 3, 1, |c| {
        if cx.degree(c) == 2 {
            change.image(c).filter(|w| w.iter().all(|&x| cx.degree(x) == 1))
        } else {
            TensorChain::zero()
        }
    })
}

/// Basis of the column span (not saturated).
fn column_span_basis<T: Scalar>(m: &Matrix<T>) -> Vec<Vec<T>> {
    let snf = smith_normal_form(m);
    (0..snf.rank)
        .map(|j| snf.u_inv.column(j).into_iter().map(|x| x * snf.s[(j, j)].clone()).collect())
        .collect()
}

/// The structure reached from `s` through the morphism with components
/// `f1_0 = id`, `f2_1 = f` and zero above.
pub fn perturb<T: Scalar>(s: &CoalgebraStructure<T>, f: &GradedOperator<T>) -> Result<CoalgebraStructure<T>, InvariantError> {
    let m20 = op(s, Generator::M2(0))?;
    let m21 = op(s, Generator::M2(1))?;
    let m31 = op(s, Generator::M3(1))?;
    let mut q = s.clone();
    q.set(Generator::M2(1), m21.add(&f.sub(&f.swap()?)?)?)?;
    q.set(Generator::M3(1), m31.add(&m3_change(m20, m20, f)?)?)?;
    Ok(q)
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::coalgebra::{chain_structure, Evaluator};
    use crate::operad::generator_differential;
    use crate::simplicial::parse_sset;
    use crate::transfer::transfer;
    use crate::algebra::build_sdr;

    fn torus() -> CoalgebraStructure<i64> {
        let x = parse_sset(include_str!("../fixtures/torus.sset")).unwrap();
        let s = chain_structure::<i64>(&x, 2).unwrap();
        let sdr = build_sdr(s.complex().clone()).unwrap();
        transfer(&s, &sdr).unwrap().homology
    }

    #[test]
    fn lie_ranks() {
        for (m, r2, r3) in [(0, 0, 0), (1, 0, 0), (2, 1, 2), (3, 3, 8)] {
            let l = lie_lattice::<i64>(m);
            assert_eq!((l.degree2.len(), l.degree3.len()), (r2, r3));
        }
    }

    #[test]
    fn perturbation_is_a_morphism() {
        let h = torus();
        let cx = h.complex().clone();
        let f = GradedOperator::from_fn(cx.clone(), cx.clone(), 2, 1, |c| match cx.label(c) {
            "[b]" => TensorChain::term(vec![cx.index_of("[b]").unwrap(), cx.index_of("[c]").unwrap()], 3),
            "[-U + L]" => TensorChain::term(vec![cx.index_of("[c]").unwrap(), c], -2),
            _ => TensorChain::zero(),
        })
        .unwrap();
        let q = perturb(&h, &f).unwrap();
        assert!(q.verify().is_empty());
        let mut morphism = BTreeMap::new();
        morphism.insert(Generator::F1, GradedOperator::identity(cx.clone()));
        morphism.insert(Generator::F2(1), f);
        morphism.insert(Generator::F2(2), GradedOperator::zero(cx.clone(), cx.clone(), 2, 2));
        morphism.insert(Generator::F3(2), GradedOperator::zero(cx.clone(), cx.clone(), 3, 2));
        let ev = Evaluator { lower: &h, upper: &q, morphism: Some(&morphism) };
        for (g, op) in &morphism {
            let rhs = ev.element(&generator_differential(*g).unwrap()).unwrap();
            assert!(op.commutator_with_differential().equals(&rhs), "d({g})");
        }
    }

    #[test]
    fn torus_square_class() {
        let c = sq_dual_invariant(&torus()).unwrap();
        assert_eq!(c.group.structure(), (0, vec![2, 2, 2, 2]));
        assert!(!c.is_zero());
    }

    #[test]
    fn zero_relations_give_free_group() {
        let g = FpAbelianGroup::<i64>::new(2, vec![vec![2, 0]]);
        assert_eq!(g.structure(), (1, vec![2]));
        let x = InvariantClass { group: Arc::new(g.clone()), representative: vec![4, 1] };
        let y = InvariantClass { group: Arc::new(g), representative: vec![0, 1] };
        assert!(class_equals(&x, &y).unwrap());
    }
}
