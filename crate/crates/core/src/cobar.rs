//! Truncated cobar construction on a reduced chain coalgebra and the word-length
//! graded ranks of its `H_0`.
//!
//! A letter is the desuspension `s⁻¹x` of a cell of positive degree, of degree `|x| - 1`.
//! `D(s⁻¹x) = -s⁻¹∂x + Σ (-1)^{|x'|} s⁻¹x' s⁻¹x''` over `Δ̃(x) = Σ x'⊗x''`, extended
//! to words as a derivation.

use std::sync::Arc;

use crate::algebra::snf::smith_normal_form;
use crate::algebra::{ChainComplex, GradedOperator, Matrix, TensorChain, Word};
use crate::coalgebra::{reduce, CoalgebraError, CoalgebraStructure};
use crate::operad::Generator;
use crate::scalar::Scalar;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum CobarError {
    #[error(transparent)]
    Coalgebra(#[from] CoalgebraError),
    #[error("maximal word length must be at least 1")]
    Length,
    #[error("structure has no m2_0")]
    MissingDiagonal,
}

/// Sign of the quadratic part of `D`. `Flipped` drops the `(-1)^{|x'|}` coming from the
/// shift and is kept as a deliberate defect for the `D² = 0` check.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ShiftConvention {
    #[default]
    Standard,
    Flipped,
}

#[derive(Clone, Debug)]
pub struct TruncatedCobar<T: Scalar> {
    complex: Arc<ChainComplex<T>>,
    diagonal: GradedOperator<T>,
    max_len: usize,
    convention: ShiftConvention,
}

/// Builds the cobar construction of `s`, reducing it first if needed.
pub fn build_cobar<T: Scalar>(s: &CoalgebraStructure<T>, max_len: usize) -> Result<TruncatedCobar<T>, CobarError> {
    build_cobar_with(s, max_len, ShiftConvention::Standard)
}

pub fn build_cobar_with<T: Scalar>(
    s: &CoalgebraStructure<T>,
    max_len: usize,
    convention: ShiftConvention,
) -> Result<TruncatedCobar<T>, CobarError> {
    if max_len < 1 {
        return Err(CobarError::Length);
    }
    let reduced;
    let s = if s.is_reduced() {
        s
    } else {
        reduced = reduce(s)?;
        &reduced
    };
    let diagonal = s.get(Generator::M2(0)).ok_or(CobarError::MissingDiagonal)?.clone();
    Ok(TruncatedCobar { complex: s.complex().clone(), diagonal, max_len, convention })
}

impl<T: Scalar> TruncatedCobar<T> {
    pub fn complex(&self) -> &Arc<ChainComplex<T>> {
        &self.complex
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    fn letter_degree(&self, c: usize) -> usize {
        self.complex.degree(c) - 1
    }

    /// Words of `len` letters and total shifted degree `degree`.
    pub fn words(&self, len: usize, degree: usize) -> Vec<Word> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(len);
        self.words_rec(len, degree, &mut cur, &mut out);
        out
    }

    fn words_rec(&self, len: usize, degree: usize, cur: &mut Word, out: &mut Vec<Word>) {
        if cur.len() == len {
            if degree == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for c in 0..self.complex.len() {
            let d = self.letter_degree(c);
            if d <= degree {
                cur.push(c);
                self.words_rec(len, degree - d, cur, out);
                cur.pop();
            }
        }
    }

    /// `D` of a single letter.
    pub fn letter_differential(&self, c: usize) -> TensorChain<T> {
        let mut out = self.complex.boundary(c).scale(&-T::one());
        for (w, v) in self.diagonal.image(c).iter() {
            let sign = match self.convention {
                ShiftConvention::Standard => T::sign(self.complex.degree(w[0]) as i64),
                ShiftConvention::Flipped => T::one(),
            };
            out.add_term(w.clone(), sign * v.clone());
        }
        out
    }

    /// `D` of a word, as a derivation.
    pub fn differential(&self, w: &[usize]) -> TensorChain<T> {
        let mut out = TensorChain::zero();
        let mut before = 0i64;
        for (i, &c) in w.iter().enumerate() {
            let sign = T::sign(before);
            for (mid, v) in self.letter_differential(c).iter() {
                let mut word = w[..i].to_vec();
                word.extend_from_slice(mid);
                word.extend_from_slice(&w[i + 1..]);
                out.add_term(word, sign.clone() * v.clone());
            }
            before += self.letter_degree(c) as i64;
        }
        out
    }

    pub fn differential_of_chain(&self, ch: &TensorChain<T>) -> TensorChain<T> {
        let mut out = TensorChain::zero();
        for (w, v) in ch.iter() {
            out.add_scaled(&self.differential(w), v);
        }
        out
    }
}

/// Free ranks and torsion of `gr_ℓ H_0` for `ℓ < N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedRanks<T> {
    pub ranks: Vec<usize>,
    pub torsion: Vec<Vec<T>>,
}

/// `gr_ℓ H_0 = C_0^ℓ / π_ℓ(B ∩ F_ℓ)`, with `F_ℓ` spanned by words of length `≥ ℓ`
/// and `B` the image of `D` from degree 1.
pub fn gr_h0_ranks<T: Scalar>(t: &TruncatedCobar<T>) -> GradedRanks<T> {
    let zero_words: Vec<Vec<Word>> = (0..t.max_len).map(|l| t.words(l, 0)).collect();
    let one_words: Vec<Vec<Word>> = (0..t.max_len).map(|l| t.words(l, 1)).collect();
    let mut ranks = Vec::new();
    let mut torsion = Vec::new();
    for l in 0..t.max_len {
        let rows = &zero_words[l];
        let row_of = |w: &Word| rows.binary_search(w).ok();
        let mut gens: Vec<Vec<T>> = Vec::new();
        let project = |ch: &TensorChain<T>| {
            let mut v = vec![T::zero(); rows.len()];
            for (w, c) in ch.iter() {
                if let Some(i) = row_of(w) {
                    v[i] = v[i].clone() + c.clone();
                }
            }
            v
        };
        for w in &one_words[l] {
            gens.push(project(&t.differential(w)));
        }
        // combinations of shorter words whose image vanishes below length l
        let lower_rows: Vec<Word> = zero_words[..l].iter().flatten().cloned().collect();
        let lower_cols: Vec<Word> = one_words[..l].iter().flatten().cloned().collect();
        if !lower_cols.is_empty() {
            let images: Vec<TensorChain<T>> = lower_cols.iter().map(|w| t.differential(w)).collect();
            let m = Matrix::from_columns(
                lower_rows.len(),
                &images
                    .iter()
                    .map(|ch| {
                        let mut v = vec![T::zero(); lower_rows.len()];
                        for (w, c) in ch.iter() {
                            if let Ok(i) = lower_rows.binary_search_by(|x| (x.len(), x).cmp(&(w.len(), w))) {
                                v[i] = v[i].clone() + c.clone();
                            }
                        }
                        v
                    })
                    .collect::<Vec<_>>(),
            );
            for k in smith_normal_form(&m).kernel_basis() {
                let mut ch = TensorChain::zero();
                for (img, c) in images.iter().zip(&k) {
                    ch.add_scaled(img, c);
                }
                gens.push(project(&ch));
            }
        }
        gens.retain(|g| g.iter().any(|c| !c.is_zero()));
        let snf = smith_normal_form(&Matrix::from_columns(rows.len(), &gens));
        ranks.push(rows.len() - snf.rank);
        torsion.push(snf.invariant_factors().into_iter().filter(|c| !c.is_one()).collect());
    }
    GradedRanks { ranks, torsion }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CobarReport {
    pub checked: usize,
    pub violations: Vec<String>,
}

impl CobarReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// `D² = 0` on every word of length `< N` in degrees 1 and 2.
pub fn check_d_squared_cobar<T: Scalar>(t: &TruncatedCobar<T>) -> CobarReport {
    let mut checked = 0;
    let mut violations = Vec::new();
    for degree in 1..=2 {
        for l in 1..t.max_len {
            for w in t.words(l, degree) {
                checked += 1;
                let dd = t.differential_of_chain(&t.differential(&w));
                if !dd.is_zero() {
                    let name: Vec<&str> = w.iter().map(|&c| t.complex.label(c)).collect();
                    violations.push(format!("D² on {}", name.join(" ")));
                }
            }
        }
    }
    CobarReport { checked, violations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coalgebra::chain_structure;
    use crate::fixtures;
    use crate::simplicial::parse_sset;

    fn cobar(name: &str, n: usize, convention: ShiftConvention) -> TruncatedCobar<i64> {
        let s = chain_structure(&parse_sset(fixtures::sset(name).unwrap()).unwrap(), 1).unwrap();
        build_cobar_with(&s, n, convention).unwrap()
    }

    #[test]
    fn torus_letters() {
        let t = cobar("torus", 3, ShiftConvention::Standard);
        let k = t.complex();
        let u = k.index_of("U").unwrap();
        let d = t.letter_differential(u);
        let (a, b, c) = (k.index_of("a").unwrap(), k.index_of("b").unwrap(), k.index_of("c").unwrap());
        let mut expected = TensorChain::term(vec![a], -1);
        expected.add_term(vec![b], -1);
        expected.add_term(vec![c], 1);
        expected.add_term(vec![a, b], -1);
        assert_eq!(d, expected);
        assert_eq!(t.words(2, 0).len(), 9);
        assert_eq!(t.words(2, 1).len(), 12);
    }

    #[test]
    fn ranks() {
        assert_eq!(gr_h0_ranks(&cobar("torus", 4, ShiftConvention::Standard)).ranks, vec![1, 2, 3, 4]);
        assert_eq!(gr_h0_ranks(&cobar("point", 3, ShiftConvention::Standard)).ranks, vec![1, 0, 0]);
        assert_eq!(gr_h0_ranks(&cobar("circle", 3, ShiftConvention::Standard)).ranks, vec![1, 1, 1]);
    }

    #[test]
    fn projective_plane_has_torsion() {
        let g = gr_h0_ranks(&cobar("rp2", 3, ShiftConvention::Standard));
        assert_eq!(g.ranks, vec![1, 0, 0]);
        assert_eq!(g.torsion, vec![vec![], vec![2], vec![2]]);
    }

    #[test]
    fn flipped_shift_is_detected() {
        assert!(check_d_squared_cobar(&cobar("tetra", 3, ShiftConvention::Standard)).is_clean());
        assert!(!check_d_squared_cobar(&cobar("tetra", 3, ShiftConvention::Flipped)).is_clean());
    }

    #[test]
    fn errors() {
        let s = chain_structure::<i64>(&parse_sset(fixtures::sset("torus").unwrap()).unwrap(), 1).unwrap();
        assert_eq!(build_cobar(&s, 0).unwrap_err(), CobarError::Length);
        let two = chain_structure::<i64>(&parse_sset("dim 0:\n u: []\n v: []\n").unwrap(), 1).unwrap();
        assert_eq!(build_cobar(&two, 2).unwrap_err(), CobarError::Coalgebra(CoalgebraError::MultipleVertices(2)));
    }
}
