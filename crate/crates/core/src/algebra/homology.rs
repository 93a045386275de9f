//! Integral homology and strong deformation retractions onto it.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::chain::TensorChain;
use super::complex::ChainComplex;
use super::matrix::Matrix;
use super::operator::{GradedOperator, OperatorError};
use super::snf::{smith_normal_form, unimodular_inverse};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeHomology<T> {
    pub degree: usize,
    pub free_rank: usize,
    /// Invariant factors `>= 2`, each dividing the next.
    pub torsion: Vec<T>,
    /// Cycles whose classes form a basis of the free part.
    pub representatives: Vec<TensorChain<T>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyReport<T> {
    pub degrees: Vec<DegreeHomology<T>>,
}

impl<T: Scalar> HomologyReport<T> {
    pub fn betti(&self) -> Vec<usize> {
        self.degrees.iter().map(|h| h.free_rank).collect()
    }

    pub fn is_torsion_free(&self) -> bool {
        self.degrees.iter().all(|h| h.torsion.is_empty())
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum SdrError {
    #[error("homology has torsion in degree {degree}: coefficient {coefficient}")]
    TorsionPresent { degree: usize, coefficient: String },
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error("retractions have different homology ranks")]
    RankMismatch,
}

/// Per-degree splitting `C_d = B ⊕ H ⊕ A` with `∂: A_d ≅ B_{d-1}`.
struct Splitting<T: Scalar> {
    /// Columns: B basis, then H basis, then A basis.
    basis: Matrix<T>,
    b: usize,
    h: usize,
    torsion: Vec<T>,
}

fn boundary_matrices<T: Scalar>(cx: &ChainComplex<T>) -> Vec<Matrix<T>> {
    (0..=cx.max_degree() + 1)
        .map(|d| {
            if d > cx.max_degree() {
                Matrix::zeros(cx.rank(d - 1), 0)
            } else {
                cx.boundary_matrix(d)
            }
        })
        .collect()
}

/// `bd[d]` is `∂_d` for `d in 0..=top+1`.
fn split<T: Scalar>(bd: &[Matrix<T>]) -> Vec<Splitting<T>> {
    let top = bd.len() - 2;
    let mut out = Vec::with_capacity(top + 1);
    // Preimages of the B-basis of degree d-1, living in degree d.
    let mut lifted: Matrix<T> = Matrix::zeros(bd[0].cols(), 0);
    for d in 0..=top {
        let n = bd[d].cols();
        let sd = smith_normal_form(&bd[d]);
        let r = sd.rank;
        let z = sd.v.column_block(r, n);
        let m = (&sd.v_inv * &bd[d + 1]).row_block(r, n);
        let sm = smith_normal_form(&m);
        let rho = sm.rank;
        let torsion = sm.invariant_factors().into_iter().filter(|c| !c.is_one()).collect();
        let zq = &z * &sm.u_inv;
        let basis = zq.hstack(&lifted);
        out.push(Splitting { basis, b: rho, h: n - r - rho, torsion });
        lifted = sm.v.column_block(0, rho);
    }
    out
}

fn cycles<T: Scalar>(cx: &ChainComplex<T>, d: usize, m: &Matrix<T>) -> Vec<TensorChain<T>> {
    m.columns().iter().map(|v| cx.chain_from_coordinates(d, v)).collect()
}

/// Exact integral homology with cycle representatives for the free part.
pub fn homology<T: Scalar>(cx: &ChainComplex<T>) -> HomologyReport<T> {
    let degrees = split(&boundary_matrices(cx))
        .into_iter()
        .enumerate()
        .map(|(d, s)| DegreeHomology {
            degree: d,
            free_rank: s.h,
            torsion: s.torsion,
            representatives: cycles(cx, d, &s.basis.column_block(s.b, s.b + s.h)),
        })
        .collect();
    HomologyReport { degrees }
}

/// `f: K → L`, `g: L → K`, `h: K → K` of degree 1 with
/// `fg = id`, `gf = id + ∂h + h∂`, `hh = 0`, `fh = 0`, `hg = 0`.
#[derive(Clone, Debug)]
pub struct Sdr<T: Scalar> {
    pub f: GradedOperator<T>,
    pub g: GradedOperator<T>,
    pub h: GradedOperator<T>,
}

impl<T: Scalar> Sdr<T> {
    pub fn source(&self) -> &Arc<ChainComplex<T>> {
        self.f.source()
    }

    pub fn target(&self) -> &Arc<ChainComplex<T>> {
        self.f.target()
    }

    /// Names of the retraction identities that fail; empty when all hold.
    pub fn verify(&self) -> Vec<String> {
        let mut bad = Vec::new();
        let k = self.source().clone();
        let l = self.target().clone();
        let id_k = GradedOperator::identity(k.clone());
        let id_l = GradedOperator::identity(l.clone());
        let mut check = |name: &str, r: Result<bool, OperatorError>| {
            if !r.unwrap_or(false) {
                bad.push(name.to_string());
            }
        };
        check("fg = id", self.f.after(&self.g).map(|x| x.equals(&id_l)));
        check(
            "gf = id + dh + hd",
            self.g.after(&self.f).and_then(|gf| Ok(gf.equals(&id_k.add(&self.h.commutator_with_differential())?))),
        );
        check("hh = 0", self.h.after(&self.h).map(|x| x.is_zero()));
        check("fh = 0", self.f.after(&self.h).map(|x| x.is_zero()));
        check("hg = 0", self.h.after(&self.g).map(|x| x.is_zero()));
        check("f is a chain map", Ok(self.f.commutator_with_differential().is_zero()));
        check("g is a chain map", Ok(self.g.commutator_with_differential().is_zero()));
        bad
    }

    /// Re-expresses `self` in the homology basis of `reference`: with `α = f∘g_ref`,
    /// returns `(α⁻¹f, gα, h)` targeting the same complex as `reference`.
    pub fn align_to(&self, reference: &Sdr<T>) -> Result<Sdr<T>, SdrError> {
        let l = reference.target().clone();
        if l.ranks() != self.target().ranks() {
            return Err(SdrError::RankMismatch);
        }
        let alpha = self.f.after(&reference.g)?;
        let mut inv_blocks = Vec::new();
        for d in 0..=l.max_degree() {
            let m = alpha.matrix(d, &alpha.target_words(d));
            inv_blocks.push(unimodular_inverse(&m).ok_or(SdrError::RankMismatch)?);
        }
        let alpha_inv = GradedOperator::from_blocks(self.target().clone(), l.clone(), 0, &inv_blocks)?;
        // α as a map l → self.target
        let alpha_fwd = GradedOperator::new(l.clone(), self.target().clone(), 1, 0, alpha.images().to_vec())?;
        Ok(Sdr { f: alpha_inv.after(&self.f)?, g: self.g.after(&alpha_fwd)?, h: self.h.clone() })
    }
}

fn build_from_splitting<T: Scalar>(
    cx: Arc<ChainComplex<T>>,
    parts: Vec<Splitting<T>>,
) -> Result<Sdr<T>, SdrError> {
    for (d, p) in parts.iter().enumerate() {
        if let Some(c) = p.torsion.first() {
            return Err(SdrError::TorsionPresent { degree: d, coefficient: c.to_string() });
        }
    }
    let mut labels = Vec::new();
    let mut degrees = Vec::new();
    for (d, p) in parts.iter().enumerate() {
        for col in p.basis.column_block(p.b, p.b + p.h).columns() {
            let rep = cx.chain_from_coordinates(d, &col);
            labels.push(format!("[{}]", cx.render_chain(&rep)));
            degrees.push(d);
        }
    }
    let l = Arc::new(ChainComplex::graded(labels, degrees));
    let inverses: Vec<Matrix<T>> =
        parts.iter().map(|p| unimodular_inverse(&p.basis).expect("splitting basis is unimodular")).collect();
    let mut f = Vec::new();
    let mut g = Vec::new();
    let mut h = Vec::new();
    for (d, p) in parts.iter().enumerate() {
        f.push(inverses[d].row_block(p.b, p.b + p.h));
        g.push(p.basis.column_block(p.b, p.b + p.h));
        let n = p.basis.rows();
        let hd = match parts.get(d + 1) {
            Some(up) => {
                let a = up.basis.column_block(up.b + up.h, up.basis.cols());
                let coords = inverses[d].row_block(0, p.b);
                let mut m = &a * &coords;
                for i in 0..m.rows() {
                    m.negate_row(i);
                }
                m
            }
            None => Matrix::zeros(0, n),
        };
        h.push(hd);
    }
    Ok(Sdr {
        f: GradedOperator::from_blocks(cx.clone(), l.clone(), 0, &f)?,
        g: GradedOperator::from_blocks(l, cx.clone(), 0, &g)?,
        h: GradedOperator::from_blocks(cx.clone(), cx, 1, &h)?,
    })
}

/// Retraction of `cx` onto its homology (zero differential), basis `[rep]` per class.
pub fn build_sdr<T: Scalar>(cx: Arc<ChainComplex<T>>) -> Result<Sdr<T>, SdrError> {
    let parts = split(&boundary_matrices(&cx));
    build_from_splitting(cx, parts)
}

fn random_unimodular<T: Scalar>(n: usize, rng: &mut ChaCha8Rng) -> Matrix<T> {
    let mut w = Matrix::identity(n);
    if n < 2 {
        if n == 1 && rng.gen_bool(0.5) {
            w.negate_row(0);
        }
        return w;
    }
    for _ in 0..3 * n {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        match rng.gen_range(0..4) {
            0 => w.swap_cols(i, j),
            1 => w.negate_col(i),
            _ => w.add_col_multiple(i, j, &T::from_int(rng.gen_range(-2..=2))),
        }
    }
    w
}

/// A second retraction, built in a pseudo-randomly changed basis of `cx`
/// (deterministic in `seed`) and transported back. Its homology basis generally
/// differs from [`build_sdr`]'s; use [`Sdr::align_to`] to compare.
pub fn build_sdr_variant<T: Scalar>(cx: Arc<ChainComplex<T>>, seed: u64) -> Result<Sdr<T>, SdrError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bd = boundary_matrices(&cx);
    let top = bd.len() - 2;
    let w: Vec<Matrix<T>> = (0..=top).map(|d| random_unimodular(cx.rank(d), &mut rng)).collect();
    let w_inv: Vec<Matrix<T>> = w.iter().map(|m| unimodular_inverse(m).expect("unimodular")).collect();
    let changed: Vec<Matrix<T>> = (0..bd.len())
        .map(|d| {
            let right = if d <= top { &bd[d] * &w[d] } else { bd[d].clone() };
            if d == 0 {
                right
            } else {
                &w_inv[d - 1] * &right
            }
        })
        .collect();
    let parts = split(&changed)
        .into_iter()
        .enumerate()
        .map(|(d, mut p)| {
            p.basis = &w[d] * &p.basis;
            p
        })
        .collect();
    build_from_splitting(cx, parts)
}

/// `C^{⊗n}` with the Koszul-signed differential.
pub fn tensor_complex<T: Scalar>(cx: &ChainComplex<T>, n: usize) -> ChainComplex<T> {
    cx.tensor_power(n)
}
