//! Homogeneous operators `K → L^{⊗n}` with Koszul-signed composition.

use std::fmt;
use std::sync::Arc;

use super::chain::{TensorChain, Word};
use super::complex::ChainComplex;
use super::matrix::Matrix;
use crate::scalar::Scalar;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum OperatorError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
}

/// A degree-`degree` map from `source` to the `arity`-fold tensor power of `target`,
/// stored as the image of every source basis cell.
#[derive(Clone)]
pub struct GradedOperator<T> {
    source: Arc<ChainComplex<T>>,
    target: Arc<ChainComplex<T>>,
    arity: usize,
    degree: i64,
    images: Vec<TensorChain<T>>,
}

pub(crate) fn same_complex<T: Scalar>(a: &Arc<ChainComplex<T>>, b: &Arc<ChainComplex<T>>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl<T: Scalar> GradedOperator<T> {
    pub fn new(
        source: Arc<ChainComplex<T>>,
        target: Arc<ChainComplex<T>>,
        arity: usize,
        degree: i64,
        images: Vec<TensorChain<T>>,
    ) -> Result<Self, OperatorError> {
        if images.len() != source.len() {
            return Err(OperatorError::ShapeMismatch(format!(
                "{} images for {} source cells",
                images.len(),
                source.len()
            )));
        }
        for (c, img) in images.iter().enumerate() {
            for (w, _) in img.iter() {
                let want = source.degree(c) as i64 + degree;
                if w.len() != arity || w.iter().any(|&x| x >= target.len()) || target.word_degree(w) as i64 != want {
                    return Err(OperatorError::ShapeMismatch(format!(
                        "image of {} contains a word {:?} that is not of arity {} and degree {}",
                        source.label(c),
                        w,
                        arity,
                        want
                    )));
                }
            }
        }
        Ok(GradedOperator { source, target, arity, degree, images })
    }

    pub fn zero(source: Arc<ChainComplex<T>>, target: Arc<ChainComplex<T>>, arity: usize, degree: i64) -> Self {
        let images = vec![TensorChain::zero(); source.len()];
        GradedOperator { source, target, arity, degree, images }
    }

    pub fn identity(cx: Arc<ChainComplex<T>>) -> Self {
        let images = (0..cx.len()).map(|c| TensorChain::word(vec![c])).collect();
        GradedOperator { source: cx.clone(), target: cx, arity: 1, degree: 0, images }
    }

    /// Builds an operator from a per-cell image function.
    pub fn from_fn(
        source: Arc<ChainComplex<T>>,
        target: Arc<ChainComplex<T>>,
        arity: usize,
        degree: i64,
        f: impl FnMut(usize) -> TensorChain<T>,
    ) -> Result<Self, OperatorError> {
        let images = (0..source.len()).map(f).collect();
        Self::new(source, target, arity, degree, images)
    }

    /// Arity-1 operator from per-degree matrices; `blocks[d]` maps source degree `d`
    /// into target degree `d + degree`.
    pub fn from_blocks(
        source: Arc<ChainComplex<T>>,
        target: Arc<ChainComplex<T>>,
        degree: i64,
        blocks: &[Matrix<T>],
    ) -> Result<Self, OperatorError> {
        let mut images = vec![TensorChain::zero(); source.len()];
        for (d, m) in blocks.iter().enumerate() {
            let cells = source.cells(d);
            let td = d as i64 + degree;
            if m.cols() != cells.len() {
                return Err(OperatorError::ShapeMismatch(format!("block {d} has {} columns, expected {}", m.cols(), cells.len())));
            }
            let tcells: &[usize] = if td >= 0 { target.cells(td as usize) } else { &[] };
            if m.rows() != tcells.len() {
                return Err(OperatorError::ShapeMismatch(format!("block {d} has {} rows, expected {}", m.rows(), tcells.len())));
            }
            for (j, &c) in cells.iter().enumerate() {
                for (i, &t) in tcells.iter().enumerate() {
                    if !m[(i, j)].is_zero() {
                        images[c].add_term(vec![t], m[(i, j)].clone());
                    }
                }
            }
        }
        Self::new(source, target, 1, degree, images)
    }

    pub fn source(&self) -> &Arc<ChainComplex<T>> {
        &self.source
    }

    pub fn target(&self) -> &Arc<ChainComplex<T>> {
        &self.target
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn image(&self, c: usize) -> &TensorChain<T> {
        &self.images[c]
    }

    pub fn images(&self) -> &[TensorChain<T>] {
        &self.images
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(TensorChain::is_zero)
    }

    /// Applies the operator to a combination of single cells.
    pub fn apply(&self, ch: &TensorChain<T>) -> TensorChain<T> {
        let mut out = TensorChain::zero();
        for (w, c) in ch.iter() {
            debug_assert_eq!(w.len(), 1);
            out.add_scaled(&self.images[w[0]], c);
        }
        out
    }

    fn check_same_shape(&self, other: &Self) -> Result<(), OperatorError> {
        if self.arity != other.arity
            || self.degree != other.degree
            || !same_complex(&self.source, &other.source)
            || !same_complex(&self.target, &other.target)
        {
            return Err(OperatorError::ShapeMismatch(format!(
                "cannot combine arity {} degree {} with arity {} degree {}",
                self.arity, self.degree, other.arity, other.degree
            )));
        }
        Ok(())
    }

    pub fn linear_combination(&self, a: &T, other: &Self, b: &T) -> Result<Self, OperatorError> {
        self.check_same_shape(other)?;
        let images = self
            .images
            .iter()
            .zip(&other.images)
            .map(|(x, y)| {
                let mut z = x.scale(a);
                z.add_scaled(y, b);
                z
            })
            .collect();
        Ok(GradedOperator { images, ..self.clone() })
    }

    pub fn add(&self, other: &Self) -> Result<Self, OperatorError> {
        self.linear_combination(&T::one(), other, &T::one())
    }

    pub fn sub(&self, other: &Self) -> Result<Self, OperatorError> {
        self.linear_combination(&T::one(), other, &-T::one())
    }

    pub fn scale(&self, c: &T) -> Self {
        GradedOperator { images: self.images.iter().map(|x| x.scale(c)).collect(), ..self.clone() }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-T::one())
    }

    /// Exact equality of two operators with the same shape.
    pub fn equals(&self, other: &Self) -> bool {
        self.arity == other.arity
            && self.degree == other.degree
            && self.source.len() == other.source.len()
            && self.images == other.images
    }

    /// Left action of a permutation on the output factors: the factor in slot `i`
    /// moves to slot `perm[i]`, with the Koszul sign of the reordering.
    pub fn permute(&self, perm: &[usize]) -> Result<Self, OperatorError> {
        if perm.len() != self.arity {
            return Err(OperatorError::ShapeMismatch(format!(
                "permutation of {} letters acting on arity {}",
                perm.len(),
                self.arity
            )));
        }
        let images = self.images.iter().map(|img| permute_chain(&self.target, img, perm)).collect();
        Ok(GradedOperator { images, ..self.clone() })
    }

    /// The factor swap `T` on arity-2 operators.
    pub fn swap(&self) -> Result<Self, OperatorError> {
        self.permute(&[1, 0])
    }

    /// `(a_1 ⊗ … ⊗ a_n) ∘ b`, with `(f⊗g)(x⊗y) = (-1)^{|g||x|} f(x)⊗g(y)`.
    ///
    /// Each `a_i` must have `b`'s target as its source; all `a_i` share a target.
    pub fn parallel(ops: &[&GradedOperator<T>], b: &GradedOperator<T>) -> Result<Self, OperatorError> {
        if ops.len() != b.arity {
            return Err(OperatorError::ShapeMismatch(format!("{} operators for arity {}", ops.len(), b.arity)));
        }
        let target = match ops.first() {
            Some(a) => a.target.clone(),
            None => b.target.clone(),
        };
        for a in ops {
            if !same_complex(&a.source, &b.target) {
                return Err(OperatorError::ShapeMismatch("operator source differs from the inner target".into()));
            }
            if !same_complex(&a.target, &target) {
                return Err(OperatorError::ShapeMismatch("outer operators have different targets".into()));
            }
        }
        let arity = ops.iter().map(|a| a.arity).sum();
        let degree = b.degree + ops.iter().map(|a| a.degree).sum::<i64>();
        let images = b
            .images
            .iter()
            .map(|img| {
                let mut out = TensorChain::zero();
                for (w, c) in img.iter() {
                    out.add_scaled(&tensor_apply(ops, &b.target, w), c);
                }
                out
            })
            .collect();
        Ok(GradedOperator { source: b.source.clone(), target, arity, degree, images })
    }

    /// Substitutes `a` into output slot `slot` (1-based) of `b`: `(id ⊗ … ⊗ a ⊗ … ⊗ id) ∘ b`.
    pub fn compose(a: &GradedOperator<T>, b: &GradedOperator<T>, slot: usize) -> Result<Self, OperatorError> {
        if slot == 0 || slot > b.arity {
            return Err(OperatorError::ShapeMismatch(format!("slot {slot} out of range for arity {}", b.arity)));
        }
        if !same_complex(&a.target, &b.target) {
            return Err(OperatorError::ShapeMismatch("slot composition needs a common complex".into()));
        }
        let id = GradedOperator::identity(b.target.clone());
        let ops: Vec<&GradedOperator<T>> = (1..=b.arity).map(|i| if i == slot { a } else { &id }).collect();
        Self::parallel(&ops, b)
    }

    /// `self ∘ b` for an arity-1 `b`.
    pub fn after(&self, b: &GradedOperator<T>) -> Result<Self, OperatorError> {
        Self::parallel(&[self], b)
    }

    /// The Hom-complex differential `[∂, F] = ∂∘F - (-1)^{|F|} F∘∂`.
    pub fn commutator_with_differential(&self) -> Self {
        let sign = T::sign(self.degree);
        let images = (0..self.source.len())
            .map(|c| {
                let mut out = self.target.boundary_of_chain(&self.images[c]);
                for (w, v) in self.source.boundary(c).iter() {
                    out.add_scaled(&self.images[w[0]], &(-(sign.clone() * v.clone())));
                }
                out
            })
            .collect();
        GradedOperator { images, degree: self.degree - 1, ..self.clone() }
    }

    /// Matrix of the block from source degree `d` into the listed target words.
    pub fn matrix(&self, d: usize, target_words: &[Word]) -> Matrix<T> {
        let index: std::collections::HashMap<&Word, usize> =
            target_words.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let cells = self.source.cells(d);
        let mut m = Matrix::zeros(target_words.len(), cells.len());
        for (j, &c) in cells.iter().enumerate() {
            for (w, v) in self.images[c].iter() {
                let i = *index.get(w).expect("target word list must cover the image");
                m[(i, j)] = v.clone();
            }
        }
        m
    }

    /// Words of the target tensor power receiving source degree `d`.
    pub fn target_words(&self, d: usize) -> Vec<Word> {
        let td = d as i64 + self.degree;
        if td < 0 {
            return Vec::new();
        }
        self.target.words_of_degree(self.arity, td as usize)
    }

    pub fn render(&self) -> Vec<(String, String)> {
        (0..self.source.len())
            .map(|c| (self.source.label(c).to_string(), self.target.render_chain(&self.images[c])))
            .collect()
    }
}

/// `(a_1 ⊗ … ⊗ a_n)(w_1 ⊗ … ⊗ w_n)` with Koszul signs; `inner` supplies the degrees of `w`.
pub(crate) fn tensor_apply<T: Scalar>(ops: &[&GradedOperator<T>], inner: &ChainComplex<T>, w: &Word) -> TensorChain<T> {
    let mut acc: TensorChain<T> = TensorChain::scalar(T::one());
    let mut passed = 0i64;
    let mut exponent = 0i64;
    for (a, &x) in ops.iter().zip(w) {
        exponent += a.degree * passed;
        passed += inner.degree(x) as i64;
        let img = &a.images[x];
        if img.is_zero() {
            return TensorChain::zero();
        }
        let mut next = TensorChain::zero();
        for (u, cu) in acc.iter() {
            for (v, cv) in img.iter() {
                let mut nw = u.clone();
                nw.extend_from_slice(v);
                next.add_term(nw, cu.clone() * cv.clone());
            }
        }
        acc = next;
    }
    acc.scale(&T::sign(exponent))
}

/// Koszul-signed action of a permutation on tensor words.
pub(crate) fn permute_chain<T: Scalar>(cx: &ChainComplex<T>, ch: &TensorChain<T>, perm: &[usize]) -> TensorChain<T> {
    ch.map_words(|w| {
        let mut out = vec![0; w.len()];
        let mut exponent = 0i64;
        for i in 0..w.len() {
            out[perm[i]] = w[i];
            for j in i + 1..w.len() {
                if perm[i] > perm[j] {
                    exponent += (cx.degree(w[i]) * cx.degree(w[j])) as i64;
                }
            }
        }
        Some((out, T::sign(exponent)))
    })
}

impl<T: Scalar> fmt::Debug for GradedOperator<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "GradedOperator(arity {}, degree {})", self.arity, self.degree)?;
        for (s, img) in self.render() {
            writeln!(f, "  {s} -> {img}")?;
        }
        Ok(())
    }
}
