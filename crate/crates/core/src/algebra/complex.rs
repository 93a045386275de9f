//! Bounded chain complexes of finitely generated free modules with chosen bases.

use std::collections::HashMap;
use std::fmt;

use super::chain::{TensorChain, Word};
use super::matrix::Matrix;
use crate::scalar::Scalar;

/// A chain complex concentrated in degrees `0..=max_degree`, differential of degree -1.
///
/// Basis elements ("cells") are numbered globally; each carries a label and a degree.
#[derive(Clone, PartialEq, Eq)]
pub struct ChainComplex<T> {
    labels: Vec<String>,
    degrees: Vec<usize>,
    boundary: Vec<TensorChain<T>>,
    by_degree: Vec<Vec<usize>>,
    position: Vec<usize>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ComplexError {
    #[error("boundary of cell {cell} refers to cell {target} which is not one degree lower")]
    BadBoundary { cell: String, target: usize },
    #[error("d∘d is nonzero on cell {0}")]
    NotAComplex(String),
    #[error("duplicate label {0}")]
    DuplicateLabel(String),
}

impl<T: Scalar> ChainComplex<T> {
    /// `boundary[c]` lists `(cell, coefficient)` pairs in degree `degrees[c] - 1`.
    pub fn new(labels: Vec<String>, degrees: Vec<usize>, boundary: Vec<Vec<(usize, T)>>) -> Result<Self, ComplexError> {
        assert_eq!(labels.len(), degrees.len());
        assert_eq!(labels.len(), boundary.len());
        let mut seen = HashMap::new();
        for l in &labels {
            if seen.insert(l.clone(), ()).is_some() {
                return Err(ComplexError::DuplicateLabel(l.clone()));
            }
        }
        let max_degree = degrees.iter().copied().max().unwrap_or(0);
        let mut by_degree = vec![Vec::new(); max_degree + 1];
        let mut position = vec![0; labels.len()];
        for (c, &d) in degrees.iter().enumerate() {
            position[c] = by_degree[d].len();
            by_degree[d].push(c);
        }
        let mut chains = Vec::with_capacity(boundary.len());
        for (c, terms) in boundary.into_iter().enumerate() {
            let mut ch = TensorChain::zero();
            for (t, v) in terms {
                if t >= labels.len() || degrees[c] == 0 || degrees[t] + 1 != degrees[c] {
                    return Err(ComplexError::BadBoundary { cell: labels[c].clone(), target: t });
                }
                ch.add_term(vec![t], v);
            }
            chains.push(ch);
        }
        let cx = ChainComplex { labels, degrees, boundary: chains, by_degree, position };
        for c in 0..cx.len() {
            if !cx.boundary_of_chain(&cx.boundary[c]).is_zero() {
                return Err(ComplexError::NotAComplex(cx.labels[c].clone()));
            }
        }
        Ok(cx)
    }

    /// Zero differential on the given graded basis.
    pub fn graded(labels: Vec<String>, degrees: Vec<usize>) -> Self {
        let n = labels.len();
        Self::new(labels, degrees, vec![Vec::new(); n]).expect("zero differential is always valid")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn max_degree(&self) -> usize {
        self.by_degree.len() - 1
    }

    pub fn label(&self, c: usize) -> &str {
        &self.labels[c]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn degree(&self, c: usize) -> usize {
        self.degrees[c]
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Cells of degree `d` in basis order.
    pub fn cells(&self, d: usize) -> &[usize] {
        self.by_degree.get(d).map_or(&[], Vec::as_slice)
    }

    pub fn rank(&self, d: usize) -> usize {
        self.cells(d).len()
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.by_degree.iter().map(Vec::len).collect()
    }

    /// Position of cell `c` inside its degree block.
    pub fn position(&self, c: usize) -> usize {
        self.position[c]
    }

    pub fn boundary(&self, c: usize) -> &TensorChain<T> {
        &self.boundary[c]
    }

    pub fn word_degree(&self, w: &[usize]) -> usize {
        w.iter().map(|&c| self.degrees[c]).sum()
    }

    /// Differential of the tensor power, with the Koszul sign on each factor.
    pub fn boundary_of_word(&self, w: &Word) -> TensorChain<T> {
        let mut out = TensorChain::zero();
        let mut before = 0usize;
        for (i, &c) in w.iter().enumerate() {
            let sign = T::sign(before as i64);
            for (bw, coef) in self.boundary[c].iter() {
                let mut nw = w.clone();
                nw[i] = bw[0];
                out.add_term(nw, sign.clone() * coef.clone());
            }
            before += self.degrees[c];
        }
        out
    }

    pub fn boundary_of_chain(&self, ch: &TensorChain<T>) -> TensorChain<T> {
        let mut out = TensorChain::zero();
        for (w, c) in ch.iter() {
            out.add_scaled(&self.boundary_of_word(w), c);
        }
        out
    }

    /// Matrix of `∂: C_d → C_{d-1}` in the degree-block bases.
    pub fn boundary_matrix(&self, d: usize) -> Matrix<T> {
        let rows = if d == 0 { 0 } else { self.rank(d - 1) };
        let mut m = Matrix::zeros(rows, self.rank(d));
        for (j, &c) in self.cells(d).iter().enumerate() {
            for (w, v) in self.boundary[c].iter() {
                m[(self.position[w[0]], j)] = v.clone();
            }
        }
        m
    }

    /// Coordinates of a single-factor chain in the degree-`d` block basis.
    pub fn coordinates(&self, d: usize, ch: &TensorChain<T>) -> Vec<T> {
        let mut v = vec![T::zero(); self.rank(d)];
        for (w, c) in ch.iter() {
            debug_assert_eq!(w.len(), 1);
            debug_assert_eq!(self.degrees[w[0]], d);
            v[self.position[w[0]]] = c.clone();
        }
        v
    }

    /// Inverse of [`Self::coordinates`].
    pub fn chain_from_coordinates(&self, d: usize, v: &[T]) -> TensorChain<T> {
        self.cells(d).iter().zip(v).map(|(&c, x)| (vec![c], x.clone())).collect()
    }

    /// `C^{⊗n}` as an explicit complex (labels joined by `⊗`).
    pub fn tensor_power(&self, n: usize) -> ChainComplex<T> {
        let words = all_words(self.len(), n);
        let index: HashMap<&Word, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let labels = words
            .iter()
            .map(|w| if w.is_empty() { "1".to_string() } else { w.iter().map(|&c| self.labels[c].as_str()).collect::<Vec<_>>().join("⊗") })
            .collect();
        let degrees = words.iter().map(|w| self.word_degree(w)).collect();
        let boundary = words
            .iter()
            .map(|w| self.boundary_of_word(w).iter().map(|(bw, c)| (index[bw], c.clone())).collect())
            .collect();
        ChainComplex::new(labels, degrees, boundary).expect("tensor power of a complex is a complex")
    }

    /// All tensor words of length `n` and total degree `d`.
    pub fn words_of_degree(&self, n: usize, d: usize) -> Vec<Word> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(n);
        self.words_rec(n, d, &mut cur, &mut out);
        out
    }

    fn words_rec(&self, n: usize, d: usize, cur: &mut Word, out: &mut Vec<Word>) {
        if cur.len() == n {
            if d == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for deg in 0..=d.min(self.max_degree()) {
            for &c in self.cells(deg) {
                cur.push(c);
                self.words_rec(n, d - deg, cur, out);
                cur.pop();
            }
        }
    }

    pub fn render_word(&self, w: &[usize]) -> String {
        if w.is_empty() {
            return "1".into();
        }
        w.iter().map(|&c| self.labels[c].as_str()).collect::<Vec<_>>().join("⊗")
    }

    pub fn render_chain(&self, ch: &TensorChain<T>) -> String {
        render_chain_with(ch, |w| self.render_word(w))
    }
}

pub(crate) fn render_chain_with<T: Scalar>(ch: &TensorChain<T>, word: impl Fn(&[usize]) -> String) -> String {
    if ch.is_zero() {
        return "0".into();
    }
    let mut s = String::new();
    for (i, (w, c)) in ch.iter().enumerate() {
        let neg = c.is_negative();
        let mag = c.abs();
        if i == 0 {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        if !mag.is_one() {
            s.push_str(&format!("{mag}*"));
        }
        s.push_str(&word(w));
    }
    s
}

fn all_words(n_cells: usize, n: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..n_cells).map(move |c| {
                    let mut nw = w.clone();
                    nw.push(c);
                    nw
                })
            })
            .collect();
    }
    out
}

impl<T: Scalar> fmt::Debug for ChainComplex<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ChainComplex ranks {:?}", self.ranks())?;
        for c in 0..self.len() {
            writeln!(f, "  {} (deg {}) -> {}", self.labels[c], self.degrees[c], self.render_chain(&self.boundary[c]))?;
        }
        Ok(())
    }
}
