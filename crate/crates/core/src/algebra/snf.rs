//! Smith normal form over a Euclidean ring, with the unimodular transforms and
//! their inverses tracked alongside.

use super::matrix::Matrix;
use crate::scalar::Scalar;

/// `u * m * v == s` with `s` diagonal, nonnegative, and each diagonal entry
/// dividing the next. `u_inv`/`v_inv` are the exact inverses.
#[derive(Clone, Debug)]
pub struct SmithForm<T: std::fmt::Display> {
    pub s: Matrix<T>,
    pub u: Matrix<T>,
    pub u_inv: Matrix<T>,
    pub v: Matrix<T>,
    pub v_inv: Matrix<T>,
    pub rank: usize,
}

impl<T: Scalar> SmithForm<T> {
    /// Nonzero diagonal entries.
    pub fn invariant_factors(&self) -> Vec<T> {
        (0..self.rank).map(|i| self.s[(i, i)].clone()).collect()
    }

    /// Basis of the integer kernel, as columns.
    pub fn kernel_basis(&self) -> Vec<Vec<T>> {
        (self.rank..self.v.cols()).map(|j| self.v.column(j)).collect()
    }
}

struct Reducer<T> {
    a: Matrix<T>,
    u: Matrix<T>,
    u_inv: Matrix<T>,
    v: Matrix<T>,
    v_inv: Matrix<T>,
}

impl<T: Scalar> Reducer<T> {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.u_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
        self.v_inv.swap_rows(i, j);
    }

    /// row[target] += q * row[source]
    fn row_op(&mut self, target: usize, source: usize, q: &T) {
        self.a.add_row_multiple(target, source, q);
        self.u.add_row_multiple(target, source, q);
        self.u_inv.add_col_multiple(source, target, &-q.clone());
    }

    /// col[target] += q * col[source]
    fn col_op(&mut self, target: usize, source: usize, q: &T) {
        self.a.add_col_multiple(target, source, q);
        self.v.add_col_multiple(target, source, q);
        self.v_inv.add_row_multiple(source, target, &-q.clone());
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }

    fn smallest_nonzero(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.a.rows() {
            for j in t..self.a.cols() {
                let x = &self.a[(i, j)];
                if x.is_zero() {
                    continue;
                }
                match best {
                    Some((bi, bj)) if self.a[(bi, bj)].abs() <= x.abs() => {}
                    _ => best = Some((i, j)),
                }
            }
        }
        best
    }

    fn reduce(&mut self) -> usize {
        let (rows, cols) = (self.a.rows(), self.a.cols());
        let mut t = 0;
        while t < rows.min(cols) {
            let Some((pi, pj)) = self.smallest_nonzero(t) else { break };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                let mut dirty = false;
                for i in t + 1..rows {
                    if self.a[(i, t)].is_zero() {
                        continue;
                    }
                    let q = self.a[(i, t)].clone() / self.a[(t, t)].clone();
                    self.row_op(i, t, &-q);
                    if !self.a[(i, t)].is_zero() {
                        dirty = true;
                    }
                }
                for j in t + 1..cols {
                    if self.a[(t, j)].is_zero() {
                        continue;
                    }
                    let q = self.a[(t, j)].clone() / self.a[(t, t)].clone();
                    self.col_op(j, t, &-q);
                    if !self.a[(t, j)].is_zero() {
                        dirty = true;
                    }
                }
                if dirty {
                    // a smaller remainder appeared in row/column t; move it to the pivot
                    let mut best = (t, t);
                    for i in t..rows {
                        let x = &self.a[(i, t)];
                        if !x.is_zero() && x.abs() < self.a[best].abs() {
                            best = (i, t);
                        }
                    }
                    for j in t..cols {
                        let x = &self.a[(t, j)];
                        if !x.is_zero() && x.abs() < self.a[best].abs() {
                            best = (t, j);
                        }
                    }
                    self.swap_rows(t, best.0);
                    self.swap_cols(t, best.1);
                    continue;
                }
                let pivot = self.a[(t, t)].clone();
                let offender = (t + 1..rows)
                    .find(|&i| (t + 1..cols).any(|j| !self.a[(i, j)].is_multiple_of(&pivot)));
                match offender {
                    Some(i) => self.row_op(t, i, &T::one()),
                    None => break,
                }
            }
            if self.a[(t, t)].is_negative() {
                self.negate_row(t);
            }
            t += 1;
        }
        t
    }
}

pub fn smith_normal_form<T: Scalar>(m: &Matrix<T>) -> SmithForm<T> {
    let mut r = Reducer {
        a: m.clone(),
        u: Matrix::identity(m.rows()),
        u_inv: Matrix::identity(m.rows()),
        v: Matrix::identity(m.cols()),
        v_inv: Matrix::identity(m.cols()),
    };
    let rank = r.reduce();
    SmithForm { s: r.a, u: r.u, u_inv: r.u_inv, v: r.v, v_inv: r.v_inv, rank }
}

/// Integer solution of `m * x = b`, if one exists.
pub fn solve<T: Scalar>(m: &Matrix<T>, b: &[T]) -> Option<Vec<T>> {
    solve_with(&smith_normal_form(m), b)
}

/// Same as [`solve`] but reuses a precomputed Smith form of `m`.
pub fn solve_with<T: Scalar>(snf: &SmithForm<T>, b: &[T]) -> Option<Vec<T>> {
    let ub = snf.u.mul_vec(b);
    let mut y = vec![T::zero(); snf.v.cols()];
    for (i, val) in ub.iter().enumerate() {
        if i < snf.rank {
            let d = &snf.s[(i, i)];
            if !val.is_multiple_of(d) {
                return None;
            }
            y[i] = val.clone() / d.clone();
        } else if !val.is_zero() {
            return None;
        }
    }
    Some(snf.v.mul_vec(&y))
}

pub fn rank<T: Scalar>(m: &Matrix<T>) -> usize {
    smith_normal_form(m).rank
}

/// Basis (as columns) of the saturation `(span ⊗ Q) ∩ Z^n` of the column span.
pub fn saturate<T: Scalar>(m: &Matrix<T>) -> Vec<Vec<T>> {
    let snf = smith_normal_form(m);
    (0..snf.rank).map(|j| snf.u_inv.column(j)).collect()
}

/// Inverse of a square unimodular matrix, `None` if `m` is not invertible over the ring.
pub fn unimodular_inverse<T: Scalar>(m: &Matrix<T>) -> Option<Matrix<T>> {
    if m.rows() != m.cols() {
        return None;
    }
    let snf = smith_normal_form(m);
    if snf.rank != m.rows() || (0..snf.rank).any(|i| !snf.s[(i, i)].is_one()) {
        return None;
    }
    Some(&snf.v * &snf.u)
}
