//! Cup-k coproducts on the standard simplices, obtained by solving the homotopy
//! ladder degree by degree over the integers. Faces of `Δ^n` are vertex bitmasks.

use std::collections::{BTreeMap, HashMap};

use crate::algebra::snf::solve;
use crate::algebra::Matrix;
use crate::scalar::Scalar;

/// A pair of faces of `Δ^n`.
pub type FacePair = (u32, u32);

/// `Σ c · A ⊗ B` in `C(Δ^n)^{⊗2}`.
pub type Universal<T> = BTreeMap<FacePair, T>;

fn dim(a: u32) -> usize {
    a.count_ones() as usize - 1
}

fn vertices(a: u32) -> Vec<u32> {
    (0..32).filter(|v| a & (1 << v) != 0).collect()
}

fn face_boundary<T: Scalar>(a: u32) -> Vec<(u32, T)> {
    if a.count_ones() < 2 {
        return Vec::new();
    }
    vertices(a).iter().enumerate().map(|(i, v)| (a & !(1 << v), T::sign(i as i64))).collect()
}

fn add<T: Scalar>(u: &mut Universal<T>, k: FacePair, c: T) {
    let e = u.entry(k).or_insert_with(T::zero);
    *e = e.clone() + c;
    if e.is_zero() {
        u.remove(&k);
    }
}

fn boundary<T: Scalar>(u: &Universal<T>) -> Universal<T> {
    let mut out = BTreeMap::new();
    for (&(a, b), c) in u {
        for (a2, s) in face_boundary::<T>(a) {
            add(&mut out, (a2, b), s * c.clone());
        }
        let sb = T::sign(dim(a) as i64);
        for (b2, s) in face_boundary::<T>(b) {
            add(&mut out, (a, b2), sb.clone() * s * c.clone());
        }
    }
    out
}

/// Koszul-signed swap `T(A ⊗ B) = (-1)^{|A||B|} B ⊗ A`.
pub fn swap<T: Scalar>(u: &Universal<T>) -> Universal<T> {
    u.iter().map(|(&(a, b), c)| ((b, a), T::sign((dim(a) * dim(b)) as i64) * c.clone())).collect()
}

/// Pushforward along the coface `δ_j: [n-1] → [n]`.
fn push_coface(a: u32, j: u32) -> u32 {
    let low = a & ((1 << j) - 1);
    let high = a >> j;
    low | (high << (j + 1))
}

/// Pushforward along the codegeneracy `σ_j: [n] → [n-1]`; `None` if degenerate.
fn push_codegeneracy(a: u32, j: u32) -> Option<u32> {
    if a & (1 << j) != 0 && a & (1 << (j + 1)) != 0 {
        return None;
    }
    let low = a & ((1 << (j + 1)) - 1);
    let high = a >> (j + 1);
    Some(low | (high << j))
}

fn all_faces(n: usize) -> Vec<u32> {
    (1..(1u32 << (n + 1))).collect()
}

fn pairs_of_degree(n: usize, d: usize) -> Vec<FacePair> {
    let faces = all_faces(n);
    let mut out = Vec::new();
    for &a in &faces {
        for &b in &faces {
            if dim(a) + dim(b) == d {
                out.push((a, b));
            }
        }
    }
    out
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("no integral normalized solution for the degree-{k} coproduct on the {n}-simplex")]
pub struct Unsolvable {
    pub k: usize,
    pub n: usize,
}

/// Universal elements `U[k][n]` for `k <= max_k`, `n <= max_n`.
#[derive(Clone, Debug)]
pub struct CupTable<T> {
    table: Vec<Vec<Universal<T>>>,
}

impl<T: Scalar> CupTable<T> {
    pub fn build(max_k: usize, max_n: usize) -> Result<Self, Unsolvable> {
        let mut table: Vec<Vec<Universal<T>>> = Vec::new();
        let aw: Vec<Universal<T>> = (0..=max_n)
            .map(|n| {
                let full = (1u32 << (n + 1)) - 1;
                (0..=n)
                    .map(|i| {
                        let front = (1u32 << (i + 1)) - 1;
                        let back = full & !((1u32 << i) - 1);
                        ((front, back), T::one())
                    })
                    .collect()
            })
            .collect();
        table.push(aw);
        for k in 1..=max_k {
            let mut row: Vec<Universal<T>> = Vec::new();
            for (n, below) in table[k - 1].iter().enumerate() {
                let u = if n < k { BTreeMap::new() } else { solve_one(below, &row, k, n)? };
                row.push(u);
            }
            table.push(row);
        }
        Ok(CupTable { table })
    }

    pub fn get(&self, k: usize, n: usize) -> &Universal<T> {
        &self.table[k][n]
    }

    pub fn max_k(&self) -> usize {
        self.table.len() - 1
    }
}

fn solve_one<T: Scalar>(prev: &Universal<T>, lower: &[Universal<T>], k: usize, n: usize) -> Result<Universal<T>, Unsolvable> {
    // ∂y = U_{k-1} - (-1)^{k-1} T U_{k-1} + (-1)^k Σ_j (-1)^j (δ_j)_* U_{k,n-1}
    let mut rhs = prev.clone();
    for (key, c) in swap(prev) {
        add(&mut rhs, key, -(T::sign(k as i64 - 1) * c));
    }
    if n > 0 {
        for j in 0..=n as u32 {
            let s = T::sign(k as i64 + j as i64);
            for (&(a, b), c) in &lower[n - 1] {
                add(&mut rhs, (push_coface(a, j), push_coface(b, j)), s.clone() * c.clone());
            }
        }
    }
    let unknowns = pairs_of_degree(n, n + k);
    let targets = pairs_of_degree(n, n + k - 1);
    let tindex: HashMap<FacePair, usize> = targets.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let lower_pairs = if n > 0 { pairs_of_degree(n - 1, n + k) } else { Vec::new() };
    let lindex: HashMap<FacePair, usize> = lower_pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let rows = targets.len() + n * lower_pairs.len();
    let mut m = Matrix::zeros(rows, unknowns.len());
    for (col, &(a, b)) in unknowns.iter().enumerate() {
        let single: Universal<T> = [((a, b), T::one())].into_iter().collect();
        for (key, c) in boundary(&single) {
            m[(tindex[&key], col)] = c;
        }
        for j in 0..n {
            if let (Some(a2), Some(b2)) = (push_codegeneracy(a, j as u32), push_codegeneracy(b, j as u32)) {
                if let Some(&r) = lindex.get(&(a2, b2)) {
                    let r = targets.len() + j * lower_pairs.len() + r;
                    m[(r, col)] = m[(r, col)].clone() + T::one();
                }
            }
        }
    }
    let mut b = vec![T::zero(); rows];
    for (key, c) in rhs {
        match tindex.get(&key) {
            Some(&i) => b[i] = c,
            None => return Err(Unsolvable { k, n }),
        }
    }
    let y = solve(&m, &b).ok_or(Unsolvable { k, n })?;
    Ok(unknowns.into_iter().zip(y).filter(|(_, c)| !c.is_zero()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cup_one_on_an_edge() {
        let t = CupTable::<i64>::build(1, 1).unwrap();
        let u = t.get(1, 1);
        assert_eq!(u.len(), 1);
        assert_eq!(u.get(&(0b11, 0b11)), Some(&-1));
        assert!(t.get(1, 0).is_empty());
    }

    #[test]
    fn ladder_on_standard_simplices() {
        let t = CupTable::<i64>::build(3, 4).unwrap();
        for k in 1..=3 {
            for n in 0..=4 {
                let u = t.get(k, n);
                for &(a, b) in u.keys() {
                    assert_eq!(dim(a) + dim(b), n + k);
                }
                let mut lhs = boundary(u);
                for j in 0..=n as u32 {
                    if n == 0 {
                        break;
                    }
                    let s = T_sign(k, j);
                    for (&(a, b), c) in t.get(k, n - 1) {
                        add(&mut lhs, (push_coface(a, j), push_coface(b, j)), -(s * c));
                    }
                }
                let prev = t.get(k - 1, n);
                let mut rhs = prev.clone();
                for (key, c) in swap(prev) {
                    add(&mut rhs, key, -(i64::sign(k as i64 - 1) * c));
                }
                assert_eq!(lhs, rhs, "k={k} n={n}");
            }
        }
    }

    #[allow(non_snake_case)]
    fn T_sign(k: usize, j: u32) -> i64 {
        i64::sign(k as i64 + j as i64)
    }
}
