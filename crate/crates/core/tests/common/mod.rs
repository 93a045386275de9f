//! Independent oracles shared by integration tests.
#![allow(dead_code)]

use einf_core::algebra::{ChainComplex, Matrix};
use einf_core::Int;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `(free rank, torsion coefficients)` per degree.
pub type Expected = Vec<(usize, Vec<i64>)>;

/// A random complex of total rank `<= max_rank` with known homology: a direct sum of
/// `Z` summands and `Z --k--> Z` pieces, conjugated by random unimodular changes of basis.
pub fn random_complex(seed: u64, max_rank: usize) -> (ChainComplex<Int>, Expected) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let top = rng.gen_range(1..=3usize);
    let mut ranks = vec![0usize; top + 1];
    let mut pieces = Vec::new(); // (lower degree, k)
    let mut expected: Expected = vec![(0, Vec::new()); top + 1];
    let mut total = 0;
    while total + 2 <= max_rank && rng.gen_bool(0.85) {
        let d = rng.gen_range(0..=top);
        if d < top && rng.gen_bool(0.6) {
            let k = [1i64, 1, 2, 3, 4, 6][rng.gen_range(0..6)];
            pieces.push((d, k, ranks[d], ranks[d + 1]));
            ranks[d] += 1;
            ranks[d + 1] += 1;
            if k > 1 {
                expected[d].1.push(k);
            }
            total += 2;
        } else {
            ranks[d] += 1;
            expected[d].0 += 1;
            total += 1;
        }
    }
    for e in &mut expected {
        e.1 = invariant_form(&e.1);
    }
    // boundary blocks ∂_d : C_d → C_{d-1}
    let mut blocks: Vec<Matrix<i64>> = (0..=top).map(|d| Matrix::zeros(if d == 0 { 0 } else { ranks[d - 1] }, ranks[d])).collect();
    for &(d, k, row, col) in &pieces {
        blocks[d + 1][(row, col)] = k;
    }
    let changes: Vec<(Matrix<i64>, Matrix<i64>)> = ranks.iter().map(|&n| random_unimodular(&mut rng, n)).collect();
    for d in 1..=top {
        let (p, _) = &changes[d - 1];
        let (_, q_inv) = &changes[d];
        blocks[d] = &(p * &blocks[d]) * q_inv;
    }
    let mut labels = Vec::new();
    let mut degrees = Vec::new();
    let mut offset = vec![0; top + 2];
    for d in 0..=top {
        offset[d + 1] = offset[d] + ranks[d];
        for i in 0..ranks[d] {
            labels.push(format!("x{d}_{i}"));
            degrees.push(d);
        }
    }
    let mut boundary = Vec::new();
    for d in 0..=top {
        for j in 0..ranks[d] {
            let mut terms = Vec::new();
            if d > 0 {
                for i in 0..ranks[d - 1] {
                    let v = blocks[d][(i, j)];
                    if v != 0 {
                        terms.push((offset[d - 1] + i, Int::from(v)));
                    }
                }
            }
            boundary.push(terms);
        }
    }
    let highest = ranks.iter().rposition(|&r| r > 0).unwrap_or(0);
    expected.truncate(highest + 1);
    (ChainComplex::new(labels, degrees, boundary).expect("conjugated complex"), expected)
}

/// Invariant factors of `⊕ Z/k_i`, by pairwise `(gcd, lcm)` replacement.
pub fn invariant_form(ks: &[i64]) -> Vec<i64> {
    let mut v = ks.to_vec();
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            let (g, l) = (v[i].gcd(&v[j]), v[i].lcm(&v[j]));
            v[i] = g;
            v[j] = l;
        }
    }
    v.retain(|&k| k > 1);
    v
}

/// A product of a few elementary matrices, with its inverse.
fn random_unimodular(rng: &mut ChaCha8Rng, n: usize) -> (Matrix<i64>, Matrix<i64>) {
    let mut m = Matrix::identity(n);
    let mut inv = Matrix::identity(n);
    if n < 2 {
        return (m, inv);
    }
    for _ in 0..2 * n {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if i == j {
            continue;
        }
        let q = rng.gen_range(-2i64..=2);
        m.add_row_multiple(i, j, &q);
        inv.add_col_multiple(j, i, &-q);
    }
    (m, inv)
}

/// `∂_d` as a small-integer matrix; zero columns above the top degree.
pub fn boundary_i64(cx: &ChainComplex<Int>, d: usize) -> Matrix<i64> {
    if d > cx.max_degree() {
        return Matrix::zeros(cx.rank(cx.max_degree()), 0);
    }
    let m = cx.boundary_matrix(d);
    let mut out = Matrix::zeros(m.rows(), m.cols());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            out[(i, j)] = m[(i, j)].to_i64().unwrap();
        }
    }
    out
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if n < k {
        return Vec::new();
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Rank and invariant factors from gcds of minors.
pub fn minor_invariants(m: &Matrix<i64>) -> (usize, Vec<i64>) {
    let mut factors = Vec::new();
    let mut prev = 1i64;
    for k in 1..=m.rows().min(m.cols()) {
        let mut g = 0i64;
        for rows in subsets(m.rows(), k) {
            for cols in subsets(m.cols(), k) {
                let sub = Matrix::from_rows(rows.iter().map(|&i| cols.iter().map(|&j| m[(i, j)]).collect()).collect());
                g = g.gcd(&sub.determinant());
            }
        }
        if g == 0 {
            break;
        }
        factors.push(g / prev);
        prev = g;
    }
    (factors.len(), factors)
}

/// Homology from minors alone.
pub fn minors_homology(cx: &ChainComplex<Int>) -> Expected {
    let top = cx.max_degree();
    let inv: Vec<(usize, Vec<i64>)> = (0..=top + 1).map(|d| minor_invariants(&boundary_i64(cx, d))).collect();
    (0..=top)
        .map(|d| {
            let free = cx.rank(d) - inv[d].0 - inv[d + 1].0;
            let torsion = inv[d + 1].1.iter().copied().filter(|&k| k > 1).collect();
            (free, torsion)
        })
        .collect()
}

/// `dim_{F_p} H_d(C ⊗ F_p)` by enumerating every vector of `C_d ⊗ F_p`.
pub fn mod_p_dimensions(cx: &ChainComplex<Int>, p: i64) -> Option<Vec<usize>> {
    let top = cx.max_degree();
    if (0..=top).any(|d| (p as f64).powi(cx.rank(d) as i32) > 5000.0) {
        return None;
    }
    let count = |d: usize| -> (usize, usize) {
        // (log_p |ker ∂_d|, log_p |im ∂_d|)
        let m = boundary_i64(cx, d);
        let n = cx.rank(d);
        let mut kernel = 0usize;
        let mut image = std::collections::HashSet::new();
        let mut v = vec![0i64; n];
        loop {
            let w: Vec<i64> = m.mul_vec(&v).iter().map(|x| x.rem_euclid(p)).collect();
            if w.iter().all(|&x| x == 0) {
                kernel += 1;
            }
            image.insert(w);
            let mut i = 0;
            while i < n {
                v[i] += 1;
                if v[i] < p {
                    break;
                }
                v[i] = 0;
                i += 1;
            }
            if i == n {
                break;
            }
        }
        let log = |x: usize| (x as f64).log(p as f64).round() as usize;
        (log(kernel), log(image.len()))
    };
    let counts: Vec<(usize, usize)> = (0..=top + 1).map(|d| if d <= top { count(d) } else { (0, 0) }).collect();
    Some((0..=top).map(|d| counts[d].0 - if d < top { counts[d + 1].1 } else { 0 }).collect())
}

/// What `mod_p_dimensions` should give for the integral answer `e`.
pub fn universal_coefficients(e: &Expected, p: i64) -> Vec<usize> {
    let t = |d: usize| e[d].1.iter().filter(|&&k| k % p == 0).count();
    (0..e.len()).map(|d| e[d].0 + t(d) + if d > 0 { t(d - 1) } else { 0 }).collect()
}

use einf_core::algebra::{GradedOperator, TensorChain};
use einf_core::coalgebra::CoalgebraStructure;
use einf_core::invariants::MasseyMode;
use std::sync::Arc;

/// A random `f2_1` on a homology-level structure that keeps `m2_1` fixed on `H_1`
/// (commutator values there). On `H_2` the values are swap-invariant in strict mode
/// and arbitrary in normalized mode.
pub fn random_admissible(h: &CoalgebraStructure<Int>, seed: u64, mode: MasseyMode) -> GradedOperator<Int> {
    let cx: &Arc<ChainComplex<Int>> = h.complex();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coef = |rng: &mut ChaCha8Rng| Int::from(rng.gen_range(-3i64..=3));
    GradedOperator::from_fn(cx.clone(), cx.clone(), 2, 1, |c| {
        let mut out = TensorChain::zero();
        match cx.degree(c) {
            1 => {
                for &x in cx.cells(1) {
                    for &y in cx.cells(1) {
                        if x < y {
                            let k = coef(&mut rng);
                            out.add_term(vec![x, y], k.clone());
                            out.add_term(vec![y, x], -k);
                        }
                    }
                }
            }
            2 => {
                for &x in cx.cells(1) {
                    for &s in cx.cells(2) {
                        let k = coef(&mut rng);
                        out.add_term(vec![x, s], k.clone());
                        match mode {
                            MasseyMode::Strict => out.add_term(vec![s, x], k),
                            MasseyMode::Normalized => out.add_term(vec![s, x], coef(&mut rng)),
                        }
                    }
                }
            }
            _ => {}
        }
        out
    })
    .expect("degree-1 operator")
}

/// Rank over `F_p` for a large prime, by plain elimination.
pub fn rank_mod_p(columns: &[Vec<i64>]) -> usize {
    const P: i64 = 1_000_003;
    let mut rows: Vec<Vec<i64>> = columns.iter().map(|c| c.iter().map(|v| v.rem_euclid(P)).collect()).collect();
    let mut rank = 0;
    let width = rows.first().map_or(0, Vec::len);
    for col in 0..width {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else { continue };
        rows.swap(rank, pivot);
        let inv = pow(rows[rank][col], P - 2, P);
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[col] != 0 {
                let f = row[col] * inv % P;
                for (v, p) in row.iter_mut().zip(&pivot_row) {
                    *v = (*v - f * p).rem_euclid(P);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn pow(mut b: i64, mut e: i64, p: i64) -> i64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Rank of the span of all `[e_i,[e_j,e_k]]` in `Z^{m^3}`.
pub fn bracket_span_rank(m: usize) -> usize {
    let idx = |a: usize, b: usize, c: usize| (a * m + b) * m + c;
    let mut all = Vec::new();
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                let mut v = vec![0i64; m * m * m];
                v[idx(i, j, k)] += 1;
                v[idx(i, k, j)] -= 1;
                v[idx(j, k, i)] -= 1;
                v[idx(k, j, i)] += 1;
                all.push(v);
            }
        }
    }
    rank_mod_p(&all)
}
