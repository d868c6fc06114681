//! Exact arbitrary-precision integer linear algebra: Hermite and Smith
//! normal forms with transformation matrices, lattice membership, and
//! integer kernels. This is the reduction machinery behind relation-module
//! elimination and torsion analysis.
//!
//! Conventions, fixed because both exist in the literature: *row* HNF with
//! pivot columns strictly increasing down the rows, positive pivots, and
//! entries above each pivot reduced into `[0, pivot)`. `U * A = H` with `U`
//! unimodular.

use serde::{Deserialize, Serialize};

use crate::int::Int;

#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Int>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> IntMatrix {
        IntMatrix {
            rows,
            cols,
            entries: vec![Int::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> IntMatrix {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Int::ONE;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Int>>) -> IntMatrix {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols));
        IntMatrix {
            rows: rows.len(),
            cols,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Int::from(v)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Int] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Int::is_zero)
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = a * &other[(k, j)];
                    out[(i, j)] += &add;
                }
            }
        }
        out
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for c in 0..self.cols {
            let v = std::mem::take(&mut self[(i, c)]);
            self[(i, c)] = -v;
        }
    }

    /// row_i -= q * row_k
    fn sub_scaled_row(&mut self, i: usize, k: usize, q: &Int) {
        if q.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let delta = q * &self[(k, c)];
            self[(i, c)] -= &delta;
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.rows {
            self.entries.swap(r * self.cols + i, r * self.cols + j);
        }
    }

    /// col_i -= q * col_k
    fn sub_scaled_col(&mut self, i: usize, k: usize, q: &Int) {
        if q.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let delta = q * &self[(r, k)];
            self[(r, i)] -= &delta;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = Int;
    fn index(&self, (i, j): (usize, usize)) -> &Int {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Int {
        &mut self.entries[i * self.cols + j]
    }
}

impl std::fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

#[derive(Clone, Debug)]
pub struct HnfResult {
    /// Row Hermite normal form, same shape as the input; zero rows last.
    pub h: IntMatrix,
    /// Unimodular transform with `u * a = h`.
    pub u: IntMatrix,
    pub rank: usize,
}

/// Canonical row Hermite normal form. Pivot selection prefers the smallest
/// absolute value in the column (best-gcd selection), which keeps entry
/// growth under control on the large relation matrices of class-8 runs.
pub fn hnf(a: &IntMatrix) -> HnfResult {
    let mut m = a.clone();
    let mut u = IntMatrix::identity(a.rows());
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut r = 0;

    for j in 0..m.cols() {
        if r == m.rows() {
            break;
        }
        loop {
            // Pick the row with minimal nonzero |entry| in column j.
            let mut best: Option<(usize, Int)> = None;
            for i in r..m.rows() {
                let v = m[(i, j)].abs();
                if v.is_zero() {
                    continue;
                }
                match &best {
                    Some((_, b)) if *b <= v => {}
                    _ => best = Some((i, v)),
                }
            }
            let Some((bi, _)) = best else {
                break;
            };
            m.swap_rows(r, bi);
            u.swap_rows(r, bi);
            let mut done = true;
            for i in r + 1..m.rows() {
                if m[(i, j)].is_zero() {
                    continue;
                }
                let (q, rem) = m[(i, j)].div_rem_euclid(&m[(r, j)]);
                m.sub_scaled_row(i, r, &q);
                u.sub_scaled_row(i, r, &q);
                if !rem.is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if m[(r, j)].is_zero() {
            continue;
        }
        if m[(r, j)].is_negative() {
            m.negate_row(r);
            u.negate_row(r);
        }
        pivots.push((r, j));
        r += 1;
    }

    // Reduce entries above each pivot into [0, pivot).
    for &(k, j) in &pivots {
        for i in 0..k {
            let (q, _) = m[(i, j)].div_rem_euclid(&m[(k, j)]);
            m.sub_scaled_row(i, k, &q);
            u.sub_scaled_row(i, k, &q);
        }
    }

    HnfResult { h: m, u, rank: r }
}

/// Basis of the left kernel lattice `{ x : x * a = 0 }`, one row per basis
/// vector. The rows of `u` aligned with zero rows of the HNF form a basis.
pub fn kernel(a: &IntMatrix) -> IntMatrix {
    let res = hnf(a);
    let rows: Vec<Vec<Int>> = (res.rank..res.h.rows())
        .map(|i| res.u.row(i).to_vec())
        .collect();
    if rows.is_empty() {
        IntMatrix::zero(0, a.rows())
    } else {
        IntMatrix::from_rows(rows)
    }
}

/// Solves `x * a = b` over the integers, or `None` when `b` is not in the
/// row lattice of `a`.
pub fn solve_in_lattice(a: &IntMatrix, b: &[Int]) -> Option<Vec<Int>> {
    assert_eq!(b.len(), a.cols());
    let res = hnf(a);
    let mut rem = b.to_vec();
    let mut coeffs = vec![Int::ZERO; a.rows()];
    for k in 0..res.rank {
        let j = res.h.row(k).iter().position(|v| !v.is_zero())?;
        if rem[j].is_zero() {
            continue;
        }
        let (q, r) = rem[j].div_rem_euclid(&res.h[(k, j)]);
        if !r.is_zero() {
            return None;
        }
        for c in 0..a.cols() {
            let delta = &q * &res.h[(k, c)];
            rem[c] -= &delta;
        }
        for c in 0..a.rows() {
            let delta = &q * &res.u[(k, c)];
            coeffs[c] += &delta;
        }
    }
    if rem.iter().all(Int::is_zero) {
        Some(coeffs)
    } else {
        None
    }
}

#[derive(Clone, Debug)]
pub struct SnfResult {
    /// Diagonal of the Smith form: `d1 | d2 | ... `, zeros (free factors)
    /// last, length `min(rows, cols)`.
    pub divisors: Vec<Int>,
    /// Unimodular transforms with `left * a * right = diag(divisors)`.
    pub left: IntMatrix,
    pub right: IntMatrix,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        self.divisors.iter().filter(|d| !d.is_zero()).count()
    }

    pub fn nonzero_divisors(&self) -> impl Iterator<Item = &Int> {
        self.divisors.iter().filter(|d| !d.is_zero())
    }
}

/// Smith normal form with transforms: `left * a * right = diag(divisors)`.
pub fn snf(a: &IntMatrix) -> SnfResult {
    let mut m = a.clone();
    let mut left = IntMatrix::identity(a.rows());
    let mut right = IntMatrix::identity(a.cols());
    let n = a.rows().min(a.cols());
    let mut rank: usize = 0;

    for k in 0..n {
        if !clear_position(&mut m, &mut left, &mut right, k) {
            break;
        }
        rank += 1;
    }

    // Enforce the divisibility chain on adjacent diagonal entries. Each fix
    // replaces (d_k, d_{k+1}) by (gcd, lcm) via a transform confined to rows
    // and columns k, k+1, so the rest of the diagonal stays intact.
    loop {
        let mut fixed = true;
        for k in 0..rank.saturating_sub(1) {
            let (_, rem) = m[(k + 1, k + 1)].div_rem_euclid(&m[(k, k)]);
            if rem.is_zero() {
                continue;
            }
            chain_fix_pair(&mut m, &mut left, &mut right, k);
            fixed = false;
        }
        if fixed {
            break;
        }
    }

    let divisors: Vec<Int> = (0..n).map(|k| m[(k, k)].clone()).collect();
    debug_assert!(divisors.iter().all(|d| !d.is_negative()));
    SnfResult {
        divisors,
        left,
        right,
    }
}

/// Replaces the diagonal pair `(d_k, d_{k+1})` with `(gcd, lcm)` using row
/// and column operations that touch only indices `k` and `k+1`. Both entries
/// are positive on entry and the matrix is diagonal.
fn chain_fix_pair(m: &mut IntMatrix, left: &mut IntMatrix, right: &mut IntMatrix, k: usize) {
    let dk = m[(k, k)].clone();
    let dk1 = m[(k + 1, k + 1)].clone();
    let minus_one = Int::from(-1);
    // col_k += col_{k+1}: puts d_{k+1} below the pivot.
    m.sub_scaled_col(k, k + 1, &minus_one);
    right.sub_scaled_col(k, k + 1, &minus_one);

    let (g, s, t) = dk.extended_gcd(&dk1);
    let (qk, _) = dk.div_rem_euclid(&g);
    let (qk1, _) = dk1.div_rem_euclid(&g);
    // Unimodular mix of rows k, k+1: det [[s, t], [-qk1, qk]] = 1.
    for target in [&mut *m, &mut *left] {
        for j in 0..target.cols() {
            let a = target[(k, j)].clone();
            let b = target[(k + 1, j)].clone();
            target[(k, j)] = &(&s * &a) + &(&t * &b);
            target[(k + 1, j)] = &(&qk * &b) - &(&qk1 * &a);
        }
    }
    // Clear the remaining (k, k+1) entry; division by g is exact.
    let (q, rem) = m[(k, k + 1)].div_rem_euclid(&g);
    debug_assert!(rem.is_zero());
    m.sub_scaled_col(k + 1, k, &q);
    right.sub_scaled_col(k + 1, k, &q);
    debug_assert_eq!(m[(k, k)], g);
    debug_assert!(m[(k + 1, k)].is_zero() && m[(k, k + 1)].is_zero());
}

/// Moves a minimal nonzero entry of the trailing submatrix to `(k, k)` and
/// clears its row and column. Returns false when the submatrix is zero.
fn clear_position(
    m: &mut IntMatrix,
    left: &mut IntMatrix,
    right: &mut IntMatrix,
    k: usize,
) -> bool {
    let mut best: Option<(usize, usize, Int)> = None;
    for i in k..m.rows() {
        for j in k..m.cols() {
            let v = m[(i, j)].abs();
            if v.is_zero() {
                continue;
            }
            match &best {
                Some((_, _, b)) if *b <= v => {}
                _ => best = Some((i, j, v)),
            }
        }
    }
    let Some((bi, bj, _)) = best else {
        return false;
    };
    m.swap_rows(k, bi);
    left.swap_rows(k, bi);
    m.swap_cols(k, bj);
    right.swap_cols(k, bj);

    loop {
        let mut changed = false;
        for i in k + 1..m.rows() {
            if m[(i, k)].is_zero() {
                continue;
            }
            let (q, rem) = m[(i, k)].div_rem_euclid(&m[(k, k)]);
            m.sub_scaled_row(i, k, &q);
            left.sub_scaled_row(i, k, &q);
            if !rem.is_zero() {
                m.swap_rows(k, i);
                left.swap_rows(k, i);
                changed = true;
            }
        }
        if changed {
            continue;
        }
        for j in k + 1..m.cols() {
            if m[(k, j)].is_zero() {
                continue;
            }
            let (q, rem) = m[(k, j)].div_rem_euclid(&m[(k, k)]);
            m.sub_scaled_col(j, k, &q);
            right.sub_scaled_col(j, k, &q);
            if !rem.is_zero() {
                m.swap_cols(k, j);
                right.swap_cols(k, j);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    if m[(k, k)].is_negative() {
        for j in 0..m.cols() {
            let v = std::mem::take(&mut m[(k, j)]);
            m[(k, j)] = -v;
        }
        left.negate_row(k);
    }
    true
}

/// Streaming Hermite reduction without transform tracking. Rows are folded
/// in one at a time so that huge relation-row streams never need to be
/// materialized; the resulting basis is canonicalized on `finish`.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct HnfAccumulator {
    cols: usize,
    /// Echelon rows, sorted by leading column, leading entries positive.
    rows: Vec<Vec<Int>>,
}

impl HnfAccumulator {
    pub fn new(cols: usize) -> HnfAccumulator {
        HnfAccumulator {
            cols,
            rows: Vec::new(),
        }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn add_row(&mut self, mut v: Vec<Int>) {
        assert_eq!(v.len(), self.cols);
        loop {
            let Some(j) = v.iter().position(|x| !x.is_zero()) else {
                return;
            };
            let pos = self.rows.partition_point(|r| leading_col(r) < j);
            if pos < self.rows.len() && leading_col(&self.rows[pos]) == j {
                let a = self.rows[pos][j].clone();
                let b = v[j].clone();
                let (q, rem) = b.div_rem_euclid(&a);
                if rem.is_zero() {
                    sub_scaled(&mut v, &self.rows[pos], &q);
                } else {
                    // Replace the basis row by the gcd combination and keep
                    // reducing the complement.
                    let (g, s, t) = a.extended_gcd(&b);
                    let new_row = combine(&self.rows[pos], &s, &v, &t);
                    let qa = {
                        let (q, r) = a.div_rem_euclid(&g);
                        debug_assert!(r.is_zero());
                        q
                    };
                    let qb = {
                        let (q, r) = b.div_rem_euclid(&g);
                        debug_assert!(r.is_zero());
                        q
                    };
                    let new_v = combine(&self.rows[pos], &(-qb), &v, &qa);
                    debug_assert!(new_v[j].is_zero());
                    self.rows[pos] = new_row;
                    v = new_v;
                }
            } else {
                if v[j].is_negative() {
                    for x in v.iter_mut() {
                        let t = std::mem::take(x);
                        *x = -t;
                    }
                }
                self.rows.insert(pos, v);
                return;
            }
        }
    }

    /// Canonicalizes in place: entries above every pivot reduced into
    /// `[0, pivot)`. The resulting rows are the canonical HNF basis of the
    /// lattice spanned by everything added so far.
    pub fn finish(mut self) -> Vec<Vec<Int>> {
        for k in (0..self.rows.len()).rev() {
            let j = leading_col(&self.rows[k]);
            let pivot = self.rows[k][j].clone();
            let (head, tail) = self.rows.split_at_mut(k);
            let pivot_row = &tail[0];
            for row in head.iter_mut() {
                let (q, _) = row[j].div_rem_euclid(&pivot);
                sub_scaled(row, pivot_row, &q);
            }
        }
        self.rows
    }
}

fn leading_col(row: &[Int]) -> usize {
    row.iter().position(|x| !x.is_zero()).expect("zero basis row")
}

fn sub_scaled(v: &mut [Int], row: &[Int], q: &Int) {
    if q.is_zero() {
        return;
    }
    for (x, r) in v.iter_mut().zip(row) {
        let delta = q * r;
        *x -= &delta;
    }
}

fn combine(a: &[Int], s: &Int, b: &[Int], t: &Int) -> Vec<Int> {
    a.iter()
        .zip(b)
        .map(|(x, y)| &(s * x) + &(t * y))
        .collect()
}

/// Reduces `v` to its canonical representative modulo the lattice spanned by
/// canonical HNF `basis` rows: coordinates at pivot columns land in
/// `[0, pivot)`.
pub fn reduce_mod_hnf(v: &mut [Int], basis: &[Vec<Int>]) {
    for row in basis {
        let j = leading_col(row);
        if v[j].is_zero() {
            continue;
        }
        let (q, _) = v[j].div_rem_euclid(&row[j]);
        sub_scaled(v, row, &q);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_is_hnf(h: &IntMatrix, rank: usize) {
        let mut last_col: Option<usize> = None;
        for i in 0..rank {
            let j = h.row(i).iter().position(|v| !v.is_zero()).unwrap();
            if let Some(prev) = last_col {
                assert!(j > prev, "pivots not strictly increasing");
            }
            last_col = Some(j);
            assert!(h[(i, j)].is_positive());
            for k in 0..i {
                assert!(!h[(k, j)].is_negative() && h[(k, j)] < h[(i, j)]);
            }
        }
        for i in rank..h.rows() {
            assert!(h.row(i).iter().all(Int::is_zero));
        }
    }

    #[test]
    fn hnf_zero_matrix() {
        let a = IntMatrix::zero(2, 2);
        let r = hnf(&a);
        assert!(r.h.is_zero());
        assert_eq!(r.rank, 0);
    }

    #[test]
    fn hnf_already_canonical() {
        let a = IntMatrix::from_i64_rows(&[&[2, 0], &[0, 3]]);
        let r = hnf(&a);
        assert_eq!(r.h, a);
        assert_eq!(r.rank, 2);
    }

    #[test]
    fn hnf_row_reduction_example() {
        // Row-reduce by hand: rows (2,4),(6,8) span the same lattice as
        // (2,0),(0,4).
        let a = IntMatrix::from_i64_rows(&[&[2, 4], &[6, 8]]);
        let r = hnf(&a);
        assert_eq!(r.h, IntMatrix::from_i64_rows(&[&[2, 0], &[0, 4]]));
        assert_eq!(r.u.mul(&a), r.h);
        assert_is_hnf(&r.h, r.rank);
    }

    #[test]
    fn hnf_idempotent() {
        let a = IntMatrix::from_i64_rows(&[&[3, 1, -4], &[0, 5, 7], &[6, -2, 9]]);
        let first = hnf(&a);
        let second = hnf(&first.h);
        assert_eq!(first.h, second.h);
    }

    #[test]
    fn hnf_transform_is_unimodular() {
        let a = IntMatrix::from_i64_rows(&[&[4, 6], &[10, 4], &[2, 2]]);
        let r = hnf(&a);
        assert_eq!(r.u.mul(&a), r.h);
        // |det u| = 1 via SNF of u
        let s = snf(&r.u);
        assert!(s.divisors.iter().all(Int::is_one));
    }

    #[test]
    fn snf_examples_from_hand() {
        // gcd of entries is 2 and |det| = 8 forces divisors (2, 4).
        let a = IntMatrix::from_i64_rows(&[&[2, 4], &[6, 8]]);
        let s = snf(&a);
        assert_eq!(s.divisors, vec![Int::from(2), Int::from(4)]);
        let d = s.left.mul(&a).mul(&s.right);
        assert_eq!(d, IntMatrix::from_i64_rows(&[&[2, 0], &[0, 4]]));

        let eye = IntMatrix::identity(3);
        assert!(snf(&eye).divisors.iter().all(Int::is_one));

        let z = IntMatrix::from_i64_rows(&[&[0]]);
        assert_eq!(snf(&z).divisors, vec![Int::ZERO]);
    }

    #[test]
    fn snf_divisor_chain() {
        let a = IntMatrix::from_i64_rows(&[&[6, 0], &[0, 4]]);
        let s = snf(&a);
        assert_eq!(s.divisors, vec![Int::from(2), Int::from(12)]);
        assert_eq!(
            s.left.mul(&a).mul(&s.right),
            IntMatrix::from_i64_rows(&[&[2, 0], &[0, 12]])
        );
    }

    #[test]
    fn solve_in_lattice_examples() {
        let a = IntMatrix::from_i64_rows(&[&[2, 0], &[0, 3]]);
        let b = [Int::from(4), Int::from(3)];
        let x = solve_in_lattice(&a, &b).unwrap();
        assert_eq!(x, vec![Int::from(2), Int::from(1)]);

        let none = solve_in_lattice(&a, &[Int::from(1), Int::ZERO]);
        assert!(none.is_none());

        let a = IntMatrix::from_i64_rows(&[&[1, 1], &[0, 2]]);
        let x = solve_in_lattice(&a, &[Int::from(1), Int::from(3)]).unwrap();
        assert_eq!(x, vec![Int::from(1), Int::from(1)]);
    }

    #[test]
    fn kernel_rows_annihilate() {
        let a = IntMatrix::from_i64_rows(&[&[1, 2], &[2, 4], &[0, 1]]);
        let k = kernel(&a);
        assert_eq!(k.rows(), 1);
        let prod = k.mul(&a);
        assert!(prod.is_zero());
    }

    #[test]
    fn accumulator_matches_batch_hnf() {
        let rows: Vec<Vec<Int>> = vec![
            vec![Int::from(2), Int::from(4), Int::from(-2)],
            vec![Int::from(6), Int::from(8), Int::from(0)],
            vec![Int::from(0), Int::from(10), Int::from(5)],
            vec![Int::ZERO, Int::ZERO, Int::ZERO],
        ];
        let batch = hnf(&IntMatrix::from_rows(rows.clone()));
        let mut acc = HnfAccumulator::new(3);
        for r in rows {
            acc.add_row(r);
        }
        let basis = acc.finish();
        for (i, row) in basis.iter().enumerate() {
            assert_eq!(row.as_slice(), batch.h.row(i));
        }
        assert_eq!(basis.len(), batch.rank);
    }

    #[test]
    fn reduce_mod_hnf_gives_canonical_representative() {
        let mut acc = HnfAccumulator::new(2);
        acc.add_row(vec![Int::from(2), Int::from(1)]);
        acc.add_row(vec![Int::from(0), Int::from(3)]);
        let basis = acc.finish();
        let mut v = vec![Int::from(7), Int::from(5)];
        reduce_mod_hnf(&mut v, &basis);
        assert!(!v[0].is_negative() && v[0] < Int::from(2));
        assert!(!v[1].is_negative() && v[1] < Int::from(3));
    }

    #[test]
    fn snf_permutation_invariance_small_cases() {
        let base = IntMatrix::from_i64_rows(&[&[2, 3, 0], &[4, 0, 6], &[1, 1, 1]]);
        let want = snf(&base).divisors;
        // A couple of fixed row/column permutations.
        let perms = [
            IntMatrix::from_i64_rows(&[&[4, 0, 6], &[1, 1, 1], &[2, 3, 0]]),
            IntMatrix::from_i64_rows(&[&[3, 2, 0], &[0, 4, 6], &[1, 1, 1]]),
        ];
        for p in perms {
            assert_eq!(snf(&p).divisors, want);
        }
    }
}
