//! Exact integer linear algebra: Hermite-style echelon forms, Smith normal
//! form with transforms, integer system solving and Bareiss determinants.
//!
//! Everything here runs over [`BigInt`]; nothing falls back to rationals
//! except [`solve_rational_right`], which is only used to test candidate
//! changes of lattice basis and checks integrality explicitly afterwards.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Dense row-major integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows; every row must have `cols` entries.
    pub fn from_rows<T: Clone + Into<BigInt>>(rows: &[Vec<T>], cols: usize) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix row");
            data.extend(row.iter().cloned().map(Into::into));
        }
        IntMatrix { rows: rows.len(), cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    /// Keeps only the listed columns, in the listed order.
    pub fn select_columns(&self, cols: &[usize]) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.rows, cols.len());
        for r in 0..self.rows {
            for (k, &c) in cols.iter().enumerate() {
                out.set(r, k, self.get(r, c).clone());
            }
        }
        out
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c).clone());
            }
        }
        out
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * other.cols + j;
                        out.data[idx] += a * b;
                    }
                }
            }
        }
        out
    }

    /// `self * v` for a column vector `v`.
    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// row[target] += k * row[src]
    fn add_row_multiple(&mut self, target: usize, src: usize, k: &BigInt) {
        for c in 0..self.cols {
            let v = &self.data[src * self.cols + c] * k;
            self.data[target * self.cols + c] += v;
        }
    }

    /// col[target] += k * col[src]
    fn add_col_multiple(&mut self, target: usize, src: usize, k: &BigInt) {
        for r in 0..self.rows {
            let v = &self.data[r * self.cols + src] * k;
            self.data[r * self.cols + target] += v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let idx = r * self.cols + c;
            self.data[idx] = -std::mem::take(&mut self.data[idx]);
        }
    }
}

/// Fraction-free (Bareiss) determinant of a square matrix.
pub fn determinant(m: &IntMatrix) -> BigInt {
    assert_eq!(m.rows(), m.cols(), "determinant of a non-square matrix");
    let n = m.rows();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.to_rows();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// Row echelon form of an integer row lattice.
///
/// `rows[r]` has a positive pivot at column `pivots[r]`, and every other row
/// has its entry in that column reduced into `[0, pivot)`. Columns are
/// pivoted in the priority order handed to [`echelon`].
#[derive(Clone, Debug)]
pub struct Echelon {
    pub rows: Vec<Vec<BigInt>>,
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn has_unit_pivots(&self) -> bool {
        self.rows.iter().zip(&self.pivots).all(|(row, &c)| row[c].is_one())
    }
}

fn sub_multiple(rows: &mut [Vec<BigInt>], target: usize, src: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    let (t, s) = if target < src {
        let (lo, hi) = rows.split_at_mut(src);
        (&mut lo[target], &hi[0])
    } else {
        let (lo, hi) = rows.split_at_mut(target);
        (&mut hi[0], &lo[src])
    };
    for (x, y) in t.iter_mut().zip(s) {
        if !y.is_zero() {
            *x -= q * y;
        }
    }
}

/// Integer row echelon (Hermite) form of the lattice spanned by `rows`,
/// pivoting columns in the priority given by `order`. `order` must be a
/// permutation of the column indices.
pub fn echelon(mut rows: Vec<Vec<BigInt>>, order: &[usize]) -> Echelon {
    let mut r = 0;
    let mut pivots = Vec::new();
    for &c in order {
        if r == rows.len() {
            break;
        }
        loop {
            let best = (r..rows.len())
                .filter(|&i| !rows[i][c].is_zero())
                .min_by_key(|&i| rows[i][c].abs());
            let Some(b) = best else { break };
            rows.swap(r, b);
            let mut cleared = true;
            for i in r + 1..rows.len() {
                if rows[i][c].is_zero() {
                    continue;
                }
                let q = rows[i][c].div_floor(&rows[r][c]);
                sub_multiple(&mut rows, i, r, &q);
                if !rows[i][c].is_zero() {
                    cleared = false;
                }
            }
            if cleared {
                break;
            }
        }
        if rows[r][c].is_zero() {
            continue;
        }
        if rows[r][c].is_negative() {
            for x in rows[r].iter_mut() {
                *x = -std::mem::take(x);
            }
        }
        for i in 0..r {
            let q = rows[i][c].div_floor(&rows[r][c]);
            sub_multiple(&mut rows, i, r, &q);
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    Echelon { rows, pivots }
}

/// `left * a * right = diag(diagonal)`, with `right_inv = right^{-1}`.
///
/// The nonzero invariant factors come first, are positive, and each divides
/// the next.
#[derive(Clone, Debug)]
pub struct Smith {
    pub diagonal: Vec<BigInt>,
    pub left: IntMatrix,
    pub right: IntMatrix,
    pub right_inv: IntMatrix,
}

impl Smith {
    /// Number of nonzero invariant factors.
    pub fn rank(&self) -> usize {
        self.diagonal.iter().take_while(|d| !d.is_zero()).count()
    }

    /// Invariant factors larger than one: the torsion of the cokernel.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.diagonal
            .iter()
            .filter(|d| !d.is_zero() && !d.is_one())
            .cloned()
            .collect()
    }
}

struct SmithState {
    d: IntMatrix,
    p: IntMatrix,
    q: IntMatrix,
    qi: IntMatrix,
}

impl SmithState {
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.d.swap_rows(a, b);
        self.p.swap_rows(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.d.swap_cols(a, b);
        self.q.swap_cols(a, b);
        self.qi.swap_rows(a, b);
    }

    fn add_row(&mut self, target: usize, src: usize, k: &BigInt) {
        self.d.add_row_multiple(target, src, k);
        self.p.add_row_multiple(target, src, k);
    }

    fn add_col(&mut self, target: usize, src: usize, k: &BigInt) {
        self.d.add_col_multiple(target, src, k);
        self.q.add_col_multiple(target, src, k);
        self.qi.add_row_multiple(src, target, &-k);
    }

    /// Moves the smallest nonzero entry of row `t` / column `t` (from `t` on)
    /// to the diagonal.
    fn pivot_cross(&mut self, t: usize) {
        let mut best: Option<(BigInt, usize, bool)> = None;
        for i in t..self.d.rows() {
            let v = self.d.get(i, t);
            if !v.is_zero() && best.as_ref().is_none_or(|(b, _, _)| v.abs() < *b) {
                best = Some((v.abs(), i, true));
            }
        }
        for j in t..self.d.cols() {
            let v = self.d.get(t, j);
            if !v.is_zero() && best.as_ref().is_none_or(|(b, _, _)| v.abs() < *b) {
                best = Some((v.abs(), j, false));
            }
        }
        match best {
            Some((_, i, true)) => self.swap_rows(t, i),
            Some((_, j, false)) => self.swap_cols(t, j),
            None => {}
        }
    }
}

/// Smith normal form with unimodular transforms.
pub fn smith_normal_form(a: &IntMatrix) -> Smith {
    let (rows, cols) = (a.rows(), a.cols());
    let mut st = SmithState {
        d: a.clone(),
        p: IntMatrix::identity(rows),
        q: IntMatrix::identity(cols),
        qi: IntMatrix::identity(cols),
    };
    let steps = rows.min(cols);
    for t in 0..steps {
        // smallest nonzero entry of the remaining block
        let mut best: Option<(BigInt, usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let v = st.d.get(i, j);
                if !v.is_zero() && best.as_ref().is_none_or(|(b, _, _)| v.abs() < *b) {
                    best = Some((v.abs(), i, j));
                }
            }
        }
        let Some((_, bi, bj)) = best else { break };
        st.swap_rows(t, bi);
        st.swap_cols(t, bj);

        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if st.d.get(i, t).is_zero() {
                    continue;
                }
                let q = st.d.get(i, t).div_floor(st.d.get(t, t));
                st.add_row(i, t, &-q);
                if !st.d.get(i, t).is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if st.d.get(t, j).is_zero() {
                    continue;
                }
                let q = st.d.get(t, j).div_floor(st.d.get(t, t));
                st.add_col(j, t, &-q);
                if !st.d.get(t, j).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                st.pivot_cross(t);
                continue;
            }
            let pivot = st.d.get(t, t).clone();
            let offender = (t + 1..rows).find(|&i| {
                (t + 1..cols).any(|j| !st.d.get(i, j).is_multiple_of(&pivot))
            });
            match offender {
                Some(i) => st.add_row(t, i, &BigInt::one()),
                None => break,
            }
        }
        if st.d.get(t, t).is_negative() {
            st.d.negate_row(t);
            st.p.negate_row(t);
        }
    }
    let diagonal = (0..steps).map(|i| st.d.get(i, i).clone()).collect();
    Smith { diagonal, left: st.p, right: st.q, right_inv: st.qi }
}

/// All integer solutions of `a x = b`: `particular + span(kernel)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerSolution {
    pub particular: Vec<BigInt>,
    pub kernel: Vec<Vec<BigInt>>,
}

/// Solves `a x = b` over the integers, or returns `None` if no integer
/// solution exists.
pub fn solve_integer(a: &IntMatrix, b: &[BigInt]) -> Option<IntegerSolution> {
    assert_eq!(a.rows(), b.len(), "right-hand side length");
    let snf = smith_normal_form(a);
    let s = snf.rank();
    let y = snf.left.mul_vec(b);
    let mut z = vec![BigInt::zero(); a.cols()];
    for (i, yi) in y.iter().enumerate() {
        if i < s {
            let (quot, rem) = yi.div_rem(&snf.diagonal[i]);
            if !rem.is_zero() {
                return None;
            }
            z[i] = quot;
        } else if !yi.is_zero() {
            return None;
        }
    }
    let particular = snf.right.mul_vec(&z);
    let kernel = (s..a.cols()).map(|j| snf.right.column(j)).collect();
    Some(IntegerSolution { particular, kernel })
}

fn norm_key(v: &[BigInt]) -> (BigInt, Vec<BigInt>) {
    let max = v.iter().map(Signed::abs).max().unwrap_or_else(BigInt::zero);
    (max, v.to_vec())
}

/// Deterministic short representative of the coset `x + span(kernel)`.
///
/// The kernel basis is first put in echelon form; the representative is then
/// improved by adding or subtracting single basis vectors while that lowers
/// (max-norm, lexicographic order). The result depends only on the coset and
/// the lattice, not on which generators were handed in.
pub fn minimize_in_coset(x: &[BigInt], kernel: &[Vec<BigInt>]) -> Vec<BigInt> {
    let mut best = x.to_vec();
    if kernel.is_empty() {
        return best;
    }
    let order: Vec<usize> = (0..x.len()).collect();
    let Echelon { rows: basis, pivots } = echelon(kernel.to_vec(), &order);
    // reduce the start point against the echelon basis so that equivalent
    // inputs land on the same starting representative
    for (row, &c) in basis.iter().zip(&pivots) {
        let q = best[c].div_floor(&row[c]);
        for (b, r) in best.iter_mut().zip(row) {
            *b -= &q * r;
        }
    }
    let mut key = norm_key(&best);
    loop {
        let mut improved = false;
        for v in &basis {
            for sign in [1i32, -1] {
                let cand: Vec<BigInt> =
                    best.iter().zip(v).map(|(b, e)| b + e * BigInt::from(sign)).collect();
                let ck = norm_key(&cand);
                if ck < key {
                    best = cand;
                    key = ck;
                    improved = true;
                }
            }
        }
        if !improved {
            return best;
        }
    }
}

/// Indices of a column basis (lexicographically first) of `a`.
pub fn column_basis(a: &IntMatrix) -> Vec<usize> {
    let order: Vec<usize> = (0..a.cols()).collect();
    echelon(a.to_rows(), &order).pivots
}

/// Solves `u * b = c` for a square invertible `b` over the rationals.
/// Returns `None` if `b` is singular or the solution is not integral.
pub fn solve_rational_right(b: &IntMatrix, c: &IntMatrix) -> Option<IntMatrix> {
    let n = b.rows();
    assert_eq!(b.cols(), n);
    assert_eq!(c.cols(), n);
    // u b = c  <=>  b^T u^T = c^T ; Gauss-Jordan on [b^T | c^T]
    let k = c.rows();
    let mut aug: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| BigRational::from_integer(b.get(j, i).clone()))
                .chain((0..k).map(|j| BigRational::from_integer(c.get(j, i).clone())))
                .collect()
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !aug[r][col].is_zero())?;
        aug.swap(col, piv);
        let inv = aug[col][col].recip();
        for x in aug[col].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r != col && !aug[r][col].is_zero() {
                let f = aug[r][col].clone();
                let pivot_row = aug[col].clone();
                for (x, p) in aug[r].iter_mut().zip(&pivot_row) {
                    *x -= &f * p;
                }
            }
        }
    }
    let mut u = IntMatrix::zeros(k, n);
    for i in 0..n {
        for j in 0..k {
            let v = &aug[i][n + j];
            if !v.is_integer() {
                return None;
            }
            u.set(j, i, v.to_integer());
        }
    }
    Some(u)
}

pub fn gcd_i64(values: &[i64]) -> i64 {
    values.iter().fold(0i64, |g, &v| g.gcd(&v))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        let cols = rows.first().map_or(0, Vec::len);
        IntMatrix::from_rows(rows, cols)
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        let a = m(&[vec![2, -1, 3], vec![0, 4, 5], vec![1, 1, -2]]);
        // 2(4*-2 - 5) - (-1)(0 - 5) + 3(0 - 4) = -26 - 5 - 12
        assert_eq!(determinant(&a), BigInt::from(-43));
        assert_eq!(determinant(&m(&[vec![0, 1], vec![1, 0]])), BigInt::from(-1));
        assert_eq!(determinant(&m(&[vec![1, 2], vec![2, 4]])), BigInt::zero());
    }

    #[test]
    fn smith_of_known_matrix() {
        let a = m(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        let snf = smith_normal_form(&a);
        assert_eq!(snf.diagonal, big(&[2, 6, 12]));
        let d = snf.left.mul(&a).mul(&snf.right);
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { snf.diagonal[i].clone() } else { BigInt::zero() };
                assert_eq!(d.get(i, j), &want);
            }
        }
        assert_eq!(snf.right.mul(&snf.right_inv), IntMatrix::identity(3));
    }

    #[test]
    fn echelon_from_right_has_unit_pivots_for_bott_rows() {
        // Hirzebruch with a = 3
        let rows = vec![big(&[1, 0, -1, 0]), big(&[0, 1, 3, -1])];
        let order: Vec<usize> = (0..4).rev().collect();
        let e = echelon(rows, &order);
        assert_eq!(e.pivots, vec![3, 2]);
        assert!(e.has_unit_pivots());
    }

    #[test]
    fn integer_solve_detects_divisibility() {
        let a = m(&[vec![2, 4]]);
        assert!(solve_integer(&a, &big(&[3])).is_none());
        let sol = solve_integer(&a, &big(&[6])).unwrap();
        assert_eq!(a.mul_vec(&sol.particular), big(&[6]));
        assert_eq!(sol.kernel.len(), 1);
        assert_eq!(a.mul_vec(&sol.kernel[0]), big(&[0]));
    }

    #[test]
    fn coset_minimization_is_generator_independent() {
        let x = big(&[7, -3]);
        let k1 = vec![big(&[1, 1])];
        let k2 = vec![big(&[-3, -3]), big(&[2, 2])];
        assert_eq!(minimize_in_coset(&x, &k1), minimize_in_coset(&x, &k2));
        assert_eq!(minimize_in_coset(&x, &k1), big(&[5, -5]));
    }

    #[test]
    fn rational_right_solve_round_trips() {
        let b = m(&[vec![1, 1], vec![0, 1]]);
        let u = m(&[vec![2, -1], vec![0, 3]]);
        let c = u.mul(&b);
        assert_eq!(solve_rational_right(&b, &c), Some(u));
        let b2 = m(&[vec![2, 0], vec![0, 1]]);
        let c2 = m(&[vec![1, 0], vec![0, 1]]);
        assert_eq!(solve_rational_right(&b2, &c2), None);
    }
}
