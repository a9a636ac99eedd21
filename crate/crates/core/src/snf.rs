//! Smith normal form over the integers.
//!
//! Pivoting always picks the entry of smallest nonzero absolute value in the
//! remaining submatrix, scanning row-major, so the output is a deterministic
//! function of the input.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::matrix::IntegerMatrix;

/// `d = u * a * v` with `u`, `v` unimodular and `d` diagonal, each diagonal
/// entry dividing the next.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SnfDecomposition {
    pub u: IntegerMatrix,
    pub d: IntegerMatrix,
    pub v: IntegerMatrix,
}

impl SnfDecomposition {
    /// Diagonal entries `d[0,0], d[1,1], ...` (length `min(rows, cols)`).
    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.d.rows().min(self.d.cols());
        (0..n).map(|i| self.d[(i, i)].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

/// Decomposition together with the inverse of the row transform, which the
/// presentation code needs and which are cheap to track alongside.
#[derive(Debug, Clone)]
pub(crate) struct SnfFull {
    pub u: IntegerMatrix,
    pub u_inv: IntegerMatrix,
    pub d: IntegerMatrix,
    pub v: IntegerMatrix,
    pub rank: usize,
}

pub fn smith_normal_form(a: &IntegerMatrix) -> SnfDecomposition {
    let full = snf_full(a);
    SnfDecomposition {
        u: full.u,
        d: full.d,
        v: full.v,
    }
}

struct State {
    d: IntegerMatrix,
    u: IntegerMatrix,
    u_inv: IntegerMatrix,
    v: IntegerMatrix,
}

impl State {
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.d.swap_rows(a, b);
        self.u.swap_rows(a, b);
        self.u_inv.swap_cols(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.d.swap_cols(a, b);
        self.v.swap_cols(a, b);
    }

    /// row[dst] += q * row[src]
    fn row_op(&mut self, dst: usize, src: usize, q: &BigInt) {
        self.d.add_row_multiple(dst, src, q);
        self.u.add_row_multiple(dst, src, q);
        self.u_inv.add_col_multiple(src, dst, &-q);
    }

    /// col[dst] += q * col[src]
    fn col_op(&mut self, dst: usize, src: usize, q: &BigInt) {
        self.d.add_col_multiple(dst, src, q);
        self.v.add_col_multiple(dst, src, q);
    }

    fn negate_row(&mut self, i: usize) {
        self.d.negate_row(i);
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }

    fn smallest_from(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.d.rows() {
            for j in t..self.d.cols() {
                let x = &self.d[(i, j)];
                if x.is_zero() {
                    continue;
                }
                match best {
                    Some((bi, bj)) if self.d[(bi, bj)].abs() <= x.abs() => {}
                    _ => best = Some((i, j)),
                }
            }
        }
        best
    }
}

pub(crate) fn snf_full(a: &IntegerMatrix) -> SnfFull {
    if let Some(f) = small::snf(a) {
        return f;
    }
    snf_big(a)
}

fn snf_big(a: &IntegerMatrix) -> SnfFull {
    let (m, n) = (a.rows(), a.cols());
    let mut st = State {
        d: a.clone(),
        u: IntegerMatrix::identity(m),
        u_inv: IntegerMatrix::identity(m),
        v: IntegerMatrix::identity(n),
    };
    let mut t = 0;
    'outer: while t < m.min(n) {
        loop {
            let Some((pi, pj)) = st.smallest_from(t) else {
                break 'outer;
            };
            st.swap_rows(t, pi);
            st.swap_cols(t, pj);
            let pivot = st.d[(t, t)].clone();

            let mut clean = true;
            for i in t + 1..m {
                if st.d[(i, t)].is_zero() {
                    continue;
                }
                let q = &st.d[(i, t)] / &pivot;
                st.row_op(i, t, &-q);
                clean &= st.d[(i, t)].is_zero();
            }
            for j in t + 1..n {
                if st.d[(t, j)].is_zero() {
                    continue;
                }
                let q = &st.d[(t, j)] / &pivot;
                st.col_op(j, t, &-q);
                clean &= st.d[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }

            let offender = (t + 1..m).find_map(|i| {
                (t + 1..n)
                    .find(|&j| !st.d[(i, j)].is_multiple_of(&pivot))
                    .map(|_| i)
            });
            match offender {
                Some(i) => st.row_op(t, i, &BigInt::from(1)),
                None => break,
            }
        }
        if st.d[(t, t)].is_negative() {
            st.negate_row(t);
        }
        t += 1;
    }
    SnfFull {
        u: st.u,
        u_inv: st.u_inv,
        d: st.d,
        v: st.v,
        rank: t,
    }
}

/// The same elimination on `i64` entries, abandoned on overflow.
mod small {
    use num_bigint::BigInt;
    use num_traits::ToPrimitive;

    use super::SnfFull;
    use crate::matrix::IntegerMatrix;

    struct Mat {
        rows: usize,
        cols: usize,
        x: Vec<i64>,
    }

    impl Mat {
        fn identity(n: usize) -> Mat {
            let mut x = vec![0; n * n];
            for i in 0..n {
                x[i * n + i] = 1;
            }
            Mat { rows: n, cols: n, x }
        }

        fn at(&self, i: usize, j: usize) -> i64 {
            self.x[i * self.cols + j]
        }

        fn swap_rows(&mut self, a: usize, b: usize) {
            for j in 0..self.cols {
                self.x.swap(a * self.cols + j, b * self.cols + j);
            }
        }

        fn swap_cols(&mut self, a: usize, b: usize) {
            for i in 0..self.rows {
                self.x.swap(i * self.cols + a, i * self.cols + b);
            }
        }

        fn add_row_multiple(&mut self, dst: usize, src: usize, q: i64) -> Option<()> {
            for j in 0..self.cols {
                let v = self.at(src, j).checked_mul(q)?.checked_add(self.at(dst, j))?;
                self.x[dst * self.cols + j] = v;
            }
            Some(())
        }

        fn add_col_multiple(&mut self, dst: usize, src: usize, q: i64) -> Option<()> {
            for i in 0..self.rows {
                let v = self.at(i, src).checked_mul(q)?.checked_add(self.at(i, dst))?;
                self.x[i * self.cols + dst] = v;
            }
            Some(())
        }

        fn negate_row(&mut self, i: usize) -> Option<()> {
            for j in 0..self.cols {
                self.x[i * self.cols + j] = self.at(i, j).checked_neg()?;
            }
            Some(())
        }

        fn negate_col(&mut self, j: usize) -> Option<()> {
            for i in 0..self.rows {
                self.x[i * self.cols + j] = self.at(i, j).checked_neg()?;
            }
            Some(())
        }

        fn to_big(&self) -> IntegerMatrix {
            let mut out = IntegerMatrix::zeros(self.rows, self.cols);
            for i in 0..self.rows {
                for j in 0..self.cols {
                    out[(i, j)] = BigInt::from(self.at(i, j));
                }
            }
            out
        }
    }

    pub(super) fn snf(a: &IntegerMatrix) -> Option<SnfFull> {
        let (m, n) = (a.rows(), a.cols());
        let mut x = Vec::with_capacity(m * n);
        for i in 0..m {
            for j in 0..n {
                x.push(a[(i, j)].to_i64()?);
            }
        }
        let mut d = Mat { rows: m, cols: n, x };
        let (mut u, mut u_inv, mut v) = (Mat::identity(m), Mat::identity(m), Mat::identity(n));
        let mut t = 0;
        'outer: while t < m.min(n) {
            loop {
                let mut best: Option<(usize, usize, i64)> = None;
                for i in t..m {
                    for j in t..n {
                        let y = d.at(i, j);
                        if y == 0 {
                            continue;
                        }
                        let ay = y.checked_abs()?;
                        if best.is_none_or(|(_, _, b)| b > ay) {
                            best = Some((i, j, ay));
                        }
                    }
                }
                let Some((pi, pj, _)) = best else { break 'outer };
                d.swap_rows(t, pi);
                u.swap_rows(t, pi);
                u_inv.swap_cols(t, pi);
                d.swap_cols(t, pj);
                v.swap_cols(t, pj);
                let pivot = d.at(t, t);

                let mut clean = true;
                for i in t + 1..m {
                    if d.at(i, t) == 0 {
                        continue;
                    }
                    let q = d.at(i, t).checked_div(pivot)?.checked_neg()?;
                    d.add_row_multiple(i, t, q)?;
                    u.add_row_multiple(i, t, q)?;
                    u_inv.add_col_multiple(t, i, q.checked_neg()?)?;
                    clean &= d.at(i, t) == 0;
                }
                for j in t + 1..n {
                    if d.at(t, j) == 0 {
                        continue;
                    }
                    let q = d.at(t, j).checked_div(pivot)?.checked_neg()?;
                    d.add_col_multiple(j, t, q)?;
                    v.add_col_multiple(j, t, q)?;
                    clean &= d.at(t, j) == 0;
                }
                if !clean {
                    continue;
                }
                let offender = (t + 1..m)
                    .find_map(|i| (t + 1..n).find(|&j| d.at(i, j).checked_rem(pivot) != Some(0)).map(|_| i));
                match offender {
                    Some(i) => {
                        d.add_row_multiple(t, i, 1)?;
                        u.add_row_multiple(t, i, 1)?;
                        u_inv.add_col_multiple(i, t, -1)?;
                    }
                    None => break,
                }
            }
            if d.at(t, t) < 0 {
                d.negate_row(t)?;
                u.negate_row(t)?;
                u_inv.negate_col(t)?;
            }
            t += 1;
        }
        Some(SnfFull {
            u: u.to_big(),
            u_inv: u_inv.to_big(),
            d: d.to_big(),
            v: v.to_big(),
            rank: t,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn check(a: &IntegerMatrix) {
        let f = snf_full(a);
        assert_eq!(f.u.mul(a).mul(&f.v), f.d);
        assert_eq!(f.u.mul(&f.u_inv), IntegerMatrix::identity(a.rows()));
        assert!(f.v.is_unimodular());
        for i in 0..f.d.rows() {
            for j in 0..f.d.cols() {
                if i != j {
                    assert!(f.d[(i, j)].is_zero(), "off-diagonal entry in {:?}", f.d);
                }
            }
        }
        let diag: Vec<BigInt> = (0..a.rows().min(a.cols())).map(|i| f.d[(i, i)].clone()).collect();
        for w in diag.windows(2) {
            if w[0].is_zero() {
                assert!(w[1].is_zero());
            } else {
                assert!(w[1].is_multiple_of(&w[0]), "chain broken: {diag:?}");
            }
        }
        assert!(diag.iter().all(|x| !x.is_negative()));
        assert_eq!(f.rank, diag.iter().filter(|x| !x.is_zero()).count());
    }

    #[test]
    fn one_by_one() {
        let a = IntegerMatrix::from_i64(&[&[6]]);
        let s = smith_normal_form(&a);
        assert_eq!(s.d, a);
        assert_eq!(s.u, IntegerMatrix::identity(1));
        assert_eq!(s.v, IntegerMatrix::identity(1));
    }

    #[test]
    fn two_by_two_example() {
        // |det| = 12 and gcd of entries 2 force diag(2, 6).
        let a = IntegerMatrix::from_i64(&[&[2, 4], &[6, 6]]);
        let s = smith_normal_form(&a);
        assert_eq!(s.diagonal(), vec![BigInt::from(2), BigInt::from(6)]);
        check(&a);
    }

    #[test]
    fn zero_matrix() {
        let a = IntegerMatrix::zeros(2, 3);
        let s = smith_normal_form(&a);
        assert!(s.d.is_zero());
        assert_eq!(s.u, IntegerMatrix::identity(2));
        assert_eq!(s.v, IntegerMatrix::identity(3));
    }

    #[test]
    fn needs_divisibility_fix() {
        // diag(2, 3) is diagonal but not a chain.
        let a = IntegerMatrix::from_i64(&[&[2, 0], &[0, 3]]);
        let s = smith_normal_form(&a);
        assert_eq!(s.diagonal(), vec![BigInt::from(1), BigInt::from(6)]);
        check(&a);
    }

    #[test]
    fn deterministic() {
        let a = IntegerMatrix::from_i64(&[&[4, -6, 8], &[3, 9, -12], &[0, 5, 7]]);
        assert_eq!(smith_normal_form(&a), smith_normal_form(&a));
        check(&a);
    }

    fn arb_matrix() -> impl Strategy<Value = IntegerMatrix> {
        (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-9i64..=9, r * c).prop_map(move |xs| {
                let rows: Vec<Vec<i64>> = xs.chunks(c).map(|ch| ch.to_vec()).collect();
                IntegerMatrix::from_rows(&rows, c).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn reconstruction_and_unimodularity(a in arb_matrix()) {
            let s = smith_normal_form(&a);
            prop_assert_eq!(s.u.mul(&a).mul(&s.v), s.d.clone());
            prop_assert!(s.u.is_unimodular());
            prop_assert!(s.v.is_unimodular());
            check(&a);
        }

        #[test]
        fn machine_path_matches_bigint_path(a in arb_matrix()) {
            let fast = small::snf(&a).expect("small entries");
            let slow = snf_big(&a);
            prop_assert_eq!((fast.u, fast.u_inv, fast.d, fast.v, fast.rank), (slow.u, slow.u_inv, slow.d, slow.v, slow.rank));
        }
    }

    #[test]
    fn overflow_falls_back() {
        let huge: BigInt = BigInt::from(i64::MAX) * 4;
        let mut a = IntegerMatrix::zeros(2, 2);
        a[(0, 0)] = huge.clone();
        a[(1, 1)] = BigInt::from(6);
        assert!(small::snf(&a).is_none());
        check(&a);
        let b = IntegerMatrix::from_i64(&[&[i64::MAX, i64::MAX - 1], &[i64::MIN + 1, 3]]);
        check(&b);
    }
}
