//! Linear algebra over Z with congruence conditions, and the factorization
//! problems built on it.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{compose, Morphism};
use crate::error::{Error, Result};
use crate::matrix::IntegerMatrix;
use crate::snf::snf_full;

/// A basis of `{x in Z^n : a x = 0}`, as the columns of an `n x k` matrix.
pub fn integer_kernel(a: &IntegerMatrix) -> IntegerMatrix {
    let snf = snf_full(a);
    let keep: Vec<usize> = (snf.rank..a.cols()).collect();
    snf.v.select_columns(&keep)
}

/// Some `x` with `a x = rhs` in `Z/moduli[i]` for each row `i` (modulus 0
/// meaning an exact equation), or `None`.
pub(crate) fn solve_congruences(
    a: &IntegerMatrix,
    rhs: &[BigInt],
    moduli: &[BigInt],
) -> Option<Vec<BigInt>> {
    let n = a.cols();
    let slack: Vec<usize> = (0..a.rows()).filter(|&i| !moduli[i].is_zero()).collect();
    let mut full = IntegerMatrix::zeros(a.rows(), n + slack.len());
    for i in 0..a.rows() {
        for j in 0..n {
            full[(i, j)] = a[(i, j)].clone();
        }
    }
    for (k, &i) in slack.iter().enumerate() {
        full[(i, n + k)] = moduli[i].clone();
    }
    let snf = snf_full(&full);
    let r = snf.u.mul_vec(rhs);
    let mut y = vec![BigInt::zero(); full.cols()];
    for (i, ri) in r.iter().enumerate() {
        if i < snf.rank {
            let (q, rem) = ri.div_rem(&snf.d[(i, i)]);
            if !rem.is_zero() {
                return None;
            }
            y[i] = q;
        } else if !ri.is_zero() {
            return None;
        }
    }
    let mut z = snf.v.mul_vec(&y);
    z.truncate(n);
    Some(z)
}

/// Multiplier `s` such that a coordinate map from a generator of order `d`
/// into a coordinate of modulus `e` is well defined exactly when its entry is
/// a multiple of `s`. `None` when only zero is allowed.
fn entry_step(d: &BigInt, e: &BigInt) -> Option<BigInt> {
    match (d.is_zero(), e.is_zero()) {
        (true, _) => Some(BigInt::one()),
        (false, true) => None,
        (false, false) => {
            let g = d.gcd(e);
            if g.is_one() {
                None
            } else {
                Some(e / g)
            }
        }
    }
}

/// Some `g` with `g . a = b`.
pub fn extend_along(a: &Morphism, b: &Morphism) -> Result<Option<Morphism>> {
    if a.source != b.source {
        return Err(Error::SourceTargetMismatch {
            left: a.source.to_string(),
            right: b.source.to_string(),
        });
    }
    let (src, mid, tgt) = (&a.source, &a.target, &b.target);
    let mid_mod = mid.moduli();
    let tgt_mod = tgt.moduli();
    let mut g = IntegerMatrix::zeros(tgt.rank(), mid.rank());
    // Row i of g only meets row i of b.
    for (i, e) in tgt_mod.iter().enumerate() {
        let vars: Vec<(usize, BigInt)> = mid_mod
            .iter()
            .enumerate()
            .filter_map(|(l, d)| entry_step(d, e).map(|s| (l, s)))
            .collect();
        let mut sys = IntegerMatrix::zeros(src.rank(), vars.len());
        for j in 0..src.rank() {
            for (v, (l, s)) in vars.iter().enumerate() {
                sys[(j, v)] = s * &a.matrix[(*l, j)];
            }
        }
        let rhs: Vec<BigInt> = (0..src.rank()).map(|j| b.matrix[(i, j)].clone()).collect();
        let moduli = vec![e.clone(); src.rank()];
        let Some(u) = solve_congruences(&sys, &rhs, &moduli) else {
            return Ok(None);
        };
        for ((l, s), x) in vars.iter().zip(u) {
            g[(i, *l)] = s * x;
        }
    }
    let g = Morphism::new(mid.clone(), tgt.clone(), g)?;
    debug_assert_eq!(&compose(&g, a)?, b);
    Ok(Some(g))
}

/// Some `g` with `a . g = b`.
pub fn lift_through(a: &Morphism, b: &Morphism) -> Result<Option<Morphism>> {
    if a.target != b.target {
        return Err(Error::SourceTargetMismatch {
            left: a.target.to_string(),
            right: b.target.to_string(),
        });
    }
    let (src, mid, tgt) = (&b.source, &a.source, &a.target);
    let src_mod = src.moduli();
    let mid_mod = mid.moduli();
    let tgt_mod = tgt.moduli();
    let mut g = IntegerMatrix::zeros(mid.rank(), src.rank());
    // Column j of g only meets column j of b.
    for (j, d) in src_mod.iter().enumerate() {
        let vars: Vec<(usize, BigInt)> = mid_mod
            .iter()
            .enumerate()
            .filter_map(|(l, e)| entry_step(d, e).map(|s| (l, s)))
            .collect();
        let mut sys = IntegerMatrix::zeros(tgt.rank(), vars.len());
        for i in 0..tgt.rank() {
            for (v, (l, s)) in vars.iter().enumerate() {
                sys[(i, v)] = &a.matrix[(i, *l)] * s;
            }
        }
        let rhs = b.matrix.column(j);
        let Some(u) = solve_congruences(&sys, &rhs, &tgt_mod) else {
            return Ok(None);
        };
        for ((l, s), x) in vars.iter().zip(u) {
            g[(*l, j)] = s * x;
        }
    }
    let g = Morphism::new(src.clone(), mid.clone(), g)?;
    debug_assert_eq!(&compose(a, &g)?, b);
    Ok(Some(g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FgAbGroup;
    use proptest::prelude::*;

    fn g(s: &str) -> FgAbGroup {
        s.parse().unwrap()
    }

    fn m(src: &str, tgt: &str, rows: &[&[i64]]) -> Morphism {
        Morphism::new(g(src), g(tgt), IntegerMatrix::from_i64(rows)).unwrap()
    }

    #[test]
    fn kernel_basis() {
        let a = IntegerMatrix::from_i64(&[&[1, 2, 3]]);
        let k = integer_kernel(&a);
        assert_eq!(k.cols(), 2);
        assert!(a.mul(&k).is_zero());
        assert!(integer_kernel(&IntegerMatrix::identity(3)).cols() == 0);
    }

    #[test]
    fn congruences() {
        let a = IntegerMatrix::from_i64(&[&[2]]);
        let two = BigInt::from(2);
        let four = BigInt::from(4);
        assert!(solve_congruences(&a, &[BigInt::from(1)], &[four.clone()]).is_none());
        let x = solve_congruences(&a, &[two.clone()], &[four.clone()]).unwrap();
        let r: BigInt = &x[0] * 2 - 2;
        assert!(r.mod_floor(&four).is_zero());
        assert!(solve_congruences(&a, &[BigInt::from(3)], &[BigInt::zero()]).is_none());
    }

    #[test]
    fn splitting_examples() {
        // Z/2 -> Z/4, 1 |-> 2 has no left inverse
        let inc = m("Z/2", "Z/4", &[&[2]]);
        let id2 = Morphism::identity(&g("Z/2"));
        assert!(extend_along(&inc, &id2).unwrap().is_none());
        // Z/2 -> Z/6 splits
        let inc = m("Z/2", "Z/6", &[&[3]]);
        let p = extend_along(&inc, &id2).unwrap().unwrap();
        assert_eq!(compose(&p, &inc).unwrap(), id2);
        // Z/4 -> Z/2 has no right inverse, Z -> Z/2 neither, Z^2 -> Z does
        let q = m("Z/4", "Z/2", &[&[1]]);
        assert!(lift_through(&q, &id2).unwrap().is_none());
        let q = m("Z^2", "Z", &[&[2, 3]]);
        let idz = Morphism::identity(&g("Z"));
        let s = lift_through(&q, &idz).unwrap().unwrap();
        assert_eq!(compose(&q, &s).unwrap(), idz);
    }

    /// Brute-force existence of `g` with `g . a = b` over finite groups.
    fn brute_extend(a: &Morphism, b: &Morphism) -> bool {
        super::super::enumerate_homs(a.target(), b.target(), 1 << 20)
            .unwrap()
            .iter()
            .any(|g| compose(&g, a).unwrap() == *b)
    }

    fn brute_lift(a: &Morphism, b: &Morphism) -> bool {
        super::super::enumerate_homs(b.source(), a.source(), 1 << 20)
            .unwrap()
            .iter()
            .any(|g| compose(a, &g).unwrap() == *b)
    }

    fn small_group() -> impl Strategy<Value = FgAbGroup> {
        prop::sample::select(crate::group::enumerate_groups(12))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn solvers_match_brute_force(a in small_group(), b in small_group(), c in small_group(), i in any::<u64>(), j in any::<u64>()) {
            let ab = super::super::enumerate_homs(&a, &b, 1 << 20).unwrap();
            let ac = super::super::enumerate_homs(&a, &c, 1 << 20).unwrap();
            let f = ab.morphism_at(i % ab.size());
            let h = ac.morphism_at(j % ac.size());
            prop_assert_eq!(extend_along(&f, &h).unwrap().is_some(), brute_extend(&f, &h));
            let cb = super::super::enumerate_homs(&c, &b, 1 << 20).unwrap();
            let k = cb.morphism_at(j % cb.size());
            prop_assert_eq!(lift_through(&f, &k).unwrap().is_some(), brute_lift(&f, &k));
        }
    }
}
