//! Finitely generated abelian groups in invariant-factor form.
//!
//! A group `Z^r + Z/d_1 + ... + Z/d_k` with `d_1 | d_2 | ... | d_k` and every
//! `d_i >= 2` is stored as `(r, [d_1, ..., d_k])`. Coordinates of elements list
//! the `r` free coordinates first, then one coordinate per torsion factor.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::IntegerMatrix;
use crate::snf::snf_full;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FgAbGroup {
    free_rank: usize,
    torsion: Vec<BigInt>,
}

impl FgAbGroup {
    /// Validates the canonical-form invariants.
    pub fn new(free_rank: usize, torsion: Vec<BigInt>) -> Result<Self> {
        for d in &torsion {
            if d < &BigInt::from(2) {
                return Err(Error::InvalidGroup(format!(
                    "torsion factor {d} is below 2"
                )));
            }
        }
        for w in torsion.windows(2) {
            if !w[1].is_multiple_of(&w[0]) {
                return Err(Error::InvalidGroup(format!(
                    "{} does not divide {}",
                    w[0], w[1]
                )));
            }
        }
        Ok(FgAbGroup { free_rank, torsion })
    }

    pub fn from_factors(free_rank: usize, torsion: &[u64]) -> Result<Self> {
        Self::new(free_rank, torsion.iter().map(|&d| BigInt::from(d)).collect())
    }

    pub fn zero() -> Self {
        FgAbGroup {
            free_rank: 0,
            torsion: Vec::new(),
        }
    }

    pub fn free(rank: usize) -> Self {
        FgAbGroup {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    /// `Z/n`; `n = 1` gives the zero group and `n = 0` gives `Z`.
    pub fn cyclic(n: u64) -> Self {
        match n {
            0 => Self::free(1),
            1 => Self::zero(),
            _ => FgAbGroup {
                free_rank: 0,
                torsion: vec![BigInt::from(n)],
            },
        }
    }

    /// Canonical form of `Z^free_rank + Z/n_1 + ... + Z/n_k` for arbitrary
    /// positive `n_i` (not necessarily a divisibility chain).
    pub fn from_cyclic_decomposition(free_rank: usize, orders: &[BigInt]) -> Result<Self> {
        if let Some(bad) = orders.iter().find(|n| !n.is_positive()) {
            return Err(Error::InvalidGroup(format!("cyclic order {bad} is not positive")));
        }
        let gens = free_rank + orders.len();
        let mut rel = IntegerMatrix::zeros(gens, orders.len());
        for (j, n) in orders.iter().enumerate() {
            rel[(free_rank + j, j)] = n.clone();
        }
        Ok(present(&rel).group)
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion_factors(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Number of coordinates of an element.
    pub fn rank(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    /// Modulus of each coordinate; `0` marks a free coordinate.
    pub fn moduli(&self) -> Vec<BigInt> {
        std::iter::repeat_n(BigInt::zero(), self.free_rank)
            .chain(self.torsion.iter().cloned())
            .collect()
    }

    pub fn order(&self) -> Cardinality {
        if self.free_rank > 0 {
            Cardinality::Infinite
        } else {
            Cardinality::Finite(
                self.torsion
                    .iter()
                    .map(|d| d.magnitude().clone())
                    .product(),
            )
        }
    }

    /// Order as a machine integer, when finite and small enough.
    pub fn order_u64(&self) -> Option<u64> {
        self.order().finite().and_then(|n| n.to_u64())
    }

    /// Largest torsion factor, or 1 for the zero group. `None` when infinite.
    pub fn exponent(&self) -> Option<BigInt> {
        if self.free_rank > 0 {
            None
        } else {
            Some(self.torsion.last().cloned().unwrap_or_else(BigInt::one))
        }
    }

    /// Single cyclic factor of prime-power order.
    pub fn is_indecomposable(&self) -> bool {
        match (self.free_rank, self.torsion.as_slice()) {
            (1, []) => true,
            (0, [d]) => d
                .to_u64()
                .is_some_and(|d| crate::arith::prime_factors(d).len() == 1),
            _ => false,
        }
    }

    pub fn elements(&self) -> Result<Elements> {
        if !self.is_finite() {
            return Err(Error::InfiniteGroup(self.to_string()));
        }
        Ok(Elements {
            moduli: self.torsion.clone(),
            next: Some(vec![BigInt::zero(); self.torsion.len()]),
        })
    }

    pub fn identity_element(&self) -> GroupElement {
        GroupElement {
            coordinates: vec![BigInt::zero(); self.rank()],
        }
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        let coordinates = a
            .coordinates
            .iter()
            .zip(&b.coordinates)
            .zip(self.moduli())
            .map(|((x, y), m)| reduce(&(x + y), &m))
            .collect();
        GroupElement { coordinates }
    }

    pub fn negate(&self, a: &GroupElement) -> GroupElement {
        let coordinates = a
            .coordinates
            .iter()
            .zip(self.moduli())
            .map(|(x, m)| reduce(&-x, &m))
            .collect();
        GroupElement { coordinates }
    }

    pub fn scale(&self, a: &GroupElement, k: &BigInt) -> GroupElement {
        let coordinates = a
            .coordinates
            .iter()
            .zip(self.moduli())
            .map(|(x, m)| reduce(&(x * k), &m))
            .collect();
        GroupElement { coordinates }
    }

    /// Brings an arbitrary coordinate vector into reduced form.
    pub fn element(&self, coordinates: Vec<BigInt>) -> Result<GroupElement> {
        if coordinates.len() != self.rank() {
            return Err(Error::InvalidGroup(format!(
                "element has {} coordinates, {} expects {}",
                coordinates.len(),
                self,
                self.rank()
            )));
        }
        let coordinates = coordinates
            .iter()
            .zip(self.moduli())
            .map(|(x, m)| reduce(x, &m))
            .collect();
        Ok(GroupElement { coordinates })
    }

    /// The `i`-th canonical generator.
    pub fn generator(&self, i: usize) -> GroupElement {
        let mut coordinates = vec![BigInt::zero(); self.rank()];
        coordinates[i] = BigInt::one();
        GroupElement { coordinates }
    }
}

/// Non-negative remainder modulo `m`; the identity when `m = 0`.
pub(crate) fn reduce(x: &BigInt, m: &BigInt) -> BigInt {
    if m.is_zero() {
        x.clone()
    } else {
        x.mod_floor(m)
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::expr::format_group(self))
    }
}

impl fmt::Debug for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FgAbGroup({})", self)
    }
}

impl FromStr for FgAbGroup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        crate::expr::parse_group(s)
    }
}

impl Serialize for FgAbGroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for FgAbGroup {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Size of a group or Hom set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Cardinality {
    Finite(BigUint),
    Infinite,
}

impl Cardinality {
    pub fn finite(&self) -> Option<&BigUint> {
        match self {
            Cardinality::Finite(n) => Some(n),
            Cardinality::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Cardinality::Infinite)
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.finite().and_then(ToPrimitive::to_u64)
    }
}

impl fmt::Display for Cardinality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cardinality::Finite(n) => write!(f, "{n}"),
            Cardinality::Infinite => f.write_str("infinite"),
        }
    }
}

impl Serialize for Cardinality {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Cardinality::Finite(n) => match n.to_u64() {
                Some(x) => s.serialize_u64(x),
                None => s.serialize_str(&n.to_string()),
            },
            Cardinality::Infinite => s.serialize_str("infinite"),
        }
    }
}

/// An element of a group, as reduced coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement {
    #[serde(with = "crate::serde_int::vec")]
    pub coordinates: Vec<BigInt>,
}

impl GroupElement {
    pub fn is_identity(&self) -> bool {
        self.coordinates.iter().all(Zero::is_zero)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coordinates.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Lexicographic enumeration of a finite group, identity first.
pub struct Elements {
    moduli: Vec<BigInt>,
    next: Option<Vec<BigInt>>,
}

impl Iterator for Elements {
    type Item = GroupElement;

    fn next(&mut self) -> Option<GroupElement> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut carried = true;
        for i in (0..succ.len()).rev() {
            succ[i] += 1;
            if succ[i] < self.moduli[i] {
                carried = false;
                break;
            }
            succ[i] = BigInt::zero();
        }
        if !carried {
            self.next = Some(succ);
        }
        Some(GroupElement {
            coordinates: current,
        })
    }
}

/// The quotient `Z^g / L` in canonical form, with the coordinate maps relating
/// the two.
#[derive(Debug, Clone)]
pub struct Presentation {
    pub group: FgAbGroup,
    /// `rank(group) x g`: sends a vector of `Z^g` to the coordinates of its class.
    pub projection: IntegerMatrix,
    /// `g x rank(group)`: column `a` is a preimage of the `a`-th canonical generator.
    pub lift: IntegerMatrix,
}

/// Canonical form of `Z^generators / span(columns of relations)`.
pub fn group_from_presentation(relations: &IntegerMatrix, generators: usize) -> Result<FgAbGroup> {
    if relations.rows() != generators {
        return Err(Error::InvalidGroup(format!(
            "relation matrix has {} rows but there are {} generators",
            relations.rows(),
            generators
        )));
    }
    Ok(present(relations).group)
}

pub(crate) fn present(relations: &IntegerMatrix) -> Presentation {
    let g = relations.rows();
    let snf = snf_full(relations);
    let diag = |i: usize| {
        if i < snf.rank {
            snf.d[(i, i)].clone()
        } else {
            BigInt::zero()
        }
    };
    let mut keep: Vec<usize> = (snf.rank..g).collect();
    let free_rank = keep.len();
    let mut torsion = Vec::new();
    for i in 0..snf.rank {
        let d = diag(i);
        if !d.is_one() {
            keep.push(i);
            torsion.push(d);
        }
    }
    let mut projection = snf.u.select_rows(&keep);
    for (a, &i) in keep.iter().enumerate() {
        let m = diag(i);
        for j in 0..g {
            let v = reduce(&projection[(a, j)], &m);
            projection[(a, j)] = v;
        }
    }
    let lift = snf.u_inv.select_columns(&keep);
    Presentation {
        group: FgAbGroup { free_rank, torsion },
        projection,
        lift,
    }
}

/// Canonical form of `G + H`.
pub fn direct_sum(g: &FgAbGroup, h: &FgAbGroup) -> FgAbGroup {
    let orders: Vec<BigInt> = g.torsion.iter().chain(&h.torsion).cloned().collect();
    FgAbGroup::from_cyclic_decomposition(g.free_rank + h.free_rank, &orders)
        .expect("torsion factors are positive")
}

pub fn direct_sum_all<'a>(parts: impl IntoIterator<Item = &'a FgAbGroup>) -> FgAbGroup {
    parts
        .into_iter()
        .fold(FgAbGroup::zero(), |acc, p| direct_sum(&acc, p))
}

pub fn order(g: &FgAbGroup) -> Cardinality {
    g.order()
}

/// One representative per isomorphism class of finite abelian groups of order
/// at most `max_order`, sorted by `(order, torsion factors)`.
pub fn enumerate_groups(max_order: u64) -> Vec<FgAbGroup> {
    let mut out = Vec::new();
    for n in 1..=max_order {
        out.extend(groups_of_order(n));
    }
    out
}

/// All abelian groups of order exactly `n`, sorted by torsion factors.
pub fn groups_of_order(n: u64) -> Vec<FgAbGroup> {
    let factors = crate::arith::prime_factors(n);
    // Choices of partition per prime, combined by the Chinese remainder theorem.
    let per_prime: Vec<Vec<Vec<u32>>> = factors
        .iter()
        .map(|&(_, e)| crate::arith::partitions(e))
        .collect();
    let mut groups = Vec::new();
    let mut choice = vec![0usize; per_prime.len()];
    loop {
        let len = choice
            .iter()
            .enumerate()
            .map(|(k, &c)| per_prime[k][c].len())
            .max()
            .unwrap_or(0);
        // Largest invariant factor collects the largest part of each prime.
        let mut torsion: Vec<BigInt> = (0..len)
            .map(|slot| {
                factors
                    .iter()
                    .enumerate()
                    .map(|(k, &(p, _))| {
                        let part = per_prime[k][choice[k]].get(slot).copied().unwrap_or(0);
                        BigInt::from(p).pow(part)
                    })
                    .product()
            })
            .collect();
        torsion.reverse();
        groups.push(FgAbGroup {
            free_rank: 0,
            torsion,
        });

        let mut k = 0;
        loop {
            if k == choice.len() {
                groups.sort();
                return groups;
            }
            choice[k] += 1;
            if choice[k] < per_prime[k].len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

pub(crate) fn bigint_to_u64(x: &BigInt) -> Option<u64> {
    match x.sign() {
        Sign::Minus => None,
        _ => x.to_u64(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(free: usize, tors: &[u64]) -> FgAbGroup {
        FgAbGroup::from_factors(free, tors).unwrap()
    }

    fn ints(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn canonical_invariants_enforced() {
        assert!(FgAbGroup::from_factors(0, &[2, 3]).is_err());
        assert!(FgAbGroup::from_factors(0, &[1, 2]).is_err());
        assert!(FgAbGroup::from_factors(1, &[2, 4]).is_ok());
    }

    #[test]
    fn presentations() {
        let z4 = group_from_presentation(&IntegerMatrix::from_i64(&[&[4]]), 1).unwrap();
        assert_eq!(z4, g(0, &[4]));
        let free = group_from_presentation(&IntegerMatrix::zeros(2, 0), 2).unwrap();
        assert_eq!(free, g(2, &[]));
        let diag = group_from_presentation(&IntegerMatrix::from_i64(&[&[2, 0], &[0, 4]]), 2).unwrap();
        assert_eq!(diag, g(0, &[2, 4]));
        assert!(group_from_presentation(&IntegerMatrix::zeros(3, 1), 2).is_err());
    }

    #[test]
    fn presentation_maps_are_consistent() {
        // Z^3 / <(2,4,0), (0,6,3)>
        let rel = IntegerMatrix::from_i64(&[&[2, 0], &[4, 6], &[0, 3]]);
        let p = present(&rel);
        let moduli = p.group.moduli();
        // projection kills relations
        for j in 0..rel.cols() {
            let img = p.projection.mul_vec(&rel.column(j));
            for (x, m) in img.iter().zip(&moduli) {
                assert!(reduce(x, m).is_zero());
            }
        }
        // projection . lift = identity on the quotient
        let pl = p.projection.mul(&p.lift);
        for a in 0..p.group.rank() {
            for b in 0..p.group.rank() {
                let expect = if a == b { BigInt::one() } else { BigInt::zero() };
                assert_eq!(reduce(&pl[(a, b)], &moduli[a]), reduce(&expect, &moduli[a]));
            }
        }
    }

    #[test]
    fn presentation_invariance() {
        let a = IntegerMatrix::from_i64(&[&[2, 0, 4], &[6, 3, 0]]);
        let base = group_from_presentation(&a, 2).unwrap();
        // permuted columns
        let perm = a.select_columns(&[2, 0, 1]);
        assert_eq!(group_from_presentation(&perm, 2).unwrap(), base);
        // plus a dependent column: 3*c0 - c2
        let extra: Vec<BigInt> = (0..2).map(|i| &a[(i, 0)] * 3 - &a[(i, 2)]).collect();
        let aug = a.hconcat(&IntegerMatrix::from_columns(2, &[extra]));
        assert_eq!(group_from_presentation(&aug, 2).unwrap(), base);
    }

    #[test]
    fn direct_sums() {
        assert_eq!(direct_sum(&g(0, &[2]), &g(0, &[3])), g(0, &[6]));
        assert_eq!(direct_sum(&g(0, &[2]), &g(0, &[2])), g(0, &[2, 2]));
        let x = g(1, &[4, 12]);
        assert_eq!(direct_sum(&FgAbGroup::zero(), &x), x);
        assert_eq!(direct_sum(&g(0, &[4]), &g(0, &[6])), g(0, &[2, 12]));
    }

    #[test]
    fn orders() {
        assert_eq!(g(0, &[2, 4]).order(), Cardinality::Finite(8u32.into()));
        assert_eq!(g(1, &[]).order(), Cardinality::Infinite);
        assert_eq!(FgAbGroup::zero().order(), Cardinality::Finite(1u32.into()));
    }

    #[test]
    fn element_enumeration() {
        let e: Vec<_> = g(0, &[2]).elements().unwrap().collect();
        assert_eq!(
            e,
            vec![
                GroupElement { coordinates: ints(&[0]) },
                GroupElement { coordinates: ints(&[1]) }
            ]
        );
        let z: Vec<_> = FgAbGroup::zero().elements().unwrap().collect();
        assert_eq!(z, vec![GroupElement { coordinates: vec![] }]);
        assert_eq!(g(0, &[2, 2]).elements().unwrap().count(), 4);
        assert!(matches!(g(1, &[]).elements(), Err(Error::InfiniteGroup(_))));
    }

    #[test]
    fn elements_closed_and_distinct() {
        let grp = g(0, &[2, 6]);
        let all: Vec<_> = grp.elements().unwrap().collect();
        let set: std::collections::BTreeSet<_> = all.iter().cloned().collect();
        assert_eq!(set.len(), 12);
        assert!(all[0].is_identity());
        for a in &all {
            for b in &all {
                assert!(set.contains(&grp.add(a, b)));
            }
        }
    }

    #[test]
    fn small_enumeration() {
        let gs = enumerate_groups(4);
        assert_eq!(
            gs,
            vec![
                FgAbGroup::zero(),
                g(0, &[2]),
                g(0, &[3]),
                g(0, &[2, 2]),
                g(0, &[4])
            ]
        );
        assert_eq!(enumerate_groups(1), vec![FgAbGroup::zero()]);
    }

    #[test]
    fn indecomposables() {
        assert!(g(0, &[8]).is_indecomposable());
        assert!(g(1, &[]).is_indecomposable());
        assert!(!g(0, &[6]).is_indecomposable());
        assert!(!g(0, &[2, 2]).is_indecomposable());
        assert!(!FgAbGroup::zero().is_indecomposable());
    }
}
