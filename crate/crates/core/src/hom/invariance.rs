//! Fully invariant subobjects, fully coinvariant quotients, and existence of
//! epimorphisms and monomorphisms between groups.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::diagram::{kernel, Subobject};
use super::solve::{extend_along, lift_through};
use super::{compose, enumerate_homs, hom_group, Morphism};
use crate::error::{Error, Result};
use crate::finite::fin_group;
use crate::group::{enumerate_groups, FgAbGroup};
use crate::options::Options;

/// Whether every endomorphism of the ambient maps `s` into itself. Only the
/// generators of the endomorphism group are tried.
pub fn is_fully_invariant(s: &Subobject) -> Result<bool> {
    if s.bits().is_some() {
        is_fully_invariant_elementwise(s)
    } else {
        is_fully_invariant_structural(s)
    }
}

/// Evaluates each endomorphism generator on the generators of `s` and looks
/// the result up in the element set.
pub fn is_fully_invariant_elementwise(s: &Subobject) -> Result<bool> {
    let m = s.ambient();
    let fg = fin_group(m)?;
    let bits = s
        .bits()
        .ok_or_else(|| Error::TooLarge(m.to_string()))?;
    let sub_gens = s.embedding().generator_images(&fg);
    for h in hom_group(m, m).generators {
        let himg = h.generator_images(&fg);
        if sub_gens.iter().any(|&x| !bits.contains(fg.eval(&fg, &himg, x))) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Decides whether `h . k` factors through `k` for each generator `h`.
pub fn is_fully_invariant_structural(s: &Subobject) -> Result<bool> {
    let m = s.ambient();
    let k = s.embedding();
    for h in hom_group(m, m).generators {
        if lift_through(k, &compose(&h, k)?)?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn is_fully_invariant_with(s: &Subobject, opts: &Options) -> Result<bool> {
    let fast = is_fully_invariant(s)?;
    if opts.paranoid {
        let slow = is_fully_invariant_structural(s)?;
        if slow != fast {
            return Err(Error::Inconsistent(format!(
                "full invariance of {s:?}: element check {fast}, structural {slow}"
            )));
        }
    }
    Ok(fast)
}

/// Whether `c . h` factors through `c` for every endomorphism `h` of the
/// source. Computed directly and through the kernel of `c`; the two must
/// agree.
pub fn is_fully_coinvariant(c: &Morphism) -> Result<bool> {
    let m = c.source();
    let mut direct = true;
    for h in hom_group(m, m).generators {
        if extend_along(c, &compose(c, &h)?)?.is_none() {
            direct = false;
            break;
        }
    }
    let via_kernel = is_fully_invariant(&kernel(c)?)?;
    if direct != via_kernel {
        return Err(Error::Inconsistent(format!(
            "full coinvariance of {c}: direct {direct}, via kernel {via_kernel}"
        )));
    }
    Ok(direct)
}

/// Exhaustive: some morphism `g -> h` is onto.
pub fn exists_epimorphism_exhaustive(g: &FgAbGroup, h: &FgAbGroup, budget: u64) -> Result<bool> {
    let space = enumerate_homs(g, h, budget)?;
    let src = fin_group(g)?;
    let tgt = fin_group(h)?;
    let mut scan = space.scanner(&src, &tgt);
    while let Some((_, imgs)) = scan.current() {
        if tgt.span(imgs).len() == tgt.order {
            return Ok(true);
        }
        scan.advance();
    }
    Ok(false)
}

/// Exhaustive: some morphism `g -> h` is one-to-one.
pub fn exists_monomorphism_exhaustive(g: &FgAbGroup, h: &FgAbGroup, budget: u64) -> Result<bool> {
    let space = enumerate_homs(g, h, budget)?;
    let src = fin_group(g)?;
    let tgt = fin_group(h)?;
    let mut scan = space.scanner(&src, &tgt);
    while let Some((_, imgs)) = scan.current() {
        if tgt.span(imgs).len() == src.order {
            return Ok(true);
        }
        scan.advance();
    }
    Ok(false)
}

/// Invariant factors with each free summand written as a trailing 0.
fn chain(g: &FgAbGroup) -> Vec<BigInt> {
    let mut c = g.torsion_factors().to_vec();
    c.extend(std::iter::repeat_n(BigInt::zero(), g.free_rank()));
    c
}

/// `b` divides `a` entrywise once both chains are aligned at the top end.
fn top_aligned_divides(small: &[BigInt], big: &[BigInt]) -> bool {
    small.len() <= big.len()
        && small
            .iter()
            .rev()
            .zip(big.iter().rev())
            .all(|(b, a)| if b.is_zero() { a.is_zero() } else { a.is_multiple_of(b) })
}

fn epi_criterion(g: &FgAbGroup, h: &FgAbGroup) -> bool {
    top_aligned_divides(&chain(h), &chain(g))
}

fn mono_criterion(g: &FgAbGroup, h: &FgAbGroup) -> bool {
    g.free_rank() <= h.free_rank() && top_aligned_divides(g.torsion_factors(), h.torsion_factors())
}

/// Pairs of groups of order at most `max_order` on which the closed-form
/// epimorphism or monomorphism criterion disagrees with the exhaustive scan.
pub fn validate_epimorphism_criterion(max_order: u64) -> Result<Vec<(FgAbGroup, FgAbGroup, &'static str)>> {
    let groups = enumerate_groups(max_order);
    let mut bad = Vec::new();
    for g in &groups {
        for h in &groups {
            if exists_epimorphism_exhaustive(g, h, u64::MAX)? != epi_criterion(g, h) {
                bad.push((g.clone(), h.clone(), "epimorphism"));
            }
            if exists_monomorphism_exhaustive(g, h, u64::MAX)? != mono_criterion(g, h) {
                bad.push((g.clone(), h.clone(), "monomorphism"));
            }
        }
    }
    Ok(bad)
}

/// The criteria are only used once they have matched the scan on every pair
/// of groups of order at most 16.
fn criteria_validated() {
    static CHECKED: OnceLock<()> = OnceLock::new();
    CHECKED.get_or_init(|| {
        let bad = validate_epimorphism_criterion(16).expect("validation scan is within budget");
        assert!(
            bad.is_empty(),
            "closed-form epi/mono criteria disagree with the exhaustive scan: {bad:?}"
        );
    });
}

pub fn exists_epimorphism_structural(g: &FgAbGroup, h: &FgAbGroup) -> bool {
    criteria_validated();
    epi_criterion(g, h)
}

pub fn exists_monomorphism_structural(g: &FgAbGroup, h: &FgAbGroup) -> bool {
    criteria_validated();
    mono_criterion(g, h)
}

/// Scans when the Hom set is finite and small enough, otherwise falls back
/// on the validated criterion.
pub fn exists_epimorphism(g: &FgAbGroup, h: &FgAbGroup, budget: u64) -> Result<bool> {
    match exists_epimorphism_exhaustive(g, h, budget) {
        Err(e) if e.is_resource_error() => Ok(exists_epimorphism_structural(g, h)),
        r => r,
    }
}

pub fn exists_monomorphism(g: &FgAbGroup, h: &FgAbGroup, budget: u64) -> Result<bool> {
    match exists_monomorphism_exhaustive(g, h, budget) {
        Err(e) if e.is_resource_error() => Ok(exists_monomorphism_structural(g, h)),
        r => r,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupElement;
    use crate::hom::{cokernel, image};
    use crate::matrix::IntegerMatrix;

    fn g(s: &str) -> FgAbGroup {
        s.parse().unwrap()
    }

    fn elem(v: &[i64]) -> GroupElement {
        GroupElement {
            coordinates: v.iter().map(|&x| BigInt::from(x)).collect(),
        }
    }

    #[test]
    fn invariance_examples() {
        let z4 = g("Z/4");
        let s = Subobject::generated_by(&z4, &[elem(&[2])]).unwrap();
        assert!(is_fully_invariant(&s).unwrap());
        assert!(is_fully_invariant_structural(&s).unwrap());
        let v = g("Z/2 + Z/2");
        let s = Subobject::generated_by(&v, &[elem(&[1, 0])]).unwrap();
        assert!(!is_fully_invariant(&s).unwrap());
        assert!(!is_fully_invariant_structural(&s).unwrap());
        for m in [&z4, &v] {
            assert!(is_fully_invariant(&Subobject::zero(m)).unwrap());
            assert!(is_fully_invariant(&Subobject::full(m)).unwrap());
        }
        // 2Z inside Z, and the torsion part of Z + Z/2
        let z = g("Z");
        let s = Subobject::generated_by(&z, &[elem(&[2])]).unwrap();
        assert!(is_fully_invariant(&s).unwrap());
        let zz2 = g("Z + Z/2");
        let t = Subobject::generated_by(&zz2, &[elem(&[0, 1])]).unwrap();
        assert!(is_fully_invariant(&t).unwrap());
        let f = Subobject::generated_by(&zz2, &[elem(&[1, 0])]).unwrap();
        assert!(!is_fully_invariant(&f).unwrap());
    }

    #[test]
    fn coinvariance_examples() {
        let q = Morphism::new(g("Z/4"), g("Z/2"), IntegerMatrix::from_i64(&[&[1]])).unwrap();
        assert!(is_fully_coinvariant(&q).unwrap());
        let p = Morphism::new(g("Z/2 + Z/2"), g("Z/2"), IntegerMatrix::from_i64(&[&[1, 0]])).unwrap();
        assert!(!is_fully_coinvariant(&p).unwrap());
        let v = g("Z/2 + Z/4");
        let (_, c) = cokernel(&Morphism::zero(&v, &v)).unwrap();
        assert!(is_fully_coinvariant(&c).unwrap());
    }

    /// Checking generators only agrees with checking every endomorphism.
    #[test]
    fn generators_suffice() {
        for m in enumerate_groups(12) {
            let fg = fin_group(&m).unwrap();
            let all: Vec<Morphism> = enumerate_homs(&m, &m, 1 << 20).unwrap().iter().collect();
            for f in &all {
                let s = image(f).unwrap();
                let bits = s.bits().unwrap();
                let full_scan = all.iter().all(|h| {
                    let himg = h.generator_images(&fg);
                    bits.iter().all(|x| bits.contains(fg.eval(&fg, &himg, x)))
                });
                assert_eq!(is_fully_invariant(&s).unwrap(), full_scan, "{s:?}");
                assert_eq!(is_fully_invariant_structural(&s).unwrap(), full_scan, "{s:?}");
            }
        }
    }

    #[test]
    fn epimorphism_examples() {
        assert!(exists_epimorphism(&g("Z/4"), &g("Z/2"), 100).unwrap());
        assert!(!exists_epimorphism(&g("Z/2 + Z/2"), &g("Z/4"), 100).unwrap());
        assert!(exists_epimorphism(&g("Z/6"), &FgAbGroup::zero(), 100).unwrap());
        assert!(exists_epimorphism(&g("Z"), &g("Z/5"), 100).unwrap());
        assert!(!exists_epimorphism(&g("Z"), &g("Z^2"), 100).unwrap());
        assert!(exists_epimorphism(&g("Z^2"), &g("Z + Z/6"), 100).unwrap());
        assert!(exists_monomorphism(&g("Z/2"), &g("Z/4"), 100).unwrap());
        assert!(!exists_monomorphism(&g("Z/4"), &g("Z/2 + Z/2"), 100).unwrap());
    }

    #[test]
    fn criteria_match_scan_up_to_twelve() {
        assert!(validate_epimorphism_criterion(12).unwrap().is_empty());
    }
}
