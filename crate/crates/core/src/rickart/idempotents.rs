use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Zero;

use super::{Property, PropertyReport};
use crate::error::{Error, Result};
use crate::finite::{fin_group, Bits};
use crate::group::{groups_of_order, FgAbGroup};
use crate::hom::{
    compose, enumerate_homs, hom_group, image, is_fully_invariant, is_section, Morphism, Subobject,
};
use crate::matrix::IntegerMatrix;
use crate::options::Options;

/// All `e` in End(M) with `e . e = e`, in enumeration order.
///
/// For groups of free rank one the endomorphism ring is infinite but has
/// only finitely many idempotents: the free-to-free entry must be 0 or 1.
pub fn idempotent_endomorphisms(m: &FgAbGroup, budget: u64) -> Result<Vec<Morphism>> {
    if let Ok(fg) = fin_group(m) {
        let space = enumerate_homs(m, m, budget)?;
        let mut out = Vec::new();
        let mut scan = space.scanner(&fg, &fg);
        while let Some((idx, imgs)) = scan.current() {
            if imgs.iter().all(|&y| fg.eval(&fg, imgs, y) == y) {
                out.push(space.morphism_at(idx));
            }
            scan.advance();
        }
        return Ok(out);
    }
    if m.free_rank() != 1 {
        return Err(Error::InfiniteHomSet {
            source_group: m.to_string(),
            target: m.to_string(),
        });
    }
    let desc = hom_group(m, m);
    let orders: Vec<BigInt> = desc
        .slots
        .iter()
        .map(|s| s.order.clone().unwrap_or_else(|| BigInt::from(2)))
        .collect();
    let total: BigInt = orders.iter().product();
    if total > BigInt::from(budget) {
        return Err(Error::budget(format!("idempotents of End({m})"), total, budget));
    }
    let mut out = Vec::new();
    let mut coeffs = vec![BigInt::zero(); orders.len()];
    loop {
        let mut mat = IntegerMatrix::zeros(m.rank(), m.rank());
        for (s, c) in desc.slots.iter().zip(&coeffs) {
            mat[(s.row, s.col)] = &s.step * c;
        }
        let e = Morphism::new(m.clone(), m.clone(), mat)?;
        if compose(&e, &e)? == e {
            out.push(e);
        }
        let mut k = coeffs.len();
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            coeffs[k] += 1;
            if coeffs[k] < orders[k] {
                break;
            }
            coeffs[k] = BigInt::zero();
        }
    }
}

fn check_idempotent(e: &Morphism) -> Result<()> {
    if !e.is_endomorphism() || compose(e, e)? != *e {
        return Err(Error::InvalidMorphism(format!("{e} is not an idempotent endomorphism")));
    }
    Ok(())
}

/// `b e = e b e` for every `b` in End(M).
pub fn is_left_semicentral(e: &Morphism) -> Result<bool> {
    check_idempotent(e)?;
    let m = e.source();
    for b in hom_group(m, m).generators {
        let be = compose(&b, e)?;
        if be != compose(e, &be)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `e b = e b e` for every `b` in End(M).
pub fn is_right_semicentral(e: &Morphism) -> Result<bool> {
    check_idempotent(e)?;
    let m = e.source();
    for b in hom_group(m, m).generators {
        let eb = compose(e, &b)?;
        if eb != compose(&eb, e)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every idempotent commutes with every endomorphism.
pub fn is_end_ring_abelian(m: &FgAbGroup, opts: &Options) -> Result<PropertyReport> {
    let mut report = PropertyReport::new(Property::EndRingAbelian, vec![m.clone()]);
    let gens = hom_group(m, m).generators;
    for e in idempotent_endomorphisms(m, opts.budget)? {
        report.work += 1;
        if let Some(b) = gens
            .iter()
            .find(|b| compose(b, &e).ok() != compose(&e, b).ok())
        {
            report.fail(e, format!("idempotent does not commute with {b}"));
            break;
        }
    }
    Ok(report)
}

/// Every direct summand is fully invariant, tested on the images of the
/// idempotents.
pub fn is_weak_duo(m: &FgAbGroup, opts: &Options) -> Result<PropertyReport> {
    let mut report = PropertyReport::new(Property::WeakDuo, vec![m.clone()]);
    for e in idempotent_endomorphisms(m, opts.budget)? {
        report.work += 1;
        let im = image(&e)?;
        if !is_fully_invariant(&im)? {
            report.fail(
                e,
                format!("summand {} is not fully invariant", im.group()),
            );
            break;
        }
    }
    Ok(report)
}

/// Weak duo straight from the definition: every section `K -> M`, from any
/// group `K` whose order divides that of `M`, has a fully invariant image.
pub fn is_weak_duo_by_sections(m: &FgAbGroup, opts: &Options) -> Result<PropertyReport> {
    let order = m
        .order_u64()
        .ok_or_else(|| Error::InfiniteGroup(m.to_string()))?;
    let mut report = PropertyReport::new(Property::WeakDuo, vec![m.clone()]);
    report.notes.push("decided by scanning sections".into());
    for d in (1..=order).filter(|d| order % d == 0) {
        for k in groups_of_order(d) {
            for f in enumerate_homs(&k, m, opts.budget)?.iter() {
                report.work += 1;
                if is_section(&f)?.is_none() {
                    continue;
                }
                if !is_fully_invariant(&image(&f)?)? {
                    report.fail(f, "section with an image that is not fully invariant");
                    return Ok(report);
                }
            }
        }
    }
    Ok(report)
}

/// The distinct images of the idempotents.
pub fn direct_summands(m: &FgAbGroup, opts: &Options) -> Result<Vec<Subobject>> {
    let mut out: Vec<Subobject> = Vec::new();
    let mut seen: BTreeSet<Bits> = BTreeSet::new();
    for e in idempotent_endomorphisms(m, opts.budget)? {
        let im = image(&e)?;
        match im.bits() {
            Some(b) => {
                if seen.insert(b.clone()) {
                    out.push(im);
                }
            }
            None => {
                if !out.iter().any(|s| s.same_as(&im).unwrap_or(false)) {
                    out.push(im);
                }
            }
        }
    }
    Ok(out)
}

fn summand_closure(
    m: &FgAbGroup,
    opts: &Options,
    property: Property,
    combine: fn(&Subobject, &Subobject) -> Result<Subobject>,
    verb: &str,
) -> Result<PropertyReport> {
    let mut report = PropertyReport::new(property, vec![m.clone()]);
    let summands = direct_summands(m, opts)?;
    report.notes.push(format!("{} direct summands", summands.len()));
    for (i, a) in summands.iter().enumerate() {
        for b in &summands[i + 1..] {
            report.work += 1;
            let c = combine(a, b)?;
            let is_summand = summands.iter().any(|s| s.same_as(&c).unwrap_or(false));
            debug_assert_eq!(is_summand, is_section(c.embedding())?.is_some());
            if !is_summand {
                report.fail(
                    c.embedding().clone(),
                    format!("{verb} of summands {} and {} is not a summand", a.group(), b.group()),
                );
                return Ok(report);
            }
        }
    }
    Ok(report)
}

/// Intersections of direct summands are direct summands. For a finite
/// summand lattice closure under pairwise intersection is enough.
pub fn has_ssip(m: &FgAbGroup, opts: &Options) -> Result<PropertyReport> {
    summand_closure(m, opts, Property::Ssip, Subobject::intersection, "intersection")
}

/// Sums of direct summands are direct summands.
pub fn has_sssp(m: &FgAbGroup, opts: &Options) -> Result<PropertyReport> {
    summand_closure(m, opts, Property::Sssp, Subobject::sum, "sum")
}
