//! Deciders for (dual) (strongly) relative Rickart pairs and the related
//! endomorphism-ring properties.

mod idempotents;
mod retractable;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::finite::{fin_group, Bits, MAX_ELEMENTS};
use crate::group::FgAbGroup;
use crate::hom::{
    coimage, enumerate_homs, hom_group, image, is_fully_coinvariant, is_fully_invariant_with, is_retraction,
    is_retraction_checked, is_section_checked, kernel, quotient, Morphism, Subobject,
};
use crate::options::Options;

pub use idempotents::{
    direct_summands, has_ssip, has_sssp, idempotent_endomorphisms, is_end_ring_abelian,
    is_left_semicentral, is_right_semicentral, is_weak_duo, is_weak_duo_by_sections,
};
pub use retractable::{closure_check_direct_sum, is_c_quasi_coretractable, is_k_quasi_retractable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    Rickart,
    StronglyRickart,
    DualRickart,
    DualStronglyRickart,
    WeakDuo,
    EndRingAbelian,
    Ssip,
    Sssp,
    KQuasiRetractable,
    CQuasiCoretractable,
    DirectSumClosure,
    StronglySelfRickartRing,
}

impl Property {
    pub const ALL: [Property; 12] = [
        Property::Rickart,
        Property::StronglyRickart,
        Property::DualRickart,
        Property::DualStronglyRickart,
        Property::WeakDuo,
        Property::EndRingAbelian,
        Property::Ssip,
        Property::Sssp,
        Property::KQuasiRetractable,
        Property::CQuasiCoretractable,
        Property::DirectSumClosure,
        Property::StronglySelfRickartRing,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::Rickart => "rickart",
            Property::StronglyRickart => "strongly-rickart",
            Property::DualRickart => "dual-rickart",
            Property::DualStronglyRickart => "dual-strongly-rickart",
            Property::WeakDuo => "weak-duo",
            Property::EndRingAbelian => "end-ring-abelian",
            Property::Ssip => "ssip",
            Property::Sssp => "sssp",
            Property::KQuasiRetractable => "k-quasi-retractable",
            Property::CQuasiCoretractable => "c-quasi-coretractable",
            Property::DirectSumClosure => "direct-sum-closure",
            Property::StronglySelfRickartRing => "strongly-self-rickart-ring",
        }
    }

    /// Whether the property is about a pair `(M, N)` rather than one group.
    pub fn is_relative(self) -> bool {
        matches!(
            self,
            Property::Rickart
                | Property::StronglyRickart
                | Property::DualRickart
                | Property::DualStronglyRickart
        )
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Property {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Property::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::UnknownProperty(s.to_string()))
    }
}

/// The outcome of one decider run. A failing report always carries a
/// witness that the single-morphism checks reproduce.
#[derive(Debug, Clone, Serialize)]
pub struct PropertyReport {
    pub property: Property,
    pub subject: Vec<FgAbGroup>,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Morphism>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    /// Morphisms examined.
    pub work: u64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl PropertyReport {
    pub(crate) fn new(property: Property, subject: Vec<FgAbGroup>) -> Self {
        PropertyReport {
            property,
            subject,
            holds: true,
            witness: None,
            reason: None,
            work: 0,
            notes: Vec::new(),
        }
    }

    pub(crate) fn fail(&mut self, witness: Morphism, reason: impl Into<String>) {
        self.holds = false;
        self.witness = Some(witness);
        self.reason = Some(reason.into());
    }
}

/// What each morphism contributes to a pair property.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Kernel,
    Image,
}

fn side_of(p: Property) -> (Side, bool) {
    match p {
        Property::Rickart => (Side::Kernel, false),
        Property::StronglyRickart => (Side::Kernel, true),
        Property::DualRickart => (Side::Image, false),
        Property::DualStronglyRickart => (Side::Image, true),
        _ => unreachable!("not a pair property"),
    }
}

/// Verdict on one kernel or image: `None` when it passes.
fn judge(
    sub: &Subobject,
    side: Side,
    strong: bool,
    opts: &Options,
) -> Result<Option<String>> {
    let what = match side {
        Side::Kernel => "kernel",
        Side::Image => "image",
    };
    let section = is_section_checked(sub.embedding(), opts)?.is_some();
    if side == Side::Image {
        // The cokernel formulation must give the same answers.
        let (_, c) = quotient(sub)?;
        if is_retraction(&c)?.is_some() != section {
            return Err(Error::Inconsistent(format!(
                "image {sub:?} is a section = {section} but its cokernel disagrees"
            )));
        }
        if strong && section && is_fully_coinvariant(&c)? != is_fully_invariant_with(sub, opts)? {
            return Err(Error::Inconsistent(format!(
                "image {sub:?} and its cokernel disagree on full invariance"
            )));
        }
    }
    if !section {
        return Ok(Some(format!(
            "{what} {} is not a direct summand of {}",
            sub.group(),
            sub.ambient()
        )));
    }
    if strong && !is_fully_invariant_with(sub, opts)? {
        return Ok(Some(format!(
            "{what} {} is not fully invariant in {}",
            sub.group(),
            sub.ambient()
        )));
    }
    Ok(None)
}

fn coimage_cross_check(f: &Morphism, section: bool, opts: &Options) -> Result<()> {
    let (_, p) = coimage(f)?;
    if is_retraction_checked(&p, opts)?.is_some() != section {
        return Err(Error::Inconsistent(format!(
            "kernel of {f} is a section = {section} but its coimage disagrees"
        )));
    }
    Ok(())
}

fn decide_pair(p: Property, m: &FgAbGroup, n: &FgAbGroup, opts: &Options) -> Result<PropertyReport> {
    let (side, strong) = side_of(p);
    let fast = match (fin_group(m), fin_group(n)) {
        (Ok(a), Ok(b)) => Some((a, b)),
        _ => None,
    };
    // Over budget, a finite scan may still stop at a witness within the
    // first `budget` morphisms; otherwise the budget error stands.
    let (space, over_budget) = match enumerate_homs(m, n, opts.budget) {
        Ok(s) => (s, None),
        Err(e @ Error::BudgetExceeded { .. }) if fast.is_some() => match hom_group(m, n).space(u64::MAX) {
            Ok(s) => (s, Some(e)),
            Err(_) => return Err(e),
        },
        Err(e) => return Err(e),
    };
    let mut report = PropertyReport::new(p, vec![m.clone(), n.clone()]);
    let Some((src, tgt)) = fast else {
        // Infinite groups with a finite Hom set: structural checks per morphism.
        for (idx, f) in space.iter().enumerate() {
            report.work += 1;
            let sub = match side {
                Side::Kernel => kernel(&f)?,
                Side::Image => image(&f)?,
            };
            if let Some(reason) = judge(&sub, side, strong, opts)? {
                report.fail(space.morphism_at(idx as u64), reason);
                break;
            }
        }
        return Ok(report);
    };
    let ambient = match side {
        Side::Kernel => m,
        Side::Image => n,
    };
    let amb = match side {
        Side::Kernel => &src,
        Side::Image => &tgt,
    };
    debug_assert!(amb.order <= MAX_ELEMENTS);
    let mut memo: HashMap<Bits, Option<String>> = HashMap::new();
    let mut values = Vec::with_capacity(src.order);
    let mut scratch = Bits::new(amb.order);
    let mut scan = space.scanner(&src, &tgt);
    while let Some((idx, imgs)) = scan.current() {
        if report.work == opts.budget {
            if let Some(e) = over_budget {
                return Err(e);
            }
        }
        report.work += 1;
        match side {
            Side::Kernel => {
                src.eval_all(&tgt, imgs, &mut values);
                scratch.clear();
                for (x, &v) in values.iter().enumerate() {
                    if v == 0 {
                        scratch.insert(x as u32);
                    }
                }
            }
            Side::Image => scratch = tgt.span(imgs),
        }
        let verdict = match memo.get(scratch.words()) {
            Some(v) => v.clone(),
            None => {
                let sub = Subobject::from_bits(ambient, amb, &scratch)?;
                let v = judge(&sub, side, strong, opts)?;
                if opts.paranoid && side == Side::Kernel {
                    let f = space.morphism_at(idx);
                    let section = is_section_checked(sub.embedding(), opts)?.is_some();
                    coimage_cross_check(&f, section, opts)?;
                }
                memo.insert(scratch.clone(), v.clone());
                v
            }
        };
        if let Some(reason) = verdict {
            report.fail(space.morphism_at(idx), reason);
            break;
        }
        scan.advance();
    }
    if over_budget.is_some() {
        report.notes.push(format!(
            "witness found after {} of {} morphisms; the full scan exceeds the budget",
            report.work,
            space.size()
        ));
    }
    report.notes.push(format!("{} distinct {}s examined", memo.len(), match side {
        Side::Kernel => "kernel",
        Side::Image => "image",
    }));
    Ok(report)
}

/// `N` is `M`-Rickart: every kernel of a morphism `M -> N` is a direct summand.
pub fn is_rickart(m: &FgAbGroup, n: &FgAbGroup, opts: &Options) -> Result<PropertyReport> {
    decide_pair(Property::Rickart, m, n, opts)
}

/// Every kernel is a fully invariant direct summand of `M`.
pub fn is_strongly_rickart(m: &FgAbGroup, n: &FgAbGroup, opts: &Options) -> Result<PropertyReport> {
    decide_pair(Property::StronglyRickart, m, n, opts)
}

/// Every image is a direct summand of `N`.
pub fn is_dual_rickart(m: &FgAbGroup, n: &FgAbGroup, opts: &Options) -> Result<PropertyReport> {
    decide_pair(Property::DualRickart, m, n, opts)
}

/// Every image is a fully invariant direct summand of `N`.
pub fn is_dual_strongly_rickart(
    m: &FgAbGroup,
    n: &FgAbGroup,
    opts: &Options,
) -> Result<PropertyReport> {
    decide_pair(Property::DualStronglyRickart, m, n, opts)
}

/// Result of checking one morphism against a pair property.
#[derive(Debug, Clone, Serialize)]
pub struct MorphismCheck {
    pub property: Property,
    pub morphism: Morphism,
    pub passes: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

/// Replays a single morphism against a pair property.
pub fn check_morphism(p: Property, f: &Morphism, opts: &Options) -> Result<MorphismCheck> {
    if !p.is_relative() {
        return Err(Error::UnknownProperty(format!(
            "{p} is not decided morphism by morphism"
        )));
    }
    let (side, strong) = side_of(p);
    let sub = match side {
        Side::Kernel => kernel(f)?,
        Side::Image => image(f)?,
    };
    let reason = judge(&sub, side, strong, opts)?;
    Ok(MorphismCheck {
        property: p,
        morphism: f.clone(),
        passes: reason.is_none(),
        reason,
    })
}

/// Dispatches on the property name. Pair properties take `n`, defaulting to `m`.
pub fn decide(p: Property, m: &FgAbGroup, n: Option<&FgAbGroup>, opts: &Options) -> Result<PropertyReport> {
    let n = n.unwrap_or(m);
    match p {
        Property::Rickart => is_rickart(m, n, opts),
        Property::StronglyRickart => is_strongly_rickart(m, n, opts),
        Property::DualRickart => is_dual_rickart(m, n, opts),
        Property::DualStronglyRickart => is_dual_strongly_rickart(m, n, opts),
        Property::WeakDuo => is_weak_duo(m, opts),
        Property::EndRingAbelian => is_end_ring_abelian(m, opts),
        Property::Ssip => has_ssip(m, opts),
        Property::Sssp => has_sssp(m, opts),
        Property::KQuasiRetractable => is_k_quasi_retractable(m, opts),
        Property::CQuasiCoretractable => is_c_quasi_coretractable(m, opts),
        Property::DirectSumClosure => {
            let parts = crate::classify::cyclic_parts(n);
            closure_check_direct_sum(m, &parts, opts)
        }
        Property::StronglySelfRickartRing => {
            let ring = crate::ring::end_ring(m, opts.budget)?;
            Ok(crate::ring::is_strongly_self_rickart_ring(&ring))
        }
    }
}
