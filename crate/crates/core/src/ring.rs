//! Endomorphism rings of finite groups as concrete finite rings, and the
//! ring-side characterization of strongly self-Rickart groups.

use std::collections::HashMap;
use std::sync::Arc;

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::finite::{fin_group, Bits, FinGroup};
use crate::group::FgAbGroup;
use crate::hom::{
    enumerate_homs, exists_epimorphism, exists_monomorphism, quotient, HomSpace, Morphism, Subobject,
};
use crate::options::Options;
use crate::rickart::{
    is_c_quasi_coretractable, is_dual_strongly_rickart, is_k_quasi_retractable, is_strongly_rickart,
    Property, PropertyReport,
};

/// Largest ring that gets explicit operation tables.
pub const TABLE_LIMIT: usize = 4096;
/// Largest ring that can be built at all.
pub const MAX_RING: u64 = 1 << 22;

/// `End(M)` for a finite group `M`. Elements are indices into the Hom
/// enumeration of `M`; the product `a * b` is the composite `a . b`.
pub struct FiniteRing {
    group: FgAbGroup,
    fg: Arc<FinGroup>,
    space: HomSpace,
    /// `(row, col, step, order)` per Hom slot, in enumeration order.
    slots: Vec<(usize, usize, u64, u64)>,
    images: Vec<u32>,
    size: usize,
    zero: u32,
    one: u32,
    generators: Vec<u32>,
    opposite: bool,
    add_table: Option<Vec<u32>>,
    mul_table: Option<Vec<u32>>,
}

/// Builds `End(m)`.
pub fn end_ring(m: &FgAbGroup, budget: u64) -> Result<FiniteRing> {
    let space = enumerate_homs(m, m, budget)?;
    if space.size() > MAX_RING {
        return Err(Error::budget(format!("End({m}) as a ring"), space.size(), MAX_RING));
    }
    let fg = fin_group(m)?;
    let rank = fg.rank();
    let size = space.size() as usize;
    let mut images = Vec::with_capacity(size * rank);
    let mut scan = space.scanner(&fg, &fg);
    while let Some((_, imgs)) = scan.current() {
        images.extend_from_slice(imgs);
        scan.advance();
    }
    let desc = space.description();
    let slots = desc
        .slots
        .iter()
        .map(|s| {
            let step = s.step.to_u64().expect("finite step");
            let order = s.order.as_ref().and_then(ToPrimitive::to_u64).expect("finite order");
            (s.row, s.col, step, order)
        })
        .collect();
    let generators = desc
        .generators
        .iter()
        .map(|g| space.index_of(g).map(|i| i as u32))
        .collect::<Result<Vec<_>>>()?;
    let one = space.index_of(&Morphism::identity(m))? as u32;
    let mut ring = FiniteRing {
        group: m.clone(),
        fg,
        space,
        slots,
        images,
        size,
        zero: 0,
        one,
        generators,
        opposite: false,
        add_table: None,
        mul_table: None,
    };
    ring.build_tables();
    Ok(ring)
}

impl FiniteRing {
    fn build_tables(&mut self) {
        if self.size > TABLE_LIMIT {
            return;
        }
        let n = self.size as u32;
        let mut add = Vec::with_capacity(self.size * self.size);
        let mut mul = Vec::with_capacity(self.size * self.size);
        for a in 0..n {
            for b in 0..n {
                add.push(self.add_raw(a, b));
                mul.push(self.mul_raw(a, b));
            }
        }
        self.add_table = Some(add);
        self.mul_table = Some(mul);
    }

    pub fn group(&self) -> &FgAbGroup {
        &self.group
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn zero(&self) -> u32 {
        self.zero
    }

    pub fn one(&self) -> u32 {
        self.one
    }

    pub fn has_tables(&self) -> bool {
        self.mul_table.is_some()
    }

    /// Additive generators of the ring.
    pub fn generators(&self) -> &[u32] {
        &self.generators
    }

    pub fn is_opposite(&self) -> bool {
        self.opposite
    }

    /// The same elements with the product reversed.
    pub fn opposite(&self) -> FiniteRing {
        let mut r = FiniteRing {
            group: self.group.clone(),
            fg: self.fg.clone(),
            space: self.space.clone(),
            slots: self.slots.clone(),
            images: self.images.clone(),
            size: self.size,
            zero: self.zero,
            one: self.one,
            generators: self.generators.clone(),
            opposite: !self.opposite,
            add_table: self.add_table.clone(),
            mul_table: None,
        };
        r.build_tables();
        r
    }

    /// The endomorphism behind element `a`.
    pub fn element(&self, a: u32) -> Morphism {
        self.space.morphism_at(a as u64)
    }

    pub fn index_of(&self, f: &Morphism) -> Result<u32> {
        Ok(self.space.index_of(f)? as u32)
    }

    fn imgs(&self, a: u32) -> &[u32] {
        let r = self.fg.rank();
        &self.images[a as usize * r..(a as usize + 1) * r]
    }

    /// Recovers the enumeration index from generator images.
    fn index_of_images(&self, imgs: &[u32]) -> u32 {
        let mut idx = 0u64;
        for &(row, col, step, order) in &self.slots {
            let d = self.fg.digit(imgs[col], row);
            debug_assert_eq!(d % step, 0);
            idx = idx * order + d / step;
        }
        idx as u32
    }

    fn add_raw(&self, a: u32, b: u32) -> u32 {
        let (x, y) = (self.imgs(a), self.imgs(b));
        let s: Vec<u32> = x.iter().zip(y).map(|(&u, &v)| self.fg.add(u, v)).collect();
        self.index_of_images(&s)
    }

    fn compose_raw(&self, a: u32, b: u32) -> u32 {
        let (x, y) = (self.imgs(a), self.imgs(b));
        let s: Vec<u32> = y.iter().map(|&v| self.fg.eval(&self.fg, x, v)).collect();
        self.index_of_images(&s)
    }

    fn mul_raw(&self, a: u32, b: u32) -> u32 {
        if self.opposite {
            self.compose_raw(b, a)
        } else {
            self.compose_raw(a, b)
        }
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        match &self.add_table {
            Some(t) => t[a as usize * self.size + b as usize],
            None => self.add_raw(a, b),
        }
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        match &self.mul_table {
            Some(t) => t[a as usize * self.size + b as usize],
            None => self.mul_raw(a, b),
        }
    }

    /// Whether `a * s = 0`, without forming the product.
    fn annihilates(&self, a: u32, s: u32) -> bool {
        if self.mul_table.is_some() {
            return self.mul(a, s) == self.zero;
        }
        let (first, second) = if self.opposite { (s, a) } else { (a, s) };
        let (x, y) = (self.imgs(first), self.imgs(second));
        y.iter().all(|&v| self.fg.eval(&self.fg, x, v) == 0)
    }

    pub fn idempotents(&self) -> Vec<u32> {
        (0..self.size as u32).filter(|&e| self.mul(e, e) == e).collect()
    }

    /// `b e = e b e` for every `b`.
    pub fn is_left_semicentral(&self, e: u32) -> bool {
        self.generators.iter().all(|&b| {
            let be = self.mul(b, e);
            be == self.mul(e, be)
        })
    }

    /// `e b = e b e` for every `b`.
    pub fn is_right_semicentral(&self, e: u32) -> bool {
        self.generators.iter().all(|&b| {
            let eb = self.mul(e, b);
            eb == self.mul(eb, e)
        })
    }

    /// Checks the ring axioms. Unit and zero laws are checked on every
    /// element; the multilinear laws on all triples up to 256 elements and on
    /// triples of additive generators above that.
    pub fn check_axioms(&self) -> Result<()> {
        let n = self.size as u32;
        let all: Vec<u32> = (0..n).collect();
        let probe: &[u32] = if self.size <= 256 { &all } else { &self.generators };
        let fail = |what: &str| Err(Error::Inconsistent(format!("End({}) violates {what}", self.group)));
        for &a in &all {
            if self.add(a, self.zero) != a || self.mul(a, self.one) != a || self.mul(self.one, a) != a {
                return fail("the unit laws");
            }
            if self.mul(a, self.zero) != self.zero || self.mul(self.zero, a) != self.zero {
                return fail("zero absorption");
            }
        }
        for &a in probe {
            for &b in probe {
                if self.add(a, b) != self.add(b, a) {
                    return fail("commutativity of addition");
                }
                for &c in probe {
                    let ab = self.mul(a, b);
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return fail("associativity");
                    }
                    if self.mul(a, self.add(b, c)) != self.add(ab, self.mul(a, c))
                        || self.mul(self.add(a, b), c) != self.add(self.mul(a, c), self.mul(b, c))
                    {
                        return fail("distributivity");
                    }
                    if self.add(self.add(a, b), c) != self.add(a, self.add(b, c)) {
                        return fail("associativity of addition");
                    }
                }
            }
        }
        Ok(())
    }
}

/// A set of ring elements, sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RightIdeal {
    pub element_indices: Vec<u32>,
}

impl RightIdeal {
    pub fn len(&self) -> usize {
        self.element_indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.element_indices.is_empty()
    }

    pub fn contains(&self, x: u32) -> bool {
        self.element_indices.binary_search(&x).is_ok()
    }

    /// Closed under addition and under right multiplication by the ring.
    pub fn is_closed(&self, ring: &FiniteRing) -> bool {
        self.additively_closed(ring)
            && self.element_indices.iter().all(|&s| {
                ring.generators().iter().all(|&b| self.contains(ring.mul(s, b)))
            })
    }

    /// Grows the additive subgroup generated by the members one cyclic
    /// piece at a time and compares sizes.
    fn additively_closed(&self, ring: &FiniteRing) -> bool {
        let mut span = vec![ring.zero()];
        let mut inside = vec![false; ring.size()];
        inside[ring.zero() as usize] = true;
        for &s in &self.element_indices {
            if inside[s as usize] {
                continue;
            }
            let base = span.clone();
            let mut shift = s;
            while !inside[shift as usize] {
                for &h in &base {
                    let x = ring.add(h, shift);
                    if !inside[x as usize] {
                        inside[x as usize] = true;
                        span.push(x);
                    }
                }
                shift = ring.add(shift, s);
            }
            if span.len() > self.len() {
                return false;
            }
        }
        span.len() == self.len()
    }

    /// Closed under left multiplication by every ring element.
    pub fn is_two_sided(&self, ring: &FiniteRing) -> bool {
        self.element_indices
            .iter()
            .all(|&s| ring.generators().iter().all(|&b| self.contains(ring.mul(b, s))))
    }
}

/// `{s : a s = 0}`.
pub fn right_annihilator(ring: &FiniteRing, a: u32) -> RightIdeal {
    RightIdeal {
        element_indices: (0..ring.size() as u32).filter(|&s| ring.annihilates(a, s)).collect(),
    }
}

/// `e S`.
pub fn principal_right_ideal(ring: &FiniteRing, e: u32) -> RightIdeal {
    let mut v: Vec<u32> = (0..ring.size() as u32).map(|s| ring.mul(e, s)).collect();
    v.sort_unstable();
    v.dedup();
    RightIdeal { element_indices: v }
}

/// The annihilator of `a` depends only on which elements of `M` the
/// endomorphism `a` kills (or, in the opposite ring, which it reaches).
fn annihilator_key(ring: &FiniteRing, a: u32, values: &mut Vec<u32>) -> Bits {
    let fg = &ring.fg;
    if ring.opposite {
        return fg.span(ring.imgs(a));
    }
    fg.eval_all(fg, ring.imgs(a), values);
    let mut b = Bits::new(fg.order);
    for (x, &v) in values.iter().enumerate() {
        if v == 0 {
            b.insert(x as u32);
        }
    }
    b
}

/// `S` is a strongly self-Rickart module over itself: every right
/// annihilator is `e S` for an idempotent `e` and is a two-sided ideal.
/// On the opposite ring this is the left-module version.
pub fn is_strongly_self_rickart_ring(ring: &FiniteRing) -> PropertyReport {
    let mut report = PropertyReport::new(Property::StronglySelfRickartRing, vec![ring.group.clone()]);
    if ring.opposite {
        report.notes.push("opposite ring".into());
    }
    let idempotents = ring.idempotents();
    let mut memo: HashMap<Bits, Option<String>> = HashMap::new();
    let mut values = Vec::new();
    for a in 0..ring.size() as u32 {
        report.work += 1;
        let key = annihilator_key(ring, a, &mut values);
        let verdict = memo
            .entry(key)
            .or_insert_with(|| {
                let r = right_annihilator(ring, a);
                debug_assert!(r.is_closed(ring));
                let generated = idempotents.iter().any(|&e| {
                    r.contains(e) && r.element_indices.iter().all(|&s| ring.mul(e, s) == s)
                });
                if !generated {
                    Some(format!("annihilator of size {} is not generated by an idempotent", r.len()))
                } else if !r.is_two_sided(ring) {
                    Some("annihilator is not closed under left multiplication".to_string())
                } else {
                    None
                }
            })
            .clone();
        if let Some(reason) = verdict {
            report.fail(ring.element(a), reason);
            break;
        }
    }
    report.notes.push(format!("{} idempotents, {} distinct annihilators", idempotents.len(), memo.len()));
    report
}

/// Independent computations of the two equivalences relating `M` and its
/// endomorphism ring, one per side.
#[derive(Debug, Clone, Serialize)]
pub struct EndEquivalence {
    pub group: FgAbGroup,
    pub ring_size: usize,
    /// `M` is strongly self-Rickart, decided on the module side.
    pub module_side: bool,
    /// `End(M)` is strongly self-Rickart as a right module over itself.
    pub ring_condition: bool,
    /// Every kernel of an endomorphism is an image of `M`.
    pub kernels_m_cyclic: bool,
    pub k_quasi_retractable: bool,
    /// Ring condition and M-cyclic kernels.
    pub condition_ii: bool,
    /// Ring condition and k-quasi-retractable.
    pub condition_v: bool,
    pub agree: bool,
    /// `M` is dual strongly self-Rickart, decided on the module side.
    pub dual_module_side: bool,
    /// `End(M)` is strongly self-Rickart as a left module over itself.
    pub left_ring_condition: bool,
    /// Every cokernel of an endomorphism embeds in `M`.
    pub cokernels_m_cocyclic: bool,
    pub c_quasi_coretractable: bool,
    pub dual_condition_ii: bool,
    pub dual_condition_v: bool,
    pub dual_agree: bool,
}

pub fn verify_t1_end(m: &FgAbGroup, budget: u64) -> Result<EndEquivalence> {
    let opts = Options::with_budget(budget);
    let ring = end_ring(m, budget)?;
    if ring.has_tables() {
        ring.check_axioms()?;
    }
    let module_side = is_strongly_rickart(m, m, &opts)?.holds;
    let ring_condition = is_strongly_self_rickart_ring(&ring).holds;
    let kernels_m_cyclic = kernels_are_m_cyclic(&ring, budget)?;
    let k_quasi_retractable = is_k_quasi_retractable(m, &opts)?.holds;
    let condition_ii = ring_condition && kernels_m_cyclic;
    let condition_v = ring_condition && k_quasi_retractable;

    let dual_module_side = is_dual_strongly_rickart(m, m, &opts)?.holds;
    let left_ring_condition = is_strongly_self_rickart_ring(&ring.opposite()).holds;
    let cokernels_m_cocyclic = cokernels_are_m_cocyclic(&ring, budget)?;
    let c_quasi_coretractable = is_c_quasi_coretractable(m, &opts)?.holds;
    let dual_condition_ii = left_ring_condition && cokernels_m_cocyclic;
    let dual_condition_v = left_ring_condition && c_quasi_coretractable;
    Ok(EndEquivalence {
        group: m.clone(),
        ring_size: ring.size(),
        module_side,
        ring_condition,
        kernels_m_cyclic,
        k_quasi_retractable,
        condition_ii,
        condition_v,
        agree: module_side == condition_ii && module_side == condition_v,
        dual_module_side,
        left_ring_condition,
        cokernels_m_cocyclic,
        c_quasi_coretractable,
        dual_condition_ii,
        dual_condition_v,
        dual_agree: dual_module_side == dual_condition_ii && dual_module_side == dual_condition_v,
    })
}

fn kernels_are_m_cyclic(ring: &FiniteRing, budget: u64) -> Result<bool> {
    let fg = &ring.fg;
    let mut seen: HashMap<Bits, bool> = HashMap::new();
    let mut values = Vec::new();
    for a in 0..ring.size() as u32 {
        fg.eval_all(fg, ring.imgs(a), &mut values);
        let mut b = Bits::new(fg.order);
        for (x, &v) in values.iter().enumerate() {
            if v == 0 {
                b.insert(x as u32);
            }
        }
        if seen.contains_key(&b) {
            continue;
        }
        let k = Subobject::from_bits(&ring.group, fg, &b)?;
        let ok = exists_epimorphism(&ring.group, k.group(), budget)?;
        seen.insert(b, ok);
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

fn cokernels_are_m_cocyclic(ring: &FiniteRing, budget: u64) -> Result<bool> {
    let fg = &ring.fg;
    let mut seen: HashMap<Bits, bool> = HashMap::new();
    for a in 0..ring.size() as u32 {
        let b = fg.span(ring.imgs(a));
        if seen.contains_key(&b) {
            continue;
        }
        let (q, _) = quotient(&Subobject::from_bits(&ring.group, fg, &b)?)?;
        let ok = exists_monomorphism(&q, &ring.group, budget)?;
        seen.insert(b, ok);
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}
