//! Element-level engine for finite groups.
//!
//! Elements are indices `0..order` in lexicographic coordinate order (last
//! coordinate fastest), so index 0 is the identity. Morphisms are stored as
//! the indices of the images of the canonical generators. Everything here is
//! a fast mirror of the exact `BigInt` layer and is used by the exhaustive
//! scans.

use std::collections::HashMap;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::group::{bigint_to_u64, FgAbGroup, GroupElement};

/// Groups above this size are refused by the element engine.
pub const MAX_ELEMENTS: usize = 1 << 22;

const ADD_TABLE_LIMIT: usize = 1024;

#[derive(Debug, Clone)]
pub(crate) struct FinGroup {
    pub moduli: Vec<u64>,
    pub strides: Vec<usize>,
    pub order: usize,
    /// For `x >= 1`: `(k, y)` with `x = y + generator_k`.
    steps: Vec<(u8, u32)>,
    add_table: Option<Vec<u32>>,
}

impl FinGroup {
    pub fn new(g: &FgAbGroup) -> Result<Self> {
        if !g.is_finite() {
            return Err(Error::InfiniteGroup(g.to_string()));
        }
        let too_large = || Error::TooLarge(g.to_string());
        let moduli: Vec<u64> = g
            .torsion_factors()
            .iter()
            .map(|d| bigint_to_u64(d).ok_or_else(too_large))
            .collect::<Result<_>>()?;
        let mut order: usize = 1;
        for &m in &moduli {
            order = order
                .checked_mul(usize::try_from(m).map_err(|_| too_large())?)
                .filter(|&o| o <= MAX_ELEMENTS)
                .ok_or_else(too_large)?;
        }
        if moduli.len() > u8::MAX as usize {
            return Err(too_large());
        }
        let mut strides = vec![1usize; moduli.len()];
        for k in (0..moduli.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * moduli[k + 1] as usize;
        }
        let mut steps = Vec::with_capacity(order);
        steps.push((0, 0));
        for x in 1..order {
            // last nonzero digit
            let k = (0..moduli.len())
                .rev()
                .find(|&k| (x / strides[k]) % moduli[k] as usize != 0)
                .expect("nonzero index has a nonzero digit");
            steps.push((k as u8, (x - strides[k]) as u32));
        }
        let mut fg = FinGroup {
            moduli,
            strides,
            order,
            steps,
            add_table: None,
        };
        if order <= ADD_TABLE_LIMIT {
            let mut table = vec![0u32; order * order];
            for a in 0..order {
                for b in 0..order {
                    table[a * order + b] = fg.add_digits(a as u32, b as u32);
                }
            }
            fg.add_table = Some(table);
        }
        Ok(fg)
    }

    pub fn rank(&self) -> usize {
        self.moduli.len()
    }

    pub fn digit(&self, x: u32, k: usize) -> u64 {
        ((x as usize / self.strides[k]) as u64) % self.moduli[k]
    }

    fn add_digits(&self, a: u32, b: u32) -> u32 {
        let mut out = 0usize;
        for k in 0..self.rank() {
            let s = (self.digit(a, k) + self.digit(b, k)) % self.moduli[k];
            out += s as usize * self.strides[k];
        }
        out as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        match &self.add_table {
            Some(t) => t[a as usize * self.order + b as usize],
            None => self.add_digits(a, b),
        }
    }

    pub fn scale(&self, a: u32, c: u64) -> u32 {
        let mut out = 0usize;
        for k in 0..self.rank() {
            let m = self.moduli[k];
            let s = ((self.digit(a, k) as u128 * c as u128) % m as u128) as u64;
            out += s as usize * self.strides[k];
        }
        out as u32
    }


    pub fn generator(&self, k: usize) -> u32 {
        self.strides[k] as u32
    }

    /// Images of every element under the map sending generator `k` to `gimg[k]`.
    pub fn eval_all(&self, target: &FinGroup, gimg: &[u32], out: &mut Vec<u32>) {
        out.clear();
        out.reserve(self.order);
        out.push(0);
        for x in 1..self.order {
            let (k, y) = self.steps[x];
            let v = target.add(out[y as usize], gimg[k as usize]);
            out.push(v);
        }
    }

    /// Image of a single element.
    pub fn eval(&self, target: &FinGroup, gimg: &[u32], x: u32) -> u32 {
        let mut acc = 0u32;
        for k in 0..self.rank() {
            let c = self.digit(x, k);
            if c != 0 {
                acc = target.add(acc, target.scale(gimg[k], c));
            }
        }
        acc
    }

    pub fn to_element(&self, x: u32) -> GroupElement {
        GroupElement {
            coordinates: (0..self.rank())
                .map(|k| BigInt::from(self.digit(x, k)))
                .collect(),
        }
    }

    /// Index of a reduced element of this group.
    pub fn index_of(&self, e: &GroupElement) -> u32 {
        let mut out = 0usize;
        for (k, c) in e.coordinates.iter().enumerate() {
            let c = bigint_to_u64(c).expect("reduced coordinate") % self.moduli[k];
            out += c as usize * self.strides[k];
        }
        out as u32
    }

    /// The subgroup generated by `gens`, as a bitset.
    pub fn span(&self, gens: &[u32]) -> Bits {
        let mut members = vec![0u32];
        let mut bits = Bits::new(self.order);
        bits.insert(0);
        for &g in gens {
            if bits.contains(g) {
                continue;
            }
            // members + <g>
            let base = members.clone();
            let mut step = g;
            while !bits.contains(step) {
                for &m in &base {
                    let v = self.add(m, step);
                    if bits.insert(v) {
                        members.push(v);
                    }
                }
                step = self.add(step, g);
            }
        }
        bits
    }

    /// A generating set of the subgroup `bits`, picked greedily in index order.
    pub fn generators_of(&self, bits: &Bits) -> Vec<u32> {
        let mut gens = Vec::new();
        let mut current = Bits::new(self.order);
        current.insert(0);
        for x in bits.iter() {
            if !current.contains(x) {
                gens.push(x);
                current = self.span(&gens);
            }
        }
        gens
    }
}

/// Shared element engines, built once per group.
pub(crate) fn fin_group(g: &FgAbGroup) -> Result<Arc<FinGroup>> {
    static CACHE: OnceLock<Mutex<HashMap<FgAbGroup, Arc<FinGroup>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(f) = cache.lock().expect("cache poisoned").get(g) {
        return Ok(f.clone());
    }
    let f = Arc::new(FinGroup::new(g)?);
    let mut map = cache.lock().expect("cache poisoned");
    if map.len() > 4096 {
        map.clear();
    }
    Ok(map.entry(g.clone()).or_insert(f).clone())
}

/// A set of element indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Bits {
    words: Vec<u64>,
}

impl Hash for Bits {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.words.hash(state)
    }
}

impl std::borrow::Borrow<[u64]> for Bits {
    fn borrow(&self) -> &[u64] {
        &self.words
    }
}

impl Bits {
    pub fn new(len: usize) -> Self {
        Bits {
            words: vec![0; len.div_ceil(64).max(1)],
        }
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn clear(&mut self) {
        self.words.iter_mut().for_each(|w| *w = 0);
    }

    #[inline]
    pub fn insert(&mut self, x: u32) -> bool {
        let (w, b) = (x as usize / 64, x % 64);
        let fresh = self.words[w] & (1 << b) == 0;
        self.words[w] |= 1 << b;
        fresh
    }

    #[inline]
    pub fn contains(&self, x: u32) -> bool {
        self.words[x as usize / 64] & (1 << (x % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn intersection(&self, other: &Bits) -> Bits {
        Bits {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    pub fn is_subset(&self, other: &Bits) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &word)| {
            let mut word = word;
            std::iter::from_fn(move || {
                if word == 0 {
                    return None;
                }
                let b = word.trailing_zeros();
                word &= word - 1;
                Some(w as u32 * 64 + b)
            })
        })
    }
}
