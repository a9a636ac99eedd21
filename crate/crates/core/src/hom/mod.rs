//! Morphisms between finitely generated abelian groups and the Hom groups
//! they live in.

mod diagram;
mod invariance;
mod solve;
mod split;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finite::FinGroup;
use crate::group::{reduce, Cardinality, FgAbGroup, GroupElement};
use crate::matrix::IntegerMatrix;

pub use diagram::{
    coimage, cokernel, factorize, image, kernel, quotient, subgroups, Factorization, Subobject,
};
pub use invariance::{
    exists_epimorphism, exists_epimorphism_exhaustive, exists_epimorphism_structural,
    exists_monomorphism, exists_monomorphism_exhaustive, exists_monomorphism_structural,
    is_fully_coinvariant, is_fully_invariant, is_fully_invariant_elementwise,
    is_fully_invariant_structural, is_fully_invariant_with, validate_epimorphism_criterion,
};
pub use solve::{extend_along, integer_kernel, lift_through};
pub use split::{
    is_retraction, is_retraction_checked, is_retraction_exhaustive, is_section,
    is_section_checked, is_section_exhaustive,
};

/// A homomorphism `source -> target`. Column `j` of the matrix holds the
/// image of the `j`-th canonical generator of the source in target
/// coordinates; torsion rows are reduced modulo their modulus.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Morphism {
    source: FgAbGroup,
    target: FgAbGroup,
    matrix: IntegerMatrix,
}

impl Morphism {
    /// Checks dimensions and well-definedness, then reduces the entries.
    pub fn new(source: FgAbGroup, target: FgAbGroup, mut matrix: IntegerMatrix) -> Result<Self> {
        if matrix.rows() != target.rank() || matrix.cols() != source.rank() {
            return Err(Error::InvalidMorphism(format!(
                "matrix is {}x{} but {} -> {} needs {}x{}",
                matrix.rows(),
                matrix.cols(),
                source,
                target,
                target.rank(),
                source.rank()
            )));
        }
        let sm = source.moduli();
        let tm = target.moduli();
        for (i, e) in tm.iter().enumerate() {
            for (j, d) in sm.iter().enumerate() {
                let a = reduce(&matrix[(i, j)], e);
                if !d.is_zero() && !reduce(&(&a * d), e).is_zero() {
                    return Err(Error::InvalidMorphism(format!(
                        "generator {j} of {source} has order {d} but its image has a coordinate {a} of larger order"
                    )));
                }
                matrix[(i, j)] = a;
            }
        }
        Ok(Morphism {
            source,
            target,
            matrix,
        })
    }

    pub fn identity(g: &FgAbGroup) -> Self {
        Morphism {
            source: g.clone(),
            target: g.clone(),
            matrix: IntegerMatrix::identity(g.rank()),
        }
    }

    pub fn zero(source: &FgAbGroup, target: &FgAbGroup) -> Self {
        Morphism {
            source: source.clone(),
            target: target.clone(),
            matrix: IntegerMatrix::zeros(target.rank(), source.rank()),
        }
    }

    /// Multiplication by `k` on `g`.
    pub fn scalar(g: &FgAbGroup, k: i64) -> Self {
        let mut m = IntegerMatrix::identity(g.rank());
        for i in 0..g.rank() {
            m[(i, i)] = BigInt::from(k);
        }
        Morphism::new(g.clone(), g.clone(), m).expect("scalar maps are well defined")
    }

    /// The map sending generator `j` of the source to `images[j]`.
    pub fn from_images(
        source: &FgAbGroup,
        target: &FgAbGroup,
        images: &[GroupElement],
    ) -> Result<Self> {
        if images.len() != source.rank() {
            return Err(Error::InvalidMorphism(format!(
                "{} images given for {} generators",
                images.len(),
                source.rank()
            )));
        }
        if images.iter().any(|e| e.coordinates.len() != target.rank()) {
            return Err(Error::InvalidMorphism("image has the wrong length".into()));
        }
        let cols: Vec<Vec<BigInt>> = images.iter().map(|e| e.coordinates.clone()).collect();
        Morphism::new(
            source.clone(),
            target.clone(),
            IntegerMatrix::from_columns(target.rank(), &cols),
        )
    }

    pub fn source(&self) -> &FgAbGroup {
        &self.source
    }

    pub fn target(&self) -> &FgAbGroup {
        &self.target
    }

    pub fn matrix(&self) -> &IntegerMatrix {
        &self.matrix
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    pub fn is_endomorphism(&self) -> bool {
        self.source == self.target
    }

    pub fn apply(&self, x: &GroupElement) -> GroupElement {
        let y = self.matrix.mul_vec(&x.coordinates);
        self.target.element(y).expect("dimensions checked")
    }

    pub fn add(&self, other: &Morphism) -> Result<Morphism> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::InvalidMorphism("sum of maps with different ends".into()));
        }
        let mut m = self.matrix.clone();
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                m[(i, j)] += &other.matrix[(i, j)];
            }
        }
        Morphism::new(self.source.clone(), self.target.clone(), m)
    }

    pub fn negate(&self) -> Morphism {
        let mut m = self.matrix.clone();
        for i in 0..m.rows() {
            m.negate_row(i);
        }
        Morphism::new(self.source.clone(), self.target.clone(), m).expect("negation is well defined")
    }

    pub fn sub(&self, other: &Morphism) -> Result<Morphism> {
        self.add(&other.negate())
    }

    /// Injective iff the kernel is trivial.
    pub fn is_injective(&self) -> Result<bool> {
        Ok(kernel(self)?.group().is_zero())
    }

    pub fn is_surjective(&self) -> Result<bool> {
        Ok(cokernel(self)?.0.is_zero())
    }

    pub(crate) fn generator_images(&self, target: &FinGroup) -> Vec<u32> {
        (0..self.source.rank())
            .map(|j| {
                let e = GroupElement {
                    coordinates: self.matrix.column(j),
                };
                target.index_of(&e)
            })
            .collect()
    }
}

/// `g . f`
pub fn compose(g: &Morphism, f: &Morphism) -> Result<Morphism> {
    if f.target != g.source {
        return Err(Error::SourceTargetMismatch {
            left: f.target.to_string(),
            right: g.source.to_string(),
        });
    }
    Morphism::new(f.source.clone(), g.target.clone(), g.matrix.mul(&f.matrix))
}

impl fmt::Debug for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Morphism({} -> {}: {})", self.source, self.target, self.matrix)
    }
}

impl fmt::Display for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {} {}", self.source, self.target, self.matrix)
    }
}

#[derive(Serialize, Deserialize)]
struct MorphismRepr {
    source: FgAbGroup,
    target: FgAbGroup,
    #[serde(with = "crate::serde_int::nested")]
    matrix: Vec<Vec<BigInt>>,
}

impl Serialize for Morphism {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MorphismRepr {
            source: self.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.to_rows(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Morphism {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = MorphismRepr::deserialize(d)?;
        let cols = r.source.rank();
        if r.matrix.len() != r.target.rank() {
            return Err(serde::de::Error::custom(format!(
                "matrix has {} rows, target {} needs {}",
                r.matrix.len(),
                r.target,
                r.target.rank()
            )));
        }
        let m = IntegerMatrix::from_rows(&r.matrix, cols)
            .ok_or_else(|| serde::de::Error::custom("matrix rows have the wrong length"))?;
        Morphism::new(r.source, r.target, m).map_err(serde::de::Error::custom)
    }
}

/// One cyclic summand of Hom(M, N): a single matrix entry stepping by `step`.
#[derive(Debug, Clone)]
pub(crate) struct HomSlot {
    pub row: usize,
    pub col: usize,
    pub step: BigInt,
    /// `None` for an infinite cyclic summand.
    pub order: Option<BigInt>,
}

/// Hom(M, N) as an abelian group: every morphism is uniquely
/// `sum_i c_i * generators[i]` with `0 <= c_i < generator_orders[i]`.
#[derive(Debug, Clone, Serialize)]
pub struct HomGroupDescription {
    pub source: FgAbGroup,
    pub target: FgAbGroup,
    pub generators: Vec<Morphism>,
    pub generator_orders: Vec<Cardinality>,
    pub size: Cardinality,
    #[serde(skip)]
    pub(crate) slots: Vec<HomSlot>,
}

pub fn hom_group(m: &FgAbGroup, n: &FgAbGroup) -> HomGroupDescription {
    let sm = m.moduli();
    let tm = n.moduli();
    let mut slots = Vec::new();
    for (col, d) in sm.iter().enumerate() {
        for (row, e) in tm.iter().enumerate() {
            let slot = match (d.is_zero(), e.is_zero()) {
                (true, true) => Some((BigInt::one(), None)),
                (true, false) => Some((BigInt::one(), Some(e.clone()))),
                (false, true) => None,
                (false, false) => {
                    let g = d.gcd(e);
                    Some((e / &g, Some(g)))
                }
            };
            if let Some((step, order)) = slot {
                if order.as_ref().is_some_and(One::is_one) {
                    continue;
                }
                slots.push(HomSlot {
                    row,
                    col,
                    step,
                    order,
                });
            }
        }
    }
    let generators = slots
        .iter()
        .map(|s| {
            let mut mat = IntegerMatrix::zeros(n.rank(), m.rank());
            mat[(s.row, s.col)] = s.step.clone();
            Morphism {
                source: m.clone(),
                target: n.clone(),
                matrix: mat,
            }
        })
        .collect();
    let generator_orders: Vec<Cardinality> = slots
        .iter()
        .map(|s| match &s.order {
            Some(o) => Cardinality::Finite(o.magnitude().clone()),
            None => Cardinality::Infinite,
        })
        .collect();
    let size = if generator_orders.iter().any(Cardinality::is_infinite) {
        Cardinality::Infinite
    } else {
        Cardinality::Finite(
            generator_orders
                .iter()
                .filter_map(|c| c.finite().cloned())
                .product(),
        )
    };
    HomGroupDescription {
        source: m.clone(),
        target: n.clone(),
        generators,
        generator_orders,
        size,
        slots,
    }
}

impl HomGroupDescription {
    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    /// The enumerable space of morphisms, if finite and within `budget`.
    pub fn space(&self, budget: u64) -> Result<HomSpace> {
        let size = match &self.size {
            Cardinality::Infinite => {
                return Err(Error::InfiniteHomSet {
                    source_group: self.source.to_string(),
                    target: self.target.to_string(),
                })
            }
            Cardinality::Finite(n) => n,
        };
        let what = format!("Hom({}, {})", self.source, self.target);
        match size.to_u64() {
            Some(s) if s <= budget => Ok(HomSpace {
                desc: self.clone(),
                orders: self
                    .slots
                    .iter()
                    .map(|s| {
                        s.order
                            .as_ref()
                            .and_then(ToPrimitive::to_u64)
                            .expect("finite order fits since the product does")
                    })
                    .collect(),
                size: s,
            }),
            _ => Err(Error::budget(what, size, budget)),
        }
    }

    /// Coefficients of `f` in terms of the generators.
    pub fn coefficients(&self, f: &Morphism) -> Result<Vec<BigInt>> {
        if f.source != self.source || f.target != self.target {
            return Err(Error::InvalidMorphism("morphism is not in this Hom group".into()));
        }
        let mut out = Vec::with_capacity(self.slots.len());
        for s in &self.slots {
            let a = &f.matrix[(s.row, s.col)];
            let (q, r) = a.div_rem(&s.step);
            debug_assert!(r.is_zero(), "well-defined entries are multiples of the step");
            out.push(match &s.order {
                Some(o) => q.mod_floor(o),
                None => q,
            });
        }
        Ok(out)
    }
}

/// A finite Hom set with a fixed enumeration order. Morphism `i` has
/// coefficient vector equal to the mixed-radix digits of `i`, last
/// generator varying fastest. Ranges can be enumerated independently.
#[derive(Debug, Clone)]
pub struct HomSpace {
    desc: HomGroupDescription,
    orders: Vec<u64>,
    size: u64,
}

impl HomSpace {
    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn description(&self) -> &HomGroupDescription {
        &self.desc
    }

    pub fn coefficients_at(&self, mut index: u64) -> Vec<u64> {
        let mut c = vec![0; self.orders.len()];
        for k in (0..self.orders.len()).rev() {
            c[k] = index % self.orders[k];
            index /= self.orders[k];
        }
        c
    }

    pub fn index_of(&self, f: &Morphism) -> Result<u64> {
        let coeffs = self.desc.coefficients(f)?;
        let mut idx = 0u64;
        for (c, &o) in coeffs.iter().zip(&self.orders) {
            idx = idx * o + c.to_u64().expect("reduced coefficient");
        }
        Ok(idx)
    }

    pub fn morphism_at(&self, index: u64) -> Morphism {
        assert!(index < self.size, "index out of range");
        let coeffs = self.coefficients_at(index);
        let m = &self.desc;
        let mut mat = IntegerMatrix::zeros(m.target.rank(), m.source.rank());
        for (s, c) in m.slots.iter().zip(coeffs) {
            mat[(s.row, s.col)] = &s.step * c;
        }
        Morphism {
            source: m.source.clone(),
            target: m.target.clone(),
            matrix: mat,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = Morphism> + '_ {
        self.iter_range(0..self.size)
    }

    pub fn iter_range(&self, range: std::ops::Range<u64>) -> impl Iterator<Item = Morphism> + '_ {
        range.map(|i| self.morphism_at(i))
    }

    /// Fast scan over generator-image tables; both groups must be finite.
    pub(crate) fn scanner<'a>(&self, src: &'a FinGroup, tgt: &'a FinGroup) -> HomScanner<'a> {
        let deltas = self
            .desc
            .slots
            .iter()
            .map(|s| {
                let step = s.step.to_u64().expect("step below modulus");
                (s.col, step as usize * tgt.strides[s.row])
            })
            .collect();
        HomScanner {
            _groups: std::marker::PhantomData,
            deltas,
            orders: self.orders.clone(),
            coeffs: vec![0; self.orders.len()],
            images: vec![0; src.rank()],
            index: 0,
            size: self.size,
        }
    }
}

/// Enumerates Hom(M, N).
pub fn enumerate_homs(m: &FgAbGroup, n: &FgAbGroup, budget: u64) -> Result<HomSpace> {
    hom_group(m, n).space(budget)
}

/// Odometer over a finite Hom set, maintaining generator images as element
/// indices of the target.
pub(crate) struct HomScanner<'a> {
    _groups: std::marker::PhantomData<&'a FinGroup>,
    deltas: Vec<(usize, usize)>,
    orders: Vec<u64>,
    coeffs: Vec<u64>,
    images: Vec<u32>,
    index: u64,
    size: u64,
}

impl HomScanner<'_> {
    /// The current morphism's generator images and its index, or `None` when done.
    pub fn current(&self) -> Option<(u64, &[u32])> {
        (self.index < self.size).then_some((self.index, &self.images))
    }

    pub fn advance(&mut self) {
        self.index += 1;
        for k in (0..self.coeffs.len()).rev() {
            let (col, delta) = self.deltas[k];
            self.coeffs[k] += 1;
            if self.coeffs[k] < self.orders[k] {
                self.images[col] += delta as u32;
                return;
            }
            self.coeffs[k] = 0;
            self.images[col] -= ((self.orders[k] - 1) as usize * delta) as u32;
        }
    }
}
