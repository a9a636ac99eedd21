//! Subobjects, kernels, images, cokernels and coimages.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use super::solve::{extend_along, integer_kernel, lift_through};
use super::{compose, Morphism};
use crate::error::{Error, Result};
use crate::finite::{fin_group, Bits, FinGroup};
use crate::group::{present, FgAbGroup, GroupElement};
use crate::matrix::IntegerMatrix;

/// Subgroups of finite ambients up to this size carry an element set.
const ELEMENT_SET_LIMIT: usize = 1 << 20;

/// A subgroup of `ambient`, given by an injective embedding of its canonical
/// form and, when the ambient is finite and small, by its element set.
#[derive(Clone)]
pub struct Subobject {
    ambient: FgAbGroup,
    group: FgAbGroup,
    embedding: Morphism,
    elements: Option<Bits>,
}

impl Subobject {
    /// The subgroup of `ambient` generated by `gens`.
    pub fn generated_by(ambient: &FgAbGroup, gens: &[GroupElement]) -> Result<Subobject> {
        let n = ambient.rank();
        if let Some(bad) = gens.iter().find(|g| g.coordinates.len() != n) {
            return Err(Error::InvalidGroup(format!(
                "element {bad} does not belong to {ambient}"
            )));
        }
        let cols: Vec<Vec<BigInt>> = gens.iter().map(|g| g.coordinates.clone()).collect();
        let gmat = IntegerMatrix::from_columns(n, &cols);
        let k = gens.len();
        // Relations among the generators: kernel of [G | diag(torsion moduli)].
        let moduli = ambient.moduli();
        let torsion_rows: Vec<usize> = (0..n).filter(|&i| !moduli[i].is_zero()).collect();
        let mut sys = IntegerMatrix::zeros(n, k + torsion_rows.len());
        for i in 0..n {
            for j in 0..k {
                sys[(i, j)] = gmat[(i, j)].clone();
            }
        }
        for (t, &i) in torsion_rows.iter().enumerate() {
            sys[(i, k + t)] = moduli[i].clone();
        }
        let ker = integer_kernel(&sys);
        let relations = ker.select_rows(&(0..k).collect::<Vec<_>>());
        let pres = present(&relations);
        let embedding = Morphism::new(pres.group.clone(), ambient.clone(), gmat.mul(&pres.lift))?;
        let elements = match fin_group(ambient) {
            Ok(fg) if fg.order <= ELEMENT_SET_LIMIT => {
                let idx: Vec<u32> = embedding.generator_images(&fg);
                Some(fg.span(&idx))
            }
            _ => None,
        };
        Ok(Subobject {
            ambient: ambient.clone(),
            group: pres.group,
            embedding,
            elements,
        })
    }

    pub(crate) fn from_bits(ambient: &FgAbGroup, fg: &FinGroup, bits: &Bits) -> Result<Subobject> {
        let gens: Vec<GroupElement> = fg
            .generators_of(bits)
            .into_iter()
            .map(|x| fg.to_element(x))
            .collect();
        Subobject::generated_by(ambient, &gens)
    }

    pub fn zero(ambient: &FgAbGroup) -> Subobject {
        Subobject::generated_by(ambient, &[]).expect("empty generating set")
    }

    pub fn full(ambient: &FgAbGroup) -> Subobject {
        let gens: Vec<GroupElement> = (0..ambient.rank()).map(|i| ambient.generator(i)).collect();
        Subobject::generated_by(ambient, &gens).expect("canonical generators")
    }

    pub fn ambient(&self) -> &FgAbGroup {
        &self.ambient
    }

    pub fn group(&self) -> &FgAbGroup {
        &self.group
    }

    pub fn embedding(&self) -> &Morphism {
        &self.embedding
    }

    pub fn is_zero(&self) -> bool {
        self.group.is_zero()
    }

    pub(crate) fn bits(&self) -> Option<&Bits> {
        self.elements.as_ref()
    }

    /// Sorted element set, when known.
    pub fn element_set(&self) -> Option<Vec<GroupElement>> {
        let fg = fin_group(&self.ambient).ok()?;
        let bits = self.elements.as_ref()?;
        Some(bits.iter().map(|x| fg.to_element(x)).collect())
    }

    pub fn contains(&self, x: &GroupElement) -> Result<bool> {
        if let (Some(bits), Ok(fg)) = (&self.elements, fin_group(&self.ambient)) {
            let reduced = self.ambient.element(x.coordinates.clone())?;
            return Ok(bits.contains(fg.index_of(&reduced)));
        }
        let inc = Morphism::from_images(
            &FgAbGroup::free(1),
            &self.ambient,
            std::slice::from_ref(x),
        )?;
        Ok(lift_through(&self.embedding, &inc)?.is_some())
    }

    /// Same subgroup of the same ambient.
    pub fn same_as(&self, other: &Subobject) -> Result<bool> {
        if self.ambient != other.ambient || self.group != other.group {
            return Ok(false);
        }
        if let (Some(a), Some(b)) = (&self.elements, &other.elements) {
            return Ok(a == b);
        }
        Ok(lift_through(&self.embedding, &other.embedding)?.is_some()
            && lift_through(&other.embedding, &self.embedding)?.is_some())
    }

    pub fn is_subobject_of(&self, other: &Subobject) -> Result<bool> {
        if self.ambient != other.ambient {
            return Ok(false);
        }
        if let (Some(a), Some(b)) = (&self.elements, &other.elements) {
            return Ok(a.is_subset(b));
        }
        Ok(lift_through(&other.embedding, &self.embedding)?.is_some())
    }

    pub fn intersection(&self, other: &Subobject) -> Result<Subobject> {
        if self.ambient != other.ambient {
            return Err(Error::InvalidGroup("subobjects of different groups".into()));
        }
        if let (Some(a), Some(b), Ok(fg)) =
            (&self.elements, &other.elements, fin_group(&self.ambient))
        {
            return Subobject::from_bits(&self.ambient, &fg, &a.intersection(b));
        }
        // Pairs (x, y) with e1 x = e2 y.
        let a = self.embedding.matrix();
        let b = other.embedding.matrix();
        let moduli = self.ambient.moduli();
        let (p, q) = (a.cols(), b.cols());
        let torsion_rows: Vec<usize> = (0..moduli.len()).filter(|&i| !moduli[i].is_zero()).collect();
        let mut sys = IntegerMatrix::zeros(moduli.len(), p + q + torsion_rows.len());
        for i in 0..moduli.len() {
            for j in 0..p {
                sys[(i, j)] = a[(i, j)].clone();
            }
            for j in 0..q {
                sys[(i, p + j)] = -b[(i, j)].clone();
            }
        }
        for (t, &i) in torsion_rows.iter().enumerate() {
            sys[(i, p + q + t)] = moduli[i].clone();
        }
        let ker = integer_kernel(&sys);
        let xs = ker.select_rows(&(0..p).collect::<Vec<_>>());
        let gens: Vec<GroupElement> = (0..xs.cols())
            .map(|c| self.embedding.apply(&GroupElement {
                coordinates: reduce_into(self.embedding.source(), xs.column(c)),
            }))
            .collect();
        Subobject::generated_by(&self.ambient, &gens)
    }

    pub fn sum(&self, other: &Subobject) -> Result<Subobject> {
        if self.ambient != other.ambient {
            return Err(Error::InvalidGroup("subobjects of different groups".into()));
        }
        let mut gens = Vec::new();
        for e in [&self.embedding, &other.embedding] {
            for j in 0..e.source().rank() {
                gens.push(GroupElement {
                    coordinates: e.matrix().column(j),
                });
            }
        }
        Subobject::generated_by(&self.ambient, &gens)
    }
}

fn reduce_into(g: &FgAbGroup, coords: Vec<BigInt>) -> Vec<BigInt> {
    g.element(coords).expect("length matches").coordinates
}

impl PartialEq for Subobject {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other).unwrap_or(false)
    }
}

impl fmt::Debug for Subobject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subobject({} in {}", self.group, self.ambient)?;
        if let Some(b) = &self.elements {
            write!(f, ", {} elements", b.len())?;
        }
        write!(f, ")")
    }
}

impl Serialize for Subobject {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Subobject", 4)?;
        st.serialize_field("ambient", &self.ambient)?;
        st.serialize_field("group", &self.group)?;
        st.serialize_field("embedding", &self.embedding)?;
        st.serialize_field("element_set", &self.element_set())?;
        st.end()
    }
}

/// Every subgroup of a finite group once, by closure of element sets,
/// ordered by size and then by element set.
pub fn subgroups(m: &FgAbGroup) -> Result<Vec<Subobject>> {
    let fg = fin_group(m)?;
    if fg.order > ELEMENT_SET_LIMIT {
        return Err(Error::TooLarge(m.to_string()));
    }
    let zero = fg.span(&[]);
    let mut seen: HashSet<Bits> = HashSet::from([zero.clone()]);
    let mut queue = vec![(Vec::new(), zero)];
    let mut i = 0;
    while i < queue.len() {
        let (gens, bits): (Vec<u32>, Bits) = queue[i].clone();
        i += 1;
        for x in 0..fg.order as u32 {
            if bits.contains(x) {
                continue;
            }
            let mut g = gens.clone();
            g.push(x);
            let b = fg.span(&g);
            if seen.insert(b.clone()) {
                queue.push((g, b));
            }
        }
    }
    let mut all: Vec<Bits> = seen.into_iter().collect();
    all.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    all.iter().map(|b| Subobject::from_bits(m, &fg, b)).collect()
}

/// `{x : f(x) = 0}`.
pub fn kernel(f: &Morphism) -> Result<Subobject> {
    let src = f.source();
    let vecs = kernel_vectors(f);
    let gens: Vec<GroupElement> = (0..vecs.cols())
        .map(|c| GroupElement {
            coordinates: reduce_into(src, vecs.column(c)),
        })
        .collect();
    Subobject::generated_by(src, &gens)
}

/// Integer vectors in source coordinates generating the kernel.
fn kernel_vectors(f: &Morphism) -> IntegerMatrix {
    let (m, n) = (f.source().rank(), f.target().rank());
    let moduli = f.target().moduli();
    let torsion_rows: Vec<usize> = (0..n).filter(|&i| !moduli[i].is_zero()).collect();
    let mut sys = IntegerMatrix::zeros(n, m + torsion_rows.len());
    for i in 0..n {
        for j in 0..m {
            sys[(i, j)] = f.matrix()[(i, j)].clone();
        }
    }
    for (t, &i) in torsion_rows.iter().enumerate() {
        sys[(i, m + t)] = moduli[i].clone();
    }
    integer_kernel(&sys).select_rows(&(0..m).collect::<Vec<_>>())
}

pub fn image(f: &Morphism) -> Result<Subobject> {
    let gens: Vec<GroupElement> = (0..f.source().rank())
        .map(|j| GroupElement {
            coordinates: f.matrix().column(j),
        })
        .collect();
    Subobject::generated_by(f.target(), &gens)
}

/// `ambient / span(columns)` with its natural epimorphism.
fn quotient_by(ambient: &FgAbGroup, columns: &IntegerMatrix) -> Result<(FgAbGroup, Morphism)> {
    let moduli = ambient.moduli();
    let n = ambient.rank();
    let trivial = (0..columns.cols()).all(|j| {
        ambient
            .element(columns.column(j))
            .is_ok_and(|e| e.is_identity())
    });
    if trivial {
        return Ok((ambient.clone(), Morphism::identity(ambient)));
    }
    let torsion_rows: Vec<usize> = (0..n).filter(|&i| !moduli[i].is_zero()).collect();
    let k = columns.cols();
    let mut rel = IntegerMatrix::zeros(n, k + torsion_rows.len());
    for i in 0..n {
        for j in 0..k {
            rel[(i, j)] = columns[(i, j)].clone();
        }
    }
    for (t, &i) in torsion_rows.iter().enumerate() {
        rel[(i, k + t)] = moduli[i].clone();
    }
    let pres = present(&rel);
    let pi = Morphism::new(ambient.clone(), pres.group.clone(), pres.projection)?;
    Ok((pres.group, pi))
}

/// `target / im(f)` with the natural epimorphism.
pub fn cokernel(f: &Morphism) -> Result<(FgAbGroup, Morphism)> {
    quotient_by(f.target(), f.matrix())
}

/// `source / ker(f)` with the natural epimorphism.
pub fn coimage(f: &Morphism) -> Result<(FgAbGroup, Morphism)> {
    quotient_by(f.source(), &kernel_vectors(f))
}

/// `ambient / sub` with the natural epimorphism.
pub fn quotient(sub: &Subobject) -> Result<(FgAbGroup, Morphism)> {
    quotient_by(&sub.ambient, sub.embedding.matrix())
}

/// `f = image.embedding . induced . coimage_map`, with `induced` an isomorphism.
#[derive(Debug, Clone, Serialize)]
pub struct Factorization {
    pub coimage: FgAbGroup,
    pub coimage_map: Morphism,
    pub image: Subobject,
    pub induced: Morphism,
}

pub fn factorize(f: &Morphism) -> Result<Factorization> {
    let (coim, p) = coimage(f)?;
    let im = image(f)?;
    let corestricted = lift_through(im.embedding(), f)?
        .ok_or_else(|| Error::Inconsistent("f does not factor through its image".into()))?;
    let induced = extend_along(&p, &corestricted)?
        .ok_or_else(|| Error::Inconsistent("f does not factor through its coimage".into()))?;
    if compose(im.embedding(), &compose(&induced, &p)?)? != *f {
        return Err(Error::Inconsistent("factorization does not recompose to f".into()));
    }
    if coim != *im.group()
        || !kernel(&induced)?.is_zero()
        || !cokernel(&induced)?.0.is_zero()
    {
        return Err(Error::Inconsistent(
            "induced map from coimage to image is not an isomorphism".into(),
        ));
    }
    Ok(Factorization {
        coimage: coim,
        coimage_map: p,
        image: im,
        induced,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hom::enumerate_homs;

    fn g(s: &str) -> FgAbGroup {
        s.parse().unwrap()
    }

    fn elem(v: &[i64]) -> GroupElement {
        GroupElement {
            coordinates: v.iter().map(|&x| BigInt::from(x)).collect(),
        }
    }

    #[test]
    fn subgroup_counts() {
        // Z/n has one subgroup per divisor; (Z/2)^k has Gaussian-binomial many.
        for (s, n) in [("0", 1), ("Z/12", 6), ("Z/2 + Z/2", 5), ("Z/2^3", 16), ("Z/2 + Z/4", 8), ("Z/4 + Z/4", 15)] {
            let subs = subgroups(&s.parse().unwrap()).unwrap();
            assert_eq!(subs.len(), n, "{s}");
            assert!(subs[0].is_zero());
        }
    }

    #[test]
    fn kernel_and_image_examples() {
        let z4 = g("Z/4");
        assert!(kernel(&Morphism::identity(&z4)).unwrap().is_zero());
        let two = Morphism::scalar(&z4, 2);
        let k = kernel(&two).unwrap();
        assert_eq!(k.group(), &g("Z/2"));
        assert_eq!(k.element_set().unwrap(), vec![elem(&[0]), elem(&[2])]);
        let im = image(&two).unwrap();
        assert_eq!(im.element_set().unwrap(), vec![elem(&[0]), elem(&[2])]);
        let zero = Morphism::zero(&z4, &z4);
        assert!(kernel(&zero).unwrap().same_as(&Subobject::full(&z4)).unwrap());
    }

    #[test]
    fn cokernel_and_coimage_examples() {
        let v = g("Z/2 + Z/6");
        let (c, pi) = cokernel(&Morphism::zero(&v, &v)).unwrap();
        assert_eq!(c, v);
        assert_eq!(pi, Morphism::identity(&v));
        let (ci, p) = coimage(&Morphism::identity(&v)).unwrap();
        assert_eq!(ci, v);
        assert_eq!(p, Morphism::identity(&v));
        let (c, _) = cokernel(&Morphism::scalar(&g("Z"), 6)).unwrap();
        assert_eq!(c, g("Z/6"));
    }

    #[test]
    fn infinite_kernels() {
        // Z^2 -> Z, (a, b) |-> 2a + 4b: kernel Z, image 2Z, cokernel Z/2
        let f = Morphism::new(g("Z^2"), g("Z"), IntegerMatrix::from_i64(&[&[2, 4]])).unwrap();
        assert_eq!(kernel(&f).unwrap().group(), &g("Z"));
        assert_eq!(image(&f).unwrap().group(), &g("Z"));
        assert_eq!(cokernel(&f).unwrap().0, g("Z/2"));
        factorize(&f).unwrap();
        let f = Morphism::new(g("Z + Z/4"), g("Z/8"), IntegerMatrix::from_i64(&[&[1, 2]])).unwrap();
        let fact = factorize(&f).unwrap();
        assert_eq!(fact.image.group(), &g("Z/8"));
        assert_eq!(kernel(&f).unwrap().group(), &g("Z"));
    }

    /// Exactness, factorization and the cokernel universal property, checked
    /// against direct evaluation on every element.
    #[test]
    fn diagram_on_small_groups() {
        let groups = crate::group::enumerate_groups(8);
        for m in &groups {
            let elems: Vec<GroupElement> = m.elements().unwrap().collect();
            for n in &groups {
                for f in enumerate_homs(m, n, 1 << 16).unwrap().iter() {
                    let k = kernel(&f).unwrap();
                    let expected: Vec<GroupElement> =
                        elems.iter().filter(|x| f.apply(x).is_identity()).cloned().collect();
                    assert_eq!(k.element_set().unwrap(), expected);
                    assert!(compose(&f, k.embedding()).unwrap().is_zero());
                    let mut img: Vec<GroupElement> = elems.iter().map(|x| f.apply(x)).collect();
                    img.sort();
                    img.dedup();
                    assert_eq!(image(&f).unwrap().element_set().unwrap(), img);
                    let (c, pi) = cokernel(&f).unwrap();
                    assert_eq!(
                        c.order().to_u64().unwrap() * img.len() as u64,
                        n.order().to_u64().unwrap()
                    );
                    assert!(compose(&pi, &f).unwrap().is_zero());
                    factorize(&f).unwrap();
                }
            }
        }
    }

    #[test]
    fn lattice_operations() {
        let v = g("Z/2 + Z/4");
        let a = Subobject::generated_by(&v, &[elem(&[1, 0])]).unwrap();
        let b = Subobject::generated_by(&v, &[elem(&[0, 1])]).unwrap();
        let c = Subobject::generated_by(&v, &[elem(&[1, 2])]).unwrap();
        assert!(a.intersection(&b).unwrap().is_zero());
        assert_eq!(a.sum(&b).unwrap(), Subobject::full(&v));
        assert_eq!(a.sum(&c).unwrap().group(), &g("Z/2 + Z/2"));
        assert!(!a.is_subobject_of(&b).unwrap());
        assert!(b.contains(&elem(&[0, 2])).unwrap());
        let (q, _) = quotient(&b).unwrap();
        assert_eq!(q, g("Z/2"));
        // Infinite ambient: 2Z and 3Z meet in 6Z.
        let z = g("Z");
        let two = Subobject::generated_by(&z, &[elem(&[2])]).unwrap();
        let three = Subobject::generated_by(&z, &[elem(&[3])]).unwrap();
        let six = Subobject::generated_by(&z, &[elem(&[6])]).unwrap();
        assert!(two.intersection(&three).unwrap().same_as(&six).unwrap());
        assert!(two.sum(&three).unwrap().same_as(&Subobject::full(&z)).unwrap());
    }
}
