//! Split monomorphisms and split epimorphisms.

use super::solve::{extend_along, lift_through};
use super::{enumerate_homs, Morphism};
use crate::error::{Error, Result};
use crate::finite::{fin_group, FinGroup};
use crate::options::Options;

/// A left inverse of `k`, if one exists.
pub fn is_section(k: &Morphism) -> Result<Option<Morphism>> {
    extend_along(k, &Morphism::identity(k.source()))
}

/// A right inverse of `c`, if one exists.
pub fn is_retraction(c: &Morphism) -> Result<Option<Morphism>> {
    lift_through(c, &Morphism::identity(c.target()))
}

fn span_size(fg: &FinGroup, images: &[u32]) -> usize {
    fg.span(images).len()
}

/// Left inverse found by scanning `Hom(target, source)`.
pub fn is_section_exhaustive(k: &Morphism, budget: u64) -> Result<Option<Morphism>> {
    let (m, n) = (k.source(), k.target());
    let space = enumerate_homs(n, m, budget)?;
    let src = fin_group(m)?;
    let tgt = fin_group(n)?;
    let kimg = k.generator_images(&tgt);
    if span_size(&tgt, &kimg) != src.order {
        return Ok(None);
    }
    let mut scan = space.scanner(&tgt, &src);
    while let Some((idx, p)) = scan.current() {
        if (0..m.rank()).all(|j| tgt.eval(&src, p, kimg[j]) == src.generator(j)) {
            return Ok(Some(space.morphism_at(idx)));
        }
        scan.advance();
    }
    Ok(None)
}

/// Right inverse found by scanning `Hom(target, source)`.
pub fn is_retraction_exhaustive(c: &Morphism, budget: u64) -> Result<Option<Morphism>> {
    let (m, n) = (c.source(), c.target());
    let space = enumerate_homs(n, m, budget)?;
    let src = fin_group(m)?;
    let tgt = fin_group(n)?;
    let cimg = c.generator_images(&tgt);
    if span_size(&tgt, &cimg) != tgt.order {
        return Ok(None);
    }
    let mut scan = space.scanner(&tgt, &src);
    while let Some((idx, s)) = scan.current() {
        if (0..n.rank()).all(|j| src.eval(&tgt, &cimg, s[j]) == tgt.generator(j)) {
            return Ok(Some(space.morphism_at(idx)));
        }
        scan.advance();
    }
    Ok(None)
}

/// Structural answer, cross-checked against the scan in paranoid mode when
/// the scan is feasible.
pub fn is_section_checked(k: &Morphism, opts: &Options) -> Result<Option<Morphism>> {
    let s = is_section(k)?;
    if opts.paranoid {
        cross_check("section", k, s.is_some(), is_section_exhaustive(k, opts.budget))?;
    }
    Ok(s)
}

pub fn is_retraction_checked(c: &Morphism, opts: &Options) -> Result<Option<Morphism>> {
    let s = is_retraction(c)?;
    if opts.paranoid {
        cross_check("retraction", c, s.is_some(), is_retraction_exhaustive(c, opts.budget))?;
    }
    Ok(s)
}

fn cross_check(
    what: &str,
    f: &Morphism,
    structural: bool,
    exhaustive: Result<Option<Morphism>>,
) -> Result<()> {
    match exhaustive {
        Ok(e) if e.is_some() != structural => Err(Error::Inconsistent(format!(
            "{what} test for {f}: structural says {structural}, scan says {}",
            e.is_some()
        ))),
        Err(e) if !e.is_resource_error() => Err(e),
        _ => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FgAbGroup;
    use crate::hom::compose;
    use crate::matrix::IntegerMatrix;

    fn g(s: &str) -> FgAbGroup {
        s.parse().unwrap()
    }

    fn m(src: &str, tgt: &str, rows: &[&[i64]]) -> Morphism {
        Morphism::new(g(src), g(tgt), IntegerMatrix::from_i64(rows)).unwrap()
    }

    #[test]
    fn section_examples() {
        // Z/2 -> Z/2 + Z/3 = Z/6
        let inc = m("Z/2", "Z/2 + Z/3", &[&[3]]);
        let p = is_section(&inc).unwrap().unwrap();
        assert_eq!(compose(&p, &inc).unwrap(), Morphism::identity(&g("Z/2")));
        assert!(is_section_exhaustive(&inc, 100).unwrap().is_some());
        let inc = m("Z/2", "Z/4", &[&[2]]);
        assert!(is_section(&inc).unwrap().is_none());
        assert!(is_section_exhaustive(&inc, 100).unwrap().is_none());
        let id = Morphism::identity(&g("Z/2 + Z/4"));
        assert_eq!(is_section(&id).unwrap().unwrap(), id);
    }

    #[test]
    fn retraction_examples() {
        let proj = m("Z/2 + Z/3", "Z/2", &[&[1]]);
        assert!(is_retraction(&proj).unwrap().is_some());
        assert!(is_retraction_exhaustive(&proj, 100).unwrap().is_some());
        let q = m("Z/4", "Z/2", &[&[1]]);
        assert!(is_retraction(&q).unwrap().is_none());
        assert!(is_retraction_exhaustive(&q, 100).unwrap().is_none());
        let id = Morphism::identity(&g("Z/6"));
        assert!(is_retraction(&id).unwrap().is_some());
    }

    #[test]
    fn paranoid_paths_agree_on_small_groups() {
        let opts = Options::with_budget(1 << 16).paranoid(true);
        let groups = crate::group::enumerate_groups(8);
        for a in &groups {
            for b in &groups {
                for f in enumerate_homs(a, b, 1 << 16).unwrap().iter() {
                    is_section_checked(&f, &opts).unwrap();
                    is_retraction_checked(&f, &opts).unwrap();
                }
            }
        }
    }
}
