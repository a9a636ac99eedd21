use std::collections::HashMap;

use super::{is_strongly_rickart, Property, PropertyReport};
use crate::error::Result;
use crate::finite::{fin_group, Bits};
use crate::group::{direct_sum_all, FgAbGroup};
use crate::hom::{cokernel, enumerate_homs, hom_group, kernel, Morphism};
use crate::options::Options;

/// For every endomorphism with a nonzero kernel, `Hom(M, Ker f)` is nonzero.
pub fn is_k_quasi_retractable(m: &FgAbGroup, opts: &Options) -> Result<PropertyReport> {
    scan_endomorphisms(m, opts, Property::KQuasiRetractable, |f| {
        let k = kernel(f)?;
        if k.is_zero() {
            return Ok(None);
        }
        Ok(hom_group(m, k.group())
            .is_zero()
            .then(|| format!("kernel {} receives no nonzero map from {m}", k.group())))
    })
}

/// For every endomorphism with a nonzero cokernel, `Hom(Coker f, M)` is nonzero.
pub fn is_c_quasi_coretractable(m: &FgAbGroup, opts: &Options) -> Result<PropertyReport> {
    scan_endomorphisms(m, opts, Property::CQuasiCoretractable, |f| {
        let (q, _) = cokernel(f)?;
        if q.is_zero() {
            return Ok(None);
        }
        Ok(hom_group(&q, m)
            .is_zero()
            .then(|| format!("cokernel {q} has no nonzero map into {m}")))
    })
}

/// Runs `verdict` once per distinct kernel, or per distinct image for the
/// cokernel property.
fn scan_endomorphisms(
    m: &FgAbGroup,
    opts: &Options,
    property: Property,
    verdict: impl Fn(&Morphism) -> Result<Option<String>>,
) -> Result<PropertyReport> {
    let mut report = PropertyReport::new(property, vec![m.clone()]);
    let space = enumerate_homs(m, m, opts.budget)?;
    let Ok(fg) = fin_group(m) else {
        for f in space.iter() {
            report.work += 1;
            if let Some(reason) = verdict(&f)? {
                report.fail(f, reason);
                break;
            }
        }
        return Ok(report);
    };
    let mut memo: HashMap<Bits, Option<String>> = HashMap::new();
    let mut values = Vec::with_capacity(fg.order);
    let mut scan = space.scanner(&fg, &fg);
    while let Some((idx, imgs)) = scan.current() {
        report.work += 1;
        let key = match property {
            Property::KQuasiRetractable => {
                fg.eval_all(&fg, imgs, &mut values);
                let mut b = Bits::new(fg.order);
                for (x, &v) in values.iter().enumerate() {
                    if v == 0 {
                        b.insert(x as u32);
                    }
                }
                b
            }
            _ => fg.span(imgs),
        };
        let v = match memo.get(&key) {
            Some(v) => v.clone(),
            None => {
                let v = verdict(&space.morphism_at(idx))?;
                memo.insert(key, v.clone());
                v
            }
        };
        if let Some(reason) = v {
            report.fail(space.morphism_at(idx), reason);
            break;
        }
        scan.advance();
    }
    report.notes.push(format!("{} distinct subgroups examined", memo.len()));
    Ok(report)
}

/// Compares "`N_1 + ... + N_k` is strongly `M`-Rickart" with "each `N_i` is
/// strongly `M`-Rickart". The report holds when the two sides agree.
pub fn closure_check_direct_sum(
    m: &FgAbGroup,
    parts: &[FgAbGroup],
    opts: &Options,
) -> Result<PropertyReport> {
    let sum = direct_sum_all(parts);
    let mut subject = vec![m.clone()];
    subject.extend(parts.iter().cloned());
    let mut report = PropertyReport::new(Property::DirectSumClosure, subject);
    let lhs = is_strongly_rickart(m, &sum, opts)?;
    report.work += lhs.work;
    let mut rhs = true;
    let mut rhs_witness = None;
    for n in parts {
        let r = is_strongly_rickart(m, n, opts)?;
        report.work += r.work;
        if !r.holds {
            rhs = false;
            rhs_witness = r.witness;
            break;
        }
    }
    report.notes.push(format!("direct sum {sum}: {}", lhs.holds));
    report.notes.push(format!("every summand: {rhs}"));
    if lhs.holds != rhs {
        let witness = lhs.witness.or(rhs_witness).unwrap_or_else(|| Morphism::zero(m, &sum));
        report.fail(witness, "the direct sum and its summands disagree");
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> FgAbGroup {
        s.parse().unwrap()
    }

    fn opts() -> Options {
        Options::with_budget(1 << 20)
    }

    /// Definition-level oracle: nonzero `g` with `f g = 0` for every
    /// endomorphism `f` that is not injective.
    fn oracle_k(m: &FgAbGroup) -> bool {
        let all: Vec<Morphism> = enumerate_homs(m, m, 1 << 20).unwrap().iter().collect();
        all.iter().filter(|f| !f.is_injective().unwrap()).all(|f| {
            all.iter().any(|h| {
                !h.is_zero() && crate::hom::compose(f, h).unwrap().is_zero()
            })
        })
    }

    fn oracle_c(m: &FgAbGroup) -> bool {
        let all: Vec<Morphism> = enumerate_homs(m, m, 1 << 20).unwrap().iter().collect();
        all.iter().filter(|f| !f.is_surjective().unwrap()).all(|f| {
            all.iter().any(|h| {
                !h.is_zero() && crate::hom::compose(h, f).unwrap().is_zero()
            })
        })
    }

    #[test]
    fn finite_groups_are_both() {
        for m in crate::group::enumerate_groups(16) {
            let k = is_k_quasi_retractable(&m, &opts()).unwrap();
            let c = is_c_quasi_coretractable(&m, &opts()).unwrap();
            if m.order_u64().unwrap() <= 8 {
                assert_eq!(k.holds, oracle_k(&m), "{m}");
                assert_eq!(c.holds, oracle_c(&m), "{m}");
            }
            assert!(k.holds && c.holds, "{m}");
        }
    }

    #[test]
    fn closure_examples() {
        let z2 = g("Z/2");
        let r = closure_check_direct_sum(&z2, &[g("Z/2"), g("Z/3")], &opts()).unwrap();
        assert!(r.holds);
        let r = closure_check_direct_sum(&g("Z/4"), &[g("Z/2"), g("Z/2")], &opts()).unwrap();
        assert!(r.holds, "{r:?}");
    }
}
