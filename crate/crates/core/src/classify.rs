//! Closed-form classification of strongly and dual strongly self-Rickart
//! finitely generated abelian groups, and its audit against the deciders.

use std::fmt;
use std::str::FromStr;

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::arith::{is_prime, is_squarefree, prime_factors};
use crate::error::{Error, Result};
use crate::group::{enumerate_groups, FgAbGroup};
use crate::options::Options;
use crate::rickart::{is_dual_strongly_rickart, is_strongly_rickart, Property};

/// The rule that produced a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reason {
    /// The zero group; both properties hold vacuously.
    DegenerateZero,
    /// `Z`: strongly but not dual strongly self-Rickart.
    InfiniteCyclic,
    /// Free rank one with torsion, or free rank at least two.
    NotCyclicInfinite,
    /// Finite cyclic of squarefree order, i.e. a sum of `Z/p` over distinct primes.
    SquarefreeCyclic,
    /// Finite and not cyclic of squarefree order.
    FiniteNotSquarefree,
    /// A sum of `Z/p` over distinct primes.
    DistinctSimple,
    /// A sum of Prüfer groups over distinct primes.
    DistinctPruefer,
    /// Simple and Prüfer summands mixed.
    MixedKinds,
}

impl Reason {
    pub fn tag(self) -> &'static str {
        match self {
            Reason::DegenerateZero => "degenerate-zero",
            Reason::InfiniteCyclic => "infinite-cyclic",
            Reason::NotCyclicInfinite => "infinite-not-cyclic",
            Reason::SquarefreeCyclic => "squarefree-cyclic",
            Reason::FiniteNotSquarefree => "finite-not-squarefree",
            Reason::DistinctSimple => "distinct-simple",
            Reason::DistinctPruefer => "distinct-pruefer",
            Reason::MixedKinds => "mixed-kinds",
        }
    }
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassificationVerdict {
    pub strongly_self_rickart: bool,
    pub dual_strongly_self_rickart: bool,
    pub reason: Reason,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub symbolic_notes: Vec<String>,
}

impl ClassificationVerdict {
    fn new(strongly: bool, dual: bool, reason: Reason) -> Self {
        ClassificationVerdict {
            strongly_self_rickart: strongly,
            dual_strongly_self_rickart: dual,
            reason,
            symbolic_notes: Vec::new(),
        }
    }

    fn note(mut self, s: impl Into<String>) -> Self {
        self.symbolic_notes.push(s.into());
        self
    }

    /// The verdict for one of the two classified properties.
    pub fn get(&self, p: Property) -> Option<bool> {
        match p {
            Property::StronglyRickart => Some(self.strongly_self_rickart),
            Property::DualStronglyRickart => Some(self.dual_strongly_self_rickart),
            _ => None,
        }
    }
}

/// Predicts both properties of `G` with `G` as its own partner.
pub fn classify(g: &FgAbGroup) -> ClassificationVerdict {
    if g.is_zero() {
        return ClassificationVerdict::new(true, true, Reason::DegenerateZero)
            .note("the trivial group; nonzero hypotheses do not apply");
    }
    match (g.free_rank(), g.torsion_factors()) {
        (1, []) => ClassificationVerdict::new(true, false, Reason::InfiniteCyclic)
            .note("Z/nZ quotients are not summands of Z"),
        (0, [n]) if n.to_u64().is_some_and(is_squarefree) => {
            let primes: Vec<String> = prime_factors(n.to_u64().unwrap_or(1))
                .into_iter()
                .map(|(p, _)| format!("Z/{p}"))
                .collect();
            ClassificationVerdict::new(true, true, Reason::SquarefreeCyclic)
                .note(format!("isomorphic to {}", primes.join(" + ")))
        }
        (0, _) => ClassificationVerdict::new(false, false, Reason::FiniteNotSquarefree),
        _ => ClassificationVerdict::new(false, false, Reason::NotCyclicInfinite),
    }
}

/// Summand kind in a torsion family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    /// `Z/p`.
    Simple,
    /// `Z/p^infinity`; symbolic only.
    Pruefer,
}

impl FromStr for Kind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "simple" => Ok(Kind::Simple),
            "pruefer" | "prufer" | "prüfer" => Ok(Kind::Pruefer),
            _ => Err(Error::Parse {
                pos: 0,
                msg: format!("unknown summand kind `{s}`, expected simple or pruefer"),
            }),
        }
    }
}

/// Classifies a direct sum of `Z/p` and Prüfer groups, one summand per
/// listed prime. Primes must be distinct.
pub fn classify_torsion_family(family: &[(u64, Kind)]) -> Result<ClassificationVerdict> {
    let mut seen = Vec::with_capacity(family.len());
    for &(p, _) in family {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if seen.contains(&p) {
            return Err(Error::DuplicatePrime(p));
        }
        seen.push(p);
    }
    let labels: Vec<String> = family
        .iter()
        .map(|&(p, k)| match k {
            Kind::Simple => format!("Z/{p}"),
            Kind::Pruefer => format!("Z/{p}^inf"),
        })
        .collect();
    let all_simple = family.iter().all(|&(_, k)| k == Kind::Simple);
    let all_pruefer = family.iter().all(|&(_, k)| k == Kind::Pruefer);
    let v = if family.is_empty() {
        ClassificationVerdict::new(true, true, Reason::DegenerateZero)
    } else if all_simple {
        ClassificationVerdict::new(true, true, Reason::DistinctSimple)
    } else if all_pruefer {
        ClassificationVerdict::new(false, true, Reason::DistinctPruefer)
    } else {
        ClassificationVerdict::new(false, false, Reason::MixedKinds)
    };
    Ok(v.note(if labels.is_empty() {
        "0".to_string()
    } else {
        labels.join(" + ")
    }))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Discrepancy {
    pub group: FgAbGroup,
    pub property: Property,
    pub predicted: bool,
    pub computed: bool,
}

/// Runs both exhaustive deciders on every group of order at most
/// `max_order` and lists the disagreements with [`classify`].
pub fn predict_vs_bruteforce(max_order: u64, opts: &Options) -> Result<Vec<Discrepancy>> {
    let mut out = Vec::new();
    for g in enumerate_groups(max_order) {
        let v = classify(&g);
        for (p, computed) in [
            (Property::StronglyRickart, is_strongly_rickart(&g, &g, opts)?.holds),
            (Property::DualStronglyRickart, is_dual_strongly_rickart(&g, &g, opts)?.holds),
        ] {
            let predicted = v.get(p).expect("classified property");
            if predicted != computed {
                out.push(Discrepancy {
                    group: g.clone(),
                    property: p,
                    predicted,
                    computed,
                });
            }
        }
    }
    Ok(out)
}

/// Primary cyclic decomposition: one `Z` per free summand and one `Z/p^k`
/// per prime power in the torsion factors.
pub fn cyclic_parts(g: &FgAbGroup) -> Vec<FgAbGroup> {
    let mut out = vec![FgAbGroup::free(1); g.free_rank()];
    for d in g.torsion_factors() {
        let d = d.to_u64().expect("torsion factor fits in u64");
        for (p, k) in prime_factors(d) {
            out.push(FgAbGroup::cyclic(p.pow(k)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::direct_sum_all;

    fn g(s: &str) -> FgAbGroup {
        s.parse().unwrap()
    }

    #[test]
    fn examples() {
        let z = classify(&g("Z"));
        assert!(z.strongly_self_rickart && !z.dual_strongly_self_rickart);
        for p in [2, 3, 5] {
            let v = classify(&g(&format!("Z + Z/{p}")));
            assert!(!v.strongly_self_rickart && !v.dual_strongly_self_rickart);
        }
        let v = classify(&g("Z/2 + Z/2"));
        assert!(!v.strongly_self_rickart && !v.dual_strongly_self_rickart);
        let v = classify(&g("Z/30"));
        assert!(v.strongly_self_rickart && v.dual_strongly_self_rickart);
        assert_eq!(v.reason, Reason::SquarefreeCyclic);
        let v = classify(&FgAbGroup::zero());
        assert_eq!(v.reason, Reason::DegenerateZero);
        assert!(v.strongly_self_rickart && v.dual_strongly_self_rickart);
    }

    #[test]
    fn torsion_families() {
        let v = classify_torsion_family(&[(2, Kind::Simple), (3, Kind::Simple)]).unwrap();
        assert!(v.strongly_self_rickart && v.dual_strongly_self_rickart);
        let v = classify_torsion_family(&[(2, Kind::Pruefer)]).unwrap();
        assert!(!v.strongly_self_rickart && v.dual_strongly_self_rickart);
        let v = classify_torsion_family(&[(2, Kind::Pruefer), (3, Kind::Simple)]).unwrap();
        assert!(!v.strongly_self_rickart && !v.dual_strongly_self_rickart);
        assert_eq!(
            classify_torsion_family(&[(2, Kind::Simple), (2, Kind::Simple)]),
            Err(Error::DuplicatePrime(2))
        );
        assert_eq!(classify_torsion_family(&[(4, Kind::Simple)]), Err(Error::NotPrime(4)));
    }

    /// Sums of `Z/p` over distinct primes are exactly the cyclic groups of
    /// squarefree order.
    #[test]
    fn distinct_primes_give_squarefree_cyclic() {
        for n in 1..=100u64 {
            let parts: Vec<FgAbGroup> = prime_factors(n)
                .into_iter()
                .map(|(p, _)| FgAbGroup::cyclic(p))
                .collect();
            let sum = direct_sum_all(&parts);
            let cyclic_n = FgAbGroup::cyclic(n);
            assert_eq!(sum == cyclic_n, is_squarefree(n), "{n}");
            if is_squarefree(n) {
                let family: Vec<(u64, Kind)> =
                    prime_factors(n).into_iter().map(|(p, _)| (p, Kind::Simple)).collect();
                let a = classify_torsion_family(&family).unwrap();
                let b = classify(&cyclic_n);
                assert_eq!(
                    (a.strongly_self_rickart, a.dual_strongly_self_rickart),
                    (b.strongly_self_rickart, b.dual_strongly_self_rickart)
                );
            }
        }
    }

    #[test]
    fn audit_small() {
        let o = Options::default();
        assert!(predict_vs_bruteforce(1, &o).unwrap().is_empty());
        assert!(predict_vs_bruteforce(16, &o).unwrap().is_empty());
    }

    #[test]
    fn cyclic_parts_recompose() {
        for s in ["Z/12", "Z + Z/2 + Z/6", "0", "Z/2 + Z/4 + Z/9"] {
            let x = g(s);
            let parts = cyclic_parts(&x);
            assert!(parts.iter().all(FgAbGroup::is_indecomposable));
            assert_eq!(direct_sum_all(&parts), x);
        }
    }
}
