use std::fmt;

use serde::Serialize;

use crate::classify::{classify, ClassificationVerdict, Reason};
use crate::error::{Error, Result};
use crate::group::FgAbGroup;
use crate::hom::{hom_group, Morphism};
use crate::options::Options;
use crate::rickart::{decide, Property};

#[derive(Debug, Clone, Serialize)]
pub struct DossierEntry {
    pub property: Property,
    /// `None` when the decider does not apply or ran out of budget.
    pub holds: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Morphism>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Everything known about one group.
#[derive(Debug, Clone, Serialize)]
pub struct Dossier {
    pub group: FgAbGroup,
    pub order: String,
    pub endomorphisms: String,
    pub verdicts: Vec<DossierEntry>,
    pub classification: ClassificationVerdict,
    pub clause: &'static str,
}

fn clause(r: Reason) -> &'static str {
    match r {
        Reason::DegenerateZero => "the zero group: both properties hold vacuously",
        Reason::InfiniteCyclic => "Z: strongly self-Rickart, not dual strongly self-Rickart",
        Reason::NotCyclicInfinite => "infinite and not Z: neither property",
        Reason::SquarefreeCyclic => "cyclic of squarefree order: both properties",
        Reason::FiniteNotSquarefree => "finite, not cyclic of squarefree order: neither property",
        Reason::DistinctSimple => "sum of Z/p over distinct primes: both properties",
        Reason::DistinctPruefer => "sum of Pruefer groups over distinct primes: dual strongly only",
        Reason::MixedKinds => "simple and Pruefer summands mixed: neither property",
    }
}

/// Runs every single-group decider on `g` plus the classification.
pub fn explain(g: &FgAbGroup, opts: &Options) -> Result<Dossier> {
    let mut verdicts = Vec::new();
    for p in Property::ALL {
        if p == Property::DirectSumClosure {
            continue;
        }
        let entry = match decide(p, g, None, opts) {
            Ok(r) => DossierEntry {
                property: p,
                holds: Some(r.holds),
                witness: r.witness,
                note: r.reason,
            },
            Err(e @ (Error::InfiniteHomSet { .. } | Error::InfiniteGroup(_))) => DossierEntry {
                property: p,
                holds: None,
                witness: None,
                note: Some(format!("not applicable: {e}")),
            },
            Err(e) if e.is_resource_error() => DossierEntry {
                property: p,
                holds: None,
                witness: None,
                note: Some(format!("not decided: {e}")),
            },
            Err(e) => return Err(e),
        };
        verdicts.push(entry);
    }
    let classification = classify(g);
    Ok(Dossier {
        group: g.clone(),
        order: g.order().to_string(),
        endomorphisms: hom_group(g, g).size.to_string(),
        verdicts,
        clause: clause(classification.reason),
        classification,
    })
}

impl fmt::Display for Dossier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "group: {}", self.group)?;
        writeln!(f, "order: {}", self.order)?;
        writeln!(f, "|End|: {}", self.endomorphisms)?;
        for v in &self.verdicts {
            let h = match v.holds {
                Some(true) => "yes",
                Some(false) => "no",
                None => "n/a",
            };
            write!(f, "  {:<28} {h}", v.property.name())?;
            if let Some(w) = &v.witness {
                write!(f, "  witness {w}")?;
            }
            if let Some(n) = &v.note {
                write!(f, "  ({n})")?;
            }
            writeln!(f)?;
        }
        let c = &self.classification;
        writeln!(
            f,
            "classification [{}]: strongly {}, dual strongly {}",
            c.reason, c.strongly_self_rickart, c.dual_strongly_self_rickart
        )?;
        write!(f, "  {}", self.clause)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dossier_for_z4_and_z() {
        let o = Options::default();
        let d = explain(&"Z/4".parse().unwrap(), &o).unwrap();
        let r = d.verdicts.iter().find(|v| v.property == Property::Rickart).unwrap();
        assert_eq!(r.holds, Some(false));
        assert!(r.witness.is_some());
        assert_eq!(d.endomorphisms, "4");
        let d = explain(&"Z".parse().unwrap(), &o).unwrap();
        assert_eq!(d.classification.reason, Reason::InfiniteCyclic);
        assert!(d.to_string().contains("classification"));
        assert!(d.verdicts[..4].iter().all(|v| v.holds.is_none()));
        assert!(d.verdicts[0].note.as_deref().unwrap().starts_with("not applicable"));
    }
}
