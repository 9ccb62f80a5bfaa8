//! Closure harness for local relations.
//!
//! A local relation is an identity between linear combinations of open
//! foams with a common free boundary. It holds iff every way of closing the
//! boundary gives equal evaluations. We close each free circle with a disk
//! carrying 0..=max_dots dots, which by the cup-foam basis already separates
//! the state space of a circle.
//!
//! Relations whose boundary is a web rather than a union of circles are
//! stored in a pre-closed form: the web is closed off, and the facets that
//! met the boundary get a free hole each, so the caps still probe every
//! decoration the boundary could carry.

use std::collections::BTreeMap;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{evaluate_foam, malformed, validate_foam, ClosedFoam, FacetColor, FoamError, OpenFoam};
use crate::polyring::IntPoly2;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CombinationTerm {
    pub coeff: IntPoly2,
    pub foam: OpenFoam,
}

/// A linear combination of open foams sharing one free boundary.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FoamCombination {
    pub terms: Vec<CombinationTerm>,
}

impl FoamCombination {
    pub fn single(foam: OpenFoam) -> Self {
        FoamCombination {
            terms: vec![CombinationTerm {
                coeff: IntPoly2::one(),
                foam,
            }],
        }
    }

    /// Free slots with their colors, or `None` for the empty combination.
    pub fn boundary(&self) -> Result<Option<BTreeMap<String, FacetColor>>, FoamError> {
        let mut sig = None;
        for t in &self.terms {
            let s: BTreeMap<String, FacetColor> = t
                .foam
                .free_boundary
                .iter()
                .map(|f| (f.slot.clone(), f.color))
                .collect();
            match &sig {
                None => sig = Some(s),
                Some(prev) if *prev != s => {
                    return Err(malformed("terms of a combination have different boundaries"))
                }
                Some(_) => {}
            }
        }
        Ok(sig)
    }

    pub fn negated(&self) -> Self {
        FoamCombination {
            terms: self
                .terms
                .iter()
                .map(|t| CombinationTerm {
                    coeff: -&t.coeff,
                    foam: t.foam.clone(),
                })
                .collect(),
        }
    }

    fn evaluate_closed(&self, caps: &BTreeMap<String, u32>) -> Result<IntPoly2, FoamError> {
        let mut total = IntPoly2::zero();
        for t in &self.terms {
            let closed = cap_closure(&t.foam, caps)?;
            total = &total + &(&t.coeff * &evaluate_foam(&closed)?);
        }
        Ok(total)
    }
}

/// Glue a disk with the given number of dots onto every free slot.
///
/// Gluing a disk along a whole boundary circle of a facet just fills that
/// circle, so the result is the same facet with the slot removed and the
/// cap's dots added.
pub fn cap_closure(f: &OpenFoam, caps: &BTreeMap<String, u32>) -> Result<ClosedFoam, FoamError> {
    validate_foam(f)?;
    if caps.len() != f.free_boundary.len()
        || f.free_boundary.iter().any(|s| !caps.contains_key(&s.slot))
    {
        return Err(malformed("caps do not match the free boundary"));
    }
    let mut facets = f.facets.clone();
    for facet in &mut facets {
        facet.slots.retain(|s| match caps.get(s) {
            Some(&dots) => {
                facet.dots += dots;
                false
            }
            None => true,
        });
    }
    let closed = ClosedFoam::new(facets, f.bindings.clone());
    validate_foam(&closed)?;
    Ok(closed)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub caps: BTreeMap<String, u32>,
    pub lhs: IntPoly2,
    pub rhs: IntPoly2,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Pass { closures: usize },
    Fail(Witness),
}

impl Verdict {
    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Pass { .. })
    }
}

/// Compare both sides on every cap assignment with at most `max_dots` dots per cap.
///
/// Assignments are ordered lexicographically by slot id; a failure reports
/// the first differing one.
pub fn verify_local_relation(
    lhs: &FoamCombination,
    rhs: &FoamCombination,
    max_dots: u32,
) -> Result<Verdict, FoamError> {
    let slots: Vec<String> = match (lhs.boundary()?, rhs.boundary()?) {
        (Some(a), Some(b)) if a != b => {
            return Err(malformed("the two sides have different boundaries"))
        }
        (Some(a), _) | (None, Some(a)) => a.into_keys().collect(),
        (None, None) => Vec::new(),
    };
    let base = max_dots as usize + 1;
    let count = u32::try_from(slots.len())
        .ok()
        .and_then(|k| base.checked_pow(k))
        .ok_or_else(|| malformed("too many free slots"))?;

    let caps_at = |mut n: usize| -> BTreeMap<String, u32> {
        let mut dots = vec![0u32; slots.len()];
        for d in dots.iter_mut().rev() {
            *d = (n % base) as u32;
            n /= base;
        }
        slots.iter().cloned().zip(dots).collect()
    };

    let first_bad = (0..count)
        .into_par_iter()
        .map(|n| -> Result<Option<Witness>, FoamError> {
            let caps = caps_at(n);
            let l = lhs.evaluate_closed(&caps)?;
            let r = rhs.evaluate_closed(&caps)?;
            Ok((l != r).then_some(Witness { caps, lhs: l, rhs: r }))
        })
        .find_first(|r| !matches!(r, Ok(None)));
    match first_bad {
        None => Ok(Verdict::Pass { closures: count }),
        Some(Err(e)) => Err(e),
        Some(Ok(w)) => Ok(Verdict::Fail(w.expect("filtered on Some"))),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationFixture {
    pub name: String,
    pub description: String,
    pub lhs: FoamCombination,
    pub rhs: FoamCombination,
}

impl RelationFixture {
    pub fn from_json(text: &str) -> Result<Self, FoamError> {
        let fx: RelationFixture =
            serde_json::from_str(text).map_err(|e| malformed(format!("json: {e}")))?;
        for t in fx.lhs.terms.iter().chain(&fx.rhs.terms) {
            validate_foam(&t.foam)?;
        }
        Ok(fx)
    }

    pub fn verify(&self, max_dots: u32) -> Result<Verdict, FoamError> {
        verify_local_relation(&self.lhs, &self.rhs, max_dots)
    }
}

macro_rules! fixture_files {
    ($($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../../fixtures/relations/", $name, ".json")))),*]
    };
}

const FIXTURES: &[(&str, &str)] = fixture_files!(
    "sphere-blue",
    "sphere-blue-dot",
    "sphere-red",
    "bubble-pimple-plus",
    "bubble-pimple-minus",
    "bubble-saturn",
    "bubble-saturn-dot-first",
    "bubble-saturn-dot-second",
    "bigon",
    "neck-cutting-blue",
    "neck-cutting-blue-pimple",
    "neck-cutting-red",
    "migration",
    "blue-dot-reduction",
    "red-dot-reduction",
    "red-square-reduction",
    "tube-blue-blue",
    "tube-blue-red-minus",
    "tube-blue-red-plus",
    "band-unzip-zip",
    "band-zip-unzip",
    "square-circles",
    "square-ladder",
);

/// The checked-in relation fixtures, in a fixed order.
pub fn relation_fixtures() -> Vec<RelationFixture> {
    FIXTURES
        .iter()
        .map(|(name, text)| {
            let fx = RelationFixture::from_json(text)
                .unwrap_or_else(|e| panic!("fixture {name} is invalid: {e}"));
            assert_eq!(fx.name, *name, "fixture name does not match its file");
            fx
        })
        .collect()
}

pub fn load_fixture(path: &Path) -> Result<RelationFixture, FoamError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| malformed(format!("{}: {e}", path.display())))?;
    RelationFixture::from_json(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foam::Facet;

    fn cylinder() -> OpenFoam {
        OpenFoam {
            facets: vec![Facet::blue("C", &["h1", "h2"])],
            bindings: vec![],
            free_boundary: vec![
                super::super::FreeSlot {
                    slot: "h1".into(),
                    color: FacetColor::Blue,
                },
                super::super::FreeSlot {
                    slot: "h2".into(),
                    color: FacetColor::Blue,
                },
            ],
        }
    }

    #[test]
    fn capping_a_cylinder() {
        let caps: BTreeMap<String, u32> = [("h1".into(), 0), ("h2".into(), 0)].into();
        let s = cap_closure(&cylinder(), &caps).unwrap();
        assert_eq!(s.facets, vec![Facet::blue("C", &[])]);
        let caps: BTreeMap<String, u32> = [("h1".into(), 1), ("h2".into(), 0)].into();
        let s = cap_closure(&cylinder(), &caps).unwrap();
        assert_eq!(evaluate_foam(&s).unwrap(), IntPoly2::constant(-1));
        let short: BTreeMap<String, u32> = [("h1".into(), 1)].into();
        assert!(cap_closure(&cylinder(), &short).is_err());
    }

    #[test]
    fn fixtures_pass() {
        for fx in relation_fixtures() {
            let v = fx.verify(2).unwrap();
            assert!(v.passed(), "{}: {:?}", fx.name, v);
        }
    }

    #[test]
    fn flipped_red_neck_cutting_fails() {
        let fx = relation_fixtures()
            .into_iter()
            .find(|f| f.name == "neck-cutting-red")
            .unwrap();
        match verify_local_relation(&fx.lhs, &fx.rhs.negated(), 2).unwrap() {
            Verdict::Fail(w) => {
                assert_eq!(w.caps.values().sum::<u32>(), 0);
                assert_eq!(w.lhs, -w.rhs);
            }
            v => panic!("expected failure, got {v:?}"),
        }
    }

    #[test]
    fn negated_fixtures_fail_unless_vanishing() {
        let vanishing = ["sphere-blue", "bubble-saturn"];
        for fx in relation_fixtures() {
            let v = verify_local_relation(&fx.lhs, &fx.rhs.negated(), 2).unwrap();
            assert_eq!(v.passed(), vanishing.contains(&fx.name.as_str()), "{}", fx.name);
        }
    }

    #[test]
    fn max_dots_zero_still_passes() {
        for fx in relation_fixtures() {
            assert!(fx.verify(0).unwrap().passed(), "{}", fx.name);
        }
    }

    #[test]
    fn mismatched_boundaries_rejected() {
        let lhs = FoamCombination::single(cylinder());
        let mut other = cylinder();
        other.free_boundary.pop();
        other.facets[0].slots.pop();
        let rhs = FoamCombination::single(other);
        assert!(verify_local_relation(&lhs, &rhs, 1).is_err());
    }
}
