//! Closed and open decorated foams and their evaluation in Z[X1, X2].
//!
//! A foam is stored combinatorially: each facet records its color, genus,
//! decorations and the boundary circles ("slots") it is glued along. A
//! binding glues three slots, two blue pages in a fixed order and one red
//! page. This is all the evaluation formula consumes:
//!
//! ```text
//! <S> = sum over colorings c of
//!       (-1)^(chi(S_1)/2) (-1)^(n12) prod_F P_F(c) / (X1 - X2)^(chi(S_b)/2)
//! ```
//!
//! where `S_1` is the union of the red facets and the blue facets colored 1,
//! `S_b` is the blue part, and `n12` counts bindings whose first page is
//! colored 1 and second page is colored 2.
//!
//! JSON schema (all decoration fields default to zero, `slots` to empty):
//!
//! ```text
//! {"facets":[{"id":str,"color":"blue"|"red","genus":int,"dots":int,"squares":int,"slots":[str]}],
//!  "bindings":[{"id":str,"blue_pages":[slot,slot],"red_page":slot}],
//!  "free_boundary":[{"slot":str,"color":"blue"|"red"}]}
//! ```

mod harness;
pub mod random;

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::polyring::{IntPoly2, PolyError};

pub use harness::{
    cap_closure, load_fixture, relation_fixtures, verify_local_relation, CombinationTerm,
    FoamCombination, RelationFixture, Verdict, Witness,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FoamError {
    #[error("malformed foam: {0}")]
    MalformedFoam(String),
    #[error("binding {0} has no proper 2-coloring of its blue pages")]
    NonBipartiteBinding(String),
    #[error("odd Euler characteristic {0} for a closed subsurface")]
    OddEuler(i64),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

pub(crate) fn malformed(msg: impl Into<String>) -> FoamError {
    FoamError::MalformedFoam(msg.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FacetColor {
    Blue,
    Red,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Facet {
    pub id: String,
    pub color: FacetColor,
    #[serde(default)]
    pub genus: u32,
    #[serde(default)]
    pub dots: u32,
    #[serde(default)]
    pub squares: u32,
    #[serde(default)]
    pub slots: Vec<String>,
}

impl Facet {
    pub fn new(id: &str, color: FacetColor, slots: &[&str]) -> Self {
        Facet {
            id: id.to_string(),
            color,
            genus: 0,
            dots: 0,
            squares: 0,
            slots: slots.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn blue(id: &str, slots: &[&str]) -> Self {
        Self::new(id, FacetColor::Blue, slots)
    }

    pub fn red(id: &str, slots: &[&str]) -> Self {
        Self::new(id, FacetColor::Red, slots)
    }

    pub fn with_dots(mut self, dots: u32) -> Self {
        self.dots = dots;
        self
    }

    pub fn with_squares(mut self, squares: u32) -> Self {
        self.squares = squares;
        self
    }

    pub fn with_genus(mut self, genus: u32) -> Self {
        self.genus = genus;
        self
    }

    pub fn euler_characteristic(&self) -> i64 {
        2 - 2 * self.genus as i64 - self.slots.len() as i64
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Binding {
    pub id: String,
    pub blue_pages: [String; 2],
    pub red_page: String,
}

impl Binding {
    pub fn new(id: &str, first: &str, second: &str, red: &str) -> Self {
        Binding {
            id: id.to_string(),
            blue_pages: [first.to_string(), second.to_string()],
            red_page: red.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FreeSlot {
    pub slot: String,
    pub color: FacetColor,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ClosedFoam {
    #[serde(default)]
    pub facets: Vec<Facet>,
    #[serde(default)]
    pub bindings: Vec<Binding>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct OpenFoam {
    #[serde(default)]
    pub facets: Vec<Facet>,
    #[serde(default)]
    pub bindings: Vec<Binding>,
    #[serde(default)]
    pub free_boundary: Vec<FreeSlot>,
}

impl ClosedFoam {
    pub fn new(facets: Vec<Facet>, bindings: Vec<Binding>) -> Self {
        ClosedFoam { facets, bindings }
    }

    /// Parse the JSON schema; a non-empty `free_boundary` is rejected.
    pub fn from_json(text: &str) -> Result<Self, FoamError> {
        let open: OpenFoam =
            serde_json::from_str(text).map_err(|e| malformed(format!("json: {e}")))?;
        let closed = ClosedFoam::try_from(open)?;
        validate_foam(&closed)?;
        Ok(closed)
    }

    pub fn facet(&self, id: &str) -> Option<&Facet> {
        self.facets.iter().find(|f| f.id == id)
    }
}

impl TryFrom<OpenFoam> for ClosedFoam {
    type Error = FoamError;

    fn try_from(f: OpenFoam) -> Result<Self, FoamError> {
        if let Some(s) = f.free_boundary.first() {
            return Err(malformed(format!("closed foam has free slot {}", s.slot)));
        }
        Ok(ClosedFoam {
            facets: f.facets,
            bindings: f.bindings,
        })
    }
}

impl From<ClosedFoam> for OpenFoam {
    fn from(f: ClosedFoam) -> Self {
        OpenFoam {
            facets: f.facets,
            bindings: f.bindings,
            free_boundary: Vec::new(),
        }
    }
}

/// Any foam-shaped value the validator accepts.
pub trait FoamParts {
    fn facets(&self) -> &[Facet];
    fn bindings(&self) -> &[Binding];
    fn free_boundary(&self) -> &[FreeSlot] {
        &[]
    }
}

impl FoamParts for ClosedFoam {
    fn facets(&self) -> &[Facet] {
        &self.facets
    }
    fn bindings(&self) -> &[Binding] {
        &self.bindings
    }
}

impl FoamParts for OpenFoam {
    fn facets(&self) -> &[Facet] {
        &self.facets
    }
    fn bindings(&self) -> &[Binding] {
        &self.bindings
    }
    fn free_boundary(&self) -> &[FreeSlot] {
        &self.free_boundary
    }
}

pub fn validate_foam<F: FoamParts>(f: &F) -> Result<(), FoamError> {
    let mut ids = HashSet::new();
    let mut owner: HashMap<&str, &Facet> = HashMap::new();
    for facet in f.facets() {
        if !ids.insert(facet.id.as_str()) {
            return Err(malformed(format!("duplicate facet id {}", facet.id)));
        }
        if facet.color == FacetColor::Blue && facet.squares > 0 {
            return Err(malformed(format!("blue facet {} carries squares", facet.id)));
        }
        for s in &facet.slots {
            if owner.insert(s.as_str(), facet).is_some() {
                return Err(malformed(format!("slot {s} listed twice")));
            }
        }
    }

    let mut used: HashSet<&str> = HashSet::new();
    let mut use_slot = |s: &str, want: FacetColor, what: &str| -> Result<(), FoamError> {
        let (&key, facet) = owner
            .get_key_value(s)
            .ok_or_else(|| malformed(format!("{what} references missing slot {s}")))?;
        if facet.color != want {
            return Err(malformed(format!(
                "{what} expects a {want:?} slot but {s} lies on {:?} facet {}",
                facet.color, facet.id
            )));
        }
        if !used.insert(key) {
            return Err(malformed(format!("slot {s} is glued twice")));
        }
        Ok(())
    };

    let mut binding_ids = HashSet::new();
    for b in f.bindings() {
        if !binding_ids.insert(b.id.as_str()) {
            return Err(malformed(format!("duplicate binding id {}", b.id)));
        }
        let what = format!("binding {}", b.id);
        use_slot(&b.blue_pages[0], FacetColor::Blue, &what)?;
        use_slot(&b.blue_pages[1], FacetColor::Blue, &what)?;
        use_slot(&b.red_page, FacetColor::Red, &what)?;
    }
    for free in f.free_boundary() {
        use_slot(&free.slot, free.color, "free boundary")?;
    }
    for s in owner.keys() {
        if !used.contains(s) {
            return Err(malformed(format!("slot {s} is dangling")));
        }
    }
    Ok(())
}

/// Index form used by the evaluator: facets by position, bindings as facet triples.
struct Indexed {
    blue: Vec<usize>,
    pages: Vec<(usize, usize)>,
}

impl Indexed {
    fn new(f: &ClosedFoam) -> Self {
        let pos: HashMap<&str, usize> = f
            .facets
            .iter()
            .enumerate()
            .flat_map(|(i, facet)| facet.slots.iter().map(move |s| (s.as_str(), i)))
            .collect();
        let blue: Vec<usize> = (0..f.facets.len())
            .filter(|&i| f.facets[i].color == FacetColor::Blue)
            .collect();
        let pages = f
            .bindings
            .iter()
            .map(|b| (pos[b.blue_pages[0].as_str()], pos[b.blue_pages[1].as_str()]))
            .collect();
        Indexed { blue, pages }
    }
}

/// A coloring of the blue facets by 1 or 2.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring {
    pub assignment: BTreeMap<String, u8>,
}

impl Coloring {
    pub fn color_of(&self, facet: &str) -> Option<u8> {
        self.assignment.get(facet).copied()
    }
}

/// Connected components of the blue page-adjacency graph, each listed in facet order.
pub fn blue_components(f: &ClosedFoam) -> Vec<Vec<String>> {
    let idx = Indexed::new(f);
    let comps = component_roots(&idx, f.facets.len());
    comps
        .iter()
        .map(|members| members.iter().map(|&i| f.facets[i].id.clone()).collect())
        .collect()
}

fn component_roots(idx: &Indexed, n: usize) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in &idx.pages {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for &root in &idx.blue {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut stack = vec![root];
        let mut members = Vec::new();
        while let Some(v) = stack.pop() {
            members.push(v);
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}

// Base coloring (each component's first facet gets 1) plus component membership.
fn base_coloring(f: &ClosedFoam, idx: &Indexed) -> Result<(Vec<u8>, Vec<usize>, usize), FoamError> {
    let n = f.facets.len();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (k, &(a, b)) in idx.pages.iter().enumerate() {
        adj[a].push((b, k));
        adj[b].push((a, k));
    }
    let mut color = vec![0u8; n];
    let mut comp = vec![usize::MAX; n];
    let mut count = 0;
    for &root in &idx.blue {
        if comp[root] != usize::MAX {
            continue;
        }
        comp[root] = count;
        color[root] = 1;
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            for &(w, k) in &adj[v] {
                if comp[w] == usize::MAX {
                    comp[w] = count;
                    color[w] = 3 - color[v];
                    stack.push(w);
                } else if color[w] == color[v] {
                    return Err(FoamError::NonBipartiteBinding(f.bindings[k].id.clone()));
                }
            }
        }
        count += 1;
    }
    Ok((color, comp, count))
}

fn colorings_by_index(f: &ClosedFoam, idx: &Indexed) -> Result<Vec<Vec<u8>>, FoamError> {
    let (base, comp, k) = base_coloring(f, idx)?;
    if k > 24 {
        return Err(malformed(format!("{k} blue components is too many to enumerate")));
    }
    Ok((0u64..1 << k)
        .map(|mask| {
            base.iter()
                .zip(&comp)
                .map(|(&c, &j)| {
                    if c != 0 && (mask >> j) & 1 == 1 {
                        3 - c
                    } else {
                        c
                    }
                })
                .collect()
        })
        .collect())
}

/// All `2^k` colorings; bit `i` of the enumeration index flips component `i`.
pub fn enumerate_colorings(f: &ClosedFoam) -> Result<Vec<Coloring>, FoamError> {
    let idx = Indexed::new(f);
    Ok(colorings_by_index(f, &idx)?
        .into_iter()
        .map(|col| Coloring {
            assignment: idx
                .blue
                .iter()
                .map(|&i| (f.facets[i].id.clone(), col[i]))
                .collect(),
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsurface {
    /// Red facets together with the blue facets colored 1.
    ColorOne,
    /// All blue facets.
    Blue,
}

fn chi_by_index(f: &ClosedFoam, col: &[u8], which: Subsurface) -> Result<i64, FoamError> {
    let chi: i64 = f
        .facets
        .iter()
        .zip(col)
        .filter(|(facet, &c)| match which {
            Subsurface::ColorOne => facet.color == FacetColor::Red || c == 1,
            Subsurface::Blue => facet.color == FacetColor::Blue,
        })
        .map(|(facet, _)| facet.euler_characteristic())
        .sum();
    if chi % 2 != 0 {
        return Err(FoamError::OddEuler(chi));
    }
    Ok(chi)
}

fn coloring_vec(f: &ClosedFoam, c: &Coloring) -> Result<Vec<u8>, FoamError> {
    f.facets
        .iter()
        .map(|facet| match facet.color {
            FacetColor::Red => Ok(0),
            FacetColor::Blue => match c.color_of(&facet.id) {
                Some(k @ (1 | 2)) => Ok(k),
                _ => Err(malformed(format!("facet {} has no color 1 or 2", facet.id))),
            },
        })
        .collect()
}

/// Euler characteristic of the chosen subsurface; always even for a valid foam.
pub fn chi_subsurface(f: &ClosedFoam, c: &Coloring, which: Subsurface) -> Result<i64, FoamError> {
    let col = coloring_vec(f, c)?;
    chi_by_index(f, &col, which)
}

fn n12_by_index(idx: &Indexed, col: &[u8]) -> usize {
    idx.pages
        .iter()
        .filter(|&&(a, b)| col[a] == 1 && col[b] == 2)
        .count()
}

pub fn count_n12(f: &ClosedFoam, c: &Coloring) -> Result<usize, FoamError> {
    let col = coloring_vec(f, c)?;
    Ok(n12_by_index(&Indexed::new(f), &col))
}

/// The evaluation `<f>`. Numerators are summed over colorings and divided once,
/// since `S_b` and hence the denominator do not depend on the coloring.
pub fn evaluate_foam(f: &ClosedFoam) -> Result<IntPoly2, FoamError> {
    validate_foam(f)?;
    let idx = Indexed::new(f);
    let colorings = colorings_by_index(f, &idx)?;

    let mut red = IntPoly2::one();
    for facet in f.facets.iter().filter(|x| x.color == FacetColor::Red) {
        red = &red * &IntPoly2::e1().pow(facet.dots);
        red = &red * &IntPoly2::e2().pow(facet.squares);
    }

    let chi_b = match colorings.first() {
        Some(col) => chi_by_index(f, col, Subsurface::Blue)?,
        None => 0,
    };
    let mut blue_sum: BTreeMap<(u32, u32), i64> = BTreeMap::new();
    for col in &colorings {
        let chi1 = chi_by_index(f, col, Subsurface::ColorOne)?;
        let odd = (chi1 / 2).rem_euclid(2) + n12_by_index(&idx, col) as i64 % 2;
        let sign = if odd % 2 == 0 { 1 } else { -1 };
        let (mut a, mut b) = (0u32, 0u32);
        for &i in &idx.blue {
            match col[i] {
                1 => a += f.facets[i].dots,
                _ => b += f.facets[i].dots,
            }
        }
        *blue_sum.entry((a, b)).or_default() += sign;
    }
    let numerator = &red * &IntPoly2::from_terms(blue_sum);
    Ok(numerator.divide_by_difference_power(chi_b / 2)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::IntPoly2;

    fn p(s: &str) -> IntPoly2 {
        s.parse().unwrap()
    }

    fn blue_sphere(dots: u32) -> ClosedFoam {
        ClosedFoam::new(vec![Facet::blue("B", &[]).with_dots(dots)], vec![])
    }

    fn red_sphere(dots: u32, squares: u32) -> ClosedFoam {
        ClosedFoam::new(
            vec![Facet::red("R", &[]).with_dots(dots).with_squares(squares)],
            vec![],
        )
    }

    pub(crate) fn theta(a: u32, b: u32) -> ClosedFoam {
        ClosedFoam::new(
            vec![
                Facet::blue("P", &["p"]).with_dots(a),
                Facet::blue("Q", &["q"]).with_dots(b),
                Facet::red("R", &["r"]),
            ],
            vec![Binding::new("k", "p", "q", "r")],
        )
    }

    #[test]
    fn spheres() {
        assert_eq!(evaluate_foam(&red_sphere(0, 0)).unwrap(), p("-1"));
        assert_eq!(evaluate_foam(&blue_sphere(0)).unwrap(), p("0"));
        assert_eq!(evaluate_foam(&blue_sphere(1)).unwrap(), p("-1"));
        assert_eq!(evaluate_foam(&blue_sphere(2)).unwrap(), p("-X1 - X2"));
        assert_eq!(evaluate_foam(&blue_sphere(3)).unwrap(), p("-X1^2 - X1*X2 - X2^2"));
        assert_eq!(
            evaluate_foam(&red_sphere(2, 1)).unwrap(),
            -(IntPoly2::e1().pow(2) * IntPoly2::e2())
        );
        assert_eq!(evaluate_foam(&ClosedFoam::default()).unwrap(), IntPoly2::one());
    }

    #[test]
    fn theta_values() {
        assert_eq!(evaluate_foam(&theta(0, 0)).unwrap(), p("0"));
        assert_eq!(evaluate_foam(&theta(1, 0)).unwrap(), p("1"));
        assert_eq!(evaluate_foam(&theta(0, 1)).unwrap(), p("-1"));
        assert_eq!(evaluate_foam(&theta(2, 0)).unwrap(), p("X1 + X2"));
        assert_eq!(evaluate_foam(&theta(1, 1)).unwrap(), p("0"));
    }

    #[test]
    fn validation() {
        assert!(validate_foam(&red_sphere(0, 0)).is_ok());
        let bad = ClosedFoam::new(vec![Facet::blue("B", &[]).with_squares(1)], vec![]);
        assert!(matches!(validate_foam(&bad), Err(FoamError::MalformedFoam(_))));
        let mut missing = theta(0, 0);
        missing.bindings[0].red_page = "zz".into();
        assert!(matches!(validate_foam(&missing), Err(FoamError::MalformedFoam(_))));
        let mut dangling = theta(0, 0);
        dangling.facets[0].slots.push("extra".into());
        assert!(validate_foam(&dangling).is_err());
        let mut wrong_color = theta(0, 0);
        wrong_color.bindings[0].blue_pages[0] = "r".into();
        wrong_color.bindings[0].red_page = "p".into();
        assert!(validate_foam(&wrong_color).is_err());
        let dup = ClosedFoam::new(vec![Facet::red("R", &[]), Facet::blue("R", &[])], vec![]);
        assert!(validate_foam(&dup).is_err());
    }

    #[test]
    fn components_and_colorings() {
        assert_eq!(blue_components(&blue_sphere(0)).len(), 1);
        let two = ClosedFoam::new(vec![Facet::blue("A", &[]), Facet::blue("B", &[])], vec![]);
        assert_eq!(blue_components(&two).len(), 2);
        assert_eq!(blue_components(&theta(0, 0)), vec![vec!["P".to_string(), "Q".to_string()]]);
        assert_eq!(enumerate_colorings(&blue_sphere(0)).unwrap().len(), 2);
        assert_eq!(enumerate_colorings(&red_sphere(0, 0)).unwrap().len(), 1);
        assert_eq!(enumerate_colorings(&two).unwrap().len(), 4);
        let cols = enumerate_colorings(&theta(0, 0)).unwrap();
        assert_eq!(cols.len(), 2);
        for c in &cols {
            assert_ne!(c.color_of("P"), c.color_of("Q"));
        }
    }

    #[test]
    fn non_bipartite() {
        // both blue pages of the binding lie on one facet
        let f = ClosedFoam::new(
            vec![Facet::blue("A", &["x", "y"]), Facet::red("R", &["r"])],
            vec![Binding::new("k", "x", "y", "r")],
        );
        assert_eq!(
            evaluate_foam(&f),
            Err(FoamError::NonBipartiteBinding("k".into()))
        );
    }

    #[test]
    fn chi_and_n12() {
        let c1 = Coloring {
            assignment: [("B".to_string(), 1)].into(),
        };
        assert_eq!(chi_subsurface(&blue_sphere(0), &c1, Subsurface::ColorOne).unwrap(), 2);
        let empty = Coloring {
            assignment: BTreeMap::new(),
        };
        assert_eq!(chi_subsurface(&red_sphere(0, 0), &empty, Subsurface::Blue).unwrap(), 0);
        assert_eq!(count_n12(&red_sphere(0, 0), &empty).unwrap(), 0);
        assert_eq!(count_n12(&blue_sphere(0), &c1).unwrap(), 0);
        let th = theta(0, 0);
        for c in enumerate_colorings(&th).unwrap() {
            assert_eq!(chi_subsurface(&th, &c, Subsurface::Blue).unwrap(), 2);
            let expect = usize::from(c.color_of("P") == Some(1));
            assert_eq!(count_n12(&th, &c).unwrap(), expect);
        }
    }

    #[test]
    fn json_roundtrip() {
        let text = r#"{"facets":[{"id":"R","color":"red"}],"bindings":[]}"#;
        let f = ClosedFoam::from_json(text).unwrap();
        assert_eq!(f, red_sphere(0, 0));
        let back = serde_json::to_string(&f).unwrap();
        assert_eq!(ClosedFoam::from_json(&back).unwrap(), f);
        let open = r#"{"facets":[{"id":"D","color":"blue","slots":["h"]}],"free_boundary":[{"slot":"h","color":"blue"}]}"#;
        assert!(ClosedFoam::from_json(open).is_err());
    }

    #[test]
    fn red_decorations_scale() {
        let base = evaluate_foam(&theta(2, 1)).unwrap();
        let mut f = theta(2, 1);
        f.facets[2].dots = 2;
        f.facets[2].squares = 1;
        let scaled = evaluate_foam(&f).unwrap();
        assert_eq!(scaled, base * IntPoly2::e1().pow(2) * IntPoly2::e2());
    }
}
