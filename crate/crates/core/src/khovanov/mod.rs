//! The cube of resolutions and its chain complexes.
//!
//! A vertex of the cube is a state s of the diagram; its smoothing is a set
//! of circles, each labeled 1 or X. A generator (s, labels) sits in
//! homological degree Σs − n₋ and q-degree
//! (#1 − #X) + Σs + n₊ − 2n₋. The edge that flips crossing j from 0 to 1
//! merges two circles or splits one, and carries the sign
//! (−1)^(number of 1s in s before j).
//!
//! The Khovanov maps use X² = 0 and the Lee maps use X² = 1. The Lee
//! complex keeps the same q-degrees, which then only filter it.
//!
//! Generators are ordered by state, then by labels read as a binary
//! number with bit k set when circle k carries X.

mod oracle;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{PDCode, State};
use crate::homology::SparseMatrix;
use crate::polyring::LaurentQ;

pub use oracle::kauffman_oracle;

/// Default crossing limit for the cube.
pub const DEFAULT_MAX_CROSSINGS: usize = 14;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KhovanovError {
    #[error("diagram has {crossings} crossings, above the limit of {limit}")]
    TooLarge { crossings: usize, limit: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Flavor {
    Kh,
    Lee,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeKind {
    Merge,
    Split,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    One,
    X,
}

/// The Frobenius algebra map on an edge of the cube.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeMap {
    pub kind: EdgeKind,
    pub flavor: Flavor,
}

pub fn edge_map(kind: EdgeKind, flavor: Flavor) -> EdgeMap {
    EdgeMap { kind, flavor }
}

impl EdgeMap {
    /// Image of a basis tensor: two labels for a merge, one for a split.
    pub fn apply(&self, input: &[Label]) -> Vec<(i64, Vec<Label>)> {
        use Label::{One, X};
        let lee = self.flavor == Flavor::Lee;
        match (self.kind, input) {
            (EdgeKind::Merge, [One, One]) => vec![(1, vec![One])],
            (EdgeKind::Merge, [One, X] | [X, One]) => vec![(1, vec![X])],
            (EdgeKind::Merge, [X, X]) if lee => vec![(1, vec![One])],
            (EdgeKind::Merge, [X, X]) => vec![],
            (EdgeKind::Split, [One]) => vec![(1, vec![One, X]), (1, vec![X, One])],
            (EdgeKind::Split, [X]) if lee => vec![(1, vec![One, One]), (1, vec![X, X])],
            (EdgeKind::Split, [X]) => vec![(1, vec![X, X])],
            _ => panic!("{:?} takes {} labels", self.kind, if self.kind == EdgeKind::Merge { 2 } else { 1 }),
        }
    }
}

/// A basis element of the complex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Generator {
    pub state: State,
    /// Bit k set when circle k is labeled X.
    pub labels: u32,
    pub circles: u8,
    pub hom_degree: i32,
    pub q_degree: i32,
}

impl Generator {
    pub fn label(&self, circle: usize) -> Label {
        if self.labels >> circle & 1 == 1 {
            Label::X
        } else {
            Label::One
        }
    }
}

/// Chain complex over ℤ with a q-degree on every generator.
#[derive(Debug, Clone)]
pub struct GradedChainComplex {
    pub flavor: Flavor,
    min_degree: i32,
    generators: Vec<Vec<Generator>>,
    // differentials[k] maps degree k to degree k + 1 (relative indices)
    differentials: Vec<SparseMatrix>,
}

impl GradedChainComplex {
    /// Assemble a complex from raw parts. `differentials[k]` maps the
    /// generators of degree `min_degree + k` to those of the next degree.
    pub fn from_parts(
        flavor: Flavor,
        min_degree: i32,
        generators: Vec<Vec<Generator>>,
        differentials: Vec<SparseMatrix>,
    ) -> Self {
        assert_eq!(differentials.len() + 1, generators.len().max(1));
        for (k, d) in differentials.iter().enumerate() {
            assert_eq!(d.cols(), generators[k].len());
            assert_eq!(d.rows(), generators[k + 1].len());
        }
        GradedChainComplex {
            flavor,
            min_degree,
            generators,
            differentials,
        }
    }

    pub fn min_degree(&self) -> i32 {
        self.min_degree
    }

    pub fn max_degree(&self) -> i32 {
        self.min_degree + self.generators.len() as i32 - 1
    }

    pub fn degrees(&self) -> impl Iterator<Item = i32> {
        self.min_degree..=self.max_degree()
    }

    /// Generators of homological degree `i`, empty outside the range.
    pub fn generators(&self, i: i32) -> &[Generator] {
        usize::try_from(i - self.min_degree)
            .ok()
            .and_then(|k| self.generators.get(k))
            .map_or(&[], Vec::as_slice)
    }

    /// The differential from degree `i` to `i + 1`, if both exist.
    pub fn differential(&self, i: i32) -> Option<&SparseMatrix> {
        usize::try_from(i - self.min_degree)
            .ok()
            .and_then(|k| self.differentials.get(k))
    }

    pub fn generator_count(&self) -> usize {
        self.generators.iter().map(Vec::len).sum()
    }

    /// Whether every composite d∘d vanishes.
    pub fn d_squared_is_zero(&self) -> bool {
        self.differentials
            .windows(2)
            .all(|w| w[1].mul(&w[0]).is_zero())
    }

    /// Number of nonzero entries for each difference q(target) − q(source).
    pub fn q_shift_counts(&self) -> BTreeMap<i32, usize> {
        let mut out = BTreeMap::new();
        for (k, d) in self.differentials.iter().enumerate() {
            for (r, c, _) in d.entries() {
                *out.entry(self.generators[k + 1][r].q_degree - self.generators[k][c].q_degree)
                    .or_default() += 1;
            }
        }
        out
    }

    /// The distinct differences q(target) − q(source) over nonzero entries.
    pub fn entry_q_shifts(&self) -> Vec<i32> {
        self.q_shift_counts().into_keys().collect()
    }

    pub fn preserves_q(&self) -> bool {
        self.entry_q_shifts().iter().all(|&d| d == 0)
    }
}

// Smoothing data for one state.
struct Vertex {
    membership: Vec<u8>,
    arc_circles: usize,
    // smallest arc of each arc circle
    rep: Vec<usize>,
}

fn vertex(pd: &PDCode, s: State) -> Vertex {
    let (membership, arc_circles) = pd.smooth_arcs(s);
    let mut rep = vec![usize::MAX; arc_circles];
    for (a, &c) in membership.iter().enumerate() {
        if rep[c] == usize::MAX {
            rep[c] = a;
        }
    }
    Vertex {
        membership: membership.into_iter().map(|c| c as u8).collect(),
        arc_circles,
        rep,
    }
}

pub fn q_degree(pd: &PDCode, s: State, circles: usize, labels: u32) -> i32 {
    let x = labels.count_ones() as i32;
    let one = circles as i32 - x;
    one - x + s.ones() as i32 + pd.n_plus() as i32 - 2 * pd.n_minus() as i32
}

/// Build the Khovanov or Lee complex of a diagram with the default limit.
pub fn build_complex(pd: &PDCode, flavor: Flavor) -> Result<GradedChainComplex, KhovanovError> {
    build_complex_with_limit(pd, flavor, DEFAULT_MAX_CROSSINGS)
}

pub fn build_complex_with_limit(
    pd: &PDCode,
    flavor: Flavor,
    limit: usize,
) -> Result<GradedChainComplex, KhovanovError> {
    let n = pd.crossing_count();
    if n > limit || n > 24 {
        return Err(KhovanovError::TooLarge {
            crossings: n,
            limit: limit.min(24),
        });
    }
    if pd.arc_count() + pd.free_loops() > 32 {
        return Err(KhovanovError::TooLarge { crossings: n, limit });
    }
    let loops = pd.free_loops();
    let vertices: Vec<Vertex> = (0..1u64 << n).into_par_iter().map(|s| vertex(pd, State(s))).collect();

    // states by height, ascending; offset of each state's block in its degree
    let mut by_height: Vec<Vec<u64>> = vec![Vec::new(); n + 1];
    for s in 0..1u64 << n {
        by_height[s.count_ones() as usize].push(s);
    }
    let mut offset = vec![0u32; 1 << n];
    let mut sizes = vec![0usize; n + 1];
    for (r, states) in by_height.iter().enumerate() {
        for &s in states {
            offset[s as usize] = sizes[r] as u32;
            sizes[r] += 1 << (vertices[s as usize].arc_circles + loops);
        }
    }

    let n_minus = pd.n_minus() as i32;
    let generators: Vec<Vec<Generator>> = by_height
        .par_iter()
        .map(|states| {
            let mut gens = Vec::new();
            for &s in states {
                let k = vertices[s as usize].arc_circles + loops;
                for labels in 0..1u32 << k {
                    gens.push(Generator {
                        state: State(s),
                        labels,
                        circles: k as u8,
                        hom_degree: s.count_ones() as i32 - n_minus,
                        q_degree: q_degree(pd, State(s), k, labels),
                    });
                }
            }
            gens
        })
        .collect();

    let merge = edge_map(EdgeKind::Merge, flavor);
    let split = edge_map(EdgeKind::Split, flavor);
    let differentials: Vec<SparseMatrix> = (0..n)
        .into_par_iter()
        .map(|r| {
            let columns: Vec<Vec<(u32, i64)>> = by_height[r]
                .par_iter()
                .flat_map_iter(|&s| {
                    state_columns(pd, &vertices, &offset, State(s), loops, &merge, &split)
                })
                .collect();
            SparseMatrix::from_columns(sizes[r + 1], columns)
        })
        .collect();

    Ok(GradedChainComplex {
        flavor,
        min_degree: -n_minus,
        generators,
        differentials,
    })
}

fn bit(x: u32, k: usize) -> Label {
    if x >> k & 1 == 1 {
        Label::X
    } else {
        Label::One
    }
}

fn set(x: &mut u32, k: usize, l: Label) {
    if l == Label::X {
        *x |= 1 << k;
    }
}

// Columns of every generator at state `s`.
fn state_columns(
    pd: &PDCode,
    vertices: &[Vertex],
    offset: &[u32],
    s: State,
    loops: usize,
    merge: &EdgeMap,
    split: &EdgeMap,
) -> Vec<Vec<(u32, i64)>> {
    let v = &vertices[s.0 as usize];
    let k = v.arc_circles + loops;
    let mut cols: Vec<Vec<(u32, i64)>> = vec![Vec::new(); 1 << k];
    for j in (0..pd.crossing_count()).filter(|&j| s.get(j) == 0) {
        let t = s.flip(j);
        let w = &vertices[t.0 as usize];
        let sign = if s.ones_before(j).is_multiple_of(2) { 1 } else { -1 };
        let image = |c: usize| -> usize {
            if c < v.arc_circles {
                w.membership[v.rep[c]] as usize
            } else {
                c - v.arc_circles + w.arc_circles
            }
        };
        let x = pd.dense_crossing(j);
        let a = v.membership[x[0]] as usize;
        let b = v.membership[x[2]] as usize;
        let base_of = |labels: u32| -> u32 {
            let mut out = 0;
            for c in (0..k).filter(|&c| c != a && c != b) {
                set(&mut out, image(c), bit(labels, c));
            }
            out
        };
        let t_off = offset[t.0 as usize];
        for (labels, col) in cols.iter_mut().enumerate() {
            let labels = labels as u32;
            let base = base_of(labels);
            if a != b {
                let target = w.membership[x[0]] as usize;
                for (coef, out) in merge.apply(&[bit(labels, a), bit(labels, b)]) {
                    let mut t_labels = base;
                    set(&mut t_labels, target, out[0]);
                    col.push((t_off + t_labels, sign * coef));
                }
            } else {
                let (c1, c2) = (w.membership[x[0]] as usize, w.membership[x[1]] as usize);
                for (coef, out) in split.apply(&[bit(labels, a)]) {
                    let mut t_labels = base;
                    set(&mut t_labels, c1, out[0]);
                    set(&mut t_labels, c2, out[1]);
                    col.push((t_off + t_labels, sign * coef));
                }
            }
        }
    }
    cols
}

/// Σ (−1)^i q^qdeg over all generators.
pub fn graded_euler_characteristic(c: &GradedChainComplex) -> LaurentQ {
    let mut out = LaurentQ::zero();
    for i in c.degrees() {
        let sign = if i.rem_euclid(2) == 0 { 1 } else { -1 };
        for g in c.generators(i) {
            out.add_monomial(sign, g.q_degree);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{braid_to_pd, catalog, parse_pd};
    use Label::{One, X};

    #[test]
    fn frobenius_tables() {
        let m = edge_map(EdgeKind::Merge, Flavor::Kh);
        assert!(m.apply(&[X, X]).is_empty());
        assert_eq!(m.apply(&[One, X]), vec![(1, vec![X])]);
        let d = edge_map(EdgeKind::Split, Flavor::Kh);
        assert_eq!(d.apply(&[One]), vec![(1, vec![One, X]), (1, vec![X, One])]);
        let dl = edge_map(EdgeKind::Split, Flavor::Lee);
        assert_eq!(dl.apply(&[X]), vec![(1, vec![One, One]), (1, vec![X, X])]);
        let ml = edge_map(EdgeKind::Merge, Flavor::Lee);
        assert_eq!(ml.apply(&[X, X]), vec![(1, vec![One])]);
    }

    #[test]
    fn unknot_complex() {
        let c = build_complex(&PDCode::unknot(), Flavor::Kh).unwrap();
        assert_eq!((c.min_degree(), c.max_degree()), (0, 0));
        let qs: Vec<i32> = c.generators(0).iter().map(|g| g.q_degree).collect();
        assert_eq!(qs, vec![1, -1]);
        assert_eq!(graded_euler_characteristic(&c).to_string(), "q + q^-1");
    }

    #[test]
    fn unlink_squares() {
        let c = build_complex(&PDCode::unlink(2), Flavor::Kh).unwrap();
        assert_eq!(graded_euler_characteristic(&c), LaurentQ::circle().pow(2));
        let c = build_complex(&braid_to_pd(&[1, -1], 2).unwrap(), Flavor::Kh).unwrap();
        assert_eq!(graded_euler_characteristic(&c), LaurentQ::circle().pow(2));
    }

    #[test]
    fn kink_complex() {
        let c = build_complex(&braid_to_pd(&[1], 2).unwrap(), Flavor::Kh).unwrap();
        assert_eq!((c.min_degree(), c.max_degree()), (0, 1));
        assert_eq!((c.generators(0).len(), c.generators(1).len()), (4, 2));
        assert!(c.preserves_q());
        assert_eq!(graded_euler_characteristic(&c), LaurentQ::circle());
    }

    #[test]
    fn trefoil_jones() {
        let t = braid_to_pd(&[1, 1, 1], 2).unwrap();
        let c = build_complex(&t, Flavor::Kh).unwrap();
        assert!(c.d_squared_is_zero());
        assert_eq!(
            graded_euler_characteristic(&c).to_string(),
            "-q^9 + q^5 + q^3 + q"
        );
        assert_eq!(graded_euler_characteristic(&c), kauffman_oracle(&t).unwrap());
    }

    #[test]
    fn catalog_complexes_are_complexes() {
        for d in catalog::test_diagrams().into_iter().filter(|d| d.pd.crossing_count() <= 7) {
            for flavor in [Flavor::Kh, Flavor::Lee] {
                let c = build_complex(&d.pd, flavor).unwrap();
                assert!(c.d_squared_is_zero(), "{} {flavor:?}", d.name);
            }
            let kh = build_complex(&d.pd, Flavor::Kh).unwrap();
            assert!(kh.preserves_q(), "{}", d.name);
            let lee = build_complex(&d.pd, Flavor::Lee).unwrap();
            let shifts = lee.entry_q_shifts();
            assert!(shifts.iter().all(|&s| s == 0 || s == 4), "{}: {shifts:?}", d.name);
        }
    }

    #[test]
    fn faces_anticommute() {
        // on a square s -> s+i, s+j -> s+i+j the two sign products differ
        let n = 6;
        for s in 0..1u64 << n {
            let st = State(s);
            for i in (0..n).filter(|&i| st.get(i) == 0) {
                for j in (i + 1..n).filter(|&j| st.get(j) == 0) {
                    let sgn = |x: State, c| if x.ones_before(c).is_multiple_of(2) { 1 } else { -1 };
                    let a = sgn(st, i) * sgn(st.flip(i), j);
                    let b = sgn(st, j) * sgn(st.flip(j), i);
                    assert_eq!(a, -b);
                }
            }
        }
    }

    #[test]
    fn parity_of_q_degrees() {
        let e = parse_pd("X[4,2,5,1];X[8,6,1,5];X[6,3,7,4];X[2,7,3,8]").unwrap();
        let c = build_complex(&e, Flavor::Kh).unwrap();
        let parities: std::collections::BTreeSet<i32> = c
            .degrees()
            .flat_map(|i| c.generators(i).iter().map(|g| g.q_degree.rem_euclid(2)))
            .collect();
        assert_eq!(parities.len(), 1);
    }

    #[test]
    fn too_large() {
        let big = braid_to_pd(&[1; 15], 2).unwrap();
        assert!(matches!(
            build_complex(&big, Flavor::Kh),
            Err(KhovanovError::TooLarge { crossings: 15, limit: 14 })
        ));
    }
}
