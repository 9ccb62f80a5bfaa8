//! Link diagrams as PD codes.
//!
//! A crossing is a 4-tuple of arc labels listed counterclockwise, starting
//! at the incoming under-strand. The under-strand runs from position 0 to
//! position 2. The over-strand runs 3 -> 1 at a positive crossing and
//! 1 -> 3 at a negative one. Orientation is traced from the under-strands;
//! a component that is over at every crossing gets an arbitrary direction.
//!
//! The 0-smoothing of a crossing joins positions (0,1) and (2,3), the
//! 1-smoothing joins (0,3) and (1,2). Under this convention the oriented
//! resolution takes 0 at positive and 1 at negative crossings, so it sits
//! at height 0.
//!
//! Crossingless unknotted components are carried as a count of free loops.
//! The empty PD text is the unknot (one free loop).

mod braid;
pub mod catalog;
mod moves;
mod parse;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::unionfind::UnionFind;

pub use braid::braid_to_pd;
pub use moves::{random_perturbation, reidemeister_move, undo_r1, undo_r2, Move, Side, Site};
pub use parse::parse_pd;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),
    #[error("invalid braid: {0}")]
    InvalidBraid(String),
    #[error("invalid site: {0}")]
    InvalidSite(String),
}

fn invalid(msg: impl Into<String>) -> DiagramError {
    DiagramError::InvalidDiagram(msg.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Positive,
    Negative,
}

/// A 0/1 choice per crossing; bit `c` is s(c).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct State(pub u64);

impl State {
    pub fn get(self, c: usize) -> u8 {
        ((self.0 >> c) & 1) as u8
    }

    pub fn flip(self, c: usize) -> State {
        State(self.0 ^ (1 << c))
    }

    /// Σ s(c).
    pub fn ones(self) -> u32 {
        self.0.count_ones()
    }

    /// Number of 1s strictly before coordinate `c`.
    pub fn ones_before(self, c: usize) -> u32 {
        (self.0 & ((1u64 << c) - 1)).count_ones()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmoothingResult {
    pub circle_count: usize,
    /// Circle id of every arc, indexed like [`PDCode::arc_labels`]. Free
    /// loops take the ids after all arc circles.
    pub membership: Vec<usize>,
}

// Position of an arc end: (crossing, slot 0..4).
type Occ = (usize, usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PDCode {
    crossings: Vec<[u32; 4]>,
    free_loops: usize,
    labels: Vec<u32>,
    dense: Vec<[usize; 4]>,
    incoming: Vec<[bool; 4]>,
    signs: Vec<Sign>,
    arc_component: Vec<usize>,
    components: usize,
}

impl PDCode {
    /// Validate a crossing list: every label appears twice, orientation
    /// traces consistently, and the diagram is planar.
    pub fn new(crossings: Vec<[u32; 4]>, free_loops: usize) -> Result<Self, DiagramError> {
        let mut occ: BTreeMap<u32, Vec<Occ>> = BTreeMap::new();
        for (c, x) in crossings.iter().enumerate() {
            for (p, &l) in x.iter().enumerate() {
                if l == 0 {
                    return Err(invalid("arc labels must be positive"));
                }
                occ.entry(l).or_default().push((c, p));
            }
        }
        if let Some((l, v)) = occ.iter().find(|(_, v)| v.len() != 2) {
            return Err(invalid(format!("arc {l} appears {} times", v.len())));
        }
        let labels: Vec<u32> = occ.keys().copied().collect();
        let index: BTreeMap<u32, usize> = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        let dense: Vec<[usize; 4]> = crossings.iter().map(|x| x.map(|l| index[&l])).collect();
        let ends: Vec<[Occ; 2]> = occ.values().map(|v| [v[0], v[1]]).collect();

        let incoming = trace_orientation(&dense, &ends)?;
        let mut pd = PDCode {
            crossings,
            free_loops,
            labels,
            dense,
            incoming,
            signs: Vec::new(),
            arc_component: Vec::new(),
            components: 0,
        };
        pd.signs = (0..pd.dense.len())
            .map(|c| if pd.incoming[c][3] { Sign::Positive } else { Sign::Negative })
            .collect();
        pd.trace_components(&ends);
        pd.check_planar(&ends)?;
        Ok(pd)
    }

    pub fn unknot() -> Self {
        Self::unlink(1)
    }

    pub fn unlink(n: usize) -> Self {
        PDCode::new(Vec::new(), n).expect("empty diagram is valid")
    }

    pub fn crossings(&self) -> &[[u32; 4]] {
        &self.crossings
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn free_loops(&self) -> usize {
        self.free_loops
    }

    /// Sorted arc labels; dense arc ids index this list.
    pub fn arc_labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn arc_count(&self) -> usize {
        self.labels.len()
    }

    /// Dense arc ids at a crossing.
    pub fn dense_crossing(&self, c: usize) -> [usize; 4] {
        self.dense[c]
    }

    /// Whether the arc at slot `p` of crossing `c` enters the crossing.
    pub fn is_incoming(&self, c: usize, p: usize) -> bool {
        self.incoming[c][p]
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    pub fn n_plus(&self) -> usize {
        self.signs.iter().filter(|&&s| s == Sign::Positive).count()
    }

    pub fn n_minus(&self) -> usize {
        self.signs.len() - self.n_plus()
    }

    pub fn writhe(&self) -> i64 {
        self.n_plus() as i64 - self.n_minus() as i64
    }

    /// Number of link components, free loops included.
    pub fn components(&self) -> usize {
        self.components
    }

    /// Component id of each dense arc.
    pub fn arc_components(&self) -> &[usize] {
        &self.arc_component
    }

    /// The resolution compatible with the orientation.
    pub fn oriented_state(&self) -> State {
        let mut s = 0u64;
        for (c, sign) in self.signs.iter().enumerate() {
            if *sign == Sign::Negative {
                s |= 1 << c;
            }
        }
        State(s)
    }

    pub fn seifert_circles(&self) -> usize {
        smooth_state(self, self.oriented_state()).circle_count
    }

    /// Union-find over arcs; returns per-arc circle ids and the number of
    /// arc circles (free loops not included).
    pub fn smooth_arcs(&self, st: State) -> (Vec<usize>, usize) {
        let mut uf = UnionFind::new(self.labels.len());
        for (c, x) in self.dense.iter().enumerate() {
            if st.get(c) == 0 {
                uf.union(x[0], x[1]);
                uf.union(x[2], x[3]);
            } else {
                uf.union(x[0], x[3]);
                uf.union(x[1], x[2]);
            }
        }
        uf.labels()
    }

    /// Relabel arcs 1, 2, ... in order of first appearance.
    pub fn canonical(&self) -> PDCode {
        let mut map: BTreeMap<u32, u32> = BTreeMap::new();
        let crossings = self
            .crossings
            .iter()
            .map(|x| {
                x.map(|l| {
                    let next = map.len() as u32 + 1;
                    *map.entry(l).or_insert(next)
                })
            })
            .collect();
        PDCode::new(crossings, self.free_loops).expect("relabeling preserves validity")
    }

    /// Stable text identifying the diagram up to arc relabeling.
    pub fn canonical_key(&self) -> String {
        format!("{};loops={}", self.canonical(), self.free_loops)
    }

    /// Switch every crossing.
    pub fn mirror(&self) -> PDCode {
        let crossings = self
            .crossings
            .iter()
            .zip(&self.signs)
            .map(|(&[i, j, k, l], s)| match s {
                Sign::Positive => [l, i, j, k],
                Sign::Negative => [j, k, l, i],
            })
            .collect();
        PDCode::new(crossings, self.free_loops).expect("mirror preserves validity")
    }

    /// Faces as cyclic lists of arc ends. Walking from an end along its
    /// arc and turning clockwise at the next crossing keeps the face on
    /// the left.
    pub fn faces(&self) -> Vec<Vec<(usize, usize)>> {
        faces_of(&self.dense, &self.ends())
    }

    fn ends(&self) -> Vec<[Occ; 2]> {
        let mut ends = vec![Vec::with_capacity(2); self.labels.len()];
        for (c, x) in self.dense.iter().enumerate() {
            for (p, &a) in x.iter().enumerate() {
                ends[a].push((c, p));
            }
        }
        ends.into_iter().map(|v| [v[0], v[1]]).collect()
    }

    fn trace_components(&mut self, ends: &[[Occ; 2]]) {
        let n = self.labels.len();
        let mut comp = vec![usize::MAX; n];
        let mut count = 0;
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let mut a = start;
            while comp[a] == usize::MAX {
                comp[a] = count;
                let (c, p) = *ends[a]
                    .iter()
                    .find(|&&(c, p)| self.incoming[c][p])
                    .expect("every arc has a head");
                a = self.dense[c][(p + 2) % 4];
            }
            count += 1;
        }
        self.arc_component = comp;
        self.components = count + self.free_loops;
    }

    fn check_planar(&self, ends: &[[Occ; 2]]) -> Result<(), DiagramError> {
        let n = self.dense.len();
        let mut uf = UnionFind::new(n);
        for e in ends {
            uf.union(e[0].0, e[1].0);
        }
        let k = uf.labels().1;
        let f = faces_of(&self.dense, ends).len();
        if f != n + 2 * k {
            return Err(invalid(format!(
                "not planar: {f} faces for {n} crossings in {k} pieces"
            )));
        }
        Ok(())
    }
}

fn other_end(ends: &[[Occ; 2]], a: usize, at: Occ) -> Occ {
    if ends[a][0] == at {
        ends[a][1]
    } else {
        ends[a][0]
    }
}

fn faces_of(dense: &[[usize; 4]], ends: &[[Occ; 2]]) -> Vec<Vec<Occ>> {
    let mut seen = vec![[false; 4]; dense.len()];
    let mut faces = Vec::new();
    for c in 0..dense.len() {
        for p in 0..4 {
            if seen[c][p] {
                continue;
            }
            let mut face = Vec::new();
            let (mut cc, mut pp) = (c, p);
            while !seen[cc][pp] {
                seen[cc][pp] = true;
                face.push((cc, pp));
                let (c2, p2) = other_end(ends, dense[cc][pp], (cc, pp));
                (cc, pp) = (c2, (p2 + 3) % 4);
            }
            faces.push(face);
        }
    }
    faces
}

// Propagate in/out flags: slot 0 is in and slot 2 is out; opposite slots
// differ; the two ends of an arc differ. Unforced components are seeded
// at their first free slot.
fn trace_orientation(dense: &[[usize; 4]], ends: &[[Occ; 2]]) -> Result<Vec<[bool; 4]>, DiagramError> {
    let n = dense.len();
    let mut dir: Vec<[Option<bool>; 4]> = vec![[None; 4]; n];
    let mut stack: Vec<(usize, usize, bool)> = Vec::new();
    for c in 0..n {
        stack.push((c, 0, true));
        stack.push((c, 2, false));
    }
    let mut seed = 0;
    loop {
        while let Some((c, p, v)) = stack.pop() {
            match dir[c][p] {
                Some(old) if old != v => {
                    return Err(invalid(format!(
                        "orientation conflict at arc {} of crossing {c}",
                        dense[c][p]
                    )))
                }
                Some(_) => continue,
                None => {}
            }
            dir[c][p] = Some(v);
            stack.push((c, (p + 2) % 4, !v));
            let (c2, p2) = other_end(ends, dense[c][p], (c, p));
            stack.push((c2, p2, !v));
        }
        while seed < 4 * n && dir[seed / 4][seed % 4].is_some() {
            seed += 1;
        }
        if seed == 4 * n {
            break;
        }
        stack.push((seed / 4, seed % 4, true));
    }
    Ok(dir.into_iter().map(|d| d.map(|x| x.expect("all slots traced"))).collect())
}

/// (n₊, n₋, per-crossing signs).
pub fn compute_signs(pd: &PDCode) -> (usize, usize, Vec<Sign>) {
    (pd.n_plus(), pd.n_minus(), pd.signs.clone())
}

/// Circles of the smoothing chosen by `st`.
pub fn smooth_state(pd: &PDCode, st: State) -> SmoothingResult {
    let (membership, count) = pd.smooth_arcs(st);
    SmoothingResult {
        circle_count: count + pd.free_loops,
        membership,
    }
}

impl fmt::Display for PDCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (c, x) in self.crossings.iter().enumerate() {
            if c > 0 {
                f.write_str(";")?;
            }
            write!(f, "X[{},{},{},{}]", x[0], x[1], x[2], x[3])?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trefoil() -> PDCode {
        braid_to_pd(&[1, 1, 1], 2).unwrap()
    }

    #[test]
    fn standard_trefoil_and_figure_eight() {
        let t = parse_pd("X[1,4,2,5];X[3,6,4,1];X[5,2,6,3]").unwrap();
        assert_eq!((t.n_plus(), t.n_minus(), t.components()), (0, 3, 1));
        let e = parse_pd("X[4,2,5,1];X[8,6,1,5];X[6,3,7,4];X[2,7,3,8]").unwrap();
        assert_eq!((e.n_plus(), e.n_minus()), (2, 2));
    }

    #[test]
    fn signs_of_braids() {
        assert_eq!(compute_signs(&trefoil()).0, 3);
        let m = braid_to_pd(&[-1, -1, -1], 2).unwrap();
        assert_eq!((m.n_plus(), m.n_minus()), (0, 3));
        let u = braid_to_pd(&[1, -1], 2).unwrap();
        assert_eq!((u.n_plus(), u.n_minus(), u.components()), (1, 1, 2));
    }

    #[test]
    fn kink_is_valid() {
        let k = parse_pd("X[1,1,2,2]").unwrap();
        assert_eq!((k.crossing_count(), k.components(), k.n_plus()), (1, 1, 1));
        assert_eq!(k.seifert_circles(), 2);
    }

    #[test]
    fn rejects_bad_codes() {
        assert!(matches!(parse_pd("X[1,2,3,4]"), Err(DiagramError::InvalidDiagram(_))));
        assert!(matches!(parse_pd("X[1,2,1,2]"), Err(DiagramError::InvalidDiagram(_))));
        // consistent orientation but only 3 faces: a virtual code
        let err = parse_pd("X[1,4,2,3];X[3,6,4,5];X[5,2,6,1]").unwrap_err();
        assert!(err.to_string().contains("not planar"));
    }

    #[test]
    fn smoothings_of_the_trefoil() {
        let t = trefoil();
        assert_eq!(smooth_state(&PDCode::unknot(), State(0)).circle_count, 1);
        assert_eq!(smooth_state(&t, State(0)).circle_count, 2);
        assert_eq!(smooth_state(&t, State(0b111)).circle_count, 3);
        assert_eq!(t.oriented_state(), State(0));
        assert_eq!(t.seifert_circles(), 2);
    }

    #[test]
    fn mirror_flips_signs_and_is_an_involution() {
        let e = parse_pd("X[4,2,5,1];X[8,6,1,5];X[6,3,7,4];X[2,7,3,8]").unwrap();
        let m = e.mirror();
        assert_eq!(m.n_plus(), e.n_minus());
        assert_eq!(m.mirror(), e);
        assert_eq!(trefoil().mirror().n_minus(), 3);
    }

    #[test]
    fn canonical_relabels_by_first_appearance() {
        let t = parse_pd("X[10,40,20,50];X[30,60,40,10];X[50,20,60,30]").unwrap();
        assert_eq!(t.canonical().to_string(), "X[1,2,3,4];X[5,6,2,1];X[4,3,6,5]");
        assert_eq!(t.canonical_key(), t.canonical().canonical_key());
    }

    #[test]
    fn faces_satisfy_euler() {
        let e = parse_pd("X[4,2,5,1];X[8,6,1,5];X[6,3,7,4];X[2,7,3,8]").unwrap();
        assert_eq!(e.faces().len(), 6);
        let total: usize = e.faces().iter().map(Vec::len).sum();
        assert_eq!(total, 16);
    }

    #[test]
    fn components_of_links() {
        assert_eq!(braid_to_pd(&[1, 1], 2).unwrap().components(), 2);
        assert_eq!(braid_to_pd(&[1, -2, 1, -2, 1, -2], 3).unwrap().components(), 3);
        assert_eq!(PDCode::unlink(2).components(), 2);
    }
}
