//! Lee homology and the s-invariant.
//!
//! The Lee complex is the cube with X² = 1. Its differential is the
//! Khovanov one plus a part raising q by 4, so the q-degree filters it:
//! F^j is spanned by the generators of q-degree ≥ j. The profile at level
//! j is the rank of H(F^j) → H(C), found after a filtered reduction that
//! only cancels ±1 entries between generators of equal q.
//!
//! For a knot the total rank is 2, and the profile drops from 2 to 1 at
//! s_min and from 1 to 0 at s_max = s_min + 2; then s = s_min + 1.
//!
//! The oriented resolution carries the cycles s_a and s_b. Its circles are
//! labeled a = 1 + X or b = 1 − X so that the two circles meeting at any
//! crossing get different labels (the Seifert graph is bipartite); s_b
//! swaps the two. Adjacent circles then merge to ab = 0, which is why
//! these chains are cycles.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::PDCode;
use crate::homology::rational::{self, Q};
use crate::homology::reduce::{Eliminator, Remainder};
use crate::homology::HomologyError;
use crate::khovanov::{build_complex_with_limit, Flavor, GradedChainComplex, KhovanovError, DEFAULT_MAX_CROSSINGS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LeeError {
    #[error(transparent)]
    Khovanov(#[from] KhovanovError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error("the s-invariant needs a knot, got {0} components")]
    NotAKnot(usize),
    #[error("Lee rank {got} differs from 2^components = {expected}")]
    RankMismatch { expected: usize, got: usize },
    #[error("oriented-resolution chain is not a Lee cycle")]
    NotACycle,
    #[error("s_max = {s_max} is not s_min + 2 = {}", s_min + 2)]
    PropositionViolated { s_min: i32, s_max: i32 },
    #[error("filtration degree {degree} of an oriented-resolution class differs from s_min = {s_min}")]
    CorollaryViolated { degree: i32, s_min: i32 },
}

/// The Lee complex with the q-filtration recorded on its generators.
#[derive(Debug, Clone)]
pub struct FilteredComplex {
    pub complex: GradedChainComplex,
}

/// A chain of the Lee complex: coefficients on the generators of one degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeeClass {
    pub degree: i32,
    pub chain: Vec<(usize, i128)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SInvariant {
    pub s: i32,
    pub lee_rank: usize,
    pub s_min: i32,
    pub s_max: i32,
    pub s_a_degree: i32,
    pub s_b_degree: i32,
    pub profile: BTreeMap<i32, usize>,
}

pub fn build_lee(pd: &PDCode) -> Result<FilteredComplex, LeeError> {
    build_lee_with_limit(pd, DEFAULT_MAX_CROSSINGS)
}

pub fn build_lee_with_limit(pd: &PDCode, max_crossings: usize) -> Result<FilteredComplex, LeeError> {
    Ok(FilteredComplex {
        complex: build_complex_with_limit(pd, Flavor::Lee, max_crossings)?,
    })
}

// Small complex over ℚ left after the filtered reduction.
struct Reduced {
    remainder: Remainder,
    maps: Vec<Vec<Vec<Q>>>,
    ranks: Vec<usize>,
}

impl Reduced {
    fn new(fc: &FilteredComplex, tracked: &[LeeClass]) -> Result<Self, LeeError> {
        let c = &fc.complex;
        let mut e = Eliminator::new(c, |_| true);
        for t in tracked {
            e.track(c, t.degree, &t.chain);
        }
        e.run(|x, y, v| (v == 1 || v == -1) && x.q_degree == y.q_degree)?;
        let remainder = e.finish();
        let maps: Vec<Vec<Vec<Q>>> = remainder.maps.iter().map(|m| rational::from_i128(m)).collect();
        let ranks = maps.iter().map(|m| rational::rank_q(m)).collect();
        Ok(Reduced {
            remainder,
            maps,
            ranks,
        })
    }

    fn total_rank(&self) -> usize {
        let dims: usize = self.remainder.generators.iter().map(Vec::len).sum();
        dims - 2 * self.ranks.iter().sum::<usize>()
    }

    fn levels(&self) -> Option<(i32, i32)> {
        let qs = self.remainder.generators.iter().flatten().map(|g| g.q_degree);
        Some((qs.clone().min()?, qs.max()?))
    }

    // Column vectors spanning the boundaries in degree k.
    fn boundaries(&self, k: usize) -> Vec<Vec<Q>> {
        let Some(m) = k.checked_sub(1).map(|j| &self.maps[j]) else { return Vec::new() };
        let cols = self.remainder.generators[k - 1].len();
        (0..cols).map(|c| m.iter().map(|row| row[c].clone()).collect()).collect()
    }

    // Cycles in degree k supported on generators with q ≥ j.
    fn filtered_cycles(&self, k: usize, j: i32) -> Vec<Vec<Q>> {
        let gens = &self.remainder.generators[k];
        let keep: Vec<usize> = (0..gens.len()).filter(|&g| gens[g].q_degree >= j).collect();
        let sub: Vec<Vec<Q>> = match self.maps.get(k) {
            Some(m) => m.iter().map(|row| keep.iter().map(|&g| row[g].clone()).collect()).collect(),
            None => Vec::new(),
        };
        rational::kernel(&sub, keep.len())
            .into_iter()
            .map(|v| {
                let mut full = vec![Q::default(); gens.len()];
                for (x, &g) in v.into_iter().zip(&keep) {
                    full[g] = x;
                }
                full
            })
            .collect()
    }

    fn image_rank(&self, k: usize, j: i32, extra: Option<&[Q]>) -> (usize, usize) {
        let b = self.boundaries(k);
        let mut vs = b.clone();
        vs.extend(self.filtered_cycles(k, j));
        let with = |mut v: Vec<Vec<Q>>| {
            if let Some(x) = extra {
                v.push(x.to_vec());
            }
            rational::span_rank(&v)
        };
        let zb = rational::span_rank(&vs);
        (zb - rational::span_rank(&b), with(vs) - zb)
    }

    fn profile(&self) -> BTreeMap<i32, usize> {
        let Some((lo, hi)) = self.levels() else { return BTreeMap::new() };
        (lo..=hi + 1)
            .map(|j| {
                let r = (0..self.remainder.generators.len())
                    .map(|k| self.image_rank(k, j, None).0)
                    .sum();
                (j, r)
            })
            .collect()
    }

    // Largest j with the tracked chain in F^j + boundaries.
    fn class_degree(&self, t: usize, degree: i32) -> Option<i32> {
        let k = (degree - self.remainder.min_degree) as usize;
        let v: Vec<Q> = self.remainder.tracked[t].iter().map(|&x| Q::from_integer(x.into())).collect();
        let (lo, hi) = self.levels()?;
        (lo..=hi + 1).rev().find(|&j| self.image_rank(k, j, Some(&v)).1 == 0)
    }
}

/// Total rank of Lee homology over ℚ, checked against 2^components.
pub fn lee_rank(fc: &FilteredComplex, components: usize) -> Result<usize, LeeError> {
    let got = Reduced::new(fc, &[])?.total_rank();
    let expected = 1usize << components;
    if got != expected {
        return Err(LeeError::RankMismatch { expected, got });
    }
    Ok(got)
}

/// Rank of H(F^j) → H(C) for every level j between the extreme q-degrees.
pub fn filtration_profile(fc: &FilteredComplex) -> Result<BTreeMap<i32, usize>, LeeError> {
    Ok(Reduced::new(fc, &[])?.profile())
}

/// The chains s_a and s_b on the oriented resolution, verified to be cycles.
pub fn oriented_resolution_generators(pd: &PDCode) -> Result<(LeeClass, LeeClass), LeeError> {
    let fc = build_lee(pd)?;
    oriented_classes(pd, &fc.complex)
}

fn oriented_classes(pd: &PDCode, c: &GradedChainComplex) -> Result<(LeeClass, LeeClass), LeeError> {
    let o = pd.oriented_state();
    let (membership, arc_circles) = pd.smooth_arcs(o);
    let k = arc_circles + pd.free_loops();
    let mut adj = vec![Vec::new(); k];
    for cr in 0..pd.crossing_count() {
        let x = pd.dense_crossing(cr);
        let (a, b) = (membership[x[0]], membership[x[2]]);
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut color = vec![u8::MAX; k];
    for start in 0..k {
        if color[start] != u8::MAX {
            continue;
        }
        color[start] = 0;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if color[w] == u8::MAX {
                    color[w] = 1 - color[v];
                    queue.push_back(w);
                } else if color[w] == color[v] {
                    return Err(LeeError::NotACycle);
                }
            }
        }
    }
    let degree = o.ones() as i32 - pd.n_minus() as i32;
    let gens = c.generators(degree);
    let offset = gens
        .iter()
        .position(|g| g.state == o)
        .expect("oriented state is a vertex of the cube");
    let chain = |flip: u8| -> Vec<(usize, i128)> {
        (0..1u32 << k)
            .map(|labels| {
                // a = 1 + X, b = 1 − X: each X on a b-circle contributes −1
                let negs = (0..k)
                    .filter(|&circle| labels >> circle & 1 == 1 && color[circle] ^ flip == 1)
                    .count();
                (offset + labels as usize, if negs % 2 == 0 { 1 } else { -1 })
            })
            .collect()
    };
    let classes = (
        LeeClass { degree, chain: chain(0) },
        LeeClass { degree, chain: chain(1) },
    );
    for cl in [&classes.0, &classes.1] {
        if let Some(d) = c.differential(degree) {
            let mut v = vec![0i64; gens.len()];
            for &(g, x) in &cl.chain {
                v[g] = x as i64;
            }
            if d.apply(&v).iter().any(|&x| x != 0) {
                return Err(LeeError::NotACycle);
            }
        }
    }
    Ok(classes)
}

/// The s-invariant of a knot, with the data it was read from.
pub fn s_invariant(pd: &PDCode) -> Result<SInvariant, LeeError> {
    s_invariant_of(pd, &build_lee(pd)?)
}

/// The s-invariant from an already built Lee complex of `pd`.
pub fn s_invariant_of(pd: &PDCode, fc: &FilteredComplex) -> Result<SInvariant, LeeError> {
    if pd.components() != 1 {
        return Err(LeeError::NotAKnot(pd.components()));
    }
    let (sa, sb) = oriented_classes(pd, &fc.complex)?;
    let red = Reduced::new(fc, &[sa.clone(), sb.clone()])?;
    let got = red.total_rank();
    if got != 2 {
        return Err(LeeError::RankMismatch { expected: 2, got });
    }
    let profile = red.profile();
    let s_min = profile.iter().filter(|e| *e.1 == 2).map(|e| *e.0).max();
    let s_max = profile.iter().filter(|e| *e.1 >= 1).map(|e| *e.0).max();
    let (Some(s_min), Some(s_max)) = (s_min, s_max) else {
        return Err(LeeError::RankMismatch { expected: 2, got: 0 });
    };
    if s_max != s_min + 2 {
        return Err(LeeError::PropositionViolated { s_min, s_max });
    }
    let mut degrees = [0; 2];
    for (t, cl) in [&sa, &sb].into_iter().enumerate() {
        let degree = red.class_degree(t, cl.degree).ok_or(LeeError::NotACycle)?;
        if degree != s_min {
            return Err(LeeError::CorollaryViolated { degree, s_min });
        }
        degrees[t] = degree;
    }
    Ok(SInvariant {
        s: s_min + 1,
        lee_rank: got,
        s_min,
        s_max,
        s_a_degree: degrees[0],
        s_b_degree: degrees[1],
        profile,
    })
}

/// ⌈|s|/2⌉, a lower bound for the slice genus.
pub fn slice_genus_lower_bound(s: i32) -> i32 {
    (s.abs() + 1) / 2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{braid_to_pd, catalog, parse_pd};

    #[test]
    fn unknot() {
        let u = PDCode::unknot();
        let fc = build_lee(&u).unwrap();
        assert_eq!(fc.complex.generator_count(), 2);
        assert_eq!(lee_rank(&fc, 1).unwrap(), 2);
        let p = filtration_profile(&fc).unwrap();
        assert_eq!(p, BTreeMap::from([(-1, 2), (0, 1), (1, 1), (2, 0)]));
        let (a, b) = oriented_resolution_generators(&u).unwrap();
        assert_eq!(a.chain, vec![(0, 1), (1, 1)]);
        assert_eq!(b.chain, vec![(0, 1), (1, -1)]);
        assert_eq!(s_invariant(&u).unwrap().s, 0);
    }

    #[test]
    fn kink_and_hopf_ranks() {
        let k = braid_to_pd(&[1], 2).unwrap();
        assert_eq!(lee_rank(&build_lee(&k).unwrap(), 1).unwrap(), 2);
        let h = braid_to_pd(&[1, 1], 2).unwrap();
        assert_eq!(lee_rank(&build_lee(&h).unwrap(), 2).unwrap(), 4);
        assert!(matches!(
            lee_rank(&build_lee(&h).unwrap(), 1),
            Err(LeeError::RankMismatch { expected: 2, got: 4 })
        ));
        assert_eq!(s_invariant(&h), Err(LeeError::NotAKnot(2)));
    }

    #[test]
    fn trefoils_and_figure_eight() {
        let t = braid_to_pd(&[1, 1, 1], 2).unwrap();
        let s = s_invariant(&t).unwrap();
        assert_eq!((s.s, s.s_min, s.s_max), (2, 1, 3));
        let jumps: Vec<i32> = s.profile.iter().filter(|e| *e.0 > s.s_min - 4).map(|e| *e.1 as i32).collect();
        assert!(jumps.windows(2).all(|w| w[0] >= w[1]));
        assert_eq!(s_invariant(&t.mirror()).unwrap().s, -2);
        let e = parse_pd("X[4,2,5,1];X[8,6,1,5];X[6,3,7,4];X[2,7,3,8]").unwrap();
        assert_eq!(s_invariant(&e).unwrap().s, 0);
    }

    #[test]
    fn torus_knot_t25() {
        let s = s_invariant(&braid_to_pd(&[1, 1, 1, 1, 1], 2).unwrap()).unwrap();
        assert_eq!(s.s, 4);
        assert_eq!(slice_genus_lower_bound(s.s), 2);
    }

    #[test]
    fn slice_bounds() {
        assert_eq!(slice_genus_lower_bound(0), 0);
        assert_eq!(slice_genus_lower_bound(2), 1);
        assert_eq!(slice_genus_lower_bound(-4), 2);
    }

    #[test]
    fn catalog_knots() {
        for d in catalog::knot_diagrams().into_iter().filter(|d| d.pd.crossing_count() <= 8) {
            let s = s_invariant(&d.pd).unwrap_or_else(|e| panic!("{}: {e}", d.name));
            assert_eq!(s.s % 2, 0, "{}", d.name);
            assert_eq!(s_invariant(&d.pd.mirror()).unwrap().s, -s.s, "{}", d.name);
        }
    }
}
