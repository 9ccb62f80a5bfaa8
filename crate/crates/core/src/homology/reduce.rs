//! Gaussian elimination on chain complexes.
//!
//! If d(x) has coefficient φ = ±1 on y, the pair (x, y) spans an acyclic
//! summand and can be cancelled: x and y are removed and every entry
//! x' -> y' becomes d(x'→y') − d(x'→y)·φ⁻¹·d(x→y'). The result is chain
//! homotopy equivalent to the input. Chains in y's degree follow the
//! projection v ↦ v − v_y·φ⁻¹·d(x), restricted to the survivors.
//!
//! When pivots are only taken between generators of equal q-degree, the
//! equivalence respects the q-filtration, so the same engine serves the
//! Lee complex.

use std::collections::{BTreeMap, HashMap};

use crate::khovanov::{Generator, GradedChainComplex};

use super::HomologyError;

pub(crate) struct Remainder {
    pub min_degree: i32,
    /// Surviving generators per degree, in input order.
    pub generators: Vec<Vec<Generator>>,
    /// `maps[k]` is the dense matrix from degree k to k + 1 (rows × cols).
    pub maps: Vec<Vec<Vec<i128>>>,
    /// Tracked chains in surviving coordinates, one vector per chain.
    pub tracked: Vec<Vec<i128>>,
}

pub(crate) struct Eliminator {
    degree: Vec<u32>,
    gens: Vec<Generator>,
    alive: Vec<bool>,
    out: Vec<HashMap<u32, i128>>,
    inn: Vec<HashMap<u32, i128>>,
    tracked: Vec<(u32, BTreeMap<u32, i128>)>,
    min_degree: i32,
    degree_count: usize,
}

fn overflow() -> HomologyError {
    HomologyError::Overflow
}

impl Eliminator {
    /// Restrict a complex to the generators passing `keep`.
    pub fn new(c: &GradedChainComplex, keep: impl Fn(&Generator) -> bool) -> Self {
        let mut degree = Vec::new();
        let mut gens = Vec::new();
        let mut ids: Vec<Vec<u32>> = Vec::new();
        for (k, i) in c.degrees().enumerate() {
            let mut row = Vec::new();
            for g in c.generators(i) {
                if keep(g) {
                    row.push(gens.len() as u32);
                    gens.push(*g);
                    degree.push(k as u32);
                } else {
                    row.push(u32::MAX);
                }
            }
            ids.push(row);
        }
        let n = gens.len();
        let mut out = vec![HashMap::new(); n];
        let mut inn = vec![HashMap::new(); n];
        for (k, i) in c.degrees().enumerate() {
            let Some(d) = c.differential(i) else { continue };
            for (r, col, v) in d.entries() {
                let (x, y) = (ids[k][col], ids[k + 1][r]);
                if x != u32::MAX && y != u32::MAX {
                    out[x as usize].insert(y, v as i128);
                    inn[y as usize].insert(x, v as i128);
                }
            }
        }
        Eliminator {
            degree,
            gens,
            alive: vec![true; n],
            out,
            inn,
            tracked: Vec::new(),
            min_degree: c.min_degree(),
            degree_count: ids.len(),
        }
    }

    /// Follow a chain of degree `i`, given as (generator index in that
    /// degree of the input complex, coefficient) pairs, through the
    /// eliminations. Must be called before any elimination.
    pub fn track(&mut self, c: &GradedChainComplex, i: i32, chain: &[(usize, i128)]) {
        let k = (i - c.min_degree()) as u32;
        let start: usize = c.degrees().take_while(|&d| d < i).map(|d| c.generators(d).len()).sum();
        // the eliminator keeps every generator when tracking is used
        assert_eq!(self.gens.len(), c.generator_count(), "tracking needs the full complex");
        let v = chain
            .iter()
            .filter(|e| e.1 != 0)
            .map(|&(idx, coef)| ((start + idx) as u32, coef))
            .collect();
        self.tracked.push((k, v));
    }

    fn cost(&self, x: u32, y: u32) -> usize {
        (self.out[x as usize].len() - 1) * (self.inn[y as usize].len() - 1)
    }

    /// Cancel pivots accepted by `ok(x, y, coefficient)` until none are left.
    pub fn run(
        &mut self,
        ok: impl Fn(&Generator, &Generator, i128) -> bool,
    ) -> Result<(), HomologyError> {
        loop {
            let mut changed = false;
            for x in 0..self.gens.len() as u32 {
                if !self.alive[x as usize] {
                    continue;
                }
                let pivot = self.out[x as usize]
                    .iter()
                    .filter(|&(&y, &v)| ok(&self.gens[x as usize], &self.gens[y as usize], v))
                    .map(|(&y, _)| (self.cost(x, y), y))
                    .min();
                if let Some((_, y)) = pivot {
                    self.cancel(x, y)?;
                    changed = true;
                }
            }
            if !changed {
                return Ok(());
            }
        }
    }

    fn cancel(&mut self, x: u32, y: u32) -> Result<(), HomologyError> {
        let phi = self.out[x as usize][&y];
        debug_assert!(phi == 1 || phi == -1);
        let gamma: Vec<(u32, i128)> = self.out[x as usize]
            .iter()
            .filter(|e| *e.0 != y)
            .map(|(&k, &v)| (k, v))
            .collect();
        let delta: Vec<(u32, i128)> = self.inn[y as usize]
            .iter()
            .filter(|e| *e.0 != x)
            .map(|(&k, &v)| (k, v))
            .collect();
        for &(x2, b) in &delta {
            for &(y2, c) in &gamma {
                let dv = b.checked_mul(c).and_then(|p| p.checked_mul(phi)).ok_or_else(overflow)?;
                let e = self.out[x2 as usize].entry(y2).or_insert(0);
                *e = e.checked_sub(dv).ok_or_else(overflow)?;
                if *e == 0 {
                    self.out[x2 as usize].remove(&y2);
                    self.inn[y2 as usize].remove(&x2);
                } else {
                    self.inn[y2 as usize].insert(x2, *e);
                }
            }
        }
        let ky = self.degree[y as usize];
        for (k, v) in &mut self.tracked {
            if *k == ky {
                if let Some(vy) = v.remove(&y) {
                    for &(y2, c) in &gamma {
                        let dv = vy.checked_mul(c).and_then(|p| p.checked_mul(phi)).ok_or_else(overflow)?;
                        let e = v.entry(y2).or_insert(0);
                        *e = e.checked_sub(dv).ok_or_else(overflow)?;
                        if *e == 0 {
                            v.remove(&y2);
                        }
                    }
                }
            } else {
                v.remove(&x);
            }
        }
        for z in [x, y] {
            let outs: Vec<u32> = self.out[z as usize].keys().copied().collect();
            for t in outs {
                self.inn[t as usize].remove(&z);
            }
            let ins: Vec<u32> = self.inn[z as usize].keys().copied().collect();
            for s in ins {
                self.out[s as usize].remove(&z);
            }
            self.out[z as usize] = HashMap::new();
            self.inn[z as usize] = HashMap::new();
            self.alive[z as usize] = false;
        }
        Ok(())
    }

    pub fn finish(self) -> Remainder {
        let mut position = vec![u32::MAX; self.gens.len()];
        let mut generators = vec![Vec::new(); self.degree_count];
        for (g, &k) in self.degree.iter().enumerate() {
            if self.alive[g] {
                position[g] = generators[k as usize].len() as u32;
                generators[k as usize].push(self.gens[g]);
            }
        }
        let mut maps: Vec<Vec<Vec<i128>>> = (0..self.degree_count.saturating_sub(1))
            .map(|k| vec![vec![0; generators[k].len()]; generators[k + 1].len()])
            .collect();
        for (x, row) in self.out.iter().enumerate() {
            if !self.alive[x] {
                continue;
            }
            let k = self.degree[x] as usize;
            for (&y, &v) in row {
                maps[k][position[y as usize] as usize][position[x] as usize] = v;
            }
        }
        let tracked = self
            .tracked
            .iter()
            .map(|(k, v)| {
                let mut dense = vec![0; generators[*k as usize].len()];
                for (&g, &c) in v {
                    dense[position[g as usize] as usize] = c;
                }
                dense
            })
            .collect();
        Remainder {
            min_degree: self.min_degree,
            generators,
            maps,
            tracked,
        }
    }
}
