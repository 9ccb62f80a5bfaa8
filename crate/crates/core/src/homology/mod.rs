//! Exact homology of integer chain complexes.
//!
//! Khovanov complexes preserve q, so homology is computed one q-degree at a
//! time. Each block is first shrunk by cancelling ±1 entries, which is a
//! homotopy equivalence; the small remainder then goes through Smith normal
//! form over arbitrary-precision integers. The betti number in degree i is
//! dim Cᵢ − rank dᵢ − rank dᵢ₋₁ and the torsion comes from the invariant
//! factors of dᵢ₋₁ above 1, split into prime powers.

pub(crate) mod rational;
pub(crate) mod reduce;
mod snf;
mod sparse;

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::khovanov::GradedChainComplex;
use crate::polyring::LaurentQ;

pub use snf::{mat_mul, prime_power_parts, smith_normal_form, smith_normal_form_with_transforms, DenseMatrix, SNFResult};
pub use sparse::SparseMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomologyError {
    #[error("not a complex: d∘d ≠ 0")]
    NotAComplex,
    #[error("differential does not preserve q-degree")]
    NotGraded,
    #[error("entry overflow during elimination")]
    Overflow,
    #[error("torsion order {0} does not fit in 64 bits")]
    HugeTorsion(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct HomologyEntry {
    pub betti: usize,
    /// Orders of the cyclic torsion summands, as prime powers.
    pub torsion: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct TableRow {
    i: i32,
    q: i32,
    betti: usize,
    torsion: Vec<u64>,
}

/// Homology groups by (homological degree, q-degree). Only nonzero groups
/// are stored.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(into = "Vec<TableRow>", from = "Vec<TableRow>")]
pub struct HomologyTable {
    pub entries: BTreeMap<(i32, i32), HomologyEntry>,
}

impl From<HomologyTable> for Vec<TableRow> {
    fn from(t: HomologyTable) -> Self {
        t.entries
            .into_iter()
            .map(|((i, q), e)| TableRow {
                i,
                q,
                betti: e.betti,
                torsion: e.torsion,
            })
            .collect()
    }
}

impl From<Vec<TableRow>> for HomologyTable {
    fn from(rows: Vec<TableRow>) -> Self {
        HomologyTable {
            entries: rows
                .into_iter()
                .map(|r| {
                    (
                        (r.i, r.q),
                        HomologyEntry {
                            betti: r.betti,
                            torsion: r.torsion,
                        },
                    )
                })
                .collect(),
        }
    }
}

impl HomologyTable {
    fn insert(&mut self, i: i32, q: i32, entry: HomologyEntry) {
        if entry.betti > 0 || !entry.torsion.is_empty() {
            self.entries.insert((i, q), entry);
        }
    }

    pub fn total_rank(&self) -> usize {
        self.entries.values().map(|e| e.betti).sum()
    }

    /// Number of cyclic torsion summands of the given order.
    pub fn torsion_count(&self, order: u64) -> usize {
        self.entries
            .values()
            .map(|e| e.torsion.iter().filter(|&&t| t == order).count())
            .sum()
    }

    pub fn torsion_summands(&self) -> usize {
        self.entries.values().map(|e| e.torsion.len()).sum()
    }

    pub fn betti(&self) -> BTreeMap<(i32, i32), usize> {
        self.entries
            .iter()
            .filter(|e| e.1.betti > 0)
            .map(|(&k, e)| (k, e.betti))
            .collect()
    }

    /// Σ (−1)^i q^q betti(i, q).
    pub fn euler_characteristic(&self) -> LaurentQ {
        let mut out = LaurentQ::zero();
        for (&(i, q), e) in &self.entries {
            let sign: i64 = if i.rem_euclid(2) == 0 { 1 } else { -1 };
            out.add_monomial(sign * e.betti as i64, q);
        }
        out
    }
}

fn check(c: &GradedChainComplex) -> Result<Vec<i32>, HomologyError> {
    if !c.d_squared_is_zero() {
        return Err(HomologyError::NotAComplex);
    }
    if !c.preserves_q() {
        return Err(HomologyError::NotGraded);
    }
    let qs: BTreeSet<i32> = c
        .degrees()
        .flat_map(|i| c.generators(i).iter().map(|g| g.q_degree))
        .collect();
    Ok(qs.into_iter().collect())
}

fn unit(v: i128) -> bool {
    v == 1 || v == -1
}

fn reduced_block(c: &GradedChainComplex, q: i32) -> Result<reduce::Remainder, HomologyError> {
    let mut e = reduce::Eliminator::new(c, |g| g.q_degree == q);
    e.run(|_, _, v| unit(v))?;
    Ok(e.finish())
}

fn to_big(m: &[Vec<i128>]) -> DenseMatrix {
    m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

/// Integral homology of a q-graded complex.
pub fn integral_homology(c: &GradedChainComplex) -> Result<HomologyTable, HomologyError> {
    let qs = check(c)?;
    let blocks: Vec<Vec<(i32, HomologyEntry)>> = qs
        .par_iter()
        .map(|&q| {
            let r = reduced_block(c, q)?;
            let snfs: Vec<SNFResult> = r.maps.iter().map(|m| smith_normal_form(&to_big(m))).collect();
            let mut out = Vec::new();
            for (k, gens) in r.generators.iter().enumerate() {
                let rank_out = if k < snfs.len() { snfs[k].rank() } else { 0 };
                let incoming = k.checked_sub(1).map(|j| &snfs[j]);
                let rank_in = incoming.map_or(0, SNFResult::rank);
                let mut torsion = Vec::new();
                for f in incoming.map_or(&[][..], |s| &s.factors[..]) {
                    if !f.is_one() {
                        let n = f.to_u64().ok_or_else(|| HomologyError::HugeTorsion(f.to_string()))?;
                        torsion.extend(prime_power_parts(n));
                    }
                }
                torsion.sort_unstable();
                let betti = gens.len() - rank_out - rank_in;
                out.push((
                    r.min_degree + k as i32,
                    HomologyEntry { betti, torsion },
                ));
            }
            Ok(out)
        })
        .collect::<Result<_, HomologyError>>()?;
    let mut table = HomologyTable::default();
    for (q, block) in qs.iter().zip(blocks) {
        for (i, e) in block {
            table.insert(i, *q, e);
        }
    }
    Ok(table)
}

/// Ranks of homology over ℚ per (i, q).
pub fn rational_betti(c: &GradedChainComplex) -> Result<BTreeMap<(i32, i32), usize>, HomologyError> {
    let qs = check(c)?;
    let blocks: Vec<Vec<(i32, usize)>> = qs
        .par_iter()
        .map(|&q| {
            let r = reduced_block(c, q)?;
            let ranks: Vec<usize> = r.maps.iter().map(|m| rational::rank(m)).collect();
            Ok(r.generators
                .iter()
                .enumerate()
                .map(|(k, gens)| {
                    let out = ranks.get(k).copied().unwrap_or(0);
                    let inn = k.checked_sub(1).map_or(0, |j| ranks[j]);
                    (r.min_degree + k as i32, gens.len() - out - inn)
                })
                .collect())
        })
        .collect::<Result<_, HomologyError>>()?;
    let mut out = BTreeMap::new();
    for (q, block) in qs.iter().zip(blocks) {
        for (i, b) in block {
            if b > 0 {
                out.insert((i, *q), b);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{braid_to_pd, catalog, PDCode, State};
    use crate::khovanov::{build_complex, graded_euler_characteristic, Flavor, Generator};

    fn gen(i: i32) -> Generator {
        Generator {
            state: State(0),
            labels: 0,
            circles: 1,
            hom_degree: i,
            q_degree: 0,
        }
    }

    #[test]
    fn times_two() {
        let c = GradedChainComplex::from_parts(
            Flavor::Kh,
            0,
            vec![vec![gen(0)], vec![gen(1)]],
            vec![SparseMatrix::from_dense(&[vec![2]])],
        );
        let t = integral_homology(&c).unwrap();
        assert_eq!(t.entries.len(), 1);
        assert_eq!(t.entries[&(1, 0)], HomologyEntry { betti: 0, torsion: vec![2] });
        assert!(rational_betti(&c).unwrap().is_empty());
    }

    #[test]
    fn not_a_complex() {
        let c = GradedChainComplex::from_parts(
            Flavor::Kh,
            0,
            vec![vec![gen(0)], vec![gen(1)], vec![gen(2)]],
            vec![SparseMatrix::from_dense(&[vec![1]]), SparseMatrix::from_dense(&[vec![1]])],
        );
        assert_eq!(integral_homology(&c), Err(HomologyError::NotAComplex));
    }

    #[test]
    fn unknot_and_unlink() {
        let c = build_complex(&PDCode::unknot(), Flavor::Kh).unwrap();
        let b = rational_betti(&c).unwrap();
        assert_eq!(b, BTreeMap::from([((0, 1), 1), ((0, -1), 1)]));
        let t = integral_homology(&c).unwrap();
        assert_eq!(t.betti(), b);
        assert_eq!(t.torsion_summands(), 0);
        let u = build_complex(&PDCode::unlink(2), Flavor::Kh).unwrap();
        let b = rational_betti(&u).unwrap();
        assert_eq!((b.len(), b.values().sum::<usize>()), (3, 4));
    }

    #[test]
    fn trefoil() {
        let c = build_complex(&braid_to_pd(&[1, 1, 1], 2).unwrap(), Flavor::Kh).unwrap();
        let t = integral_homology(&c).unwrap();
        assert_eq!(t.total_rank(), 4);
        assert_eq!((t.torsion_summands(), t.torsion_count(2)), (1, 1));
        assert_eq!(t.entries[&(3, 7)].torsion, vec![2]);
        assert_eq!(t.euler_characteristic(), graded_euler_characteristic(&c));
        let json = serde_json::to_string(&t).unwrap();
        assert!(json.starts_with(r#"[{"i":0,"q":1,"betti":1,"torsion":[]}"#));
        assert_eq!(serde_json::from_str::<HomologyTable>(&json).unwrap(), t);
    }

    #[test]
    fn figure_eight_table() {
        let pd = crate::diagram::parse_pd("X[4,2,5,1];X[8,6,1,5];X[6,3,7,4];X[2,7,3,8]").unwrap();
        let t = integral_homology(&build_complex(&pd, Flavor::Kh).unwrap()).unwrap();
        let betti: Vec<(i32, i32)> = t.betti().into_keys().collect();
        assert_eq!(betti, vec![(-2, -5), (-1, -1), (0, -1), (0, 1), (1, 1), (2, 5)]);
        assert_eq!(t.entries[&(-1, -3)].torsion, vec![2]);
        assert_eq!(t.entries[&(2, 3)].torsion, vec![2]);
        assert_eq!(t.torsion_summands(), 2);
    }

    #[test]
    fn integral_and_rational_agree_on_the_catalog() {
        for d in catalog::test_diagrams().into_iter().filter(|d| d.pd.crossing_count() <= 8) {
            let c = build_complex(&d.pd, Flavor::Kh).unwrap();
            let t = integral_homology(&c).unwrap();
            assert_eq!(t.betti(), rational_betti(&c).unwrap(), "{}", d.name);
            assert_eq!(t.euler_characteristic(), graded_euler_characteristic(&c), "{}", d.name);
        }
    }

    #[test]
    fn lee_complex_is_not_graded() {
        let c = build_complex(&braid_to_pd(&[1, 1, 1], 2).unwrap(), Flavor::Lee).unwrap();
        assert_eq!(integral_homology(&c), Err(HomologyError::NotGraded));
    }
}
