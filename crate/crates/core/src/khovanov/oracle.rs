//! Kauffman state sum, kept independent of the cube code: circles are
//! counted by walking arc ends through the smoothing rather than by
//! union-find, and the sum is taken over heights and circle counts only.

use std::collections::BTreeMap;

use super::{KhovanovError, DEFAULT_MAX_CROSSINGS};
use crate::diagram::PDCode;
use crate::polyring::LaurentQ;

// Partner slot under each smoothing.
const PARTNER: [[usize; 4]; 2] = [[1, 0, 3, 2], [3, 2, 1, 0]];

fn circles(crossings: &[[u32; 4]], ends: &BTreeMap<u32, [(usize, usize); 2]>, state: u64) -> usize {
    let mut seen = vec![[false; 4]; crossings.len()];
    let mut count = 0;
    for c in 0..crossings.len() {
        for p in 0..4 {
            if seen[c][p] {
                continue;
            }
            count += 1;
            let (mut cc, mut pp) = (c, p);
            while !seen[cc][pp] {
                seen[cc][pp] = true;
                let q = PARTNER[(state >> cc & 1) as usize][pp];
                seen[cc][q] = true;
                let e = ends[&crossings[cc][q]];
                (cc, pp) = if e[0] == (cc, q) { e[1] } else { e[0] };
            }
        }
    }
    count
}

// The over strand leaves through slot 3 exactly at negative crossings.
fn negative_crossings(pd: &PDCode) -> usize {
    (0..pd.crossing_count())
        .filter(|&c| !pd.is_incoming(c, 3))
        .count()
}

/// (−1)^n₋ q^(n₊−2n₋) Σ_s (−q)^(Σs) (q+q⁻¹)^(circles).
pub fn kauffman_oracle(pd: &PDCode) -> Result<LaurentQ, KhovanovError> {
    let n = pd.crossing_count();
    if n > DEFAULT_MAX_CROSSINGS {
        return Err(KhovanovError::TooLarge {
            crossings: n,
            limit: DEFAULT_MAX_CROSSINGS,
        });
    }
    let crossings = pd.crossings();
    let mut ends: BTreeMap<u32, Vec<(usize, usize)>> = BTreeMap::new();
    for (c, x) in crossings.iter().enumerate() {
        for (p, &l) in x.iter().enumerate() {
            ends.entry(l).or_default().push((c, p));
        }
    }
    let ends: BTreeMap<u32, [(usize, usize); 2]> =
        ends.into_iter().map(|(l, v)| (l, [v[0], v[1]])).collect();

    // coefficient table indexed by (height, circles)
    let max_circles = 2 * n + pd.free_loops() + 1;
    let mut counts = vec![vec![0u64; max_circles + 1]; n + 1];
    for s in 0..1u64 << n {
        let k = circles(crossings, &ends, s) + pd.free_loops();
        counts[s.count_ones() as usize][k] += 1;
    }
    let circle = LaurentQ::circle();
    let mut sum = LaurentQ::zero();
    for (h, row) in counts.iter().enumerate() {
        let sign: i64 = if h % 2 == 0 { 1 } else { -1 };
        for (k, &m) in row.iter().enumerate().filter(|(_, &m)| m > 0) {
            let term = LaurentQ::monomial(sign * m as i64, h as i32);
            sum = &sum + &(&circle.pow(k as u32) * &term);
        }
    }
    let n_minus = negative_crossings(pd) as i32;
    let n_plus = n as i32 - n_minus;
    let sum = sum.shift(n_plus - 2 * n_minus);
    Ok(if n_minus % 2 == 0 { sum } else { -&sum })
}
