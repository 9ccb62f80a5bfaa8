//! Braid closures.
//!
//! Strand positions are numbered left to right and the braid is read
//! bottom to top. σᵢ (positive letter i) takes the strand at position i
//! over the one at i+1 as a right-handed crossing; a negative letter is
//! its mirror. After the last letter each top arc is identified with the
//! bottom arc at the same position. Positions no letter touches close up
//! into free loops.

use std::collections::BTreeMap;

use super::{DiagramError, PDCode};
use crate::unionfind::UnionFind;

/// PD code of the closure of `word` on `strands` strands.
pub fn braid_to_pd(word: &[i32], strands: usize) -> Result<PDCode, DiagramError> {
    if strands == 0 {
        return Err(DiagramError::InvalidBraid("a braid needs at least one strand".into()));
    }
    for &w in word {
        if w == 0 || w.unsigned_abs() as usize >= strands {
            return Err(DiagramError::InvalidBraid(format!(
                "letter {w} is not a generator on {strands} strands"
            )));
        }
    }
    let mut next = strands as u32;
    let mut fresh = || {
        next += 1;
        next
    };
    let bottom: Vec<u32> = (1..=strands as u32).collect();
    let mut cur = bottom.clone();
    let mut crossings = Vec::with_capacity(word.len());
    for &w in word {
        let i = w.unsigned_abs() as usize - 1;
        let (left, right) = (cur[i], cur[i + 1]);
        let (new_left, new_right) = (fresh(), fresh());
        crossings.push(if w > 0 {
            [right, new_right, new_left, left]
        } else {
            [left, right, new_right, new_left]
        });
        cur[i] = new_left;
        cur[i + 1] = new_right;
    }

    let mut uf = UnionFind::new(next as usize + 1);
    for (&b, &t) in bottom.iter().zip(&cur) {
        uf.union(b as usize, t as usize);
    }
    let used: std::collections::BTreeSet<usize> =
        crossings.iter().flatten().map(|&l| uf.find(l as usize)).collect();
    let free_loops = bottom
        .iter()
        .filter(|&&b| !used.contains(&uf.find(b as usize)))
        .count();

    let mut relabel: BTreeMap<usize, u32> = BTreeMap::new();
    let crossings = crossings
        .into_iter()
        .map(|x| {
            x.map(|l| {
                let r = uf.find(l as usize);
                let n = relabel.len() as u32 + 1;
                *relabel.entry(r).or_insert(n)
            })
        })
        .collect();
    PDCode::new(crossings, free_loops)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_closures() {
        assert_eq!(braid_to_pd(&[1], 2).unwrap().to_string(), "X[1,1,2,2]");
        let t = braid_to_pd(&[1, 1, 1], 2).unwrap();
        assert_eq!((t.crossing_count(), t.arc_count(), t.components()), (3, 6, 1));
        // the trivial braid: a two-crossing diagram of the 2-component unlink
        let u = braid_to_pd(&[1, -1], 2).unwrap();
        assert_eq!((u.crossing_count(), u.components()), (2, 2));
        let v = braid_to_pd(&[1, -2], 3).unwrap();
        assert_eq!((v.crossing_count(), v.components()), (2, 1));
    }

    #[test]
    fn untouched_strands_are_free_loops() {
        let u = braid_to_pd(&[], 2).unwrap();
        assert_eq!((u.crossing_count(), u.free_loops(), u.components()), (0, 2, 2));
        let v = braid_to_pd(&[1], 3).unwrap();
        assert_eq!((v.free_loops(), v.components()), (1, 2));
    }

    #[test]
    fn bad_letters() {
        for (w, n) in [(vec![0], 2), (vec![2], 2), (vec![-3], 3), (vec![], 0)] {
            assert!(matches!(braid_to_pd(&w, n), Err(DiagramError::InvalidBraid(_))));
        }
    }
}
