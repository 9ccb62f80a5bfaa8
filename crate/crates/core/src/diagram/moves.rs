//! R1 and R2 moves on PD codes, their inverses, and random perturbations.
//!
//! R1 inserts a kink on an arc. The arc's label stays on the part before
//! the kink; the part after it and the loop get fresh labels. The two
//! sides are the two planar kinks of a given sign.
//!
//! R2 pushes one arc over another across a face they share. Picture the
//! face between the over arc (top, walked right to left with the face on
//! the left) and the under arc (bottom, walked left to right). The finger
//! crosses the under arc at a left and a right crossing, and the new
//! tuples follow from reading the four directions counterclockwise from
//! the incoming under end.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{DiagramError, PDCode};
use crate::unionfind::UnionFind;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Move {
    R1Plus,
    R1Minus,
    R2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Site {
    /// R1 on the arc with this label.
    Arc { arc: u32, side: Side },
    /// R1 on a crossingless component.
    FreeLoop { side: Side },
    /// R2 pushing `over` across `under`.
    Pair { over: u32, under: u32 },
}

fn bad_site(msg: impl Into<String>) -> DiagramError {
    DiagramError::InvalidSite(msg.into())
}

fn max_label(pd: &PDCode) -> u32 {
    pd.arc_labels().last().copied().unwrap_or(0)
}

fn dense_of(pd: &PDCode, label: u32) -> Result<usize, DiagramError> {
    pd.arc_labels()
        .binary_search(&label)
        .map_err(|_| bad_site(format!("no arc labeled {label}")))
}

// Slot where the arc enters a crossing.
fn head_slot(pd: &PDCode, a: usize) -> (usize, usize) {
    (0..pd.crossing_count())
        .flat_map(|c| (0..4).map(move |p| (c, p)))
        .find(|&(c, p)| pd.dense_crossing(c)[p] == a && pd.is_incoming(c, p))
        .expect("every arc has a head")
}

fn kink(mv: Move, side: Side, a: u32, b: u32, n: u32) -> Result<[u32; 4], DiagramError> {
    Ok(match (mv, side) {
        (Move::R1Plus, Side::Left) => [a, b, n, n],
        (Move::R1Plus, Side::Right) => [n, n, b, a],
        (Move::R1Minus, Side::Left) => [a, n, n, b],
        (Move::R1Minus, Side::Right) => [n, a, b, n],
        (Move::R2, _) => return Err(bad_site("R2 needs a pair of arcs")),
    })
}

/// Apply a move at a site.
pub fn reidemeister_move(pd: &PDCode, mv: Move, site: &Site) -> Result<PDCode, DiagramError> {
    let mut crossings = pd.crossings().to_vec();
    let m = max_label(pd);
    match (*site, mv) {
        (Site::FreeLoop { side }, Move::R1Plus | Move::R1Minus) => {
            if pd.free_loops() == 0 {
                return Err(bad_site("no free loop"));
            }
            crossings.push(kink(mv, side, m + 1, m + 1, m + 2)?);
            PDCode::new(crossings, pd.free_loops() - 1)
        }
        (Site::Arc { arc, side }, Move::R1Plus | Move::R1Minus) => {
            let (c, p) = head_slot(pd, dense_of(pd, arc)?);
            let (b, n) = (m + 1, m + 2);
            crossings[c][p] = b;
            crossings.push(kink(mv, side, arc, b, n)?);
            PDCode::new(crossings, pd.free_loops())
        }
        (Site::Pair { over, under }, Move::R2) => r2(pd, crossings, over, under),
        _ => Err(bad_site("site does not fit the move")),
    }
}

fn r2(pd: &PDCode, mut crossings: Vec<[u32; 4]>, a: u32, b: u32) -> Result<PDCode, DiagramError> {
    if a == b {
        return Err(bad_site("R2 needs two distinct arcs"));
    }
    let (da, db) = (dense_of(pd, a)?, dense_of(pd, b)?);
    // Walking an end (c, p) leaves crossing c, so the walk agrees with the
    // arc's orientation iff that end is outgoing.
    let (a_agrees, b_agrees) = pd
        .faces()
        .iter()
        .find_map(|face| {
            let dir = |x: usize| {
                face.iter()
                    .find(|&&(c, p)| pd.dense_crossing(c)[p] == x)
                    .map(|&(c, p)| !pd.is_incoming(c, p))
            };
            Some((dir(da)?, dir(db)?))
        })
        .ok_or_else(|| bad_site(format!("arcs {a} and {b} share no face")))?;

    let m = max_label(pd);
    let (a3, a2, b3, b2) = (m + 1, m + 2, m + 3, m + 4);
    let (ca, pa) = head_slot(pd, da);
    let (cb, pb) = head_slot(pd, db);
    crossings[ca][pa] = a3;
    crossings[cb][pb] = b3;
    let (a_left, a_right) = if a_agrees { (a3, a) } else { (a, a3) };
    if b_agrees {
        crossings.push([b, a2, b2, a_left]);
        crossings.push([b2, a2, b3, a_right]);
    } else {
        crossings.push([b2, a_left, b3, a2]);
        crossings.push([b, a_right, b2, a2]);
    }
    PDCode::new(crossings, pd.free_loops())
}

// Delete crossings and join the arcs in each group into one. A joined arc
// left with no ends becomes a free loop. Joined arcs keep their smallest
// label.
fn remove(pd: &PDCode, drop: &[usize], groups: &[Vec<usize>]) -> PDCode {
    let labels = pd.arc_labels();
    let mut uf = UnionFind::new(labels.len());
    for g in groups {
        for w in g.windows(2) {
            uf.union(w[0], w[1]);
        }
    }
    let mut rep = vec![u32::MAX; labels.len()];
    for (i, &l) in labels.iter().enumerate() {
        let r = uf.find(i);
        rep[r] = rep[r].min(l);
    }
    let mut alive = vec![false; labels.len()];
    let mut crossings = Vec::new();
    for c in (0..pd.crossing_count()).filter(|c| !drop.contains(c)) {
        let x = pd.dense_crossing(c);
        crossings.push(x.map(|a| {
            let r = uf.find(a);
            alive[r] = true;
            rep[r]
        }));
    }
    let mut roots: Vec<usize> = groups.iter().flatten().map(|&a| uf.find(a)).collect();
    roots.sort_unstable();
    roots.dedup();
    let loops = roots.iter().filter(|&&r| !alive[r]).count();
    PDCode::new(crossings, pd.free_loops() + loops).expect("removing a kink or bigon keeps validity")
}

/// Crossings carrying a removable kink.
pub fn r1_kinks(pd: &PDCode) -> Vec<usize> {
    (0..pd.crossing_count())
        .filter(|&c| {
            let x = pd.dense_crossing(c);
            (0..4).any(|p| x[p] == x[(p + 1) % 4])
        })
        .collect()
}

/// Undo a kink at crossing `c`.
pub fn undo_r1(pd: &PDCode, c: usize) -> Result<PDCode, DiagramError> {
    if !r1_kinks(pd).contains(&c) {
        return Err(bad_site(format!("crossing {c} is not a kink")));
    }
    Ok(remove(pd, &[c], &[pd.dense_crossing(c).to_vec()]))
}

/// Pairs of crossings bounding a bigon face where one strand is over at both.
pub fn r2_bigons(pd: &PDCode) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for face in pd.faces() {
        if face.len() != 2 {
            continue;
        }
        let (c1, c2) = (face[0].0, face[1].0);
        if c1 == c2 {
            continue;
        }
        let parity = |c: usize, a: usize| (0..4).find(|&p| pd.dense_crossing(c)[p] == a).map(|p| p % 2);
        let arcs = [pd.dense_crossing(c1)[face[0].1], pd.dense_crossing(c2)[face[1].1]];
        let consistent = arcs.iter().all(|&a| parity(c1, a) == parity(c2, a));
        let mixed = parity(c1, arcs[0]) != parity(c1, arcs[1]);
        if consistent && mixed {
            out.push((c1.min(c2), c1.max(c2)));
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Undo an R2 bigon between crossings `c1` and `c2`.
pub fn undo_r2(pd: &PDCode, c1: usize, c2: usize) -> Result<PDCode, DiagramError> {
    let key = (c1.min(c2), c1.max(c2));
    if !r2_bigons(pd).contains(&key) {
        return Err(bad_site(format!("crossings {c1} and {c2} do not bound an R2 bigon")));
    }
    let (x, y) = (pd.dense_crossing(c1), pd.dense_crossing(c2));
    let under = vec![x[0], x[2], y[0], y[2]];
    let over = vec![x[1], x[3], y[1], y[3]];
    Ok(remove(pd, &[c1, c2], &[under, over]))
}

/// One random R1/R2 move or inverse move.
pub fn random_perturbation<R: Rng>(pd: &PDCode, rng: &mut R) -> PDCode {
    loop {
        let side = if rng.gen() { Side::Left } else { Side::Right };
        let sign = if rng.gen() { Move::R1Plus } else { Move::R1Minus };
        let attempt = match rng.gen_range(0..6) {
            0 | 1 => {
                let site = if pd.arc_count() == 0 || (pd.free_loops() > 0 && rng.gen_bool(0.2)) {
                    Site::FreeLoop { side }
                } else {
                    let arc = *pd.arc_labels().choose(rng).expect("nonempty");
                    Site::Arc { arc, side }
                };
                reidemeister_move(pd, sign, &site)
            }
            2 | 3 => {
                let faces = pd.faces();
                let Some(face) = faces.choose(rng) else { continue };
                let mut arcs: Vec<u32> = face
                    .iter()
                    .map(|&(c, p)| pd.crossings()[c][p])
                    .collect();
                arcs.sort_unstable();
                arcs.dedup();
                if arcs.len() < 2 {
                    continue;
                }
                let pair: Vec<u32> = arcs.choose_multiple(rng, 2).copied().collect();
                reidemeister_move(pd, Move::R2, &Site::Pair { over: pair[0], under: pair[1] })
            }
            4 => match r1_kinks(pd).choose(rng) {
                Some(&c) => undo_r1(pd, c),
                None => continue,
            },
            _ => match r2_bigons(pd).choose(rng) {
                Some(&(c1, c2)) => undo_r2(pd, c1, c2),
                None => continue,
            },
        };
        if let Ok(next) = attempt {
            return next;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{braid_to_pd, parse_pd};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn r1_on_the_unknot() {
        let u = PDCode::unknot();
        let p = reidemeister_move(&u, Move::R1Plus, &Site::FreeLoop { side: Side::Left }).unwrap();
        assert_eq!(p.to_string(), "X[1,1,2,2]");
        assert_eq!((p.n_plus(), p.free_loops()), (1, 0));
        let m = reidemeister_move(&u, Move::R1Minus, &Site::FreeLoop { side: Side::Right }).unwrap();
        assert_eq!(m.n_minus(), 1);
    }

    #[test]
    fn r1_every_variant_on_every_arc() {
        let e = parse_pd("X[4,2,5,1];X[8,6,1,5];X[6,3,7,4];X[2,7,3,8]").unwrap();
        for &arc in e.arc_labels() {
            for mv in [Move::R1Plus, Move::R1Minus] {
                for side in [Side::Left, Side::Right] {
                    let k = reidemeister_move(&e, mv, &Site::Arc { arc, side }).unwrap();
                    assert_eq!(k.crossing_count(), 5);
                    assert_eq!(k.components(), 1);
                    assert_eq!(k.writhe() - e.writhe(), if mv == Move::R1Plus { 1 } else { -1 });
                    let back = undo_r1(&k, 4).unwrap();
                    assert_eq!(back.canonical(), e.canonical());
                }
            }
        }
    }

    #[test]
    fn r2_on_every_face_pair_and_undo() {
        let t = braid_to_pd(&[1, 1, 1], 2).unwrap();
        let mut tried = 0;
        for face in t.faces() {
            let mut arcs: Vec<u32> = face.iter().map(|&(c, p)| t.crossings()[c][p]).collect();
            arcs.dedup();
            for &a in &arcs {
                for &b in &arcs {
                    if a == b {
                        continue;
                    }
                    let r = reidemeister_move(&t, Move::R2, &Site::Pair { over: a, under: b }).unwrap();
                    assert_eq!(r.crossing_count(), 5);
                    assert_eq!(r.writhe(), t.writhe());
                    assert_ne!(r.signs()[3], r.signs()[4]);
                    let back = undo_r2(&r, 3, 4).unwrap();
                    assert_eq!(back, t);
                    tried += 1;
                }
            }
        }
        assert!(tried >= 6);
    }

    #[test]
    fn invalid_sites() {
        let t = braid_to_pd(&[1, 1, 1], 2).unwrap();
        let bad = |mv, s| reidemeister_move(&t, mv, &s).is_err();
        assert!(bad(Move::R1Plus, Site::Arc { arc: 99, side: Side::Left }));
        assert!(bad(Move::R1Plus, Site::FreeLoop { side: Side::Left }));
        assert!(bad(Move::R2, Site::Pair { over: 1, under: 1 }));
        assert!(bad(Move::R2, Site::Arc { arc: 1, side: Side::Left }));
        assert!(undo_r1(&t, 0).is_err());
        assert!(undo_r2(&t, 0, 1).is_err());
    }

    #[test]
    fn random_perturbations_stay_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut pd = braid_to_pd(&[1, -2, 1, -2], 3).unwrap();
        for _ in 0..200 {
            pd = random_perturbation(&pd, &mut rng);
            assert_eq!(pd.components(), 1);
            if pd.crossing_count() > 12 {
                pd = braid_to_pd(&[1, -2, 1, -2], 3).unwrap();
            }
        }
    }
}
