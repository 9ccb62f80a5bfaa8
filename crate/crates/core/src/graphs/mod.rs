//! Planar trivalent graphs with blue loops and oriented red edges.
//!
//! Every vertex has two blue half-edges and one red one. At a sink both blue
//! edges point in and the red edge points out; at a source it is the other
//! way round. The planar embedding is a rotation system: the counterclockwise
//! order of the three half-edges ("darts") at each vertex. Faces are the
//! orbits of `phi = sigma . alpha`, where `alpha` flips a dart to the other
//! end of its edge and `sigma` rotates counterclockwise at a vertex.
//!
//! JSON schema:
//!
//! ```text
//! {"vertices":[{"id":str,"rotation":[edge id, edge id, edge id]}],
//!  "edges":[{"id":str,"color":"blue"|"red","from":vertex,"to":vertex}],
//!  "blue_circles":int,"red_circles":int}
//! ```

pub mod random;

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::polyring::LaurentQ;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("malformed graph: {0}")]
    Malformed(String),
    #[error("face {0} is not a reducible bigon or square of this graph")]
    InvalidFace(usize),
    #[error("no bigon or square found while {0} red edges remain")]
    ReductionStuck(usize),
}

fn one_line<T: Serialize>(x: &T) -> String {
    serde_json::to_string(x).expect("serializes")
}

fn malformed(msg: impl Into<String>) -> GraphError {
    GraphError::Malformed(msg.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeColor {
    Blue,
    Red,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Edge {
    color: EdgeColor,
    from: usize,
    to: usize,
}

/// Dart `2e` is the tail of edge `e`, dart `2e + 1` its head.
pub type Dart = usize;

fn edge_of(d: Dart) -> usize {
    d / 2
}

fn is_head(d: Dart) -> bool {
    d % 2 == 1
}

/// A planar trivalent graph. Vertices and edges may be tombstoned during
/// reduction; [`TrivalentGraph::compact`] renumbers them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrivalentGraph {
    rotation: Vec<Option<[Dart; 3]>>,
    edges: Vec<Option<Edge>>,
    blue_circles: u32,
    red_circles: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct VertexJson {
    id: String,
    rotation: [String; 3],
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct EdgeJson {
    id: String,
    color: EdgeColor,
    from: String,
    to: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct GraphJson {
    #[serde(default)]
    vertices: Vec<VertexJson>,
    #[serde(default)]
    edges: Vec<EdgeJson>,
    #[serde(default)]
    blue_circles: u32,
    #[serde(default)]
    red_circles: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum FaceKind {
    CentralBigon,
    SideBigonLeft,
    SideBigonRight,
    SquareOneLoop,
    SquareTwoLoops,
}

/// A face, named by its least dart, with the dart sequence of its boundary walk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub id: Dart,
    pub darts: Vec<Dart>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceDescriptor {
    pub face: Face,
    pub kind: FaceKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CupBasisElement {
    pub dots: Vec<bool>,
    pub q_degree: i32,
}

impl TrivalentGraph {
    pub fn empty() -> Self {
        Self::circles(0)
    }

    pub fn circles(n: u32) -> Self {
        TrivalentGraph {
            rotation: Vec::new(),
            edges: Vec::new(),
            blue_circles: n,
            red_circles: 0,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, GraphError> {
        let raw: GraphJson =
            serde_json::from_str(text).map_err(|e| malformed(format!("json: {e}")))?;
        let mut vpos = HashMap::new();
        for (i, v) in raw.vertices.iter().enumerate() {
            if vpos.insert(v.id.as_str(), i).is_some() {
                return Err(malformed(format!("duplicate vertex {}", v.id)));
            }
        }
        let mut epos = HashMap::new();
        let mut edges = Vec::new();
        for (i, e) in raw.edges.iter().enumerate() {
            if epos.insert(e.id.as_str(), i).is_some() {
                return Err(malformed(format!("duplicate edge {}", e.id)));
            }
            let end = |v: &str| {
                vpos.get(v)
                    .copied()
                    .ok_or_else(|| malformed(format!("edge {} references missing vertex {v}", e.id)))
            };
            edges.push(Some(Edge {
                color: e.color,
                from: end(&e.from)?,
                to: end(&e.to)?,
            }));
        }
        let mut rotation = Vec::new();
        for (vi, v) in raw.vertices.iter().enumerate() {
            let mut darts = [0; 3];
            for (k, eid) in v.rotation.iter().enumerate() {
                let &ei = epos
                    .get(eid.as_str())
                    .ok_or_else(|| malformed(format!("vertex {} lists missing edge {eid}", v.id)))?;
                let e = edges[ei].expect("just inserted");
                darts[k] = match (e.from == vi, e.to == vi) {
                    (true, false) => 2 * ei,
                    (false, true) => 2 * ei + 1,
                    _ => return Err(malformed(format!("edge {eid} is not a link at vertex {}", v.id))),
                };
            }
            rotation.push(Some(darts));
        }
        let g = TrivalentGraph {
            rotation,
            edges,
            blue_circles: raw.blue_circles,
            red_circles: raw.red_circles,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn to_json(&self) -> String {
        let g = self.compact();
        let vid = |v: usize| format!("v{v}");
        let eid = |e: usize| format!("e{e}");
        let raw = GraphJson {
            vertices: g
                .rotation
                .iter()
                .enumerate()
                .map(|(v, r)| {
                    let r = r.expect("compacted");
                    VertexJson {
                        id: vid(v),
                        rotation: r.map(|d| eid(edge_of(d))),
                    }
                })
                .collect(),
            edges: g
                .edges
                .iter()
                .enumerate()
                .map(|(i, e)| {
                    let e = e.expect("compacted");
                    EdgeJson {
                        id: eid(i),
                        color: e.color,
                        from: vid(e.from),
                        to: vid(e.to),
                    }
                })
                .collect(),
            blue_circles: g.blue_circles,
            red_circles: g.red_circles,
        };
        let lines = |items: Vec<String>| -> String {
            if items.is_empty() {
                "[]".to_string()
            } else {
                format!("[\n    {}\n  ]", items.join(",\n    "))
            }
        };
        format!(
            "{{\n  \"vertices\": {},\n  \"edges\": {},\n  \"blue_circles\": {},\n  \"red_circles\": {}\n}}\n",
            lines(raw.vertices.iter().map(one_line).collect()),
            lines(raw.edges.iter().map(one_line).collect()),
            raw.blue_circles,
            raw.red_circles
        )
    }

    fn edge(&self, e: usize) -> Edge {
        self.edges[e].expect("live edge")
    }

    fn vertex_of(&self, d: Dart) -> usize {
        let e = self.edge(edge_of(d));
        if is_head(d) {
            e.to
        } else {
            e.from
        }
    }

    fn live_vertices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.rotation.len()).filter(|&v| self.rotation[v].is_some())
    }

    fn live_edges(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.edges.len()).filter(|&e| self.edges[e].is_some())
    }

    pub fn vertex_count(&self) -> usize {
        self.live_vertices().count()
    }

    pub fn red_edge_count(&self) -> usize {
        self.live_edges()
            .filter(|&e| self.edge(e).color == EdgeColor::Red)
            .count()
    }

    pub fn blue_circles(&self) -> u32 {
        self.blue_circles
    }

    pub fn red_circles(&self) -> u32 {
        self.red_circles
    }

    /// Checks incidence, the flow condition at every vertex, and planarity.
    pub fn validate(&self) -> Result<(), GraphError> {
        let mut seen = vec![0u8; 2 * self.edges.len()];
        for v in self.live_vertices() {
            let r = self.rotation[v].expect("live");
            let mut blue_heads = 0;
            let mut blue = 0;
            let mut red_head = false;
            for &d in &r {
                let e = self.edges[edge_of(d)]
                    .ok_or_else(|| malformed(format!("vertex {v} uses a deleted edge")))?;
                if self.vertex_of(d) != v {
                    return Err(malformed(format!("dart {d} does not belong to vertex {v}")));
                }
                seen[d] += 1;
                match e.color {
                    EdgeColor::Blue => {
                        blue += 1;
                        blue_heads += usize::from(is_head(d));
                    }
                    EdgeColor::Red => red_head = is_head(d),
                }
            }
            let flow = blue == 2 && ((blue_heads == 2 && !red_head) || (blue_heads == 0 && red_head));
            if !flow {
                return Err(malformed(format!("vertex {v} violates the flow condition")));
            }
        }
        for e in self.live_edges() {
            if seen[2 * e] != 1 || seen[2 * e + 1] != 1 {
                return Err(malformed(format!("edge {e} is not attached at both ends")));
            }
        }
        if !self.is_planar() {
            return Err(malformed("rotation system is not planar"));
        }
        Ok(())
    }

    fn sigma(&self, d: Dart) -> Dart {
        let r = self.rotation[self.vertex_of(d)].expect("live");
        let k = r.iter().position(|&x| x == d).expect("dart in rotation");
        r[(k + 1) % 3]
    }

    fn phi(&self, d: Dart) -> Dart {
        self.sigma(d ^ 1)
    }

    /// All faces, ordered by id.
    pub fn faces(&self) -> Vec<Face> {
        let mut done = vec![false; 2 * self.edges.len()];
        let mut out = Vec::new();
        for e in self.live_edges() {
            for start in [2 * e, 2 * e + 1] {
                if done[start] {
                    continue;
                }
                let mut darts = Vec::new();
                let mut d = start;
                while !done[d] {
                    done[d] = true;
                    darts.push(d);
                    d = self.phi(d);
                }
                out.push(Face { id: start, darts });
            }
        }
        out
    }

    // Union-find over live vertices, optionally restricted to blue edges.
    fn vertex_components(&self, blue_only: bool) -> Vec<usize> {
        let mut parent: Vec<usize> = (0..self.rotation.len()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for e in self.live_edges() {
            let ed = self.edge(e);
            if blue_only && ed.color != EdgeColor::Blue {
                continue;
            }
            let (a, b) = (find(&mut parent, ed.from), find(&mut parent, ed.to));
            parent[a] = b;
        }
        (0..parent.len()).map(|x| find(&mut parent, x)).collect()
    }

    /// V - E + F = 2 on every connected component.
    pub fn is_planar(&self) -> bool {
        let comp = self.vertex_components(false);
        let mut chi: BTreeMap<usize, i64> = BTreeMap::new();
        for v in self.live_vertices() {
            *chi.entry(comp[v]).or_default() += 1;
        }
        for e in self.live_edges() {
            *chi.entry(comp[self.edge(e).from]).or_default() -= 1;
        }
        for f in self.faces() {
            *chi.entry(comp[self.vertex_of(f.id)]).or_default() += 1;
        }
        chi.values().all(|&c| c == 2)
    }

    pub fn blue_loop_count(&self) -> usize {
        let comp = self.vertex_components(true);
        let mut roots: Vec<usize> = self.live_vertices().map(|v| comp[v]).collect();
        roots.sort_unstable();
        roots.dedup();
        roots.len() + self.blue_circles as usize
    }

    /// (q + q^-1)^n for n blue loops.
    pub fn graph_evaluation(&self) -> LaurentQ {
        LaurentQ::circle().pow(self.blue_loop_count() as u32)
    }

    pub fn classify(&self, face: &Face) -> Option<FaceKind> {
        let edges: Vec<usize> = face.darts.iter().map(|&d| edge_of(d)).collect();
        let mut distinct = edges.clone();
        distinct.sort_unstable();
        distinct.dedup();
        if distinct.len() != edges.len() {
            return None;
        }
        let colors: Vec<EdgeColor> = edges.iter().map(|&e| self.edge(e).color).collect();
        use EdgeColor::{Blue, Red};
        match colors.as_slice() {
            [Blue, Blue] => Some(FaceKind::CentralBigon),
            [Blue, Red] | [Red, Blue] => {
                let blue = face.darts[usize::from(colors[0] == Red)];
                // the face lies to the right of each dart it walks along
                Some(if is_head(blue) {
                    FaceKind::SideBigonLeft
                } else {
                    FaceKind::SideBigonRight
                })
            }
            [Blue, Red, Blue, Red] | [Red, Blue, Red, Blue] => {
                let blues: Vec<usize> = edges
                    .iter()
                    .copied()
                    .filter(|&e| self.edge(e).color == Blue)
                    .collect();
                let comp = self.vertex_components(true);
                Some(if comp[self.edge(blues[0]).from] == comp[self.edge(blues[1]).from] {
                    FaceKind::SquareOneLoop
                } else {
                    FaceKind::SquareTwoLoops
                })
            }
            _ => None,
        }
    }

    /// The reducible face with the least id, if any.
    pub fn find_bigon_or_square(&self) -> Option<FaceDescriptor> {
        self.faces().into_iter().find_map(|face| {
            self.classify(&face)
                .map(|kind| FaceDescriptor { face, kind })
        })
    }

    fn kill_vertex(&mut self, v: usize) {
        self.rotation[v] = None;
    }

    fn replace_dart(&mut self, old: Dart, new: Dart) {
        let v = self.vertex_of(old);
        let r = self.rotation[v].as_mut().expect("live");
        let k = r.iter().position(|&x| x == old).expect("dart in rotation");
        r[k] = new;
    }

    fn push_edge(&mut self, color: EdgeColor, from: usize, to: usize) -> usize {
        self.edges.push(Some(Edge { color, from, to }));
        self.edges.len() - 1
    }

    // The blue dart at v other than the one on edge `not`.
    fn other_blue(&self, v: usize, not: usize) -> Dart {
        *self.rotation[v]
            .expect("live")
            .iter()
            .find(|&&d| edge_of(d) != not && self.edge(edge_of(d)).color == EdgeColor::Blue)
            .expect("two blue darts")
    }

    fn red_dart(&self, v: usize) -> Dart {
        *self.rotation[v]
            .expect("live")
            .iter()
            .find(|&&d| self.edge(edge_of(d)).color == EdgeColor::Red)
            .expect("one red dart")
    }

    // Erase the blue edge `b` together with its endpoints, whose red darts
    // are already gone, splicing the neighbouring blue edges together.
    fn dissolve_pair(&mut self, b: usize) {
        let Edge { from: v, to: u, .. } = self.edge(b);
        let into_u = edge_of(self.other_blue(u, b));
        let out_of_v = edge_of(self.other_blue(v, b));
        if into_u == out_of_v {
            self.edges[b] = None;
            self.edges[into_u] = None;
            self.blue_circles += 1;
        } else {
            let y = self.edge(into_u).from;
            let z = self.edge(out_of_v).to;
            let n = self.push_edge(EdgeColor::Blue, y, z);
            self.replace_dart(2 * into_u, 2 * n);
            self.replace_dart(2 * out_of_v + 1, 2 * n + 1);
            self.edges[b] = None;
            self.edges[into_u] = None;
            self.edges[out_of_v] = None;
        }
        self.kill_vertex(u);
        self.kill_vertex(v);
    }

    /// One step of the reduction. Returns the smaller graph and the graded
    /// dimension factor it costs.
    pub fn reduce_step(&self, fd: &FaceDescriptor) -> Result<(TrivalentGraph, LaurentQ), GraphError> {
        let current = self
            .faces()
            .into_iter()
            .find(|f| f.id == fd.face.id)
            .filter(|f| *f == fd.face && self.classify(f) == Some(fd.kind))
            .ok_or(GraphError::InvalidFace(fd.face.id))?;
        let mut g = self.clone();
        let edges: Vec<usize> = current.darts.iter().map(|&d| edge_of(d)).collect();
        match fd.kind {
            FaceKind::CentralBigon => {
                let Edge { from: v, to: u, .. } = g.edge(edges[0]);
                let ru = edge_of(g.red_dart(u));
                let rv = edge_of(g.red_dart(v));
                if ru == rv {
                    g.red_circles += 1;
                } else {
                    let x = g.edge(rv).from;
                    let w = g.edge(ru).to;
                    let n = g.push_edge(EdgeColor::Red, x, w);
                    g.replace_dart(2 * rv, 2 * n);
                    g.replace_dart(2 * ru + 1, 2 * n + 1);
                    g.edges[rv] = None;
                }
                for e in [edges[0], edges[1], ru] {
                    g.edges[e] = None;
                }
                g.kill_vertex(u);
                g.kill_vertex(v);
                Ok((g, LaurentQ::circle()))
            }
            FaceKind::SideBigonLeft | FaceKind::SideBigonRight => {
                let (blue, red): (Vec<usize>, Vec<usize>) = edges
                    .iter()
                    .partition(|&&e| g.edge(e).color == EdgeColor::Blue);
                g.dissolve_pair(blue[0]);
                g.edges[red[0]] = None;
                Ok((g, LaurentQ::one()))
            }
            FaceKind::SquareOneLoop | FaceKind::SquareTwoLoops => {
                let (blue, red): (Vec<usize>, Vec<usize>) = edges
                    .iter()
                    .partition(|&&e| g.edge(e).color == EdgeColor::Blue);
                g.dissolve_pair(blue[0]);
                g.dissolve_pair(blue[1]);
                for r in red {
                    g.edges[r] = None;
                }
                Ok((g, LaurentQ::one()))
            }
        }
    }

    /// Iterated reduction down to a union of circles.
    pub fn graded_dimension(&self) -> Result<LaurentQ, GraphError> {
        let mut g = self.clone();
        let mut acc = LaurentQ::one();
        while g.red_edge_count() > 0 {
            let fd = g
                .find_bigon_or_square()
                .ok_or_else(|| GraphError::ReductionStuck(g.red_edge_count()))?;
            let (next, factor) = g.reduce_step(&fd)?;
            g = next.compact();
            acc = &acc * &factor;
        }
        Ok(&acc * &LaurentQ::circle().pow(g.blue_circles))
    }

    /// Cup-foam basis: one element per choice of dot on each blue loop.
    pub fn cup_basis(&self) -> Vec<CupBasisElement> {
        let n = self.blue_loop_count();
        (0u64..1 << n)
            .map(|mask| {
                let dots: Vec<bool> = (0..n).map(|i| (mask >> (n - 1 - i)) & 1 == 1).collect();
                let dotted = dots.iter().filter(|&&d| d).count() as i32;
                CupBasisElement {
                    q_degree: n as i32 - 2 * dotted,
                    dots,
                }
            })
            .collect()
    }

    /// Renumber live vertices and edges densely, keeping their order.
    pub fn compact(&self) -> TrivalentGraph {
        let mut vmap = vec![usize::MAX; self.rotation.len()];
        for (k, v) in self.live_vertices().enumerate() {
            vmap[v] = k;
        }
        let mut emap = vec![usize::MAX; self.edges.len()];
        for (k, e) in self.live_edges().enumerate() {
            emap[e] = k;
        }
        let dart = |d: Dart| 2 * emap[edge_of(d)] + d % 2;
        TrivalentGraph {
            rotation: self
                .live_vertices()
                .map(|v| Some(self.rotation[v].expect("live").map(dart)))
                .collect(),
            edges: self
                .live_edges()
                .map(|e| {
                    let ed = self.edge(e);
                    Some(Edge {
                        color: ed.color,
                        from: vmap[ed.from],
                        to: vmap[ed.to],
                    })
                })
                .collect(),
            blue_circles: self.blue_circles,
            red_circles: self.red_circles,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixture(name: &str) -> TrivalentGraph {
        let path = format!("{}/fixtures/graphs/{name}.json", env!("CARGO_MANIFEST_DIR"));
        TrivalentGraph::from_json(&std::fs::read_to_string(path).unwrap()).unwrap()
    }

    fn l(s: &str) -> LaurentQ {
        s.parse().unwrap()
    }

    #[test]
    fn loop_counts() {
        assert_eq!(TrivalentGraph::circles(1).blue_loop_count(), 1);
        assert_eq!(TrivalentGraph::circles(4).blue_loop_count(), 4);
        assert_eq!(fixture("theta").blue_loop_count(), 1);
        assert_eq!(fixture("ladder").blue_loop_count(), 2);
    }

    #[test]
    fn evaluations() {
        assert_eq!(TrivalentGraph::circles(1).graph_evaluation(), l("q + q^-1"));
        assert_eq!(TrivalentGraph::circles(2).graph_evaluation(), l("q^2 + 2 + q^-2"));
        assert_eq!(TrivalentGraph::empty().graph_evaluation(), LaurentQ::one());
    }

    #[test]
    fn theta_reduction() {
        let g = fixture("theta");
        let fd = g.find_bigon_or_square().unwrap();
        assert_eq!(g.graded_dimension().unwrap(), l("q + q^-1"));
        let (h, factor) = g.reduce_step(&fd).unwrap();
        let h = h.compact();
        assert_eq!(h.red_edge_count(), 0);
        match fd.kind {
            FaceKind::CentralBigon => {
                assert_eq!(factor, LaurentQ::circle());
                assert_eq!((h.blue_circles(), h.red_circles()), (0, 1));
            }
            _ => {
                assert_eq!(factor, LaurentQ::one());
                assert_eq!(h.blue_circles(), 1);
            }
        }
    }

    #[test]
    fn theta_faces() {
        let g = fixture("theta");
        let kinds: Vec<_> = g.faces().iter().filter_map(|f| g.classify(f)).collect();
        assert_eq!(kinds.len(), 3);
        assert!(kinds.contains(&FaceKind::CentralBigon));
        assert!(kinds.contains(&FaceKind::SideBigonLeft));
        assert!(kinds.contains(&FaceKind::SideBigonRight));
    }

    #[test]
    fn ladder_has_a_square() {
        let g = fixture("ladder");
        let kinds: Vec<_> = g.faces().iter().filter_map(|f| g.classify(f)).collect();
        assert!(kinds.contains(&FaceKind::SquareTwoLoops));
        let sq = g
            .faces()
            .into_iter()
            .find(|f| g.classify(f) == Some(FaceKind::SquareTwoLoops))
            .unwrap();
        let (h, factor) = g
            .reduce_step(&FaceDescriptor {
                face: sq,
                kind: FaceKind::SquareTwoLoops,
            })
            .unwrap();
        assert_eq!(factor, LaurentQ::one());
        let h = h.compact();
        h.validate().unwrap();
        assert_eq!((h.red_edge_count(), h.blue_circles()), (0, 2));
    }

    #[test]
    fn fixtures_match_evaluation() {
        for name in ["circle", "two-circles", "empty", "theta", "ladder", "nested", "mixed"] {
            let g = fixture(name);
            assert_eq!(g.graded_dimension().unwrap(), g.graph_evaluation(), "{name}");
            let from_basis: LaurentQ = g
                .cup_basis()
                .iter()
                .map(|b| LaurentQ::monomial(1, b.q_degree))
                .sum();
            assert_eq!(from_basis, g.graph_evaluation(), "{name}");
        }
    }

    #[test]
    fn cup_bases() {
        let c = TrivalentGraph::circles(1).cup_basis();
        assert_eq!(
            c,
            vec![
                CupBasisElement { dots: vec![false], q_degree: 1 },
                CupBasisElement { dots: vec![true], q_degree: -1 },
            ]
        );
        let degs: Vec<i32> = TrivalentGraph::circles(2).cup_basis().iter().map(|b| b.q_degree).collect();
        assert_eq!(degs, vec![2, 0, 0, -2]);
        assert_eq!(
            TrivalentGraph::empty().cup_basis(),
            vec![CupBasisElement { dots: vec![], q_degree: 0 }]
        );
    }

    #[test]
    fn stale_face_rejected() {
        let g = fixture("theta");
        let mut fd = g.find_bigon_or_square().unwrap();
        fd.face.id = 99;
        assert_eq!(g.reduce_step(&fd), Err(GraphError::InvalidFace(99)));
        assert!(TrivalentGraph::circles(2).find_bigon_or_square().is_none());
    }

    #[test]
    fn rejects_bad_flow() {
        let text = r#"{"vertices":[{"id":"u","rotation":["a","b","r"]},{"id":"v","rotation":["a","b","r"]}],
            "edges":[{"id":"a","color":"blue","from":"v","to":"u"},{"id":"b","color":"blue","from":"u","to":"v"},
                     {"id":"r","color":"red","from":"u","to":"v"}]}"#;
        assert!(matches!(TrivalentGraph::from_json(text), Err(GraphError::Malformed(_))));
    }

    #[test]
    fn json_roundtrip() {
        let g = fixture("mixed");
        let h = TrivalentGraph::from_json(&g.to_json()).unwrap();
        assert_eq!(h, g.compact());
    }
}
