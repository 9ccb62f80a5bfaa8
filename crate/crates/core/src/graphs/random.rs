//! Random valid planar graphs.
//!
//! Starting from a few blue circles, each step splits one or two blue edges
//! with sink/source vertex pairs and joins them by red chords, so the flow
//! condition holds by construction. The local rotations at new vertices are
//! random; a step is kept only if the result is still planar (V - E + F = 2
//! on every component), which also covers chords bridging two components.

use rand::Rng;

use super::{EdgeColor, TrivalentGraph};

const PENDING: usize = usize::MAX;

enum Site {
    Edge(usize),
    Circle,
}

fn pick_site<R: Rng>(g: &TrivalentGraph, rng: &mut R) -> Option<Site> {
    let blue: Vec<usize> = g
        .live_edges()
        .filter(|&e| g.edge(e).color == EdgeColor::Blue)
        .collect();
    let n = blue.len() + usize::from(g.blue_circles > 0);
    if n == 0 {
        return None;
    }
    let k = rng.gen_range(0..n);
    Some(if k < blue.len() {
        Site::Edge(blue[k])
    } else {
        Site::Circle
    })
}

fn new_vertex(g: &mut TrivalentGraph) -> usize {
    g.rotation.push(Some([PENDING; 3]));
    g.rotation.len() - 1
}

// Split a blue site by a sink w1 and a source w2, returning (w1, w2). The
// red slot of each new vertex is left pending.
fn split(g: &mut TrivalentGraph, site: Site) -> (usize, usize) {
    let w1 = new_vertex(g);
    let w2 = new_vertex(g);
    match site {
        Site::Circle => {
            g.blue_circles -= 1;
            let a = g.push_edge(EdgeColor::Blue, w2, w1);
            let b = g.push_edge(EdgeColor::Blue, w2, w1);
            g.rotation[w1] = Some([2 * a + 1, 2 * b + 1, PENDING]);
            g.rotation[w2] = Some([2 * a, 2 * b, PENDING]);
        }
        Site::Edge(e) => {
            let (s, t) = (g.edge(e).from, g.edge(e).to);
            let e1 = g.push_edge(EdgeColor::Blue, s, w1);
            let m = g.push_edge(EdgeColor::Blue, w2, w1);
            let e2 = g.push_edge(EdgeColor::Blue, w2, t);
            g.replace_dart(2 * e, 2 * e1);
            g.replace_dart(2 * e + 1, 2 * e2 + 1);
            g.edges[e] = None;
            g.rotation[w1] = Some([2 * e1 + 1, 2 * m + 1, PENDING]);
            g.rotation[w2] = Some([2 * m, 2 * e2, PENDING]);
        }
    }
    (w1, w2)
}

fn chord(g: &mut TrivalentGraph, sink: usize, source: usize) {
    let r = g.push_edge(EdgeColor::Red, sink, source);
    for (v, d) in [(sink, 2 * r), (source, 2 * r + 1)] {
        let rot = g.rotation[v].as_mut().expect("new vertex");
        let k = rot.iter().position(|&x| x == PENDING).expect("pending slot");
        rot[k] = d;
    }
}

fn shuffle_new<R: Rng>(g: &mut TrivalentGraph, from: usize, rng: &mut R) {
    for v in from..g.rotation.len() {
        if rng.gen() {
            let rot = g.rotation[v].as_mut().expect("new vertex");
            rot.swap(0, 1);
        }
    }
}

fn try_step<R: Rng>(g: &TrivalentGraph, rng: &mut R, max_vertices: usize) -> Option<TrivalentGraph> {
    let mut h = g.clone();
    let first_new = h.rotation.len();
    match rng.gen_range(0..5) {
        0 => {
            if h.blue_circles >= 3 {
                return None;
            }
            h.blue_circles += 1;
            return Some(h);
        }
        1 | 2 => {
            if h.vertex_count() + 2 > max_vertices {
                return None;
            }
            let site = pick_site(&h, rng)?;
            let (w1, w2) = split(&mut h, site);
            chord(&mut h, w1, w2);
        }
        _ => {
            if h.vertex_count() + 4 > max_vertices {
                return None;
            }
            let site = pick_site(&h, rng)?;
            let (w1, w2) = split(&mut h, site);
            let site = pick_site(&h, rng)?;
            let (z1, z2) = split(&mut h, site);
            chord(&mut h, w1, z2);
            chord(&mut h, z1, w2);
        }
    }
    shuffle_new(&mut h, first_new, rng);
    h.validate().ok().map(|_| h.compact())
}

/// A random valid planar graph with at most `max_vertices` vertices.
pub fn random_graph<R: Rng>(rng: &mut R, max_vertices: usize) -> TrivalentGraph {
    let mut g = TrivalentGraph::circles(rng.gen_range(1..=3));
    let steps = rng.gen_range(1..=10);
    let mut done = 0;
    for _ in 0..steps * 8 {
        if done == steps {
            break;
        }
        if let Some(h) = try_step(&g, rng, max_vertices) {
            g = h;
            done += 1;
        }
    }
    g
}
