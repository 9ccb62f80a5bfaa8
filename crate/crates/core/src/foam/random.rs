//! Random valid closed foams for property tests.

use rand::Rng;

use super::{Binding, ClosedFoam, Facet};

/// Limits for [`random_closed_foam`].
#[derive(Debug, Clone, Copy)]
pub struct FoamShape {
    pub max_facets: usize,
    pub max_decorations: u32,
    pub max_genus: u32,
}

impl Default for FoamShape {
    fn default() -> Self {
        FoamShape {
            max_facets: 8,
            max_decorations: 3,
            max_genus: 1,
        }
    }
}

/// A random closed foam whose blue page graph is bipartite by construction.
///
/// Blue facets are split into two classes and every binding takes one page
/// from each class, in a random order.
pub fn random_closed_foam<R: Rng>(rng: &mut R, shape: FoamShape) -> ClosedFoam {
    let total = rng.gen_range(1..=shape.max_facets.max(1));
    let blue = rng.gen_range(0..=total);
    let red = total - blue;

    let mut facets: Vec<Facet> = (0..total)
        .map(|i| {
            let id = format!("F{i}");
            let f = if i < blue {
                Facet::blue(&id, &[])
            } else {
                Facet::red(&id, &[]).with_squares(rng.gen_range(0..=shape.max_decorations))
            };
            f.with_dots(rng.gen_range(0..=shape.max_decorations))
                .with_genus(rng.gen_range(0..=shape.max_genus))
        })
        .collect();

    let class: Vec<bool> = (0..blue).map(|_| rng.gen()).collect();
    let left: Vec<usize> = (0..blue).filter(|&i| class[i]).collect();
    let right: Vec<usize> = (0..blue).filter(|&i| !class[i]).collect();
    let mut bindings = Vec::new();
    if red > 0 && !left.is_empty() && !right.is_empty() {
        for k in 0..rng.gen_range(0..=4) {
            let a = left[rng.gen_range(0..left.len())];
            let b = right[rng.gen_range(0..right.len())];
            let r = blue + rng.gen_range(0..red);
            let (first, second) = if rng.gen() { (a, b) } else { (b, a) };
            let mut slot = |facet: usize, tag: &str| {
                let s = format!("k{k}{tag}");
                facets[facet].slots.push(s.clone());
                s
            };
            let p1 = slot(first, "a");
            let p2 = slot(second, "b");
            let pr = slot(r, "r");
            bindings.push(Binding::new(&format!("k{k}"), &p1, &p2, &pr));
        }
    }
    ClosedFoam::new(facets, bindings)
}
