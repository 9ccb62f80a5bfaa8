//! Foam evaluation, trivalent graph state spaces, Khovanov and Lee homology
//! of link diagrams, and the s-invariant.
//!
//! The modules build on each other in this order: `polyring` for exact
//! polynomials, `foam` and `graphs` for the foam side, then `diagram`,
//! `khovanov`, `homology` and `lee` for the link side.

pub mod diagram;
pub mod foam;
pub mod graphs;
pub mod homology;
pub mod khovanov;
pub mod lee;
pub mod polyring;
pub mod unionfind;

use thiserror::Error;

pub use diagram::{braid_to_pd, parse_pd, DiagramError, PDCode, Sign, State};
pub use foam::{evaluate_foam, ClosedFoam, FoamError, OpenFoam};
pub use graphs::{GraphError, TrivalentGraph};
pub use homology::{integral_homology, rational_betti, HomologyEntry, HomologyError, HomologyTable};
pub use khovanov::{
    build_complex, build_complex_with_limit, graded_euler_characteristic, kauffman_oracle, Flavor,
    GradedChainComplex, KhovanovError, DEFAULT_MAX_CROSSINGS,
};
pub use lee::{
    build_lee, build_lee_with_limit, lee_rank, s_invariant, s_invariant_of, slice_genus_lower_bound, FilteredComplex,
    LeeError, SInvariant,
};
pub use polyring::{IntPoly2, LaurentQ, PolyError};

/// Any error raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Foam(#[from] FoamError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Khovanov(#[from] KhovanovError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error(transparent)]
    Lee(#[from] LeeError),
}
