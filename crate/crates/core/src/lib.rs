//! Combinatorics of tropicalizations of pointed Riemann surfaces.
//!
//! The crate models weighted leaf-labeled multigraphs ([`graph`]), their
//! weighted contractions ([`contraction`]), canonical forms and automorphism
//! groups ([`iso`]), the compactified coordinate torus of extended edge
//! lengths ([`cone`]), the stratification of the resulting moduli space
//! ([`strata`], [`enumerate`]), and the comparison of that stratification with
//! the boundary stratification of the moduli of stable curves ([`compare`]).

pub mod compare;
pub mod cone;
pub mod contraction;
pub mod enumerate;
pub mod error;
pub mod graph;
pub mod io;
pub mod iso;
pub mod limits;
pub mod strata;

pub use error::{Error, Result};
pub use graph::{EdgeSet, GraphBuilder, WeightedGraph};
pub use limits::Limits;
