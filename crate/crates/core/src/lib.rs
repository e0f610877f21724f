//! Ptolemy varieties of ideal triangulations.
//!
//! The pipeline runs from a [`Triangulation`] through obstruction classes
//! ([`cohomology`]), the Ptolemy ideal ([`variety`]), the diagonal torus action
//! ([`reduction`]), exact and numeric solving ([`solver`]) to natural cocycles,
//! traces and trace fields ([`representation`]).

pub mod cohomology;
pub mod error;
pub mod fixtures;
pub mod intmat;
pub mod perm;
pub mod pipeline;
pub mod poly;
pub mod reduction;
pub mod representation;
pub mod solver;
pub mod triangulation;
pub mod variety;

pub use error::{Error, Result};
pub use perm::Perm4;
pub use triangulation::{parse_triangulation, Triangulation};
