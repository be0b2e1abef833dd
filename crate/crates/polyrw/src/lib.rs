//! polyrw: a rewriting engine for polygraphs up to dimension 3.
//!
//! Cells of free (compact) 2-categories are represented as labeled port
//! graphs with ordered boundaries ([`diagram`]), rewritten by 3-polygraph
//! rules through unary contexts ([`rewrite`]), and unified in the
//! multicategory of compact contexts to produce the finite set of critical
//! pairs of a finite 3-polygraph ([`unify`]). String rewriting is the
//! 2-polygraph special case ([`strings`]).

pub mod cli_io;
pub mod compact;
pub mod context;
pub mod diagram;
pub mod examples;
pub mod path;
pub mod rewrite;
pub mod signature;
pub mod strings;
pub mod unify;

pub use diagram::{Diagram, DiagramError, IsoWitness, NodeLabel};
pub use path::{Letter, Path};
pub use signature::{Gen0, Gen1, Gen2, Gen3, Polygraph};
