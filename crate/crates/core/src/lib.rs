//! Schubert, Grothendieck and Lascoux polynomials computed by several
//! independent rules, with tooling to cross-check them.
//!
//! * [`poly`] holds the operator recursions used as the reference.
//! * [`pipedreams`] enumerates pipe dreams by Demazure product.
//! * [`kohnert`] runs Kohnert, K-Kohnert and ghost move closures.
//! * [`tableaux`] covers flagged set-valued tableaux, left keys and the
//!   bijection onto K-Kohnert diagrams for 321-avoiding permutations.
//! * [`checker`] sweeps symmetric groups comparing rules against the reference.

pub mod checker;
pub mod diagram;
pub mod error;
pub mod fixtures;
pub mod kohnert;
pub mod perm;
pub mod pipedreams;
pub mod poly;
pub mod tableaux;

pub use diagram::{Cell, Diagram, WeakComposition};
pub use error::{Error, Result, MAX_GRID};
pub use kohnert::{LabeledDiagram, Ruleset};
pub use perm::Permutation;
pub use poly::{IntPolynomial, Oracle};
