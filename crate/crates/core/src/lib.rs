//! engel-nq: nilpotent quotients of finitely presented groups with
//! universally quantified (Engel-law) relators, exact arithmetic in weighted
//! polycyclic presentations, and integer lattice normal forms.
//!
//! The crate is organised around the pipeline
//! `FpPresentation -> nilpotent quotient -> structural analysis`:
//!
//! * [`word`], [`fp`] — free words and the presentation text format;
//! * [`zlinalg`] — Hermite/Smith normal forms over the integers;
//! * [`pc`] — weighted pc presentations and collection from the left;
//! * [`structure`] — induced subgroups, quotients, torsion, sections;
//! * [`nq`] — the nilpotent quotient algorithm with identical variables;
//! * [`engel`] — Engel-law constructions and the Newman–Nickel family;
//! * [`registry`] — the registered experiments with their expected values.

pub mod engel;
pub mod fp;
pub mod int;
pub mod nq;
pub mod pc;
pub mod registry;
pub mod report;
pub mod sample;
pub mod structure;
pub mod word;
pub mod zlinalg;

pub use fp::{FpPresentation, Relator};
pub use int::Int;
pub use pc::{ExponentVector, PcPresentation};
pub use word::Word;
