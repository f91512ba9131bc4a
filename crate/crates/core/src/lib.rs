//! Desk-scale combinatorics of semilattices, inverse semigroups,
//! semigroupoids and their groupoids of germs.
//!
//! Everything here is finite and exact: representations live in the
//! symmetric inverse monoid of partial bijections of a finite carrier,
//! suprema of projections are set unions, and every structural claim is
//! verified exhaustively rather than assumed.

#![forbid(unsafe_code)]

pub mod corpus;
pub mod germs;
pub mod inverse;
pub mod io;
pub mod kgraph;
pub mod paths;
pub mod rep;
pub mod semilattice;
pub mod sgpd;
pub mod slambda;

pub mod cli;

pub use germs::{Germ, Groupoid};
pub use inverse::{InverseSemigroup, SpectrumAction};
pub use kgraph::KGraphPresentation;
pub use rep::{IsgRep, PartialBijection, SgpdRep};
pub use semilattice::{Character, Filter, Semilattice};
pub use sgpd::{Flank, Semigroupoid};
pub use slambda::{SLTriple, SLambda};

/// Enumeration guard shared by the expensive constructions.
///
/// Reads `GERMLAB_MAX_ELEMENTS` (default 5000) so that desk-scale runs
/// stay desk-scale even on adversarial inputs.
pub fn max_elements() -> usize {
    std::env::var("GERMLAB_MAX_ELEMENTS")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(5000)
}
