//! Finite R-trivial monoids and the primitive orthogonal idempotents of
//! their monoid algebras.
//!
//! The pipeline is: build a [`Monoid`] (from transformations, a table, or a
//! built-in family), compute its weak order, build the semilattice of
//! idempotent-generated left ideals, then compute the Norton elements and
//! the idempotents `e_J` in [`norton`].

pub mod algebra;
pub mod error;
pub mod families;
pub mod io;
pub mod lattice;
pub mod monoid;
pub mod norton;
pub mod order;
pub mod report;
pub mod suite;

pub use algebra::{Algebra, AlgebraElement, PowerOutcome};
pub use error::{Error, Result};
pub use lattice::{NodeId, Semilattice, WeaklyOrderedMonoid};
pub use monoid::{ElementId, Monoid, Transformation};
pub use norton::{e_system, verify_system, IdempotentSystem, Mode, NortonData};
pub use order::{weak_preorder, OrderRelation, RTriviality};
pub use report::Report;
