//! Word metrics and dead-end depth in finitely generated groups, together
//! with a construction of generating sets under which a group with large
//! finite quotients has large dead-end depth.
//!
//! The modules build on each other: [`group`] supplies exact element
//! arithmetic, [`cayley`] enumerates balls in Cayley graphs, [`quotient`]
//! handles maps onto finite groups and their diameters, [`depth`] computes
//! dead-end depth, and [`construction`] assembles and verifies the
//! generating-set construction.

pub mod error;
pub mod cayley;
pub mod construction;
pub mod depth;
pub mod group;
pub mod quotient;

pub use error::{Error, Result};
