//! Computations in deformation spaces of trees for generalized
//! Baumslag–Solitar groups: normal forms, translation lengths, the
//! Lipschitz metric, train track maps, laminations, Whitehead graphs and
//! projections onto the axis of an automorphism.

pub mod corpus;
pub mod axis;
pub mod cyclic;
pub mod error;
pub mod exec;
pub mod graph;
pub mod json;
pub mod lamination;
pub mod lipschitz;
pub mod marked;
pub mod moves;
pub mod pf;
pub mod sample;
pub mod traintrack;
pub mod whitehead;
pub mod word;

pub use error::{GbsError, Result};
