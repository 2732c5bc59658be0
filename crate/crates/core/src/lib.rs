//! Exact stability invariants of toric Q-Fano varieties.
//!
//! The crate computes anticanonical volumes, blowup volume profiles,
//! Seshadri constants, log canonical thresholds of monomial ideals,
//! filtration saturations, Ding invariants of ideal-sequence test
//! configurations and the beta invariant of a subscheme, all in exact
//! rational arithmetic.

pub mod error;
pub mod exactgeom;
pub mod filtration;
pub mod harness;
pub mod lct;
pub mod par;
pub mod rational;
pub mod stability;
pub mod toricmodel;
pub mod volumes;

pub use error::{Error, Result};
