//! Construction and verification of near-resolvable duplicated Steiner triple
//! systems whose near resolutions are self-orthogonal, together with the
//! finite-field, Latin-square and frame machinery the constructions use.

pub mod catalog;
pub mod cyclic;
pub mod cyclotomic;
pub mod design;
pub mod error;
mod exact_cover;
pub mod ffield;
pub mod frames;
pub mod gdd;
pub mod known;
pub mod latin;
pub mod multiplier;
pub mod pipeline;
pub mod recursions;
pub mod report;
pub mod search;

pub use error::{Error, Result};
