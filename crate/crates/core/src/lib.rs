//! Substitution-priority auditing over soccer event streams.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is a pure
//! function of its inputs; file formats, the CLI and the HTTP service live
//! in the `subaudit` companion crate.
//!
//! Layers, bottom up:
//!
//! * [`events`]: match time model, slices and on-field intervals.
//! * [`metrics`]: per-slice technical and pass-network scores, role-aware
//!   percentiles, cumulative means and the enriched per-slice player state.
//! * [`fuzzy`]: a generic Mamdani engine with a small rule language.
//! * [`system`]: the bundled substitution rule base and its validator.
//! * [`priority`]: baseline/modifier combination, rankings, latency and
//!   what-if queries.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod error;
pub mod events;
pub mod fuzzy;
pub mod metrics;
pub mod priority;
pub mod system;

pub use error::{Error, Result};
