//! Independent, slower verifiers: ghost-component Witt arithmetic,
//! greedy correcting-character search, and direct ramification breaks
//! at tiny conductors. These certify the structure constants and
//! spot-check the main pipeline; their reports embed in certificates
//! when cross-checks are requested.

pub mod ghost;
pub mod greedy;
pub mod series;

pub use ghost::{derive_constants, ghost_witt_oracle};
pub use greedy::{greedy_correcting_search, greedy_planted_suite};
pub use series::{tiny_breaks_oracle, TinyBreaks};
