//! Exact q-series arithmetic for theta functions with characteristics.

#![cfg_attr(not(any(test, feature = "std")), no_std)]

extern crate alloc;

pub mod arith;
pub mod cyclotomic;
pub mod dsl;
pub mod identities;
pub mod series;
pub mod thetagen;

pub use cyclotomic::{CycloError, CycloField, CycloNum};
pub use series::{AnalyticSeries, Config, EqReport, QSeries, Rat, SeriesError};
