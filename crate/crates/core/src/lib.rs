//! Exact fair division of indivisible items with two-dimensional externalities.
//!
//! Agent `i` values item `k` at `v_ik` when receiving it and at `v'_ik` when
//! it goes to anyone else. The crate checks fairness and efficiency notions
//! on such instances, on their one-dimensional transforms `w = v - v'`, and
//! on full-externality tensors, using exact rationals throughout.

pub mod allocators;
pub mod checkers;
pub mod enumerate;
pub mod error;
pub mod gen;
pub mod io;
pub mod kernel;
pub mod mms;
pub mod model;
pub mod paperlab;
pub mod rational;
pub mod scan;
pub mod transform;
pub mod utility;

pub use checkers::{check, Checker, Notion, Verdict, Witness};
pub use error::{Error, Result};
pub use kernel::{Space, Valuation};
pub use model::{Allocation, FullInstance, Instance1D, Instance2D, Kind};
pub use rational::Rational;
