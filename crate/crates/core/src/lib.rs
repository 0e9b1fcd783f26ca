//! Numerical toolkit for inverse limits of set-valued functions on intervals,
//! Mahavier products, skew products over shift spaces, and Cantor and Lelek fan
//! models built from them.
//!
//! The numeric core is generic over [`Real`] (`f32` or `f64`); the aliases below
//! fix it to `f64`, which every tolerance in the crate is calibrated against.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cfrac;
pub mod checks;
pub mod density;
pub mod error;
pub mod fans;
pub mod mahavier;
pub mod maps;
pub mod scalar;
pub mod symbolic;
pub mod transitivity;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Map = maps::PiecewiseMap<f64>;
pub type Family = maps::MapFamily<f64>;
pub type Relation = mahavier::ClosedRelation<f64>;
pub type Word = mahavier::MahavierWord<f64>;
pub type Window = mahavier::TwoSidedMahavierWindow<f64>;
