#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::too_many_arguments)]

pub mod classifier;
pub mod error;
pub mod expr;
pub mod grid;
pub mod jet;
pub mod number;
pub mod numerics;
pub mod scenario;
pub mod report;
pub mod suite;
pub mod svg;
pub mod truncation;

pub use error::{Error, Result};
