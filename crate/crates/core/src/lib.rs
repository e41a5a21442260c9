#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod error;
pub mod kinematics;
pub mod model;
pub mod output;
pub mod populations;
pub mod spectrum;
pub mod states;
pub mod validate;

pub use error::{Error, Result};
