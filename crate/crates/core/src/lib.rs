//! Exact generating functions for planar and higher-genus maps with tight boundaries.

pub mod census;
pub mod closed;
pub mod disk;
pub mod error;
pub mod insertion;
pub mod moments;
pub mod poly;
pub mod quasi;
pub mod rational;
pub mod series;
pub mod table;
pub mod verify;

pub use error::{Error, Result};
pub use rational::Q;
pub use series::{Grading, Monomial, Order, Series};
