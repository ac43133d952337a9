pub mod cfrac;
pub mod classify;
pub mod error;
pub mod factorization;
pub mod matrix;
pub mod minors;
pub mod rational;
pub mod routh;
pub mod series;
pub mod sturm;

pub use error::{Error, Result};
pub use rational::{int, parse_rational, rat, Rational};
pub use series::PowerSeries;
