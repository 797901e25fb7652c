#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod conditions;
pub mod cyclotomic;
pub mod division;
pub mod doubling;
pub mod dvr;
pub mod error;
pub mod geometry;
pub mod icurve;
pub mod linalg;
pub mod parse;
pub mod poly;
pub mod puiseux;
pub mod series;
pub mod upoly;
pub mod verdict;

pub use cyclotomic::CycRat;
pub use error::{Error, Result};
pub use parse::{parse_poly, parse_poly_with_vars};
pub use poly::Poly;
pub use series::{Exponent, Order, PSeries};
