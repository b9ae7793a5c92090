//! Exact rational functions in one variable and matrices over them.

mod func;
mod matrix;
mod poly;

pub use func::{Properness, RatFunc};
pub(crate) use func::RatFuncRepr;
pub use matrix::{QMatrix, RatMatrix};
pub use poly::Poly;
