//! Exact arithmetic for cyclotomic polynomials and the coincidence points
//! Φ_m(x) = Φ_n(x).

pub mod arith;
pub mod ball;
pub mod bounds;
pub mod error;
pub mod nearmiss;
pub mod ordering;
pub mod par;
pub mod poly;
pub mod rationalcheck;
pub mod roots;

pub use error::{Error, Result};
