//! Exact symbolic verification of Hodge-integral Virasoro constraints over
//! truncated formal power series with rational coefficients.

pub mod arith;
pub mod error;
pub mod hodge;
pub mod operator;
pub mod pairing;
pub mod pipeline;
pub mod par;
pub mod report;
pub mod series;
pub mod special;
pub mod virasoro;
pub mod witten;

pub use arith::{Integer, Rational};
pub use error::{Error, Result};
pub use operator::Operator;
pub use report::{Report, Status};
pub use series::{Monomial, Series, Truncation};
