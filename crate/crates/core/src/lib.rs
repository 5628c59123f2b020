//! Regularized functionals `g_n(x)` generalizing the Euler-Mascheroni constant.
//!
//! `g_n(x)` is defined for `n >= 1` and `0 < x <= 1` by
//!
//! ```text
//! g_n(x) = H_n - log(2 pi x) - n * int_0^1 (1-u)^(n-1) log(2 sin(pi x u)) du
//! ```
//!
//! and can be evaluated through four independent routes (see [`gfamily`]).
//! The [`verify`] module checks the routes against each other and audits
//! published claims about the family.

// NaN must fail every domain check, hence `!(a <= b)` forms.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod accuracy;
pub mod error;
pub mod gfamily;
pub mod numerics;
pub mod quadrature;
pub mod verify;

pub use accuracy::{Accuracy, GridPoint};
pub use error::{Error, Result};
pub use gfamily::{ConstantVariant, Estimate, GenfuncPoint, SeriesSum};
pub use quadrature::QuadResult;
pub use verify::{IdentityId, IdentityReport};
