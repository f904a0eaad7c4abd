//! Exact and high-precision arithmetic for elliptic units attached to CM
//! elliptic curves over the imaginary quadratic fields of class number one.

pub mod analytic;
pub mod characters;
pub mod error;
pub mod identities;
pub mod ntheory;
pub mod padic;
pub mod quadfield;

pub use error::{Error, Result};
