//! Exact arithmetic in `F_q`, `F_{q^2}`, `F = F_q((t))` and `E = F_{q^2}((t))`.

mod element;
mod gf;
mod matrix;
mod parse;

pub use element::{FieldTag, LocalElement};
pub use gf::{Code, FiniteElement, Gf, SUPPORTED_PRIMES};
pub use matrix::Matrix;
pub use parse::{parse_element, parse_polynomial};

/// Default number of significant `t`-adic digits kept by truncated operations.
pub const DEFAULT_PRECISION: i64 = 40;
