//! Polynomial algebra over `F`: separability, square roots, Hensel splitting,
//! Newton-polygon factor profiles and roots.

mod newton;
mod ops;
mod poly;

pub use newton::{
    newton_profile, roots, roots_in_field, FactorEntry, FactorProfile, MAX_REFINEMENT_DEPTH,
};
pub use ops::{hensel_split, hensel_split_to, is_separable, poly_sqrt};
pub use poly::{MonicPoly, Poly};
