//! Enumeration of lattices stable under `x` (or `x∘σ`) up to the torus `L_x^×`.
//!
//! Lattices are enumerated in the basis of a stable lattice `Λ_0`, moving from
//! a lattice `L` to the stable lattices strictly between `tL` and `L`. Every
//! lattice is replaced by its normal form modulo `Γ'`, so the search runs over
//! a finite set once restricted to the window `t^M O^n ⊆ L ⊆ t^{-M} O^n`.
//! The result is accepted once the windows `M` and `M + 1` give the same set.

mod search;
mod subspace;
mod torus;
mod units;

pub use search::{
    enum_pairs, enum_pairs_with, enum_sigma, enum_sigma_fixed_with, enum_sigma_with, enum_stable,
    enum_stable_with, Certificate, EnumConfig, OrbitList,
};
pub use torus::{torus_data, torus_data_to, TorusData, TorusFactor};
pub use units::{unit_orbit_check, UnitOrbitReport};


/// Characteristic polynomial over `F` of a matrix over `E` with `F`-rational invariants.
pub(crate) fn charpoly_over_base(
    y: &crate::localfield::Matrix,
) -> crate::Result<crate::polyfactor::MonicPoly> {
    torus::charpoly_over(y, true)
}
