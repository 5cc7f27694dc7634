//! Topology of exceptional-point pairs in two-band non-Hermitian systems.
//!
//! * [`words`]: free-group words on the EP generators, dihedral winding,
//!   chirality classes and the degree-`k` tables.
//! * [`spectra`]: two-band models, EP search, eigenvalue tracing along
//!   loops and numerical vorticity.
//! * [`cover`]: sheet permutations, lifts, subgroup rewriting and the
//!   explicit homotopy certificate.
//! * [`sphere`]: stereographic projection between the plane and the unit
//!   sphere.

pub mod cover;
pub mod spectra;
pub mod sphere;
pub mod words;
