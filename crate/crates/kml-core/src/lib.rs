//! Finite-model laboratory for reproducing kernel Hilbert and Banach spaces.
//!
//! Everything here lives on a finite point set: kernels and their Gram
//! matrices ([`kernels`]), finite-span RKHS arithmetic ([`rkhs`]),
//! multiplication operators and their certified norms ([`multipliers`]),
//! semi-inner products and duality maps on finite-dimensional ℓ^p
//! ([`sip`]), and an explicit feature-map s.i.p. RKBS with its sharp dual
//! space ([`rkbs`]).
//!
//! All values are immutable after construction and every operation is a
//! pure function; randomized checks take explicit seeds.

pub mod error;
pub mod kernels;
pub mod linalg;
pub mod multipliers;
pub mod rkbs;
pub mod rkhs;
pub mod sampling;
pub mod sip;

pub use error::{KmlError, Result};

/// Complex scalar used throughout.
pub type C64 = nalgebra::Complex<f64>;

/// Column vector of complex scalars.
pub type CVector = nalgebra::DVector<C64>;

/// Dense complex matrix.
pub type CMatrix = nalgebra::DMatrix<C64>;
