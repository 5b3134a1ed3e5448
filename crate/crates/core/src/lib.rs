//! Exact-arithmetic machinery for the positive-semidefinite relaxations `P_k`
//! of the dual body `Q` of the symmetric traveling salesman polytope.
//!
//! The ground set is the family of Hamiltonian cycles of `K_n`. A linear
//! functional `f` with average value 1 over the cycles lies in `P_k` when its
//! moment form `q_f(h) = (1/|X|) Σ f(x) h(x)²` is positive semidefinite on
//! polynomials of degree at most `k`.
//!
//! Modules:
//!
//! * [`cycles`]: Hamiltonian cycle enumeration and closed-form containment counts.
//! * [`functionals`]: affine functionals and the normalized facet families.
//! * [`moment`]: moment matrices by enumeration and in closed form, trace identity.
//! * [`psd`]: exact and floating-point PSD decisions, boundary certificates.
//! * [`spectra`]: closed-form eigensystems of subtour-elimination moment matrices.
//! * [`bounds`]: metric constants `a_k = n/k + α_k` and their enumeration oracles.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod bounds;
pub mod combinatorics;
pub mod cycles;
mod error;
pub mod functionals;
pub mod linalg;
pub mod moment;
pub mod psd;
pub mod rational;
pub mod spectra;

pub use error::{Error, Result};
pub use rational::Rational;

/// Resource caps shared by every enumerating or matrix-building operation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest number of Hamiltonian cycles an enumeration may visit.
    pub max_cycles: u64,
    /// Largest moment-matrix dimension that may be assembled.
    pub max_matrix_dim: usize,
    /// Largest matrix dimension handed to the exact LDLᵀ decision
    /// (the default admits `k = 1` up to `n = 17`).
    pub max_exact_dim: usize,
}

impl Limits {
    /// `11!/2` cycles, i.e. every `n <= 12`.
    pub const DEFAULT_MAX_CYCLES: u64 = 19_958_400;
    pub const DEFAULT_MAX_MATRIX_DIM: usize = 4096;
    pub const DEFAULT_MAX_EXACT_DIM: usize = 153;
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_cycles: Self::DEFAULT_MAX_CYCLES,
            max_matrix_dim: Self::DEFAULT_MAX_MATRIX_DIM,
            max_exact_dim: Self::DEFAULT_MAX_EXACT_DIM,
        }
    }
}
