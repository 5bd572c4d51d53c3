//! Deterministic LOCC transformations among three- and four-qubit pure states.
//!
//! The crate decides membership in the maximally entangled set (MES) for
//! 3-qubit states and generic 4-qubit states, classifies 4-qubit states as
//! reachable, convertible or isolated, and synthesizes explicit LOCC
//! protocols for every positive answer. Protocols are checked by an
//! exhaustive branch simulator.
//!
//! Layout:
//! - [`qla`]: 2×2 operators, Pauli forms, state vectors (party 1 = most significant bit).
//! - [`states`]: seeds and factored states `g_1 ⊗ … ⊗ g_n |seed⟩`.
//! - [`three_qubit`]: GHZ/W standard forms, MES₃ membership, protocols.
//! - [`four_qubit`]: generic 4-qubit standard form and reachability, convertibility and isolation decisions.
//! - [`sep`]: separable-map feasibility over finite unitary symmetry groups.
//! - [`protocol`]: LOCC protocol representation and simulator.
//! - [`synth`]: protocol synthesis for any supported input.
//! - [`sampling`] and [`sweep`]: reproducible random instances and batch runs.

pub mod error;
pub mod four_qubit;
pub mod json;
pub mod protocol;
pub mod qla;
pub mod sampling;
pub mod sep;
pub mod states;
pub mod sweep;
pub mod synth;
pub mod three_qubit;

pub use error::{Error, Result};
pub use qla::{LocalOperator, PauliForm, StateVector, C64};
pub use states::{FactoredState, ProductOperator, Seed, SeedParams4};

use serde::{Deserialize, Serialize};

/// Numerical thresholds shared by every decision procedure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tol {
    /// Absolute tolerance for operator and state equality.
    pub eq: f64,
    /// Hermiticity check.
    pub herm: f64,
    /// Minimum `|det|` for a local operator to count as invertible.
    pub invertible: f64,
    /// Seed genericity (`a ≠ ±b` etc.).
    pub generic: f64,
    /// Measure-zero classifications (`g₁ = 0`, `x₀ = 0`, aligned axes).
    pub zero: f64,
    /// Max-abs Pauli residual accepted by the SEP solver.
    pub feas: f64,
    /// Threshold on the normalized 3-tangle separating GHZ from W class.
    pub tangle: f64,
}

impl Default for Tol {
    fn default() -> Self {
        Tol {
            eq: 1e-9,
            herm: 1e-10,
            invertible: 1e-8,
            generic: 1e-6,
            zero: 1e-7,
            feas: 1e-8,
            tangle: 1e-9,
        }
    }
}

impl Tol {
    /// Defaults, with `MESKIT_TOL_EQ` overriding `eq` when set and parseable.
    pub fn from_env() -> Self {
        let mut tol = Tol::default();
        if let Some(v) = std::env::var("MESKIT_TOL_EQ")
            .ok()
            .and_then(|s| s.trim().parse::<f64>().ok())
        {
            if v.is_finite() && v > 0.0 {
                tol.eq = v;
            }
        }
        tol
    }
}
