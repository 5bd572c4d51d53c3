//! Generic 4-qubit states `g|Ψ_abcd⟩`: standard form, LU equivalence and
//! the reachability / convertibility decisions with witness protocols.

pub mod locc;
pub mod relabel;
pub mod standard;

pub use locc::{
    convertible4, eta, eta_map, hadamard_condition, hadamard_matrix, is_in_mes4, isolated4, isolation4,
    reachable4, validate_probabilities, Axis, ConvertibilityVerdict, IsolationVerdict, ReachCase,
    ReachabilityVerdict,
};
pub use relabel::{relabel_group, Relabel};
pub use standard::{
    blochs4, lu_compare4, lu_equivalent4, normalized_seed, standard_form4, LuComparison4, StandardForm4,
};
