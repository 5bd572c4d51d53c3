//! Three-qubit pure states: SLOCC classification, LU standard forms, MES₃
//! membership and the protocols that certify it.

pub mod factor;
pub mod family;
pub mod ghz;
pub mod mes;
pub mod protocols;
pub mod w;

pub use factor::{
    classify3, factor3, lu_distance3, lu_equivalent3, reduce3, standard_form3, tangle, Class3,
    Classification, Reduction3, StandardForm3,
};
pub use family::{family_params_vector, mes3_family_params, FAMILY_MATCH_TOL};
pub use ghz::{ghz_in_mes, ghz_standard_form, GhzStandardForm};
pub use mes::{is_in_mes3, MesVerdict};
pub use protocols::{
    synth3, synth_ghz_trivialparty_protocol, synth_ghz_zprotocol, synth_nonisolation_povm, synth_w_protocol,
    Synthesis3,
};
pub use w::{w_in_mes, w_standard_form, WStandardForm};
