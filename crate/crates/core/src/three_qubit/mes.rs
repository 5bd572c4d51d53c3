//! Membership in the 3-qubit maximally entangled set.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qla::ONE;
use crate::states::FactoredState;
use crate::Tol;

use super::factor::{standard_form3, StandardForm3};
use super::ghz::ghz_in_mes;
use super::w::w_in_mes;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MesVerdict {
    pub in_mes: bool,
    pub form: StandardForm3,
    pub reason: String,
    /// GHZ class: `|z − 1|` of the canonical form; W class: `x₀/‖x‖`.
    pub z_margin: f64,
    /// GHZ class: smallest `|bᵢ|`; W class: unused (0).
    pub min_gx: f64,
}

pub fn is_in_mes3(fs: &FactoredState, tol: &Tol) -> Result<MesVerdict> {
    if fs.n_parties() != 3 {
        return Err(Error::PartyCount {
            expected: 3,
            got: fs.n_parties(),
        });
    }
    let form = standard_form3(fs, tol)?;
    Ok(match form {
        StandardForm3::Ghz(g) => {
            let in_mes = ghz_in_mes(&g, tol);
            let zeros = g.gx.iter().filter(|b| b.abs() < tol.zero).count();
            let z_off = (g.z - ONE).norm();
            let reason = if in_mes && zeros == 3 {
                "GHZ state".to_string()
            } else if in_mes {
                "GHZ class with z = 1 and no trivial local".to_string()
            } else if z_off >= tol.zero {
                "GHZ class with z != 1".to_string()
            } else {
                format!("GHZ class with {zeros} trivial local(s)")
            };
            MesVerdict {
                in_mes,
                form,
                reason,
                z_margin: z_off,
                min_gx: g.gx.iter().fold(f64::INFINITY, |m, b| m.min(b.abs())),
            }
        }
        StandardForm3::W(w) => {
            let in_mes = w_in_mes(&w, tol);
            MesVerdict {
                in_mes,
                form,
                reason: if in_mes {
                    "W class with x0 = 0".to_string()
                } else {
                    "W class with x0 > 0".to_string()
                },
                z_margin: w.x0_ratio(),
                min_gx: 0.0,
            }
        }
    })
}
