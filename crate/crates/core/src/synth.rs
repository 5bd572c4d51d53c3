//! One entry point for protocol synthesis across party counts.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::four_qubit::{convertible4, reachable4};
use crate::protocol::Protocol;
use crate::qla::LocalOperator;
use crate::states::{FactoredState, Seed};
use crate::three_qubit::{synth3, synth_nonisolation_povm};
use crate::Tol;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SynthKind {
    /// From an MES₃ state to a GHZ-class or W-class target.
    ThreeQubit,
    /// Two-outcome POVM on a family state, ending in another MES₃ state.
    Nonisolation,
    /// From a 4-qubit state to the input.
    Reach4,
    /// From the input to an LU-inequivalent 4-qubit state.
    Convert4,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Synthesized {
    pub kind: SynthKind,
    pub protocol: Protocol,
}

fn nonisolation(fs: &FactoredState, tol: &Tol) -> Result<Synthesized> {
    let Seed::Family(f) = fs.seed else {
        unreachable!("caller checks the seed")
    };
    let id = LocalOperator::identity();
    for party in 1..3 {
        if fs.local(party).max_abs_diff(&id) > tol.eq {
            return Err(Error::WrongShape(
                "family states take an operator on party 0 only".into(),
            ));
        }
    }
    Ok(Synthesized {
        kind: SynthKind::Nonisolation,
        protocol: synth_nonisolation_povm(&f, fs.local(0), tol)?,
    })
}

/// A deterministic protocol ending in `fs` (or an LU-equivalent
/// representative), or `None` when no other state reaches `fs`.
///
/// Family-seeded inputs `A ⊗ 𝟙 ⊗ 𝟙 |Ψ⟩` yield the non-isolation POVM
/// starting at `|Ψ⟩`.
pub fn synthesize(fs: &FactoredState, tol: &Tol) -> Result<Option<Synthesized>> {
    match (fs.n_parties(), &fs.seed) {
        (3, Seed::Family(_)) => nonisolation(fs, tol).map(Some),
        (3, _) => match synth3(fs, tol) {
            Ok(s) => Ok(Some(Synthesized {
                kind: SynthKind::ThreeQubit,
                protocol: s.protocol,
            })),
            Err(Error::TargetInMes) => Ok(None),
            Err(e) => Err(e),
        },
        (4, _) => Ok(reachable4(fs, tol)?.witness.map(|protocol| Synthesized {
            kind: SynthKind::Reach4,
            protocol,
        })),
        (n, _) => Err(Error::PartyCount { expected: 3, got: n }),
    }
}

/// Every protocol the toolkit can build around `fs`: the synthesized one,
/// and for 4 parties also the conversion witness leaving `fs`.
pub fn all_protocols(fs: &FactoredState, tol: &Tol) -> Result<Vec<Synthesized>> {
    let mut out: Vec<Synthesized> = synthesize(fs, tol)?.into_iter().collect();
    if fs.n_parties() == 4 {
        if let Some(protocol) = convertible4(fs, tol)?.witness {
            out.push(Synthesized {
                kind: SynthKind::Convert4,
                protocol,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::simulate;
    use crate::sampling::{sample, SampleClass};

    #[test]
    fn protocol_mix_is_synthesized() {
        let t = Tol::default();
        for (i, fs) in sample(SampleClass::Protocols, 12, 5).unwrap().iter().enumerate() {
            let s = synthesize(fs, &t)
                .unwrap()
                .unwrap_or_else(|| panic!("instance {i}"));
            assert!(simulate(&s.protocol, &t).unwrap().deterministic, "instance {i}");
        }
    }

    #[test]
    fn mes_targets_have_no_protocol() {
        let t = Tol::default();
        for fs in sample(SampleClass::ThreeGhzMes, 5, 1).unwrap() {
            assert!(synthesize(&fs, &t).unwrap().is_none());
        }
    }

    #[test]
    fn family_needs_bare_parties() {
        let t = Tol::default();
        let mut fs = sample(SampleClass::ThreeFamilyPovm, 1, 2).unwrap().remove(0);
        fs.locals.0[2] = LocalOperator::x();
        assert!(matches!(synthesize(&fs, &t), Err(Error::WrongShape(_))));
    }
}
