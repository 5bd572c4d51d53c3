//! Explicit LOCC protocols reaching every 3-qubit state outside MES₃, and
//! the two-outcome POVM showing that no MES₃ state is isolated.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::protocol::{Protocol, Round};
use crate::qla::{pauli_decompose, LocalOperator, PauliForm, C64, ONE};
use crate::states::{FactoredState, Mes3Family, ProductOperator, Seed};
use crate::Tol;

use super::factor::{reduce3, StandardForm3};
use super::ghz::{ghz_in_mes, ghz_reduce, k_op, GhzStandardForm};
use super::mes::is_in_mes3;
use super::w::{w_in_mes, w_reduce, WStandardForm};

fn ids(n: usize) -> Vec<LocalOperator> {
    vec![LocalOperator::identity(); n]
}

fn with(n: usize, at: &[(usize, LocalOperator)]) -> Vec<LocalOperator> {
    let mut v = ids(n);
    for &(p, op) in at {
        v[p] = op;
    }
    v
}

fn inv(op: &LocalOperator, party: usize) -> Result<LocalOperator> {
    op.inverse().ok_or(Error::SingularLocal(party))
}

/// Source of the z-protocol: `k(b₁) ⊗ k(b₂) ⊗ k(b̃)|GHZ⟩` with
/// `b̃ = 2p b₃ cos 2α` and `p = 1/(|z|² + |z|⁻²)`.
pub fn zprotocol_source(target: &GhzStandardForm) -> GhzStandardForm {
    let m2 = target.z.norm_sqr();
    let p = 1.0 / (m2 + 1.0 / m2);
    let bt = 2.0 * p * target.gx[2] * (2.0 * target.alpha()).cos();
    GhzStandardForm::new([target.gx[0], target.gx[1], bt], ONE)
}

/// Party 3 measures `{√p k₃P_z k(b̃)⁻¹, √p k₃P_z X k(b̃)⁻¹}`; on the second
/// outcome parties 1 and 2 apply `X`.
pub fn synth_ghz_zprotocol(target: &GhzStandardForm, tol: &Tol) -> Result<Protocol> {
    let canon = ghz_reduce(&target.to_factored(), tol)?.form;
    if (canon.z - ONE).norm() < tol.zero {
        return Err(Error::TargetInMes);
    }
    let m2 = canon.z.norm_sqr();
    let p = 1.0 / (m2 + 1.0 / m2);
    let src = zprotocol_source(&canon);
    let g3 = k_op(src.gx[2]);
    let g3i = inv(&g3, 2)?;
    let h3 = k_op(canon.gx[2]) * LocalOperator::p_gamma(canon.z);
    let sp = p.sqrt();
    let m1 = (h3 * g3i).scale_re(sp);
    let m2op = (h3 * LocalOperator::x() * g3i).scale_re(sp);
    let x = LocalOperator::x();
    let round = Round::new(2, vec![m1, m2op]).with_correction(1, &with(3, &[(0, x), (1, x)]));
    Ok(Protocol {
        source: src.to_factored(),
        target: canon.to_factored(),
        rounds: vec![round],
    })
}

/// From `|GHZ⟩` to a target with a trivial local on party `t` and `z = 1`.
/// The other two parties measure `{k, kZ}`; party `t` applies `Z` once per
/// second outcome.
pub fn synth_ghz_trivialparty_protocol(target: &GhzStandardForm, tol: &Tol) -> Result<Protocol> {
    let canon = ghz_reduce(&target.to_factored(), tol)?.form;
    let t = canon
        .trivial_party(tol)
        .ok_or_else(|| Error::WrongShape("target has no trivial local operator".into()))?;
    if (canon.z - ONE).norm() >= tol.zero {
        return Err(Error::WrongShape("target has z != 1".into()));
    }
    let mut b = canon.gx;
    b[t] = 0.0;
    let target_fs = GhzStandardForm::new(b, ONE).to_factored();
    let mut rounds = Vec::new();
    for j in (0..3).filter(|&j| j != t) {
        let h = k_op(b[j]);
        rounds.push(
            Round::new(j, vec![h, h * LocalOperator::z()])
                .with_correction(1, &with(3, &[(t, LocalOperator::z())])),
        );
    }
    Ok(Protocol {
        source: FactoredState::bare(Seed::Ghz),
        target: target_fs,
        rounds,
    })
}

/// Source of the W protocol: `G₂ = H₂ + ZH₂Z = 2·diag(x₃², x₀² + x₂²)`.
pub fn w_protocol_source(target: &WStandardForm) -> WStandardForm {
    let [x0, x1, x2, x3] = target.x;
    let s = 2f64.sqrt();
    WStandardForm::new([0.0, s * x1, s * (x0 * x0 + x2 * x2).sqrt(), s * x3])
}

/// Party 2 measures `{h₂g₂⁻¹, h₂Zg₂⁻¹}`; on the second outcome parties 1
/// and 3 apply `Z`.
pub fn synth_w_protocol(target: &WStandardForm, tol: &Tol) -> Result<Protocol> {
    if w_in_mes(target, tol) {
        return Err(Error::TargetInMes);
    }
    let tfs = target.to_factored();
    let src = w_protocol_source(target);
    let sfs = src.to_factored();
    let h2 = *tfs.local(1);
    let g2i = inv(sfs.local(1), 1)?;
    let z = LocalOperator::z();
    let round = Round::new(1, vec![h2 * g2i, h2 * z * g2i]).with_correction(1, &with(3, &[(0, z), (2, z)]));
    Ok(Protocol {
        source: sfs,
        target: tfs,
        rounds: vec![round],
    })
}

/// `A = U (½𝟙 + a_y Y + a_z Z)^{1/2}`; satisfies `tr(A†AX) = 0`,
/// `tr(A†A) = 1` whenever `a_y² + a_z² < ¼`.
pub fn nonisolation_operator(a_y: f64, a_z: f64, u: LocalOperator) -> Result<LocalOperator> {
    let h = PauliForm::normalized_from([0.0, a_y, a_z]).to_operator();
    Ok(u * h.sqrt_psd()?)
}

/// `{A, AX}` on party 1, with `ZY(−β′) ⊗ ZY(−β)` on parties 2, 3 after the
/// second outcome.
pub fn synth_nonisolation_povm(fam: &Mes3Family, a: &LocalOperator, tol: &Tol) -> Result<Protocol> {
    fam.validate()?;
    let h = a.gram();
    let tr = h.trace().re;
    let tr_x = (h * LocalOperator::x()).trace().re;
    if tr_x.abs() > tol.eq || (tr - 1.0).abs() > tol.eq {
        return Err(Error::BadConstraint { tr_x, tr });
    }
    let sym = fam.symmetry();
    let round = Round::new(0, vec![*a, *a * LocalOperator::x()]).with_correction(1, sym.ops());
    let seed = Seed::Family(*fam);
    Ok(Protocol {
        source: FactoredState::bare(seed),
        target: FactoredState::new(
            seed,
            vec![*a, LocalOperator::identity(), LocalOperator::identity()],
        )?,
        rounds: vec![round],
    })
}

/// A protocol reaching (a standard-form representative of) `target`, plus
/// the local unitary `V` and scalar with `realize(target) = scale·V·realize(protocol.target)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Synthesis3 {
    pub protocol: Protocol,
    pub form: StandardForm3,
    pub lu_to_input: ProductOperator,
    pub scale: [f64; 2],
}

fn ghz_protocol_for(form: &GhzStandardForm, tol: &Tol) -> Result<Protocol> {
    if ghz_in_mes(form, tol) {
        return Err(Error::TargetInMes);
    }
    if (form.z - ONE).norm() < tol.zero {
        return synth_ghz_trivialparty_protocol(form, tol);
    }
    let pr = synth_ghz_zprotocol(form, tol)?;
    if is_in_mes3(&pr.source, tol)?.in_mes {
        return Ok(pr);
    }
    // the intermediate state has a trivial local: reach it from GHZ first
    let src = ghz_reduce(&pr.source, tol)?.form;
    let first = synth_ghz_trivialparty_protocol(&src, tol)?;
    Ok(first.then(pr))
}

/// Protocol from an MES₃ state to `target`; fails with `TargetInMes` when
/// the target is itself in MES₃.
pub fn synth3(target: &FactoredState, tol: &Tol) -> Result<Synthesis3> {
    let red = reduce3(target, tol)?;
    let protocol = match &red.form {
        StandardForm3::Ghz(g) => ghz_protocol_for(g, tol)?,
        StandardForm3::W(w) => synth_w_protocol(w, tol)?,
    };
    // the protocol target may differ from the canonical form by rounding
    // or snapped zeros; re-anchor the witness on the protocol target
    let anchor = match protocol.target.seed {
        Seed::Ghz => {
            let r = ghz_reduce(&protocol.target, tol)?;
            (r.unitary, r.scale)
        }
        _ => {
            let r = w_reduce(&protocol.target, tol)?;
            (r.unitary, r.scale)
        }
    };
    // realize(target) = s₁V₁ F, realize(protocol.target) = s₂V₂ F
    let v = red.unitary.compose(&anchor.0.adjoint());
    let s: C64 = red.scale / anchor.1;
    Ok(Synthesis3 {
        protocol,
        form: red.form,
        lu_to_input: v,
        scale: [s.re, s.im],
    })
}

/// Local unitary group used by each protocol, for SEP certificates.
pub fn protocol_group_labels(pr: &Protocol) -> Vec<(String, ProductOperator)> {
    let x = LocalOperator::x();
    let z = LocalOperator::z();
    let id = LocalOperator::identity();
    let mut out = vec![("I".to_string(), ProductOperator::identity(pr.source.n_parties()))];
    match pr.source.seed {
        Seed::Ghz => {
            out.push(("XXX".into(), ProductOperator(vec![x, x, x])));
            out.push(("ZZI".into(), ProductOperator(vec![z, z, id])));
            out.push(("ZIZ".into(), ProductOperator(vec![z, id, z])));
            out.push(("IZZ".into(), ProductOperator(vec![id, z, z])));
        }
        Seed::W => out.push(("ZZZ".into(), ProductOperator(vec![z, z, z]))),
        Seed::Family(f) => out.push(("XS".into(), f.symmetry())),
        Seed::Generic(_) => {}
    }
    out
}

/// `tr(A†A X)` and `tr(A†A)` of a candidate non-isolation operator.
pub fn nonisolation_traces(a: &LocalOperator) -> (f64, f64) {
    let h = a.gram();
    let p = pauli_decompose(&h, f64::INFINITY).expect("gram is Hermitian");
    (2.0 * p.g[0], 2.0 * p.c0)
}
