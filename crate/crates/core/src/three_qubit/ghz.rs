//! GHZ-class standard form `k(b₁) ⊗ k(b₂) ⊗ k(b₃)P_z |GHZ⟩`, where
//! `k(b) = (½𝟙 + bX)^{1/2}` and `P_z = diag(z, 1/z)`.
//!
//! Canonical representative: `b₁, b₂ ≥ 0`, `|z| ≥ 1` and
//! `arg z ∈ (−π/4, π/4]` with `b₃` carrying the sign. The reductions used:
//!
//! - `X⊗³` maps `z ↦ 1/z` (it commutes with every `k(b)`);
//! - `P_{iz} = i P_z Z` and `Z k(b) = k(−b) Z`, so `z ↦ iz` flips `b₃`;
//! - `P_{−z} = −P_z`;
//! - if some `bᵢ = 0`, `P_z` can be moved to that party, where its phase
//!   part `P_{z/|z|}` is a local unitary, so `z ↦ |z|`. Pairs `Z⊗Z` then make
//!   every `bᵢ ≥ 0`.
//!
//! On the line `|z| = 1` the residual `z ↦ z̄` is fixed by taking
//! `arg z ≥ 0`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qla::{c, cr, pauli_decompose, LocalOperator, PauliForm, C64, I, ONE};
use crate::states::{FactoredState, ProductOperator, Seed};
use crate::Tol;

/// `P_γ†(s𝟙 + tX)P_γ = G` for positive definite `G`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XGauge {
    pub gamma: C64,
    /// `s𝟙 + tX` as a Pauli form, `t ≥ 0`.
    pub gx: PauliForm,
}

pub fn x_gauge(g: &PauliForm) -> Result<XGauge> {
    if !g.is_positive_definite() {
        return Err(Error::NotPositiveDefinite);
    }
    let op = g.to_operator();
    let alpha = op.0[0][0].re;
    let delta = op.0[1][1].re;
    let beta = op.0[0][1];
    let s = (alpha * delta).sqrt();
    let t = beta.norm();
    let modulus = (alpha / delta).sqrt().sqrt();
    let phase = if t > 0.0 { -beta.arg() / 2.0 } else { 0.0 };
    Ok(XGauge {
        gamma: C64::from_polar(modulus, phase),
        gx: PauliForm::new(s, [t, 0.0, 0.0]),
    })
}

/// `(½𝟙 + bX)^{1/2}`, defined for `|b| < ½`.
pub fn k_op(b: f64) -> LocalOperator {
    let p = (0.5 + b).max(0.0).sqrt();
    let m = (0.5 - b).max(0.0).sqrt();
    LocalOperator::from_real([[(p + m) / 2.0, (p - m) / 2.0], [(p - m) / 2.0, (p + m) / 2.0]])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GhzStandardForm {
    /// X components `b₁, b₂, b₃` of the trace-one grams.
    pub gx: [f64; 3],
    pub z: C64,
}

/// Standard form together with the local unitary relating it to the input:
/// `realize(input) = scale · V · realize(form)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GhzReduction {
    pub form: GhzStandardForm,
    pub unitary: ProductOperator,
    pub scale: C64,
}

impl GhzStandardForm {
    pub fn new(gx: [f64; 3], z: C64) -> Self {
        GhzStandardForm { gx, z }
    }

    pub fn alpha(&self) -> f64 {
        self.z.arg()
    }

    pub fn abs_z(&self) -> f64 {
        self.z.norm()
    }

    pub fn to_factored(&self) -> FactoredState {
        let [b1, b2, b3] = self.gx;
        FactoredState {
            seed: Seed::Ghz,
            locals: ProductOperator(vec![
                k_op(b1),
                k_op(b2),
                k_op(b3) * LocalOperator::p_gamma(self.z),
            ]),
        }
    }

    /// Index of the party with the smallest `|bᵢ|` if it is below `tol_zero`.
    pub fn trivial_party(&self, tol: &Tol) -> Option<usize> {
        let i = argmin_abs(&self.gx);
        (self.gx[i].abs() < tol.zero).then_some(i)
    }

    /// `b₃ e^{2iα}`: together with `b₁, b₂, |z|` this is a complete LU
    /// invariant (up to conjugation when `|z| = 1`).
    pub fn twisted_b3(&self) -> C64 {
        C64::from_polar(1.0, 2.0 * self.alpha()) * self.gx[2]
    }

    /// Distance between two canonical forms.
    pub fn distance(&self, other: &Self) -> f64 {
        let d12 = (self.gx[0] - other.gx[0])
            .abs()
            .max((self.gx[1] - other.gx[1]).abs());
        let dz = (self.abs_z() - other.abs_z()).abs();
        let w1 = self.twisted_b3();
        let w2 = other.twisted_b3();
        let mut dw = (w1 - w2).norm();
        if (self.abs_z() - 1.0).abs() < 1e-6 && (other.abs_z() - 1.0).abs() < 1e-6 {
            dw = dw.min((w1 - w2.conj()).norm());
        }
        d12.max(dz).max(dw)
    }
}

fn argmin_abs(v: &[f64; 3]) -> usize {
    let mut best = 0;
    for i in 1..3 {
        if v[i].abs() < v[best].abs() {
            best = i;
        }
    }
    best
}

fn on_party(n: usize, party: usize, op: LocalOperator) -> ProductOperator {
    let mut ops = vec![LocalOperator::identity(); n];
    ops[party] = op;
    ProductOperator(ops)
}

/// Canonical GHZ standard form with its LU witness.
pub fn ghz_reduce(fs: &FactoredState, tol: &Tol) -> Result<GhzReduction> {
    if fs.seed != Seed::Ghz {
        return Err(Error::WrongShape("expected a GHZ seed".into()));
    }
    fs.validate(tol)?;

    let mut b = [0.0; 3];
    let mut us = Vec::with_capacity(3);
    let mut scale = ONE;
    let mut z = ONE;
    for (i, g) in fs.locals.ops().iter().enumerate() {
        let gram = pauli_decompose(&g.gram(), f64::INFINITY)?;
        let xg = x_gauge(&gram).map_err(|_| Error::SingularLocal(i))?;
        let s = xg.gx.c0;
        b[i] = xg.gx.g[0] / (2.0 * s);
        z *= xg.gamma;
        let c_i = (2.0 * s).sqrt();
        // g = c·U·k(b)·P_γ
        let core = k_op(b[i]) * LocalOperator::p_gamma(xg.gamma);
        let u = *g * core.inverse().ok_or(Error::SingularLocal(i))?;
        us.push(u.scale_re(1.0 / c_i));
        scale *= c_i;
    }
    let mut v = ProductOperator(us);

    if z.norm() < 1.0 {
        z = z.inv();
        v = v.compose(&ProductOperator::uniform(LocalOperator::x(), 3));
    }

    // reduce arg z into (−π/4, π/4] using z ↦ −iz (b₃ ↦ −b₃) and z ↦ −z
    let alpha = z.arg();
    let quarter_turns = ((alpha - FRAC_PI_4) / FRAC_PI_2).ceil() as i64;
    let q = quarter_turns.rem_euclid(4);
    for _ in 0..q {
        // state(z, b₃) = i Z₃ state(−iz, −b₃)
        z *= -I;
        b[2] = -b[2];
        v = v.compose(&on_party(3, 2, LocalOperator::z()));
        scale *= I;
    }

    if let Some(t) = trivial_index(&b, tol) {
        // P_z on party 3 equals P_z on party t; split off its phase there
        let u = z / z.norm();
        if (u - ONE).norm() > 0.0 {
            v = v.compose(&on_party(3, t, LocalOperator::p_gamma(u)));
            z = cr(z.norm());
        }
        for i in 0..3 {
            if i != t && b[i] < 0.0 {
                b[i] = -b[i];
                let mut ops = vec![LocalOperator::identity(); 3];
                ops[i] = LocalOperator::z();
                ops[t] = LocalOperator::z();
                v = v.compose(&ProductOperator(ops));
            }
        }
    } else if (z.norm() - 1.0).abs() < tol.zero && z.arg() < 0.0 {
        z = z.inv();
        v = v.compose(&ProductOperator::uniform(LocalOperator::x(), 3));
    }

    Ok(GhzReduction {
        form: GhzStandardForm::new(b, z),
        unitary: v,
        scale,
    })
}

fn trivial_index(b: &[f64; 3], tol: &Tol) -> Option<usize> {
    let i = argmin_abs(b);
    (b[i].abs() < tol.zero).then_some(i)
}

pub fn ghz_standard_form(fs: &FactoredState, tol: &Tol) -> Result<GhzStandardForm> {
    ghz_reduce(fs, tol).map(|r| r.form)
}

/// `z = 1` canonically, and either no `bᵢ` vanishes or all do.
pub fn ghz_in_mes(form: &GhzStandardForm, tol: &Tol) -> bool {
    let zeros = form.gx.iter().filter(|b| b.abs() < tol.zero).count();
    (zeros == 0 || zeros == 3) && (form.z - ONE).norm() < tol.zero
}

/// Symmetry `P_γ₁ ⊗ P_γ₂ ⊗ P_{(γ₁γ₂)⁻¹}` of the GHZ seed.
pub fn ghz_p_symmetry(g1: C64, g2: C64) -> ProductOperator {
    ProductOperator(vec![
        LocalOperator::p_gamma(g1),
        LocalOperator::p_gamma(g2),
        LocalOperator::p_gamma((g1 * g2).inv()),
    ])
}

/// `z` with modulus `m` and argument `a`, reduced to `(−π, π]`.
pub fn z_from_polar(m: f64, a: f64) -> C64 {
    let mut a = a % (2.0 * PI);
    if a <= -PI {
        a += 2.0 * PI;
    } else if a > PI {
        a -= 2.0 * PI;
    }
    c(m * a.cos(), m * a.sin())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qla::proportional_up_to_phase;

    fn tol() -> Tol {
        Tol::default()
    }

    #[test]
    fn x_gauge_examples() {
        let g = PauliForm::new(0.5, [0.3, 0.0, 0.0]);
        let xg = x_gauge(&g).unwrap();
        assert!((xg.gamma - ONE).norm() < 1e-15);
        assert!((xg.gx.c0 - 0.5).abs() < 1e-15 && (xg.gx.g[0] - 0.3).abs() < 1e-15);

        let d = PauliForm::new(0.5, [0.0, 0.0, 0.3]);
        let xg = x_gauge(&d).unwrap();
        assert!((xg.gx.c0 - 0.4).abs() < 1e-15);
        assert_eq!(xg.gx.g[0], 0.0);
        assert!((xg.gamma.norm_sqr() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn x_gauge_reconstructs() {
        let g = PauliForm::new(0.7, [0.2, -0.3, 0.1]);
        let xg = x_gauge(&g).unwrap();
        let p = LocalOperator::p_gamma(xg.gamma);
        let back = p.adjoint() * xg.gx.to_operator() * p;
        assert!(back.max_abs_diff(&g.to_operator()) < 1e-14);
        assert!(x_gauge(&PauliForm::new(0.5, [0.3, 0.4, 0.0])).is_err());
    }

    #[test]
    fn ghz_itself() {
        let f = ghz_standard_form(&FactoredState::bare(Seed::Ghz), &tol()).unwrap();
        assert!(f.gx.iter().all(|b| b.abs() < 1e-15));
        assert!((f.z - ONE).norm() < 1e-15);
        assert!(ghz_in_mes(&f, &tol()));
    }

    #[test]
    fn fixed_point() {
        let form = GhzStandardForm::new([0.3, 0.2, 0.1], ONE);
        let f = ghz_standard_form(&form.to_factored(), &tol()).unwrap();
        assert!(f.distance(&form) < 1e-14);
        assert!((f.z - ONE).norm() < 1e-14);
    }

    #[test]
    fn witness_reconstructs_input() {
        let t = tol();
        let g1 = LocalOperator::new([[c(0.3, 0.1), c(1.2, -0.4)], [c(-0.7, 0.2), c(0.5, 0.9)]]);
        let g2 = LocalOperator::new([[c(1.1, 0.0), c(0.2, 0.3)], [c(0.4, -0.6), c(0.8, 0.1)]]);
        let g3 = LocalOperator::new([[c(0.2, -0.5), c(0.1, 0.1)], [c(0.9, 0.3), c(-1.0, 0.4)]]);
        let fs = FactoredState::new(Seed::Ghz, vec![g1, g2, g3]).unwrap();
        let r = ghz_reduce(&fs, &t).unwrap();
        assert!(r.unitary.is_unitary(1e-12));
        let lhs = fs.realize(&t).unwrap();
        let rhs = r.unitary.apply(&r.form.to_factored().realize(&t).unwrap());
        assert!(lhs.max_abs_diff(&rhs.scale(r.scale)) < 1e-12);
        assert!(r.form.abs_z() >= 1.0);
        let a = r.form.alpha();
        assert!(a > -FRAC_PI_4 && a <= FRAC_PI_4 + 1e-15);
    }

    #[test]
    fn quarter_turn_flips_b3() {
        let t = tol();
        let a = GhzStandardForm::new([0.3, 0.2, 0.1], z_from_polar(1.5, 0.2 + FRAC_PI_2));
        let r = ghz_reduce(&a.to_factored(), &t).unwrap();
        assert!((r.form.gx[2] + 0.1).abs() < 1e-14);
        assert!((r.form.alpha() - 0.2).abs() < 1e-14);
        let v1 = a.to_factored().realize(&t).unwrap();
        let v2 = r.form.to_factored().realize(&t).unwrap();
        assert!(proportional_up_to_phase(&v1, &r.unitary.apply(&v2), 1e-13));
    }

    #[test]
    fn trivial_party_absorbs_phase() {
        let t = tol();
        let a = GhzStandardForm::new([0.0, 0.2, -0.1], z_from_polar(1.3, 0.4));
        let r = ghz_reduce(&a.to_factored(), &t).unwrap();
        assert!(r.form.z.im.abs() < 1e-14 && (r.form.z.re - 1.3).abs() < 1e-13);
        assert!(r.form.gx.iter().all(|&b| b >= 0.0));
        let v1 = a.to_factored().realize(&t).unwrap();
        let v2 = r.form.to_factored().realize(&t).unwrap();
        assert!(v1.max_abs_diff(&r.unitary.apply(&v2).scale(r.scale)) < 1e-13);
    }

    #[test]
    fn mes_examples() {
        let t = tol();
        let f = ghz_standard_form(
            &GhzStandardForm::new([0.1, 0.2, 0.3], C64::from_polar(1.0, FRAC_PI_4)).to_factored(),
            &t,
        )
        .unwrap();
        assert!(!ghz_in_mes(&f, &t));
        let f = ghz_standard_form(&GhzStandardForm::new([0.1, 0.2, 0.3], -ONE).to_factored(), &t).unwrap();
        assert!(ghz_in_mes(&f, &t));
        // z = i is LU-equivalent to z = 1 with b₃ negated
        let f = ghz_standard_form(&GhzStandardForm::new([0.1, 0.2, 0.3], I).to_factored(), &t).unwrap();
        assert!(ghz_in_mes(&f, &t));
        assert!((f.gx[2] + 0.3).abs() < 1e-14);
        let f = ghz_standard_form(&GhzStandardForm::new([0.0, 0.2, 0.3], ONE).to_factored(), &t).unwrap();
        assert!(!ghz_in_mes(&f, &t));
    }
}
