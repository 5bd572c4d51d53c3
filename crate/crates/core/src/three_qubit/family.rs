//! Locating an MES₃ state inside the family
//! `Ψ(a,β,β′) = |0⟩|Ψ_s⟩ + |1⟩ Y(β′)⊗Y(β) |Ψ_s⟩`.
//!
//! For the normalized family state with `D = (a² − ½)²`, `u = √(1 − 4D)`:
//!
//! - the single-party Bloch lengths are `r₁ = |cc′ + u ss′|/2`,
//!   `r₂ = √D |cos β′|`, `r₃ = √D |cos β|`;
//! - the 3-tangle is `|m² − u²|` with `m = ss′ + u cc′`.
//!
//! Given a target, `r₂, r₃` fix `|cos β|, |cos β′|` as functions of `D`, and
//! `D` is found from a one-dimensional scan: the `r₁` relation for GHZ-class
//! targets, the vanishing tangle (`m = ±u`) for W-class targets. Every
//! candidate is checked against the target's standard form.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::qla::StateVector;
use crate::states::{FactoredState, Mes3Family, Seed};
use crate::Tol;

use super::factor::{classify3, standard_form3_vector, Class3, StandardForm3};

const GRID: usize = 4001;
/// Candidates farther than this from the target standard form are rejected.
pub const FAMILY_MATCH_TOL: f64 = 1e-7;

fn bloch_len(v: &StateVector, party: usize) -> f64 {
    let rho = v.reduced(party);
    let g = crate::qla::pauli_decompose(&rho, f64::INFINITY).expect("reduced state is Hermitian");
    crate::qla::norm3(&g.g)
}

fn reduce_angle(b: f64) -> f64 {
    let mut b = b % PI;
    if b > FRAC_PI_2 {
        b -= PI;
    } else if b <= -FRAC_PI_2 {
        b += PI;
    }
    b
}

/// Sign changes, interior near-zero minima and near-zero endpoints of `f`.
fn roots(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64) -> Vec<f64> {
    let mut out = Vec::new();
    if !(hi > lo) {
        let v = f(lo);
        if v.is_finite() && v.abs() < 1e-6 {
            out.push(lo);
        }
        return out;
    }
    let xs: Vec<f64> = (0..GRID)
        .map(|i| lo + (hi - lo) * i as f64 / (GRID - 1) as f64)
        .collect();
    let fs: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    for i in 0..GRID - 1 {
        let (fa, fb) = (fs[i], fs[i + 1]);
        if !(fa.is_finite() && fb.is_finite()) {
            continue;
        }
        if fa == 0.0 {
            out.push(xs[i]);
        } else if fa * fb < 0.0 {
            let (mut a, mut b) = (xs[i], xs[i + 1]);
            let mut fa = fa;
            for _ in 0..80 {
                let m = 0.5 * (a + b);
                let fm = f(m);
                if fa * fm <= 0.0 {
                    b = m;
                } else {
                    a = m;
                    fa = fm;
                }
            }
            out.push(0.5 * (a + b));
        }
    }
    // tangential roots: local minima of |f| that come close to zero
    for i in 1..GRID - 1 {
        let (l, m, r) = (fs[i - 1].abs(), fs[i].abs(), fs[i + 1].abs());
        if m <= l && m <= r && m < 1e-3 && fs[i - 1] * fs[i + 1] > 0.0 {
            let (mut a, mut b) = (xs[i - 1], xs[i + 1]);
            let g = |x: f64| f(x).abs();
            let phi = 0.5 * (5f64.sqrt() - 1.0);
            for _ in 0..100 {
                let c = b - phi * (b - a);
                let d = a + phi * (b - a);
                if g(c) < g(d) {
                    b = d;
                } else {
                    a = c;
                }
            }
            let x = 0.5 * (a + b);
            if g(x) < 1e-9 {
                out.push(x);
            }
        }
    }
    for &x in &[lo, hi] {
        let v = f(x);
        if v.is_finite() && v.abs() < 1e-6 {
            out.push(x);
        }
    }
    out
}

fn candidates(v: &StateVector, class: Class3) -> Vec<Mes3Family> {
    let r1 = bloch_len(v, 0);
    let r2 = bloch_len(v, 1);
    let r3 = bloch_len(v, 2);
    let lo = (r2 * r2).max(r3 * r3).max(1e-14);
    let hi = 0.25;
    let prod = |d: f64| ((1.0 - r2 * r2 / d) * (1.0 - r3 * r3 / d)).max(0.0).sqrt();
    let u_of = |d: f64| (1.0 - 4.0 * d).max(0.0).sqrt();

    let mut ds = Vec::new();
    for sigma in [1.0, -1.0] {
        for sign in [1.0, -1.0] {
            let f: Box<dyn Fn(f64) -> f64> = match class {
                Class3::W => Box::new(move |d: f64| sigma * prod(d) + u_of(d) * r2 * r3 / d - sign * u_of(d)),
                _ => Box::new(move |d: f64| r2 * r3 / d + sigma * u_of(d) * prod(d) - sign * 2.0 * r1),
            };
            ds.extend(roots(f.as_ref(), lo, hi));
        }
    }

    let mut out = Vec::new();
    for d in ds {
        let sd = d.sqrt();
        let a = (0.5 + sd).sqrt().min(1.0);
        let cb = (r3 / sd).min(1.0).acos();
        let cbp = (r2 / sd).min(1.0).acos();
        for sb in [1.0, -1.0] {
            for sbp in [1.0, -1.0] {
                out.push(Mes3Family::new(a, reduce_angle(sb * cb), reduce_angle(sbp * cbp)));
            }
        }
    }
    out
}

/// Family parameters of a state LU-equivalent to `v`, with the distance
/// between the two standard forms.
pub fn family_params_vector(v: &StateVector, tol: &Tol) -> Result<(Mes3Family, f64)> {
    let cls = classify3(v, tol)?;
    let target = standard_form3_vector(v, tol)?;
    let mut best: Option<(Mes3Family, f64)> = None;
    for cand in candidates(v, cls.class) {
        let w = cand.vector();
        let Ok(form) = standard_form3_vector(&w, tol) else {
            continue;
        };
        let d = form.distance(&target);
        if best.is_none_or(|(_, bd)| d < bd) {
            best = Some((cand, d));
        }
    }
    match best {
        Some((f, d)) if d < FAMILY_MATCH_TOL => Ok((f, d)),
        _ => Err(Error::NoFamilyMatch),
    }
}

/// `(a, β, β′)` for a state in MES₃; rejects states outside it.
pub fn mes3_family_params(fs: &FactoredState, tol: &Tol) -> Result<Mes3Family> {
    if !super::mes::is_in_mes3(fs, tol)?.in_mes {
        return Err(Error::NotInMes);
    }
    let v = fs.realize(tol)?;
    family_params_vector(&v, tol).map(|(f, _)| f)
}

/// Standard form of a family member (always GHZ or W class unless
/// biseparable).
pub fn family_standard_form(f: &Mes3Family, tol: &Tol) -> Result<StandardForm3> {
    standard_form3_vector(&FactoredState::bare(Seed::Family(*f)).realize(tol)?, tol)
}
