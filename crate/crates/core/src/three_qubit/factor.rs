//! SLOCC classification of raw 3-qubit vectors and recovery of a factored
//! form `g₁⊗g₂⊗g₃|GHZ⟩` or `g₁⊗g₂⊗g₃|W⟩`.
//!
//! Write `ψ = |0⟩A₀ + |1⟩A₁` with 2×2 slices `A₀, A₁` (parties 2, 3). The
//! pencil `det(λ₀A₀ + λ₁A₁)` is a binary quadratic whose discriminant is
//! Cayley's hyperdeterminant. Two distinct roots give the GHZ class, a
//! double root the W class.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qla::{LocalOperator, StateVector, C64, ZERO};
use crate::states::{FactoredState, ProductOperator, Seed};
use crate::Tol;

use super::ghz::{ghz_reduce, GhzStandardForm};
use super::w::{w_reduce, WStandardForm};

type M2 = [[C64; 2]; 2];

fn slices(v: &StateVector) -> (M2, M2) {
    let a = v.amplitudes();
    ([[a[0], a[1]], [a[2], a[3]]], [[a[4], a[5]], [a[6], a[7]]])
}

fn det(m: &M2) -> C64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

/// Coefficients `(A, B, C)` of `det(λ₀A₀ + λ₁A₁) = Aλ₀² + Bλ₀λ₁ + Cλ₁²`.
fn pencil(a0: &M2, a1: &M2) -> (C64, C64, C64) {
    let m = a0[0][0] * a1[1][1] + a0[1][1] * a1[0][0] - a0[0][1] * a1[1][0] - a0[1][0] * a1[0][1];
    (det(a0), m, det(a1))
}

/// Cayley hyperdeterminant `B² − 4AC` of the raw amplitudes.
pub fn hyperdeterminant(v: &StateVector) -> C64 {
    let (a0, a1) = slices(v);
    let (a, b, c) = pencil(&a0, &a1);
    b * b - 4.0 * a * c
}

/// 3-tangle `4|Det|` of the normalized state; 1 for GHZ, 0 for W.
pub fn tangle(v: &StateVector) -> f64 {
    let n2 = v.norm_sqr();
    4.0 * hyperdeterminant(v).norm() / (n2 * n2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Class3 {
    Ghz,
    W,
    /// One party factors out; `cut` is that party (0-based).
    Biseparable {
        cut: usize,
    },
    Product,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub class: Class3,
    pub tangle: f64,
    /// Smaller eigenvalue of each single-party reduction.
    pub reduced_min_eig: [f64; 3],
}

fn min_eig(rho: &LocalOperator) -> f64 {
    let a = rho.0[0][0].re;
    let d = rho.0[1][1].re;
    let b = rho.0[0][1].norm();
    let mean = 0.5 * (a + d);
    let r = (0.25 * (a - d) * (a - d) + b * b).sqrt();
    (mean - r).max(0.0)
}

pub fn classify3(v: &StateVector, tol: &Tol) -> Result<Classification> {
    if v.n_parties() != 3 {
        return Err(Error::PartyCount {
            expected: 3,
            got: v.n_parties(),
        });
    }
    let tau = tangle(v);
    let eig = [0, 1, 2].map(|p| min_eig(&v.reduced(p)));
    let pure: Vec<usize> = (0..3).filter(|&p| eig[p] < tol.zero).collect();
    let class = if tau > tol.tangle {
        Class3::Ghz
    } else if pure.is_empty() {
        Class3::W
    } else if pure.len() == 1 {
        Class3::Biseparable { cut: pure[0] }
    } else {
        Class3::Product
    };
    Ok(Classification {
        class,
        tangle: tau,
        reduced_min_eig: eig,
    })
}

/// Rank-one `m ≈ v wᵀ`, read off the largest entry.
fn rank_one(m: &M2) -> ([C64; 2], [C64; 2]) {
    let mut best = (0, 0);
    for i in 0..2 {
        for j in 0..2 {
            if m[i][j].norm() > m[best.0][best.1].norm() {
                best = (i, j);
            }
        }
    }
    let (i, j) = best;
    let v = [m[0][j], m[1][j]];
    let w = [m[i][0] / m[i][j], m[i][1] / m[i][j]];
    (v, w)
}

fn combine(l: [C64; 2], a0: &M2, a1: &M2) -> M2 {
    let mut m = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            m[i][j] = l[0] * a0[i][j] + l[1] * a1[i][j];
        }
    }
    m
}

fn outer(v: [C64; 2], w: [C64; 2]) -> M2 {
    [[v[0] * w[0], v[0] * w[1]], [v[1] * w[0], v[1] * w[1]]]
}

fn inner_m(p: &M2, q: &M2) -> C64 {
    let mut s = ZERO;
    for i in 0..2 {
        for j in 0..2 {
            s += p[i][j].conj() * q[i][j];
        }
    }
    s
}

fn columns(c0: [C64; 2], c1: [C64; 2]) -> LocalOperator {
    LocalOperator::new([[c0[0], c1[0]], [c0[1], c1[1]]])
}

fn perp(v: [C64; 2]) -> [C64; 2] {
    [-v[1].conj(), v[0].conj()]
}

fn transpose(m: &LocalOperator) -> LocalOperator {
    LocalOperator::new([[m.0[0][0], m.0[1][0]], [m.0[0][1], m.0[1][1]]])
}

/// Coordinates of `m` in the basis `{b_i c_jᵀ}`: solves `m = B K Cᵀ`.
fn coords(m: &M2, b: &LocalOperator, c: &LocalOperator) -> Option<M2> {
    let k = b.inverse()? * LocalOperator::new(*m) * transpose(&c.inverse()?);
    Some(k.0)
}

/// Recover a factored form of a GHZ- or W-class vector.
pub fn factor3(v: &StateVector, tol: &Tol) -> Result<FactoredState> {
    let cls = classify3(v, tol)?;
    let (a0, a1) = slices(v);
    let (a, b, c) = pencil(&a0, &a1);
    match cls.class {
        Class3::Ghz => {
            let d = b * b - 4.0 * a * c;
            let sd = d.sqrt();
            let q = if (b + sd).norm() >= (b - sd).norm() {
                -(b + sd) * 0.5
            } else {
                -(b - sd) * 0.5
            };
            // roots (λ₀ : λ₁) = (q : A) and (C : q)
            let m1 = combine([q, a], &a0, &a1);
            let m2 = combine([c, q], &a0, &a1);
            let (v1, w1) = rank_one(&m1);
            let (v0, w0) = rank_one(&m2);
            let p = outer(v0, w0);
            let r = outer(v1, w1);
            // least squares for A_i = u_i P + u'_i R
            let gpp = inner_m(&p, &p);
            let gpr = inner_m(&p, &r);
            let grr = inner_m(&r, &r);
            let det_g = gpp * grr - gpr * gpr.conj();
            if det_g.norm() < 1e-300 {
                return Err(Error::InvalidState("degenerate GHZ decomposition".into()));
            }
            let mut u = [ZERO; 2];
            let mut u2 = [ZERO; 2];
            for (i, ai) in [a0, a1].iter().enumerate() {
                let bp = inner_m(&p, ai);
                let br = inner_m(&r, ai);
                u[i] = (grr * bp - gpr * br) / det_g;
                u2[i] = (gpp * br - gpr.conj() * bp) / det_g;
            }
            let fs = FactoredState {
                seed: Seed::Ghz,
                locals: ProductOperator(vec![columns(u, u2), columns(v0, v1), columns(w0, w1)]),
            };
            check_factor(v, fs, tol)
        }
        Class3::W => {
            let r1 = [-b, 2.0 * a];
            let r2 = [2.0 * c, -b];
            let n1 = r1[0].norm_sqr() + r1[1].norm_sqr();
            let n2 = r2[0].norm_sqr() + r2[1].norm_sqr();
            let lam = if n1 >= n2 { r1 } else { r2 };
            if lam[0].norm() + lam[1].norm() == 0.0 {
                return Err(Error::InvalidState("degenerate W pencil".into()));
            }
            let u = [-lam[1], lam[0]];
            let up = perp(u);
            let basis1 = columns(u, up);
            let bi = basis1
                .inverse()
                .ok_or_else(|| Error::InvalidState("degenerate W basis".into()))?;
            // slices in the new party-0 basis
            let s0 = combine([bi.0[0][0], bi.0[0][1]], &a0, &a1);
            let s1 = combine([bi.0[1][0], bi.0[1][1]], &a0, &a1);
            let (v0, w0) = rank_one(&s1);
            let b2 = columns(v0, perp(v0));
            let b3 = columns(w0, perp(w0));
            let k = coords(&s0, &b2, &b3).ok_or_else(|| Error::InvalidState("degenerate W slice".into()))?;
            let w0p = perp(w0);
            let v0p = perp(v0);
            let w1 = [
                k[0][0] * w0[0] + k[0][1] * w0p[0],
                k[0][0] * w0[1] + k[0][1] * w0p[1],
            ];
            let v1 = [k[1][0] * v0p[0], k[1][0] * v0p[1]];
            let delta = inner_m(&outer(v0, w0), &s1) / inner_m(&outer(v0, w0), &outer(v0, w0));
            let fs = FactoredState {
                seed: Seed::W,
                locals: ProductOperator(vec![
                    columns(u, [up[0] * delta, up[1] * delta]),
                    columns(v0, v1),
                    columns(w0, w1),
                ]),
            };
            check_factor(v, fs, tol)
        }
        Class3::Biseparable { .. } | Class3::Product => {
            Err(Error::InvalidState("state is not fully entangled".into()))
        }
    }
}

fn check_factor(v: &StateVector, fs: FactoredState, tol: &Tol) -> Result<FactoredState> {
    let w = fs
        .realize(tol)
        .map_err(|_| Error::InvalidState("factorization has a singular local".into()))?;
    let err = w.max_abs_diff(v) / v.norm();
    if err > 1e-8 {
        return Err(Error::InvalidState(format!("factorization residual {err:.3e}")));
    }
    Ok(fs)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum StandardForm3 {
    Ghz(GhzStandardForm),
    W(WStandardForm),
}

impl StandardForm3 {
    pub fn to_factored(&self) -> FactoredState {
        match self {
            StandardForm3::Ghz(f) => f.to_factored(),
            StandardForm3::W(f) => f.to_factored(),
        }
    }

    /// Infinite across classes.
    pub fn distance(&self, other: &Self) -> f64 {
        match (self, other) {
            (StandardForm3::Ghz(a), StandardForm3::Ghz(b)) => a.distance(b),
            (StandardForm3::W(a), StandardForm3::W(b)) => a.distance(b),
            _ => f64::INFINITY,
        }
    }
}

/// Canonical form together with `realize(input) = scale · V · realize(form)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Reduction3 {
    pub form: StandardForm3,
    pub unitary: ProductOperator,
    pub scale: C64,
}

pub fn reduce3(fs: &FactoredState, tol: &Tol) -> Result<Reduction3> {
    match fs.seed {
        Seed::Ghz => ghz_reduce(fs, tol).map(|r| Reduction3 {
            form: StandardForm3::Ghz(r.form),
            unitary: r.unitary,
            scale: r.scale,
        }),
        Seed::W => w_reduce(fs, tol).map(|r| Reduction3 {
            form: StandardForm3::W(r.form),
            unitary: r.unitary,
            scale: r.scale,
        }),
        Seed::Family(_) => {
            let v = fs.realize(tol)?;
            // factor3 reproduces v up to rounding
            reduce3(&factor3(&v, tol)?, tol)
        }
        Seed::Generic(_) => Err(Error::PartyCount { expected: 3, got: 4 }),
    }
}

pub fn standard_form3(fs: &FactoredState, tol: &Tol) -> Result<StandardForm3> {
    reduce3(fs, tol).map(|r| r.form)
}

pub fn standard_form3_vector(v: &StateVector, tol: &Tol) -> Result<StandardForm3> {
    standard_form3(&factor3(v, tol)?, tol)
}

/// Distance between canonical forms; `∞` when the classes differ.
pub fn lu_distance3(a: &FactoredState, b: &FactoredState, tol: &Tol) -> Result<f64> {
    Ok(standard_form3(a, tol)?.distance(&standard_form3(b, tol)?))
}

pub fn lu_equivalent3(a: &FactoredState, b: &FactoredState, tol: &Tol) -> Result<bool> {
    Ok(lu_distance3(a, b, tol)? < tol.eq)
}
