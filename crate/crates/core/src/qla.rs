//! Small dense complex linear algebra: 2×2 local operators, Pauli forms,
//! 3- and 4-qubit state vectors.
//!
//! Bit ordering: party 0 (the "first" party) is the most significant bit of
//! a basis index, so `|q₀ q₁ … q_{n-1}⟩` sits at index `Σ q_p 2^{n-1-p}`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn cr(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// A 2×2 complex matrix acting on one qubit.
#[derive(Clone, Copy, PartialEq, Default)]
pub struct LocalOperator(pub [[C64; 2]; 2]);

impl fmt::Debug for LocalOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = &self.0;
        write!(
            f,
            "[[{:.6}, {:.6}], [{:.6}, {:.6}]]",
            m[0][0], m[0][1], m[1][0], m[1][1]
        )
    }
}

impl LocalOperator {
    pub const fn new(m: [[C64; 2]; 2]) -> Self {
        LocalOperator(m)
    }

    pub fn from_real(m: [[f64; 2]; 2]) -> Self {
        LocalOperator([[cr(m[0][0]), cr(m[0][1])], [cr(m[1][0]), cr(m[1][1])]])
    }

    pub fn identity() -> Self {
        Self::diag(ONE, ONE)
    }

    pub fn zero() -> Self {
        LocalOperator([[ZERO; 2]; 2])
    }

    pub fn diag(a: C64, d: C64) -> Self {
        LocalOperator([[a, ZERO], [ZERO, d]])
    }

    pub fn x() -> Self {
        LocalOperator([[ZERO, ONE], [ONE, ZERO]])
    }

    pub fn y() -> Self {
        LocalOperator([[ZERO, -I], [I, ZERO]])
    }

    pub fn z() -> Self {
        Self::diag(ONE, -ONE)
    }

    pub fn hadamard() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self::from_real([[s, s], [s, -s]])
    }

    /// `σ_k` for `k = 0..=3` (`σ_0 = 𝟙`).
    pub fn pauli(k: usize) -> Self {
        match k {
            0 => Self::identity(),
            1 => Self::x(),
            2 => Self::y(),
            3 => Self::z(),
            _ => panic!("Pauli index {k} out of range"),
        }
    }

    /// `P_γ = diag(γ, 1/γ)`.
    pub fn p_gamma(gamma: C64) -> Self {
        Self::diag(gamma, gamma.inv())
    }

    /// `exp(i θ σ_k)` for `k ∈ {1,2,3}`.
    pub fn pauli_rotation(k: usize, theta: f64) -> Self {
        Self::identity().scale(cr(theta.cos())) + Self::pauli(k).scale(c(0.0, theta.sin()))
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> C64 {
        self.0[r][c]
    }

    pub fn scale(&self, s: C64) -> Self {
        let m = &self.0;
        LocalOperator([[m[0][0] * s, m[0][1] * s], [m[1][0] * s, m[1][1] * s]])
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(cr(s))
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        LocalOperator([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    pub fn det(&self) -> C64 {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn trace(&self) -> C64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn inverse(&self) -> Option<Self> {
        let d = self.det();
        if d.norm() == 0.0 || !d.is_finite() {
            return None;
        }
        let m = &self.0;
        let inv = d.inv();
        Some(LocalOperator([
            [m[1][1] * inv, -m[0][1] * inv],
            [-m[1][0] * inv, m[0][0] * inv],
        ]))
    }

    /// `g†g`.
    pub fn gram(&self) -> Self {
        self.adjoint() * *self
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (*self - *other).max_abs()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|z| z.is_finite())
    }

    pub fn hermiticity_defect(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    pub fn unitarity_defect(&self) -> f64 {
        self.gram().max_abs_diff(&Self::identity())
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }

    pub fn apply(&self, v: [C64; 2]) -> [C64; 2] {
        let m = &self.0;
        [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
    }

    /// Principal square root of a positive semidefinite Hermitian matrix.
    ///
    /// Uses `√M = (M + √det M · 𝟙) / √(tr M + 2√det M)`; the input is
    /// Hermitized first.
    pub fn sqrt_psd(&self) -> Result<Self> {
        let h = (*self + self.adjoint()).scale_re(0.5);
        let det = h.det().re;
        let tr = h.trace().re;
        if tr <= 0.0 || det < -1e-14 * tr * tr {
            return Err(Error::NotPositiveDefinite);
        }
        let s = det.max(0.0).sqrt();
        let t = (tr + 2.0 * s).sqrt();
        Ok((h + Self::identity().scale_re(s)).scale_re(1.0 / t))
    }

    /// Conjugation `U · self · U†`.
    pub fn conjugate_by(&self, u: &Self) -> Self {
        *u * *self * u.adjoint()
    }

    /// Entries as `[[re, im], …]` row-major, the JSON wire format.
    pub fn to_pairs(&self) -> [[[f64; 2]; 2]; 2] {
        let m = &self.0;
        [
            [[m[0][0].re, m[0][0].im], [m[0][1].re, m[0][1].im]],
            [[m[1][0].re, m[1][0].im], [m[1][1].re, m[1][1].im]],
        ]
    }

    pub fn from_pairs(p: [[[f64; 2]; 2]; 2]) -> Self {
        LocalOperator([
            [c(p[0][0][0], p[0][0][1]), c(p[0][1][0], p[0][1][1])],
            [c(p[1][0][0], p[1][0][1]), c(p[1][1][0], p[1][1][1])],
        ])
    }
}

impl Serialize for LocalOperator {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_pairs().serialize(s)
    }
}

impl<'de> Deserialize<'de> for LocalOperator {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let p = <[[[f64; 2]; 2]; 2]>::deserialize(d)?;
        let op = LocalOperator::from_pairs(p);
        if !op.is_finite() {
            return Err(serde::de::Error::custom("non-finite matrix entry"));
        }
        Ok(op)
    }
}

impl Mul for LocalOperator {
    type Output = LocalOperator;
    fn mul(self, rhs: Self) -> Self {
        let a = &self.0;
        let b = &rhs.0;
        let mut out = [[ZERO; 2]; 2];
        for (r, row) in out.iter_mut().enumerate() {
            for (col, entry) in row.iter_mut().enumerate() {
                *entry = a[r][0] * b[0][col] + a[r][1] * b[1][col];
            }
        }
        LocalOperator(out)
    }
}

impl Add for LocalOperator {
    type Output = LocalOperator;
    fn add(self, rhs: Self) -> Self {
        let mut out = self.0;
        for (r, row) in out.iter_mut().enumerate() {
            for (col, entry) in row.iter_mut().enumerate() {
                *entry += rhs.0[r][col];
            }
        }
        LocalOperator(out)
    }
}

impl Sub for LocalOperator {
    type Output = LocalOperator;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for LocalOperator {
    type Output = LocalOperator;
    fn neg(self) -> Self {
        self.scale(-ONE)
    }
}

/// A Hermitian 2×2 operator written as `c0·𝟙 + g·σ⃗`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PauliForm {
    pub c0: f64,
    pub g: [f64; 3],
}

impl PauliForm {
    pub fn new(c0: f64, g: [f64; 3]) -> Self {
        PauliForm { c0, g }
    }

    /// `(1/2)𝟙 + g·σ⃗`, the trace-one form used throughout.
    pub fn normalized_from(g: [f64; 3]) -> Self {
        PauliForm { c0: 0.5, g }
    }

    pub fn to_operator(&self) -> LocalOperator {
        let [gx, gy, gz] = self.g;
        LocalOperator([[cr(self.c0 + gz), c(gx, -gy)], [c(gx, gy), cr(self.c0 - gz)]])
    }

    pub fn bloch_norm(&self) -> f64 {
        norm3(&self.g)
    }

    /// Rescaled to trace one (`c0 = 1/2`).
    pub fn normalized(&self) -> Self {
        let s = 0.5 / self.c0;
        PauliForm {
            c0: 0.5,
            g: [self.g[0] * s, self.g[1] * s, self.g[2] * s],
        }
    }

    /// Positive definite iff `c0 > |g|`.
    pub fn is_positive_definite(&self) -> bool {
        self.c0 > self.bloch_norm()
    }
}

pub fn norm3(v: &[f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// Decompose a Hermitian operator in the Pauli basis.
pub fn pauli_decompose(h: &LocalOperator, tol_herm: f64) -> Result<PauliForm> {
    let defect = h.hermiticity_defect();
    if defect > tol_herm {
        return Err(Error::NonHermitian(defect));
    }
    let m = &h.0;
    let c0 = 0.5 * (m[0][0].re + m[1][1].re);
    let gz = 0.5 * (m[0][0].re - m[1][1].re);
    // off-diagonal averaged over (0,1) and conj of (1,0)
    let off = (m[1][0] + m[0][1].conj()) * 0.5;
    Ok(PauliForm {
        c0,
        g: [off.re, off.im, gz],
    })
}

/// Eigenvalues `(c0 + |g|, c0 − |g|)`.
pub fn eig_pauli(p: &PauliForm) -> [f64; 2] {
    let r = p.bloch_norm();
    [p.c0 + r, p.c0 - r]
}

/// `lam_g ≺ lam_h` for 2-vectors: the larger entry of `lam_g` does not
/// exceed the larger entry of `lam_h`. Totals must agree within `tol_eq`.
pub fn majorizes(lam_h: [f64; 2], lam_g: [f64; 2], tol_eq: f64) -> Result<bool> {
    let sh = lam_h[0] + lam_h[1];
    let sg = lam_g[0] + lam_g[1];
    if (sh - sg).abs() > tol_eq {
        return Err(Error::MismatchedTrace(sh, sg));
    }
    Ok(lam_g[0].max(lam_g[1]) <= lam_h[0].max(lam_h[1]) + tol_eq)
}

/// Amplitudes of an `n`-qubit pure state, `n ∈ {1,…,4}`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<C64>,
}

impl StateVector {
    pub fn new(amps: Vec<C64>) -> Result<Self> {
        let len = amps.len();
        let n = match len {
            2 => 1,
            4 => 2,
            8 => 3,
            16 => 4,
            _ => return Err(Error::InvalidState(format!("length {len} is not 2^n with n ≤ 4"))),
        };
        if amps.iter().any(|z| !z.is_finite()) {
            return Err(Error::InvalidState("non-finite amplitude".into()));
        }
        let v = StateVector { n, amps };
        if v.norm() == 0.0 {
            return Err(Error::InvalidState("zero vector".into()));
        }
        Ok(v)
    }

    /// Construct without the nonzero-norm check (intermediate results).
    pub(crate) fn raw(n: usize, amps: Vec<C64>) -> Self {
        debug_assert_eq!(amps.len(), 1 << n);
        StateVector { n, amps }
    }

    pub fn basis(n: usize, index: usize) -> Self {
        let mut amps = vec![ZERO; 1 << n];
        amps[index] = ONE;
        StateVector { n, amps }
    }

    pub fn n_parties(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn normalized(&self) -> Self {
        self.scale(cr(1.0 / self.norm()))
    }

    pub fn scale(&self, s: C64) -> Self {
        StateVector {
            n: self.n,
            amps: self.amps.iter().map(|z| z * s).collect(),
        }
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> C64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Apply `op` to `party` (0-based, party 0 = most significant bit).
    pub fn apply_local(&self, party: usize, op: &LocalOperator) -> Self {
        assert!(party < self.n, "party {party} out of range");
        let stride = 1usize << (self.n - 1 - party);
        let mut out = self.amps.clone();
        for base in 0..self.amps.len() {
            if base & stride != 0 {
                continue;
            }
            let v = [self.amps[base], self.amps[base | stride]];
            let w = op.apply(v);
            out[base] = w[0];
            out[base | stride] = w[1];
        }
        StateVector { n: self.n, amps: out }
    }

    pub fn apply_product(&self, ops: &[LocalOperator]) -> Self {
        assert_eq!(ops.len(), self.n, "one operator per party");
        ops.iter()
            .enumerate()
            .fold(self.clone(), |v, (p, op)| v.apply_local(p, op))
    }

    /// Single-party reduced density operator of the normalized state.
    pub fn reduced(&self, party: usize) -> LocalOperator {
        let stride = 1usize << (self.n - 1 - party);
        let mut rho = [[ZERO; 2]; 2];
        for base in 0..self.amps.len() {
            if base & stride != 0 {
                continue;
            }
            let a0 = self.amps[base];
            let a1 = self.amps[base | stride];
            rho[0][0] += a0 * a0.conj();
            rho[0][1] += a0 * a1.conj();
            rho[1][0] += a1 * a0.conj();
            rho[1][1] += a1 * a1.conj();
        }
        LocalOperator(rho).scale_re(1.0 / self.norm_sqr())
    }

    /// Fidelity-like overlap `|⟨v|w⟩| / (‖v‖‖w‖)`.
    pub fn overlap(&self, other: &Self) -> f64 {
        self.inner(other).norm() / (self.norm() * other.norm())
    }
}

/// `|⟨v|w⟩| = ‖v‖‖w‖` within `tol_eq` (Cauchy–Schwarz equality).
pub fn proportional_up_to_phase(v: &StateVector, w: &StateVector, tol_eq: f64) -> bool {
    if v.n_parties() != w.n_parties() {
        return false;
    }
    let nv = v.norm();
    let nw = w.norm();
    if nv == 0.0 || nw == 0.0 {
        return false;
    }
    1.0 - v.inner(w).norm() / (nv * nw) <= tol_eq
}

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    pub dim: usize,
    pub data: Vec<C64>,
}

impl DenseMatrix {
    pub fn get(&self, r: usize, c: usize) -> C64 {
        self.data[r * self.dim + c]
    }

    pub fn apply(&self, v: &StateVector) -> StateVector {
        assert_eq!(v.dim(), self.dim);
        let amps = (0..self.dim)
            .map(|r| (0..self.dim).map(|c| self.get(r, c) * v.amplitudes()[c]).sum())
            .collect();
        StateVector::raw(v.n_parties(), amps)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Kronecker product `ops[0] ⊗ ops[1] ⊗ …` in the crate's bit ordering.
pub fn tensor(ops: &[LocalOperator]) -> DenseMatrix {
    assert!((1..=4).contains(&ops.len()), "tensor supports 1 to 4 factors");
    let mut dim = 1usize;
    let mut data = vec![ONE];
    for op in ops {
        let nd = dim * 2;
        let mut next = vec![ZERO; nd * nd];
        for r in 0..dim {
            for c in 0..dim {
                let a = data[r * dim + c];
                for i in 0..2 {
                    for j in 0..2 {
                        next[(2 * r + i) * nd + 2 * c + j] = a * op.0[i][j];
                    }
                }
            }
        }
        dim = nd;
        data = next;
    }
    DenseMatrix { dim, data }
}
