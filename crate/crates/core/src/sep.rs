//! Feasibility of `Σ_k p_k S_k† H S_k = r G` over a finite group of unitary
//! product symmetries, and the single-qubit factorization test
//! `E₄(H) = E(H₁) ⊗ … ⊗ E(H₄)` for the 4-qubit Pauli group.
//!
//! Both sides are expanded in the Pauli product basis. Since every `S_k` is
//! a product, `S_k† H S_k` is a product too and its components are products
//! of single-party Pauli coefficients.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::four_qubit::{eta, validate_probabilities};
use crate::qla::{eig_pauli, majorizes, norm3, pauli_decompose, LocalOperator, PauliForm, StateVector, C64};
use crate::states::{FactoredState, Mes3Family, ProductOperator};
use crate::Tol;

/// Largest group solved by exhaustive face enumeration.
const FACE_ENUM_MAX: usize = 12;
/// Weight of the `Σp = 1` row in the penalized NNLS.
const SUM_WEIGHT: f64 = 1e4;
/// Minimal strict decrease of some `|g⃗|` for a factorization solution to count
/// as a transformation between LU-inequivalent states.
pub const FACTORIZATION_MIN_GAIN: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetryGroup {
    pub name: String,
    pub elements: Vec<ProductOperator>,
    pub labels: Vec<String>,
}

impl SymmetryGroup {
    pub fn new(name: &str, elements: Vec<ProductOperator>, labels: Vec<String>) -> Result<Self> {
        if elements.is_empty() || elements.len() != labels.len() {
            return Err(Error::NonUnitaryGroup(
                "elements and labels must be nonempty and match".into(),
            ));
        }
        let n = elements[0].len();
        for (e, l) in elements.iter().zip(&labels) {
            if e.len() != n {
                return Err(Error::NonUnitaryGroup(format!("{l}: party count differs")));
            }
            if !e.is_unitary(1e-9) {
                return Err(Error::NonUnitaryGroup(format!("{l} is not unitary")));
            }
        }
        Ok(SymmetryGroup {
            name: name.to_string(),
            elements,
            labels,
        })
    }

    pub fn n_parties(&self) -> usize {
        self.elements[0].len()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// `{σ_k^{⊗4}}`.
    pub fn pauli4() -> Self {
        let labels = ["IIII", "XXXX", "YYYY", "ZZZZ"];
        let el = (0..4)
            .map(|k| ProductOperator::uniform(LocalOperator::pauli(k), 4))
            .collect();
        Self::new("pauli4", el, labels.iter().map(|s| s.to_string()).collect()).unwrap()
    }

    /// `{𝟙, X^{⊗3}}`.
    pub fn ghz_x() -> Self {
        Self::new(
            "ghz-x",
            vec![
                ProductOperator::identity(3),
                ProductOperator::uniform(LocalOperator::x(), 3),
            ],
            vec!["III".into(), "XXX".into()],
        )
        .unwrap()
    }

    /// `X̄^a P_γ⃗` with `γ_i = e^{i k_i π/4}`, `k₁, k₂ ∈ {0..3}`,
    /// `k₁ + k₂ + k₃ ≡ 0 (mod 8)`: the 32 conjugation-distinct elements of
    /// that lattice.
    pub fn ghz_unitary32() -> Self {
        let mut el = Vec::new();
        let mut labels = Vec::new();
        let p =
            |k: usize| LocalOperator::p_gamma(C64::from_polar(1.0, k as f64 * std::f64::consts::FRAC_PI_4));
        for a in 0..2 {
            for k1 in 0..4 {
                for k2 in 0..4 {
                    let k3 = (16 - k1 - k2) % 8;
                    let mut ops = vec![p(k1), p(k2), p(k3)];
                    if a == 1 {
                        ops = ops.into_iter().map(|o| LocalOperator::x() * o).collect();
                    }
                    el.push(ProductOperator(ops));
                    labels.push(format!("{}P({k1},{k2},{k3})", if a == 1 { "XXX·" } else { "" }));
                }
            }
        }
        Self::new("ghz-unitary-32", el, labels).unwrap()
    }

    /// `{𝟙, Z⊗Z⊗𝟙, Z⊗𝟙⊗Z, 𝟙⊗Z⊗Z}`.
    pub fn ghz_zparity() -> Self {
        let z = LocalOperator::z();
        let i = LocalOperator::identity();
        Self::new(
            "ghz-zparity",
            vec![
                ProductOperator(vec![i, i, i]),
                ProductOperator(vec![z, z, i]),
                ProductOperator(vec![z, i, z]),
                ProductOperator(vec![i, z, z]),
            ],
            vec!["III".into(), "ZZI".into(), "ZIZ".into(), "IZZ".into()],
        )
        .unwrap()
    }

    /// `{𝟙, Z^{⊗3}}` (fixes `|W⟩` up to sign).
    pub fn w_z() -> Self {
        Self::new(
            "w-z",
            vec![
                ProductOperator::identity(3),
                ProductOperator::uniform(LocalOperator::z(), 3),
            ],
            vec!["III".into(), "ZZZ".into()],
        )
        .unwrap()
    }

    /// `{𝟙, X ⊗ ZY(−β′) ⊗ ZY(−β)}` for a family member.
    pub fn family(f: &Mes3Family) -> Self {
        Self::new(
            "family",
            vec![ProductOperator::identity(3), f.symmetry()],
            vec!["III".into(), "S".into()],
        )
        .unwrap()
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "pauli4" => Ok(Self::pauli4()),
            "ghz-x" => Ok(Self::ghz_x()),
            "ghz-unitary-32" => Ok(Self::ghz_unitary32()),
            "ghz-zparity" => Ok(Self::ghz_zparity()),
            "w-z" => Ok(Self::w_z()),
            _ => Err(Error::BadSpec(format!("unknown symmetry group {name:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SepCertificate {
    pub probabilities: Vec<f64>,
    pub labels: Vec<String>,
    /// Max-abs Pauli-component residual of `Σ p_k S_k†HS_k − rG`.
    pub residual: f64,
    pub component_residuals: Vec<f64>,
    pub feasible: bool,
    /// Feasible with a single group element: the two states are LU
    /// equivalent.
    pub degenerate: bool,
    pub r: f64,
    /// Per party, `eig(G_i) ≺ eig(H_i)` after trace normalization.
    pub majorization: Vec<bool>,
}

impl SepCertificate {
    pub fn nondegenerate(&self) -> bool {
        self.feasible && !self.degenerate
    }
}

fn coeffs(p: &PauliForm) -> [f64; 4] {
    [p.c0, p.g[0], p.g[1], p.g[2]]
}

/// Components of `⊗_i c_i` in the Pauli product basis (party 0 most
/// significant digit).
fn product_components(cs: &[[f64; 4]]) -> Vec<f64> {
    let mut v = vec![1.0];
    for c in cs {
        let mut next = Vec::with_capacity(v.len() * 4);
        for x in &v {
            for y in c {
                next.push(x * y);
            }
        }
        v = next;
    }
    v
}

fn forms(ops: &[LocalOperator], tol: &Tol) -> Result<Vec<PauliForm>> {
    ops.iter().map(|h| pauli_decompose(h, tol.herm)).collect()
}

/// Least squares `min ‖A x − y‖` by SVD.
fn lstsq(a: &DMatrix<f64>, y: &DVector<f64>) -> DVector<f64> {
    let svd = a.clone().svd(true, true);
    let eps = 1e-13 * svd.singular_values.max().max(1e-300);
    svd.solve(y, eps).expect("SVD computed with U and V")
}

/// Minimize `‖V p − t‖` over the probability simplex restricted to `support`.
fn solve_face(v: &DMatrix<f64>, t: &DVector<f64>, support: &[usize]) -> Option<DVector<f64>> {
    let m = v.ncols();
    let s = support.len();
    let last = support[s - 1];
    let mut p = DVector::zeros(m);
    if s == 1 {
        p[last] = 1.0;
        return Some(p);
    }
    // p = e_last + Σ q_i (e_i − e_last)
    let base = v.column(last).into_owned();
    let mut a = DMatrix::zeros(v.nrows(), s - 1);
    for (c, &i) in support[..s - 1].iter().enumerate() {
        a.set_column(c, &(v.column(i) - &base));
    }
    let q = lstsq(&a, &(t - &base));
    let mut rest = 1.0;
    for (c, &i) in support[..s - 1].iter().enumerate() {
        if q[c] < -1e-12 {
            return None;
        }
        p[i] = q[c].max(0.0);
        rest -= p[i];
    }
    if rest < -1e-12 {
        return None;
    }
    p[last] = rest.max(0.0);
    Some(p)
}

fn enumerate_faces(v: &DMatrix<f64>, t: &DVector<f64>) -> DVector<f64> {
    let m = v.ncols();
    let mut best: Option<(f64, DVector<f64>)> = None;
    for size in 1..=m {
        for mask in 1u32..(1 << m) {
            if mask.count_ones() as usize != size {
                continue;
            }
            let support: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 1).collect();
            if let Some(p) = solve_face(v, t, &support) {
                let r = (v * &p - t).amax();
                if best.as_ref().is_none_or(|(b, _)| r < *b - 1e-15) {
                    best = Some((r, p));
                }
            }
        }
    }
    best.expect("vertices are always feasible").1
}

/// Lawson–Hanson nonnegative least squares.
fn nnls(a: &DMatrix<f64>, y: &DVector<f64>) -> DVector<f64> {
    let n = a.ncols();
    let mut x = DVector::zeros(n);
    let mut passive = vec![false; n];
    let eps = 1e-14 * a.amax().max(1.0) * y.amax().max(1.0);
    for _ in 0..(3 * n + 10) {
        let w = a.transpose() * (y - a * &x);
        let cand = (0..n)
            .filter(|&j| !passive[j] && w[j] > eps)
            .max_by(|&i, &j| w[i].partial_cmp(&w[j]).unwrap());
        let Some(j) = cand else { break };
        passive[j] = true;
        loop {
            let idx: Vec<usize> = (0..n).filter(|&i| passive[i]).collect();
            let sub = a.select_columns(idx.iter());
            let s_p = lstsq(&sub, y);
            if s_p.iter().all(|&v| v > 0.0) {
                x.fill(0.0);
                for (c, &i) in idx.iter().enumerate() {
                    x[i] = s_p[c];
                }
                break;
            }
            let mut alpha = 1.0;
            for (c, &i) in idx.iter().enumerate() {
                if s_p[c] <= 0.0 {
                    let d = x[i] - s_p[c];
                    if d > 0.0 {
                        alpha = f64::min(alpha, x[i] / d);
                    }
                }
            }
            for (c, &i) in idx.iter().enumerate() {
                x[i] += alpha * (s_p[c] - x[i]);
                if x[i] <= 1e-15 {
                    x[i] = 0.0;
                    passive[i] = false;
                }
            }
            if !passive.iter().any(|&b| b) {
                break;
            }
        }
    }
    x
}

fn solve_simplex(v: &DMatrix<f64>, t: &DVector<f64>) -> DVector<f64> {
    let m = v.ncols();
    if m <= FACE_ENUM_MAX {
        return enumerate_faces(v, t);
    }
    let rows = v.nrows();
    let mut a = DMatrix::zeros(rows + 1, m);
    a.view_mut((0, 0), (rows, m)).copy_from(v);
    for j in 0..m {
        a[(rows, j)] = SUM_WEIGHT;
    }
    let mut y = DVector::zeros(rows + 1);
    y.rows_mut(0, rows).copy_from(t);
    y[rows] = SUM_WEIGHT;
    let mut p = nnls(&a, &y);
    let s = p.sum();
    if s > 0.0 {
        p /= s;
    } else {
        p[0] = 1.0;
    }
    p
}

/// Solve `Σ p_k S_k† H S_k = r G` for `p` on the simplex. `h` and `g` are
/// the per-party grams.
pub fn sep_feasible(
    h: &[LocalOperator],
    g: &[LocalOperator],
    group: &SymmetryGroup,
    r: f64,
    tol: &Tol,
) -> Result<SepCertificate> {
    let n = group.n_parties();
    if h.len() != n || g.len() != n {
        return Err(Error::PartyCount {
            expected: n,
            got: h.len().min(g.len()),
        });
    }
    let hf = forms(h, tol)?;
    let gf = forms(g, tol)?;
    let m = group.len();
    let dim = 4usize.pow(n as u32);
    let mut v = DMatrix::zeros(dim, m);
    for (k, s) in group.elements.iter().enumerate() {
        let cs: Vec<[f64; 4]> = (0..n)
            .map(|i| {
                let u = s.0[i].adjoint();
                // S†HS = conjugation by S†
                Ok(coeffs(&pauli_decompose(&h[i].conjugate_by(&u), tol.herm)?))
            })
            .collect::<Result<_>>()?;
        v.set_column(k, &DVector::from_vec(product_components(&cs)));
    }
    let t = DVector::from_vec(product_components(&gf.iter().map(coeffs).collect::<Vec<_>>())) * r;
    let p = solve_simplex(&v, &t);
    let res = &v * &p - &t;
    let residual = res.amax();
    let feasible = residual <= tol.feas;
    let degenerate = feasible && (0..m).any(|k| (v.column(k) - &t).amax() <= tol.feas);
    let majorization = (0..n)
        .map(|i| {
            let lh = eig_pauli(&hf[i].normalized());
            let lg = eig_pauli(&gf[i].normalized());
            majorizes(lh, lg, tol.eq).unwrap_or(false)
        })
        .collect();
    Ok(SepCertificate {
        probabilities: p.iter().copied().collect(),
        labels: group.labels.clone(),
        residual,
        component_residuals: res.iter().map(|x| x.abs()).collect(),
        feasible,
        degenerate,
        r,
        majorization,
    })
}

/// SEP feasibility from `source` to `target`, with `r = ‖target‖²/‖source‖²`.
pub fn sep_check(
    source: &FactoredState,
    target: &FactoredState,
    group: &SymmetryGroup,
    tol: &Tol,
) -> Result<SepCertificate> {
    if source.seed != target.seed {
        return Err(Error::WrongShape("source and target use different seeds".into()));
    }
    let r = target.realize(tol)?.norm_sqr() / source.realize(tol)?.norm_sqr();
    sep_feasible(&target.locals.gram().0, &source.locals.gram().0, group, r, tol)
}

/// Residual of `E₄(H) = ⊗_i E(H_i)` for `p` over `{σ_k^{⊗4}}`.
///
/// Component `(j₁..j₄)` of the left side is `Σ_k p_k Π_i s(k, j_i) h⁽ⁱ⁾_{j_i}`
/// with `s(k, j) = +1` when `j = 0`, `k = 0` or `j = k`, else `−1`.
pub fn factorization_residual(h: &[PauliForm; 4], p: &[f64; 4]) -> Result<f64> {
    validate_probabilities(p)?;
    let e = eta(p);
    let eta4 = [1.0, e[0], e[1], e[2]];
    let c: Vec<[f64; 4]> = h.iter().map(coeffs).collect();
    let s = |k: usize, j: usize| if j == 0 || k == 0 || j == k { 1.0 } else { -1.0 };
    let mut worst: f64 = 0.0;
    for idx in 0..256usize {
        let j = [idx >> 6, (idx >> 4) & 3, (idx >> 2) & 3, idx & 3];
        let hp: f64 = (0..4).map(|i| c[i][j[i]]).product();
        if hp == 0.0 {
            continue;
        }
        let lhs: f64 = (0..4)
            .map(|k| p[k] * (0..4).map(|i| s(k, j[i])).product::<f64>())
            .sum::<f64>()
            * hp;
        let rhs: f64 = (0..4).map(|i| eta4[j[i]]).product::<f64>() * hp;
        worst = worst.max((lhs - rhs).abs());
    }
    Ok(worst)
}

pub fn check_factorization(h: &[PauliForm; 4], p: &[f64; 4], tol: &Tol) -> Result<(bool, f64)> {
    let r = factorization_residual(h, p)?;
    Ok((r < tol.feas, r))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorizationSearch {
    /// Some grid point solves the factorization and strictly shrinks a
    /// Bloch vector.
    pub feasible: bool,
    pub p: Option<[f64; 4]>,
    pub residual: f64,
    /// `max_i (|h⃗⁽ⁱ⁾| − |η⊙h⃗⁽ⁱ⁾|)` at `p`.
    pub gain: f64,
    pub points: usize,
}

/// Scan the simplex grid of step `1/resolution` (vertices excluded) for a
/// solution of the factorization condition whose source `E(H_i)` is
/// LU-inequivalent to the target.
pub fn search_factorization(h: &[PauliForm; 4], resolution: usize, tol: &Tol) -> FactorizationSearch {
    let n = resolution;
    let mut best: Option<([f64; 4], f64, f64)> = None;
    let mut points = 0;
    for a in 0..=n {
        for b in 0..=(n - a) {
            for c in 0..=(n - a - b) {
                let d = n - a - b - c;
                if [a, b, c, d].contains(&n) {
                    continue;
                }
                points += 1;
                let p = [a, b, c, d].map(|x| x as f64 / n as f64);
                let res = factorization_residual(h, &p).expect("grid point is a distribution");
                if res >= tol.feas {
                    continue;
                }
                let e = eta(&p);
                let gain = h
                    .iter()
                    .map(|f| norm3(&f.g) - norm3(&[e[0] * f.g[0], e[1] * f.g[1], e[2] * f.g[2]]))
                    .fold(f64::NEG_INFINITY, f64::max);
                if best.is_none_or(|(_, _, g)| gain > g) {
                    best = Some((p, res, gain));
                }
            }
        }
    }
    match best {
        Some((p, residual, gain)) => FactorizationSearch {
            feasible: gain > FACTORIZATION_MIN_GAIN,
            p: Some(p),
            residual,
            gain,
            points,
        },
        None => FactorizationSearch {
            feasible: false,
            p: None,
            residual: f64::NAN,
            gain: 0.0,
            points,
        },
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetryReport {
    pub labels: Vec<String>,
    /// `‖S|Ψ⟩ − |Ψ⟩‖/‖Ψ‖`.
    pub deviations: Vec<f64>,
    /// Same, minimized over a global phase.
    pub phase_deviations: Vec<f64>,
    pub max_deviation: f64,
    pub max_phase_deviation: f64,
}

pub fn verify_symmetry(group: &SymmetryGroup, seed: &StateVector) -> SymmetryReport {
    let n = seed.norm();
    let mut dev = Vec::new();
    let mut pdev = Vec::new();
    for s in &group.elements {
        let w = s.apply(seed);
        let diff: f64 = w
            .amplitudes()
            .iter()
            .zip(seed.amplitudes())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        dev.push(diff / n);
        let ov = seed.inner(&w);
        let ph = if ov.norm() > 0.0 {
            ov / ov.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        let pd: f64 = w
            .amplitudes()
            .iter()
            .zip(seed.amplitudes())
            .map(|(a, b)| (a - b * ph).norm_sqr())
            .sum::<f64>()
            .sqrt();
        pdev.push(pd / n);
    }
    SymmetryReport {
        labels: group.labels.clone(),
        max_deviation: dev.iter().copied().fold(0.0, f64::max),
        max_phase_deviation: pdev.iter().copied().fold(0.0, f64::max),
        deviations: dev,
        phase_deviations: pdev,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qla::c;
    use crate::states::{Seed, SeedParams4};

    fn tol() -> Tol {
        Tol::default()
    }

    fn seed4() -> Seed {
        Seed::Generic(SeedParams4::from_array([
            c(0.9, 0.1),
            c(-0.3, 0.5),
            c(0.2, -0.7),
            c(0.4, 0.4),
        ]))
    }

    fn forms4(b: [[f64; 3]; 4]) -> [PauliForm; 4] {
        b.map(PauliForm::normalized_from)
    }

    fn grams(b: &[[f64; 3]]) -> Vec<LocalOperator> {
        b.iter()
            .map(|v| PauliForm::normalized_from(*v).to_operator())
            .collect()
    }

    #[test]
    fn identity_is_feasible_and_degenerate() {
        let t = tol();
        let h = grams(&[[0.1, 0.2, 0.0], [0.0, 0.3, 0.1], [0.2, 0.0, 0.1], [0.1, 0.1, 0.1]]);
        let cert = sep_feasible(&h, &h, &SymmetryGroup::pauli4(), 1.0, &t).unwrap();
        assert!(cert.feasible && cert.degenerate);
    }

    #[test]
    fn aligned_case_feasible_with_half_weights() {
        let t = tol();
        let hb = [[0.1, 0.2, 0.3], [0.2, 0.0, 0.0], [0.3, 0.0, 0.0], [0.1, 0.0, 0.0]];
        let mut gb = hb;
        gb[0] = [0.1, 0.0, 0.0];
        let cert = sep_feasible(&grams(&hb), &grams(&gb), &SymmetryGroup::pauli4(), 1.0, &t).unwrap();
        assert!(cert.nondegenerate(), "{cert:?}");
        let p = &cert.probabilities;
        let want = [0.5, 0.5, 0.0, 0.0];
        assert!((0..4).all(|k| (p[k] - want[k]).abs() < 1e-9), "{p:?}");
        assert!(cert.majorization.iter().all(|&m| m));
    }

    #[test]
    fn generic_target_infeasible() {
        let t = tol();
        let hb = [
            [0.1, 0.2, 0.0],
            [0.0, 0.2, 0.1],
            [0.1, 0.05, 0.3],
            [0.1, 0.1, 0.1],
        ];
        let gb = [
            [0.05, 0.1, 0.0],
            [0.0, 0.1, 0.05],
            [0.05, 0.02, 0.15],
            [0.05, 0.05, 0.05],
        ];
        let cert = sep_feasible(&grams(&hb), &grams(&gb), &SymmetryGroup::pauli4(), 1.0, &t).unwrap();
        assert!(!cert.feasible);
    }

    #[test]
    fn large_group_uses_nnls() {
        let t = tol();
        let g = SymmetryGroup::ghz_unitary32();
        assert_eq!(g.len(), 32);
        let h = grams(&[[0.1, 0.2, 0.1], [0.2, -0.1, 0.0], [0.0, 0.3, 0.1]]);
        let cert = sep_feasible(&h, &h, &g, 1.0, &t).unwrap();
        assert!(cert.feasible && cert.degenerate, "residual {}", cert.residual);
        // a source rotated by one group element is LU-equivalent
        let s = &g.elements[13];
        let gs: Vec<LocalOperator> = (0..3).map(|i| h[i].conjugate_by(&s.0[i].adjoint())).collect();
        let cert = sep_feasible(&h, &gs, &g, 1.0, &t).unwrap();
        assert!(cert.feasible && cert.degenerate, "residual {}", cert.residual);
        assert!(cert.probabilities[13] > 0.999);
    }

    #[test]
    fn factorization_examples() {
        let t = tol();
        let h = forms4([
            [0.1, 0.2, 0.0],
            [0.0, 0.2, 0.1],
            [0.1, 0.05, 0.3],
            [0.1, 0.1, 0.1],
        ]);
        assert!(check_factorization(&h, &[1.0, 0.0, 0.0, 0.0], &t).unwrap().0);
        assert!(!check_factorization(&h, &[0.5, 0.5, 0.0, 0.0], &t).unwrap().0);
        let triv = forms4([[0.0; 3]; 4]);
        assert!(check_factorization(&triv, &[0.1, 0.2, 0.3, 0.4], &t).unwrap().0);
        let aligned = forms4([[0.1, 0.2, 0.3], [0.2, 0.0, 0.0], [0.3, 0.0, 0.0], [0.1, 0.0, 0.0]]);
        assert!(
            check_factorization(&aligned, &[0.5, 0.5, 0.0, 0.0], &t)
                .unwrap()
                .0
        );
    }

    #[test]
    fn factorization_search_examples() {
        let t = tol();
        let aligned = forms4([[0.1, 0.2, 0.3], [0.2, 0.0, 0.0], [0.3, 0.0, 0.0], [0.1, 0.0, 0.0]]);
        assert!(search_factorization(&aligned, 12, &t).feasible);
        let all_x = forms4([[0.2, 0.0, 0.0], [0.2, 0.0, 0.0], [0.3, 0.0, 0.0], [0.1, 0.0, 0.0]]);
        let rep = search_factorization(&all_x, 12, &t);
        assert!(!rep.feasible);
        assert!(rep.p.is_some(), "LU-type solutions exist but do not count");
        let generic = forms4([
            [0.1, 0.2, 0.0],
            [0.0, 0.2, 0.1],
            [0.1, 0.05, 0.3],
            [0.1, 0.1, 0.1],
        ]);
        assert!(!search_factorization(&generic, 12, &t).feasible);
    }

    #[test]
    fn sep_matches_protocol_witness() {
        let t = tol();
        let fs = crate::four_qubit::standard_form4(
            &FactoredState::new(
                seed4(),
                [[0.1, 0.2, 0.3], [0.2, 0.0, 0.0], [0.3, 0.0, 0.0], [0.1, 0.0, 0.0]]
                    .iter()
                    .map(|b| PauliForm::normalized_from(*b).to_operator().sqrt_psd().unwrap())
                    .collect(),
            )
            .unwrap(),
            &t,
        )
        .unwrap()
        .to_factored();
        let v = crate::four_qubit::reachable4(&fs, &t).unwrap();
        let pr = v.witness.unwrap();
        let cert = sep_check(&pr.source, &pr.target, &SymmetryGroup::pauli4(), &t).unwrap();
        assert!(cert.nondegenerate(), "residual {}", cert.residual);
        assert!(cert.majorization.iter().all(|&m| m));
    }

    #[test]
    fn symmetry_examples() {
        let t = tol();
        let s4 = seed4().vector(&t).unwrap();
        assert!(verify_symmetry(&SymmetryGroup::pauli4(), &s4).max_deviation < 1e-12);
        let ghz = Seed::Ghz.vector(&t).unwrap();
        assert!(verify_symmetry(&SymmetryGroup::ghz_x(), &ghz).max_deviation < 1e-12);
        assert!(verify_symmetry(&SymmetryGroup::ghz_unitary32(), &ghz).max_deviation < 1e-12);
        let w = Seed::W.vector(&t).unwrap();
        let rep = verify_symmetry(&SymmetryGroup::w_z(), &w);
        assert!(rep.max_phase_deviation < 1e-12);
        assert!(rep.max_deviation > 1.0);
    }
}
