//! Standard form of a generic 4-qubit state `g|Ψ_abcd⟩`.
//!
//! LU classes are labelled by the seed parameters and the trace-one grams
//! `G_i = ½𝟙 + g⃗⁽ⁱ⁾·σ⃗`. Two labels describe the same class when they differ
//! by a relabelling unitary `U` (seed `p ↦ p′`, grams `G ↦ UGU†`) or by the
//! symmetry `σ_k^{⊗4}`. Among all images we keep the ones with `|p′|`
//! non-increasing, fix the global phase so `p′₀ > 0`, and take the
//! lexicographically largest `(Re p′₀, Im p′₀, …, g⃗⁽¹⁾, …, g⃗⁽⁴⁾)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qla::{pauli_decompose, LocalOperator, PauliForm, C64};
use crate::states::{gram, FactoredState, ProductOperator, Seed, SeedParams4};
use crate::Tol;

use super::relabel::relabel_group;

/// Entries closer than this are treated as ties in the lexicographic order.
const LEX_TIE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StandardForm4 {
    pub seed: SeedParams4,
    pub blochs: [[f64; 3]; 4],
}

impl StandardForm4 {
    /// Locals `√(½𝟙 + g⃗·σ⃗)`.
    pub fn to_factored(&self) -> FactoredState {
        FactoredState {
            seed: Seed::Generic(self.seed),
            locals: ProductOperator(self.blochs.iter().map(|b| sqrt_gram(*b)).collect()),
        }
    }

    /// Max-abs difference over seed parameters and Bloch components.
    pub fn distance(&self, other: &Self) -> f64 {
        let a = self.seed.as_array();
        let b = other.seed.as_array();
        let mut d: f64 = 0.0;
        for i in 0..4 {
            d = d.max((a[i] - b[i]).norm());
            for k in 0..3 {
                d = d.max((self.blochs[i][k] - other.blochs[i][k]).abs());
            }
        }
        d
    }
}

pub(crate) fn sqrt_gram(b: [f64; 3]) -> LocalOperator {
    PauliForm::normalized_from(b)
        .to_operator()
        .sqrt_psd()
        .expect("trace-one gram with |g| < 1/2 is positive")
}

pub(crate) fn generic_params(fs: &FactoredState, tol: &Tol) -> Result<SeedParams4> {
    match fs.seed {
        Seed::Generic(p) => {
            p.validate(tol)?;
            fs.validate(tol)?;
            Ok(p)
        }
        _ => Err(Error::WrongShape("expected a generic 4-qubit seed".into())),
    }
}

/// Trace-one Bloch vectors of the input locals.
pub fn blochs4(fs: &FactoredState) -> [[f64; 3]; 4] {
    let g = gram(fs);
    [g[0].g, g[1].g, g[2].g, g[3].g]
}

fn lex_cmp(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        if (x - y).abs() > LEX_TIE {
            return x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal);
        }
    }
    std::cmp::Ordering::Equal
}

fn key(form: &StandardForm4) -> Vec<f64> {
    let mut k = Vec::with_capacity(20);
    for z in form.seed.as_array() {
        k.push(z.re);
        k.push(z.im);
    }
    for b in &form.blochs {
        k.extend_from_slice(b);
    }
    k
}

pub fn standard_form4(fs: &FactoredState, tol: &Tol) -> Result<StandardForm4> {
    let p = generic_params(fs, tol)?.as_array();
    let grams: Vec<LocalOperator> = gram(fs).iter().map(|g| g.to_operator()).collect();
    let mut best: Option<(Vec<f64>, StandardForm4)> = None;
    for r in relabel_group() {
        let q = r.apply(&p);
        let descending = (0..3).all(|i| q[i].norm() >= q[i + 1].norm() - LEX_TIE * q[0].norm());
        if !descending {
            continue;
        }
        let n = q.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let ph = q[0].conj() / q[0].norm();
        let seed = SeedParams4::from_array(q.map(|z| z * ph / n));
        for k in 0..4 {
            let s = LocalOperator::pauli(k);
            let mut blochs = [[0.0; 3]; 4];
            for i in 0..4 {
                let u = s * r.unitary.0[i];
                let g = grams[i].conjugate_by(&u);
                let pf = pauli_decompose(&g, f64::INFINITY).expect("conjugated gram is Hermitian");
                blochs[i] = pf.normalized().g;
            }
            let form = StandardForm4 { seed, blochs };
            let kf = key(&form);
            let better = match &best {
                None => true,
                Some((kb, _)) => lex_cmp(&kf, kb) == std::cmp::Ordering::Greater,
            };
            if better {
                best = Some((kf, form));
            }
        }
    }
    best.map(|(_, f)| f)
        .ok_or_else(|| Error::DegenerateSeed("no ordering of the seed parameters".into()))
}

/// LU-equivalence by standard-form comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LuComparison4 {
    pub equivalent: bool,
    pub distance: f64,
    /// Always true: seed relabellings outside the enumerated Clifford
    /// actions are not quotiented out.
    pub convention_relative: bool,
}

pub fn lu_compare4(a: &FactoredState, b: &FactoredState, tol: &Tol) -> Result<LuComparison4> {
    let d = standard_form4(a, tol)?.distance(&standard_form4(b, tol)?);
    Ok(LuComparison4 {
        equivalent: d < tol.eq,
        distance: d,
        convention_relative: true,
    })
}

pub fn lu_equivalent4(a: &FactoredState, b: &FactoredState, tol: &Tol) -> Result<bool> {
    lu_compare4(a, b, tol).map(|r| r.equivalent)
}

/// Normalized complex seed used in tests and sampling.
pub fn normalized_seed(p: [C64; 4]) -> SeedParams4 {
    let n = p.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    SeedParams4::from_array(p.map(|z| z / n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qla::c;

    fn tol() -> Tol {
        Tol::default()
    }

    fn sample() -> FactoredState {
        let seed = SeedParams4::from_array([c(0.9, 0.1), c(-0.3, 0.5), c(0.2, -0.7), c(0.4, 0.4)]);
        FactoredState::new(
            Seed::Generic(seed),
            vec![
                LocalOperator::new([[c(1.0, 0.2), c(0.3, -0.1)], [c(0.1, 0.4), c(0.9, 0.0)]]),
                LocalOperator::new([[c(0.8, 0.0), c(0.2, 0.2)], [c(-0.3, 0.1), c(1.1, -0.2)]]),
                LocalOperator::new([[c(1.2, -0.3), c(0.0, 0.4)], [c(0.2, 0.0), c(0.7, 0.1)]]),
                LocalOperator::new([[c(0.6, 0.1), c(-0.2, 0.0)], [c(0.3, 0.3), c(1.0, 0.0)]]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn seed_is_fixed_point_up_to_ordering() {
        let t = tol();
        let seed = normalized_seed([c(0.8, 0.0), c(0.5, 0.1), c(0.3, -0.2), c(0.1, 0.05)]);
        let f = standard_form4(&FactoredState::bare(Seed::Generic(seed)), &t).unwrap();
        assert!(f.blochs.iter().flatten().all(|v| v.abs() < 1e-15));
        let g = standard_form4(&f.to_factored(), &t).unwrap();
        assert!(f.distance(&g) < 1e-12);
    }

    #[test]
    fn realizes_lu_equivalent_state() {
        let t = tol();
        let fs = sample();
        let f = standard_form4(&fs, &t).unwrap();
        for b in &f.blochs {
            assert!(crate::qla::norm3(b) < 0.5);
        }
        // LU invariants: single-party spectra
        let v = fs.realize(&t).unwrap().normalized();
        let w = f.to_factored().realize(&t).unwrap().normalized();
        for party in 0..4 {
            let a = pauli_decompose(&v.reduced(party), 1e-12).unwrap().bloch_norm();
            let b = pauli_decompose(&w.reduced(party), 1e-12).unwrap().bloch_norm();
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn sigma_x_conjugation_invariant() {
        let t = tol();
        let fs = sample();
        let x = ProductOperator::uniform(LocalOperator::x(), 4);
        let conj = FactoredState {
            seed: fs.seed,
            locals: fs.locals.compose(&x),
        };
        let a = standard_form4(&fs, &t).unwrap();
        let b = standard_form4(&conj, &t).unwrap();
        assert!(a.distance(&b) < 1e-12);
        let bx = blochs4(&conj);
        let b0 = blochs4(&fs);
        assert!((bx[0][1] + b0[0][1]).abs() < 1e-12);
    }

    #[test]
    fn relabelled_inputs_agree() {
        let t = tol();
        let fs = sample();
        let p = match fs.seed {
            Seed::Generic(p) => p.as_array(),
            _ => unreachable!(),
        };
        let a = standard_form4(&fs, &t).unwrap();
        for r in relabel_group().iter().step_by(7) {
            // g|Ψ_p⟩ = (g U†)|Ψ_{p′}⟩
            let other = FactoredState::new(
                Seed::Generic(SeedParams4::from_array(r.apply(&p))),
                fs.locals.compose(&r.unitary.adjoint()).0,
            )
            .unwrap();
            let v = fs.realize(&t).unwrap();
            assert!(v.max_abs_diff(&other.realize(&t).unwrap()) < 1e-13);
            assert!(a.distance(&standard_form4(&other, &t).unwrap()) < 1e-10);
        }
    }

    #[test]
    fn perturbation_detected() {
        let t = tol();
        let fs = sample();
        let f = standard_form4(&fs, &t).unwrap();
        let mut g = f;
        g.blochs[2][1] += 1e-3;
        assert!(!lu_equivalent4(&f.to_factored(), &g.to_factored(), &t).unwrap());
        assert!(lu_equivalent4(&fs, &f.to_factored(), &t).unwrap());
    }

    #[test]
    fn degenerate_seed_rejected() {
        let seed = SeedParams4::from_array([c(0.5, 0.0), c(0.5, 0.0), c(0.3, 0.0), c(0.1, 0.0)]);
        assert!(matches!(
            standard_form4(&FactoredState::bare(Seed::Generic(seed)), &tol()),
            Err(Error::DegenerateSeed(_))
        ));
    }
}
