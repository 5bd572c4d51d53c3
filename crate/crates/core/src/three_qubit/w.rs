//! W-class standard form `x₀|000⟩ + x₁|100⟩ + x₂|010⟩ + x₃|001⟩`, `xᵢ ≥ 0`.
//!
//! Each local is split as `g = QR` with `R` upper triangular. The symmetries
//! of `|W⟩` are upper triangular too, so `R₁⊗R₂⊗R₃|W⟩` only has support on
//! the four kets above; diagonal phases then make the coefficients real.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qla::{cr, LocalOperator, C64, ONE, ZERO};
use crate::states::{FactoredState, ProductOperator, Seed};
use crate::Tol;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WStandardForm {
    pub x: [f64; 4],
}

/// `realize(input) = scale · V · realize(form)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WReduction {
    pub form: WStandardForm,
    pub unitary: ProductOperator,
    pub scale: C64,
}

impl WStandardForm {
    pub fn new(x: [f64; 4]) -> Self {
        WStandardForm { x }
    }

    pub fn norm(&self) -> f64 {
        self.x.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        WStandardForm {
            x: self.x.map(|v| v / n),
        }
    }

    /// `x₀ / ‖x‖`.
    pub fn x0_ratio(&self) -> f64 {
        self.x[0] / self.norm()
    }

    /// `g₁ = diag(1, x₁/x₃)`, `g₂ = [[x₃, x₀], [0, x₂]]`, `g₃ = 𝟙`.
    pub fn to_factored(&self) -> FactoredState {
        let [x0, x1, x2, x3] = self.x;
        FactoredState {
            seed: Seed::W,
            locals: ProductOperator(vec![
                LocalOperator::diag(ONE, cr(x1 / x3)),
                LocalOperator::from_real([[x3, x0], [0.0, x2]]),
                LocalOperator::identity(),
            ]),
        }
    }

    pub fn distance(&self, other: &Self) -> f64 {
        let a = self.normalized();
        let b = other.normalized();
        (0..4).map(|i| (a.x[i] - b.x[i]).abs()).fold(0.0, f64::max)
    }
}

/// `g = Q R` with `Q` unitary and `R = [[a, c], [0, d]]`, `a, d > 0`.
fn qr(g: &LocalOperator) -> Option<(LocalOperator, C64, C64, C64)> {
    let c0 = [g.0[0][0], g.0[1][0]];
    let c1 = [g.0[0][1], g.0[1][1]];
    let a = (c0[0].norm_sqr() + c0[1].norm_sqr()).sqrt();
    if a == 0.0 {
        return None;
    }
    let q0 = [c0[0] / a, c0[1] / a];
    let c = q0[0].conj() * c1[0] + q0[1].conj() * c1[1];
    let r = [c1[0] - q0[0] * c, c1[1] - q0[1] * c];
    let d = (r[0].norm_sqr() + r[1].norm_sqr()).sqrt();
    if d == 0.0 {
        return None;
    }
    let q1 = [r[0] / d, r[1] / d];
    let q = LocalOperator::new([[q0[0], q1[0]], [q0[1], q1[1]]]);
    Some((q, cr(a), c, cr(d)))
}

pub fn w_reduce(fs: &FactoredState, tol: &Tol) -> Result<WReduction> {
    if fs.seed != Seed::W {
        return Err(Error::WrongShape("expected a W seed".into()));
    }
    fs.validate(tol)?;
    let mut qs = Vec::with_capacity(3);
    let mut rs = Vec::with_capacity(3);
    for (i, g) in fs.locals.ops().iter().enumerate() {
        let (q, a, c, d) = qr(g).ok_or(Error::SingularLocal(i))?;
        qs.push(q);
        rs.push((a, c, d));
    }
    let (a1, c1, d1) = rs[0];
    let (a2, c2, d2) = rs[1];
    let (a3, c3, d3) = rs[2];
    let y = [
        a1 * a2 * c3 + a1 * c2 * a3 + c1 * a2 * a3,
        d1 * a2 * a3,
        a1 * d2 * a3,
        a1 * a2 * d3,
    ];
    // y = e^{iχ} · diag phases · x, with the phases on the |1⟩ components
    let chi = if y[0].norm() > 0.0 {
        y[0] / y[0].norm()
    } else {
        ONE
    };
    let ph = |v: C64| if v.norm() > 0.0 { v / v.norm() / chi } else { ONE };
    let phases = [ph(y[1]), ph(y[2]), ph(y[3])];
    let unitary = ProductOperator(
        (0..3)
            .map(|i| qs[i] * LocalOperator::diag(ONE, phases[i]))
            .collect(),
    );
    let x = y.map(|v| v.norm());
    Ok(WReduction {
        form: WStandardForm::new(x),
        unitary,
        scale: chi,
    })
}

pub fn w_standard_form(fs: &FactoredState, tol: &Tol) -> Result<WStandardForm> {
    w_reduce(fs, tol).map(|r| r.form)
}

pub fn w_in_mes(form: &WStandardForm, tol: &Tol) -> bool {
    form.x0_ratio() < tol.zero
}

/// `S_{x,y,z}` symmetry of the W seed.
pub fn w_symmetry(x: C64, y: C64, z: C64) -> ProductOperator {
    let xi = (x * x).inv();
    ProductOperator(vec![
        LocalOperator::new([[x, y], [ZERO, xi]]),
        LocalOperator::new([[x, z], [ZERO, xi]]),
        LocalOperator::new([[x, -y - z], [ZERO, xi]]),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qla::c;

    fn tol() -> Tol {
        Tol::default()
    }

    #[test]
    fn w_itself() {
        let f = w_standard_form(&FactoredState::bare(Seed::W), &tol()).unwrap();
        assert_eq!(f.x, [0.0, 1.0, 1.0, 1.0]);
    }

    #[test]
    fn diagonal_example() {
        let fs = FactoredState::new(
            Seed::W,
            vec![
                LocalOperator::diag(ONE, cr(2.0)),
                LocalOperator::diag(ONE, cr(3.0)),
                LocalOperator::identity(),
            ],
        )
        .unwrap();
        let f = w_standard_form(&fs, &tol()).unwrap();
        assert_eq!(f.x[0], 0.0);
        assert!((f.x[1] / f.x[3] - 2.0).abs() < 1e-15);
        assert!((f.x[2] / f.x[3] - 3.0).abs() < 1e-15);
        let t = tol();
        let v = f.to_factored().realize(&t).unwrap();
        assert!(crate::qla::proportional_up_to_phase(
            &v,
            &fs.realize(&t).unwrap(),
            1e-14
        ));
    }

    #[test]
    fn upper_triangular_gives_x0() {
        let fs = FactoredState::new(
            Seed::W,
            vec![
                LocalOperator::identity(),
                LocalOperator::from_real([[1.0, 0.5], [0.0, 1.0]]),
                LocalOperator::identity(),
            ],
        )
        .unwrap();
        let f = w_standard_form(&fs, &tol()).unwrap();
        assert!((f.x[0] - 0.5).abs() < 1e-15);
        assert!(!w_in_mes(&f, &tol()));
    }

    #[test]
    fn witness_reconstructs_input() {
        let t = tol();
        let g1 = LocalOperator::new([[c(0.3, 0.1), c(1.2, -0.4)], [c(-0.7, 0.2), c(0.5, 0.9)]]);
        let g2 = LocalOperator::new([[c(1.1, 0.0), c(0.2, 0.3)], [c(0.4, -0.6), c(0.8, 0.1)]]);
        let g3 = LocalOperator::new([[c(0.2, -0.5), c(0.1, 0.1)], [c(0.9, 0.3), c(-1.0, 0.4)]]);
        let fs = FactoredState::new(Seed::W, vec![g1, g2, g3]).unwrap();
        let r = w_reduce(&fs, &t).unwrap();
        assert!(r.unitary.is_unitary(1e-12));
        let lhs = fs.realize(&t).unwrap();
        let rhs = r.unitary.apply(&r.form.to_factored().realize(&t).unwrap());
        assert!(lhs.max_abs_diff(&rhs.scale(r.scale)) < 1e-12);
    }

    #[test]
    fn symmetry_fixes_w() {
        let t = tol();
        let w = FactoredState::bare(Seed::W).realize(&t).unwrap();
        let s = w_symmetry(c(0.7, 0.4), c(-1.3, 0.2), c(0.5, 0.9));
        assert!(s.apply(&w).max_abs_diff(&w) < 1e-14);
    }
}
