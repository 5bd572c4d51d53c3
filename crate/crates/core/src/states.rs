//! Seeds and factored states `g_1 ⊗ … ⊗ g_n |seed⟩`.
//!
//! Seeds are stored unnormalized: `|GHZ⟩ = |000⟩ + |111⟩`,
//! `|W⟩ = |001⟩ + |010⟩ + |100⟩`, and the generic 4-qubit family
//! `G_abcd`. Normalization only happens when states are compared or
//! simulated.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qla::{self, c, cr, pauli_decompose, LocalOperator, PauliForm, StateVector, C64, ZERO};
use crate::Tol;

/// Parameters `(a, b, c, d)` of a generic 4-qubit seed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeedParams4 {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub d: C64,
}

impl SeedParams4 {
    pub fn new(a: C64, b: C64, c: C64, d: C64) -> Self {
        SeedParams4 { a, b, c, d }
    }

    pub fn as_array(&self) -> [C64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn from_array(p: [C64; 4]) -> Self {
        SeedParams4::new(p[0], p[1], p[2], p[3])
    }

    /// Smallest of `|x ± y|` over all pairs; the seed is generic when this
    /// exceeds `tol_generic`.
    pub fn genericity_margin(&self) -> f64 {
        let p = self.as_array();
        let mut m = f64::INFINITY;
        for i in 0..4 {
            for j in (i + 1)..4 {
                m = m.min((p[i] - p[j]).norm()).min((p[i] + p[j]).norm());
            }
        }
        m
    }

    pub fn validate(&self, tol: &Tol) -> Result<()> {
        let p = self.as_array();
        if p.iter().any(|z| !z.is_finite()) {
            return Err(Error::DegenerateSeed("non-finite parameter".into()));
        }
        if p.iter().all(|z| z.norm() == 0.0) {
            return Err(Error::DegenerateSeed("all parameters vanish".into()));
        }
        let names = ['a', 'b', 'c', 'd'];
        for i in 0..4 {
            for j in (i + 1)..4 {
                if (p[i] - p[j]).norm() <= tol.generic {
                    return Err(Error::DegenerateSeed(format!("{} = {}", names[i], names[j])));
                }
                if (p[i] + p[j]).norm() <= tol.generic {
                    return Err(Error::DegenerateSeed(format!("{} = -{}", names[i], names[j])));
                }
            }
        }
        Ok(())
    }

    /// The literal `G_abcd` superposition (unnormalized).
    pub fn vector(&self) -> StateVector {
        let SeedParams4 { a, b, c, d } = *self;
        let mut amps = vec![ZERO; 16];
        let s = (a + d) * 0.5;
        let t = (a - d) * 0.5;
        let u = (b + c) * 0.5;
        let v = (b - c) * 0.5;
        amps[0b0000] = s;
        amps[0b1111] = s;
        amps[0b0011] = t;
        amps[0b1100] = t;
        amps[0b0101] = u;
        amps[0b1010] = u;
        amps[0b0110] = v;
        amps[0b1001] = v;
        StateVector::raw(4, amps)
    }
}

/// The three-parameter family `|0⟩|Ψ_s⟩ + |1⟩ Y(β′)⊗Y(β) |Ψ_s⟩` with
/// `|Ψ_s⟩ = a|00⟩ + √(1−a²)|11⟩` and `Y(θ) = exp(iθY)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mes3Family {
    pub a: f64,
    pub beta: f64,
    pub beta_prime: f64,
}

impl Mes3Family {
    pub fn new(a: f64, beta: f64, beta_prime: f64) -> Self {
        Mes3Family { a, beta, beta_prime }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.a) || !self.beta.is_finite() || !self.beta_prime.is_finite() {
            return Err(Error::WrongShape(format!(
                "family parameters out of range: {self:?}"
            )));
        }
        Ok(())
    }

    pub fn schmidt_pair(&self) -> StateVector {
        let a2 = (1.0 - self.a * self.a).max(0.0).sqrt();
        StateVector::raw(2, vec![cr(self.a), ZERO, ZERO, cr(a2)])
    }

    pub fn vector(&self) -> StateVector {
        let s = self.schmidt_pair();
        let rotated = s
            .apply_local(0, &LocalOperator::pauli_rotation(2, self.beta_prime))
            .apply_local(1, &LocalOperator::pauli_rotation(2, self.beta));
        let mut amps = Vec::with_capacity(8);
        amps.extend_from_slice(s.amplitudes());
        amps.extend_from_slice(rotated.amplitudes());
        StateVector::raw(3, amps)
    }

    /// `X ⊗ Z·Y(−β′) ⊗ Z·Y(−β)`, which fixes the family state.
    pub fn symmetry(&self) -> ProductOperator {
        let z = LocalOperator::z();
        ProductOperator(vec![
            LocalOperator::x(),
            z * LocalOperator::pauli_rotation(2, -self.beta_prime),
            z * LocalOperator::pauli_rotation(2, -self.beta),
        ])
    }
}

/// Representative state a factored state is built on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Seed {
    Ghz,
    W,
    Generic(SeedParams4),
    Family(Mes3Family),
}

impl Seed {
    pub fn n_parties(&self) -> usize {
        match self {
            Seed::Ghz | Seed::W | Seed::Family(_) => 3,
            Seed::Generic(_) => 4,
        }
    }

    pub fn validate(&self, tol: &Tol) -> Result<()> {
        match self {
            Seed::Generic(p) => p.validate(tol),
            Seed::Family(f) => f.validate(),
            _ => Ok(()),
        }
    }

    /// Seed amplitudes; rejects degenerate 4-qubit parameters.
    pub fn vector(&self, tol: &Tol) -> Result<StateVector> {
        self.validate(tol)?;
        Ok(self.vector_unchecked())
    }

    pub(crate) fn vector_unchecked(&self) -> StateVector {
        match self {
            Seed::Ghz => {
                let mut amps = vec![ZERO; 8];
                amps[0] = qla::ONE;
                amps[7] = qla::ONE;
                StateVector::raw(3, amps)
            }
            Seed::W => {
                let mut amps = vec![ZERO; 8];
                amps[0b001] = qla::ONE;
                amps[0b010] = qla::ONE;
                amps[0b100] = qla::ONE;
                StateVector::raw(3, amps)
            }
            Seed::Generic(p) => p.vector(),
            Seed::Family(f) => f.vector(),
        }
    }
}

/// `seed_vector` for any seed kind.
pub fn seed_vector(seed: &Seed, tol: &Tol) -> Result<StateVector> {
    seed.vector(tol)
}

/// One local operator per party, `g_1 ⊗ … ⊗ g_n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ProductOperator(pub Vec<LocalOperator>);

impl ProductOperator {
    pub fn identity(n: usize) -> Self {
        ProductOperator(vec![LocalOperator::identity(); n])
    }

    pub fn uniform(op: LocalOperator, n: usize) -> Self {
        ProductOperator(vec![op; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn ops(&self) -> &[LocalOperator] {
        &self.0
    }

    pub fn adjoint(&self) -> Self {
        ProductOperator(self.0.iter().map(|o| o.adjoint()).collect())
    }

    /// Party-wise product `self · rhs`.
    pub fn compose(&self, rhs: &Self) -> Self {
        assert_eq!(self.len(), rhs.len());
        ProductOperator(self.0.iter().zip(&rhs.0).map(|(a, b)| *a * *b).collect())
    }

    pub fn apply(&self, v: &StateVector) -> StateVector {
        v.apply_product(&self.0)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.0.iter().all(|o| o.is_unitary(tol))
    }

    /// Party-wise `g_i† g_i`.
    pub fn gram(&self) -> Self {
        ProductOperator(self.0.iter().map(|o| o.gram()).collect())
    }
}

/// A pure state `g_1 ⊗ … ⊗ g_n |seed⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct FactoredState {
    pub seed: Seed,
    pub locals: ProductOperator,
}

impl FactoredState {
    pub fn new(seed: Seed, locals: Vec<LocalOperator>) -> Result<Self> {
        let n = seed.n_parties();
        if locals.len() != n {
            return Err(Error::PartyCount {
                expected: n,
                got: locals.len(),
            });
        }
        Ok(FactoredState {
            seed,
            locals: ProductOperator(locals),
        })
    }

    /// The seed itself (all locals the identity).
    pub fn bare(seed: Seed) -> Self {
        let n = seed.n_parties();
        FactoredState {
            seed,
            locals: ProductOperator::identity(n),
        }
    }

    pub fn n_parties(&self) -> usize {
        self.seed.n_parties()
    }

    pub fn local(&self, party: usize) -> &LocalOperator {
        &self.locals.0[party]
    }

    pub fn validate(&self, tol: &Tol) -> Result<()> {
        if self.locals.len() != self.seed.n_parties() {
            return Err(Error::PartyCount {
                expected: self.seed.n_parties(),
                got: self.locals.len(),
            });
        }
        self.seed.validate(tol)?;
        for (p, op) in self.locals.0.iter().enumerate() {
            if !op.is_finite() || op.det().norm() <= tol.invertible {
                return Err(Error::SingularLocal(p));
            }
        }
        Ok(())
    }

    /// `(g_1 ⊗ … ⊗ g_n)|seed⟩`.
    pub fn realize(&self, tol: &Tol) -> Result<StateVector> {
        self.validate(tol)?;
        Ok(self.locals.apply(&self.seed.vector_unchecked()))
    }

    /// Replace the operator on one party.
    pub fn with_local(&self, party: usize, op: LocalOperator) -> Self {
        let mut out = self.clone();
        out.locals.0[party] = op;
        out
    }

    /// Left-multiply every local by the matching operator of `u`.
    pub fn left_multiply(&self, u: &ProductOperator) -> Self {
        FactoredState {
            seed: self.seed,
            locals: u.compose(&self.locals),
        }
    }
}

/// Per-party `G_i = g_i† g_i`, normalized to trace one.
pub fn gram(fs: &FactoredState) -> Vec<PauliForm> {
    fs.locals.0.iter().map(gram_form).collect()
}

/// Trace-one Pauli form of `g†g`.
pub fn gram_form(g: &LocalOperator) -> PauliForm {
    let h = g.gram();
    // g†g is Hermitian by construction, up to rounding
    let p = pauli_decompose(&h, f64::INFINITY).expect("gram is Hermitian");
    p.normalized()
}

// JSON wire format

#[derive(Serialize, Deserialize)]
struct SeedParamsWire {
    a: [f64; 2],
    b: [f64; 2],
    c: [f64; 2],
    d: [f64; 2],
}

#[derive(Serialize, Deserialize)]
struct FamilyWire {
    family: Mes3Family,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum SeedWire {
    Named(String),
    Params(SeedParamsWire),
    Family(FamilyWire),
}

fn pair(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

fn unpair(p: [f64; 2]) -> C64 {
    c(p[0], p[1])
}

impl Serialize for Seed {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let wire = match self {
            Seed::Ghz => SeedWire::Named("GHZ".into()),
            Seed::W => SeedWire::Named("W".into()),
            Seed::Generic(p) => SeedWire::Params(SeedParamsWire {
                a: pair(p.a),
                b: pair(p.b),
                c: pair(p.c),
                d: pair(p.d),
            }),
            Seed::Family(f) => SeedWire::Family(FamilyWire { family: *f }),
        };
        wire.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Seed {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match SeedWire::deserialize(d)? {
            SeedWire::Named(n) => match n.as_str() {
                "GHZ" => Ok(Seed::Ghz),
                "W" => Ok(Seed::W),
                other => Err(serde::de::Error::custom(format!("unknown seed {other:?}"))),
            },
            SeedWire::Params(p) => Ok(Seed::Generic(SeedParams4::new(
                unpair(p.a),
                unpair(p.b),
                unpair(p.c),
                unpair(p.d),
            ))),
            SeedWire::Family(f) => Ok(Seed::Family(f.family)),
        }
    }
}

impl Serialize for SeedParams4 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SeedParamsWire {
            a: pair(self.a),
            b: pair(self.b),
            c: pair(self.c),
            d: pair(self.d),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SeedParams4 {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let p = SeedParamsWire::deserialize(d)?;
        Ok(SeedParams4::new(
            unpair(p.a),
            unpair(p.b),
            unpair(p.c),
            unpair(p.d),
        ))
    }
}

#[derive(Serialize, Deserialize)]
struct FactoredWire {
    seed: Seed,
    locals: Vec<LocalOperator>,
}

impl Serialize for FactoredState {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FactoredWire {
            seed: self.seed,
            locals: self.locals.0.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FactoredState {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = FactoredWire::deserialize(d)?;
        FactoredState::new(w.seed, w.locals).map_err(serde::de::Error::custom)
    }
}

/// Raw amplitudes on the wire: `{"amplitudes": [[re, im], …]}`.
#[derive(Serialize, Deserialize)]
struct VectorWire {
    amplitudes: Vec<[f64; 2]>,
}

impl Serialize for StateVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        VectorWire {
            amplitudes: self.amplitudes().iter().map(|z| pair(*z)).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for StateVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = VectorWire::deserialize(d)?;
        StateVector::new(w.amplitudes.into_iter().map(unpair).collect()).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qla::{I, ONE};

    fn tol() -> Tol {
        Tol::default()
    }

    #[test]
    fn ghz_and_w_vectors() {
        let g = seed_vector(&Seed::Ghz, &tol()).unwrap();
        for (i, z) in g.amplitudes().iter().enumerate() {
            let want = if i == 0 || i == 7 { ONE } else { ZERO };
            assert_eq!(*z, want);
        }
        let w = seed_vector(&Seed::W, &tol()).unwrap();
        let ones: Vec<usize> = (0..8).filter(|&i| w.amplitudes()[i] == ONE).collect();
        assert_eq!(ones, vec![1, 2, 4]);
    }

    #[test]
    fn degenerate_seed_rejected() {
        let p = SeedParams4::new(ONE, ZERO, ZERO, ZERO);
        assert!(matches!(
            seed_vector(&Seed::Generic(p), &tol()),
            Err(Error::DegenerateSeed(_))
        ));
    }

    #[test]
    fn seed_coefficient_read_off() {
        let p = SeedParams4::new(cr(3.0), cr(2.0), cr(1.0), I);
        let v = seed_vector(&Seed::Generic(p), &tol()).unwrap();
        assert_eq!(v.amplitudes()[0b0101], cr(1.5));
        assert_eq!(v.amplitudes()[0b0110], cr(0.5));
        assert_eq!(v.amplitudes()[0b0000], c(1.5, 0.5));
    }

    #[test]
    fn generic_seed_marginals_are_maximally_mixed() {
        let p = SeedParams4::new(c(0.9, 0.1), c(-0.3, 0.7), c(0.2, -0.4), c(1.1, 0.5));
        let v = seed_vector(&Seed::Generic(p), &tol()).unwrap();
        let half = LocalOperator::identity().scale_re(0.5);
        for party in 0..4 {
            assert!(v.reduced(party).max_abs_diff(&half) < 1e-12);
        }
    }

    #[test]
    fn realize_examples() {
        let t = tol();
        let ghz = seed_vector(&Seed::Ghz, &t).unwrap();
        let fs = FactoredState::bare(Seed::Ghz);
        assert_eq!(fs.realize(&t).unwrap(), ghz);
        let x = LocalOperator::x();
        let flipped = FactoredState::new(Seed::Ghz, vec![x, x, x]).unwrap();
        assert_eq!(flipped.realize(&t).unwrap(), ghz);
        let w = FactoredState::bare(Seed::W).realize(&t).unwrap();
        assert_eq!(w, seed_vector(&Seed::W, &t).unwrap());
    }

    #[test]
    fn singular_local_rejected() {
        let fs = FactoredState::new(
            Seed::Ghz,
            vec![
                LocalOperator::identity(),
                LocalOperator::diag(ONE, ZERO),
                LocalOperator::identity(),
            ],
        )
        .unwrap();
        assert_eq!(fs.realize(&tol()), Err(Error::SingularLocal(1)));
    }

    #[test]
    fn gram_examples() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let fs = FactoredState::new(Seed::Ghz, vec![LocalOperator::identity().scale_re(s); 3]).unwrap();
        for p in gram(&fs) {
            assert!((p.c0 - 0.5).abs() < 1e-15 && p.bloch_norm() < 1e-15);
        }
        let d = LocalOperator::diag(cr(0.8f64.sqrt()), cr(0.2f64.sqrt()));
        let p = gram_form(&d);
        assert!((p.g[2] - 0.3).abs() < 1e-15 && p.g[0].abs() < 1e-15);

        // (1/√2)(𝟙 + 0.6X)^{1/2}: squares to (1/2)(𝟙 + 0.6X)
        let half_root = LocalOperator::from_real([[1.0, 0.6], [0.6, 1.0]])
            .sqrt_psd()
            .unwrap()
            .scale_re(s);
        let p = gram_form(&half_root);
        assert!((p.g[0] - 0.3).abs() < 1e-14 && p.g[1].abs() < 1e-14 && p.g[2].abs() < 1e-14);
        assert!((p.to_operator() - half_root.gram()).max_abs() < 1e-14);
    }

    #[test]
    fn family_symmetry_fixes_family_state() {
        let f = Mes3Family::new(0.6, 0.3, -1.1);
        let v = f.vector();
        let w = f.symmetry().apply(&v);
        assert!(v.max_abs_diff(&w) < 1e-14);
    }

    #[test]
    fn json_roundtrip() {
        let fs = FactoredState::new(
            Seed::Generic(SeedParams4::new(cr(1.0), c(0.2, 0.3), c(-0.5, 0.1), cr(0.7))),
            vec![LocalOperator::hadamard(); 4],
        )
        .unwrap();
        let s = serde_json::to_string(&fs).unwrap();
        let back: FactoredState = serde_json::from_str(&s).unwrap();
        assert_eq!(back, fs);
        let ghz: FactoredState =
            serde_json::from_str(r#"{"seed":"GHZ","locals":[[[[1,0],[0,0]],[[0,0],[1,0]]],[[[1,0],[0,0]],[[0,0],[1,0]]],[[[1,0],[0,0]],[[0,0],[1,0]]]]}"#)
                .unwrap();
        assert_eq!(ghz, FactoredState::bare(Seed::Ghz));
        let bad = serde_json::from_str::<FactoredState>(r#"{"seed":"W","locals":[]}"#);
        assert!(bad.is_err());
    }
}
