//! Reproducible random instances.
//!
//! Instance `i` of a run with seed `s` is drawn from
//! `ChaCha8Rng::seed_from_u64(s)` on stream `i`, so results do not depend
//! on how a sweep is scheduled across threads.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qla::{c, LocalOperator, PauliForm, C64, ONE};
use crate::states::{FactoredState, Mes3Family, ProductOperator, Seed, SeedParams4};
use crate::three_qubit::ghz::{z_from_polar, GhzStandardForm};
use crate::three_qubit::protocols::nonisolation_operator;
use crate::three_qubit::w::WStandardForm;
use crate::Tol;

/// Bloch vectors are drawn inside the ball of radius `1/2 − BALL_MARGIN`.
pub const BALL_MARGIN: f64 = 0.02;
/// Seeds closer than this to a degenerate one are redrawn.
pub const SEED_MARGIN: f64 = 1e-3;
/// Smallest nonzero component used by shaped samplers.
const MIN_COMPONENT: f64 = 0.02;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SampleClass {
    /// Generic seed, generic locals.
    FourGeneric,
    /// Three parties aligned on a common axis, the fourth arbitrary.
    FourConvertShape,
    /// As above with the fourth party off the common axis.
    FourReachAligned,
    /// Exactly one party with a nonzero Bloch vector.
    FourReachSingle,
    /// All four parties aligned on one axis.
    FourAligned,
    ThreeGhz,
    ThreeGhzRandomZ,
    ThreeGhzMes,
    /// GHZ class, `z = 1`, one trivial local.
    ThreeGhzTrivial,
    ThreeW,
    ThreeWX0Zero,
    ThreeWX0Pos,
    ThreeFamily,
    /// Family seed with a non-isolation operator on party 0.
    ThreeFamilyPovm,
    /// Cycles through targets for every protocol family.
    Protocols,
}

impl SampleClass {
    pub const ALL: [SampleClass; 15] = [
        SampleClass::FourGeneric,
        SampleClass::FourConvertShape,
        SampleClass::FourReachAligned,
        SampleClass::FourReachSingle,
        SampleClass::FourAligned,
        SampleClass::ThreeGhz,
        SampleClass::ThreeGhzRandomZ,
        SampleClass::ThreeGhzMes,
        SampleClass::ThreeGhzTrivial,
        SampleClass::ThreeW,
        SampleClass::ThreeWX0Zero,
        SampleClass::ThreeWX0Pos,
        SampleClass::ThreeFamily,
        SampleClass::ThreeFamilyPovm,
        SampleClass::Protocols,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SampleClass::FourGeneric => "4q-generic",
            SampleClass::FourConvertShape => "4q-thm3-shape",
            SampleClass::FourReachAligned => "4q-reach-aligned",
            SampleClass::FourReachSingle => "4q-reach-single",
            SampleClass::FourAligned => "4q-aligned",
            SampleClass::ThreeGhz => "3q-ghz",
            SampleClass::ThreeGhzRandomZ => "3q-ghz-random-z",
            SampleClass::ThreeGhzMes => "3q-ghz-mes",
            SampleClass::ThreeGhzTrivial => "3q-ghz-trivial",
            SampleClass::ThreeW => "3q-w",
            SampleClass::ThreeWX0Zero => "3q-w-x0zero",
            SampleClass::ThreeWX0Pos => "3q-w-x0pos",
            SampleClass::ThreeFamily => "3q-family",
            SampleClass::ThreeFamilyPovm => "3q-family-povm",
            SampleClass::Protocols => "protocols",
        }
    }
}

impl fmt::Display for SampleClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SampleClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_lowercase();
        SampleClass::ALL
            .into_iter()
            .find(|c| c.name() == key)
            .ok_or_else(|| {
                let names: Vec<&str> = SampleClass::ALL.iter().map(|c| c.name()).collect();
                Error::BadSpec(format!(
                    "unknown sample class {s:?}; expected one of {}",
                    names.join(", ")
                ))
            })
    }
}

pub fn rng_for(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    rng.sample(StandardNormal)
}

fn cnormal(rng: &mut ChaCha8Rng) -> C64 {
    c(normal(rng), normal(rng))
}

/// Haar-random element of U(2).
pub fn haar_unitary(rng: &mut ChaCha8Rng) -> LocalOperator {
    let q: [f64; 4] = [normal(rng), normal(rng), normal(rng), normal(rng)];
    let n = q.iter().map(|v| v * v).sum::<f64>().sqrt();
    let a = c(q[0] / n, q[1] / n);
    let b = c(q[2] / n, q[3] / n);
    let ph = C64::from_polar(1.0, rng.gen_range(-PI..PI));
    LocalOperator::new([[a, -b.conj()], [b, a.conj()]]).scale(ph)
}

fn unit_vector(rng: &mut ChaCha8Rng) -> [f64; 3] {
    loop {
        let v = [normal(rng), normal(rng), normal(rng)];
        let n = crate::qla::norm3(&v);
        if n > 1e-8 {
            return v.map(|x| x / n);
        }
    }
}

/// Uniform in the ball of radius `1/2 − BALL_MARGIN`.
pub fn bloch_in_ball(rng: &mut ChaCha8Rng) -> [f64; 3] {
    let r = (0.5 - BALL_MARGIN) * rng.gen::<f64>().cbrt();
    unit_vector(rng).map(|x| x * r)
}

/// `U·√(½𝟙 + g⃗·σ⃗)` with Haar `U`; its trace-one gram is exactly `g⃗`.
pub fn local_with_bloch(rng: &mut ChaCha8Rng, g: [f64; 3]) -> LocalOperator {
    let s = PauliForm::normalized_from(g)
        .to_operator()
        .sqrt_psd()
        .expect("|g| < 1/2");
    haar_unitary(rng) * s
}

fn generic_seed(rng: &mut ChaCha8Rng) -> SeedParams4 {
    loop {
        let p = SeedParams4::from_array([cnormal(rng), cnormal(rng), cnormal(rng), cnormal(rng)]);
        if p.genericity_margin() > SEED_MARGIN {
            let n = p.as_array().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            return SeedParams4::from_array(p.as_array().map(|z| z / n));
        }
    }
}

fn signed_component(rng: &mut ChaCha8Rng, max: f64) -> f64 {
    let m = rng.gen_range(MIN_COMPONENT..max);
    if rng.gen::<bool>() {
        m
    } else {
        -m
    }
}

/// Vector along `axis` with length in `[MIN_COMPONENT, max)`.
fn on_axis(rng: &mut ChaCha8Rng, axis: usize, max: f64) -> [f64; 3] {
    let mut v = [0.0; 3];
    v[axis] = signed_component(rng, max);
    v
}

/// Bloch vector whose component off `axis` has length at least
/// `MIN_COMPONENT`.
fn off_axis_bloch(rng: &mut ChaCha8Rng, axis: usize) -> [f64; 3] {
    loop {
        let v = bloch_in_ball(rng);
        let off: f64 = (0..3)
            .filter(|&k| k != axis)
            .map(|k| v[k] * v[k])
            .sum::<f64>()
            .sqrt();
        if off >= MIN_COMPONENT {
            return v;
        }
    }
}

fn four(rng: &mut ChaCha8Rng, blochs: [[f64; 3]; 4]) -> FactoredState {
    let seed = generic_seed(rng);
    let locals = blochs.iter().map(|b| local_with_bloch(rng, *b)).collect();
    FactoredState {
        seed: Seed::Generic(seed),
        locals: ProductOperator(locals),
    }
}

fn invertible(rng: &mut ChaCha8Rng) -> LocalOperator {
    loop {
        let m = LocalOperator::new([[cnormal(rng), cnormal(rng)], [cnormal(rng), cnormal(rng)]]);
        // keep the condition number moderate
        let s = m.0.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>();
        if m.det().norm() > 0.05 * s {
            return m;
        }
    }
}

fn random_lu(rng: &mut ChaCha8Rng, fs: FactoredState) -> FactoredState {
    let u = ProductOperator((0..fs.n_parties()).map(|_| haar_unitary(rng)).collect());
    fs.left_multiply(&u)
}

fn ghz_b(rng: &mut ChaCha8Rng) -> [f64; 3] {
    [
        rng.gen_range(MIN_COMPONENT..0.45),
        rng.gen_range(MIN_COMPONENT..0.45),
        signed_component(rng, 0.45),
    ]
}

fn sample_class(class: SampleClass, rng: &mut ChaCha8Rng, index: u64) -> FactoredState {
    match class {
        SampleClass::FourGeneric => {
            let b = [
                bloch_in_ball(rng),
                bloch_in_ball(rng),
                bloch_in_ball(rng),
                bloch_in_ball(rng),
            ];
            four(rng, b)
        }
        SampleClass::FourConvertShape | SampleClass::FourReachAligned | SampleClass::FourAligned => {
            let party = rng.gen_range(0..4);
            let axis = rng.gen_range(0..3);
            let mut b = [[0.0; 3]; 4];
            for (j, v) in b.iter_mut().enumerate() {
                *v = if j != party {
                    on_axis(rng, axis, 0.45)
                } else {
                    match class {
                        SampleClass::FourReachAligned => off_axis_bloch(rng, axis),
                        SampleClass::FourAligned => on_axis(rng, axis, 0.45),
                        _ => bloch_in_ball(rng),
                    }
                };
            }
            four(rng, b)
        }
        SampleClass::FourReachSingle => {
            let party = rng.gen_range(0..4);
            let mut b = [[0.0; 3]; 4];
            loop {
                b[party] = bloch_in_ball(rng);
                if crate::qla::norm3(&b[party]) >= MIN_COMPONENT {
                    break;
                }
            }
            four(rng, b)
        }
        SampleClass::ThreeGhz => FactoredState {
            seed: Seed::Ghz,
            locals: ProductOperator((0..3).map(|_| invertible(rng)).collect()),
        },
        SampleClass::ThreeGhzRandomZ => {
            let m = (0.6 * normal(rng)).exp();
            let z = z_from_polar(m, rng.gen_range(-PI..PI));
            let b = ghz_b(rng);
            random_lu(rng, GhzStandardForm::new(b, z).to_factored())
        }
        SampleClass::ThreeGhzMes => {
            let z = if rng.gen::<bool>() { ONE } else { -ONE };
            let b = ghz_b(rng);
            random_lu(rng, GhzStandardForm::new(b, z).to_factored())
        }
        SampleClass::ThreeGhzTrivial => {
            let mut b = ghz_b(rng);
            b[rng.gen_range(0..3)] = 0.0;
            random_lu(rng, GhzStandardForm::new(b, ONE).to_factored())
        }
        SampleClass::ThreeW => FactoredState {
            seed: Seed::W,
            locals: ProductOperator((0..3).map(|_| invertible(rng)).collect()),
        },
        SampleClass::ThreeWX0Zero | SampleClass::ThreeWX0Pos => {
            let x0 = if class == SampleClass::ThreeWX0Pos {
                rng.gen_range(0.1..1.0)
            } else {
                0.0
            };
            let x = [
                x0,
                rng.gen_range(0.1..1.0),
                rng.gen_range(0.1..1.0),
                rng.gen_range(0.1..1.0),
            ];
            random_lu(rng, WStandardForm::new(x).to_factored())
        }
        SampleClass::ThreeFamily | SampleClass::ThreeFamilyPovm => {
            let f = Mes3Family::new(
                rng.gen_range(FRAC_1_SQRT_2 + 0.02..0.98),
                rng.gen_range(-FRAC_PI_2 + 0.05..FRAC_PI_2),
                rng.gen_range(-FRAC_PI_2 + 0.05..FRAC_PI_2),
            );
            let a = if class == SampleClass::ThreeFamilyPovm {
                let r = rng.gen_range(0.0..0.45);
                let t = rng.gen_range(-PI..PI);
                nonisolation_operator(r * t.cos(), r * t.sin(), haar_unitary(rng)).expect("|a| < 1/2")
            } else {
                LocalOperator::identity()
            };
            FactoredState {
                seed: Seed::Family(f),
                locals: ProductOperator(vec![a, LocalOperator::identity(), LocalOperator::identity()]),
            }
        }
        SampleClass::Protocols => {
            const CYCLE: [SampleClass; 6] = [
                SampleClass::ThreeGhzRandomZ,
                SampleClass::ThreeGhzTrivial,
                SampleClass::ThreeWX0Pos,
                SampleClass::ThreeFamilyPovm,
                SampleClass::FourReachAligned,
                SampleClass::FourReachSingle,
            ];
            sample_class(CYCLE[(index % 6) as usize], rng, index)
        }
    }
}

/// Instance `index` of `class` under `seed`.
pub fn sample_one(class: SampleClass, seed: u64, index: u64) -> FactoredState {
    let mut rng = rng_for(seed, index);
    sample_class(class, &mut rng, index)
}

pub fn sample(class: SampleClass, count: usize, seed: u64) -> Result<Vec<FactoredState>> {
    if count == 0 {
        return Err(Error::BadSpec("count must be at least 1".into()));
    }
    Ok((0..count as u64).map(|i| sample_one(class, seed, i)).collect())
}

/// Every sample must at least be a valid factored state.
pub fn check_sample(fs: &FactoredState, tol: &Tol) -> Result<()> {
    fs.validate(tol)?;
    fs.seed.validate(tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::gram;

    #[test]
    fn deterministic_given_seed() {
        let a = sample(SampleClass::FourGeneric, 5, 7).unwrap();
        let b = sample(SampleClass::FourGeneric, 5, 7).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, sample(SampleClass::FourGeneric, 5, 8).unwrap());
    }

    #[test]
    fn class_names_roundtrip() {
        for c in SampleClass::ALL {
            assert_eq!(c.name().parse::<SampleClass>().unwrap(), c);
        }
        assert!(matches!("nope".parse::<SampleClass>(), Err(Error::BadSpec(_))));
    }

    #[test]
    fn grams_match_drawn_blochs() {
        let mut rng = rng_for(3, 0);
        let g = [0.1, -0.2, 0.3];
        let op = local_with_bloch(&mut rng, g);
        let f = crate::states::gram_form(&op);
        for k in 0..3 {
            assert!((f.g[k] - g[k]).abs() < 1e-15);
        }
    }

    #[test]
    fn every_class_is_valid() {
        let t = Tol::default();
        for c in SampleClass::ALL {
            for fs in sample(c, 20, 11).unwrap() {
                check_sample(&fs, &t).unwrap();
                for p in gram(&fs) {
                    assert!(p.bloch_norm() < 0.5);
                }
            }
        }
    }
}
