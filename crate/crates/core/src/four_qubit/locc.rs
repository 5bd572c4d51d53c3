//! Reachability, convertibility and isolation of generic 4-qubit states.
//!
//! All decisions depend only on the trace-one Bloch vectors of the locals.
//! A party is aligned on axis `w` when its components off `w` vanish
//! (within `tol.zero`). Reachable: exactly one nonzero Bloch vector, or
//! three parties aligned on a common `w` with the fourth off `w`.
//! Convertible: three parties aligned on a common `w`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::protocol::{Protocol, Round};
use crate::qla::{norm3, LocalOperator, PauliForm};
use crate::states::{FactoredState, ProductOperator, Seed};
use crate::Tol;

use super::standard::{blochs4, generic_params, sqrt_gram};

/// Target Bloch length used by the convertibility witness stays this far
/// below 1/2.
pub const BLOCH_MARGIN: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn pauli(self) -> LocalOperator {
        LocalOperator::pauli(self.index() + 1)
    }
}

pub fn validate_probabilities(p: &[f64; 4]) -> Result<()> {
    if p.iter().any(|x| !x.is_finite() || *x < -1e-12) {
        return Err(Error::BadProbabilities(format!("{p:?} has a negative entry")));
    }
    let s: f64 = p.iter().sum();
    if (s - 1.0).abs() > 1e-9 {
        return Err(Error::BadProbabilities(format!("entries sum to {s}")));
    }
    Ok(())
}

/// `η_i = p₀ + p_i − p_j − p_k`.
pub fn eta(p: &[f64; 4]) -> [f64; 3] {
    [
        p[0] + p[1] - p[2] - p[3],
        p[0] + p[2] - p[1] - p[3],
        p[0] + p[3] - p[1] - p[2],
    ]
}

/// `Σ_k p_k σ_k H σ_k`, diagonal in the Pauli basis.
pub fn eta_map(h: &PauliForm, p: &[f64; 4]) -> Result<PauliForm> {
    validate_probabilities(p)?;
    let e = eta(p);
    Ok(PauliForm::new(
        h.c0,
        [e[0] * h.g[0], e[1] * h.g[1], e[2] * h.g[2]],
    ))
}

/// `h⁽¹⁾(h⁽²⁾)ᵀ ⊙ (ηηᵀ − N₂)`.
pub fn hadamard_matrix(h1: &[f64; 3], h2: &[f64; 3], p: &[f64; 4]) -> [[f64; 3]; 3] {
    let e = eta(p);
    let e0: f64 = p.iter().sum();
    let n2 = [[e0, e[2], e[1]], [e[2], e0, e[0]], [e[1], e[0], e0]];
    let mut m = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] = h1[i] * h2[j] * (e[i] * e[j] - n2[i][j]);
        }
    }
    m
}

pub fn hadamard_condition(h1: &[f64; 3], h2: &[f64; 3], p: &[f64; 4], tol: &Tol) -> bool {
    hadamard_matrix(h1, h2, p)
        .iter()
        .flatten()
        .all(|v| v.abs() < tol.eq)
}

fn off_axis(b: &[f64; 3], w: Axis) -> f64 {
    let mut s = 0.0;
    for (k, v) in b.iter().enumerate() {
        if k != w.index() {
            s += v * v;
        }
    }
    s.sqrt()
}

/// Distance of a decisive quantity from the decision boundary: a quantity
/// judged nonzero counts as itself, one judged zero as `tol²/q`, so both
/// exceed `10·tol` exactly when the quantity is more than a factor 10 away
/// from `tol`. Capped at 1.
fn robustness(q: f64, judged_zero: bool, tol_zero: f64) -> f64 {
    let r = if judged_zero {
        if q == 0.0 {
            1.0
        } else {
            tol_zero * tol_zero / q
        }
    } else {
        q
    };
    r.min(1.0)
}

/// Quantities `(required_zero, required_nonzero)` for party `i` singled
/// out on axis `w`.
fn split(b: &[[f64; 3]; 4], i: usize, w: Axis) -> ([f64; 3], f64) {
    let mut z = [0.0; 3];
    let mut n = 0;
    for j in 0..4 {
        if j != i {
            z[n] = off_axis(&b[j], w);
            n += 1;
        }
    }
    (z, off_axis(&b[i], w))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum ReachCase {
    /// Exactly one party has a nonzero Bloch vector.
    TrivialTriple {
        party: usize,
    },
    /// The other three parties are aligned on `axis`, `party` is not.
    AlignedAxis {
        axis: Axis,
        party: usize,
    },
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReachabilityVerdict {
    pub reachable: bool,
    #[serde(flatten)]
    pub case: ReachCase,
    pub blochs: [[f64; 3]; 4],
    /// Distance from the decision boundary (see [`robustness`]).
    pub margin: f64,
    pub witness: Option<Protocol>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvertibilityVerdict {
    pub convertible: bool,
    pub axis: Option<Axis>,
    pub party: Option<usize>,
    pub blochs: [[f64; 3]; 4],
    pub margin: f64,
    pub witness: Option<Protocol>,
}

fn gram_state(seed: Seed, b: &[[f64; 3]; 4]) -> FactoredState {
    FactoredState {
        seed,
        locals: ProductOperator(b.iter().map(|v| sqrt_gram(*v)).collect()),
    }
}

fn inverse(op: &LocalOperator, party: usize) -> Result<LocalOperator> {
    op.inverse().ok_or(Error::SingularLocal(party))
}

fn others(n: usize, skip: usize, op: LocalOperator) -> Vec<LocalOperator> {
    (0..n)
        .map(|j| if j == skip { LocalOperator::identity() } else { op })
        .collect()
}

/// Four-outcome POVM `{√p_k h σ_k g⁻¹}` on `party`, `σ_k` on the others.
fn four_outcome(
    seed: Seed,
    source: &[[f64; 3]; 4],
    target: &[[f64; 3]; 4],
    party: usize,
    p: [f64; 4],
) -> Result<Protocol> {
    let src = gram_state(seed, source);
    let tgt = gram_state(seed, target);
    let h = *tgt.local(party);
    let gi = inverse(src.local(party), party)?;
    let mut round = Round::new(
        party,
        (0..4)
            .map(|k| (h * LocalOperator::pauli(k) * gi).scale_re(p[k].sqrt()))
            .collect(),
    );
    for k in 1..4 {
        round = round.with_correction(k, &others(4, party, LocalOperator::pauli(k)));
    }
    Ok(Protocol {
        source: src,
        target: tgt,
        rounds: vec![round],
    })
}

/// Two-outcome POVM `{√p h g⁻¹, √(1−p) h W g⁻¹}` on `party`, `W` on the
/// others after the second outcome.
fn two_outcome(
    seed: Seed,
    source: &[[f64; 3]; 4],
    target: &[[f64; 3]; 4],
    party: usize,
    w: Axis,
    p: f64,
) -> Result<Protocol> {
    let src = gram_state(seed, source);
    let tgt = gram_state(seed, target);
    let h = *tgt.local(party);
    let gi = inverse(src.local(party), party)?;
    let wp = w.pauli();
    let round = Round::new(
        party,
        vec![
            (h * gi).scale_re(p.sqrt()),
            (h * wp * gi).scale_re((1.0 - p).sqrt()),
        ],
    )
    .with_correction(1, &others(4, party, wp));
    Ok(Protocol {
        source: src,
        target: tgt,
        rounds: vec![round],
    })
}

/// Decide reachability of `h` (any generic factored state; the decision
/// depends only on its grams). The witness targets the gram form of `h`,
/// which is LU-equivalent to it.
pub fn reachable4(h: &FactoredState, tol: &Tol) -> Result<ReachabilityVerdict> {
    generic_params(h, tol)?;
    let b = blochs4(h);
    let norms: Vec<f64> = b.iter().map(norm3).collect();
    let nonzero: Vec<usize> = (0..4).filter(|&i| norms[i] > tol.zero).collect();

    // best satisfied candidate and least robust failure
    let mut best: Option<(f64, usize, Axis)> = None;
    let mut fail_margin: f64 = 1.0;
    for i in 0..4 {
        for w in Axis::ALL {
            let (zs, nz) = split(&b, i, w);
            let ok = zs.iter().all(|&q| q <= tol.zero) && nz > tol.zero;
            if ok {
                let r = zs
                    .iter()
                    .map(|&q| robustness(q, true, tol.zero))
                    .fold(robustness(nz, false, tol.zero), f64::min);
                if best.is_none_or(|(br, _, _)| r > br) {
                    best = Some((r, i, w));
                }
            } else {
                let mut r: f64 = 0.0;
                for &q in &zs {
                    if q > tol.zero {
                        r = r.max(robustness(q, false, tol.zero));
                    }
                }
                if nz <= tol.zero {
                    r = r.max(robustness(nz, true, tol.zero));
                }
                fail_margin = fail_margin.min(r);
            }
        }
    }

    let seed = h.seed;
    match best {
        None => Ok(ReachabilityVerdict {
            reachable: false,
            case: ReachCase::None,
            blochs: b,
            margin: fail_margin,
            witness: None,
        }),
        Some((margin, _, _)) if nonzero.len() == 1 => {
            let party = nonzero[0];
            let mut src = b;
            src[party] = [0.0; 3];
            let pr = four_outcome(seed, &src, &b, party, [0.25; 4])?;
            Ok(ReachabilityVerdict {
                reachable: true,
                case: ReachCase::TrivialTriple { party },
                blochs: b,
                margin,
                witness: Some(pr),
            })
        }
        Some((margin, i, w)) => {
            let mut src = b;
            let mut g = [0.0; 3];
            g[w.index()] = b[i][w.index()];
            src[i] = g;
            let pr = two_outcome(seed, &src, &b, i, w, 0.5)?;
            Ok(ReachabilityVerdict {
                reachable: true,
                case: ReachCase::AlignedAxis { axis: w, party: i },
                blochs: b,
                margin,
                witness: Some(pr),
            })
        }
    }
}

/// Decide convertibility of `g`; the witness starts from the gram form of
/// `g` and ends in an LU-inequivalent state.
pub fn convertible4(g: &FactoredState, tol: &Tol) -> Result<ConvertibilityVerdict> {
    generic_params(g, tol)?;
    let b = blochs4(g);
    let mut found: Option<(f64, usize, Axis)> = None;
    let mut fail_margin: f64 = 1.0;
    for i in 0..4 {
        for w in Axis::ALL {
            let (zs, _) = split(&b, i, w);
            if zs.iter().all(|&q| q <= tol.zero) {
                let r = zs
                    .iter()
                    .map(|&q| robustness(q, true, tol.zero))
                    .fold(1.0, f64::min);
                if found.is_none_or(|(br, _, _)| r > br) {
                    found = Some((r, i, w));
                }
            } else {
                let r = zs
                    .iter()
                    .filter(|&&q| q > tol.zero)
                    .map(|&q| robustness(q, false, tol.zero))
                    .fold(0.0, f64::max);
                fail_margin = fail_margin.min(r);
            }
        }
    }
    let Some((margin, i, w)) = found else {
        return Ok(ConvertibilityVerdict {
            convertible: false,
            axis: None,
            party: None,
            blochs: b,
            margin: fail_margin,
            witness: None,
        });
    };

    let seed = g.seed;
    let all_trivial = b.iter().all(|v| norm3(v) <= tol.zero);
    let (party, axis, pr) = if all_trivial {
        // E(H) = G on party 0 with η_k = g_k / h_k
        let h = [0.1, 0.2, 0.3];
        let e = [b[0][0] / h[0], b[0][1] / h[1], b[0][2] / h[2]];
        let p = [
            (1.0 + e[0] + e[1] + e[2]) / 4.0,
            (1.0 + e[0] - e[1] - e[2]) / 4.0,
            (1.0 - e[0] + e[1] - e[2]) / 4.0,
            (1.0 - e[0] - e[1] + e[2]) / 4.0,
        ];
        let mut tgt = b;
        tgt[0] = h;
        (0, None, four_outcome(seed, &b, &tgt, 0, p)?)
    } else {
        let gi = b[i];
        let gw = gi[w.index()];
        let len = norm3(&gi);
        let t = if len < 0.5 - BLOCH_MARGIN {
            0.5 - BLOCH_MARGIN
        } else {
            0.5 * (len + 0.5)
        };
        let room = (t * t - gw * gw).sqrt();
        let off = off_axis(&gi, w);
        let mut hv = [0.0; 3];
        hv[w.index()] = gw;
        let p = if off > 0.0 {
            // (2p − 1) h_off = g_off
            let s = off / room;
            for k in 0..3 {
                if k != w.index() {
                    hv[k] = gi[k] / s;
                }
            }
            0.5 * (1.0 + s)
        } else {
            hv[(w.index() + 1) % 3] = room;
            0.5
        };
        let mut tgt = b;
        tgt[i] = hv;
        (i, Some(w), two_outcome(seed, &b, &tgt, i, w, p)?)
    };
    Ok(ConvertibilityVerdict {
        convertible: true,
        axis,
        party: Some(party),
        blochs: b,
        margin,
        witness: Some(pr),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsolationVerdict {
    pub isolated: bool,
    pub reachable: bool,
    pub convertible: bool,
    pub margin: f64,
}

pub fn isolation4(fs: &FactoredState, tol: &Tol) -> Result<IsolationVerdict> {
    let r = reachable4(fs, tol)?;
    let c = convertible4(fs, tol)?;
    Ok(IsolationVerdict {
        isolated: !r.reachable && !c.convertible,
        reachable: r.reachable,
        convertible: c.convertible,
        margin: r.margin.min(c.margin),
    })
}

pub fn isolated4(fs: &FactoredState, tol: &Tol) -> Result<bool> {
    isolation4(fs, tol).map(|v| v.isolated)
}

/// In MES₄ iff not reachable from any LU-inequivalent state.
pub fn is_in_mes4(fs: &FactoredState, tol: &Tol) -> Result<bool> {
    reachable4(fs, tol).map(|v| !v.reachable)
}
