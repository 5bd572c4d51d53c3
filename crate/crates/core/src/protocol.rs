//! LOCC protocols: rounds of local POVMs with outcome-conditioned unitary
//! corrections, and an exhaustive branch simulator.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qla::{norm3, LocalOperator, StateVector, C64};
use crate::states::{gram, FactoredState};
use crate::Tol;

/// Branches whose probability falls below this are dropped.
pub const PRUNE_PROBABILITY: f64 = 1e-14;

/// A local measurement on one party.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Povm {
    pub party: usize,
    pub elements: Vec<LocalOperator>,
}

/// `‖Σ M_k†M_k − 𝟙‖_max`.
pub fn completeness_residual(elements: &[LocalOperator]) -> f64 {
    let sum = elements
        .iter()
        .fold(LocalOperator::zero(), |acc, m| acc + m.gram());
    sum.max_abs_diff(&LocalOperator::identity())
}

/// Completeness check; returns `(complete, residual)`.
pub fn validate_povm(p: &Povm, tol: &Tol) -> (bool, f64) {
    let r = completeness_residual(&p.elements);
    (r < tol.eq, r)
}

/// One measurement round. `corrections[k]` lists one unitary per party
/// other than `party`, in increasing party order; a missing outcome means
/// nobody acts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Round {
    pub party: usize,
    pub elements: Vec<LocalOperator>,
    #[serde(default)]
    pub corrections: BTreeMap<usize, Vec<LocalOperator>>,
}

impl Round {
    pub fn new(party: usize, elements: Vec<LocalOperator>) -> Self {
        Round {
            party,
            elements,
            corrections: BTreeMap::new(),
        }
    }

    /// Attach a correction for `outcome`, given as a full per-party list;
    /// the entry for the measuring party is dropped.
    pub fn with_correction(mut self, outcome: usize, full: &[LocalOperator]) -> Self {
        let ops = full
            .iter()
            .enumerate()
            .filter(|(p, _)| *p != self.party)
            .map(|(_, o)| *o)
            .collect();
        self.corrections.insert(outcome, ops);
        self
    }

    pub fn povm(&self) -> Povm {
        Povm {
            party: self.party,
            elements: self.elements.clone(),
        }
    }

    /// Corrections for `outcome` expanded to a per-party list (identity on
    /// the measuring party).
    pub fn correction_for(&self, outcome: usize, n: usize) -> Option<Vec<LocalOperator>> {
        let ops = self.corrections.get(&outcome)?;
        let mut full = Vec::with_capacity(n);
        let mut it = ops.iter();
        for p in 0..n {
            if p == self.party {
                full.push(LocalOperator::identity());
            } else {
                full.push(*it.next().unwrap_or(&LocalOperator::identity()));
            }
        }
        Some(full)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Protocol {
    pub source: FactoredState,
    pub target: FactoredState,
    pub rounds: Vec<Round>,
}

impl Protocol {
    /// Run `self`, then `next`. The target of `self` should equal the
    /// source of `next` up to rounding; simulation starts from `self.source`.
    pub fn then(mut self, next: Protocol) -> Protocol {
        self.rounds.extend(next.rounds);
        self.target = next.target;
        self
    }

    /// Check every round for completeness and unitary corrections.
    pub fn validate(&self, tol: &Tol) -> Result<()> {
        let n = self.source.n_parties();
        if self.target.n_parties() != n {
            return Err(Error::PartyCount {
                expected: n,
                got: self.target.n_parties(),
            });
        }
        for round in &self.rounds {
            if round.party >= n {
                return Err(Error::WrongShape(format!(
                    "round acts on party {} of {n}",
                    round.party
                )));
            }
            let r = completeness_residual(&round.elements);
            if r >= tol.eq {
                return Err(Error::IncompletePovm(r));
            }
            for (&outcome, ops) in &round.corrections {
                if outcome >= round.elements.len() || ops.len() != n - 1 {
                    return Err(Error::WrongShape(format!(
                        "correction for outcome {outcome} has {} operators",
                        ops.len()
                    )));
                }
                for (i, op) in ops.iter().enumerate() {
                    if !op.is_unitary(tol.eq) {
                        let party = if i < round.party { i } else { i + 1 };
                        return Err(Error::NonUnitaryCorrection { outcome, party });
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchReport {
    pub outcomes: Vec<usize>,
    pub probability: f64,
    pub fidelity: f64,
    pub state: StateVector,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub deterministic: bool,
    pub branches: Vec<BranchReport>,
    pub probability_sum: f64,
    pub pruned_probability: f64,
    pub min_fidelity: f64,
    /// Max-abs entry of `Σ_b p_b |φ_b⟩⟨φ_b| − |T⟩⟨T|` (normalized states).
    pub ensemble_deviation: f64,
    pub max_completeness_residual: f64,
}

/// Expand the full branch tree of `pr`.
pub fn simulate(pr: &Protocol, tol: &Tol) -> Result<SimulationReport> {
    pr.validate(tol)?;
    let n = pr.source.n_parties();
    let start = pr.source.realize(tol)?.normalized();
    let target = pr.target.realize(tol)?.normalized();

    let mut branches: Vec<(Vec<usize>, f64, StateVector)> = vec![(Vec::new(), 1.0, start)];
    let mut pruned = 0.0;
    let mut max_res: f64 = 0.0;
    for round in &pr.rounds {
        max_res = max_res.max(completeness_residual(&round.elements));
        let mut next = Vec::with_capacity(branches.len() * round.elements.len());
        for (outs, prob, psi) in &branches {
            for (k, m) in round.elements.iter().enumerate() {
                let phi = psi.apply_local(round.party, m);
                // psi is normalized, so this is the conditional probability
                let q = phi.norm_sqr();
                let p = prob * q;
                if p < PRUNE_PROBABILITY {
                    pruned += p;
                    continue;
                }
                let mut phi = phi.normalized();
                if let Some(corr) = round.correction_for(k, n) {
                    phi = phi.apply_product(&corr);
                }
                let mut o = outs.clone();
                o.push(k);
                next.push((o, p, phi));
            }
        }
        branches = next;
    }

    let mut reports = Vec::with_capacity(branches.len());
    let mut psum = 0.0;
    let mut min_fid: f64 = 1.0;
    let dim = target.dim();
    let mut ens = vec![C64::new(0.0, 0.0); dim * dim];
    for (outcomes, probability, state) in branches {
        let fidelity = state.overlap(&target);
        psum += probability;
        min_fid = min_fid.min(fidelity);
        let a = state.amplitudes();
        for i in 0..dim {
            for j in 0..dim {
                ens[i * dim + j] += a[i] * a[j].conj() * probability;
            }
        }
        reports.push(BranchReport {
            outcomes,
            probability,
            fidelity,
            state,
        });
    }
    let t = target.amplitudes();
    let mut ens_dev: f64 = 0.0;
    for i in 0..dim {
        for j in 0..dim {
            ens_dev = ens_dev.max((ens[i * dim + j] - t[i] * t[j].conj()).norm());
        }
    }
    let deterministic = !reports.is_empty()
        && reports.iter().all(|b| b.fidelity > 1.0 - tol.eq)
        && (psum - 1.0).abs() <= tol.eq;
    Ok(SimulationReport {
        deterministic,
        branches: reports,
        probability_sum: psum,
        pruned_probability: pruned,
        min_fidelity: min_fid,
        ensemble_deviation: ens_dev,
        max_completeness_residual: max_res,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotoneReport {
    pub source_norms: Vec<f64>,
    pub target_norms: Vec<f64>,
    /// Parties whose `|g|` decreased from source to target.
    pub violations: Vec<usize>,
    pub ok: bool,
}

/// Per-party `|g|` of the trace-one grams must not decrease from source to
/// target.
pub fn monotone_audit(pr: &Protocol, tol: &Tol) -> MonotoneReport {
    let s: Vec<f64> = gram(&pr.source).iter().map(|p| norm3(&p.g)).collect();
    let t: Vec<f64> = gram(&pr.target).iter().map(|p| norm3(&p.g)).collect();
    let violations: Vec<usize> = (0..s.len()).filter(|&i| t[i] < s[i] - tol.eq).collect();
    MonotoneReport {
        ok: violations.is_empty(),
        source_norms: s,
        target_norms: t,
        violations,
    }
}
