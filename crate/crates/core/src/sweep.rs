//! Batch runs of one decision procedure over sampled instances.
//!
//! Instances are evaluated in parallel and folded in index order, so a
//! report depends only on `(verb, class, count, seed, tol)`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::four_qubit::{isolation4, reachable4, standard_form4, ReachCase};
use crate::protocol::{monotone_audit, simulate};
use crate::sampling::{sample_one, SampleClass};
use crate::states::FactoredState;
use crate::synth::all_protocols;
use crate::three_qubit::{is_in_mes3, standard_form3};
use crate::Tol;

/// At most this many failures are listed individually.
pub const MAX_LISTED_FAILURES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepVerb {
    Mes3,
    Mes4,
    Reachable4,
    Isolated4,
    StandardForm,
    /// Synthesize every available protocol and simulate it.
    Simulate,
}

impl SweepVerb {
    pub const ALL: [SweepVerb; 6] = [
        SweepVerb::Mes3,
        SweepVerb::Mes4,
        SweepVerb::Reachable4,
        SweepVerb::Isolated4,
        SweepVerb::StandardForm,
        SweepVerb::Simulate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SweepVerb::Mes3 => "mes3",
            SweepVerb::Mes4 => "mes4",
            SweepVerb::Reachable4 => "reachable4",
            SweepVerb::Isolated4 => "isolated4",
            SweepVerb::StandardForm => "standard-form",
            SweepVerb::Simulate => "simulate",
        }
    }
}

impl fmt::Display for SweepVerb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepVerb {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SweepVerb::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::BadSpec(format!("unknown sweep verb {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub verb: SweepVerb,
    pub class: SampleClass,
    pub count: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub index: u64,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stats {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub spec: SweepSpec,
    /// Outcome label → number of instances.
    pub histogram: BTreeMap<String, usize>,
    /// Per-verb robustness: decision margin, or for `simulate` the largest
    /// ensemble deviation across protocols.
    pub margin: Option<Stats>,
    pub failure_count: usize,
    pub failures: Vec<Failure>,
}

impl SweepReport {
    pub fn count_of(&self, label: &str) -> usize {
        self.histogram.get(label).copied().unwrap_or(0)
    }

    pub fn fraction(&self, label: &str) -> f64 {
        self.count_of(label) as f64 / self.spec.count as f64
    }
}

struct Instance {
    label: String,
    margin: Option<f64>,
    failure: Option<String>,
}

impl Instance {
    fn ok(label: impl Into<String>, margin: f64) -> Self {
        Instance {
            label: label.into(),
            margin: Some(margin),
            failure: None,
        }
    }

    fn failed(label: &str, message: String) -> Self {
        Instance {
            label: label.into(),
            margin: None,
            failure: Some(message),
        }
    }
}

fn yes_no(b: bool, yes: &str, no: &str) -> String {
    if b { yes } else { no }.to_string()
}

fn run_simulate(fs: &FactoredState, tol: &Tol) -> Result<Instance> {
    let protocols = all_protocols(fs, tol)?;
    if protocols.is_empty() {
        return Ok(Instance::ok("no_protocol", 0.0));
    }
    let mut worst: f64 = 0.0;
    for s in &protocols {
        let rep = simulate(&s.protocol, tol)?;
        let audit = monotone_audit(&s.protocol, tol);
        worst = worst.max(rep.ensemble_deviation);
        if !rep.deterministic || !audit.ok {
            return Ok(Instance::failed(
                "failed",
                format!(
                    "{:?}: deterministic={} min_fidelity={:.3e} probability_sum={:.17} monotone={}",
                    s.kind, rep.deterministic, rep.min_fidelity, rep.probability_sum, audit.ok
                ),
            ));
        }
    }
    Ok(Instance::ok("deterministic", worst))
}

fn run_one(verb: SweepVerb, fs: &FactoredState, tol: &Tol) -> Result<Instance> {
    Ok(match verb {
        SweepVerb::Mes3 => {
            let v = is_in_mes3(fs, tol)?;
            Instance::ok(yes_no(v.in_mes, "in_mes", "not_in_mes"), v.z_margin)
        }
        SweepVerb::Mes4 | SweepVerb::Reachable4 => {
            let v = reachable4(fs, tol)?;
            let label = match (verb, &v.case) {
                (SweepVerb::Mes4, _) => yes_no(!v.reachable, "in_mes", "not_in_mes"),
                (_, ReachCase::TrivialTriple { .. }) => "trivial_triple".into(),
                (_, ReachCase::AlignedAxis { .. }) => "aligned_axis".into(),
                (_, ReachCase::None) => "unreachable".into(),
            };
            Instance::ok(label, v.margin)
        }
        SweepVerb::Isolated4 => {
            let v = isolation4(fs, tol)?;
            let label = match (v.reachable, v.convertible) {
                (false, false) => "isolated",
                (true, false) => "reachable",
                (false, true) => "convertible",
                (true, true) => "reachable_and_convertible",
            };
            Instance::ok(label, v.margin)
        }
        SweepVerb::StandardForm => match fs.n_parties() {
            3 => {
                let label = match standard_form3(fs, tol)? {
                    crate::three_qubit::StandardForm3::Ghz(_) => "ghz",
                    crate::three_qubit::StandardForm3::W(_) => "w",
                };
                Instance::ok(label, 0.0)
            }
            _ => {
                let a = standard_form4(fs, tol)?;
                let b = standard_form4(&a.to_factored(), tol)?;
                let d = a.distance(&b);
                if d < tol.eq {
                    Instance::ok("generic", d)
                } else {
                    Instance::failed("unstable", format!("standard form moved by {d:.3e}"))
                }
            }
        },
        SweepVerb::Simulate => run_simulate(fs, tol)?,
    })
}

pub fn run_sweep(spec: &SweepSpec, tol: &Tol) -> Result<SweepReport> {
    if spec.count == 0 {
        return Err(Error::BadSpec("count must be at least 1".into()));
    }
    let results: Vec<Instance> = (0..spec.count as u64)
        .into_par_iter()
        .map(|i| {
            let fs = sample_one(spec.class, spec.seed, i);
            run_one(spec.verb, &fs, tol).unwrap_or_else(|e| Instance::failed("error", e.to_string()))
        })
        .collect();

    let mut histogram = BTreeMap::new();
    let mut failures = Vec::new();
    let mut failure_count = 0;
    let mut margins = Vec::new();
    for (i, r) in results.into_iter().enumerate() {
        *histogram.entry(r.label).or_insert(0) += 1;
        margins.extend(r.margin);
        if let Some(message) = r.failure {
            failure_count += 1;
            if failures.len() < MAX_LISTED_FAILURES {
                failures.push(Failure {
                    index: i as u64,
                    message,
                });
            }
        }
    }
    let margin = (!margins.is_empty()).then(|| Stats {
        min: margins.iter().copied().fold(f64::INFINITY, f64::min),
        max: margins.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        mean: margins.iter().sum::<f64>() / margins.len() as f64,
    });
    Ok(SweepReport {
        spec: spec.clone(),
        histogram,
        margin,
        failure_count,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(verb: SweepVerb, class: SampleClass, count: usize) -> SweepSpec {
        SweepSpec {
            verb,
            class,
            count,
            seed: 42,
        }
    }

    #[test]
    fn reports_are_reproducible() {
        let t = Tol::default();
        let s = spec(SweepVerb::Isolated4, SampleClass::FourGeneric, 50);
        let a = run_sweep(&s, &t).unwrap();
        assert_eq!(
            crate::json::to_string(&a).unwrap(),
            crate::json::to_string(&run_sweep(&s, &t).unwrap()).unwrap()
        );
        assert_eq!(a.count_of("isolated"), 50);
    }

    #[test]
    fn shaped_classes_land_in_their_case() {
        let t = Tol::default();
        let r = run_sweep(
            &spec(SweepVerb::Reachable4, SampleClass::FourReachAligned, 30),
            &t,
        )
        .unwrap();
        assert_eq!(r.count_of("aligned_axis"), 30);
        let r = run_sweep(&spec(SweepVerb::Reachable4, SampleClass::FourReachSingle, 30), &t).unwrap();
        assert_eq!(r.count_of("trivial_triple"), 30);
        let r = run_sweep(&spec(SweepVerb::Mes3, SampleClass::ThreeGhzMes, 30), &t).unwrap();
        assert_eq!(r.count_of("in_mes"), 30);
        let r = run_sweep(&spec(SweepVerb::Mes3, SampleClass::ThreeWX0Pos, 30), &t).unwrap();
        assert_eq!(r.count_of("not_in_mes"), 30);
    }

    #[test]
    fn errors_are_counted_not_raised() {
        let t = Tol::default();
        let r = run_sweep(&spec(SweepVerb::Mes3, SampleClass::FourGeneric, 3), &t).unwrap();
        assert_eq!(r.count_of("error"), 3);
        assert_eq!(r.failure_count, 3);
        assert!(run_sweep(&spec(SweepVerb::Mes3, SampleClass::ThreeW, 0), &t).is_err());
    }
}
