use proptest::prelude::*;

use meskit::four_qubit::{convertible4, eta_map, reachable4, relabel_group, standard_form4};
use meskit::json;
use meskit::protocol::{monotone_audit, simulate, Protocol};
use meskit::qla::{c, LocalOperator, PauliForm, StateVector, C64};
use meskit::sampling::{haar_unitary, rng_for, sample, sample_one, SampleClass};
use meskit::states::{FactoredState, ProductOperator, Seed, SeedParams4};
use meskit::sweep::{run_sweep, SweepSpec, SweepVerb};
use meskit::synth::{all_protocols, synthesize};
use meskit::three_qubit::factor::hyperdeterminant;
use meskit::three_qubit::ghz::{ghz_reduce, GhzStandardForm};
use meskit::three_qubit::{is_in_mes3, synth_ghz_trivialparty_protocol};
use meskit::Tol;

fn tol() -> Tol {
    Tol::default()
}

fn simplex() -> impl Strategy<Value = [f64; 4]> {
    prop::array::uniform4(0.0f64..1.0).prop_filter_map("nonzero", |w| {
        let s: f64 = w.iter().sum();
        (s > 1e-6).then(|| w.map(|x| x / s))
    })
}

fn complex() -> impl Strategy<Value = C64> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(a, b)| c(a, b))
}

/// Expanded Cayley hyperdeterminant of `a_{ijk}`, party 0 most significant.
fn cayley(v: &StateVector) -> C64 {
    let a = |i: usize, j: usize, k: usize| v.amplitudes()[4 * i + 2 * j + k];
    let sq = |z: C64| z * z;
    let d1 = sq(a(0, 0, 0)) * sq(a(1, 1, 1))
        + sq(a(0, 0, 1)) * sq(a(1, 1, 0))
        + sq(a(0, 1, 0)) * sq(a(1, 0, 1))
        + sq(a(1, 0, 0)) * sq(a(0, 1, 1));
    let d2 = a(0, 0, 0) * a(1, 1, 1) * a(0, 1, 1) * a(1, 0, 0)
        + a(0, 0, 0) * a(1, 1, 1) * a(1, 0, 1) * a(0, 1, 0)
        + a(0, 0, 0) * a(1, 1, 1) * a(1, 1, 0) * a(0, 0, 1)
        + a(0, 1, 1) * a(1, 0, 0) * a(1, 0, 1) * a(0, 1, 0)
        + a(0, 1, 1) * a(1, 0, 0) * a(1, 1, 0) * a(0, 0, 1)
        + a(1, 0, 1) * a(0, 1, 0) * a(1, 1, 0) * a(0, 0, 1);
    let d3 =
        a(0, 0, 0) * a(1, 1, 0) * a(1, 0, 1) * a(0, 1, 1) + a(1, 1, 1) * a(0, 0, 1) * a(0, 1, 0) * a(1, 0, 0);
    d1 - d2 * 2.0 + d3 * 4.0
}

fn generic_seed(p: [C64; 4]) -> Option<SeedParams4> {
    let s = SeedParams4::from_array(p);
    (s.genericity_margin() > 1e-2).then_some(s)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn hyperdeterminant_matches_expansion(amps in prop::collection::vec(complex(), 8)) {
        prop_assume!(amps.iter().any(|z| z.norm() > 1e-3));
        let v = StateVector::new(amps).unwrap();
        let d = cayley(&v);
        prop_assert!((hyperdeterminant(&v).norm() - d.norm()).abs() < 1e-12);
    }

    #[test]
    fn eta_map_matches_pauli_twirl(
        c0 in -2.0f64..2.0,
        g in prop::array::uniform3(-2.0f64..2.0),
        p in simplex(),
    ) {
        let h = PauliForm::new(c0, g);
        let hm = h.to_operator();
        let mut direct = LocalOperator::zero();
        for (k, pk) in p.iter().enumerate() {
            let s = LocalOperator::pauli(k);
            direct = direct + (s * hm * s).scale(c(*pk, 0.0));
        }
        prop_assert!(direct.max_abs_diff(&eta_map(&h, &p).unwrap().to_operator()) < 1e-12);
    }

    #[test]
    fn standard_form4_ignores_relabelling_and_lu(
        p in prop::array::uniform4(complex()),
        idx in 0usize..4096,
        k in 0usize..4,
        inst in 0u64..1000,
    ) {
        let Some(seed) = generic_seed(p) else { return Ok(()); };
        let mut fs = sample_one(SampleClass::FourGeneric, 17, inst);
        fs.seed = Seed::Generic(seed);
        let group = relabel_group();
        let r = &group[idx % group.len()];
        let mut rng = rng_for(inst, 1);
        let u = ProductOperator((0..4).map(|_| haar_unitary(&mut rng)).collect());
        let sigma = ProductOperator::uniform(LocalOperator::pauli(k), 4);
        let image = FactoredState::new(
            Seed::Generic(SeedParams4::from_array(r.apply(&seed.as_array()))),
            u.compose(&fs.locals).compose(&sigma).compose(&r.unitary.adjoint()).0,
        ).unwrap();
        // same physical state up to local unitaries and phase
        let a = fs.realize(&tol()).unwrap();
        let b = u.adjoint().apply(&image.realize(&tol()).unwrap());
        prop_assert!(a.overlap(&b) > 1.0 - 1e-12);
        let fa = standard_form4(&fs, &tol()).unwrap();
        let fb = standard_form4(&image, &tol()).unwrap();
        prop_assert!(fa.distance(&fb) < 1e-9, "distance {}", fa.distance(&fb));
    }

    #[test]
    fn ghz_invariants_survive_lu(inst in 0u64..10_000) {
        let t = tol();
        let fs = sample_one(SampleClass::ThreeGhzRandomZ, 3, inst);
        let mut rng = rng_for(inst, 2);
        let u = ProductOperator((0..3).map(|_| haar_unitary(&mut rng)).collect());
        let a = ghz_reduce(&fs, &t).unwrap().form;
        let b = ghz_reduce(&fs.left_multiply(&u), &t).unwrap().form;
        prop_assert!((a.abs_z() - b.abs_z()).abs() < 1e-9);
        prop_assert!(((2.0 * a.alpha()).cos() - (2.0 * b.alpha()).cos()).abs() < 1e-9);
        for i in 0..3 {
            prop_assert!((a.gx[i].abs() - b.gx[i].abs()).abs() < 1e-9);
        }
    }

    #[test]
    fn synthesized_protocols_are_deterministic(inst in 0u64..100_000) {
        let t = tol();
        let fs = sample_one(SampleClass::Protocols, 9, inst);
        for s in all_protocols(&fs, &t).unwrap() {
            let rep = simulate(&s.protocol, &t).unwrap();
            prop_assert!(rep.deterministic);
            prop_assert!((rep.probability_sum - 1.0).abs() < 1e-9);
            prop_assert!(rep.ensemble_deviation < 1e-9);
            prop_assert!(monotone_audit(&s.protocol, &t).ok);
        }
    }

    #[test]
    fn json_roundtrip_is_exact(inst in 0u64..10_000, class in 0usize..SampleClass::ALL.len()) {
        let fs = sample_one(SampleClass::ALL[class], 5, inst);
        let text = json::to_string(&fs).unwrap();
        let back: FactoredState = json::from_str(&text).unwrap();
        prop_assert_eq!(&back, &fs);
        prop_assert_eq!(json::to_string(&back).unwrap(), text);
    }
}

#[test]
fn shaped_samples_meet_their_decisions() {
    let t = tol();
    for fs in sample(SampleClass::FourConvertShape, 100, 1).unwrap() {
        assert!(convertible4(&fs, &t).unwrap().convertible);
    }
    for fs in sample(SampleClass::ThreeWX0Zero, 100, 1).unwrap() {
        assert!(is_in_mes3(&fs, &t).unwrap().in_mes);
    }
    for fs in sample(SampleClass::FourGeneric, 100, 1).unwrap() {
        assert!(!reachable4(&fs, &t).unwrap().reachable);
    }
}

fn trivial_party_protocol() -> Protocol {
    let form = GhzStandardForm::new([0.2, 0.0, -0.3], c(1.0, 0.0));
    synth_ghz_trivialparty_protocol(&form, &tol()).unwrap()
}

#[test]
fn reversed_protocol_fails_monotone_audit() {
    let pr = trivial_party_protocol();
    assert!(monotone_audit(&pr, &tol()).ok);
    let rev = Protocol {
        source: pr.target.clone(),
        target: pr.source.clone(),
        rounds: vec![],
    };
    let audit = monotone_audit(&rev, &tol());
    assert!(!audit.ok);
    assert_eq!(audit.violations, vec![0, 2]);
}

#[test]
fn wrong_correction_breaks_determinism() {
    let mut pr = trivial_party_protocol();
    assert!(simulate(&pr, &tol()).unwrap().deterministic);
    for round in &mut pr.rounds {
        for ops in round.corrections.values_mut() {
            for op in ops.iter_mut() {
                if op.max_abs_diff(&LocalOperator::z()) < 1e-12 {
                    *op = LocalOperator::x();
                }
            }
        }
    }
    let rep = simulate(&pr, &tol()).unwrap();
    assert!(!rep.deterministic);
    assert!(rep.min_fidelity < 0.99);
}

#[test]
fn sweep_is_independent_of_thread_count() {
    let spec = SweepSpec {
        verb: SweepVerb::Simulate,
        class: SampleClass::Protocols,
        count: 60,
        seed: 11,
    };
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let one = pool.install(|| run_sweep(&spec, &tol()).unwrap());
    let many = run_sweep(&spec, &tol()).unwrap();
    assert_eq!(json::to_string(&one).unwrap(), json::to_string(&many).unwrap());
    assert_eq!(many.count_of("deterministic"), 60);
}

#[test]
fn mes3_has_no_synthesized_predecessor() {
    let t = tol();
    for fs in sample(SampleClass::ThreeGhzMes, 50, 4).unwrap() {
        assert!(is_in_mes3(&fs, &t).unwrap().in_mes);
        assert!(synthesize(&fs, &t).unwrap().is_none());
    }
}
