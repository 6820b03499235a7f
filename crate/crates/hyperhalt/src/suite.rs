//! The invariant suite behind `hyperhalt validate`.

use hyperhalt_core::coins::{
    classical_merchant_detect, classical_merchant_weigh, merchant_config, quadratic_form, CoinSequence,
};
use hyperhalt_core::detector::min_time_bound;
use hyperhalt_core::halting::encode_halting_as_coins;
use hyperhalt_core::scattering::{
    cnot_check, gaussian_det_identity, m_function, resonance_smatrix, s_matrix, BetaChannel, CMatrix, DotState,
    InnerDot, MValue,
};
use hyperhalt_core::walks::{log_rn_density, trial_rng};
use hyperhalt_core::{
    coins_to_halting_search, corpus, device_clicks, in_indistinguishable_set, indistinguishable_bound, rn_density,
    tm_run, DeviceConfig, Mode, RunStatus, SearchOutcome, Sequential, StackSelector, TestVector, WalkSampler,
    WalkSchedule,
};
use hyperhalt_core::Complex64;
use rand::Rng;

use crate::config::RunConfig;
use crate::exec::Parallel;
use crate::experiments;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &'static str, failures: Vec<String>, checked: usize) -> Self {
        let passed = failures.is_empty();
        let detail = if passed {
            format!("{checked} cases")
        } else {
            format!("{} of {checked} failed; first: {}", failures.len(), failures[0])
        };
        Check { name, passed, detail }
    }
}

const SEED: u64 = 0x5eed;

fn merchant() -> Check {
    let mut failures = Vec::new();
    for n in 0..=10usize {
        let stack = (n > 0).then_some(n);
        let w = classical_merchant_weigh(&merchant_config(stack).unwrap()).unwrap();
        let expected = 55.0 + n as f64 / 100.0;
        if (w - expected).abs() >= 1e-12 || classical_merchant_detect(w).unwrap() != stack {
            failures.push(format!("stack {n}: weight {w}"));
        }
    }
    Check::new("merchant weigh/detect round trip", failures, 11)
}

fn coins() -> Check {
    let s = WalkSampler::new(WalkSchedule::Dyadic, Mode::Complex, 64, SEED).unwrap();
    let all_true = CoinSequence::all_true(64).unwrap();
    let false_seq = CoinSequence::false_at(64, 9, 3).unwrap();
    let mut failures = Vec::new();
    for trial in 0..200 {
        let x = s.sample(trial);
        let norm = x.norm_sq();
        if quadratic_form(&all_true, &x, trial as f64).unwrap() != norm {
            failures.push(format!("all-true form at trial {trial}"));
        }
        if quadratic_form(&false_seq, &x, 0.0).unwrap() != norm {
            failures.push(format!("t = 0 form at trial {trial}"));
        }
        let (a, b) = (quadratic_form(&false_seq, &x, 3.0).unwrap(), quadratic_form(&false_seq, &x, 4.0).unwrap());
        if !(b > a) {
            failures.push(format!("not increasing at trial {trial}"));
        }
    }
    Check::new("quadratic form invariants", failures, 200)
}

fn halting() -> Check {
    let mut failures = Vec::new();
    let mut n = 0;
    for m in corpus() {
        for budget in [1u64, 5, 6, 37, 300] {
            let input = 2;
            let trace = tm_run(&m, input, budget).unwrap();
            let found = coins_to_halting_search(encode_halting_as_coins(&m, input, 4).unwrap(), budget).unwrap();
            let expected = match trace.status {
                RunStatus::HaltedAt(s) => SearchOutcome::FoundFalseAt(s),
                RunStatus::StillRunning => SearchOutcome::NoneWithinBudget,
            };
            n += 1;
            if found != expected || tm_run(&m, input, budget).unwrap() != trace {
                failures.push(format!("{} budget {budget}", m.name()));
            }
        }
    }
    Check::new("halting encode/search round trip", failures, n)
}

fn walks() -> Check {
    let s = WalkSampler::new(WalkSchedule::Dyadic, Mode::Real, 32, SEED).unwrap();
    let mut failures = Vec::new();
    for trial in 0..100 {
        let x = s.sample(trial);
        if s.sample(trial) != x {
            failures.push(format!("resample differs at trial {trial}"));
        }
        let d = rn_density(&x, &WalkSchedule::Dyadic).unwrap();
        if !(d > 0.0) || rn_density(&x, &WalkSchedule::Unperturbed).unwrap() != 1.0 {
            failures.push(format!("density at trial {trial}"));
        }
        let whole = log_rn_density(&x, &WalkSchedule::Dyadic).unwrap();
        let head = TestVector::new(Mode::Real, x.entries()[..16].to_vec()).unwrap();
        let base = x.entries()[15];
        let tail = TestVector::new(Mode::Real, x.entries()[16..].iter().map(|z| z - base).collect()).unwrap();
        let tail_sched = WalkSchedule::table((17..=32).map(|m| WalkSchedule::Dyadic.delta(m)).collect()).unwrap();
        let split = log_rn_density(&head, &WalkSchedule::Dyadic).unwrap() + log_rn_density(&tail, &tail_sched).unwrap();
        if (whole - split).abs() > 1e-10 * (1.0 + whole.abs()) {
            failures.push(format!("log density not additive at trial {trial}"));
        }
    }
    Check::new("walk sampling and density", failures, 100)
}

fn detector() -> Check {
    let cfg = DeviceConfig { len: 64, ..DeviceConfig::default() };
    let s = cfg.sampler(SEED).unwrap();
    let all_true = CoinSequence::all_true(64).unwrap();
    let false_seq = CoinSequence::false_at(64, 1, 1).unwrap();
    let mut failures = Vec::new();
    for trial in 0..2000 {
        let x = s.sample(trial);
        let t = (trial % 40) as f64;
        if device_clicks(&all_true, &x, 1e4, &cfg).unwrap() {
            failures.push(format!("all-true click at trial {trial}"));
        }
        let click = device_clicks(&false_seq, &x, t, &cfg).unwrap();
        let inside =
            in_indistinguishable_set(&x, cfg.epsilon(), t, cfg.gamma(), StackSelector::Fixed(1), &cfg.schedule).unwrap();
        if click == inside {
            failures.push(format!("click/membership disagree at trial {trial}"));
        }
    }
    let pd = WalkSchedule::Dyadic.partial_product(256);
    for e in [2, 6, 10] {
        for h in [2, 4, 8] {
            for g in [1, 3, 5] {
                let (eps, eta, gamma) = (0.5f64.powi(e), 0.5f64.powi(h), 0.5f64.powi(g));
                let tb = min_time_bound(eps, eta, gamma, pd).unwrap();
                match indistinguishable_bound(eps, tb.time, gamma, pd).value() {
                    Some(v) if v <= eta => {}
                    other => failures.push(format!("min_time_bound({eps}, {eta}, {gamma}) gives {other:?}")),
                }
            }
        }
    }
    Check::new("device soundness and time bound", failures, 2027)
}

fn scattering() -> Check {
    let mut rng = trial_rng(SEED, 0);
    let mut failures = Vec::new();
    let mut checked = 0;
    while checked < 200 {
        let levels = rng.random_range(1..=8);
        let mut acc = 0.0;
        let alphas: Vec<f64> = (0..levels)
            .map(|_| {
                acc += rng.random_range(0.05..2.0);
                acc
            })
            .collect();
        let e = (0..levels).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
        let Ok(dot) = InnerDot::new(alphas, e) else { continue };
        let d = rng.random_range(1..=16);
        let beta = (0..d).map(|_| Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0))).collect();
        let ch = BetaChannel::new(beta).unwrap();
        let p: f64 = rng.random_range(0.05..4.0);
        if !matches!(m_function(&dot, Complex64::new(p * p, 0.0), true), MValue::Finite(_)) {
            continue;
        }
        checked += 1;
        let defect = s_matrix(&dot, &ch, p).unwrap().unitarity_defect();
        if !(defect < 1e-9) {
            failures.push(format!("unitarity defect {defect:e}"));
        }
    }
    let dot = InnerDot::ladder(8);
    let ch = BetaChannel::real(&[1.0, -0.5, 2.0]).unwrap();
    let vacant = resonance_smatrix(&dot, &ch, DotState::Vacant, 1e6).unwrap();
    if vacant.limit_defect() != 0.0 {
        failures.push("vacant resonance is not the identity".into());
    }
    let occupied = resonance_smatrix(&dot, &ch, DotState::Occupied, 1e6).unwrap();
    if !(occupied.limit_defect() < 1e-3) {
        failures.push(format!("occupied resonance off its limit by {:e}", occupied.limit_defect()));
    }
    let sq = &occupied.limit * &occupied.limit;
    if hyperhalt_core::scattering::frobenius_distance(&sq, &CMatrix::identity(6, 6)) > 1e-12 {
        failures.push("limit matrix is not a reflection".into());
    }
    let report = cnot_check();
    if !report.truth_table_ok || report.square_defect != 0.0 || report.schmidt_rank != 2 {
        failures.push(format!("controlled NOT report {report:?}"));
    }
    Check::new("scattering matrix identities", failures, 203)
}

fn determinant() -> Check {
    let mut rng = trial_rng(SEED, 1);
    let mut failures = Vec::new();
    for _ in 0..100 {
        let n = rng.random_range(1..=32);
        let b: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let c = rng.random_range(0.0..20.0);
        match gaussian_det_identity(&b, c) {
            Ok(d) if d.defect < 1e-10 => {}
            other => failures.push(format!("n = {n}, c = {c}: {other:?}")),
        }
    }
    Check::new("gaussian determinant identity", failures, 100)
}

fn reproducibility() -> Check {
    let cfg = RunConfig { trials: 2000, len: 64, seed: Some(SEED), ..RunConfig::default() };
    let seq = experiments::device(&cfg, &Sequential).map(|r| r.numeric());
    let mut failures = Vec::new();
    for workers in [2, 5] {
        let par = experiments::device(&cfg, &Parallel::new(workers).expect("thread pool")).map(|r| r.numeric());
        match (&seq, &par) {
            (Ok(a), Ok(b)) if a == b => {}
            _ => failures.push(format!("{workers} workers disagree with sequential")),
        }
    }
    Check::new("worker-count independence", failures, 2)
}

pub fn run_suite() -> Vec<Check> {
    vec![merchant(), coins(), halting(), walks(), detector(), scattering(), determinant(), reproducibility()]
}
