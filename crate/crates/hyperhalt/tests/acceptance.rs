//! Acceptance criteria, one PASS/FAIL line each. Run with
//! `cargo test -p hyperhalt --test acceptance`.
//!
//! Oracles here are written out independently of the library: dyadic
//! steps, Sobolev weights, bound formulas, the limit matrix and the
//! determinant are recomputed from their definitions.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use hyperhalt::config::RunConfig;
use hyperhalt::experiments;
use hyperhalt::model::coins::{classical_merchant_detect, classical_merchant_weigh, merchant_config, CoinSequence};
use hyperhalt::model::detector::{min_time_bound, DEFAULT_LEN};
use hyperhalt::model::halting::{corpus_machine, run_right_forever};
use hyperhalt::model::scattering::{
    cnot_check, cnot_matrix, estimate_brownian_measure, gaussian_det_identity, gaussian_integral_mc, m_function,
    operator_schmidt_values, resonance_smatrix, s_matrix, s_matrix_at_energy, BetaChannel, CMatrix, DotState,
    InnerDot, MValue,
};
use hyperhalt::model::walks::{cylinder_probability, cylinder_probability_mc, trial_rng, Gate};
use hyperhalt::model::{
    device_clicks, estimate_indistinguishable_measure, indistinguishable_bound, posterior_no_false, rn_density,
    run_halting_batch, simulate_posterior, Complex64, DeviceConfig, MeanEstimate, Mode, Proportion, Sequential,
    StackSelector, TestVector, TrialExecutor, WalkSampler, WalkSchedule,
};
use hyperhalt::Parallel;
use rand::Rng;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn pool() -> Parallel {
    Parallel::new(0).expect("thread pool")
}

/// `Δ_m = 1 - 2^-(m+1)` and `(1 - Δ_m)/Δ_m`, from the definition.
fn oracle_delta(m: usize) -> f64 {
    1.0 - 0.5f64.powi(m as i32 + 1)
}

fn oracle_weight(m: usize) -> f64 {
    let deficit = 0.5f64.powi(m as i32 + 1);
    deficit / (1.0 - deficit)
}

fn oracle_prod(n: usize) -> f64 {
    (1..=n).map(oracle_delta).product()
}

fn oracle_sobolev(x: &TestVector) -> f64 {
    let mut prev = Complex64::new(0.0, 0.0);
    let mut sum = 0.0;
    for (i, &v) in x.entries().iter().enumerate() {
        sum += oracle_weight(i + 1) * (v - prev).norm_sqr();
        prev = v;
    }
    sum
}

/// `sqrt(ε / (((1+γ)^T - 1 - ε)·∏Δ))`.
fn oracle_measure_bound(eps: f64, t: f64, gamma: f64, prod: f64) -> f64 {
    (eps / (((1.0 + gamma).powf(t) - 1.0 - eps) * prod)).sqrt()
}

// 1. Classical merchant.
fn merchant() -> Outcome {
    for n in 0..=10usize {
        let stack = (n > 0).then_some(n);
        let config = merchant_config(stack).map_err(|e| e.to_string())?;
        // one coin from stack 1, two from stack 2, ...
        let oracle: f64 = (1..=10).map(|k| k as f64 * if Some(k) == stack { 1.01 } else { 1.0 }).sum();
        let w = classical_merchant_weigh(&config).map_err(|e| e.to_string())?;
        check((w - (55.0 + n as f64 / 100.0)).abs() < 1e-12, || format!("N = {n}: weight {w}"))?;
        check((w - oracle).abs() < 1e-12, || format!("N = {n}: oracle {oracle}"))?;
        check(classical_merchant_detect(w).map_err(|e| e.to_string())? == stack, || format!("N = {n}: detect"))?;
    }
    Ok("11 configurations, weight 55 + N/100 and detect(weigh(N)) = N".into())
}

// 2. Soundness.
fn soundness() -> Outcome {
    let cfg = DeviceConfig::default();
    let seq = CoinSequence::all_true(DEFAULT_LEN).unwrap();
    let sampler = cfg.sampler(2).unwrap();
    let t = cfg.time_budget().unwrap();
    let clicks = pool().count_trials(100_000, |trial| {
        let x = sampler.sample(trial);
        assert!(oracle_sobolev(&x) > 0.0);
        device_clicks(&seq, &x, t, &cfg).unwrap() || device_clicks(&seq, &x, 1e6, &cfg).unwrap()
    });
    check(clicks == 0, || format!("{clicks} clicks"))?;
    Ok(format!("10^5 walks, T = {t:.4} and T = 1e6, zero clicks"))
}

// 3. Measure bound and its monotonicity.
fn measure_bound() -> Outcome {
    let (eps, gamma, eta) = (0.5f64.powi(6), 0.5, 0.5f64.powi(4));
    let prod = oracle_prod(DEFAULT_LEN);
    let t = min_time_bound(eps, eta, gamma, prod).unwrap().time;
    let cfg = DeviceConfig { epsilon_exp: 6, gamma_exp: 1, time: Some(t), ..DeviceConfig::default() };
    check((cfg.prod_delta() - prod).abs() < 1e-15, || format!("∏Δ {} vs oracle {prod}", cfg.prod_delta()))?;
    let exec = pool();
    let trials = 10_000;
    let est = estimate_indistinguishable_measure(&cfg, StackSelector::Fixed(1), trials, 3, &exec).unwrap();
    // recount membership from the definition
    let sampler = cfg.sampler(3).unwrap();
    let recount = exec.count_trials(trials, |trial| {
        let x = sampler.sample(trial);
        ((1.0 + gamma).powf(t) - 1.0) * x.entries()[0].norm_sqr() < eps * oracle_sobolev(&x)
    });
    check(recount == est.hits, || format!("estimator {} vs recount {recount}", est.hits))?;
    let bound = oracle_measure_bound(eps, t, gamma, prod);
    let lib = indistinguishable_bound(eps, t, gamma, prod).value().ok_or("library bound not informative")?;
    check((lib - bound).abs() < 1e-12, || format!("bound {lib} vs oracle {bound}"))?;
    check(est.ci_high <= bound, || format!("upper CI {} > bound {bound}", est.ci_high))?;
    let mut prev: Option<Proportion> = None;
    let mut sweep = Vec::new();
    for t in [2.0, 4.0, 8.0, 16.0] {
        let c = DeviceConfig { time: Some(t), ..cfg.clone() };
        let p = estimate_indistinguishable_measure(&c, StackSelector::Fixed(1), trials, 3, &exec).unwrap();
        if let Some(q) = prev {
            check(p.fraction <= q.fraction && p.ci_low <= q.ci_high, || format!("T = {t}: {} after {}", p.fraction, q.fraction))?;
        }
        sweep.push(format!("{:.4}", p.fraction));
        prev = Some(p);
    }
    Ok(format!(
        "T = {t:.4}: {:.4} (upper CI {:.4}) <= {bound:.4}; T = 2,4,8,16: {}",
        est.fraction,
        est.ci_high,
        sweep.join(", ")
    ))
}

// 4. Computable time bound.
fn time_bound() -> Outcome {
    let prod = oracle_prod(DEFAULT_LEN);
    let mut worst: f64 = 0.0;
    for e in [2, 6, 12] {
        for h in [2, 6, 12] {
            for g in [1, 3, 6] {
                let (eps, eta, gamma) = (0.5f64.powi(e), 0.5f64.powi(h), 0.5f64.powi(g));
                let tb = min_time_bound(eps, eta, gamma, prod).map_err(|e| e.to_string())?;
                let v = indistinguishable_bound(eps, tb.time, gamma, prod)
                    .value()
                    .ok_or_else(|| format!("not informative at ({eps}, {eta}, {gamma})"))?;
                let ulp = f64::from_bits(eta.to_bits() + 1) - eta;
                check(v <= eta + ulp, || format!("({eps}, {eta}, {gamma}): {v} > {eta}"))?;
                // the closed-form threshold, evaluated independently
                let threshold = (eps / (eta * eta * prod) + 1.0 + eps).ln() / (1.0 + gamma).ln();
                check((tb.time - threshold).abs() <= 1e-9 * threshold, || format!("T {} vs {threshold}", tb.time))?;
                worst = worst.max(v / eta);
            }
        }
    }
    Ok(format!("27 grid points, max bound/η = {worst:.17}"))
}

// 5. Posterior bound.
fn posterior() -> Outcome {
    let mut parts = Vec::new();
    for t in [8.0, 16.0] {
        let cfg = DeviceConfig { time: Some(t), prior: 0.5, ..DeviceConfig::default() };
        let tally = simulate_posterior(&cfg, 1, 10_000, 5, &pool()).unwrap();
        let (p, sigma) = tally.posterior().ok_or("no non-clicks")?;
        let lib = posterior_no_false(0.5, cfg.epsilon(), cfg.gamma(), t, cfg.prod_delta()).unwrap();
        let oracle = 1.0
            - cfg.epsilon().sqrt() / ((1.5f64.powf(t) - 1.0 - cfg.epsilon()).sqrt() * oracle_prod(DEFAULT_LEN).sqrt());
        let oracle = oracle.max(0.0);
        let lib = lib.value().unwrap_or(0.0);
        check((lib - oracle).abs() < 1e-12, || format!("T = {t}: bound {lib} vs oracle {oracle}"))?;
        check(p >= lib - 3.0 * sigma, || format!("T = {t}: empirical {p} < {lib} - 3·{sigma}"))?;
        parts.push(format!("T = {t}: {p:.4} vs {lib:.4}"));
    }
    Ok(parts.join("; "))
}

// 6. End-to-end halting experiment.
fn halting() -> Outcome {
    let cfg = DeviceConfig::default();
    let eta = cfg.eta();
    let trials = 10_000;
    let count5 = corpus_machine("count-5").ok_or("count-5 missing")?;
    let batch = run_halting_batch(&count5, 0, 1, &cfg, trials, 6, &pool()).unwrap();
    check(batch.halted_within == Some(5), || format!("halted within {:?}", batch.halted_within))?;
    let sigma = (eta * (1.0 - eta) / trials as f64).sqrt();
    let frac = batch.non_detection.fraction;
    check(frac <= eta + 3.0 * sigma, || format!("non-detection {frac} > η + 3σ = {}", eta + 3.0 * sigma))?;
    let never = run_halting_batch(&run_right_forever(), 0, 1, &cfg, trials, 6, &pool()).unwrap();
    check(never.clicks == 0, || format!("{} detections on a machine that never halts", never.clicks))?;
    Ok(format!("halts at 5: non-detection {frac:.4} <= {:.4}; never halts: 0 detections", eta + 3.0 * sigma))
}

/// `‖S*S - I‖_F` by explicit sums.
fn oracle_unitarity(s: &CMatrix) -> f64 {
    let n = s.nrows();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            let mut v = Complex64::new(0.0, 0.0);
            for k in 0..n {
                v += s[(k, i)].conj() * s[(k, j)];
            }
            if i == j {
                v -= 1.0;
            }
            sum += v.norm_sqr();
        }
    }
    sum.sqrt()
}

// 7. Unitarity.
fn unitarity() -> Outcome {
    let mut rng = trial_rng(7, 0);
    let mut worst: f64 = 0.0;
    let mut done = 0;
    while done < 200 {
        let levels = rng.random_range(1..=8);
        let mut acc = 0.0;
        let alphas: Vec<f64> = (0..levels)
            .map(|_| {
                acc += rng.random_range(0.05..2.0);
                acc
            })
            .collect();
        let e: Vec<Complex64> =
            (0..levels).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
        let d = rng.random_range(1..=16);
        let beta: Vec<Complex64> =
            (0..d).map(|_| Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0))).collect();
        let p: f64 = rng.random_range(0.05..4.0);
        let Ok(dot) = InnerDot::new(alphas, e) else { continue };
        if !matches!(m_function(&dot, Complex64::new(p * p, 0.0), true), MValue::Finite(_)) {
            continue;
        }
        let s = s_matrix(&dot, &BetaChannel::new(beta).unwrap(), p).unwrap().dense();
        let defect = oracle_unitarity(&s);
        check(defect < 1e-9, || format!("defect {defect:e} at dim {d}"))?;
        worst = worst.max(defect);
        done += 1;
    }
    Ok(format!("200 configurations, max ‖S*S - I‖ = {worst:.2e}"))
}

fn frobenius(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

// 8. Resonance identities.
fn resonance() -> Outcome {
    let dot = InnerDot::ladder(8);
    let beta = [1.0, -0.5, 2.0, 0.25];
    let unit = BetaChannel::real(&beta).unwrap().with_strength(1.0).unwrap();
    let alpha1 = dot.resonance_level();
    let id = CMatrix::identity(8, 8);
    let vacant = dot.in_state(DotState::Vacant);
    let mut worst_s1: f64 = 0.0;
    for lambda in [alpha1 * (1.0 - 1e-8), alpha1 * (1.0 + 1e-8)] {
        let s = s_matrix_at_energy(&vacant, &unit, lambda).unwrap().dense();
        worst_s1 = worst_s1.max(frobenius(&s, &id));
    }
    check(worst_s1 < 1e-6, || format!("S1 off identity by {worst_s1:e}"))?;
    let r = resonance_smatrix(&dot, &unit, DotState::Occupied, 1e6).unwrap();
    // I - [[P, P], [P, P]] from the definition
    let n2: f64 = beta.iter().map(|b| b * b).sum();
    let limit = CMatrix::from_fn(8, 8, |i, j| {
        let p = beta[i % 4] * beta[j % 4] / n2;
        Complex64::new(if i == j { 1.0 } else { 0.0 } - p, 0.0)
    });
    let err = frobenius(&r.matrix.dense(), &limit);
    check(err < 1e-3, || format!("S2 off limit by {err:e}"))?;
    check(frobenius(&r.limit, &limit) < 1e-15, || "library limit differs from oracle".into())?;
    let sq = frobenius(&(&limit * &limit), &id);
    check(sq < 1e-12, || format!("limit² off identity by {sq:e}"))?;
    Ok(format!("S1 {worst_s1:.1e}; S2 {err:.1e} at |β|² = 1e6; limit² {sq:.1e}"))
}

// 9. Controlled NOT.
fn cnot() -> Outcome {
    let u = cnot_matrix();
    // columns are images of |00>, |01>, |10>, |11>
    for (from, to) in [(0, 0), (1, 1), (2, 3), (3, 2)] {
        for k in 0..4 {
            check(u[(k, from)] == if k == to { 1.0 } else { 0.0 }, || format!("U|{from}> wrong at {k}"))?;
        }
    }
    let sq = &u * &u;
    check(sq == nalgebra_identity(), || "U² != I".into())?;
    check(u.transpose() * &u == nalgebra_identity(), || "UᵀU != I".into())?;
    // realigned matrix R[2a+c, 2b+d] = U[2a+b, 2c+d]; R Rᵀ gives σ²
    let r: Vec<Vec<f64>> =
        (0..4).map(|row| (0..4).map(|col| u[(2 * (row / 2) + col / 2, 2 * (row % 2) + col % 2)]).collect()).collect();
    let mut gram = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            gram[i][j] = (0..4).map(|k| r[i][k] * r[j][k]).sum();
        }
    }
    // R Rᵀ is diagonal here, so its diagonal holds the squared singular values
    let mut sigma: Vec<f64> = (0..4).map(|i| gram[i][i].sqrt()).collect();
    sigma.sort_by(|a, b| b.total_cmp(a));
    let off: f64 = (0..4).flat_map(|i| (0..4).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| gram[i][j].abs()).sum();
    check(off == 0.0, || "realigned Gram matrix is not diagonal".into())?;
    let lib = operator_schmidt_values(&u);
    for (a, b) in sigma.iter().zip(&lib) {
        check((a - b).abs() < 1e-12, || format!("singular values {lib:?} vs oracle {sigma:?}"))?;
    }
    check(lib[1] > 0.9, || format!("second singular value {}", lib[1]))?;
    let report = cnot_check();
    check(report.schmidt_rank == 2 && report.realised_up_to_sign, || format!("{report:?}"))?;
    Ok(format!(
        "truth table exact, U² = I, singular values {:.6} {:.6} {:.1e} {:.1e}; realised up to sign (defect {:.4})",
        lib[0], lib[1], lib[2], lib[3], report.sign_defect
    ))
}

fn nalgebra_identity() -> hyperhalt::model::scattering::RealMatrix {
    hyperhalt::model::scattering::RealMatrix::identity(4, 4)
}

/// Determinant by Gaussian elimination with partial pivoting.
fn oracle_det(mut a: Vec<Vec<f64>>) -> f64 {
    let n = a.len();
    let mut det = 1.0;
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())).unwrap();
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= a[c][c];
        for r in c + 1..n {
            let f = a[r][c] / a[c][c];
            for k in c..n {
                a[r][k] -= f * a[c][k];
            }
        }
    }
    det
}

// 10. Gaussian determinant identity.
fn determinant() -> Outcome {
    let mut rng = trial_rng(10, 0);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let n = rng.random_range(1..=32);
        let b: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let c: f64 = rng.random_range(0.0..20.0);
        let d = gaussian_det_identity(&b, c).map_err(|e| e.to_string())?;
        let norm: f64 = b.iter().map(|v| v * v).sum();
        let a = (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 } + c * b[i] * b[j] / norm).collect()).collect();
        let oracle = oracle_det(a);
        check(d.defect < 1e-10 && (oracle - (1.0 + c)).abs() < 1e-10, || format!("n = {n}, c = {c}: {d:?}, oracle {oracle}"))?;
        worst = worst.max(d.defect);
    }
    let mc = gaussian_integral_mc(&[0.6, -0.8], 3.0, 1_000_000, 10, &pool()).unwrap();
    check(mc.within(0.5, 3.0), || format!("MC {:?} vs 1/√4", mc))?;
    Ok(format!("100 draws, max defect {worst:.1e}; N = 2, c = 3: {:.5} ± {:.5} vs 0.5", mc.mean, mc.std_err))
}

// 11. Brownian measure bound.
fn brownian() -> Outcome {
    let n = 64;
    let ch = BetaChannel::real(&[1.0]).unwrap();
    let exec = pool();
    let mut prev = f64::INFINITY;
    let mut parts = Vec::new();
    for k in [2, 4, 6] {
        let eps = 0.5f64.powi(k);
        let est = estimate_brownian_measure(&ch, eps, &WalkSchedule::Dyadic, n, 10_000, 11, &exec).unwrap();
        // |β| = 1, b = (1, 0, ...), |b|² = 1
        let oracle = eps.sqrt() / (oracle_prod(n).sqrt() * (eps + 1.0).sqrt());
        let lib = est.bound.value().ok_or("bound not informative")?;
        check((lib - oracle).abs() < 1e-12, || format!("ε = 2^-{k}: bound {lib} vs oracle {oracle}"))?;
        let sampler = WalkSampler::new(WalkSchedule::Dyadic, Mode::Real, n, 11).unwrap();
        let recount = exec.count_trials(10_000, |t| {
            let x = sampler.sample(t);
            x.entries()[0].norm_sqr() <= eps * oracle_sobolev(&x)
        });
        check(recount == est.non_clicks.hits, || format!("ε = 2^-{k}: recount {recount} vs {}", est.non_clicks.hits))?;
        check(est.non_clicks.ci_high <= oracle, || format!("ε = 2^-{k}: upper CI {} > {oracle}", est.non_clicks.ci_high))?;
        check(est.non_clicks.fraction < prev, || format!("ε = 2^-{k}: not decreasing"))?;
        prev = est.non_clicks.fraction;
        parts.push(format!("2^-{k}: {:.4} <= {oracle:.4}", est.non_clicks.ci_high));
    }
    check((0.25f64.sqrt() / (oracle_prod(64).sqrt() * 1.25f64.sqrt()) - 0.5885).abs() < 1e-4, || "ε = 1/4 example".into())?;
    Ok(parts.join("; "))
}

// 12. Change of measure.
fn change_of_measure() -> Outcome {
    let n = 8;
    let trials = 100_000;
    let exec = pool();
    let plain = WalkSampler::new(WalkSchedule::Unperturbed, Mode::Real, n, 12).unwrap();
    let weighted: Vec<f64> = exec.map_trials(trials, |t| {
        let x = plain.sample(t);
        x.entries()[0].norm_sqr() * rn_density(&x, &WalkSchedule::Dyadic).unwrap()
    });
    let is = MeanEstimate::from_samples(&weighted);
    // under the perturbed walk x_1 ~ N(0, Δ_1/2)
    let exact = oracle_delta(1) / 2.0;
    check(is.within(exact, 3.0), || format!("importance sampling {is:?} vs {exact}"))?;
    let gate = [Gate::new(1, Complex64::new(0.0, 0.0), 1.0)];
    let closed = 1.0 - (-1.0f64).exp();
    let q = cylinder_probability(&WalkSchedule::Unperturbed, Mode::Complex, &gate).unwrap();
    check((q.probability - closed).abs() < 1e-3, || format!("quadrature {} vs {closed}", q.probability))?;
    let mc = cylinder_probability_mc(&WalkSchedule::Unperturbed, Mode::Complex, &gate, 4_000_000, 12, &exec).unwrap();
    check((mc.fraction - closed).abs() < 1e-3, || format!("MC {} vs {closed}", mc.fraction))?;
    Ok(format!(
        "E[|x_1|² ρ] = {:.5} ± {:.5} vs {exact}; 1 - e^-1: quadrature {:.2e} off, MC {:.2e} off",
        is.mean,
        is.std_err,
        (q.probability - closed).abs(),
        (mc.fraction - closed).abs()
    ))
}

// 13. Reproducibility.
fn reproducibility() -> Outcome {
    let runs = |workers: Option<usize>| -> Vec<String> {
        let exec_par = workers.map(|w| Parallel::new(w).unwrap());
        let mut out = Vec::new();
        macro_rules! with_exec {
            ($f:expr) => {
                match &exec_par {
                    Some(p) => $f(p),
                    None => $f(&Sequential),
                }
            };
        }
        let cfg = RunConfig { trials: 4000, seed: Some(13), ..RunConfig::default() };
        let json = |v: &dyn erased::Json| v.json();
        out.push(json(&with_exec!(|e| experiments::device(&cfg, e)).unwrap().numeric()));
        let m = RunConfig { times: vec![2.0, 8.0], ..cfg.clone() };
        out.push(json(&with_exec!(|e| experiments::measure(&m, e)).unwrap().0.iter().map(|r| r.numeric()).collect::<Vec<_>>()));
        out.push(json(&with_exec!(|e| experiments::brownian(&cfg, e)).unwrap().0.iter().map(|r| r.numeric()).collect::<Vec<_>>()));
        let h = RunConfig { machine: Some("count-5".into()), ..cfg.clone() };
        out.push(json(&with_exec!(|e| experiments::halting_experiment(&h, e)).unwrap().numeric()));
        let dc = DeviceConfig::default();
        out.push(format!("{:?}", with_exec!(|e| simulate_posterior(&dc, 1, 4000, 13, e)).unwrap()));
        let gates = [Gate::new(2, Complex64::new(0.1, 0.0), 0.7)];
        out.push(format!("{:?}", with_exec!(|e| cylinder_probability_mc(&WalkSchedule::Dyadic, Mode::Complex, &gates, 4000, 13, e)).unwrap()));
        out.push(format!("{:?}", with_exec!(|e| gaussian_integral_mc(&[1.0, 2.0], 3.0, 4000, 13, e)).unwrap()));
        out
    };
    let reference = runs(None);
    check(runs(None) == reference, || "sequential re-run differs".into())?;
    for w in [1, 2, 3, 8] {
        check(runs(Some(w)) == reference, || format!("{w} workers differ from sequential"))?;
    }
    Ok(format!("{} experiments byte-identical across re-runs and 1, 2, 3, 8 workers", reference.len()))
}

mod erased {
    pub trait Json {
        fn json(&self) -> String;
    }

    impl<T: serde::Serialize> Json for T {
        fn json(&self) -> String {
            serde_json::to_string(self).unwrap()
        }
    }
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Duration); 13] = [
        ("1 classical merchant", merchant, Duration::from_secs(1)),
        ("2 soundness", soundness, Duration::from_secs(30)),
        ("3 measure bound", measure_bound, Duration::from_secs(120)),
        ("4 computable time bound", time_bound, Duration::MAX),
        ("5 posterior bound", posterior, Duration::from_secs(120)),
        ("6 halting experiment", halting, Duration::from_secs(120)),
        ("7 S-matrix unitarity", unitarity, Duration::MAX),
        ("8 resonance identities", resonance, Duration::MAX),
        ("9 controlled NOT", cnot, Duration::MAX),
        ("10 gaussian determinant identity", determinant, Duration::MAX),
        ("11 brownian measure bound", brownian, Duration::from_secs(120)),
        ("12 change of measure", change_of_measure, Duration::MAX),
        ("13 reproducibility", reproducibility, Duration::MAX),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (name, f, limit) in criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panicked".into()))
        });
        let elapsed = start.elapsed();
        let result = result.and_then(|d| {
            if elapsed <= limit {
                Ok(d)
            } else {
                Err(format!("{d}; took {elapsed:.1?}, limit {limit:?}"))
            }
        });
        match result {
            Ok(detail) => println!("PASS criterion {name}: {detail} [{elapsed:.2?}]"),
            Err(reason) => {
                failed += 1;
                println!("FAIL criterion {name}: {reason} [{elapsed:.2?}]");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 13 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
