use hyperhalt_core::scattering::{
    discrimination_correlation, doubled_projector, evolve_modes, frobenius_distance, m_function, reflection_limit,
    resonance_smatrix, s_matrix, BetaChannel, CMatrix, DotState, InnerDot, MValue,
};
use num_complex::Complex64;
use proptest::prelude::*;

fn complex_vec(max: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 1..=max)
        .prop_map(|v| v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect())
}

fn channel(max: usize) -> impl Strategy<Value = BetaChannel> {
    complex_vec(max)
        .prop_filter("nonzero channel", |v| v.iter().map(|z| z.norm_sqr()).sum::<f64>() > 1e-6)
        .prop_map(|v| BetaChannel::new(v).unwrap())
}

fn dot() -> impl Strategy<Value = InnerDot> {
    (prop::collection::vec(0.05f64..2.0, 1..=8), complex_vec(8)).prop_filter_map("nonzero deficiency", |(gaps, e)| {
        let mut acc = 0.0;
        let levels: Vec<f64> = gaps
            .iter()
            .map(|g| {
                acc += g;
                acc
            })
            .collect();
        let mut e = e;
        e.resize(levels.len(), Complex64::new(0.5, 0.0));
        InnerDot::new(levels, e).ok()
    })
}

fn random_vector(len: usize, seed: &[f64]) -> Vec<Complex64> {
    (0..len).map(|i| Complex64::new(seed[(2 * i) % seed.len()], seed[(2 * i + 1) % seed.len()])).collect()
}

/// `½[[I, I], [I, I]]`, the projection onto symmetric pairs `(u, u)`.
fn symmetric_projector(d: usize) -> CMatrix {
    let half = Complex64::new(0.5, 0.0);
    CMatrix::from_fn(2 * d, 2 * d, |i, j| if i % d == j % d { half } else { Complex64::new(0.0, 0.0) })
}

fn block_diag(p: &CMatrix) -> CMatrix {
    let d = p.nrows();
    let mut out = CMatrix::zeros(2 * d, 2 * d);
    out.view_mut((0, 0), (d, d)).copy_from(p);
    out.view_mut((d, d), (d, d)).copy_from(p);
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn s_matrix_is_unitary_off_poles(dot in dot(), ch in channel(16), p in 0.05f64..4.0) {
        let lambda = Complex64::new(p * p, 0.0);
        prop_assume!(matches!(m_function(&dot, lambda, true), MValue::Finite(_)));
        let s = s_matrix(&dot, &ch, p).unwrap();
        prop_assert!(s.unitarity_defect() < 1e-9, "defect {}", s.unitarity_defect());
        // equal forward and backward coefficients
        let dense = s.dense();
        let d = ch.dim();
        let top_left = dense.view((0, 0), (d, d)).clone_owned();
        let bottom_right = dense.view((d, d), (d, d)).clone_owned();
        prop_assert_eq!(top_left, bottom_right);
    }

    #[test]
    fn evolution_preserves_norm(dot in dot(), ch in channel(6), p in 0.05f64..4.0, t in -3.0f64..3.0, seed in prop::collection::vec(-1.0f64..1.0, 4..24)) {
        prop_assume!(matches!(m_function(&dot, Complex64::new(p * p, 0.0), true), MValue::Finite(_)));
        let s = s_matrix(&dot, &ch, p).unwrap();
        let l = random_vector(ch.dim(), &seed);
        let r = random_vector(ch.dim(), &seed[1..]);
        let before: f64 = l.iter().chain(&r).map(|z| z.norm_sqr()).sum();
        let out = evolve_modes(&s, &l, &r, p, t).unwrap();
        let (pl, pr) = out.with_phase();
        let after: f64 = pl.iter().chain(&pr).map(|z| z.norm_sqr()).sum();
        prop_assert!((before - after).abs() < 1e-10 * (1.0 + before));
        prop_assert!((out.phase.norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn projector_algebra(ch in channel(8)) {
        let d = ch.dim();
        let sym = symmetric_projector(d);
        let diag = block_diag(&ch.projector());
        let doubled = doubled_projector(&ch);
        prop_assert!(frobenius_distance(&(&sym * &diag), &(&diag * &sym)) < 1e-12);
        prop_assert!(frobenius_distance(&(&sym * &diag), &doubled) < 1e-12);
        let id = CMatrix::identity(2 * d, 2 * d);
        let reflection = &id - &doubled * Complex64::new(2.0, 0.0);
        prop_assert!(frobenius_distance(&(&reflection * &reflection), &id) < 1e-12);
        // the resonance limit is that reflection
        let limit = reflection_limit(&ch);
        prop_assert!(frobenius_distance(&limit, &reflection) < 1e-12);
        prop_assert!(frobenius_distance(&(&limit * &limit), &id) < 1e-12);
        let half = (&id + &limit) * Complex64::new(0.5, 0.0);
        prop_assert!(frobenius_distance(&half, &(&id - &doubled)) < 1e-12);
    }

    #[test]
    fn correlation_identity(ch in channel(8), seed in prop::collection::vec(-1.0f64..1.0, 4..32)) {
        let d = ch.dim();
        let e = random_vector(2 * d, &seed);
        prop_assume!(e.iter().any(|z| z.norm_sqr() > 1e-6));
        let limit = reflection_limit(&ch);
        let corr = discrimination_correlation(&limit, &e).unwrap();
        let v = nalgebra::DVector::from_column_slice(&e);
        let proj = doubled_projector(&ch) * &v;
        let expected = v.norm_squared() - proj.norm_squared();
        prop_assert!((corr - expected).abs() < 1e-12 * (1.0 + v.norm_squared()));
        let id = CMatrix::identity(2 * d, 2 * d);
        let vacant = discrimination_correlation(&id, &e).unwrap();
        prop_assert!((vacant - v.norm_squared()).abs() < 1e-12 * (1.0 + vacant));
    }

    #[test]
    fn m_function_case_split(dot in dot(), re in -3.0f64..3.0, im in 0.01f64..3.0) {
        let lambda = Complex64::new(re, im);
        let term = |l: usize| {
            let a = dot.levels()[l];
            (Complex64::new(1.0, 0.0) + lambda * a) / (Complex64::new(a, 0.0) - lambda) * dot.deficiency()[l].norm_sqr()
        };
        let all: Complex64 = (0..dot.levels().len()).map(term).sum();
        let above: Complex64 = (1..dot.levels().len()).map(term).sum();
        let m1 = m_function(&dot.in_state(DotState::Vacant), lambda, true);
        let m2 = m_function(&dot.in_state(DotState::Occupied), lambda, true);
        match (m1, m2) {
            (MValue::Finite(a), MValue::Finite(b)) => {
                prop_assert!((a - all).norm() < 1e-12 * (1.0 + all.norm()));
                prop_assert!((b - above).norm() < 1e-12 * (1.0 + above.norm()));
            }
            other => prop_assert!(false, "off-axis values are finite: {:?}", other),
        }
    }
}

#[test]
fn occupied_resonance_error_shrinks_with_coupling() {
    let dot = InnerDot::ladder(8);
    let ch = BetaChannel::new(vec![Complex64::new(1.0, 0.5), Complex64::new(-0.3, 0.0), Complex64::new(0.0, 2.0)]).unwrap();
    let mut prev = f64::INFINITY;
    for strength in [1e2, 1e4, 1e6, 1e8] {
        let r = resonance_smatrix(&dot, &ch, DotState::Occupied, strength).unwrap();
        let err = r.limit_defect();
        assert!(err < prev, "{strength}: {err} !< {prev}");
        // O(p/|β|²) with p = α₁ = 1
        assert!(err * strength < 50.0, "{strength}: {err}");
        prev = err;
    }
}
