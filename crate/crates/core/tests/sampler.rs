mod common;

use common::{
    check_mean_within_3se, check_moments, integrate_density, omega_data, spec4, OmegaOracle,
};
use qgarch_acs::experiment::{fit_adaptive, fit_metropolis, DEFAULT_STEP_SIZES};
use qgarch_acs::model::{simulate, ConstantVariancePosterior, QgarchParams, QgarchPosterior};
use qgarch_acs::sampler::{
    adaptive_mh_step, fit_proposal, independence_log_acceptance, run_adaptive_chain,
    run_metropolis_chain, AdaptationSchedule, ChainState, LogDensity, MetropolisConfig,
    MetropolisMode, ProposalSpec,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use statrs::distribution::{Continuous, StudentsT};

#[test]
fn student_t_draws_have_expected_moments() {
    let spec = spec4();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let draws: Vec<_> = (0..1_000_000).map(|_| spec.sample(&mut rng)).collect();
    let cov = spec.sigma().map(|row| row.map(|v| v * 10.0 / 8.0));
    assert_eq!(spec.covariance(), cov);
    check_moments(&draws, spec.mean(), cov).unwrap();
}

#[test]
fn gaussian_limit_has_scale_matrix_covariance() {
    let spec = spec4();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let draws: Vec<_> = (0..1_000_000)
        .map(|_| spec.sample_gaussian_limit(&mut rng))
        .collect();
    check_moments(&draws, spec.mean(), spec.sigma()).unwrap();
}

#[test]
fn fit_on_standard_normals_gives_scaled_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let draws: Vec<[f64; 4]> = (0..1_000_000)
        .map(|_| std::array::from_fn(|_| rng.sample(StandardNormal)))
        .collect();
    let spec = fit_proposal(&draws, 10.0).unwrap();
    for i in 0..4 {
        assert!(spec.mean()[i].abs() < 0.005);
        for j in 0..4 {
            let want = if i == j { 0.8 } else { 0.0 };
            assert!(
                (spec.sigma()[i][j] - want).abs() < 0.008,
                "sigma[{i}][{j}] = {}",
                spec.sigma()[i][j]
            );
        }
    }
}

#[test]
fn density_integrates_to_one() {
    let total = integrate_density(&spec4(), 48);
    assert!((total - 1.0).abs() < 0.01, "integral {total}");
}

/// Piecewise-constant target: weight 1 on [0, 1), 3 on [1, 2).
fn step_target(x: &[f64; 1]) -> f64 {
    match x[0] {
        v if (0.0..1.0).contains(&v) => 0.0,
        v if (1.0..2.0).contains(&v) => 3f64.ln(),
        _ => f64::NEG_INFINITY,
    }
}

/// Acceptance probability from `x`, by midpoint quadrature against an
/// independent Student's t density.
fn oracle_acceptance(x: f64, loc: f64, scale: f64, nu: f64) -> f64 {
    let t = StudentsT::new(loc, scale, nu).unwrap();
    let pi = |v: f64| if v < 1.0 { 1.0 } else { 3.0 };
    let qx = t.pdf(x);
    let k = 200_000;
    let h = 2.0 / k as f64;
    (0..k)
        .map(|i| {
            let y = (i as f64 + 0.5) * h;
            let qy = t.pdf(y);
            qy * (pi(y) * qx / (pi(x) * qy)).min(1.0)
        })
        .sum::<f64>()
        * h
}

#[test]
fn transition_probability_matches_quadrature() {
    let (loc, scale, nu) = (1.2, 0.5, 10.0);
    let spec = ProposalSpec::new([loc], [[scale * scale]], nu).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let n = 100_000;
    for x in [0.5, 1.5, 1.95] {
        let p = oracle_acceptance(x, loc, scale, nu);
        let mut accepts = 0usize;
        for _ in 0..n {
            let mut state = ChainState::new(&step_target, [x]);
            accepts += usize::from(adaptive_mh_step(&mut state, &step_target, &spec, &mut rng));
        }
        let rate = accepts as f64 / n as f64;
        let se = (p * (1.0 - p) / n as f64).sqrt();
        assert!((rate - p).abs() < 3.0 * se, "x={x}: {rate} vs {p}");
    }
}

#[test]
fn independence_kernel_satisfies_detailed_balance() {
    let spec = spec4();
    let target = |x: &[f64; 4]| -> f64 {
        -0.5 * x
            .iter()
            .enumerate()
            .map(|(i, v)| (v - i as f64).powi(2) / (1.0 + i as f64))
            .sum::<f64>()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let x = spec.sample(&mut rng);
        let y = spec.sample(&mut rng);
        let (px, py) = (target(&x), target(&y));
        let (qx, qy) = (spec.log_density(&x), spec.log_density(&y));
        let forward = px + qy + independence_log_acceptance(px, py, qx, qy);
        let backward = py + qx + independence_log_acceptance(py, px, qy, qx);
        assert!(
            ((forward - backward).exp() - 1.0).abs() < 1e-12,
            "{forward} vs {backward}"
        );
    }
}

#[test]
fn adaptive_chain_is_shift_equivariant() {
    let shift = [3.0, -1.5];
    let base = |x: &[f64; 2]| -> f64 { -0.5 * (x[0] * x[0] + 2.0 * x[1] * x[1] - x[0] * x[1]) };
    let shifted = move |x: &[f64; 2]| base(&[x[0] - shift[0], x[1] - shift[1]]);
    let schedule = AdaptationSchedule {
        burn_in: 200,
        pilot: 300,
        refresh: 250,
        analysis_samples: 5000,
        nu: 10.0,
        freeze_after: None,
    };
    let steps = [0.8, 0.8];
    let a = run_adaptive_chain(
        &base,
        [0.2, 0.1],
        &steps,
        &schedule,
        &mut ChaCha8Rng::seed_from_u64(6),
    )
    .unwrap();
    let b = run_adaptive_chain(
        &shifted,
        [0.2 + shift[0], 0.1 + shift[1]],
        &steps,
        &schedule,
        &mut ChaCha8Rng::seed_from_u64(6),
    )
    .unwrap();
    assert_eq!(a.chain.accepted, b.chain.accepted);
    for (sa, sb) in a.chain.samples.iter().zip(&b.chain.samples) {
        for k in 0..2 {
            assert!((sa[k] + shift[k] - sb[k]).abs() < 1e-9);
        }
    }
}

#[test]
fn decisions_ignore_constant_log_density_offset() {
    let data = simulate(&QgarchParams::reference(), 500, 12, 500).unwrap();
    let posterior = QgarchPosterior::new(data);
    let lifted = |x: &[f64; 4]| posterior.log_density(x) + 1000.0;
    let start = posterior.default_start().to_array();
    let schedule = AdaptationSchedule {
        analysis_samples: 10_000,
        ..AdaptationSchedule::default()
    };
    let run = |target: &dyn LogDensity<4>| {
        run_adaptive_chain(
            target,
            start,
            &DEFAULT_STEP_SIZES,
            &schedule,
            &mut ChaCha8Rng::seed_from_u64(14),
        )
        .unwrap()
    };
    let a = run(&posterior);
    let b = run(&lifted);
    assert_eq!(a.chain.accepted, b.chain.accepted);
    assert_eq!(a.chain.samples, b.chain.samples);
}

#[test]
fn chains_never_leave_admissible_region() {
    let data = simulate(&QgarchParams::reference(), 500, 9, 500).unwrap();
    let schedule = AdaptationSchedule {
        analysis_samples: 5000,
        ..AdaptationSchedule::default()
    };
    let adaptive = fit_adaptive(&data, &schedule, &DEFAULT_STEP_SIZES, 9).unwrap();
    let metropolis = fit_metropolis(
        &data,
        &MetropolisConfig {
            step_sizes: DEFAULT_STEP_SIZES,
            burn_in: 1000,
            samples: 5000,
            mode: MetropolisMode::Joint,
        },
        9,
    )
    .unwrap();
    for chain in [&adaptive.chain, &metropolis.chain] {
        for (s, lp) in chain.samples.iter().zip(&chain.log_post) {
            assert!(QgarchParams::from_array(*s).is_admissible(), "{s:?}");
            assert!(lp.is_finite());
        }
    }
}

#[test]
fn constant_variance_posterior_mean_recovered() {
    let data = omega_data();
    let oracle = OmegaOracle::new(&data);
    let truth = oracle.quadrature_mean();
    assert!((truth / oracle.closed_form_mean() - 1.0).abs() < 1e-6);

    let target = ConstantVariancePosterior::new(data);
    let start = [oracle.mode()];
    assert!(target.log_density(&start).is_finite());

    let metropolis = run_metropolis_chain(
        &target,
        start,
        &MetropolisConfig {
            step_sizes: [0.3],
            burn_in: 2000,
            samples: 200_000,
            mode: MetropolisMode::Joint,
        },
        &mut ChaCha8Rng::seed_from_u64(11),
    )
    .unwrap();
    check_mean_within_3se("metropolis", &metropolis.chain.component(0), truth).unwrap();

    let mut schedule = AdaptationSchedule {
        analysis_samples: 100_000,
        ..AdaptationSchedule::default()
    };
    let adaptive = run_adaptive_chain(
        &target,
        start,
        &[0.3],
        &schedule,
        &mut ChaCha8Rng::seed_from_u64(12),
    )
    .unwrap();
    check_mean_within_3se("adaptive", &adaptive.chain.component(0), truth).unwrap();

    schedule.freeze_after = Some(2000);
    let frozen = run_adaptive_chain(
        &target,
        start,
        &[0.3],
        &schedule,
        &mut ChaCha8Rng::seed_from_u64(13),
    )
    .unwrap();
    check_mean_within_3se("frozen", &frozen.chain.component(0), truth).unwrap();
    let fixed = &frozen.history[2];
    assert!(frozen.history[3..]
        .iter()
        .all(|h| h.mean == fixed.mean && h.sigma == fixed.sigma));
}
