use fodamp::fosystems::SystemClass;
use fodamp::neural::{
    initialize, jacobian, mse_all, predict_table, run_seed, sweep_specs, train, Activation, AffineMap, DataRow,
    Dataset, InitScheme, NetworkSpec, NetworkWeights, NeuralError, StopReason, TrainOptions,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn normalized_inputs(w: &NetworkWeights, data: &Dataset) -> Vec<f64> {
    data.rows().iter().map(|r| w.input_map.forward(r.alpha)).collect()
}

fn random_weights(spec: &NetworkSpec, data: &Dataset, rng: &mut ChaCha8Rng) -> NetworkWeights {
    let mut w = initialize(spec, data, InitScheme::ScaledUniform, rng).unwrap();
    let p: Vec<f64> = (0..spec.parameter_count()).map(|_| rng.gen_range(-1.5..1.5)).collect();
    w.set_params(&p);
    w
}

#[test]
fn jacobian_matches_central_differences() {
    let data = Dataset::builtin(SystemClass::Pseudo);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let h = 1e-6;
    for spec in NetworkSpec::sweep_grid() {
        for _ in 0..20 {
            let w = random_weights(&spec, &data, &mut rng);
            let x = normalized_inputs(&w, &data);
            let jac = jacobian(&w, &x);
            let base = w.params();
            let mut probe = w.clone();
            for k in 0..base.len() {
                let mut p = base.clone();
                p[k] = base[k] + h;
                probe.set_params(&p);
                let up: Vec<[f64; 2]> = x.iter().map(|&xi| probe.forward_normalized(xi)).collect();
                p[k] = base[k] - h;
                probe.set_params(&p);
                let down: Vec<[f64; 2]> = x.iter().map(|&xi| probe.forward_normalized(xi)).collect();
                for s in 0..x.len() {
                    for o in 0..2 {
                        let fd = (up[s][o] - down[s][o]) / (2.0 * h);
                        let an = jac[(2 * s + o, k)];
                        let scale = an.abs().max(fd.abs()).max(1e-3);
                        assert!(
                            (an - fd).abs() / scale < 1e-5,
                            "{} param {k} sample {s} output {o}: {an} vs {fd}",
                            spec.describe()
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn training_is_bit_identical_under_a_seed() {
    let data = Dataset::builtin(SystemClass::MetaLead1);
    let spec = NetworkSpec::new(10, vec![Activation::Tansig, Activation::Logsig]).unwrap();
    for opts in [TrainOptions::default(), TrainOptions::holdout()] {
        let a = train(&spec, &data, 99, &opts).unwrap();
        let b = train(&spec, &data, 99, &opts).unwrap();
        assert_eq!(a.final_mse.to_bits(), b.final_mse.to_bits());
        assert_eq!(a.epochs, b.epochs);
        assert_eq!(a.weights, b.weights);
        let c = train(&spec, &data, 100, &opts).unwrap();
        assert_ne!(a.weights.params(), c.weights.params());
    }
}

#[test]
fn sweep_is_bit_identical_and_consistent() {
    let data = Dataset::builtin(SystemClass::MetaLead2);
    let specs = vec![
        NetworkSpec::new(5, vec![Activation::Logsig]).unwrap(),
        NetworkSpec::new(5, vec![Activation::Tansig, Activation::Tansig]).unwrap(),
    ];
    let opts = TrainOptions::default().with_max_epochs(30);
    let a = sweep_specs(&specs, &data, 4, 5, &opts).unwrap();
    let b = sweep_specs(&specs, &data, 4, 5, &opts).unwrap();
    for (x, y) in a.iter().zip(&b) {
        let bits = |r: &[f64]| r.iter().map(|v| v.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(&x.per_run_mse), bits(&y.per_run_mse));
        assert_eq!(x.runs, 4);
        let ok: Vec<f64> = x.per_run_mse.iter().copied().filter(|v| v.is_finite()).collect();
        let mean = ok.iter().sum::<f64>() / ok.len() as f64;
        assert!((x.avg_mse - mean).abs() <= 1e-15 * mean.max(1e-300));
        assert_eq!(x.min_mse, ok.iter().copied().fold(f64::INFINITY, f64::min));
        assert!(x.std_mse >= 0.0);
        let best = x.best_weights.as_ref().unwrap();
        assert_eq!(mse_all(best, &data).to_bits(), x.min_mse.to_bits());
    }
    // The seed of run r in config c matches a direct training call.
    let direct = train(&specs[1], &data, run_seed(5, 1, 2), &opts).unwrap();
    assert_eq!(direct.final_mse.to_bits(), a[1].per_run_mse[2].to_bits());
}

#[test]
fn run_seeds_do_not_collide() {
    let mut seen = std::collections::HashSet::new();
    for base in 0..8u64 {
        for c in 0..30 {
            for r in 0..25 {
                assert!(seen.insert(run_seed(base, c, r)));
            }
        }
    }
}

#[test]
fn saved_model_predicts_bit_identically() {
    let data = Dataset::builtin(SystemClass::Pseudo);
    let spec = NetworkSpec::new(15, vec![Activation::Logsig, Activation::Tansig]).unwrap();
    let trained = train(&spec, &data, 3, &TrainOptions::default().with_max_epochs(50)).unwrap().weights;
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("model.json");
    trained.save(&path).unwrap();
    let loaded = NetworkWeights::load(&path).unwrap();
    assert_eq!(loaded, trained);
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..100 {
        let alpha = rng.gen_range(0.9..2.1);
        let a = trained.forward(alpha);
        let b = loaded.forward(alpha);
        assert_eq!(a.tau.to_bits(), b.tau.to_bits());
        assert_eq!(a.xi.to_bits(), b.xi.to_bits());
        assert_eq!(a.extrapolated, b.extrapolated);
    }
}

#[test]
fn corrupt_model_files_are_rejected() {
    let data = Dataset::builtin(SystemClass::Pseudo);
    let spec = NetworkSpec::new(5, vec![Activation::Logsig]).unwrap();
    let w = initialize(&spec, &data, InitScheme::NguyenWidrow, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
    let json = w.to_json();
    assert!(NetworkWeights::from_json("{").is_err());
    assert!(NetworkWeights::from_json(&json.replace("\"format_version\": 1", "\"format_version\": 99")).is_err());
    let mut truncated = w.clone();
    truncated.layers[0].weights.pop();
    assert!(matches!(NetworkWeights::from_json(&truncated.to_json()), Err(NeuralError::Corrupt(_))));
    let missing = std::path::Path::new("/nonexistent/dir/model.json");
    assert!(matches!(NetworkWeights::load(missing), Err(NeuralError::Io(_))));
}

#[test]
fn levenberg_marquardt_descends() {
    for class in [SystemClass::Pseudo, SystemClass::MetaLead1, SystemClass::MetaLead2] {
        let data = Dataset::builtin(class);
        let spec = NetworkSpec::new(5, vec![Activation::Logsig]).unwrap();
        let out = train(&spec, &data, 11, &TrainOptions::default()).unwrap();
        assert!(out.history.len() >= 2);
        for w in out.history.windows(2) {
            assert!(w[1] < w[0]);
        }
        assert!(out.final_mse < 1e-3, "{class}: {}", out.final_mse);
        assert_eq!(out.final_mse.to_bits(), mse_all(&out.weights, &data).to_bits());
    }
}

#[test]
fn holdout_keeps_best_validation_weights() {
    let data = Dataset::builtin(SystemClass::Pseudo);
    let spec = NetworkSpec::new(25, vec![Activation::Tansig]).unwrap();
    let out = train(&spec, &data, 4, &TrainOptions::holdout()).unwrap();
    assert!(matches!(
        out.stop,
        StopReason::ValidationStop | StopReason::MaxEpochs | StopReason::LambdaLimit | StopReason::Goal
    ));
    assert_eq!(out.final_mse.to_bits(), mse_all(&out.weights, &data).to_bits());
}

#[test]
fn smooth_curve_is_learned_to_tight_tolerance() {
    let rows: Vec<DataRow> = (1..=9)
        .map(|k| {
            let alpha = 1.0 + k as f64 / 10.0;
            DataRow {
                alpha,
                tau: 0.5 + 0.3 * alpha,
                xi: (2.0 - alpha).powi(2),
            }
        })
        .collect();
    let data = Dataset::new("smooth", rows).unwrap();
    let spec = NetworkSpec::new(5, vec![Activation::Tansig]).unwrap();
    let out = train(&spec, &data, 8, &TrainOptions::default()).unwrap();
    assert!(out.final_mse < 1e-6, "{}", out.final_mse);
    for (alpha, p) in predict_table(&out.weights, &[1.15, 1.55]) {
        assert!((p.tau - (0.5 + 0.3 * alpha)).abs() < 0.01);
        assert!(!p.extrapolated);
    }
}

#[test]
fn malformed_datasets_are_rejected() {
    let row = |alpha, tau, xi| DataRow { alpha, tau, xi };
    assert!(Dataset::new("empty", vec![]).is_err());
    assert!(Dataset::new("order", vec![row(1.5, 1.0, 0.5), row(1.4, 1.0, 0.5)]).is_err());
    assert!(Dataset::new("nan", vec![row(1.5, f64::NAN, 0.5)]).is_err());
    assert!(Dataset::new("negative", vec![row(1.5, -1.0, 0.5)]).is_err());
}

#[test]
fn fit_csv_round_trips_into_a_dataset() {
    let csv = "alpha,class,criterion,jmin,tau,xi,generations,horizon_s\n\
               1.2,pseudo,ITSE,0.1,0.7,0.9,40,25\n\
               1.2,pseudo,ISE,0.1,0.6,0.8,40,25\n\
               1.4,pseudo,ITSE,0.1,0.8,0.6,40,25\n";
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fit.csv");
    std::fs::write(&path, csv).unwrap();
    let data = Dataset::from_fit_csv(&path, SystemClass::Pseudo, fodamp::refmodel::FitCriterion::Itse).unwrap();
    assert_eq!(data.len(), 2);
    assert_eq!(data.rows()[1].tau, 0.8);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn activations_stay_in_range(x in -1e3f64..1e3) {
        for act in Activation::BOTH {
            let (lo, hi) = act.output_range();
            let y = act.apply(x);
            prop_assert!(y >= lo && y <= hi);
            let d = act.derivative_from_output(y);
            prop_assert!((0.0..=1.0).contains(&d));
        }
    }

    #[test]
    fn affine_maps_invert(min in -10.0f64..10.0, width in 1e-3f64..10.0, x in -20.0f64..20.0) {
        let m = AffineMap::new(min, min + width);
        prop_assert!((m.inverse(m.forward(x)) - x).abs() < 1e-9 * x.abs().max(1.0) / width.min(1.0));
        prop_assert!((m.forward(min) + 1.0).abs() < 1e-12);
        prop_assert!((m.forward(min + width) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn json_round_trip_is_exact(seed in any::<u64>(), spec_idx in 0usize..30) {
        let data = Dataset::builtin(SystemClass::MetaLead2);
        let spec = NetworkSpec::sweep_grid()[spec_idx].clone();
        let w = random_weights(&spec, &data, &mut ChaCha8Rng::seed_from_u64(seed));
        let back = NetworkWeights::from_json(&w.to_json()).unwrap();
        prop_assert_eq!(&back, &w);
    }
}
