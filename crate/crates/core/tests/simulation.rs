use extremal_depth::boxplot::{detect_outliers, functional_boxplot};
use extremal_depth::depth::DepthMethod;
use extremal_depth::sim::{generate_model, run_benchmark, Metric, ModelSpec};

#[test]
fn generated_samples_are_valid() {
    for model in 1..=5 {
        for seed in 0..5 {
            let data = generate_model(&ModelSpec::new(model, seed)).unwrap();
            assert!(
                data.sample.validate().is_empty(),
                "model {model}, seed {seed}"
            );
            assert_eq!((data.sample.n(), data.sample.m()), (100, 50));
        }
    }
}

#[test]
fn outlier_set_is_affine_invariant() {
    for seed in 0..10 {
        let s = generate_model(&ModelSpec::new(4, seed)).unwrap().sample;
        for method in DepthMethod::ALL {
            let base = detect_outliers(&s, method).unwrap();
            for (a, b) in [(2.0, -3.0), (0.25, 10.0), (-1.5, 0.5)] {
                let moved = s.map_values(|_, v| a * v + b);
                assert_eq!(
                    detect_outliers(&moved, method).unwrap(),
                    base,
                    "seed {seed}"
                );
            }
        }
    }
}

#[test]
fn boxplot_median_is_in_box() {
    let s = generate_model(&ModelSpec::new(3, 1)).unwrap().sample;
    for method in DepthMethod::ALL {
        let bp = functional_boxplot(&s, method).unwrap();
        assert!(bp.boxed.members.contains(&bp.median));
        assert_eq!(bp.boxed.members.len(), 50);
    }
}

#[test]
fn vanishing_shift_behaves_like_model1() {
    let spec = |model| ModelSpec {
        magnitude: 0.0,
        ..ModelSpec::new(model, 0)
    };
    let methods = [DepthMethod::Extremal];
    let null = run_benchmark(&[spec(1)], &methods, 20, 3).unwrap();
    let flat = run_benchmark(&[spec(2)], &methods, 20, 3).unwrap();
    let pf1 = null
        .get(1, DepthMethod::Extremal, Metric::Pf)
        .unwrap()
        .mean
        .unwrap();
    let pf2 = flat
        .get(2, DepthMethod::Extremal, Metric::Pf)
        .unwrap()
        .mean
        .unwrap();
    let pc2 = flat
        .get(2, DepthMethod::Extremal, Metric::Pc)
        .unwrap()
        .mean
        .unwrap();
    // Labels still mark the chosen functions, but they are ordinary paths.
    assert!(pf1 < 1.0 && pf2 < 1.0, "{pf1} {pf2}");
    assert!(pc2 < 5.0, "{pc2}");
}
