use haar_coherence::experiments::run_dimension_sweep;
use haar_coherence::Field;

const DIMS: [usize; 6] = [2, 3, 4, 5, 6, 7];

fn within(x: f64, target: f64, rel: f64) -> bool {
    (x - target).abs() <= rel * target.abs()
}

#[test]
fn qudit_spread_fit_at_full_scale() {
    let sweep = run_dimension_sweep(Field::Complex, &DIMS, 1_000_000, 5).unwrap();
    let fit = sweep.fit_std.unwrap();
    assert!(fit.converged);
    assert!(within(fit.alpha, 0.419, 0.1), "{fit:?}");
    assert!(within(fit.beta, 0.579, 0.1), "{fit:?}");
    assert!(within(fit.gamma, 0.0903, 0.1), "{fit:?}");
    assert!(fit.sse <= 1e-5, "sse {}", fit.sse);
}

#[test]
fn redit_skewness_fit_at_full_scale() {
    let sweep = run_dimension_sweep(Field::Real, &DIMS, 1_000_000, 5).unwrap();
    let fit = sweep.fit_skew.unwrap();
    assert!(fit.converged);
    assert!(within(fit.alpha, -0.923, 0.1), "{fit:?}");
    assert!(within(fit.beta, 0.697, 0.1), "{fit:?}");
    assert!(within(fit.gamma, -0.267, 0.1), "{fit:?}");
}
