use haar_coherence::coherence::l1_coherence_from_density;
use haar_coherence::experiments::{
    haar_state, run_dimension_sweep, run_disordered, run_strength_sweep, run_typical,
};
use haar_coherence::statistics::MomentAccumulator;
use haar_coherence::{analytic_mean, l1_coherence, DisorderSpec, Family, Field, Target};

const SEED: u64 = 20_240_611;

#[test]
fn shortcut_matches_density_matrix() {
    for field in [Field::Real, Field::Complex] {
        for dim in 2..=8 {
            for i in 0..10_000 {
                let s = haar_state(dim, field, SEED, i).unwrap();
                let fast = l1_coherence(&s).raw;
                let slow = l1_coherence_from_density(&s);
                assert!(
                    (fast - slow).abs() < 1e-12,
                    "d={dim} {field} #{i}: {fast} vs {slow}"
                );
            }
        }
    }
}

#[test]
fn sample_mean_matches_analytic_mean() {
    for field in [Field::Real, Field::Complex] {
        for dim in [2, 3, 5, 8] {
            let r = run_typical(dim, field, 100_000, SEED).unwrap();
            let expect = analytic_mean::<f64>(dim, field) / (dim - 1) as f64;
            let se = r.stats.std / (100_000f64).sqrt();
            assert!(
                (r.stats.mean - expect).abs() < 3.0 * se,
                "d={dim} {field}: {} vs {expect}",
                r.stats.mean
            );
        }
    }
}

#[test]
fn basis_permutation_preserves_haar_statistics() {
    // Component weights of permuted states must be distributed like the originals,
    // and coherence is permutation invariant state by state.
    let dim = 4;
    let perm = [2, 0, 3, 1];
    let n = 50_000;
    let mut orig = MomentAccumulator::new();
    let mut moved = MomentAccumulator::new();
    for i in 0..n {
        let a = haar_state(dim, Field::Complex, SEED, i).unwrap();
        let b = haar_state(dim, Field::Complex, SEED + 1, i).unwrap();
        let p = b.permuted(&perm).unwrap();
        assert!((l1_coherence(&p).raw - l1_coherence(&b).raw).abs() < 1e-14);
        orig.ingest(a.amplitudes()[0].norm_sqr()).unwrap();
        moved.ingest(p.amplitudes()[0].norm_sqr()).unwrap();
    }
    let (fo, fm) = (
        orig.relative_frequency_percent().unwrap(),
        moved.relative_frequency_percent().unwrap(),
    );
    for k in 0..fo.len() {
        // Binomial standard error of the difference of two percentages.
        let p = (fo[k] + fm[k]) / 200.0;
        let se = 100.0 * (2.0 * p * (1.0 - p) / n as f64).sqrt();
        assert!(
            (fo[k] - fm[k]).abs() <= 5.0 * se + 1e-9,
            "bin {k}: {} vs {}",
            fo[k],
            fm[k]
        );
    }
}

#[test]
fn disorder_narrows_and_symmetrizes() {
    let n = 20_000;
    for field in [Field::Real, Field::Complex] {
        for dim in 2..=4 {
            let ordered = run_typical(dim, field, n, SEED).unwrap().stats;
            for family in Family::ALL {
                let spec = DisorderSpec::new(family, 0.5, Target::RealParts, 50).unwrap();
                let dis = run_disordered(dim, field, n, &spec, SEED).unwrap().stats;
                assert!(
                    dis.std < ordered.std,
                    "d={dim} {field} {family}: std {} vs {}",
                    dis.std,
                    ordered.std
                );
                assert!(
                    dis.skewness.abs() < ordered.skewness.abs(),
                    "d={dim} {field} {family}: skew {} vs {}",
                    dis.skewness,
                    ordered.skewness
                );
            }
        }
    }
}

#[test]
fn imaginary_and_real_targets_agree() {
    let n = 100_000;
    let real = DisorderSpec::new(Family::Gaussian, 0.5, Target::RealParts, 50).unwrap();
    let imag = DisorderSpec::new(Family::Gaussian, 0.5, Target::ImagParts, 50).unwrap();
    let a = run_disordered(3, Field::Complex, n, &real, SEED).unwrap();
    let b = run_disordered(3, Field::Complex, n, &imag, SEED).unwrap();
    let worst = a
        .frequencies
        .iter()
        .zip(&b.frequencies)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    assert!(worst < 0.5, "max bin difference {worst} pp");
}

#[test]
fn vanishing_disorder_reproduces_ordered_run() {
    let n = 20_000;
    let ordered = run_typical(2, Field::Complex, n, SEED).unwrap();
    let sweep = run_strength_sweep(2, Field::Complex, n, &[1e-6], 5, SEED).unwrap();
    let s = &sweep[0].stats;
    assert!((s.mean - ordered.stats.mean).abs() < 1e-5);
    assert!((s.std - ordered.stats.std).abs() < 1e-5);
    assert!((s.skewness - ordered.stats.skewness).abs() < 1e-4);
}

#[test]
fn spread_and_asymmetry_shrink_with_dimension() {
    for field in [Field::Real, Field::Complex] {
        let sweep = run_dimension_sweep(field, &[2, 3, 4, 5, 6, 7], 100_000, SEED).unwrap();
        for w in sweep.reports.windows(2) {
            let (a, b) = (&w[0].stats, &w[1].stats);
            assert!(
                b.std < a.std,
                "{field} d={}: std {} !< {}",
                w[1].config.dim,
                b.std,
                a.std
            );
            assert!(
                b.skewness.abs() < a.skewness.abs(),
                "{field} d={}: |skew| {} !< {}",
                w[1].config.dim,
                b.skewness,
                a.skewness
            );
        }
    }
}

#[test]
fn unnormalized_mean_grows_linearly() {
    let sweep = run_dimension_sweep(Field::Complex, &[2, 3, 4, 5], 100_000, SEED).unwrap();
    let row = sweep.unnormalized.iter().find(|r| r.dim == 4).unwrap();
    let expect = 3.0 * std::f64::consts::FRAC_PI_4;
    assert!((row.mean - expect).abs() < 0.01, "{} vs {expect}", row.mean);
}

#[test]
fn typical_run_examples() {
    let r = run_typical(7, Field::Complex, 1_000_000, SEED).unwrap();
    assert!(
        (r.stats.skewness + 0.561).abs() < 0.03,
        "s7 = {}",
        r.stats.skewness
    );
    let r = run_typical(5, Field::Real, 1_000_000, SEED).unwrap();
    assert!(
        (r.stats.mean - 0.637).abs() < 0.005,
        "mean {}",
        r.stats.mean
    );
    assert!(
        (r.stats.skewness + 0.302).abs() < 0.03,
        "s5 = {}",
        r.stats.skewness
    );
}

#[test]
fn reports_ignore_worker_count() {
    let spec = DisorderSpec::new(Family::CauchyLorentz, 0.5, Target::BothParts, 7).unwrap();
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| run_disordered(3, Field::Complex, 10_000, &spec, SEED).unwrap())
    };
    assert!(run(1).same_result(&run(3)));
}
