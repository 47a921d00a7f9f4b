use haar_coherence::coherence::l1_coherence_from_density;
use haar_coherence::experiments::haar_state;
use haar_coherence::statistics::{
    fit_exponential, summarize, ExpModel, MomentAccumulator, SummaryStats,
};
use haar_coherence::{l1_coherence, DisorderSpec, Family, Field, RngStream, Target};
use proptest::prelude::*;

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1e-300)
}

fn stats_close(a: &SummaryStats<f64>, b: &SummaryStats<f64>, rel: f64) -> bool {
    close(a.mean, b.mean, rel) && close(a.std, b.std, rel) && close(a.skewness, b.skewness, rel)
}

fn acc(values: &[f64]) -> MomentAccumulator<f64> {
    let mut a = MomentAccumulator::new();
    a.extend(values.iter().copied()).unwrap();
    a
}

fn sample() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..=1.0, 3..200)
}

fn field() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::Real), Just(Field::Complex)]
}

proptest! {
    #[test]
    fn merge_is_associative(a in sample(), b in sample(), c in sample()) {
        let (a, b, c) = (acc(&a), acc(&b), acc(&c));
        let left = a.clone().merged(&b).merged(&c);
        let right = a.merged(&b.merged(&c));
        prop_assert_eq!(left.count(), right.count());
        prop_assert_eq!(left.bins(), right.bins());
        if let (Ok(l), Ok(r)) = (summarize(&left), summarize(&right)) {
            prop_assert!(stats_close(&l, &r, 1e-9), "{l:?} vs {r:?}");
        }
    }

    #[test]
    fn ingest_order_does_not_matter(v in sample()) {
        let forward = acc(&v);
        let mut rev = v.clone();
        rev.reverse();
        let backward = acc(&rev);
        if let (Ok(f), Ok(b)) = (forward.summarize(), backward.summarize()) {
            prop_assert!(stats_close(&f, &b, 1e-9), "{f:?} vs {b:?}");
        }
    }

    #[test]
    fn mirrored_sample_negates_skewness(v in sample()) {
        let s = acc(&v).summarize();
        prop_assume!(s.as_ref().is_ok_and(|s| s.std > 0.05));
        let s = s.unwrap();
        // Mirror about the mean, then shift back into [0, 1] (shifts leave skewness unchanged).
        let mirrored: Vec<f64> = v.iter().map(|y| 1.0 - y).collect();
        let m = acc(&mirrored).summarize().unwrap();
        prop_assert!((m.skewness + s.skewness).abs() < 1e-12, "{} vs {}", m.skewness, s.skewness);
        prop_assert!(close(m.std, s.std, 1e-9));
    }

    #[test]
    fn histogram_counts_every_value(v in sample()) {
        let a = acc(&v);
        prop_assert_eq!(a.bins().unwrap().iter().sum::<u64>(), a.count());
        let f = a.relative_frequency_percent().unwrap();
        prop_assert!((f.iter().sum::<f64>() - 100.0).abs() < 1e-9);
    }

    #[test]
    fn haar_states_are_normalized_and_shortcut_holds(
        dim in 2usize..=8, field in field(), seed in any::<u64>(), index in 0usize..1_000_000,
    ) {
        let s = haar_state(dim, field, seed, index).unwrap();
        prop_assert!((s.norm() - 1.0).abs() < 1e-12);
        let c = l1_coherence(&s);
        prop_assert!((c.raw - l1_coherence_from_density(&s)).abs() < 1e-12);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&c.normalized));
    }

    #[test]
    fn perturbed_states_are_normalized(
        dim in 2usize..=6,
        family in prop_oneof![Just(Family::Gaussian), Just(Family::Uniform), Just(Family::CauchyLorentz)],
        target in prop_oneof![Just(Target::RealParts), Just(Target::ImagParts), Just(Target::BothParts)],
        siqr in 1e-6f64..3.0,
        seed in any::<u64>(),
    ) {
        let base = haar_state(dim, Field::Complex, seed, 0).unwrap();
        let spec = DisorderSpec::new(family, siqr, target, 1).unwrap();
        let mut stream = RngStream::new(seed, 1);
        let p = base.perturb(&spec, &mut stream).unwrap();
        prop_assert!((p.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fit_recovers_noise_free_models(
        alpha in 0.05f64..2.0, beta in 0.2f64..1.2, gamma in -0.5f64..0.5, negate in any::<bool>(),
    ) {
        let alpha = if negate { -alpha } else { alpha };
        let model = ExpModel { alpha, beta, gamma };
        let points: Vec<(usize, f64)> = (2..=7).map(|d| (d, model.eval(d as f64))).collect();
        let fit = fit_exponential(&points).unwrap();
        prop_assert!(fit.converged);
        prop_assert!((fit.alpha - alpha).abs() < 1e-6, "{fit:?}");
        prop_assert!((fit.beta - beta).abs() < 1e-6, "{fit:?}");
        prop_assert!((fit.gamma - gamma).abs() < 1e-6, "{fit:?}");
    }
}

#[test]
fn fit_optimum_is_stationary() {
    // Noisy points: the optimum has non-zero SSE and the gradient must vanish there.
    let noise = [0.004, -0.003, 0.002, -0.001, 0.0015, -0.0025];
    let truth = ExpModel {
        alpha: 0.419,
        beta: 0.579,
        gamma: 0.0903,
    };
    let points: Vec<(usize, f64)> = (2..=7)
        .zip(noise)
        .map(|(d, e)| (d, truth.eval(d as f64) + e))
        .collect();
    let fit = fit_exponential(&points).unwrap();
    assert!(fit.sse > 0.0);
    assert!((fit.model().sse(&points) - fit.sse).abs() < 1e-12);
    let g = fit.model().sse_gradient(&points);
    let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
    assert!(norm < 1e-6 * (1.0 + fit.sse), "gradient norm {norm}");
}
