//! Ensemble runs: typical (ordered) distributions, quenched disorder, strength
//! and dimension sweeps, and the fixed-coherence perturbation experiment.
//!
//! Base state `i` is drawn from stream `(seed, i)`; its `k`-th disorder copy
//! from stream `(derive_seed(seed, PERTURB_DOMAIN), M·i + k)`. States are
//! processed in fixed blocks whose accumulators are merged in block order, so
//! every report is bit-identical for any rayon pool size.

use std::ops::Range;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::coherence::l1_coherence;
pub use crate::disorder::{DisorderSpec, Target};
use crate::error::{Error, Result};
use crate::sampling::{derive_seed, Family, RngStream};
use crate::states::{Field, Perturber, PureState};
use crate::statistics::{fit_exponential, ExpFitResult, MomentAccumulator, SummaryStats, BINS};

/// Base states per work unit.
pub const BLOCK: usize = 2048;
pub const MIN_STATES: usize = 1000;
pub const PERTURB_DOMAIN: u64 = 0x0070_6572_7475_7262; // "perturb"

pub const DESK_STATES: usize = 100_000;
pub const DESK_CONFIGS: usize = 50;
pub const PAPER_STATES: usize = 1_000_000;
pub const PAPER_CONFIGS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentConfig {
    pub dim: usize,
    pub field: Field,
    pub n_states: usize,
    pub seed: u64,
    pub disorder: Option<DisorderSpec>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub stats: SummaryStats<f64>,
    /// Relative frequency (%) per 0.025-wide bin of the normalized coherence.
    pub frequencies: [f64; BINS],
    pub fit: Option<ExpFitResult<f64>>,
    pub wall_time: Duration,
}

impl ExperimentReport {
    /// Everything except wall time, for reproducibility checks.
    pub fn same_result(&self, other: &Self) -> bool {
        self.config == other.config
            && self.stats == other.stats
            && self.frequencies == other.frequencies
            && self.fit == other.fit
    }
}

fn validate(dim: usize, n_states: usize) -> Result<()> {
    if dim < 2 {
        return Err(Error::DimensionTooSmall(dim));
    }
    if n_states < MIN_STATES {
        return Err(Error::InvalidParameter(format!(
            "n_states must be ≥ {MIN_STATES} (got {n_states})"
        )));
    }
    Ok(())
}

fn blocks(n: usize) -> Vec<Range<usize>> {
    (0..n.div_ceil(BLOCK))
        .map(|b| b * BLOCK..((b + 1) * BLOCK).min(n))
        .collect()
}

/// Runs `work` on every block in the current rayon pool and merges in block order.
fn ensemble<F>(n: usize, work: F) -> Result<MomentAccumulator<f64>>
where
    F: Fn(Range<usize>) -> Result<MomentAccumulator<f64>> + Sync,
{
    let parts: Vec<MomentAccumulator<f64>> = blocks(n)
        .into_par_iter()
        .map(&work)
        .collect::<Result<_>>()?;
    Ok(parts
        .iter()
        .fold(MomentAccumulator::new(), |acc, p| acc.merged(p)))
}

fn finish(
    config: ExperimentConfig,
    acc: &MomentAccumulator<f64>,
    started: Instant,
) -> Result<ExperimentReport> {
    Ok(ExperimentReport {
        config,
        stats: acc.summarize()?,
        frequencies: acc.relative_frequency_percent()?,
        fit: None,
        wall_time: started.elapsed(),
    })
}

pub fn haar_state(dim: usize, field: Field, seed: u64, index: usize) -> Result<PureState<f64>> {
    PureState::sample_haar(dim, field, &mut RngStream::new(seed, index as u64))
}

/// Disorder stream for copy `k` of base state `index`.
pub fn perturbation_stream(
    seed: u64,
    configs_per_state: usize,
    index: usize,
    k: usize,
) -> RngStream {
    let key = derive_seed(seed, PERTURB_DOMAIN);
    RngStream::new(key, (configs_per_state as u64) * (index as u64) + k as u64)
}

/// Normalized coherence of `n_states` Haar states.
pub fn run_typical(
    dim: usize,
    field: Field,
    n_states: usize,
    seed: u64,
) -> Result<ExperimentReport> {
    validate(dim, n_states)?;
    let started = Instant::now();
    let acc = ensemble(n_states, |range| {
        let mut acc = MomentAccumulator::new();
        for i in range {
            acc.ingest(l1_coherence(&haar_state(dim, field, seed, i)?).normalized)?;
        }
        Ok(acc)
    })?;
    finish(
        ExperimentConfig {
            dim,
            field,
            n_states,
            seed,
            disorder: None,
        },
        &acc,
        started,
    )
}

/// Quenched average of the normalized coherence over `M` disorder copies of one base state.
pub fn quenched_average(
    base: &PureState<f64>,
    perturber: &Perturber<f64>,
    seed: u64,
    configs_per_state: usize,
    index: usize,
    scratch: &mut PureState<f64>,
) -> f64 {
    let mut total = 0.0;
    for k in 0..configs_per_state {
        let mut stream = perturbation_stream(seed, configs_per_state, index, k);
        perturber.apply(base, &mut stream, scratch);
        total += l1_coherence(scratch).normalized;
    }
    total / configs_per_state as f64
}

/// One quenched-average entry per base state.
pub fn run_disordered(
    dim: usize,
    field: Field,
    n_states: usize,
    disorder: &DisorderSpec,
    seed: u64,
) -> Result<ExperimentReport> {
    validate(dim, n_states)?;
    disorder.validate()?;
    disorder.check_field(field)?;
    let perturber = Perturber::<f64>::new(disorder)?;
    let m = disorder.configs_per_state;
    let started = Instant::now();
    let acc = ensemble(n_states, |range| {
        let mut acc = MomentAccumulator::new();
        let mut scratch = PureState::basis(dim, field, 0)?;
        for i in range {
            let base = haar_state(dim, field, seed, i)?;
            acc.ingest(quenched_average(
                &base,
                &perturber,
                seed,
                m,
                i,
                &mut scratch,
            ))?;
        }
        Ok(acc)
    })?;
    finish(
        ExperimentConfig {
            dim,
            field,
            n_states,
            seed,
            disorder: Some(*disorder),
        },
        &acc,
        started,
    )
}

/// Gaussian real-part disorder at each strength in `gammas`, same base ensemble throughout.
pub fn run_strength_sweep(
    dim: usize,
    field: Field,
    n_states: usize,
    gammas: &[f64],
    configs_per_state: usize,
    seed: u64,
) -> Result<Vec<ExperimentReport>> {
    if gammas.is_empty() {
        return Err(Error::InvalidParameter("gammas must be nonempty".into()));
    }
    gammas
        .iter()
        .map(|&gamma| {
            let spec = DisorderSpec::new(
                Family::Gaussian,
                gamma,
                Target::RealParts,
                configs_per_state,
            )?;
            run_disordered(dim, field, n_states, &spec, seed)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnnormalizedRow {
    pub dim: usize,
    /// `(d − 1) μ_d`, the mean raw l1 coherence.
    pub mean: f64,
    /// `(d − 1) σ_d`.
    pub std: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DimensionSweep {
    pub field: Field,
    pub reports: Vec<ExperimentReport>,
    /// `None` when fewer than four dimensions were swept.
    pub fit_std: Option<ExpFitResult<f64>>,
    pub fit_skew: Option<ExpFitResult<f64>>,
    pub unnormalized: Vec<UnnormalizedRow>,
}

pub fn run_dimension_sweep(
    field: Field,
    dims: &[usize],
    n_states: usize,
    seed: u64,
) -> Result<DimensionSweep> {
    if let Some(&d) = dims.iter().find(|&&d| !(2..=10).contains(&d)) {
        return Err(Error::InvalidParameter(format!(
            "sweep dimensions must lie in 2..=10 (got {d})"
        )));
    }
    let reports = dims
        .iter()
        .map(|&d| run_typical(d, field, n_states, seed))
        .collect::<Result<Vec<_>>>()?;
    let (fit_std, fit_skew) = if dims.len() >= 4 {
        let std: Vec<(usize, f64)> = reports
            .iter()
            .map(|r| (r.config.dim, r.stats.std))
            .collect();
        let skew: Vec<(usize, f64)> = reports
            .iter()
            .map(|r| (r.config.dim, r.stats.skewness))
            .collect();
        (Some(fit_exponential(&std)?), Some(fit_exponential(&skew)?))
    } else {
        (None, None)
    };
    let unnormalized = reports
        .iter()
        .map(|r| {
            let steps = (r.config.dim - 1) as f64;
            UnnormalizedRow {
                dim: r.config.dim,
                mean: steps * r.stats.mean,
                std: steps * r.stats.std,
            }
        })
        .collect();
    Ok(DimensionSweep {
        field,
        reports,
        fit_std,
        fit_skew,
        unnormalized,
    })
}

pub const DEFAULT_WINDOW: f64 = 0.01;
pub const PAPER_POOL: usize = 10_000_000;
pub const DESK_POOL: usize = 1_000_000;

/// Qubits whose normalized coherence falls in the open window `(m_in − h, m_in + h)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionalSpec {
    pub m_in: f64,
    pub window_halfwidth: f64,
    pub base_pool: usize,
}

impl ConditionalSpec {
    pub fn new(m_in: f64) -> Self {
        Self {
            m_in,
            window_halfwidth: DEFAULT_WINDOW,
            base_pool: DESK_POOL,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let h = self.window_halfwidth;
        if !(h > 0.0 && self.m_in - h > 0.0 && self.m_in + h < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "window ({}, {}) must lie inside (0, 1)",
                self.m_in - h,
                self.m_in + h
            )));
        }
        if self.base_pool == 0 {
            return Err(Error::InvalidParameter("base_pool must be positive".into()));
        }
        Ok(())
    }

    pub fn contains(&self, c: f64) -> bool {
        (c - self.m_in).abs() < self.window_halfwidth
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalOutcome {
    pub m_in: f64,
    /// Mean normalized coherence over all perturbed copies of the selected states.
    pub m_f: f64,
    pub selected: usize,
    /// Relative frequency (%) of the perturbed-state coherences.
    pub frequencies: [f64; BINS],
    pub stats: SummaryStats<f64>,
}

/// Qubit-only fixed-coherence experiment: select, perturb `M` times, and histogram every copy.
pub fn run_conditional(
    spec: &ConditionalSpec,
    disorder: &DisorderSpec,
    seed: u64,
) -> Result<ConditionalOutcome> {
    const DIM: usize = 2;
    const FIELD: Field = Field::Complex;
    spec.validate()?;
    disorder.validate()?;
    let perturber = Perturber::<f64>::new(disorder)?;
    let m = disorder.configs_per_state;

    let selected: Vec<(usize, PureState<f64>)> = blocks(spec.base_pool)
        .into_par_iter()
        .map(|range| -> Result<Vec<_>> {
            let mut out = Vec::new();
            for i in range {
                let st = haar_state(DIM, FIELD, seed, i)?;
                if spec.contains(l1_coherence(&st).normalized) {
                    out.push((i, st));
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    if selected.is_empty() {
        return Err(Error::EmptyWindow {
            m_in: spec.m_in,
            pool: spec.base_pool,
        });
    }

    let acc = ensemble(selected.len(), |range| {
        let mut acc = MomentAccumulator::new();
        let mut scratch = PureState::basis(DIM, FIELD, 0)?;
        for (index, base) in &selected[range] {
            for k in 0..m {
                let mut stream = perturbation_stream(seed, m, *index, k);
                perturber.apply(base, &mut stream, &mut scratch);
                acc.ingest(l1_coherence(&scratch).normalized)?;
            }
        }
        Ok(acc)
    })?;
    Ok(ConditionalOutcome {
        m_in: spec.m_in,
        m_f: acc.mean()?,
        selected: selected.len(),
        frequencies: acc.relative_frequency_percent()?,
        stats: acc.summarize()?,
    })
}
