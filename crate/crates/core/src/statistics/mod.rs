//! Streaming moments, the 40-bin relative-frequency histogram, and the
//! exponential dimension-scaling fit.

mod fit;

pub use fit::{fit_exponential, ExpFitResult, ExpModel};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const BINS: usize = 40;
pub const BIN_WIDTH: f64 = 0.025;

/// Slack around [0, 1] tolerated (and clamped) when binning coherences.
const RANGE_SLACK: f64 = 1e-12;

/// Mergeable count, raw power sums and an optional fixed-bin histogram.
///
/// Sums are kept uncentred (Σy, Σy², Σy³); the data of interest live in [0, 1]
/// so the third central moment recovered in [`summarize`] keeps ~12 digits.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentAccumulator<T> {
    count: u64,
    sum1: T,
    sum2: T,
    sum3: T,
    bins: Option<[u64; BINS]>,
}

/// Population mean, standard deviation and skewness.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummaryStats<T> {
    pub mean: T,
    pub std: T,
    pub skewness: T,
}

impl<T: Scalar> Default for MomentAccumulator<T> {
    fn default() -> Self {
        Self::new()
    }
}

/// Histogram bin of `y`: half-open `[k w, (k+1) w)` with 1.0 clamped into the last bin.
#[inline]
pub fn bin_index(y: f64) -> usize {
    ((y / BIN_WIDTH).floor().max(0.0) as usize).min(BINS - 1)
}

pub fn bin_center(k: usize) -> f64 {
    (2 * k + 1) as f64 / (2 * BINS) as f64
}

impl<T: Scalar> MomentAccumulator<T> {
    /// Binned accumulator for values in [0, 1].
    pub fn new() -> Self {
        Self {
            count: 0,
            sum1: T::zero(),
            sum2: T::zero(),
            sum3: T::zero(),
            bins: Some([0; BINS]),
        }
    }

    /// Moments only; accepts any finite value (used for un-normalized coherence).
    pub fn raw() -> Self {
        Self {
            bins: None,
            ..Self::new()
        }
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn sums(&self) -> (T, T, T) {
        (self.sum1, self.sum2, self.sum3)
    }

    pub fn bins(&self) -> Option<&[u64; BINS]> {
        self.bins.as_ref()
    }

    pub fn is_binned(&self) -> bool {
        self.bins.is_some()
    }

    pub fn ingest(&mut self, y: T) -> Result<()> {
        if y.is_nan() {
            return Err(Error::NanInput);
        }
        if let Some(bins) = self.bins.as_mut() {
            let v = y.to_f64_lossy();
            if !(-RANGE_SLACK..=1.0 + RANGE_SLACK).contains(&v) {
                return Err(Error::OutOfRange(v));
            }
            bins[bin_index(v)] += 1;
        } else if !y.is_finite() {
            return Err(Error::OutOfRange(y.to_f64_lossy()));
        }
        let y2 = y * y;
        self.count += 1;
        self.sum1 += y;
        self.sum2 += y2;
        self.sum3 += y2 * y;
        Ok(())
    }

    pub fn extend<I: IntoIterator<Item = T>>(&mut self, values: I) -> Result<()> {
        values.into_iter().try_for_each(|y| self.ingest(y))
    }

    /// Adds `other`'s data. A raw accumulator absorbs a binned one by dropping
    /// its histogram, never the other way round.
    pub fn merge(&mut self, other: &Self) {
        self.count += other.count;
        self.sum1 += other.sum1;
        self.sum2 += other.sum2;
        self.sum3 += other.sum3;
        match (self.bins.as_mut(), other.bins.as_ref()) {
            (Some(a), Some(b)) => a.iter_mut().zip(b).for_each(|(x, y)| *x += y),
            (Some(_), None) => self.bins = None,
            _ => {}
        }
    }

    pub fn merged(mut self, other: &Self) -> Self {
        self.merge(other);
        self
    }

    pub fn mean(&self) -> Result<T> {
        if self.count == 0 {
            return Err(Error::Empty);
        }
        Ok(self.sum1 / self.n())
    }

    fn n(&self) -> T {
        T::from_u64(self.count).expect("count is representable")
    }

    pub fn summarize(&self) -> Result<SummaryStats<T>> {
        summarize(self)
    }

    pub fn relative_frequency_percent(&self) -> Result<[T; BINS]> {
        relative_frequency_percent(self)
    }
}

/// `μ = Σy/N`, `σ² = Σy²/N − μ²`, `s = (Σy³/N − 3μΣy²/N + 2μ³)/σ³`.
pub fn summarize<T: Scalar>(acc: &MomentAccumulator<T>) -> Result<SummaryStats<T>> {
    if acc.count < 2 {
        return Err(Error::TooFewValues {
            needed: 2,
            got: acc.count as usize,
        });
    }
    let n = acc.n();
    let mean = acc.sum1 / n;
    let m2 = acc.sum2 / n;
    let m3 = acc.sum3 / n;
    let var = (m2 - mean * mean).max(T::zero());
    let std = var.sqrt();
    if !(std > T::zero()) {
        return Err(Error::SkewnessUndefined);
    }
    let two = T::of(2.0);
    let three = T::of(3.0);
    let central3 = m3 - three * mean * m2 + two * mean * mean * mean;
    Ok(SummaryStats {
        mean,
        std,
        skewness: central3 / (var * std),
    })
}

/// `100 · bins[k] / N`.
pub fn relative_frequency_percent<T: Scalar>(acc: &MomentAccumulator<T>) -> Result<[T; BINS]> {
    let bins = acc.bins.as_ref().ok_or(Error::NoHistogram)?;
    if acc.count == 0 {
        return Err(Error::Empty);
    }
    let n = acc.n();
    let hundred = T::of(100.0);
    let mut out = [T::zero(); BINS];
    for (o, &b) in out.iter_mut().zip(bins) {
        *o = hundred * T::from_u64(b).expect("bin count is representable") / n;
    }
    Ok(out)
}
