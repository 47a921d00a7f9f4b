//! Deterministic random-number streams and the three scalar distributions used
//! for Haar generation and disorder injection.
//!
//! Every stream is addressed by `(master_seed, stream_index)`. The key is hashed
//! into a SplitMix64 starting state, so creating a stream costs two mixing
//! rounds and the stream for base state `i` never depends on how many workers
//! ran before it.

use rand_core::{impls, RngCore};
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Φ⁻¹(0.75): a normal distribution with standard deviation σ has SIQR `Z_075 * σ`.
pub const Z_075: f64 = 0.674_489_750_196_081_7;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
const STREAM_MULTIPLIER: u64 = 0xD1B5_4A32_D192_ED03;

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives an independent master key for a sub-domain of draws (for example all
/// perturbation streams of one experiment) from a user seed.
pub fn derive_seed(master_seed: u64, domain: u64) -> u64 {
    mix64(mix64(master_seed ^ GOLDEN_GAMMA).wrapping_add(domain.wrapping_mul(STREAM_MULTIPLIER)))
}

/// SplitMix64 generator keyed by `(master_seed, stream_index)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RngStream {
    master_seed: u64,
    stream_index: u64,
    state: u64,
}

impl RngStream {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        let state = mix64(master_seed.wrapping_add(GOLDEN_GAMMA))
            ^ mix64(stream_index.wrapping_mul(STREAM_MULTIPLIER).wrapping_add(1));
        Self {
            master_seed,
            stream_index,
            state,
        }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream_index(&self) -> u64 {
        self.stream_index
    }

    #[inline]
    pub fn next_raw(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        mix64(self.state)
    }

    /// Uniform on [0, 1) with 53 random mantissa bits.
    #[inline]
    pub fn next_unit(&mut self) -> f64 {
        (self.next_raw() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on the open interval (0, 1); zero is redrawn.
    #[inline]
    pub fn next_open_unit(&mut self) -> f64 {
        loop {
            let u = self.next_unit();
            if u > 0.0 {
                return u;
            }
        }
    }

    #[inline]
    pub fn standard_normal<T: Scalar>(&mut self) -> T {
        T::of(draw_standard_normal(self))
    }
}

impl RngCore for RngStream {
    #[inline]
    fn next_u32(&mut self) -> u32 {
        (self.next_raw() >> 32) as u32
    }

    #[inline]
    fn next_u64(&mut self) -> u64 {
        self.next_raw()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        impls::fill_bytes_via_next(self, dst)
    }
}

/// One draw from N(0, 1) (ziggurat).
#[inline]
pub fn draw_standard_normal(stream: &mut RngStream) -> f64 {
    StandardNormal.sample(stream)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Gaussian,
    Uniform,
    CauchyLorentz,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Gaussian, Family::Uniform, Family::CauchyLorentz];

    pub fn name(self) -> &'static str {
        match self {
            Family::Gaussian => "gaussian",
            Family::Uniform => "uniform",
            Family::CauchyLorentz => "cauchy",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gaussian" | "g" | "normal" => Some(Family::Gaussian),
            "uniform" | "u" => Some(Family::Uniform),
            "cauchy" | "cauchy-lorentz" | "c-l" | "cl" | "lorentz" => Some(Family::CauchyLorentz),
            _ => None,
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A Gaussian, uniform or Cauchy-Lorentz law parameterized by location and
/// semi-interquartile range, so the three families share one strength scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarDistribution<T> {
    family: Family,
    location: T,
    siqr: T,
}

impl<T: Scalar> ScalarDistribution<T> {
    pub fn new(family: Family, location: T, siqr: T) -> Result<Self> {
        if !(siqr > T::zero()) || !siqr.is_finite() {
            return Err(Error::InvalidSiqr(siqr.to_f64_lossy()));
        }
        Ok(Self {
            family,
            location,
            siqr,
        })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn location(&self) -> T {
        self.location
    }

    pub fn siqr(&self) -> T {
        self.siqr
    }

    /// Same family and spread, moved to a new location.
    #[inline]
    pub fn centered_at(&self, location: T) -> Self {
        Self { location, ..*self }
    }

    /// Standard deviation of the Gaussian with this SIQR.
    pub fn gaussian_sigma(&self) -> T {
        self.siqr / T::of(Z_075)
    }

    /// Support `[a, b]` of the uniform law with this SIQR, `b - a = 4 siqr`.
    pub fn uniform_bounds(&self) -> (T, T) {
        let half = self.siqr + self.siqr;
        (self.location - half, self.location + half)
    }

    /// Cauchy-Lorentz quantile function `x0 + γ tan(π(F - 1/2))`.
    #[inline]
    pub fn cauchy_quantile(&self, f: T) -> T {
        self.location + self.siqr * (T::PI() * (f - T::of(0.5))).tan()
    }

    #[inline]
    pub fn draw(&self, stream: &mut RngStream) -> T {
        match self.family {
            Family::Gaussian => {
                self.location + self.gaussian_sigma() * stream.standard_normal::<T>()
            }
            Family::Uniform => {
                let (a, b) = self.uniform_bounds();
                a + (b - a) * T::of(stream.next_unit())
            }
            Family::CauchyLorentz => self.cauchy_quantile(T::of(stream.next_open_unit())),
        }
    }
}

/// Free-function form of [`ScalarDistribution::draw`].
#[inline]
pub fn draw_from<T: Scalar>(dist: &ScalarDistribution<T>, stream: &mut RngStream) -> T {
    dist.draw(stream)
}
