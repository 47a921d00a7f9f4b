//! Average redit coherence as a ratio of hyperspherical integrals over the
//! first hyperoctant, by tensor-product Gauss-Legendre quadrature.
//!
//! On the octant every Cartesian coefficient is nonnegative, so the integrand
//! `(Σ c_k)² − 1` is smooth and an untuned product rule converges quickly.
//! The `sin^{d−1−k} θ_k` surface weights are folded into the integrand.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const MAX_DIM: usize = 7;
pub const DEFAULT_NODES: usize = 32;

/// Hyperspherical angles `θ_1..θ_{d−1}`, each in `[0, π/2]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarPoint<T> {
    angles: Vec<T>,
}

impl<T: Scalar> PolarPoint<T> {
    pub fn new(angles: Vec<T>) -> Result<Self> {
        if angles.is_empty() {
            return Err(Error::DimensionTooSmall(1));
        }
        if let Some(bad) = angles
            .iter()
            .find(|&&a| !(a >= T::zero() && a <= T::FRAC_PI_2()))
        {
            return Err(Error::InvalidParameter(format!(
                "angle {bad} outside [0, π/2]"
            )));
        }
        Ok(Self { angles })
    }

    pub fn dim(&self) -> usize {
        self.angles.len() + 1
    }

    pub fn angles(&self) -> &[T] {
        &self.angles
    }

    /// `c_1 = cos θ_1`, `c_k = (Π_{j<k} sin θ_j) cos θ_k`, `c_d = Π_j sin θ_j`.
    pub fn to_cartesian(&self) -> Vec<T> {
        let mut out = Vec::with_capacity(self.dim());
        let mut prefix = T::one();
        for &theta in &self.angles {
            out.push(prefix * theta.cos());
            prefix *= theta.sin();
        }
        out.push(prefix);
        out
    }
}

pub fn polar_to_cartesian<T: Scalar>(p: &PolarPoint<T>) -> Vec<T> {
    p.to_cartesian()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureConfig {
    pub dim: usize,
    pub nodes_per_axis: usize,
    /// d = 7 needs `nodes^6` evaluations (≈1.07e9 at 32 nodes) and must be requested.
    pub allow_dim7: bool,
}

impl QuadratureConfig {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            nodes_per_axis: DEFAULT_NODES,
            allow_dim7: false,
        }
    }

    pub fn with_nodes(self, nodes_per_axis: usize) -> Self {
        Self {
            nodes_per_axis,
            ..self
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(2..=MAX_DIM).contains(&self.dim) {
            return Err(Error::QuadratureDimension {
                dim: self.dim,
                max: MAX_DIM,
            });
        }
        if self.nodes_per_axis < 4 {
            return Err(Error::TooFewNodes(self.nodes_per_axis));
        }
        if self.dim == MAX_DIM && !self.allow_dim7 {
            return Err(Error::QuadratureTooLarge(
                (self.nodes_per_axis as u64).pow((self.dim - 1) as u32),
            ));
        }
        Ok(())
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, nodes ascending.
pub fn gauss_legendre<T: Scalar>(n: usize) -> (Vec<T>, Vec<T>) {
    let mut x = vec![T::zero(); n];
    let mut w = vec![T::zero(); n];
    let nf = T::of_usize(n);
    let eps = T::epsilon() * T::of(4.0);
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess for the i-th largest root.
        let mut z = (T::PI() * (T::of_usize(i) + T::of(0.75)) / (nf + T::of(0.5))).cos();
        let mut dp = T::one();
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() <= eps {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        if d.is_finite() {
            dp = d;
        }
        let weight = T::of(2.0) / ((T::one() - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = weight;
        w[n - 1 - i] = weight;
    }
    (x, w)
}

fn legendre_with_derivative<T: Scalar>(n: usize, z: T) -> (T, T) {
    let (mut p0, mut p1) = (T::one(), z);
    for k in 2..=n {
        let kf = T::of_usize(k);
        let p2 = ((kf + kf - T::one()) * z * p1 - (kf - T::one()) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (T::one(), T::zero());
    }
    let d = T::of_usize(n) * (z * p1 - p0) / (z * z - T::one());
    (p1, d)
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
struct Compensated<T> {
    sum: T,
    carry: T,
}

impl<T: Scalar> Compensated<T> {
    #[inline]
    fn add(&mut self, x: T) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn total(&self) -> T {
        self.sum + self.carry
    }
}

struct Axis<T> {
    cos: Vec<T>,
    sin: Vec<T>,
    /// Quadrature weight times the axis' surface-element power of sin θ.
    weight: Vec<T>,
}

/// Numerator `∫ C_l1 ds_d` and denominator `∫ ds_d` over the first hyperoctant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OctantIntegrals<T> {
    pub coherence: T,
    pub area: T,
}

fn axes<T: Scalar>(cfg: &QuadratureConfig) -> Vec<Axis<T>> {
    let (x, w) = gauss_legendre::<T>(cfg.nodes_per_axis);
    let half = T::FRAC_PI_4();
    (0..cfg.dim - 1)
        .map(|k| {
            let power = (cfg.dim - 2 - k) as i32;
            let theta: Vec<T> = x.iter().map(|&xi| half * (xi + T::one())).collect();
            Axis {
                cos: theta.iter().map(|t| t.cos()).collect(),
                sin: theta.iter().map(|t| t.sin()).collect(),
                weight: theta
                    .iter()
                    .zip(&w)
                    .map(|(t, &wi)| half * wi * t.sin().powi(power))
                    .collect(),
            }
        })
        .collect()
}

fn accumulate<T: Scalar>(
    axes: &[Axis<T>],
    prefix: T,
    partial: T,
    weight: T,
    num: &mut Compensated<T>,
    den: &mut Compensated<T>,
) {
    let (axis, rest) = axes.split_first().expect("at least one axis");
    if rest.is_empty() {
        for i in 0..axis.cos.len() {
            let s = partial + prefix * (axis.cos[i] + axis.sin[i]);
            let w = weight * axis.weight[i];
            num.add(w * (s * s - T::one()));
            den.add(w);
        }
    } else {
        for i in 0..axis.cos.len() {
            accumulate(
                rest,
                prefix * axis.sin[i],
                partial + prefix * axis.cos[i],
                weight * axis.weight[i],
                num,
                den,
            );
        }
    }
}

pub fn octant_integrals<T: Scalar>(cfg: &QuadratureConfig) -> Result<OctantIntegrals<T>> {
    cfg.validate()?;
    let axes = axes::<T>(cfg);
    let (first, rest) = axes.split_first().expect("dim ≥ 2");
    let outer: Vec<(T, T)> = (0..cfg.nodes_per_axis)
        .into_par_iter()
        .map(|i| {
            let mut num = Compensated::default();
            let mut den = Compensated::default();
            if rest.is_empty() {
                let s = first.cos[i] + first.sin[i];
                num.add(first.weight[i] * (s * s - T::one()));
                den.add(first.weight[i]);
            } else {
                accumulate(
                    rest,
                    first.sin[i],
                    first.cos[i],
                    first.weight[i],
                    &mut num,
                    &mut den,
                );
            }
            (num.total(), den.total())
        })
        .collect();
    let mut num = Compensated::default();
    let mut den = Compensated::default();
    for (n, d) in outer {
        num.add(n);
        den.add(d);
    }
    Ok(OctantIntegrals {
        coherence: num.total(),
        area: den.total(),
    })
}

/// Haar mean of the raw redit coherence, `∫ C_l1 ds_d / ∫ ds_d`.
pub fn average_redit_coherence<T: Scalar>(cfg: &QuadratureConfig) -> Result<T> {
    let r = octant_integrals::<T>(cfg)?;
    Ok(r.coherence / r.area)
}

/// `∫ ds_d` over the octant; equals `(2π^{d/2} / Γ(d/2)) / 2^d`.
pub fn octant_surface_area<T: Scalar>(dim: usize, cfg: &QuadratureConfig) -> Result<T> {
    let cfg = QuadratureConfig { dim, ..*cfg };
    Ok(octant_integrals::<T>(&cfg)?.area)
}
