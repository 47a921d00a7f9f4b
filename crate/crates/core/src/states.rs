//! Pure states over the real or complex field and their Haar-uniform sampling.

use num_complex::Complex;

use crate::disorder::{DisorderSpec, Target};
use crate::error::{Error, Result};
use crate::sampling::{RngStream, ScalarDistribution};
use crate::scalar::Scalar;

/// Field of the amplitudes: redits are real, qudits complex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    Real,
    Complex,
}

impl Field {
    pub fn name(self) -> &'static str {
        match self {
            Field::Real => "real",
            Field::Complex => "complex",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "real" | "redit" | "r" => Some(Field::Real),
            "complex" | "qudit" | "c" => Some(Field::Complex),
            _ => None,
        }
    }

    /// Independent real parameters per amplitude.
    pub fn parts(self) -> usize {
        match self {
            Field::Real => 1,
            Field::Complex => 2,
        }
    }
}

impl std::fmt::Display for Field {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Unit vector of amplitudes in the computational basis.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState<T> {
    field: Field,
    amplitudes: Vec<Complex<T>>,
}

fn check_dim(dim: usize) -> Result<()> {
    if dim < 2 {
        Err(Error::DimensionTooSmall(dim))
    } else {
        Ok(())
    }
}

#[inline]
fn norm<T: Scalar>(amps: &[Complex<T>]) -> T {
    amps.iter().map(|a| a.norm_sqr()).sum::<T>().sqrt()
}

#[inline]
fn scale<T: Scalar>(amps: &mut [Complex<T>], by: T) {
    for a in amps {
        a.re *= by;
        a.im *= by;
    }
}

impl<T: Scalar> PureState<T> {
    /// Normalizes `amplitudes` into a state. Real-field states must have zero imaginary parts.
    pub fn from_amplitudes(field: Field, mut amplitudes: Vec<Complex<T>>) -> Result<Self> {
        check_dim(amplitudes.len())?;
        if field == Field::Real && amplitudes.iter().any(|a| a.im != T::zero()) {
            return Err(Error::InvalidParameter(
                "real-field state with nonzero imaginary part".into(),
            ));
        }
        let n = norm(&amplitudes);
        if !(n > T::tiny_norm()) || !n.is_finite() {
            return Err(Error::InvalidParameter(
                "amplitude vector has no usable norm".into(),
            ));
        }
        scale(&mut amplitudes, n.recip());
        Ok(Self { field, amplitudes })
    }

    pub fn from_real(coefficients: &[T]) -> Result<Self> {
        Self::from_amplitudes(
            Field::Real,
            coefficients
                .iter()
                .map(|&c| Complex::new(c, T::zero()))
                .collect(),
        )
    }

    /// Basis vector `|k⟩`.
    pub fn basis(dim: usize, field: Field, k: usize) -> Result<Self> {
        check_dim(dim)?;
        if k >= dim {
            return Err(Error::InvalidParameter(format!(
                "basis index {k} ≥ dim {dim}"
            )));
        }
        let mut amplitudes = vec![Complex::new(T::zero(), T::zero()); dim];
        amplitudes[k].re = T::one();
        Ok(Self { field, amplitudes })
    }

    pub fn equal_superposition(dim: usize, field: Field) -> Result<Self> {
        check_dim(dim)?;
        let a = T::of_usize(dim).sqrt().recip();
        Ok(Self {
            field,
            amplitudes: vec![Complex::new(a, T::zero()); dim],
        })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn norm(&self) -> T {
        norm(&self.amplitudes)
    }

    /// State with amplitude `j` moved to position `perm[j]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let d = self.dim();
        let mut seen = vec![false; d];
        if perm.len() != d
            || perm
                .iter()
                .any(|&p| p >= d || std::mem::replace(&mut seen[p], true))
        {
            return Err(Error::InvalidParameter(
                "not a permutation of the basis".into(),
            ));
        }
        let mut amplitudes = self.amplitudes.clone();
        for (j, &p) in perm.iter().enumerate() {
            amplitudes[p] = self.amplitudes[j];
        }
        Ok(Self {
            field: self.field,
            amplitudes,
        })
    }

    /// Multiplies amplitude `j` by `e^{iφ}`; only meaningful for complex states.
    pub fn with_phase(&self, j: usize, phase: T) -> Self {
        let mut out = self.clone();
        out.amplitudes[j] *= Complex::from_polar(T::one(), phase);
        out
    }

    /// Haar-uniform pure state: every free real parameter i.i.d. N(0, 1), then normalized.
    pub fn sample_haar(dim: usize, field: Field, stream: &mut RngStream) -> Result<Self> {
        check_dim(dim)?;
        let mut amplitudes = vec![Complex::new(T::zero(), T::zero()); dim];
        fill_haar(&mut amplitudes, field, stream);
        Ok(Self { field, amplitudes })
    }

    /// Glassy perturbation of this state; see [`Perturber`].
    pub fn perturb(&self, disorder: &DisorderSpec, stream: &mut RngStream) -> Result<Self> {
        let perturber = Perturber::new(disorder)?;
        perturber.check(self)?;
        let mut out = self.clone();
        perturber.apply(self, stream, &mut out);
        Ok(out)
    }
}

fn fill_haar<T: Scalar>(amps: &mut [Complex<T>], field: Field, stream: &mut RngStream) {
    loop {
        for a in amps.iter_mut() {
            a.re = stream.standard_normal();
            a.im = match field {
                Field::Real => T::zero(),
                Field::Complex => stream.standard_normal(),
            };
        }
        let n = norm(amps);
        if n > T::tiny_norm() {
            scale(amps, n.recip());
            return;
        }
    }
}

/// A validated disorder law ready to be applied repeatedly.
///
/// Each targeted real parameter `v` of the base state is replaced by a draw
/// from the disorder family centred at `v`; untargeted parameters are copied
/// and the result renormalized.
#[derive(Debug, Clone, Copy)]
pub struct Perturber<T> {
    dist: ScalarDistribution<T>,
    target: Target,
}

impl<T: Scalar> Perturber<T> {
    pub fn new(disorder: &DisorderSpec) -> Result<Self> {
        disorder.validate()?;
        Ok(Self {
            dist: ScalarDistribution::new(disorder.family, T::zero(), T::of(disorder.siqr))?,
            target: disorder.target,
        })
    }

    pub fn check(&self, state: &PureState<T>) -> Result<()> {
        if state.field == Field::Real && self.target != Target::RealParts {
            return Err(Error::TargetNotReal {
                target: self.target.name(),
            });
        }
        Ok(())
    }

    /// Writes a perturbed copy of `base` into `out`, reusing its buffer.
    /// The caller has already run [`Perturber::check`].
    pub fn apply(&self, base: &PureState<T>, stream: &mut RngStream, out: &mut PureState<T>) {
        out.field = base.field;
        out.amplitudes.clear();
        out.amplitudes.extend_from_slice(&base.amplitudes);
        let (re, im) = (self.target.hits_real(), self.target.hits_imag());
        loop {
            for (o, b) in out.amplitudes.iter_mut().zip(&base.amplitudes) {
                if re {
                    o.re = self.dist.centered_at(b.re).draw(stream);
                }
                if im {
                    o.im = self.dist.centered_at(b.im).draw(stream);
                }
            }
            let n = norm(&out.amplitudes);
            if n > T::tiny_norm() && n.is_finite() {
                scale(&mut out.amplitudes, n.recip());
                return;
            }
        }
    }
}
