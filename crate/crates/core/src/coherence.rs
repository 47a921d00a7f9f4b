//! l1-norm of coherence in the computational basis.
//!
//! For a pure state ρ = |ψ⟩⟨ψ| the off-diagonal sum collapses to
//! `Σ_{i≠j} |a_i||a_j| = (Σ_j |a_j|)² − Σ_j |a_j|² = (Σ_j |a_j|)² − 1`,
//! so the measure costs one pass over the amplitudes.

use crate::scalar::Scalar;
use crate::states::{Field, PureState};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherenceValue<T> {
    /// `C_l1`, in `[0, d − 1]`.
    pub raw: T,
    /// `C_l1 / (d − 1)`, in `[0, 1]`.
    pub normalized: T,
    pub dim: usize,
}

#[inline]
pub fn l1_coherence<T: Scalar>(state: &PureState<T>) -> CoherenceValue<T> {
    l1_coherence_of(state.amplitudes().iter().map(|a| a.norm()), state.dim())
}

/// Coherence from amplitude moduli; `dim` must match the iterator length.
#[inline]
pub fn l1_coherence_of<T: Scalar>(
    moduli: impl Iterator<Item = T>,
    dim: usize,
) -> CoherenceValue<T> {
    let s: T = moduli.sum();
    let raw = (s * s - T::one()).max(T::zero());
    CoherenceValue {
        raw,
        normalized: raw / T::of_usize(dim - 1),
        dim,
    }
}

/// Explicit `Σ_{i≠j} |ρ_ij|` over the density matrix. Quadratic in `dim`;
/// kept as the reference the shortcut is checked against.
pub fn l1_coherence_from_density<T: Scalar>(state: &PureState<T>) -> T {
    let a = state.amplitudes();
    let mut total = T::zero();
    for (i, ai) in a.iter().enumerate() {
        for (j, aj) in a.iter().enumerate() {
            if i != j {
                total += (ai * aj.conj()).norm();
            }
        }
    }
    total
}

/// Haar average of the raw l1 coherence: `(d − 1)π/4` for qudits, `(d − 1)2/π` for redits.
pub fn analytic_mean<T: Scalar>(dim: usize, field: Field) -> T {
    let steps = T::of_usize(dim.saturating_sub(1));
    match field {
        Field::Complex => steps * T::FRAC_PI_4(),
        Field::Real => steps * T::FRAC_2_PI(),
    }
}
