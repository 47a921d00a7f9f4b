//! Quenched-disorder specification shared by `states::perturb` and the experiments.

use crate::error::{Error, Result};
use crate::sampling::Family;
use crate::states::Field;

/// Which real parameters of each amplitude receive disorder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Target {
    RealParts,
    ImagParts,
    BothParts,
}

impl Target {
    pub fn name(self) -> &'static str {
        match self {
            Target::RealParts => "real",
            Target::ImagParts => "imag",
            Target::BothParts => "both",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "real" | "re" | "realparts" => Some(Target::RealParts),
            "imag" | "im" | "imagparts" => Some(Target::ImagParts),
            "both" | "b" | "bothparts" => Some(Target::BothParts),
            _ => None,
        }
    }

    pub fn hits_real(self) -> bool {
        matches!(self, Target::RealParts | Target::BothParts)
    }

    pub fn hits_imag(self) -> bool {
        matches!(self, Target::ImagParts | Target::BothParts)
    }
}

impl std::fmt::Display for Target {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

pub const DEFAULT_SIQR: f64 = 0.5;
pub const DEFAULT_CONFIGS_PER_STATE: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DisorderSpec {
    pub family: Family,
    pub siqr: f64,
    pub target: Target,
    /// Disorder realizations averaged per base state.
    pub configs_per_state: usize,
}

impl DisorderSpec {
    pub fn new(
        family: Family,
        siqr: f64,
        target: Target,
        configs_per_state: usize,
    ) -> Result<Self> {
        let spec = Self {
            family,
            siqr,
            target,
            configs_per_state,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Gaussian disorder on the real parts, γ = 1/2, 100 configurations.
    pub fn gaussian_default() -> Self {
        Self {
            family: Family::Gaussian,
            siqr: DEFAULT_SIQR,
            target: Target::RealParts,
            configs_per_state: DEFAULT_CONFIGS_PER_STATE,
        }
    }

    pub fn with_configs(self, configs_per_state: usize) -> Self {
        Self {
            configs_per_state,
            ..self
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.siqr > 0.0) || !self.siqr.is_finite() {
            return Err(Error::InvalidSiqr(self.siqr));
        }
        if self.configs_per_state == 0 {
            return Err(Error::NoConfigs);
        }
        Ok(())
    }

    pub fn check_field(&self, field: Field) -> Result<()> {
        if field == Field::Real && self.target != Target::RealParts {
            return Err(Error::TargetNotReal {
                target: self.target.name(),
            });
        }
        Ok(())
    }
}
