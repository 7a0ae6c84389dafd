use crate::error::{Error, Result};

/// Thresholds that turn the exact dichotomies (invertible or not, in a subspace
/// or not) into numerical decisions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceConfig {
    /// Relative singular-value cutoff for rank and kernel decisions.
    pub rank_tol: f64,
    /// Acceptance bound for idempotent and Hermitian residuals.
    pub residual_tol: f64,
    /// Relative cutoff on the smallest singular value for invertibility.
    pub inv_tol: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self { rank_tol: 1e-10, residual_tol: 1e-8, inv_tol: 1e-10 }
    }
}

impl ToleranceConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, value) in
            [("rank_tol", self.rank_tol), ("residual_tol", self.residual_tol), ("inv_tol", self.inv_tol)]
        {
            if !(value > 0.0 && value < 1.0) {
                return Err(Error::BadTolerance { name: name.into(), value });
            }
        }
        Ok(())
    }

    /// Returns a copy with one named threshold replaced.
    pub fn with(mut self, name: &str, value: f64) -> Result<Self> {
        match name {
            "rank_tol" => self.rank_tol = value,
            "residual_tol" => self.residual_tol = value,
            "inv_tol" => self.inv_tol = value,
            other => return Err(Error::UnknownTolerance(other.into())),
        }
        self.validate()?;
        Ok(self)
    }

    /// Parses a `name=value` override.
    pub fn with_override(self, spec: &str) -> Result<Self> {
        let (name, value) = spec.split_once('=').ok_or_else(|| Error::UnknownTolerance(spec.into()))?;
        let value: f64 =
            value.trim().parse().map_err(|_| Error::BadTolerance { name: name.trim().into(), value: f64::NAN })?;
        self.with(name.trim(), value)
    }
}
