use core::fmt;

use crate::CoreError;

/// A truth degree: a real number in `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Default)]
pub struct TruthDegree(f64);

impl TruthDegree {
    pub const ZERO: TruthDegree = TruthDegree(0.0);
    pub const ONE: TruthDegree = TruthDegree(1.0);

    /// Rejects values outside `[0, 1]` (and NaN).
    pub fn new(value: f64) -> Result<Self, CoreError> {
        if (0.0..=1.0).contains(&value) {
            Ok(TruthDegree(value))
        } else {
            Err(CoreError::InvalidDegree(value))
        }
    }

    // Results of connective arithmetic; rounding may step one ulp outside.
    pub(crate) fn saturating(value: f64) -> Self {
        TruthDegree(value.clamp(0.0, 1.0))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_crisp(self) -> bool {
        self.0 == 0.0 || self.0 == 1.0
    }
}

impl From<TruthDegree> for f64 {
    fn from(d: TruthDegree) -> f64 {
        d.0
    }
}

impl TryFrom<f64> for TruthDegree {
    type Error = CoreError;

    fn try_from(value: f64) -> Result<Self, Self::Error> {
        TruthDegree::new(value)
    }
}

impl fmt::Display for TruthDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_out_of_range() {
        assert!(TruthDegree::new(-0.0001).is_err());
        assert!(TruthDegree::new(1.0000001).is_err());
        assert!(TruthDegree::new(f64::NAN).is_err());
        assert_eq!(TruthDegree::new(0.0).unwrap(), TruthDegree::ZERO);
        assert_eq!(TruthDegree::new(1.0).unwrap(), TruthDegree::ONE);
    }

    #[test]
    fn saturating_clamps() {
        assert_eq!(TruthDegree::saturating(1.0 + f64::EPSILON).value(), 1.0);
        assert_eq!(TruthDegree::saturating(-1e-17).value(), 0.0);
    }
}
