//! Rényi orders and their conjugate exponents.

use crate::error::{Error, Result};

/// A Rényi order `r > 0` together with its `r -> 1` limit flag.
///
/// The conjugate exponent `r' = r/(r-1)` satisfies `1/r + 1/r' = 1`; it is
/// positive for `r > 1` and negative for `r < 1`. The Shannon case is a
/// dedicated code path, never a small-`|1-r|` limit, so downstream code can
/// branch on [`RenyiOrder::is_one`] without cancellation worries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenyiOrder {
    r: f64,
    limit_one: bool,
}

impl RenyiOrder {
    /// Order `r > 0`. An input of exactly `1.0` yields the Shannon limit.
    pub fn new(r: f64) -> Result<Self> {
        if !r.is_finite() || r <= 0.0 {
            return Err(Error::InvalidOrder(r));
        }
        if r == 1.0 {
            Ok(Self::shannon())
        } else {
            Ok(Self { r, limit_one: false })
        }
    }

    /// The `r -> 1` (Shannon) limit.
    pub fn shannon() -> Self {
        Self { r: 1.0, limit_one: true }
    }

    pub fn value(&self) -> f64 {
        self.r
    }

    /// True on the Shannon path.
    pub fn is_one(&self) -> bool {
        self.limit_one
    }

    /// Conjugate exponent `r/(r-1)`; `None` at the Shannon limit.
    pub fn conjugate(&self) -> Option<f64> {
        if self.limit_one {
            None
        } else {
            Some(self.r / (self.r - 1.0))
        }
    }
}

impl std::fmt::Display for RenyiOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.limit_one {
            write!(f, "1 (Shannon)")
        } else {
            write!(f, "{}", self.r)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjugate_identity() {
        for &r in &[0.3, 0.5, 0.8, 1.5, 2.0, 3.0, 5.0] {
            let o = RenyiOrder::new(r).unwrap();
            let rp = o.conjugate().unwrap();
            assert!((1.0 / r + 1.0 / rp - 1.0).abs() < 1e-15);
            assert_eq!(rp.signum(), (r - 1.0).signum());
        }
    }

    #[test]
    fn one_is_shannon() {
        let o = RenyiOrder::new(1.0).unwrap();
        assert!(o.is_one());
        assert!(o.conjugate().is_none());
    }

    #[test]
    fn rejects_nonpositive() {
        assert!(RenyiOrder::new(0.0).is_err());
        assert!(RenyiOrder::new(-2.0).is_err());
        assert!(RenyiOrder::new(f64::NAN).is_err());
    }
}
