use serde::Serialize;

use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-15;
pub const DEFAULT_MAX_TERMS: usize = 1_000_000;

/// Fixed deformation parameter `0 < q < 1` with the truncation controls used
/// by every infinite sum and product.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QContext {
    q: f64,
    tol: f64,
    max_terms: usize,
}

impl QContext {
    pub fn new(q: f64, tol: f64, max_terms: usize) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::Domain(format!("q = {q} outside (0, 1)")));
        }
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Error::Domain(format!("tolerance {tol} must be positive")));
        }
        if max_terms == 0 {
            return Err(Error::Domain("max_terms must be positive".into()));
        }
        Ok(QContext { q, tol, max_terms })
    }

    /// Context with the default tolerance and term budget.
    pub fn with_q(q: f64) -> Result<Self> {
        Self::new(q, DEFAULT_TOL, DEFAULT_MAX_TERMS)
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }

    pub fn with_tol(self, tol: f64) -> Result<Self> {
        Self::new(self.q, tol, self.max_terms)
    }

    /// `[2]_q = 1 + q`
    pub fn qint2(&self) -> f64 {
        1.0 + self.q
    }

    /// Right end of the finite q-Gaussian domain, `nu = ([2]_q / (1 - q^2))^(1/2)`.
    pub fn nu(&self) -> f64 {
        (self.qint2() / (1.0 - self.q * self.q)).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates() {
        assert!(QContext::with_q(0.0).is_err());
        assert!(QContext::with_q(1.0).is_err());
        assert!(QContext::with_q(f64::NAN).is_err());
        assert!(QContext::new(0.5, 0.0, 10).is_err());
        assert!(QContext::new(0.5, 1e-9, 0).is_err());
        let ctx = QContext::with_q(0.5).unwrap();
        // nu^2 = [2]_q / (1 - q^2) = 1 / (1 - q)
        assert!((ctx.nu() * ctx.nu() - 2.0).abs() < 1e-15);
    }
}
