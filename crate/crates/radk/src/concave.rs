//! Evaluatable parameter functions φ for Marcinkiewicz and Lorentz spaces.
//!
//! The cone of interest is the nonnegative increasing concave functions on
//! `(0,1]` or `(0,∞)`. Concavity and vanishing at the origin are *claims*
//! carried by the value and checked on sampled grids, not enforced
//! symbolically.

use std::fmt;
use std::sync::Arc;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FnDomain {
    UnitInterval,
    HalfLine,
}

#[derive(Clone)]
pub struct ConcaveFn {
    eval: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    domain: FnDomain,
    claims_concave: bool,
    claims_zero_at_origin: bool,
}

impl fmt::Debug for ConcaveFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConcaveFn")
            .field("domain", &self.domain)
            .field("claims_concave", &self.claims_concave)
            .field("claims_zero_at_origin", &self.claims_zero_at_origin)
            .finish()
    }
}

impl ConcaveFn {
    pub fn new(
        domain: FnDomain,
        claims_concave: bool,
        claims_zero_at_origin: bool,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            eval: Arc::new(eval),
            domain,
            claims_concave,
            claims_zero_at_origin,
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.eval)(t)
    }

    pub fn domain(&self) -> FnDomain {
        self.domain
    }

    pub fn claims_concave(&self) -> bool {
        self.claims_concave
    }

    pub fn claims_zero_at_origin(&self) -> bool {
        self.claims_zero_at_origin
    }

    /// Largest argument of the declared domain usable on a finite grid.
    pub fn grid_upper(&self) -> f64 {
        match self.domain {
            FnDomain::UnitInterval => 1.0,
            FnDomain::HalfLine => 2f64.powi(40),
        }
    }

    /// Checks nonnegativity, monotonicity, and (if claimed) midpoint
    /// concavity on the given grid points.
    pub fn validate_on_grid(&self, grid: &[f64], tol: f64) -> Result<()> {
        let mut prev: Option<(f64, f64)> = None;
        for &t in grid {
            let v = self.eval(t);
            if !v.is_finite() || v < -tol {
                return Err(Error::InvalidFunctionClass(format!(
                    "φ({t}) = {v} not finite/nonnegative"
                )));
            }
            if let Some((pt, pv)) = prev {
                if v < pv - tol * pv.abs().max(1.0) {
                    return Err(Error::InvalidFunctionClass(format!(
                        "φ decreases between {pt} and {t}"
                    )));
                }
                if self.claims_concave {
                    let mid = 0.5 * (pt + t);
                    let fm = self.eval(mid);
                    let chord = 0.5 * (pv + v);
                    if fm < chord - tol * chord.abs().max(1.0) {
                        return Err(Error::InvalidFunctionClass(format!(
                            "midpoint concavity fails between {pt} and {t}"
                        )));
                    }
                }
            }
            prev = Some((t, v));
        }
        Ok(())
    }

    // --- named parameter functions used throughout -------------------------

    /// φ(t) = t.
    pub fn identity(domain: FnDomain) -> Self {
        Self::new(domain, true, true, |t| t)
    }

    /// φ(t) = t^α, 0 < α ≤ 1.
    pub fn power(domain: FnDomain, alpha: f64) -> Self {
        Self::new(domain, true, true, move |t| t.powf(alpha))
    }

    /// φ(t) = min(1, t) on the half line.
    pub fn min_one() -> Self {
        Self::new(FnDomain::HalfLine, true, true, |t| t.min(1.0))
    }

    /// φ₁(u) = u · log₂^{1/2}(2/u) on (0,1]: the Marcinkiewicz weight whose
    /// space coincides with the Orlicz space of exp(t²)−1.
    pub fn phi1_unit() -> Self {
        Self::new(FnDomain::UnitInterval, true, true, |u| {
            u * (2.0 / u).log2().sqrt()
        })
    }

    /// min(1, t · log₂^{1/2}(max(2, 2/t))) on the half line — the extension
    /// of φ₁ used for generalized Marcinkiewicz spaces over (L1, L∞).
    pub fn phi1_half_line() -> Self {
        Self::new(FnDomain::HalfLine, true, true, |t| {
            (t * (2.0f64 / t).max(2.0).log2().sqrt()).min(1.0)
        })
    }

    /// φ(t) = t · log₂log₂(16/t) on (0,1].
    pub fn loglog16() -> Self {
        Self::new(FnDomain::UnitInterval, true, true, |t| {
            t * (16.0 / t).log2().log2()
        })
    }

    /// ρ(t) = log₂(4 + t) on the half line (not zero at the origin).
    pub fn log4_plus() -> Self {
        Self::new(FnDomain::HalfLine, true, false, |t| (4.0 + t).log2())
    }

    /// φ(s) = log₂^{1-p}(2/s) on (0,1], the Lorentz weight for which
    /// `Λ_p(φ)` norms of Rademacher sums match `‖a‖_p` (1 < p < 2).
    pub fn lorentz_log_weight(p: f64) -> Self {
        Self::new(FnDomain::UnitInterval, false, true, move |s| {
            (2.0 / s).log2().powf(1.0 - p)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_grid() -> Vec<f64> {
        (0..=64).map(|i| 2f64.powf(-20.0 + 20.0 * i as f64 / 64.0)).collect()
    }

    #[test]
    fn phi1_passes_validation() {
        ConcaveFn::phi1_unit()
            .validate_on_grid(&unit_grid(), 1e-9)
            .unwrap();
    }

    #[test]
    fn loglog16_passes_validation() {
        ConcaveFn::loglog16()
            .validate_on_grid(&unit_grid(), 1e-9)
            .unwrap();
    }

    #[test]
    fn convex_function_fails_concavity_claim() {
        let f = ConcaveFn::new(FnDomain::UnitInterval, true, true, |t| t * t);
        assert!(f.validate_on_grid(&unit_grid(), 1e-9).is_err());
    }

    #[test]
    fn decreasing_function_rejected() {
        let f = ConcaveFn::new(FnDomain::UnitInterval, false, false, |t| 1.0 - t);
        assert!(f.validate_on_grid(&unit_grid(), 1e-9).is_err());
    }

    #[test]
    fn lorentz_weight_increases_to_one() {
        let p = 1.5;
        let f = ConcaveFn::lorentz_log_weight(p);
        assert!((f.eval(1.0) - 1.0).abs() < 1e-15);
        assert!(f.eval(1e-10) < f.eval(1e-3));
    }
}
