//! Finite atomic distributions: exact or empirical laws of Rademacher sums.

use crate::{Error, Result};

/// A finite list of `(value, measure)` atoms with strictly decreasing values
/// and strictly positive measures, summing to the domain measure.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    atoms: Vec<(f64, f64)>,
}

impl Distribution {
    /// Builds a distribution from unsorted atoms. Atoms with equal values are
    /// coalesced; the total measure must match `total` within 1e-12.
    pub fn new(mut atoms: Vec<(f64, f64)>, total: f64) -> Result<Self> {
        if atoms
            .iter()
            .any(|(v, m)| !v.is_finite() || !m.is_finite())
        {
            return Err(Error::InvalidDistribution("non-finite atom".into()));
        }
        if atoms.iter().any(|&(_, m)| m <= 0.0) {
            return Err(Error::InvalidDistribution("non-positive measure".into()));
        }
        atoms.sort_unstable_by(|a, b| b.0.total_cmp(&a.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(atoms.len());
        for (v, m) in atoms {
            if let Some(last) = merged.last_mut() {
                if last.0 == v {
                    last.1 += m;
                    continue;
                }
            }
            merged.push((v, m));
        }
        let mass: f64 = merged.iter().map(|&(_, m)| m).sum();
        if (mass - total).abs() > 1e-12 {
            return Err(Error::InvalidDistribution(format!(
                "total measure {mass} differs from expected {total}"
            )));
        }
        Ok(Self { atoms: merged })
    }

    pub fn point_mass(value: f64) -> Self {
        Self {
            atoms: vec![(value, 1.0)],
        }
    }

    /// Atoms in strictly decreasing value order.
    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn total_measure(&self) -> f64 {
        self.atoms.iter().map(|&(_, m)| m).sum()
    }

    pub fn max_abs_value(&self) -> f64 {
        self.atoms
            .iter()
            .map(|&(v, _)| v.abs())
            .fold(0.0, f64::max)
    }

    /// Sign symmetry: every atom `(v, m)` is matched by `(-v, m)`.
    pub fn is_symmetric(&self, tol: f64) -> bool {
        let n = self.atoms.len();
        for i in 0..n {
            let (v, m) = self.atoms[i];
            let (w, q) = self.atoms[n - 1 - i];
            if (v + w).abs() > tol || (m - q).abs() > tol {
                return false;
            }
        }
        true
    }

    /// `Σ v^p · m` over atoms (p-th absolute moment), so `‖Ta‖_p^p` when the
    /// distribution is the law of `Ta`.
    pub fn abs_moment(&self, p: f64) -> f64 {
        crate::sum::kahan_sum(
            self.atoms
                .iter()
                .map(|&(v, m)| if v == 0.0 { 0.0 } else { v.abs().powf(p) * m }),
        )
    }
}
