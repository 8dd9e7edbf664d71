//! Finite coefficient sequences `a = (a_1, …, a_n)`.

use crate::{Error, Result};

/// A finite sequence of real coefficients. Infinite sequences are represented
/// by explicit truncations; the truncation length is part of the value.
#[derive(Debug, Clone, PartialEq)]
pub struct Sequence {
    coeffs: Vec<f64>,
}

impl Sequence {
    /// Builds a sequence, rejecting non-finite entries.
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite { context: "Sequence::new" });
        }
        Ok(Self { coeffs })
    }

    pub fn empty() -> Self {
        Self { coeffs: Vec::new() }
    }

    /// First `n` terms of the harmonic sequence `a_k = 1/k`.
    pub fn harmonic(n: usize) -> Self {
        Self {
            coeffs: (1..=n).map(|k| 1.0 / k as f64).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    /// Nonincreasing rearrangement `(a_k*)`: absolute values sorted in
    /// nonincreasing order. Length is preserved.
    pub fn rearranged(&self) -> Sequence {
        let mut v: Vec<f64> = self.coeffs.iter().map(|c| c.abs()).collect();
        v.sort_unstable_by(|a, b| b.total_cmp(a));
        Sequence { coeffs: v }
    }

    /// Dilation operator `σ_n`: every entry repeated `n` times, order kept.
    pub fn dilated(&self, n: usize) -> Result<Sequence> {
        if n < 1 {
            return Err(Error::InvalidArgument("dilation factor must be ≥ 1".into()));
        }
        let mut out = Vec::with_capacity(self.coeffs.len() * n);
        for &c in &self.coeffs {
            out.extend(std::iter::repeat_n(c, n));
        }
        Ok(Sequence { coeffs: out })
    }

    pub fn scaled(&self, c: f64) -> Sequence {
        Sequence {
            coeffs: self.coeffs.iter().map(|x| c * x).collect(),
        }
    }

    /// Entry-wise sum; the shorter sequence is zero-padded.
    pub fn add(&self, other: &Sequence) -> Sequence {
        let n = self.len().max(other.len());
        let at = |v: &[f64], i: usize| v.get(i).copied().unwrap_or(0.0);
        Sequence {
            coeffs: (0..n)
                .map(|i| at(&self.coeffs, i) + at(&other.coeffs, i))
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rearrange_sorts_absolute_values() {
        let a = Sequence::new(vec![3.0, -1.0, 2.0]).unwrap();
        assert_eq!(a.rearranged().coeffs(), &[3.0, 2.0, 1.0]);
    }

    #[test]
    fn rearrange_empty() {
        assert_eq!(Sequence::empty().rearranged().coeffs(), &[] as &[f64]);
    }

    #[test]
    fn rearrange_fixed_point() {
        let a = Sequence::new(vec![1.0, 1.0, 1.0]).unwrap();
        assert_eq!(a.rearranged().coeffs(), &[1.0, 1.0, 1.0]);
    }

    #[test]
    fn rearrange_is_idempotent() {
        let a = Sequence::new(vec![0.5, -2.0, 2.0, 0.0]).unwrap();
        let r = a.rearranged();
        assert_eq!(r.rearranged(), r);
    }

    #[test]
    fn dilation_repeats_entries() {
        let a = Sequence::new(vec![1.0, 2.0]).unwrap();
        assert_eq!(a.dilated(2).unwrap().coeffs(), &[1.0, 1.0, 2.0, 2.0]);
    }

    #[test]
    fn dilation_identity() {
        let a = Sequence::new(vec![1.0, -4.0, 0.25]).unwrap();
        assert_eq!(a.dilated(1).unwrap(), a);
    }

    #[test]
    fn dilation_rejects_zero() {
        let a = Sequence::new(vec![1.0]).unwrap();
        assert!(a.dilated(0).is_err());
    }

    #[test]
    fn non_finite_rejected() {
        assert!(Sequence::new(vec![f64::NAN]).is_err());
        assert!(Sequence::new(vec![f64::INFINITY]).is_err());
    }
}
