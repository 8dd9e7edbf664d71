//! Canonical piecewise-constant functions on `(0,1]` or `(0,∞)`.
//!
//! A step function is stored as strictly increasing right endpoints
//! `0 = t_0 < t_1 < … < t_m` and values `v_i` on `(t_{i-1}, t_i]`. On the
//! unit interval the last endpoint is exactly 1; on the half line the
//! function is 0 past `t_m` (compact support). Canonical form merges
//! adjacent pieces with bit-equal values — values are never fuzz-merged,
//! which keeps piece measures free of silent drift.

use crate::{Error, Result, Sequence};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    UnitInterval,
    HalfLine,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction {
    domain: Domain,
    /// Right endpoints `t_1 < … < t_m` (the left endpoint 0 is implicit).
    ends: Vec<f64>,
    /// `values[i]` on `(ends[i-1], ends[i]]`.
    values: Vec<f64>,
}

impl StepFunction {
    /// Builds and canonicalizes a step function.
    ///
    /// Endpoints must be finite, strictly increasing and positive; on the
    /// unit interval they must reach exactly 1.
    pub fn new(domain: Domain, ends: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if ends.len() != values.len() {
            return Err(Error::InvalidStep(format!(
                "{} endpoints vs {} values",
                ends.len(),
                values.len()
            )));
        }
        if ends.iter().any(|t| !t.is_finite()) || values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidStep("non-finite endpoint or value".into()));
        }
        let mut prev = 0.0;
        for &t in &ends {
            if t <= prev {
                return Err(Error::InvalidStep(format!(
                    "endpoints must increase strictly: {t} after {prev}"
                )));
            }
            prev = t;
        }
        match domain {
            Domain::UnitInterval => {
                if ends.last().copied() != Some(1.0) {
                    return Err(Error::InvalidStep(
                        "unit-interval function must end exactly at 1".into(),
                    ));
                }
            }
            Domain::HalfLine => {}
        }
        let mut f = Self { domain, ends, values };
        f.canonicalize();
        Ok(f)
    }

    /// The zero function.
    pub fn zero(domain: Domain) -> Self {
        match domain {
            Domain::UnitInterval => Self {
                domain,
                ends: vec![1.0],
                values: vec![0.0],
            },
            Domain::HalfLine => Self {
                domain,
                ends: Vec::new(),
                values: Vec::new(),
            },
        }
    }

    /// Constant `c` on `(0,1]`.
    pub fn constant_unit(c: f64) -> Self {
        Self {
            domain: Domain::UnitInterval,
            ends: vec![1.0],
            values: vec![c],
        }
    }

    /// Indicator of `(0,b]` on the unit interval, `0 < b ≤ 1`.
    pub fn indicator_unit(b: f64) -> Result<Self> {
        if !(b > 0.0 && b <= 1.0) {
            return Err(Error::InvalidStep(format!("indicator end {b} outside (0,1]")));
        }
        if b == 1.0 {
            Ok(Self::constant_unit(1.0))
        } else {
            Self::new(Domain::UnitInterval, vec![b, 1.0], vec![1.0, 0.0])
        }
    }

    /// Indicator of `(0,b]` on the half line.
    pub fn indicator_half_line(b: f64) -> Result<Self> {
        if !(b > 0.0 && b.is_finite()) {
            return Err(Error::InvalidStep(format!("support end {b} must be positive")));
        }
        Self::new(Domain::HalfLine, vec![b], vec![1.0])
    }

    /// Synthesizes `Σ a_k χ_(k-1,k]` on the half line.
    pub fn from_unit_blocks(a: &Sequence) -> Self {
        let ends: Vec<f64> = (1..=a.len()).map(|k| k as f64).collect();
        let mut f = Self {
            domain: Domain::HalfLine,
            ends,
            values: a.coeffs().to_vec(),
        };
        f.canonicalize();
        f
    }

    fn canonicalize(&mut self) {
        // Merge adjacent pieces with exactly equal values.
        let mut ends = Vec::with_capacity(self.ends.len());
        let mut values: Vec<f64> = Vec::with_capacity(self.values.len());
        for i in 0..self.ends.len() {
            if let Some(last) = values.last() {
                if *last == self.values[i] {
                    *ends.last_mut().unwrap() = self.ends[i];
                    continue;
                }
            }
            ends.push(self.ends[i]);
            values.push(self.values[i]);
        }
        // On the half line a trailing zero piece is the implicit tail.
        if self.domain == Domain::HalfLine {
            while values.last() == Some(&0.0) {
                values.pop();
                ends.pop();
            }
        }
        self.ends = ends;
        self.values = values;
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn ends(&self) -> &[f64] {
        &self.ends
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn piece_count(&self) -> usize {
        self.values.len()
    }

    /// `t_m`, or 0 for the zero function on the half line.
    pub fn support_end(&self) -> f64 {
        self.ends.last().copied().unwrap_or(0.0)
    }

    /// Iterates pieces as `(left, right, value)`.
    pub fn pieces(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.ends.iter().enumerate().map(move |(i, &end)| {
            let left = if i == 0 { 0.0 } else { self.ends[i - 1] };
            (left, end, self.values[i])
        })
    }

    /// Value at `t > 0`; 0 past the support (half line) or for `t > 1` on the
    /// unit interval (extension by zero, used when merging breakpoint grids).
    pub fn value_at(&self, t: f64) -> f64 {
        debug_assert!(t > 0.0);
        match self.ends.binary_search_by(|end| end.total_cmp(&t)) {
            Ok(i) => self.values[i],
            Err(i) => {
                if i < self.values.len() {
                    self.values[i]
                } else {
                    0.0
                }
            }
        }
    }

    pub fn abs(&self) -> StepFunction {
        let mut f = Self {
            domain: self.domain,
            ends: self.ends.clone(),
            values: self.values.iter().map(|v| v.abs()).collect(),
        };
        f.canonicalize();
        f
    }

    pub fn scaled(&self, c: f64) -> StepFunction {
        let mut f = Self {
            domain: self.domain,
            ends: self.ends.clone(),
            values: self.values.iter().map(|v| c * v).collect(),
        };
        f.canonicalize();
        f
    }

    /// Pointwise sum on the merged breakpoint grid. Both operands must live
    /// on the same domain.
    pub fn add(&self, other: &StepFunction) -> Result<StepFunction> {
        if self.domain != other.domain {
            return Err(Error::InvalidArgument(
                "cannot add step functions on different domains".into(),
            ));
        }
        let mut grid: Vec<f64> = self.ends.iter().chain(other.ends.iter()).copied().collect();
        grid.sort_unstable_by(f64::total_cmp);
        grid.dedup();
        if grid.is_empty() {
            return Ok(StepFunction::zero(self.domain));
        }
        let values: Vec<f64> = grid
            .iter()
            .map(|&t| self.value_at(t) + other.value_at(t))
            .collect();
        StepFunction::new(self.domain, grid, values)
    }

    /// `∫_0^u x(s) ds`, exact on pieces; saturates past the support.
    /// `u` may be `+∞` on the half line. Rejects `u ≤ 0`.
    pub fn head_integral(&self, u: f64) -> Result<f64> {
        if u.is_nan() || u <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "head integral needs u > 0, got {u}"
            )));
        }
        let mut acc = 0.0;
        let mut prev = 0.0;
        for (i, &end) in self.ends.iter().enumerate() {
            let hi = end.min(u);
            if hi > prev {
                acc += self.values[i] * (hi - prev);
            }
            if end >= u {
                break;
            }
            prev = end;
        }
        Ok(acc)
    }

    /// Signed integral over the whole support.
    pub fn integral(&self) -> f64 {
        let mut acc = 0.0;
        let mut prev = 0.0;
        for (i, &end) in self.ends.iter().enumerate() {
            acc += self.values[i] * (end - prev);
            prev = end;
        }
        acc
    }

    /// `∫_lo^hi |x(s)|^p ds` for finite `p ≥ 1`, exact on pieces.
    pub fn power_integral(&self, p: f64, lo: f64, hi: f64) -> f64 {
        debug_assert!(p >= 1.0);
        let mut acc = 0.0;
        let mut prev = 0.0f64;
        for (i, &end) in self.ends.iter().enumerate() {
            let a = prev.max(lo);
            let b = end.min(hi);
            if b > a {
                let v = self.values[i].abs();
                if v > 0.0 {
                    acc += v.powf(p) * (b - a);
                }
            }
            prev = end;
            if prev >= hi {
                break;
            }
        }
        acc
    }

    /// Nonincreasing rearrangement of `|x|`: equimeasurable with `|x|`,
    /// values sorted nonincreasing, domain preserved.
    pub fn rearranged(&self) -> StepFunction {
        let mut pairs: Vec<(f64, f64)> = self
            .pieces()
            .map(|(l, r, v)| (v.abs(), r - l))
            .collect();
        pairs.sort_unstable_by(|a, b| b.0.total_cmp(&a.0));
        // Coalesce equal values so the output is canonical by construction.
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(pairs.len());
        for (v, w) in pairs {
            if let Some(last) = merged.last_mut() {
                if last.0 == v {
                    last.1 += w;
                    continue;
                }
            }
            merged.push((v, w));
        }
        match self.domain {
            Domain::UnitInterval => {
                let mut ends = Vec::with_capacity(merged.len());
                let mut values = Vec::with_capacity(merged.len());
                let mut cum = 0.0;
                for (v, w) in &merged {
                    cum += w;
                    ends.push(cum);
                    values.push(*v);
                }
                // The widths telescope back to 1 up to round-off; pin the last
                // endpoint so the canonical invariant holds exactly.
                debug_assert!((cum - 1.0).abs() < 1e-9);
                *ends.last_mut().unwrap() = 1.0;
                let mut f = Self {
                    domain: Domain::UnitInterval,
                    ends,
                    values,
                };
                f.canonicalize();
                f
            }
            Domain::HalfLine => {
                let mut ends = Vec::new();
                let mut values = Vec::new();
                let mut cum = 0.0;
                for (v, w) in &merged {
                    if *v == 0.0 {
                        continue; // zeros belong to the implicit tail
                    }
                    cum += w;
                    ends.push(cum);
                    values.push(*v);
                }
                let mut f = Self {
                    domain: Domain::HalfLine,
                    ends,
                    values,
                };
                f.canonicalize();
                f
            }
        }
    }

    pub fn is_nonincreasing(&self) -> bool {
        self.values.windows(2).all(|w| w[0] >= w[1])
    }

    /// Dyadic averaging operator: on each `(2^-k, 2^-k+1]` the value
    /// `2^k ∫_0^{2^-k} y`, down to `depth = max(finest dyadic level of y, 20)`;
    /// the remaining head `(0, 2^-depth]` carries its exact average. For `y`
    /// whose breakpoints stay above `2^-depth` the result is exact.
    pub fn dyadic_average(&self) -> Result<StepFunction> {
        if self.domain != Domain::UnitInterval {
            return Err(Error::InvalidArgument(
                "dyadic averaging is defined on the unit interval".into(),
            ));
        }
        let t1 = self.ends.first().copied().unwrap_or(1.0);
        let finest = (-(t1.log2())).ceil().max(0.0) as i32;
        let depth = finest.max(20).min(60);
        let mut ends = Vec::with_capacity(depth as usize + 1);
        let mut values = Vec::with_capacity(depth as usize + 1);
        // Head piece (0, 2^-depth]: exact average there.
        let head = 2f64.powi(-depth);
        ends.push(head);
        values.push(self.head_integral(head)? / head);
        for k in (1..=depth).rev() {
            let lo = 2f64.powi(-k);
            let hi = 2f64.powi(-k + 1);
            ends.push(hi);
            values.push(self.head_integral(lo)? / lo);
        }
        let mut f = Self {
            domain: Domain::UnitInterval,
            ends,
            values,
        };
        f.canonicalize();
        Ok(f)
    }

    /// Unit averages `(∫_{k-1}^k x)_{k=1..K}` with `K = ⌈support⌉`; the
    /// discrete image of the averaging projector onto unit blocks.
    pub fn unit_averages(&self) -> Result<Sequence> {
        if self.domain != Domain::HalfLine {
            return Err(Error::InvalidArgument(
                "unit averages are defined on the half line".into(),
            ));
        }
        let support = self.support_end();
        if support == 0.0 {
            return Ok(Sequence::empty());
        }
        let blocks = support.ceil() as usize;
        if blocks > 1_000_000 {
            return Err(Error::InvalidArgument(format!(
                "support {support} too wide for unit averaging"
            )));
        }
        let mut out = Vec::with_capacity(blocks);
        for k in 1..=blocks {
            let hi = self.head_integral(k as f64)?;
            let lo = if k == 1 {
                0.0
            } else {
                self.head_integral((k - 1) as f64)?
            };
            out.push(hi - lo);
        }
        Sequence::new(out)
    }

    /// Multiset of `(|value|, total measure)` pairs — the distribution data
    /// of `|x|`. Exposed for equimeasurability checks.
    pub fn value_measures(&self) -> Vec<(f64, f64)> {
        let r = self.rearranged();
        r.pieces().map(|(l, h, v)| (v, h - l)).collect()
    }
}
