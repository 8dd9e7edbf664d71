//! Exact and Monte Carlo synthesis of Rademacher sums `Ta = Σ a_k r_k`.
//!
//! Exact laws are computed by iterated convolution of `±a_k` atoms with
//! coalescing of equal values. Every f64 coefficient is decomposed as
//! `m · 2^e` exactly, so atom values live on a common dyadic lattice and are
//! carried as big integers: the identity `ess sup |Ta| = ‖a‖₁` and the
//! orthonormality identity `∫ (|Ta|*)² = ‖a‖₂²` hold with zero tolerance,
//! not within a float budget. Atom measures are sign-pattern counts out of
//! `2^n`, hence exact dyadic rationals.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::sum::kahan_sum;
use crate::{Distribution, Domain, Error, Result, Sequence, StepFunction};

/// Default cap on the exact convolution.
pub const EXACT_CAP: usize = 24;

/// Exact law of a Rademacher sum: atom values as big integers on the lattice
/// `2^scale`, counts of the sign patterns realizing each value.
#[derive(Debug, Clone)]
pub struct ExactLaw {
    scale: i32,
    /// Ascending by value; counts sum to `2^n`.
    atoms: Vec<(BigInt, u64)>,
    n: u32,
    /// `Σ |a_k|` on the same lattice.
    l1_scaled: BigInt,
    /// `Σ a_k²` on the lattice `2^(2·scale)`.
    l2_sq_scaled: BigInt,
}

impl ExactLaw {
    fn synthesize(coeffs: &[f64]) -> Self {
        // Decompose each coefficient exactly as m·2^e; align on a common scale.
        let parts: Vec<(i64, i32)> = coeffs.iter().map(|&c| decode_f64(c)).collect();
        let scale = parts
            .iter()
            .filter(|&&(m, _)| m != 0)
            .map(|&(_, e)| e)
            .min()
            .unwrap_or(0);
        let scaled: Vec<BigInt> = parts
            .iter()
            .map(|&(m, e)| {
                if m == 0 {
                    BigInt::zero()
                } else {
                    BigInt::from(m.abs()) << (e - scale) as u32
                }
            })
            .collect();
        let l1_scaled: BigInt = scaled.iter().sum();
        let l2_sq_scaled: BigInt = scaled.iter().map(|v| v * v).sum();

        let mut atoms: Vec<(BigInt, u64)> = vec![(BigInt::zero(), 1)];
        for v in &scaled {
            if v.is_zero() {
                for a in &mut atoms {
                    a.1 *= 2;
                }
                continue;
            }
            let plus = atoms.iter().map(|(x, c)| (x + v, *c));
            let minus = atoms.iter().map(|(x, c)| (x - v, *c));
            atoms = merge_sorted(plus.collect(), minus.collect());
        }
        ExactLaw {
            scale,
            atoms,
            n: coeffs.len() as u32,
            l1_scaled,
            l2_sq_scaled,
        }
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    /// `ess sup |Ta| = ‖a‖₁` as an exact integer identity.
    pub fn ess_sup_equals_l1(&self) -> bool {
        let hi = self.atoms.last().map(|(v, _)| v.abs()).unwrap_or_default();
        let lo = self.atoms.first().map(|(v, _)| v.abs()).unwrap_or_default();
        hi.max(lo) == self.l1_scaled
    }

    /// `Σ_patterns (Σ a_k ε_k)² = 2^n Σ a_k²` as an exact integer identity.
    pub fn second_moment_matches(&self) -> bool {
        let lhs: BigInt = self
            .atoms
            .iter()
            .map(|(v, c)| v * v * BigInt::from(*c))
            .sum();
        let rhs = &self.l2_sq_scaled * (BigInt::from(1u8) << self.n);
        lhs == rhs
    }

    /// `ess sup |Ta|` as a float view of the exact integer.
    pub fn ess_sup(&self) -> f64 {
        let hi = self.atoms.last().map(|(v, _)| v.abs()).unwrap_or_default();
        let lo = self.atoms.first().map(|(v, _)| v.abs()).unwrap_or_default();
        scaled_to_f64(&hi.max(lo), self.scale)
    }

    /// `‖a‖₁` as a float view of the same exact lattice, so equal integers
    /// round to equal floats.
    pub fn l1_norm(&self) -> f64 {
        scaled_to_f64(&self.l1_scaled, self.scale)
    }

    /// Float view of the law, atoms in decreasing value order.
    pub fn to_distribution(&self) -> Distribution {
        let total = 2f64.powi(-(self.n as i32));
        let atoms: Vec<(f64, f64)> = self
            .atoms
            .iter()
            .rev()
            .map(|(v, c)| (scaled_to_f64(v, self.scale), *c as f64 * total))
            .collect();
        Distribution::new(atoms, 1.0).expect("exact law is a valid distribution")
    }

    /// Nonincreasing rearrangement `|Ta|*` on `(0,1]` with exactly dyadic
    /// piece measures.
    pub fn to_step(&self) -> StepFunction {
        // Fold ±v together; the law is symmetric so equal magnitudes pair up.
        let mut mags: Vec<(BigInt, u64)> = self
            .atoms
            .iter()
            .map(|(v, c)| (v.abs(), *c))
            .collect();
        mags.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        let mut merged: Vec<(BigInt, u64)> = Vec::with_capacity(mags.len() / 2 + 1);
        for (v, c) in mags {
            if let Some(last) = merged.last_mut() {
                if last.0 == v {
                    last.1 += c;
                    continue;
                }
            }
            merged.push((v, c));
        }
        let denom = 2f64.powi(-(self.n as i32));
        let mut ends = Vec::with_capacity(merged.len());
        let mut values = Vec::with_capacity(merged.len());
        let mut cum: u64 = 0;
        for (v, c) in &merged {
            cum += c;
            ends.push(cum as f64 * denom); // exact: cum ≤ 2^n ≤ 2^24
            values.push(scaled_to_f64(v, self.scale));
        }
        debug_assert_eq!(cum, 1u64 << self.n);
        StepFunction::new(Domain::UnitInterval, ends, values)
            .expect("exact law yields a canonical step function")
    }
}

/// A synthesized Rademacher sum: coefficients, float law, rearrangement, and
/// the exact integer law behind them.
#[derive(Debug, Clone)]
pub struct RademacherSum {
    pub coeffs: Sequence,
    pub law: Distribution,
    pub as_step: StepFunction,
    exact: ExactLaw,
}

impl RademacherSum {
    pub fn exact_law(&self) -> &ExactLaw {
        &self.exact
    }
}

/// Exact distribution of `Σ a_k r_k` for `n ≤ cap` (default [`EXACT_CAP`]).
pub fn synthesize_exact(a: &Sequence) -> Result<RademacherSum> {
    synthesize_exact_capped(a, EXACT_CAP)
}

pub fn synthesize_exact_capped(a: &Sequence, cap: usize) -> Result<RademacherSum> {
    if a.len() > cap {
        return Err(Error::ExactCapExceeded { n: a.len(), cap });
    }
    let exact = ExactLaw::synthesize(a.coeffs());
    Ok(RademacherSum {
        coeffs: a.clone(),
        law: exact.to_distribution(),
        as_step: exact.to_step(),
        exact,
    })
}

/// Empirical distribution of `Σ a_k ε_k` over `samples` independent uniform
/// sign vectors. Deterministic for a given seed: samples are generated in
/// fixed blocks on disjoint ChaCha streams and merged in block order, so the
/// result does not depend on thread scheduling.
pub fn sample_monte_carlo(a: &Sequence, samples: usize, seed: u64) -> Distribution {
    assert!(samples >= 1, "need at least one sample");
    if a.is_empty() {
        return Distribution::point_mass(0.0);
    }
    const BLOCK: usize = 1 << 14;
    let blocks = samples.div_ceil(BLOCK);
    let coeffs = a.coeffs();
    let block_sums: Vec<Vec<(f64, u64)>> = crate::par::map_range(blocks, |b| {
        let lo = b * BLOCK;
        let hi = ((b + 1) * BLOCK).min(samples);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(b as u64 + 1);
        let mut sums: Vec<f64> = Vec::with_capacity(hi - lo);
        for _ in lo..hi {
            let mut s = 0.0f64;
            let mut bits: u64 = 0;
            let mut left = 0u32;
            for &c in coeffs {
                if left == 0 {
                    bits = rng.gen();
                    left = 64;
                }
                s += if bits & 1 == 1 { c } else { -c };
                bits >>= 1;
                left -= 1;
            }
            sums.push(s);
        }
        sums.sort_unstable_by(f64::total_cmp);
        run_length(sums)
    });
    let mut acc: Vec<(f64, u64)> = Vec::new();
    for block in block_sums {
        acc = merge_sorted_f64(acc, block);
    }
    let inv = 1.0 / samples as f64;
    let atoms: Vec<(f64, f64)> = acc
        .into_iter()
        .map(|(v, c)| (v, c as f64 * inv))
        .collect();
    let total: f64 = atoms.iter().map(|&(_, m)| m).sum();
    Distribution::new(atoms, total).expect("empirical law is a valid distribution")
}

/// `meas { |value| > τ }`, strict inequality.
pub fn tail_probability(d: &Distribution, tau: f64) -> f64 {
    d.atoms()
        .iter()
        .filter(|&&(v, _)| v.abs() > tau)
        .map(|&(_, m)| m)
        .sum()
}

/// Holmstedt expression for `(l1, l2)`:
/// `Σ_{k ≤ [t²]} a_k* + t (Σ_{k > [t²]} (a_k*)²)^{1/2}` with `[·]` the floor.
/// An upper bound for `K(t, a; l1, l2)` realized by one admissible
/// decomposition, and equivalent to it within a universal constant.
pub fn holmstedt_phi(a: &Sequence, t: f64) -> f64 {
    assert!(t > 0.0);
    let star = a.rearranged();
    let s = star.coeffs();
    let h = ((t * t).floor() as usize).min(s.len());
    let head = kahan_sum(s[..h].iter().copied());
    let tail_sq = kahan_sum(s[h..].iter().map(|v| v * v));
    head + t * tail_sq.sqrt()
}

/// Montgomery-Smith lower-bound certificate.
#[derive(Debug, Clone)]
pub struct MontgomeryReport {
    pub coeffs: Sequence,
    pub t_grid: Vec<f64>,
    /// Smallest `A ∈ [1, cap]` making the tail bound hold on the grid;
    /// `+∞` when the cap is insufficient.
    pub minimal_a: f64,
    /// Tightest `(t, lhs, rhs)` triple at the reported `A`.
    pub witness: (f64, f64, f64),
}

/// Finds the smallest `A ≥ 1` (bisection to 1e-3) such that
///
/// `meas{ |Ta| > φ_a(t)/A } ≥ exp(-A t²)/A` for every `t` in the grid,
///
/// where `φ_a(t) = K(t, a; l1, l2)` evaluated exactly. The predicate is
/// monotone in `A`: raising `A` lowers the threshold and the right side.
pub fn montgomery_smith_min_a(
    a: &Sequence,
    t_grid: &[f64],
    search_cap: f64,
) -> Result<MontgomeryReport> {
    if t_grid.is_empty() || t_grid.iter().any(|&t| t <= 0.0) {
        return Err(Error::InvalidArgument(
            "montgomery grid must be nonempty and positive".into(),
        ));
    }
    let sum = synthesize_exact(a)?;
    let phi: Vec<f64> = t_grid
        .iter()
        .map(|&t| crate::kfunc::k_l1_l2_seq(a, t))
        .collect();
    let check = |big_a: f64| -> (bool, (f64, f64, f64)) {
        let mut worst = (t_grid[0], f64::INFINITY, 0.0);
        let mut ok = true;
        for (i, &t) in t_grid.iter().enumerate() {
            let lhs = tail_probability(&sum.law, phi[i] / big_a);
            let rhs = (-big_a * t * t).exp() / big_a;
            if lhs < rhs {
                ok = false;
            }
            if lhs - rhs < worst.1 - worst.2 {
                worst = (t, lhs, rhs);
            }
        }
        (ok, worst)
    };
    let (cap_ok, cap_worst) = check(search_cap);
    if !cap_ok {
        return Ok(MontgomeryReport {
            coeffs: a.clone(),
            t_grid: t_grid.to_vec(),
            minimal_a: f64::INFINITY,
            witness: cap_worst,
        });
    }
    if check(1.0).0 {
        let (_, w) = check(1.0);
        return Ok(MontgomeryReport {
            coeffs: a.clone(),
            t_grid: t_grid.to_vec(),
            minimal_a: 1.0,
            witness: w,
        });
    }
    let mut lo = 1.0;
    let mut hi = search_cap;
    while hi - lo > 1e-3 {
        let mid = 0.5 * (lo + hi);
        if check(mid).0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let (_, witness) = check(hi);
    Ok(MontgomeryReport {
        coeffs: a.clone(),
        t_grid: t_grid.to_vec(),
        minimal_a: hi,
        witness,
    })
}

/// Nonincreasing rearrangement `|value|*` of a probability law as a step
/// function on `(0,1]` — the empirical counterpart of
/// [`ExactLaw::to_step`]. The measures sum to 1 within the distribution
/// tolerance; the last endpoint is pinned to exactly 1.
pub fn step_from_law(d: &Distribution) -> StepFunction {
    let mut mags: Vec<(f64, f64)> = d.atoms().iter().map(|&(v, m)| (v.abs(), m)).collect();
    mags.sort_unstable_by(|a, b| b.0.total_cmp(&a.0));
    let mut merged: Vec<(f64, f64)> = Vec::with_capacity(mags.len());
    for (v, m) in mags {
        if let Some(last) = merged.last_mut() {
            if last.0 == v {
                last.1 += m;
                continue;
            }
        }
        merged.push((v, m));
    }
    let mut ends = Vec::with_capacity(merged.len());
    let mut values = Vec::with_capacity(merged.len());
    let mut cum = 0.0;
    for (v, m) in &merged {
        cum += m;
        ends.push(cum);
        values.push(*v);
    }
    debug_assert!((cum - 1.0).abs() < 1e-9);
    *ends.last_mut().unwrap() = 1.0;
    StepFunction::new(Domain::UnitInterval, ends, values)
        .expect("law rearrangement is a canonical step function")
}

// --- internals --------------------------------------------------------------

/// Exact decomposition `x = m · 2^e` with odd-normalized `m` (m = 0 ⇒ e = 0).
fn decode_f64(x: f64) -> (i64, i32) {
    if x == 0.0 {
        return (0, 0);
    }
    let bits = x.to_bits();
    let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
    let biased = ((bits >> 52) & 0x7ff) as i32;
    let frac = (bits & ((1u64 << 52) - 1)) as i64;
    let (mut m, mut e) = if biased == 0 {
        (frac, -1074)
    } else {
        (frac | (1 << 52), biased - 1075)
    };
    while m & 1 == 0 {
        m >>= 1;
        e += 1;
    }
    (sign * m, e)
}

fn scaled_to_f64(v: &BigInt, scale: i32) -> f64 {
    let mut x = v.to_f64().unwrap_or(0.0);
    // Apply 2^scale in safe chunks to dodge powi overflow at the extremes.
    let mut e = scale;
    while e != 0 {
        let step = e.clamp(-512, 512);
        x *= 2f64.powi(step);
        e -= step;
    }
    x
}

fn merge_sorted(a: Vec<(BigInt, u64)>, b: Vec<(BigInt, u64)>) -> Vec<(BigInt, u64)> {
    let mut out: Vec<(BigInt, u64)> = Vec::with_capacity(a.len() + b.len());
    let mut ia = a.into_iter().peekable();
    let mut ib = b.into_iter().peekable();
    loop {
        let take_a = match (ia.peek(), ib.peek()) {
            (Some(x), Some(y)) => x.0 <= y.0,
            (Some(_), None) => true,
            (None, Some(_)) => false,
            (None, None) => break,
        };
        let (v, c) = if take_a {
            ia.next().unwrap()
        } else {
            ib.next().unwrap()
        };
        if let Some(last) = out.last_mut() {
            if last.0 == v {
                last.1 += c;
                continue;
            }
        }
        out.push((v, c));
    }
    out
}

fn merge_sorted_f64(a: Vec<(f64, u64)>, b: Vec<(f64, u64)>) -> Vec<(f64, u64)> {
    let mut out: Vec<(f64, u64)> = Vec::with_capacity(a.len() + b.len());
    let mut ia = a.into_iter().peekable();
    let mut ib = b.into_iter().peekable();
    loop {
        let take_a = match (ia.peek(), ib.peek()) {
            (Some(x), Some(y)) => x.0.total_cmp(&y.0).is_le(),
            (Some(_), None) => true,
            (None, Some(_)) => false,
            (None, None) => break,
        };
        let (v, c) = if take_a {
            ia.next().unwrap()
        } else {
            ib.next().unwrap()
        };
        if let Some(last) = out.last_mut() {
            if last.0 == v {
                last.1 += c;
                continue;
            }
        }
        out.push((v, c));
    }
    out
}

fn run_length(sorted: Vec<f64>) -> Vec<(f64, u64)> {
    let mut out: Vec<(f64, u64)> = Vec::new();
    for v in sorted {
        if let Some(last) = out.last_mut() {
            if last.0 == v {
                last.1 += 1;
                continue;
            }
        }
        out.push((v, 1));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(v: &[f64]) -> Sequence {
        Sequence::new(v.to_vec()).unwrap()
    }

    #[test]
    fn pair_law_by_enumeration() {
        // Four sign patterns for a = (1,1): {2, 0, 0, -2}.
        let s = synthesize_exact(&seq(&[1.0, 1.0])).unwrap();
        assert_eq!(s.law.atoms(), &[(2.0, 0.25), (0.0, 0.5), (-2.0, 0.25)]);
        assert_eq!(s.as_step.ends(), &[0.5, 1.0]);
        assert_eq!(s.as_step.values(), &[2.0, 0.0]);
    }

    #[test]
    fn single_coefficient_law() {
        let s = synthesize_exact(&seq(&[0.75])).unwrap();
        assert_eq!(s.law.atoms(), &[(0.75, 0.5), (-0.75, 0.5)]);
    }

    #[test]
    fn ess_sup_identity_is_exact() {
        let s = synthesize_exact(&seq(&[1.0, 1.0])).unwrap();
        assert!(s.exact_law().ess_sup_equals_l1());
        assert!((s.law.max_abs_value() - 2.0).abs() == 0.0);
        // Also with awkward dyadics and signs.
        let s2 = synthesize_exact(&seq(&[0.375, -1.25, 0.0625, -3.0])).unwrap();
        assert!(s2.exact_law().ess_sup_equals_l1());
    }

    #[test]
    fn second_moment_identity_is_exact() {
        let s = synthesize_exact(&seq(&[0.5, -0.25, 1.125, 2.0, 0.0])).unwrap();
        assert!(s.exact_law().second_moment_matches());
    }

    #[test]
    fn law_is_symmetric() {
        let s = synthesize_exact(&seq(&[0.5, 1.5, -2.25])).unwrap();
        assert!(s.law.is_symmetric(0.0));
    }

    #[test]
    fn cap_exceeded_points_to_monte_carlo() {
        let a = seq(&[1.0; 25]);
        assert!(matches!(
            synthesize_exact(&a),
            Err(Error::ExactCapExceeded { .. })
        ));
    }

    #[test]
    fn monte_carlo_support_single_coefficient() {
        let d = sample_monte_carlo(&seq(&[1.0]), 4, 7);
        for &(v, _) in d.atoms() {
            assert!(v == 1.0 || v == -1.0);
        }
    }

    #[test]
    fn monte_carlo_matches_exact_pair_probability() {
        let d = sample_monte_carlo(&seq(&[1.0, 1.0]), 100_000, 42);
        let p2 = tail_probability(&d, 1.0); // P(|S| = 2)
        assert!((p2 - 0.5).abs() < 0.01, "P(|S|=2) = {p2}");
    }

    #[test]
    fn monte_carlo_empty_sum() {
        let d = sample_monte_carlo(&Sequence::empty(), 4, 0);
        assert_eq!(d.atoms(), &[(0.0, 1.0)]);
    }

    #[test]
    fn monte_carlo_is_seed_deterministic() {
        let a = seq(&[0.3, -1.0, 0.7]);
        let d1 = sample_monte_carlo(&a, 50_000, 9);
        let d2 = sample_monte_carlo(&a, 50_000, 9);
        assert_eq!(d1, d2);
        let d3 = sample_monte_carlo(&a, 50_000, 10);
        assert_ne!(d1, d3);
    }

    #[test]
    fn tail_probability_enumerated_pair() {
        let s = synthesize_exact(&seq(&[1.0, 1.0])).unwrap();
        assert_eq!(tail_probability(&s.law, 1.0), 0.5);
    }

    #[test]
    fn tail_vanishes_beyond_l1_norm() {
        let s = synthesize_exact(&seq(&[0.5, 0.25, 1.0])).unwrap();
        assert_eq!(tail_probability(&s.law, 1.75), 0.0);
        assert_eq!(tail_probability(&s.law, 2.0), 0.0);
    }

    #[test]
    fn tail_below_zero_is_whole_space() {
        let s = synthesize_exact(&seq(&[1.0])).unwrap();
        assert_eq!(tail_probability(&s.law, -0.5), 1.0);
    }

    #[test]
    fn holmstedt_hand_values() {
        let a = seq(&[1.0, 1.0, 1.0, 1.0]);
        // t = √2: head of [t²] = 2 entries plus √2·√2.
        assert!((holmstedt_phi(&a, 2f64.sqrt()) - 4.0).abs() < 1e-12);
        // t ≥ √n: the whole mass sits in the head.
        assert!((holmstedt_phi(&a, 2.0) - 4.0).abs() < 1e-15);
        // t < 1: empty head, t‖a‖₂.
        assert!((holmstedt_phi(&a, 0.5) - 0.5 * 2.0).abs() < 1e-15);
    }

    #[test]
    fn montgomery_single_coefficient_below_two() {
        let a = seq(&[1.0]);
        let grid: Vec<f64> = (0..=29).map(|i| 0.1 + 2.9 * i as f64 / 29.0).collect();
        let rep = montgomery_smith_min_a(&a, &grid, 16.0).unwrap();
        assert!(rep.minimal_a <= 2.0, "minimal A = {}", rep.minimal_a);
        assert!(rep.minimal_a >= 1.0);
    }

    #[test]
    fn montgomery_postcondition_holds_on_grid() {
        let a = seq(&[0.5, 0.5, 0.5, 0.5]);
        let grid: Vec<f64> = (0..=24)
            .map(|i| 0.25 * (16f64).powf(i as f64 / 24.0))
            .collect();
        let rep = montgomery_smith_min_a(&a, &grid, 16.0).unwrap();
        assert!(rep.minimal_a.is_finite());
        let sum = synthesize_exact(&a).unwrap();
        for &t in &grid {
            let phi = crate::kfunc::k_l1_l2_seq(&a, t);
            let lhs = tail_probability(&sum.law, phi / rep.minimal_a);
            let rhs = (-rep.minimal_a * t * t).exp() / rep.minimal_a;
            assert!(lhs >= rhs, "violated at t = {t}");
        }
    }

    #[test]
    fn montgomery_cap_exhaustion_reports_witness() {
        // Cap of exactly 1 cannot work for (1,1): at A = 1 the threshold for
        // large t equals ‖a‖₁ and the strict tail is empty.
        let a = seq(&[1.0, 1.0]);
        let rep = montgomery_smith_min_a(&a, &[4.0, 0.1], 1.0).unwrap();
        assert!(rep.minimal_a.is_infinite());
        let (_, lhs, rhs) = rep.witness;
        assert!(lhs < rhs);
    }

    #[test]
    fn decode_round_trips() {
        for x in [0.0, 1.0, -0.375, 3.5, 1e-12, -7.25e8, f64::MIN_POSITIVE] {
            let (m, e) = decode_f64(x);
            assert_eq!(m as f64 * 2f64.powi(e), x);
        }
    }
}
