//! Peetre K-functional engines.
//!
//! `K(t, x; X₀, X₁) = inf { ‖x₀‖_{X₀} + t‖x₁‖_{X₁} : x = x₀ + x₁ }`.
//!
//! Exact engines: `(l1, l2)` on sequences via soft-threshold decompositions,
//! `(L1, L∞)` as a head integral of the rearrangement. Formula engines:
//! `(L∞, G)` and general Marcinkiewicz couples via the sup form, evaluated at
//! breakpoints plus golden-section refinement inside each piece. Surrogates:
//! the Holmstedt max form for `(L1, L2)` and the head form for `(L∞, L_q)` —
//! both equivalent to the K-functional within universal constants, neither
//! concave pointwise, and labelled as surrogates wherever reported.

pub mod oracle;

use crate::search::{golden_min, scan_refine_max};
use crate::{ConcaveFn, Domain, Result, Sequence, StepFunction};

/// Exact `K(t, a; l1, l2)`.
///
/// The minimizing decomposition clips each coordinate at a common level λ:
/// the `l1` part takes `(|a_k| - λ)₊` and the `l2` part `min(|a_k|, λ)`.
/// The resulting one-dimensional objective is evaluated with prefix sums and
/// minimized over each bracket between consecutive sorted magnitudes by
/// golden section (the objective is smooth and convex inside a bracket).
pub fn k_l1_l2_seq(a: &Sequence, t: f64) -> f64 {
    assert!(t > 0.0, "K-functional needs t > 0");
    let mut s: Vec<f64> = a.coeffs().iter().map(|c| c.abs()).collect();
    s.retain(|&v| v > 0.0);
    if s.is_empty() {
        return 0.0;
    }
    s.sort_unstable_by(f64::total_cmp); // ascending
    let n = s.len();
    // prefix_sq[i] = Σ_{j<i} s_j²; suffix_sum[i] = Σ_{j≥i} s_j.
    let mut prefix_sq = vec![0.0; n + 1];
    for i in 0..n {
        prefix_sq[i + 1] = prefix_sq[i] + s[i] * s[i];
    }
    let mut suffix_sum = vec![0.0; n + 1];
    for i in (0..n).rev() {
        suffix_sum[i] = suffix_sum[i + 1] + s[i];
    }
    // Objective for λ in the bracket [s_{i-1}, s_i): entries j ≥ i sit above λ.
    let g_at = |i: usize, lambda: f64| -> f64 {
        let above = (n - i) as f64;
        let l1 = suffix_sum[i] - above * lambda;
        let sq = prefix_sq[i] + above * lambda * lambda;
        l1 + t * sq.sqrt()
    };
    let mut best = g_at(0, 0.0); // λ = 0: pure l1 cost
    let mut lo = 0.0;
    for i in 0..n {
        let hi = s[i];
        if hi > lo {
            let (_, v) = golden_min(lo, hi, |lambda| g_at(i, lambda), 1e-14);
            best = best.min(v);
        }
        best = best.min(g_at(i + 1, hi)); // bracket endpoint
        lo = hi;
    }
    best
}

/// `K(u, x; L1, L∞) = ∫_0^u x*(s) ds`, exact.
pub fn k_l1_linf_fun(x: &StepFunction, u: f64) -> Result<f64> {
    x.rearranged().head_integral(u)
}

/// `K(t, x; L∞, G)` via the sup form over the Marcinkiewicz couple
/// `(M(u), M(u·log₂^{1/2}(2/u)))`:
///
/// `sup_{0<u≤1} (1/u) ∫_0^u x* · min(1, t·log₂^{-1/2}(2/u))`.
///
/// Evaluated at every breakpoint of `x*`, at the dyadic probes `2^-k`
/// (which realize the classical lower bound `K ≥ x*(2^{-([t²]-1)})` for
/// `t ≥ 1`), and refined inside each piece.
pub fn k_linf_g(x: &StepFunction, t: f64) -> f64 {
    assert!(t > 0.0, "K-functional needs t > 0");
    assert!(
        x.domain() == Domain::UnitInterval,
        "(L∞, G) lives on the unit interval"
    );
    let weight = move |u: f64| -> f64 {
        let l = (2.0 / u).log2();
        (t / l.sqrt()).min(1.0)
    };
    sup_weighted_head_average(&x.rearranged(), weight, true)
}

/// K-functional of a couple of Marcinkiewicz spaces `(M(φ₀), M(φ₁))` on
/// `[0,1]`:
///
/// `sup_{0<u≤1} ∫_0^u x* / max(φ₀(u), φ₁(u)/t)`.
pub fn k_marcinkiewicz_pair(x: &StepFunction, t: f64, phi0: &ConcaveFn, phi1: &ConcaveFn) -> f64 {
    assert!(t > 0.0, "K-functional needs t > 0");
    assert!(
        x.domain() == Domain::UnitInterval,
        "Marcinkiewicz couples live on the unit interval"
    );
    let p0 = phi0.clone();
    let p1 = phi1.clone();
    let weight = move |u: f64| -> f64 {
        let d = p0.eval(u).max(p1.eval(u) / t);
        u / d
    };
    sup_weighted_head_average(&x.rearranged(), weight, true)
}

/// Holmstedt surrogate for `K(t, x; L1, L2)` on the half line:
///
/// `max( ∫_0^{t²} x*, t·(∫_{t²}^∞ (x*)²)^{1/2} )`,
///
/// exact on step functions. Equivalent to the K-functional within universal
/// constants; not itself concave in `t`.
pub fn k_l1_l2_fun(x: &StepFunction, t: f64) -> f64 {
    assert!(t > 0.0, "K-functional needs t > 0");
    let xs = x.rearranged();
    if xs.piece_count() == 0 {
        return 0.0;
    }
    let cut = t * t;
    let head = xs.head_integral(cut).unwrap_or(0.0);
    let tail_sq = xs.power_integral(2.0, cut, f64::INFINITY);
    head.max(t * tail_sq.sqrt())
}

/// Head surrogate for `K(t, x; L∞, L_q)` on the unit interval:
///
/// `t · (∫_0^{min(1, t^{-q})} (x*)^q)^{1/q}`,
///
/// exact on step functions; a surrogate in the same sense as
/// [`k_l1_l2_fun`].
pub fn k_linf_lq(x: &StepFunction, t: f64, q: f64) -> f64 {
    assert!(t > 0.0, "K-functional needs t > 0");
    assert!((1.0..f64::INFINITY).contains(&q), "need q in [1, ∞)");
    let xs = x.rearranged();
    let cut = t.powf(-q).min(1.0);
    let head = xs.power_integral(q, 0.0, cut);
    t * head.powf(1.0 / q)
}

/// Maximizes `u ↦ (∫_0^u x*) · weight(u)/u` over `(0, 1]` for a nonincreasing
/// step function `x*`. Candidates: all breakpoints, optional dyadic probes,
/// and a scan-refine pass inside each piece (the head average is
/// nonincreasing while the weights in use are nondecreasing, so the
/// per-piece objective is well behaved).
fn sup_weighted_head_average(
    xs: &StepFunction,
    weight: impl Fn(f64) -> f64,
    dyadic_probes: bool,
) -> f64 {
    debug_assert!(xs.is_nonincreasing());
    let ends = xs.ends();
    let values = xs.values();
    if values.is_empty() || values.iter().all(|&v| v == 0.0) {
        return 0.0;
    }
    // cumulative integrals at ends
    let mut cum = Vec::with_capacity(ends.len());
    let mut acc = 0.0;
    let mut prev = 0.0;
    for (i, &e) in ends.iter().enumerate() {
        acc += values[i] * (e - prev);
        cum.push(acc);
        prev = e;
    }
    let head = |u: f64, piece: usize| -> f64 {
        let base = if piece == 0 { 0.0 } else { cum[piece - 1] };
        let left = if piece == 0 { 0.0 } else { ends[piece - 1] };
        base + values[piece] * (u - left)
    };
    let mut best = 0.0f64;
    let mut left = 0.0;
    for i in 0..ends.len() {
        let right = ends[i];
        let obj = |u: f64| head(u, i) * weight(u) / u;
        best = best.max(obj(right));
        // interior of the piece
        let lo = if left == 0.0 { right * 1e-12 } else { left };
        if right > lo {
            let (_, v) = scan_refine_max(lo, right, 8, obj);
            best = best.max(v);
        }
        left = right;
    }
    if dyadic_probes {
        for k in 0..=60 {
            let u = 2f64.powi(-k);
            if u > xs.support_end() && xs.domain() == Domain::HalfLine {
                continue;
            }
            let h = xs.head_integral(u).unwrap_or(0.0);
            best = best.max(h * weight(u) / u);
        }
    }
    best
}

/// A sampled K-functional curve on an increasing t-grid.
#[derive(Debug, Clone, PartialEq)]
pub struct KCurve {
    pub t_grid: Vec<f64>,
    pub values: Vec<f64>,
    pub couple_tag: String,
}

impl KCurve {
    /// Evaluates `k(t)` over the grid, in parallel when enabled.
    pub fn evaluate(
        couple_tag: impl Into<String>,
        t_grid: Vec<f64>,
        k: impl Fn(f64) -> f64 + Sync,
    ) -> Self {
        let values = crate::par::map_slice(&t_grid, |&t| k(t));
        Self {
            t_grid,
            values,
            couple_tag: couple_tag.into(),
        }
    }

    /// A log-spaced grid of `points` values in `[lo, hi]`.
    pub fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
        assert!(points >= 2 && lo > 0.0 && hi > lo);
        let (llo, lhi) = (lo.ln(), hi.ln());
        (0..points)
            .map(|i| (llo + (lhi - llo) * i as f64 / (points - 1) as f64).exp())
            .collect()
    }

    /// Checks all three curve invariants of a genuine K-functional at one
    /// tolerance: nondecreasing in `t`, `K(t)/t` nonincreasing, and concave.
    pub fn check_invariants(&self, rel_tol: f64) -> std::result::Result<(), String> {
        self.check_monotonicity(rel_tol)?;
        self.check_concavity(rel_tol)
    }

    /// Nondecreasing values and nonincreasing `K(t)/t`. These hold exactly
    /// for every engine here, including the sup-form and surrogate ones.
    pub fn check_monotonicity(&self, rel_tol: f64) -> std::result::Result<(), String> {
        let t = &self.t_grid;
        let v = &self.values;
        if t.len() != v.len() || t.len() < 2 {
            return Err("curve needs at least two grid points".into());
        }
        for i in 1..t.len() {
            let scale = v[i].abs().max(v[i - 1].abs()).max(1e-300);
            if v[i] < v[i - 1] - rel_tol * scale {
                return Err(format!(
                    "{}: K not nondecreasing at t = {}",
                    self.couple_tag, t[i]
                ));
            }
            let r0 = v[i - 1] / t[i - 1];
            let r1 = v[i] / t[i];
            if r1 > r0 + rel_tol * r0.abs().max(1e-300) {
                return Err(format!(
                    "{}: K(t)/t not nonincreasing at t = {}",
                    self.couple_tag, t[i]
                ));
            }
        }
        Ok(())
    }

    /// Chord test on consecutive triples. Exact K-functionals pass at
    /// round-off tolerances; the Marcinkiewicz sup form is only equivalent
    /// to a K-functional and can dip below chords by a few parts in 10³, so
    /// callers pick the tolerance per engine.
    pub fn check_concavity(&self, rel_tol: f64) -> std::result::Result<(), String> {
        let t = &self.t_grid;
        let v = &self.values;
        if t.len() != v.len() || t.len() < 3 {
            return Err("concavity check needs at least three grid points".into());
        }
        for i in 1..t.len() - 1 {
            let frac = (t[i] - t[i - 1]) / (t[i + 1] - t[i - 1]);
            let chord = v[i - 1] + (v[i + 1] - v[i - 1]) * frac;
            let scale = v[i].abs().max(chord.abs()).max(1e-300);
            if v[i] < chord - rel_tol * scale {
                return Err(format!(
                    "{}: concavity fails at t = {} (value {}, chord {})",
                    self.couple_tag, t[i], v[i], chord
                ));
            }
        }
        Ok(())
    }
}
