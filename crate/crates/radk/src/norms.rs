//! Norm evaluators for the function and sequence spaces in play:
//! Marcinkiewicz `M(φ)`, Orlicz/Luxemburg, Lorentz `Λ_p(φ)`, `L_p`, and the
//! sequence norms `l_p`, `l_1(log)`, `l_{r,p}`, plus weighted sequence
//! lattices for the real K-method.

use std::sync::Arc;

use crate::search::scan_refine_max;
use crate::sum::kahan_sum;
use crate::{ConcaveFn, Domain, Error, Result, Sequence, StepFunction};

/// `‖x‖_{M(φ)} = sup_{0<t≤1} (1/φ(t)) ∫_0^t x*`, by breakpoint evaluation
/// plus per-piece refinement.
pub fn marcinkiewicz_norm(x: &StepFunction, phi: &ConcaveFn) -> f64 {
    assert!(
        x.domain() == Domain::UnitInterval,
        "Marcinkiewicz norms here live on [0,1]"
    );
    let xs = x.rearranged();
    if xs.values().iter().all(|&v| v == 0.0) {
        return 0.0;
    }
    let mut cum = Vec::with_capacity(xs.ends().len());
    let mut acc = 0.0;
    let mut prev = 0.0;
    for (i, &e) in xs.ends().iter().enumerate() {
        acc += xs.values()[i] * (e - prev);
        cum.push(acc);
        prev = e;
    }
    let mut best = 0.0f64;
    let mut left = 0.0;
    for i in 0..xs.ends().len() {
        let right = xs.ends()[i];
        let base = if i == 0 { 0.0 } else { cum[i - 1] };
        let lv = if i == 0 { 0.0 } else { xs.ends()[i - 1] };
        let v = xs.values()[i];
        let obj = |u: f64| (base + v * (u - lv)) / phi.eval(u);
        best = best.max(obj(right));
        let lo = if left == 0.0 { right * 1e-12 } else { left };
        if right > lo {
            let (_, val) = scan_refine_max(lo, right, 8, obj);
            best = best.max(val);
        }
        left = right;
    }
    best
}

/// Luxemburg norm `inf { u > 0 : ∫_0^1 S(|x|/u) ≤ 1 }` for a convex `S` with
/// `S(0) = 0`. Brackets by doubling from `‖x‖_∞` (200-step cap — failure to
/// bracket is an error, never a silent result), then bisects to `rel_tol`.
pub fn orlicz_luxemburg_norm(
    x: &StepFunction,
    s_fn: impl Fn(f64) -> f64,
    rel_tol: f64,
) -> Result<f64> {
    let sup = lp_norm(x, f64::INFINITY);
    if sup == 0.0 {
        return Ok(0.0);
    }
    let modular = |u: f64| -> f64 {
        kahan_sum(
            x.pieces()
                .map(|(l, r, v)| if v == 0.0 { 0.0 } else { s_fn(v.abs() / u) * (r - l) }),
        )
    };
    let mut lo;
    let mut hi;
    if modular(sup) > 1.0 {
        lo = sup;
        hi = sup;
        let mut steps = 0;
        while modular(hi) > 1.0 {
            hi *= 2.0;
            steps += 1;
            if steps > 200 {
                return Err(Error::BracketFailed {
                    context: "orlicz_luxemburg_norm (upper)",
                });
            }
        }
    } else {
        hi = sup;
        lo = sup;
        let mut steps = 0;
        loop {
            lo *= 0.5;
            steps += 1;
            if modular(lo) > 1.0 {
                break;
            }
            if steps > 200 {
                return Err(Error::BracketFailed {
                    context: "orlicz_luxemburg_norm (lower)",
                });
            }
        }
    }
    while (hi - lo) > rel_tol * hi {
        let mid = 0.5 * (lo + hi);
        if modular(mid) <= 1.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// The Luxemburg norm of the Orlicz space generated by `N(t) = exp(t²) − 1`.
/// All step functions are bounded, hence in the closure of `L∞`; this norm
/// is used as the G-norm wherever one is needed.
pub fn exp_square_orlicz_norm(x: &StepFunction) -> Result<f64> {
    orlicz_luxemburg_norm(x, |t| (t * t).exp_m1(), 1e-12)
}

/// Lorentz norm `(∫_0^1 (x*)^p dφ)^{1/p}` as an exact Stieltjes sum over the
/// pieces of `x*`. `φ(0+)` is taken as 0 when the function claims to vanish
/// at the origin, otherwise as its value at 1e-15.
pub fn lorentz_norm(x: &StepFunction, phi: &ConcaveFn, p: f64) -> f64 {
    assert!(p >= 1.0, "Lorentz norm needs p ≥ 1");
    let xs = x.rearranged();
    let phi0 = if phi.claims_zero_at_origin() {
        0.0
    } else {
        phi.eval(1e-15)
    };
    let mut prev_phi = phi0;
    let mut terms = Vec::with_capacity(xs.piece_count());
    for (_, r, v) in xs.pieces() {
        let pr = phi.eval(r);
        if v != 0.0 {
            terms.push(v.abs().powf(p) * (pr - prev_phi));
        }
        prev_phi = pr;
    }
    kahan_sum(terms).max(0.0).powf(1.0 / p)
}

/// `L_p` norm of a step function; `p = ∞` returns the essential sup.
pub fn lp_norm(x: &StepFunction, p: f64) -> f64 {
    if p.is_infinite() {
        return x.values().iter().map(|v| v.abs()).fold(0.0, f64::max);
    }
    assert!(p >= 1.0, "L_p norm needs p ≥ 1 or ∞");
    x.power_integral(p, 0.0, f64::INFINITY).powf(1.0 / p)
}

/// `‖a‖_p` for sequences; `p = ∞` gives the max magnitude.
pub fn seq_lp_norm(a: &Sequence, p: f64) -> f64 {
    if p.is_infinite() {
        return a.coeffs().iter().map(|c| c.abs()).fold(0.0, f64::max);
    }
    assert!(p >= 1.0);
    kahan_sum(a.coeffs().iter().map(|c| c.abs().powf(p))).powf(1.0 / p)
}

/// `‖a‖_{l1(log)} = sup_k log₂^{-1}(2k) Σ_{i≤k} a_i*`. The sup is attained
/// within the truncation: partial sums are constant past `n` while the
/// weight keeps decreasing.
pub fn seq_l1log_norm(a: &Sequence) -> f64 {
    let star = a.rearranged();
    let mut acc = 0.0;
    let mut best = 0.0f64;
    for (i, &v) in star.coeffs().iter().enumerate() {
        acc += v;
        let k = (i + 1) as f64;
        best = best.max(acc / (2.0 * k).log2());
    }
    best
}

/// `‖a‖_{r,p} = (Σ (a_k*)^p k^{p/r-1})^{1/p}` — the sequence Lorentz norm.
pub fn seq_lorentz_rp_norm(a: &Sequence, r: f64, p: f64) -> f64 {
    assert!(r >= 1.0 && p >= 1.0);
    let star = a.rearranged();
    let e = p / r - 1.0;
    kahan_sum(
        star.coeffs()
            .iter()
            .enumerate()
            .map(|(i, &v)| v.powf(p) * ((i + 1) as f64).powf(e)),
    )
    .powf(1.0 / p)
}

// --- weighted sequence lattices ---------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LatticeKind {
    WeightedLp(f64),
    WeightedLinf,
}

/// A Banach lattice of two-sided sequences: a weighted `l_p` or weighted
/// `l_∞` over an explicit truncation window `k ∈ [k_min, k_max]`.
/// Admissibility requires the reference sequence `(min(1, 2^k))_k` to have a
/// finite window norm and a controlled tail.
#[derive(Clone)]
pub struct LatticeParam {
    kind: LatticeKind,
    weight: Arc<dyn Fn(i64) -> f64 + Send + Sync>,
    k_min: i64,
    k_max: i64,
    tail_tol: f64,
}

impl std::fmt::Debug for LatticeParam {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LatticeParam")
            .field("kind", &self.kind)
            .field("window", &(self.k_min, self.k_max))
            .field("tail_tol", &self.tail_tol)
            .finish()
    }
}

/// A two-sided sequence sample on a window of integer indices.
#[derive(Debug, Clone, PartialEq)]
pub struct Window {
    pub k_min: i64,
    pub values: Vec<f64>,
}

impl Window {
    pub fn k_max(&self) -> i64 {
        self.k_min + self.values.len() as i64 - 1
    }
}

/// Window norm together with an estimate of what the discarded tail could
/// contribute.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeValue {
    pub value: f64,
    pub tail_bound: f64,
}

impl LatticeParam {
    pub fn new(
        kind: LatticeKind,
        k_min: i64,
        k_max: i64,
        tail_tol: f64,
        weight: impl Fn(i64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        if k_min > k_max {
            return Err(Error::InvalidArgument("empty lattice window".into()));
        }
        let p = Self {
            kind,
            weight: Arc::new(weight),
            k_min,
            k_max,
            tail_tol,
        };
        p.check_admissible()?;
        Ok(p)
    }

    /// The lattice of the first worked example: `l_∞(u_k)` with
    /// `u_k = 1/(k+1)` for `k ≥ 0` and `u_k = 1` for `k < 0`.
    pub fn example1() -> Self {
        Self::new(LatticeKind::WeightedLinf, -40, 40, 1e-6, |k| {
            if k >= 0 {
                1.0 / (k as f64 + 1.0)
            } else {
                1.0
            }
        })
        .expect("reference lattice is admissible")
    }

    /// `l_p(2^{-kθ})`, the parameter of the `(·,·)_{θ,p}` spaces.
    pub fn theta_p(theta: f64, p: f64) -> Result<Self> {
        if !(0.0 < theta && theta < 1.0) {
            return Err(Error::InvalidArgument("need θ in (0,1)".into()));
        }
        Self::new(LatticeKind::WeightedLp(p), -40, 40, 1e-6, move |k| {
            2f64.powf(-theta * k as f64)
        })
    }

    pub fn kind(&self) -> LatticeKind {
        self.kind
    }

    pub fn window(&self) -> (i64, i64) {
        (self.k_min, self.k_max)
    }

    pub fn weight_at(&self, k: i64) -> f64 {
        (self.weight)(k)
    }

    /// Admissibility of the lattice: positive finite weights, a finite window
    /// norm of `(min(1,2^k))_k`, and tails of that reference sequence that
    /// decay geometrically below `tail_tol` relative to the window norm.
    fn check_admissible(&self) -> Result<()> {
        let term = |k: i64| (self.weight)(k) * 2f64.powi(k.clamp(-1060, 0) as i32).min(1.0);
        for k in self.k_min..=self.k_max {
            let w = (self.weight)(k);
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::InadmissibleLattice(format!(
                    "weight at k = {k} is {w}"
                )));
            }
        }
        let window_norm = match self.kind {
            LatticeKind::WeightedLinf => (self.k_min..=self.k_max)
                .map(term)
                .fold(0.0, f64::max),
            LatticeKind::WeightedLp(p) => kahan_sum((self.k_min..=self.k_max).map(|k| term(k).powf(p)))
                .powf(1.0 / p),
        };
        if !window_norm.is_finite() {
            return Err(Error::InadmissibleLattice(
                "window norm of (min(1,2^k)) diverges".into(),
            ));
        }
        // Tail probes just outside the window; the low tail rides the 2^k
        // factor, so demand a decaying ratio there.
        let lo1 = term(self.k_min - 1);
        let lo2 = term(self.k_min - 2);
        if lo1 > 0.0 && lo2 / lo1 >= 1.0 {
            return Err(Error::InadmissibleLattice(
                "reference tail does not decay below the window".into(),
            ));
        }
        let lo_tail = if lo1 > 0.0 {
            lo1 / (1.0 - (lo2 / lo1).min(0.999))
        } else {
            0.0
        };
        let hi_tail = match self.kind {
            LatticeKind::WeightedLinf => term(self.k_max + 1),
            LatticeKind::WeightedLp(p) => {
                let h1 = term(self.k_max + 1).powf(p);
                let h2 = term(self.k_max + 2).powf(p);
                if h1 > 0.0 && h2 / h1 >= 1.0 {
                    return Err(Error::InadmissibleLattice(
                        "reference tail does not decay above the window".into(),
                    ));
                }
                (h1 / (1.0 - (h2 / h1).min(0.999))).powf(1.0 / p)
            }
        };
        // Tails may not dominate the window norm: otherwise the truncation
        // misses the norm entirely.
        if lo_tail > window_norm.max(self.tail_tol) || hi_tail > window_norm.max(self.tail_tol) {
            return Err(Error::InadmissibleLattice(format!(
                "reference tails ({lo_tail:.3e}, {hi_tail:.3e}) dominate window norm {window_norm:.3e}"
            )));
        }
        Ok(())
    }
}

/// Weighted `l_p` / `l_∞` norm of a window, with a tail estimate formed from
/// the window's own edge terms under geometric extrapolation.
pub fn lattice_norm(window: &Window, e: &LatticeParam) -> Result<LatticeValue> {
    let (k_min, k_max) = e.window();
    if window.k_min > k_min || window.k_max() < k_max {
        return Err(Error::InvalidArgument(format!(
            "window [{}, {}] does not cover the lattice truncation [{k_min}, {k_max}]",
            window.k_min,
            window.k_max()
        )));
    }
    let term = |k: i64| -> f64 {
        let idx = (k - window.k_min) as usize;
        e.weight_at(k) * window.values[idx].abs()
    };
    let value = match e.kind() {
        LatticeKind::WeightedLinf => (k_min..=k_max).map(term).fold(0.0, f64::max),
        LatticeKind::WeightedLp(p) => {
            kahan_sum((k_min..=k_max).map(|k| term(k).powf(p))).powf(1.0 / p)
        }
    };
    // Edge-based tail estimate: the next term under geometric extrapolation
    // of the window's edge ratio; lp tails additionally sum the series.
    let edge_tail = |first: f64, second: f64, sum_series: bool| -> f64 {
        if second <= 0.0 || first / second >= 1.0 {
            return first;
        }
        let r = first / second;
        if sum_series {
            first * r / (1.0 - r)
        } else {
            first * r
        }
    };
    let tail = {
        let sum_series = matches!(e.kind(), LatticeKind::WeightedLp(_));
        let lo = edge_tail(term(k_min), term(k_min + 1), sum_series);
        let hi = edge_tail(term(k_max), term(k_max - 1), sum_series);
        lo.max(hi)
    };
    Ok(LatticeValue {
        value,
        tail_bound: tail,
    })
}
