//! Real K-method machinery: K-method space norms over weighted sequence
//! lattices, generalized Marcinkiewicz norms, the dilation function and its
//! indices, and the discrete realizer of prescribed K-functionals on
//! `(l1, l2)`.

use crate::concave::FnDomain;
use crate::norms::{lattice_norm, LatticeParam, Window};
use crate::search::golden_max;
use crate::{kfunc, ConcaveFn, Domain, Error, Result, Sequence, StepFunction};

/// The couples with a K-functional engine behind them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Couple {
    /// `(l1, l2)` on sequences; exact.
    SeqL1L2,
    /// `(L∞, G)` on the unit interval; sup form.
    FunLinfG,
    /// `(L1, L∞)`; exact head integral.
    FunL1Linf,
    /// `(L1, L2)` on the half line; Holmstedt max surrogate.
    FunL1L2Surrogate,
    /// `(L∞, L_q)` on the unit interval; head surrogate.
    FunLinfLq(f64),
}

/// A subject a K-functional can be taken of.
#[derive(Debug, Clone)]
pub enum Subject {
    Seq(Sequence),
    Fun(StepFunction),
}

/// Evaluates `K(t, subject)` for the given couple.
pub fn k_eval(subject: &Subject, couple: Couple, t: f64) -> Result<f64> {
    match (couple, subject) {
        (Couple::SeqL1L2, Subject::Seq(a)) => Ok(kfunc::k_l1_l2_seq(a, t)),
        (Couple::FunLinfG, Subject::Fun(x)) => Ok(kfunc::k_linf_g(x, t)),
        (Couple::FunL1Linf, Subject::Fun(x)) => kfunc::k_l1_linf_fun(x, t),
        (Couple::FunL1L2Surrogate, Subject::Fun(x)) => {
            if x.domain() != Domain::HalfLine {
                return Err(Error::InvalidArgument(
                    "(L1, L2) surrogate needs a half-line function".into(),
                ));
            }
            Ok(kfunc::k_l1_l2_fun(x, t))
        }
        (Couple::FunLinfLq(q), Subject::Fun(x)) => Ok(kfunc::k_linf_lq(x, t, q)),
        _ => Err(Error::InvalidArgument(
            "subject kind does not match the couple".into(),
        )),
    }
}

/// A K-method norm value together with the lattice tail estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KMethodValue {
    pub value: f64,
    pub tail_bound: f64,
}

/// Real K-method norm `‖ (K(2^k, x))_k ‖_E` over the lattice truncation
/// window. The K-values over the window evaluate in parallel when enabled.
pub fn kmethod_norm(subject: &Subject, couple: Couple, e: &LatticeParam) -> Result<KMethodValue> {
    let (k_min, k_max) = e.window();
    let ks: Vec<i64> = (k_min..=k_max).collect();
    let evaluated = crate::par::map_slice(&ks, |&k| k_eval(subject, couple, 2f64.powi(k as i32)));
    let mut values = Vec::with_capacity(evaluated.len());
    for v in evaluated {
        values.push(v?);
    }
    let lv = lattice_norm(&Window { k_min, values }, e)?;
    Ok(KMethodValue {
        value: lv.value,
        tail_bound: lv.tail_bound,
    })
}

/// Generalized Marcinkiewicz norm `sup_{t>0} K(t, x)/φ(t)`, over a log-spaced
/// grid (default `2^-40 .. 2^40`, 161 points) with golden-section refinement
/// around the grid argmax.
pub fn gen_marcinkiewicz_norm(x: &StepFunction, couple: Couple, phi: &ConcaveFn) -> Result<f64> {
    let subject = Subject::Fun(x.clone());
    let grid = kfunc::KCurve::log_grid(2f64.powi(-40), 2f64.powi(40), 161);
    let ratios = crate::par::map_slice(&grid, |&t| {
        k_eval(&subject, couple, t).map(|k| k / phi.eval(t))
    });
    let mut best = 0.0f64;
    let mut best_i = 0usize;
    for (i, r) in ratios.into_iter().enumerate() {
        let r = r?;
        if r > best {
            best = r;
            best_i = i;
        }
    }
    let lo = grid[best_i.saturating_sub(1)];
    let hi = grid[(best_i + 1).min(grid.len() - 1)];
    if hi > lo {
        let (_, refined) = golden_max(
            lo,
            hi,
            |t| {
                k_eval(&subject, couple, t)
                    .map(|k| k / phi.eval(t))
                    .unwrap_or(0.0)
            },
            1e-10,
        );
        best = best.max(refined);
    }
    Ok(best)
}

/// `φ_ρ(t) = φ₀(t) · ρ(φ₁(t)/φ₀(t))` — the parameter function produced by
/// reiteration of generalized Marcinkiewicz constructions.
pub fn phi_rho(phi0: &ConcaveFn, phi1: &ConcaveFn, rho: &ConcaveFn) -> ConcaveFn {
    let p0 = phi0.clone();
    let p1 = phi1.clone();
    let r = rho.clone();
    ConcaveFn::new(
        phi0.domain(),
        false,
        phi0.claims_zero_at_origin(),
        move |t| {
            let a = p0.eval(t);
            a * r.eval(p1.eval(t) / a)
        },
    )
}

/// Dilation function `M_f(t) = sup { f(st)/f(s) : s, st in the domain }`,
/// by a log-spaced grid in `s` whose size doubles until the sup moves by
/// less than 1e-4 relatively.
pub fn dilation_function(f: &ConcaveFn, t: f64, s_grid_size: usize) -> f64 {
    assert!(t > 0.0);
    let (s_lo, s_hi) = match f.domain() {
        FnDomain::UnitInterval => (2f64.powi(-45), 1f64.min(1.0 / t)),
        FnDomain::HalfLine => (2f64.powi(-35) / t.max(1.0), 2f64.powi(35) / t.max(1.0)),
    };
    let sup_on = |points: usize| -> f64 {
        let (llo, lhi) = (s_lo.ln(), s_hi.ln());
        let mut best = 0.0f64;
        for i in 0..points {
            let s = (llo + (lhi - llo) * i as f64 / (points - 1) as f64).exp();
            let denom = f.eval(s);
            if denom > 0.0 {
                best = best.max(f.eval(s * t) / denom);
            }
        }
        best
    };
    let mut points = s_grid_size.max(64);
    let mut best = sup_on(points);
    for _ in 0..6 {
        points *= 2;
        let next = sup_on(points);
        let done = (next - best).abs() <= 1e-4 * next.abs().max(1e-300);
        best = best.max(next);
        if done {
            break;
        }
    }
    best
}

/// Estimated dilation indices `γ_f`, `δ_f` with the observed extrapolation
/// spread. `δ` uses genuine large-`t` dilations on the half line; on the
/// unit interval the sup is restricted to `st ≤ 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct DilationIndices {
    pub gamma: f64,
    pub delta: f64,
    pub gamma_spread: f64,
    pub delta_spread: f64,
    pub grid_meta: String,
}

/// Estimates `γ_f = lim_{t→0} ln M_f(t)/ln t` and `δ_f = lim_{t→∞}` by
/// evaluating at `t = 2^∓j`, `j = 10..30`, with a Richardson step on the
/// last five points (the exponents converge like `c/j` up to slowly varying
/// factors, so `j·g_j − (j−1)·g_{j−1}` cancels the leading error).
pub fn dilation_indices(f: &ConcaveFn) -> DilationIndices {
    let g_small: Vec<(u32, f64)> = (9..=30)
        .map(|j| {
            let m = dilation_function(f, 2f64.powi(-(j as i32)), 256);
            (j, -m.log2() / j as f64)
        })
        .collect();
    let g_large: Vec<(u32, f64)> = (9..=30)
        .map(|j| {
            let m = dilation_function(f, 2f64.powi(j as i32), 256);
            (j, m.log2() / j as f64)
        })
        .collect();
    let richardson = |g: &[(u32, f64)]| -> (f64, f64) {
        let last = &g[g.len() - 5..];
        let mut vals = Vec::with_capacity(5);
        for w in last.windows(2) {
            let (j0, g0) = w[0];
            let (j1, g1) = w[1];
            vals.push(j1 as f64 * g1 - j0 as f64 * g0);
        }
        let mean = vals.iter().sum::<f64>() / vals.len() as f64;
        let spread = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
            - vals.iter().cloned().fold(f64::INFINITY, f64::min);
        (mean, spread)
    };
    let (gamma, gamma_spread) = richardson(&g_small);
    let (delta, delta_spread) = richardson(&g_large);
    let mut meta = format!(
        "t = 2^±j, j = 10..30, Richardson on last 5; domain {:?}",
        f.domain()
    );
    if gamma_spread > 0.1 || delta_spread > 0.1 {
        meta.push_str("; non-convergent spread");
    }
    DilationIndices {
        gamma,
        delta,
        gamma_spread,
        delta_spread,
        grid_meta: meta,
    }
}

/// Builds the sequence realizing a prescribed K-functional shape on
/// `(l1, l2)`: `a_k = g(k) − g(k−1)` with `g(t) = f(√t)` — the unit averages
/// of the derivative realizer. Requires `f` linear on `(0,1]` (checked to
/// 1e-12 relative), nondecreasing and concave on the sampled range.
pub fn realize_kfunctional(f: &ConcaveFn, n: usize) -> Result<Sequence> {
    if f.domain() != FnDomain::HalfLine {
        return Err(Error::InvalidFunctionClass(
            "realizer parameter must live on (0,∞)".into(),
        ));
    }
    if n < 8 {
        return Err(Error::InvalidArgument("realizer needs n ≥ 8".into()));
    }
    let f1 = f.eval(1.0);
    if !(f1.is_finite() && f1 > 0.0) {
        return Err(Error::InvalidFunctionClass("f(1) must be positive".into()));
    }
    for i in 1..=16 {
        let t = i as f64 / 16.0;
        let v = f.eval(t);
        if (v - f1 * t).abs() > 1e-12 * f1 {
            return Err(Error::InvalidFunctionClass(format!(
                "f is not linear on (0,1]: f({t}) = {v}, expected {}",
                f1 * t
            )));
        }
    }
    let grid: Vec<f64> = (0..=64)
        .map(|i| 1.0 + (n as f64 - 1.0) * i as f64 / 64.0)
        .collect();
    let probe = ConcaveFn::new(FnDomain::HalfLine, true, false, {
        let f = f.clone();
        move |t| f.eval(t)
    });
    probe.validate_on_grid(&grid, 1e-9)?;
    let g = |t: f64| if t == 0.0 { 0.0 } else { f.eval(t.sqrt()) };
    let mut coeffs = Vec::with_capacity(n);
    let mut prev_g = 0.0;
    let mut prev_a = f64::INFINITY;
    for k in 1..=n {
        let gk = g(k as f64);
        let mut a = (gk - prev_g).max(0.0);
        // Concavity of g makes the increments nonincreasing; clamp the
        // round-off stragglers.
        if a > prev_a {
            a = prev_a;
        }
        coeffs.push(a);
        prev_g = gk;
        prev_a = a;
    }
    Sequence::new(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms;

    fn min_t_sqrt_t() -> ConcaveFn {
        ConcaveFn::new(FnDomain::HalfLine, true, true, |t| t.min(t.sqrt()))
    }

    // --- kmethod_norm -------------------------------------------------------

    #[test]
    fn example1_lattice_on_basis_vector() {
        let e1 = Sequence::new(vec![1.0]).unwrap();
        let v = kmethod_norm(&Subject::Seq(e1), Couple::SeqL1L2, &LatticeParam::example1())
            .unwrap();
        assert!((v.value - 1.0).abs() < 1e-10, "{}", v.value);
    }

    #[test]
    fn zero_subject_zero_norm() {
        let v = kmethod_norm(
            &Subject::Seq(Sequence::empty()),
            Couple::SeqL1L2,
            &LatticeParam::example1(),
        )
        .unwrap();
        assert_eq!(v.value, 0.0);
    }

    #[test]
    fn example1_bound_against_l1log() {
        let a = Sequence::new(vec![1.0, 0.75, 0.5, 0.25, 0.2, 0.1]).unwrap();
        let v = kmethod_norm(
            &Subject::Seq(a.clone()),
            Couple::SeqL1L2,
            &LatticeParam::example1(),
        )
        .unwrap();
        assert!(v.value <= 14.0 * norms::seq_l1log_norm(&a));
    }

    #[test]
    fn mismatched_subject_errors() {
        let x = StepFunction::constant_unit(1.0);
        assert!(kmethod_norm(
            &Subject::Fun(x),
            Couple::SeqL1L2,
            &LatticeParam::example1()
        )
        .is_err());
    }

    // --- gen_marcinkiewicz ---------------------------------------------------

    #[test]
    fn min_one_t_weight_recovers_sup_norm() {
        // K(t, x; L1, L∞)/min(1,t): the sup over t ≤ 1 reaches x*(0+) = ‖x‖_∞
        // and the t ≥ 1 side saturates at ‖x‖_1 ≤ ‖x‖_∞.
        let x = StepFunction::new(
            Domain::UnitInterval,
            vec![0.2, 0.7, 1.0],
            vec![3.0, 1.0, 0.5],
        )
        .unwrap();
        let v = gen_marcinkiewicz_norm(&x, Couple::FunL1Linf, &ConcaveFn::min_one()).unwrap();
        assert!(
            (v - norms::lp_norm(&x, f64::INFINITY)).abs() < 1e-6,
            "{v}"
        );
    }

    #[test]
    fn identity_weight_matches_marcinkiewicz_norm() {
        let x = StepFunction::new(Domain::UnitInterval, vec![0.5, 1.0], vec![2.0, 1.0]).unwrap();
        let lhs =
            gen_marcinkiewicz_norm(&x, Couple::FunL1Linf, &ConcaveFn::identity(FnDomain::HalfLine))
                .unwrap();
        let rhs = norms::marcinkiewicz_norm(&x, &ConcaveFn::identity(FnDomain::UnitInterval));
        assert!((lhs - rhs).abs() < 1e-6 * rhs, "{lhs} vs {rhs}");
    }

    #[test]
    fn zero_function_zero_norm() {
        let x = StepFunction::zero(Domain::UnitInterval);
        let v = gen_marcinkiewicz_norm(&x, Couple::FunL1Linf, &ConcaveFn::min_one()).unwrap();
        assert_eq!(v, 0.0);
    }

    // --- phi_rho ----------------------------------------------------------------

    #[test]
    fn constant_rho_returns_phi0() {
        let phi0 = ConcaveFn::min_one();
        let rho = ConcaveFn::new(FnDomain::HalfLine, true, false, |_| 1.0);
        let phi1 = ConcaveFn::phi1_half_line();
        let combined = phi_rho(&phi0, &phi1, &rho);
        for t in [0.01, 0.5, 2.0, 100.0] {
            assert!((combined.eval(t) - phi0.eval(t)).abs() < 1e-15);
        }
    }

    #[test]
    fn equal_phis_scale_by_rho_of_one() {
        let phi0 = ConcaveFn::min_one();
        let rho = ConcaveFn::log4_plus();
        let combined = phi_rho(&phi0, &phi0, &rho);
        let scale = rho.eval(1.0);
        for t in [0.1, 1.0, 10.0] {
            assert!((combined.eval(t) - scale * phi0.eval(t)).abs() < 1e-12);
        }
    }

    #[test]
    fn example1_composition_tracks_loglog_weight() {
        // φ₀ = min(1,t), φ₁ the half-line extension of u·log₂^{1/2}(2/u),
        // ρ = log₂(4+t): the composite stays within a factor-4 band of
        // t·log₂log₂(16/t) on [2^-20, 1].
        let combined = phi_rho(
            &ConcaveFn::min_one(),
            &ConcaveFn::phi1_half_line(),
            &ConcaveFn::log4_plus(),
        );
        let target = ConcaveFn::loglog16();
        let mut lo = f64::INFINITY;
        let mut hi = 0.0f64;
        for j in 0..=200 {
            let t = 2f64.powf(-20.0 * (1.0 - j as f64 / 200.0));
            let r = combined.eval(t) / target.eval(t);
            lo = lo.min(r);
            hi = hi.max(r);
        }
        assert!(hi / lo <= 4.0, "band ratio {}", hi / lo);
    }

    // --- dilation --------------------------------------------------------------

    #[test]
    fn power_law_dilation_is_exact() {
        let f = ConcaveFn::power(FnDomain::UnitInterval, 0.5);
        let m = dilation_function(&f, 0.25, 256);
        assert!((m - 0.5).abs() < 1e-9);
    }

    #[test]
    fn concave_dilation_bounded_by_max_one_t() {
        let f = ConcaveFn::phi1_unit();
        for t in [0.01, 0.1, 0.5] {
            let m = dilation_function(&f, t, 256);
            assert!(m <= 1.0 + 1e-9);
        }
    }

    #[test]
    fn near_linear_function_has_near_linear_dilation() {
        let f = ConcaveFn::loglog16();
        let t = 2f64.powi(-10);
        let m = dilation_function(&f, t, 512);
        assert!(m >= t && m <= 2.0 * t, "M = {m}");
    }

    #[test]
    fn power_law_indices() {
        let f = ConcaveFn::power(FnDomain::HalfLine, 0.5);
        let d = dilation_indices(&f);
        assert!((d.gamma - 0.5).abs() < 0.05, "γ = {}", d.gamma);
        assert!((d.delta - 0.5).abs() < 0.05, "δ = {}", d.delta);
        assert!(d.gamma_spread < 0.1 && d.delta_spread < 0.1);
    }

    #[test]
    fn identity_indices_are_one() {
        let f = ConcaveFn::identity(FnDomain::HalfLine);
        let d = dilation_indices(&f);
        assert!((d.gamma - 1.0).abs() < 1e-9);
        assert!((d.delta - 1.0).abs() < 1e-9);
    }

    #[test]
    fn phi1_lower_index_is_one() {
        let d = dilation_indices(&ConcaveFn::phi1_unit());
        assert!((d.gamma - 1.0).abs() < 0.05, "γ = {}", d.gamma);
    }

    #[test]
    fn indices_ordered_for_concave_functions() {
        for alpha in [0.25, 0.5, 0.75, 1.0] {
            let d = dilation_indices(&ConcaveFn::power(FnDomain::HalfLine, alpha));
            assert!(d.gamma <= d.delta + 0.01);
            assert!(d.gamma >= -0.01 && d.delta <= 1.01);
        }
    }

    // --- realizer ------------------------------------------------------------------

    #[test]
    fn realizer_hand_algebra_for_min_t_sqrt_t() {
        // g(t) = f(√t) = t^{1/4} for t ≥ 1: a_1 = 1, a_k = k^{1/4} − (k−1)^{1/4}.
        let a = realize_kfunctional(&min_t_sqrt_t(), 16).unwrap();
        assert!((a.coeffs()[0] - 1.0).abs() < 1e-12);
        for k in 2..=16usize {
            let expect = (k as f64).powf(0.25) - ((k - 1) as f64).powf(0.25);
            assert!((a.coeffs()[k - 1] - expect).abs() < 1e-12);
        }
        let r = a.rearranged();
        assert_eq!(r.coeffs(), a.coeffs(), "realizer output is nonincreasing");
    }

    #[test]
    fn realizer_ratio_against_target() {
        let f = min_t_sqrt_t();
        let a = realize_kfunctional(&f, 256).unwrap();
        let mut lo = f64::INFINITY;
        let mut hi = 0.0f64;
        for i in 0..=32 {
            let t = 1.0 + 15.0 * i as f64 / 32.0;
            let r = kfunc::k_l1_l2_seq(&a, t) / f.eval(t);
            lo = lo.min(r);
            hi = hi.max(r);
        }
        assert!(hi / lo <= 10.0, "ratio band {}", hi / lo);
    }

    #[test]
    fn realizer_small_t_regime() {
        let a = realize_kfunctional(&min_t_sqrt_t(), 64).unwrap();
        let l2 = norms::seq_lp_norm(&a, 2.0);
        for t in [0.1, 0.5, 1.0] {
            let k = kfunc::k_l1_l2_seq(&a, t);
            assert!((k - t * l2).abs() < 1e-12 * l2);
        }
    }

    #[test]
    fn realizer_rejects_nonlinear_start() {
        let f = ConcaveFn::new(FnDomain::HalfLine, true, true, |t| t.sqrt());
        assert!(realize_kfunctional(&f, 16).is_err());
    }

    #[test]
    fn realizer_on_globally_linear_f() {
        // A globally linear f passes the on-(0,1] validation but has no
        // sublinear growth to realize: the increment formula gives
        // a_k = f(1)(√k − √(k-1)) and the t ≤ 1 regime stays t·‖a‖₂.
        let f = ConcaveFn::new(FnDomain::HalfLine, true, true, |t| 2.0 * t);
        let a = realize_kfunctional(&f, 16).unwrap();
        for k in 1..=16usize {
            let expect = 2.0 * ((k as f64).sqrt() - ((k - 1) as f64).sqrt());
            assert!((a.coeffs()[k - 1] - expect).abs() < 1e-12);
        }
        let l2 = norms::seq_lp_norm(&a, 2.0);
        assert!((kfunc::k_l1_l2_seq(&a, 0.5) - 0.5 * l2).abs() < 1e-12 * l2);
    }

    #[test]
    fn realizer_rejects_wrong_domain() {
        let f = ConcaveFn::identity(FnDomain::UnitInterval);
        assert!(realize_kfunctional(&f, 16).is_err());
    }
}
