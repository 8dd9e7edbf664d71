//! One-dimensional search helpers: golden-section refinement and coarse
//! scan-then-refine maximization over an interval.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section maximization of `f` on `[lo, hi]`. Runs until the bracket
/// width falls below `rel_tol` relative to the initial span (or 96 iterations).
/// Returns the best interior point and value; endpoints are the caller's job.
pub(crate) fn golden_max(lo: f64, hi: f64, f: impl Fn(f64) -> f64, rel_tol: f64) -> (f64, f64) {
    debug_assert!(lo <= hi);
    let span = hi - lo;
    if span <= 0.0 {
        return (lo, f(lo));
    }
    let mut a = lo;
    let mut b = hi;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..96 {
        if (b - a) <= rel_tol * span {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc >= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Golden-section minimization on `[lo, hi]`.
pub(crate) fn golden_min(lo: f64, hi: f64, f: impl Fn(f64) -> f64, rel_tol: f64) -> (f64, f64) {
    let (x, v) = golden_max(lo, hi, |x| -f(x), rel_tol);
    (x, -v)
}

/// Maximize `f` on `[lo, hi]`: a coarse scan at `coarse` evenly spaced interior
/// points brackets the best candidate, golden-section then refines inside the
/// bracket. Both endpoints are evaluated as well.
pub(crate) fn scan_refine_max(lo: f64, hi: f64, coarse: usize, f: impl Fn(f64) -> f64) -> (f64, f64) {
    debug_assert!(lo <= hi && coarse >= 1);
    let mut best_x = lo;
    let mut best_v = f(lo);
    let fhi = f(hi);
    if fhi > best_v {
        best_x = hi;
        best_v = fhi;
    }
    let step = (hi - lo) / (coarse as f64 + 1.0);
    if step <= 0.0 {
        return (best_x, best_v);
    }
    let mut best_i = 0usize; // 0 = an endpoint won
    for i in 1..=coarse {
        let x = lo + step * i as f64;
        let v = f(x);
        if v > best_v {
            best_x = x;
            best_v = v;
            best_i = i;
        }
    }
    // Refine around the winning cell (its two neighbours bracket the max for a
    // locally unimodal objective).
    let (ra, rb) = if best_i == 0 {
        // Endpoint won; still sweep the two edge cells in case the max hides
        // just inside.
        if best_x == lo {
            (lo, lo + step)
        } else {
            (hi - step, hi)
        }
    } else {
        (lo + step * (best_i as f64 - 1.0), lo + step * (best_i as f64 + 1.0).min(coarse as f64 + 1.0))
    };
    let (gx, gv) = golden_max(ra, rb.min(hi), &f, 1e-13);
    if gv > best_v {
        (gx, gv)
    } else {
        (best_x, best_v)
    }
}
