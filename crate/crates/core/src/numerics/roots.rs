//! Bracketed root refinement.

/// Bisection on `[lo, hi]` down to `|f| < f_tol` or interval width `< x_tol`.
///
/// Requires `f(lo)` and `f(hi)` to have opposite (or zero) signs; returns
/// `None` when the bracket does not straddle a sign change.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, f_tol: f64, x_tol: f64) -> Option<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Some(lo);
    }
    if fhi == 0.0 {
        return Some(hi);
    }
    if flo.signum() == fhi.signum() {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fmid = f(mid);
        if fmid == 0.0 || fmid.abs() < f_tol || (hi - lo).abs() < x_tol.max(f64::EPSILON * mid.abs()) {
            return Some(mid);
        }
        if fmid.signum() == flo.signum() {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Golden-section refinement of an interior extremum of `f` on `[lo, hi]`.
///
/// `maximize` selects which kind of extremum is tracked. Returns the
/// abscissa of the extremum.
pub fn refine_extremum<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, maximize: bool) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let sign = if maximize { 1.0 } else { -1.0 };
    let mut a = hi - INV_PHI * (hi - lo);
    let mut b = lo + INV_PHI * (hi - lo);
    let mut fa = sign * f(a);
    let mut fb = sign * f(b);
    for _ in 0..120 {
        if (hi - lo).abs() < 1e-14 * (1.0 + lo.abs() + hi.abs()) {
            break;
        }
        if fa > fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - INV_PHI * (hi - lo);
            fa = sign * f(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + INV_PHI * (hi - lo);
            fb = sign * f(b);
        }
    }
    0.5 * (lo + hi)
}
