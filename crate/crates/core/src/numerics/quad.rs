//! Quadrature rules: Gauss-Legendre panels, adaptive Simpson, and a
//! cumulative integrator for sampled data.

/// Gauss-Legendre nodes and weights on [-1, 1].
///
/// Computed by Newton iteration on the Legendre polynomial from Chebyshev
/// initial guesses, so no tabulated constants are needed.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 2);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n {
            // Chebyshev guess for the i-th root of P_n.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_deriv(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        GaussLegendre { nodes, weights }
    }

    /// Integrate `f` over `[a, b]` with a single panel.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F, a: f64, b: f64) -> f64 {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let mut acc = 0.0;
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x);
        }
        acc * half
    }
}

fn legendre_with_deriv(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Adaptive Simpson integration of `f` over `[a, b]` to absolute
/// tolerance `tol`. Returns an error string when the recursion depth is
/// exhausted (non-integrable or pathological integrand).
pub fn adaptive_simpson<F: Fn(f64) -> f64 + ?Sized>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<f64, String> {
    if a == b {
        return Ok(0.0);
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    if !(fa.is_finite() && fb.is_finite() && fm.is_finite()) {
        return Err(format!("non-finite integrand on [{a}, {b}]"));
    }
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_rec(f, a, b, fa, fm, fb, whole, tol, 52)
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec<F: Fn(f64) -> f64 + ?Sized>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64, String> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    if !(flm.is_finite() && frm.is_finite()) {
        return Err(format!("non-finite integrand near [{a}, {b}]"));
    }
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol || (b - a).abs() < 1e-15 * (1.0 + a.abs() + b.abs()) {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(format!(
            "adaptive Simpson depth exhausted on [{a}, {b}] (residual {delta:e})"
        ));
    }
    let l = simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?;
    let r = simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?;
    Ok(l + r)
}

/// Cumulative integral of sampled data `(ts, vs)` by local quadratic fits
/// (Simpson-like on non-uniform grids). Returns the running integral at
/// each sample, anchored at zero.
///
/// Interior intervals average the two parabolas that contain them, which
/// cancels the asymmetric error term and keeps the composite rule
/// fourth-order on smooth data without requiring uniform spacing.
pub fn cumulative_quadratic(ts: &[f64], vs: &[f64]) -> Vec<f64> {
    assert_eq!(ts.len(), vs.len());
    let n = ts.len();
    let mut out = vec![0.0; n];
    if n < 2 {
        return out;
    }
    if n == 2 {
        out[1] = 0.5 * (vs[0] + vs[1]) * (ts[1] - ts[0]);
        return out;
    }
    let stencil = |j0: usize, j1: usize, j2: usize, a: f64, b: f64| {
        quadratic_segment(ts[j0], vs[j0], ts[j1], vs[j1], ts[j2], vs[j2], a, b)
    };
    for i in 0..n - 1 {
        let seg = if i == 0 {
            stencil(0, 1, 2, ts[0], ts[1])
        } else if i == n - 2 {
            stencil(n - 3, n - 2, n - 1, ts[i], ts[i + 1])
        } else {
            0.5 * (stencil(i - 1, i, i + 1, ts[i], ts[i + 1])
                + stencil(i, i + 1, i + 2, ts[i], ts[i + 1]))
        };
        out[i + 1] = out[i] + seg;
    }
    out
}

/// Integral over `[a, b]` of the parabola through three support points.
#[allow(clippy::too_many_arguments)]
fn quadratic_segment(x0: f64, y0: f64, x1: f64, y1: f64, x2: f64, y2: f64, a: f64, b: f64) -> f64 {
    // Newton divided differences: y(x) = c0 + c1 (x-x0) + c2 (x-x0)(x-x1)
    let c0 = y0;
    let c1 = (y1 - y0) / (x1 - x0);
    let c2 = (((y2 - y1) / (x2 - x1)) - c1) / (x2 - x0);
    // Primitive of (x-x0)(x-x1) = x^3/3 - (x0+x1) x^2/2 + x0 x1 x.
    let prim2 = |x: f64| x * x * x / 3.0 - 0.5 * (x0 + x1) * x * x + x0 * x1 * x;
    let lin = |x: f64| {
        let d0 = x - x0;
        c0 * x + 0.5 * c1 * d0 * d0
    };
    (lin(b) - lin(a)) + c2 * (prim2(b) - prim2(a))
}
