//! Shape-preserving cubic interpolation (Fritsch-Carlson) and Hermite
//! segment evaluation.

/// Monotone (shape-preserving) piecewise-cubic interpolant.
///
/// Slopes follow the Fritsch-Carlson limiter, so data that is monotone on
/// a subinterval interpolates monotonically there and local extrema are
/// not overshot. The interpolant is C^1.
#[derive(Debug, Clone)]
pub struct MonotoneCubic {
    xs: Vec<f64>,
    ys: Vec<f64>,
    ds: Vec<f64>,
}

impl MonotoneCubic {
    /// Build from strictly increasing abscissas. Panics on misuse; callers
    /// validate their grids.
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Self {
        assert_eq!(xs.len(), ys.len());
        assert!(xs.len() >= 2, "need at least two points");
        assert!(
            xs.windows(2).all(|w| w[1] > w[0]),
            "abscissas must be strictly increasing"
        );
        let n = xs.len();
        let mut deltas = vec![0.0; n - 1];
        for i in 0..n - 1 {
            deltas[i] = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
        }
        let mut ds = vec![0.0; n];
        ds[0] = deltas[0];
        ds[n - 1] = deltas[n - 2];
        for i in 1..n - 1 {
            if deltas[i - 1] * deltas[i] <= 0.0 {
                ds[i] = 0.0;
            } else {
                // Weighted harmonic mean keeps the slope inside the
                // monotonicity region.
                let w1 = 2.0 * (xs[i + 1] - xs[i]) + (xs[i] - xs[i - 1]);
                let w2 = (xs[i + 1] - xs[i]) + 2.0 * (xs[i] - xs[i - 1]);
                ds[i] = (w1 + w2) / (w1 / deltas[i - 1] + w2 / deltas[i]);
            }
        }
        // Endpoint limiter (three-point rule would overshoot otherwise).
        for (i, edge) in [(0usize, 0usize), (n - 1, n - 2)] {
            if deltas[edge] == 0.0 {
                ds[i] = 0.0;
            } else if ds[i] / deltas[edge] > 3.0 {
                ds[i] = 3.0 * deltas[edge];
            }
        }
        MonotoneCubic { xs, ys, ds }
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.xs[0], *self.xs.last().unwrap())
    }

    fn segment(&self, x: f64) -> usize {
        match self.xs.binary_search_by(|p| p.partial_cmp(&x).unwrap()) {
            Ok(i) => i.min(self.xs.len() - 2),
            Err(i) => i.clamp(1, self.xs.len() - 1) - 1,
        }
    }

    /// Evaluate at `x` (clamped extrapolation outside the domain is the
    /// caller's responsibility; evaluation uses the nearest segment).
    pub fn eval(&self, x: f64) -> f64 {
        let i = self.segment(x);
        hermite(
            x,
            self.xs[i],
            self.xs[i + 1],
            self.ys[i],
            self.ys[i + 1],
            self.ds[i],
            self.ds[i + 1],
        )
    }

    /// First derivative at `x`.
    pub fn deriv(&self, x: f64) -> f64 {
        let i = self.segment(x);
        hermite_deriv(
            x,
            self.xs[i],
            self.xs[i + 1],
            self.ys[i],
            self.ys[i + 1],
            self.ds[i],
            self.ds[i + 1],
        )
    }
}

/// Cubic Hermite value on `[x0, x1]` with endpoint values and slopes.
pub fn hermite(x: f64, x0: f64, x1: f64, y0: f64, y1: f64, d0: f64, d1: f64) -> f64 {
    let h = x1 - x0;
    let s = (x - x0) / h;
    let s2 = s * s;
    let s3 = s2 * s;
    let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    let h10 = s3 - 2.0 * s2 + s;
    let h01 = -2.0 * s3 + 3.0 * s2;
    let h11 = s3 - s2;
    h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1
}

/// Derivative of the cubic Hermite segment.
pub fn hermite_deriv(x: f64, x0: f64, x1: f64, y0: f64, y1: f64, d0: f64, d1: f64) -> f64 {
    let h = x1 - x0;
    let s = (x - x0) / h;
    let s2 = s * s;
    let dh00 = (6.0 * s2 - 6.0 * s) / h;
    let dh10 = 3.0 * s2 - 4.0 * s + 1.0;
    let dh01 = (-6.0 * s2 + 6.0 * s) / h;
    let dh11 = 3.0 * s2 - 2.0 * s;
    dh00 * y0 + dh10 * d0 + dh01 * y1 + dh11 * d1
}
