//! Adaptive composite midpoint quadrature for smooth integrands on `[a, b]`,
//! and a cached antiderivative built on it.

use std::sync::Arc;

const MAX_DEPTH: u32 = 48;

/// Integrates `f` over `[a, b]` by recursive interval halving. Each panel
/// compares the one-point and two-point midpoint rules; the Richardson
/// combination `M₂ + (M₂ − M₁)/3` is accepted once the difference is below
/// `max(abs_tol, rel_tol·|M₂|)`.
pub fn adaptive_midpoint<F>(f: &F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> f64
where
    F: Fn(f64) -> f64 + ?Sized,
{
    if b <= a {
        return 0.0;
    }
    // a fixed initial partition keeps a lucky single-panel estimate from ending the recursion
    const PANELS: usize = 8;
    let h = (b - a) / PANELS as f64;
    (0..PANELS)
        .map(|i| {
            let lo = a + i as f64 * h;
            let hi = if i + 1 == PANELS { b } else { lo + h };
            panel(f, lo, hi, abs_tol / PANELS as f64, rel_tol, 0)
        })
        .sum()
}

fn panel<F>(f: &F, a: f64, b: f64, abs_tol: f64, rel_tol: f64, depth: u32) -> f64
where
    F: Fn(f64) -> f64 + ?Sized,
{
    let w = b - a;
    let m1 = w * f(a + 0.5 * w);
    let m2 = 0.5 * w * (f(a + 0.25 * w) + f(a + 0.75 * w));
    let diff = (m2 - m1).abs();
    if depth >= MAX_DEPTH || diff <= abs_tol.max(rel_tol * m2.abs()) {
        return m2 + (m2 - m1) / 3.0;
    }
    let mid = a + 0.5 * w;
    panel(f, a, mid, 0.5 * abs_tol, rel_tol, depth + 1) + panel(f, mid, b, 0.5 * abs_tol, rel_tol, depth + 1)
}

/// `x ↦ ∫₀ˣ f` with the integral tabulated at uniformly spaced knots, so each
/// evaluation only integrates from the nearest knot below `x`.
#[derive(Clone)]
pub struct Antiderivative {
    integrand: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    step: f64,
    knots: Vec<f64>,
}

const KNOT_ABS_TOL: f64 = 1e-12;
// tolerances apply to |M₂ − M₁|; the extrapolated value is several orders tighter
const REL_TOL: f64 = 1e-10;

impl Antiderivative {
    /// Tabulates `∫₀^{k·step} f` for `k = 0..=count`.
    pub fn new(integrand: Arc<dyn Fn(f64) -> f64 + Send + Sync>, step: f64, count: usize) -> Self {
        let mut knots = Vec::with_capacity(count + 1);
        let mut acc = 0.0;
        knots.push(0.0);
        for k in 0..count {
            let a = k as f64 * step;
            acc += adaptive_midpoint(integrand.as_ref(), a, a + step, KNOT_ABS_TOL, REL_TOL);
            knots.push(acc);
        }
        Antiderivative { integrand, step, knots }
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let last = self.knots.len() - 1;
        let k = ((x / self.step).floor() as usize).min(last);
        let a = k as f64 * self.step;
        self.knots[k] + adaptive_midpoint(self.integrand.as_ref(), a, x, KNOT_ABS_TOL, REL_TOL)
    }
}

impl std::fmt::Debug for Antiderivative {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Antiderivative")
            .field("step", &self.step)
            .field("knots", &self.knots.len())
            .finish()
    }
}
