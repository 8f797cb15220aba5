//! Ordering of Young functions, the Δ₂ ratio test, and invariant checks on
//! sampled grids.

use serde::Serialize;

use super::YoungFunction;
use crate::ext::ExtNonneg;
use crate::solve::{golden_min, log_grid};

/// Default evaluation grid: 2048 logarithmic points over `[1e-6, 1e6]`.
pub fn default_grid() -> Vec<f64> {
    log_grid(1e-6, 1e6, 2048)
}

/// `(c, x₀)` such that `Φ₁(x) ≤ Φ₂(c·x)` for every grid `x ≥ x₀`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub c: f64,
    pub x0: f64,
}

/// Outcome of a pointwise comparison on `[0, x_max]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    /// `Φ₁ ≤ Φ₂` everywhere on the grid.
    Le,
    /// `Φ₂ ≤ Φ₁` everywhere on the grid.
    Ge,
    Equal,
    /// Neither dominates. `phi1_above_at` is where `Φ₁ − Φ₂` is largest,
    /// `phi2_above_at` where `Φ₂ − Φ₁` is.
    Incomparable { phi1_above_at: f64, phi2_above_at: f64 },
}

impl Comparison {
    pub fn is_comparable(&self) -> bool {
        !matches!(self, Comparison::Incomparable { .. })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RelateMode {
    Stronger,
    GloballyComparable,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Stronger(Option<Witness>),
    Comparable(Comparison),
}

pub fn relate(phi1: &YoungFunction, phi2: &YoungFunction, mode: RelateMode) -> Relation {
    match mode {
        RelateMode::Stronger => Relation::Stronger(stronger_witness(phi1, phi2, &default_grid())),
        RelateMode::GloballyComparable => Relation::Comparable(compare_globally(phi1, phi2, 1e6)),
    }
}

fn candidate_constants() -> Vec<f64> {
    let mut cs = vec![1.0];
    for k in 1..=20 {
        cs.push(2f64.powi(k));
        cs.push(2f64.powi(-k));
    }
    cs
}

/// Searches constants `c = 2^k` (smallest `|k|` first) and thresholds
/// `x₀ ∈ {0} ∪ {2^j}` for a witness of `Φ₁ ≺ Φ₂`. The threshold must leave at
/// least one octave of grid above it.
pub fn stronger_witness(phi1: &YoungFunction, phi2: &YoungFunction, grid: &[f64]) -> Option<Witness> {
    let x_max = *grid.last()?;
    let holds = |x: f64, c: f64| phi1.eval(x).le_within(phi2.eval(c * x), 1e-12, 0.0);
    let thresholds: Vec<f64> = std::iter::once(0.0).chain((-20..=20).map(|j| 2f64.powi(j))).collect();
    for c in candidate_constants() {
        let last_failure = grid.iter().rev().find(|&&x| !holds(x, c)).copied();
        let x0 = match last_failure {
            None => Some(0.0),
            Some(bad) => thresholds.iter().copied().find(|&t| t > bad && holds(t, c)),
        };
        if let Some(x0) = x0 {
            if x0 <= 0.5 * x_max {
                return Some(Witness { c, x0 });
            }
        }
    }
    None
}

fn signed_gap(a: ExtNonneg, b: ExtNonneg) -> f64 {
    match (a, b) {
        (ExtNonneg::Infinite, ExtNonneg::Infinite) => 0.0,
        (ExtNonneg::Infinite, _) => f64::INFINITY,
        (_, ExtNonneg::Infinite) => f64::NEG_INFINITY,
        (ExtNonneg::Finite(x), ExtNonneg::Finite(y)) => x - y,
    }
}

/// Pointwise comparison on a dense grid over `[0, x_max]` (a uniform grid
/// merged with a logarithmic one). Counterexample abscissae are polished by a
/// golden-section search between neighbouring grid points.
pub fn compare_globally(phi1: &YoungFunction, phi2: &YoungFunction, x_max: f64) -> Comparison {
    let mut grid: Vec<f64> = (0..=4096).map(|i| x_max * i as f64 / 4096.0).collect();
    grid.extend(log_grid(1e-6_f64.min(x_max), x_max, 2048));
    grid.sort_by(f64::total_cmp);
    grid.dedup();

    let gap = |x: f64| signed_gap(phi1.eval(x), phi2.eval(x));
    let tolerated = |x: f64, g: f64| {
        // relative slack for rounding in the larger of the two values
        let scale = phi1.eval(x).min(phi2.eval(x)).to_f64().abs();
        g.abs() <= 1e-12 * scale + 1e-300
    };

    let mut above1: Option<(usize, f64)> = None;
    let mut above2: Option<(usize, f64)> = None;
    for (i, &x) in grid.iter().enumerate() {
        let g = gap(x);
        if tolerated(x, g) {
            continue;
        }
        if g > 0.0 && above1.map_or(true, |(_, best)| g > best) {
            above1 = Some((i, g));
        }
        if g < 0.0 && above2.map_or(true, |(_, best)| -g > best) {
            above2 = Some((i, -g));
        }
    }
    let polish = |i: usize, sign: f64| -> f64 {
        let x = grid[i];
        let a = grid[i.saturating_sub(1)];
        let b = grid[(i + 1).min(grid.len() - 1)];
        let score = |t: f64| {
            let g = sign * gap(t);
            if g.is_nan() {
                f64::INFINITY
            } else {
                -g
            }
        };
        if !score(x).is_finite() {
            return x;
        }
        let (t, v) = golden_min(a, b, score, 1e-14 * b.max(1.0), 200);
        if v <= score(x) {
            t
        } else {
            x
        }
    };
    match (above1, above2) {
        (None, None) => Comparison::Equal,
        (None, Some(_)) => Comparison::Le,
        (Some(_), None) => Comparison::Ge,
        (Some((i, _)), Some((j, _))) => Comparison::Incomparable {
            phi1_above_at: polish(i, 1.0),
            phi2_above_at: polish(j, -1.0),
        },
    }
}

/// Result of the Δ₂ ratio test `sup Φ(2x)/Φ(x)` on a window.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Delta2Report {
    pub sup_ratio: ExtNonneg,
    pub argsup: f64,
    pub window: (f64, f64),
    pub threshold: f64,
    /// `sup_ratio ≤ threshold` on the window.
    pub bounded: bool,
}

pub const DEFAULT_DELTA2_THRESHOLD: f64 = 1e3;

pub fn delta2_estimate(phi: &YoungFunction, x0: f64, x_max: f64) -> Delta2Report {
    delta2_estimate_with(phi, x0, x_max, DEFAULT_DELTA2_THRESHOLD)
}

/// `sup Φ(2x)/Φ(x)` over 2048 logarithmic points of `[max(x₀, 1e-6), x_max]`.
/// Uses `∞/∞ = 1` and `0/0 = 0`, so regions where both values are infinite
/// (or both zero) never break the bound.
pub fn delta2_estimate_with(phi: &YoungFunction, x0: f64, x_max: f64, threshold: f64) -> Delta2Report {
    assert!(x0 >= 0.0 && x0 < x_max, "need 0 <= x0 < x_max");
    let lo = x0.max(1e-6);
    let mut sup = ExtNonneg::ZERO;
    let mut argsup = lo;
    for x in log_grid(lo, x_max, 2048) {
        let r = phi.eval(2.0 * x).ratio(phi.eval(x));
        if r > sup {
            sup = r;
            argsup = x;
        }
    }
    Delta2Report {
        sup_ratio: sup,
        argsup,
        window: (lo, x_max),
        threshold,
        bounded: sup <= threshold,
    }
}

/// Which Young-function invariants hold on a sample grid.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct InvariantReport {
    pub zero_at_origin: bool,
    pub nondecreasing: bool,
    pub midpoint_convex: bool,
    pub unbounded: bool,
    pub failures: Vec<String>,
}

impl InvariantReport {
    pub fn is_valid(&self) -> bool {
        self.zero_at_origin && self.nondecreasing && self.midpoint_convex && self.unbounded
    }
}

/// Checks `Φ(0) = 0`, monotonicity, midpoint convexity (pairs of grid points
/// 1, 4 and 16 steps apart, where both values are finite) and growth past
/// `growth_threshold` at the last grid point.
pub fn check_invariants(phi: &YoungFunction, grid: &[f64], growth_threshold: f64) -> InvariantReport {
    let mut report = InvariantReport {
        zero_at_origin: phi.eval(0.0) == 0.0,
        nondecreasing: true,
        midpoint_convex: true,
        unbounded: true,
        failures: Vec::new(),
    };
    if !report.zero_at_origin {
        report.failures.push(format!("Φ(0) = {}", phi.eval(0.0)));
    }
    let values: Vec<ExtNonneg> = grid.iter().map(|&x| phi.eval(x)).collect();
    for i in 1..grid.len() {
        if !(values[i - 1].le_within(values[i], 1e-12, 1e-300)) {
            report.nondecreasing = false;
            report.failures.push(format!("decrease between x = {} and {}", grid[i - 1], grid[i]));
            break;
        }
    }
    'outer: for step in [1, 4, 16] {
        for i in 0..grid.len().saturating_sub(step) {
            let (a, b) = (values[i], values[i + step]);
            if let (Some(fa), Some(fb)) = (a.finite(), b.finite()) {
                let mid = phi.eval(0.5 * (grid[i] + grid[i + step]));
                let avg = 0.5 * (fa + fb);
                if !mid.le_within(ExtNonneg::from_f64(avg), 1e-9, 1e-12) {
                    report.midpoint_convex = false;
                    report
                        .failures
                        .push(format!("midpoint convexity fails on [{}, {}]", grid[i], grid[i + step]));
                    break 'outer;
                }
            }
        }
    }
    if let Some(last) = values.last() {
        if *last <= growth_threshold {
            report.unbounded = false;
            report.failures.push(format!("Φ({}) = {last} does not exceed {growth_threshold}", grid[grid.len() - 1]));
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::young::YoungFunction;

    #[test]
    fn linear_vs_square_witness() {
        let w = stronger_witness(&YoungFunction::power(1.0), &YoungFunction::power(2.0), &default_grid()).unwrap();
        assert_eq!(w, Witness { c: 1.0, x0: 1.0 });
    }

    #[test]
    fn linear_vs_square_incomparable_at_half() {
        match compare_globally(&YoungFunction::power(1.0), &YoungFunction::power(2.0), 1e6) {
            Comparison::Incomparable { phi1_above_at, .. } => {
                assert!((phi1_above_at - 0.5).abs() < 1e-6, "{phi1_above_at}")
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn phi_b_below_phi_s() {
        let c = compare_globally(&YoungFunction::phi_b(), &YoungFunction::phi_s(), 1e6);
        assert_eq!(c, Comparison::Le);
        let c = compare_globally(&YoungFunction::phi_s(), &YoungFunction::phi_b(), 1e6);
        assert_eq!(c, Comparison::Ge);
        let sq = YoungFunction::power(2.0);
        assert_eq!(compare_globally(&sq, &sq, 1e6), Comparison::Equal);
    }

    #[test]
    fn delta2_examples() {
        let r = delta2_estimate(&YoungFunction::power(2.0), 0.0, 1e6);
        assert_eq!(r.sup_ratio, 4.0);
        assert!(r.bounded);

        let r = delta2_estimate_with(&YoungFunction::exp_minus_one(), 1.0, 50.0, 0.49 * 50f64.exp());
        assert!(!r.bounded);
        assert!(r.sup_ratio > 0.5 * 50f64.exp());

        let r = delta2_estimate(&YoungFunction::phi_b(), 2.0, 100.0);
        assert!((r.sup_ratio.finite().unwrap() - 3.0).abs() < 1e-12);
        assert!(r.bounded);
    }

    #[test]
    fn catalog_members_are_young_functions() {
        let grid = log_grid(1e-6, 1e6, 512);
        for phi in [
            YoungFunction::power(1.0),
            YoungFunction::power(4.0 / 3.0),
            YoungFunction::xlog(),
            YoungFunction::cosh_minus_one(),
            YoungFunction::phi_s(),
            YoungFunction::phi_b(),
        ] {
            let r = check_invariants(&phi, &grid, 1e3);
            assert!(r.is_valid(), "{}: {:?}", phi.name(), r.failures);
        }
    }

    #[test]
    fn concave_function_fails_convexity() {
        let root = YoungFunction::new("sqrt", |x: f64| ExtNonneg::from_f64(x.sqrt()));
        let r = check_invariants(&root, &log_grid(1e-3, 1e8, 256), 1e3);
        assert!(!r.midpoint_convex);
    }
}
