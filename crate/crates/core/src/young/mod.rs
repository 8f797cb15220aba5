//! Young functions: convex `Φ: [0,∞) → [0,∞]` with `Φ(0) = 0` and `Φ(x) → ∞`.
//!
//! A [`YoungFunction`] is an evaluable descriptor. Catalog members carry a
//! closed-form pseudo-inverse where one is known; everything else falls back
//! to bisection ([`pseudo_inverse`]) and golden-section search ([`conjugate`]).

mod catalog;
mod density;
mod pairs;
mod relate;

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ext::ExtNonneg;
use crate::record::Tri;
use crate::solve::{bisect, golden_min};

pub use catalog::{Catalog, CatalogEntry};
pub use density::young_from_density;
pub use pairs::pair_checks;
pub use relate::{
    check_invariants, compare_globally, delta2_estimate, delta2_estimate_with, relate, stronger_witness,
    Comparison, Delta2Report, InvariantReport, RelateMode, Relation, Witness,
};

pub(crate) type EvalFn = Arc<dyn Fn(f64) -> ExtNonneg + Send + Sync>;
pub(crate) type InverseFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Properties asserted for some Young functions and unknown for others.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct YoungFlags {
    pub delta2: Tri,
    pub submultiplicative: Tri,
    pub right_deriv_positive: Tri,
    pub normalized_at_one: Tri,
}

#[derive(Clone)]
pub struct YoungFunction {
    name: String,
    eval: EvalFn,
    closed_inverse: Option<InverseFn>,
    flags: YoungFlags,
}

impl fmt::Debug for YoungFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("YoungFunction")
            .field("name", &self.name)
            .field("closed_inverse", &self.closed_inverse.is_some())
            .field("flags", &self.flags)
            .finish()
    }
}

impl YoungFunction {
    pub fn new(name: impl Into<String>, eval: impl Fn(f64) -> ExtNonneg + Send + Sync + 'static) -> Self {
        YoungFunction {
            name: name.into(),
            eval: Arc::new(eval),
            closed_inverse: None,
            flags: YoungFlags::default(),
        }
    }

    pub fn with_inverse(mut self, inverse: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.closed_inverse = Some(Arc::new(inverse));
        self
    }

    pub fn with_flags(mut self, flags: YoungFlags) -> Self {
        self.flags = flags;
        self
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn flags(&self) -> YoungFlags {
        self.flags
    }

    pub fn has_closed_inverse(&self) -> bool {
        self.closed_inverse.is_some()
    }

    /// `Φ(x)` for `x ≥ 0`.
    #[inline]
    pub fn eval(&self, x: f64) -> ExtNonneg {
        (self.eval)(x)
    }

    /// `x^p`, `p ≥ 1`. Integer exponents use repeated multiplication so that
    /// ratios like `Φ(2x)/Φ(x)` come out exact.
    pub fn power(p: f64) -> Self {
        assert!(p >= 1.0, "power Young function needs p >= 1, got {p}");
        let name = match p {
            p if p == 1.0 => "p1".to_string(),
            p if p == 4.0 / 3.0 => "p4over3".to_string(),
            p if p == 1.5 => "p3over2".to_string(),
            p if p.fract() == 0.0 => format!("p{p}"),
            p => format!("power:{p}"),
        };
        let flags = YoungFlags {
            delta2: Tri::Yes,
            submultiplicative: Tri::Yes,
            right_deriv_positive: Tri::from_bool(p == 1.0),
            normalized_at_one: Tri::Yes,
        };
        let eval: EvalFn = if p.fract() == 0.0 && p <= 16.0 {
            let k = p as i32;
            Arc::new(move |x: f64| ExtNonneg::from_f64(x.powi(k)))
        } else {
            Arc::new(move |x: f64| ExtNonneg::from_f64(x.powf(p)))
        };
        let inv_p = 1.0 / p;
        YoungFunction {
            name,
            eval,
            closed_inverse: Some(Arc::new(move |y: f64| if p == 1.0 { y } else { y.powf(inv_p) })),
            flags,
        }
    }

    /// `x·ln(1+x)`.
    pub fn xlog() -> Self {
        YoungFunction::new("xlog", |x: f64| ExtNonneg::from_f64(x * x.ln_1p())).with_flags(YoungFlags {
            delta2: Tri::Yes,
            submultiplicative: Tri::Unknown,
            right_deriv_positive: Tri::No,
            normalized_at_one: Tri::No,
        })
    }

    /// `cosh(x) − 1`.
    pub fn cosh_minus_one() -> Self {
        YoungFunction::new("cosh", |x: f64| {
            // 2·sinh²(x/2) avoids cancellation near zero
            let s = (0.5 * x).sinh();
            ExtNonneg::from_f64(2.0 * s * s)
        })
        .with_inverse(|y: f64| 2.0 * (0.5 * y).sqrt().asinh())
        .with_flags(YoungFlags {
            delta2: Tri::No,
            submultiplicative: Tri::Unknown,
            right_deriv_positive: Tri::No,
            normalized_at_one: Tri::No,
        })
    }

    /// `eˣ − 1`.
    pub fn exp_minus_one() -> Self {
        YoungFunction::new("exp", |x: f64| ExtNonneg::from_f64(x.exp_m1()))
            .with_inverse(|y: f64| y.ln_1p())
            .with_flags(YoungFlags {
                delta2: Tri::No,
                submultiplicative: Tri::Unknown,
                right_deriv_positive: Tri::Yes,
                normalized_at_one: Tri::No,
            })
    }

    /// `Φ_s(x) = x` on `[0,1]`, `∞` beyond; generates `L¹ ∩ L^∞`.
    pub fn phi_s() -> Self {
        YoungFunction::new("phi_s", |x: f64| if x <= 1.0 { ExtNonneg::from_f64(x) } else { ExtNonneg::Infinite })
            .with_inverse(|y: f64| y.min(1.0))
            .with_flags(YoungFlags {
                delta2: Tri::Yes,
                submultiplicative: Tri::Yes,
                right_deriv_positive: Tri::Yes,
                normalized_at_one: Tri::Yes,
            })
    }

    /// `Φ_b(x) = max(0, x − 1)`; generates `L¹ + L^∞`.
    pub fn phi_b() -> Self {
        YoungFunction::new("phi_b", |x: f64| ExtNonneg::from_f64((x - 1.0).max(0.0)))
            .with_inverse(|y: f64| y + 1.0)
            .with_flags(YoungFlags {
                delta2: Tri::Yes,
                submultiplicative: Tri::No,
                right_deriv_positive: Tri::No,
                normalized_at_one: Tri::No,
            })
    }

    /// `0` on `[0,1]`, `∞` beyond: the complementary function of `Φ(x) = x`,
    /// generating `L^∞`.
    pub fn linf() -> Self {
        YoungFunction::new("linf", |x: f64| if x <= 1.0 { ExtNonneg::ZERO } else { ExtNonneg::Infinite })
            .with_inverse(|_| 1.0)
            .with_flags(YoungFlags {
                delta2: Tri::Unknown,
                submultiplicative: Tri::Unknown,
                right_deriv_positive: Tri::No,
                normalized_at_one: Tri::No,
            })
    }

    /// `y²/4`, the Legendre conjugate of `x²`.
    pub fn quarter_square() -> Self {
        YoungFunction::new("p2_legendre", |y: f64| ExtNonneg::from_f64(0.25 * y * y))
            .with_inverse(|u: f64| 2.0 * u.sqrt())
            .with_flags(YoungFlags {
                delta2: Tri::Yes,
                submultiplicative: Tri::No,
                right_deriv_positive: Tri::No,
                normalized_at_one: Tri::No,
            })
    }

    /// The complementary function of `phi`, evaluated pointwise by [`conjugate`].
    pub fn numerical_conjugate(phi: &YoungFunction) -> Self {
        let inner = phi.clone();
        YoungFunction::new(format!("conj({})", phi.name), move |y: f64| conjugate(&inner, y))
    }
}

fn check_argument(y: f64) -> Result<()> {
    if y.is_nan() || y < 0.0 {
        return Err(Error::InvalidArgument(format!("expected a nonnegative argument, got {y}")));
    }
    Ok(())
}

/// `Φ⁻¹(y) = inf{x > 0 : Φ(x) > y}`.
///
/// Uses the closed form when the function carries one, bisection otherwise.
pub fn pseudo_inverse(phi: &YoungFunction, y: f64) -> Result<f64> {
    check_argument(y)?;
    match &phi.closed_inverse {
        Some(inv) => Ok(inv(y)),
        None => pseudo_inverse_by_bisection(phi, y),
    }
}

/// The bisection route of [`pseudo_inverse`], ignoring any closed form.
///
/// Plateaus of `Φ` resolve to their right endpoint because the defining set
/// uses the strict inequality `Φ(x) > y`.
pub fn pseudo_inverse_by_bisection(phi: &YoungFunction, y: f64) -> Result<f64> {
    check_argument(y)?;
    let above = |x: f64| phi.eval(x) > y;
    let (lo, hi) = if above(1.0) {
        let mut hi = 1.0;
        loop {
            let half = 0.5 * hi;
            if half < 1e-300 {
                return Ok(0.0);
            }
            if !above(half) {
                break (half, hi);
            }
            hi = half;
        }
    } else {
        let mut lo = 1.0;
        loop {
            let hi = 2.0 * lo;
            if hi > 1e300 {
                return Err(Error::Evaluation {
                    name: phi.name.clone(),
                    reason: format!("Φ stays ≤ {y} up to x = {lo:e}; not a Young function"),
                });
            }
            if above(hi) {
                break (lo, hi);
            }
            lo = hi;
        }
    };
    let x = bisect(lo, hi, above, 1e-16, 400).hi;
    // At y = 0 a tiny positive root is only where Φ(x) stops underflowing.
    if y == 0.0 && x < 1e-100 {
        return Ok(0.0);
    }
    Ok(x)
}

/// Abscissa beyond which the conjugate search gives up and reports `∞`.
pub const DEFAULT_CONJUGATE_CAP: f64 = 1e6;

/// `Ψ(y) = sup_{x>0} (xy − Φ(x))` with the default abscissa cap.
pub fn conjugate(phi: &YoungFunction, y: f64) -> ExtNonneg {
    conjugate_with_cap(phi, y, DEFAULT_CONJUGATE_CAP)
}

/// `Ψ(y) = sup_{x>0} (xy − Φ(x))`.
///
/// The objective is concave, so the search doubles the bracket `[0, h]`
/// starting from `h = 1` until the objective stops increasing or `Φ` becomes
/// infinite, then runs golden-section search on the bracket. If the objective
/// is still increasing once `h` passes `cap`, the supremum is taken to be `∞`.
pub fn conjugate_with_cap(phi: &YoungFunction, y: f64, cap: f64) -> ExtNonneg {
    if !(y > 0.0) {
        return ExtNonneg::ZERO;
    }
    let objective = |x: f64| match phi.eval(x) {
        ExtNonneg::Finite(v) => x * y - v,
        ExtNonneg::Infinite => f64::NEG_INFINITY,
    };
    let finite = |x: f64| phi.eval(x).is_finite();
    // last finite point of Φ inside (lo, hi], given Φ(lo) finite and Φ(hi) infinite
    let boundary = |lo: f64, hi: f64| bisect(lo, hi, |x| !finite(x), 1e-15, 400).lo;

    let mut lower = 0.0;
    let mut h = 1.0;
    let upper = loop {
        if !finite(h) {
            break boundary(lower, h);
        }
        let h2 = 2.0 * h;
        if !finite(h2) {
            break boundary(h, h2);
        }
        if objective(h2) <= objective(h) {
            break h2;
        }
        if h2 > cap {
            return ExtNonneg::Infinite;
        }
        lower = 0.5 * h;
        h = h2;
    };
    let (_, best) = golden_min(lower, upper, |x| -objective(x), 1e-13 * upper.max(1e-300), 300);
    ExtNonneg::from_f64((-best).max(0.0))
}

/// Young function whose pseudo-inverse is `(Φ₀⁻¹)^{1−θ}·(Φ₁⁻¹)^θ`.
///
/// The forward map is recovered as `Φ(x) = inf{u ≥ 0 : Φ⁻¹(u) ≥ x}` by
/// bisection on the constructed inverse.
pub fn interpolated_young(phi0: &YoungFunction, phi1: &YoungFunction, theta: f64) -> Result<YoungFunction> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::InvalidArgument(format!("theta must lie in (0, 1), got {theta}")));
    }
    let (a, b) = (phi0.clone(), phi1.clone());
    let inverse: InverseFn = Arc::new(move |u: f64| {
        let i0 = pseudo_inverse(&a, u).unwrap_or(f64::INFINITY);
        let i1 = pseudo_inverse(&b, u).unwrap_or(f64::INFINITY);
        i0.powf(1.0 - theta) * i1.powf(theta)
    });
    let inv = inverse.clone();
    let forward = move |x: f64| -> ExtNonneg {
        if !(x > 0.0) || inv(0.0) >= x {
            return ExtNonneg::ZERO;
        }
        let mut hi = 1.0;
        let mut lo = 0.0;
        while inv(hi) < x {
            lo = hi;
            hi *= 2.0;
            if hi > 1e300 {
                return ExtNonneg::Infinite;
            }
        }
        let b = bisect(lo, hi, |u| inv(u) >= x, 1e-15, 400);
        ExtNonneg::from_f64(0.5 * (b.lo + b.hi))
    };
    let name = format!("interp({},{},{theta})", phi0.name, phi1.name);
    Ok(YoungFunction {
        name,
        eval: Arc::new(forward),
        closed_inverse: Some(inverse),
        flags: YoungFlags::default(),
    })
}

/// Probe of the right derivative at zero: `Φ(h)/h` at a small `h`.
pub fn right_derivative_at_zero(phi: &YoungFunction) -> Tri {
    const H: f64 = 1e-9;
    match phi.eval(H) {
        ExtNonneg::Infinite => Tri::Yes,
        ExtNonneg::Finite(v) => Tri::from_bool(v / H > 1e-6),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(1e-300)
    }

    #[test]
    fn pseudo_inverse_examples() {
        assert_eq!(pseudo_inverse(&YoungFunction::power(2.0), 4.0).unwrap(), 2.0);
        assert_eq!(pseudo_inverse(&YoungFunction::phi_b(), 3.0).unwrap(), 4.0);
        assert_eq!(pseudo_inverse(&YoungFunction::phi_s(), 0.5).unwrap(), 0.5);
        assert_eq!(pseudo_inverse(&YoungFunction::phi_s(), 3.0).unwrap(), 1.0);
    }

    #[test]
    fn bisection_route_agrees_with_closed_forms() {
        let cases: [(YoungFunction, f64, f64); 5] = [
            (YoungFunction::power(2.0), 4.0, 2.0),
            (YoungFunction::phi_b(), 3.0, 4.0),
            (YoungFunction::phi_s(), 0.5, 0.5),
            (YoungFunction::phi_s(), 3.0, 1.0),
            (YoungFunction::phi_b(), 0.0, 1.0),
        ];
        for (phi, y, want) in cases {
            let got = pseudo_inverse_by_bisection(&phi, y).unwrap();
            assert!(close(got, want, 1e-12), "{}({y}) = {got}, want {want}", phi.name());
        }
        assert_eq!(pseudo_inverse_by_bisection(&YoungFunction::power(2.0), 0.0).unwrap(), 0.0);
    }

    #[test]
    fn pseudo_inverse_rejects_negative() {
        assert!(pseudo_inverse(&YoungFunction::power(2.0), -1.0).is_err());
        assert!(pseudo_inverse_by_bisection(&YoungFunction::xlog(), f64::NAN).is_err());
    }

    #[test]
    fn bounded_function_is_diagnosed() {
        let bounded = YoungFunction::new("bounded", |x: f64| ExtNonneg::from_f64(x.min(1.0)));
        assert!(matches!(pseudo_inverse(&bounded, 2.0), Err(Error::Evaluation { .. })));
    }

    #[test]
    fn conjugate_examples() {
        let sq = YoungFunction::power(2.0);
        assert!(close(conjugate(&sq, 2.0).finite().unwrap(), 1.0, 1e-12));
        let lin = YoungFunction::power(1.0);
        assert_eq!(conjugate(&lin, 0.5), 0.0);
        assert_eq!(conjugate(&lin, 2.0), ExtNonneg::Infinite);
        assert_eq!(conjugate(&sq, 0.0), 0.0);
        let s = conjugate(&YoungFunction::phi_s(), 2.0).finite().unwrap();
        assert!(close(s, 1.0, 1e-12), "{s}");
    }

    #[test]
    fn conjugate_of_square_matches_dense_grid() {
        // brute force over a fine grid, independent of the line search
        let sq = YoungFunction::power(2.0);
        for y in [0.1, 0.7, 2.0, 5.0, 30.0] {
            let brute = (0..=400_000)
                .map(|i| i as f64 * 1e-4)
                .map(|x| x * y - x * x)
                .fold(f64::NEG_INFINITY, f64::max);
            let got = conjugate(&sq, y).finite().unwrap();
            assert!((got - brute).abs() < 1e-7, "y = {y}: {got} vs {brute}");
        }
    }

    #[test]
    fn conjugate_of_phi_b_is_phi_s() {
        let b = YoungFunction::phi_b();
        for y in [0.0, 0.3, 0.99, 1.0] {
            assert!(close(conjugate(&b, y).to_f64(), y, 1e-12) || y == 0.0);
        }
        assert_eq!(conjugate(&b, 1.5), ExtNonneg::Infinite);
    }

    #[test]
    fn interpolation_examples() {
        let phi = interpolated_young(&YoungFunction::power(2.0), &YoungFunction::power(1.0), 0.5).unwrap();
        assert!(close(phi.eval(8.0).finite().unwrap(), 16.0, 1e-6));
        let same = interpolated_young(&YoungFunction::power(2.0), &YoungFunction::power(2.0), 0.5).unwrap();
        for x in [0.1, 1.0, 3.0] {
            assert!(close(same.eval(x).finite().unwrap(), x * x, 1e-10));
        }
        let bs = interpolated_young(&YoungFunction::phi_b(), &YoungFunction::phi_s(), 0.5).unwrap();
        assert!(close(pseudo_inverse(&bs, 1.0).unwrap(), 2f64.sqrt(), 1e-9));
        assert!(interpolated_young(&YoungFunction::phi_b(), &YoungFunction::phi_s(), 1.0).is_err());
    }

    #[test]
    fn right_derivative_probe() {
        assert_eq!(right_derivative_at_zero(&YoungFunction::power(1.0)), Tri::Yes);
        assert_eq!(right_derivative_at_zero(&YoungFunction::power(2.0)), Tri::No);
        assert_eq!(right_derivative_at_zero(&YoungFunction::phi_b()), Tri::No);
        assert_eq!(right_derivative_at_zero(&YoungFunction::exp_minus_one()), Tri::Yes);
    }
}
