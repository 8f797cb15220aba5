use std::sync::Arc;

use super::{YoungFlags, YoungFunction};
use crate::error::{Error, Result};
use crate::ext::ExtNonneg;
use crate::quadrature::Antiderivative;
use crate::record::Tri;
use crate::solve::{bisect, log_grid};

const KNOT_STEP: f64 = 1.0 / 16.0;
const KNOT_COUNT: usize = 512;

type Density = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Builds the complementary pair `Φ(x) = ∫₀ˣ φ`, `Ψ(y) = ∫₀ʸ φ⁻¹` from a
/// continuous, strictly increasing density with `φ(0) = 0` and `φ(t) → ∞`.
///
/// The density is screened on a logarithmic sample grid first; a decrease
/// anywhere on the grid is reported with the offending abscissae.
pub fn young_from_density(
    name: &str,
    density: impl Fn(f64) -> f64 + Send + Sync + 'static,
) -> Result<(YoungFunction, YoungFunction)> {
    let density: Density = Arc::new(density);
    screen(density.as_ref())?;

    let phi_table = Antiderivative::new(density.clone(), KNOT_STEP, KNOT_COUNT);
    let inv = {
        let d = density.clone();
        move |s: f64| inverse_density(d.as_ref(), s)
    };
    let psi_table = Antiderivative::new(Arc::new(inv), KNOT_STEP, KNOT_COUNT);

    let flags = YoungFlags {
        right_deriv_positive: Tri::No,
        ..YoungFlags::default()
    };
    let phi = YoungFunction::new(name, move |x: f64| ExtNonneg::from_f64(phi_table.eval(x))).with_flags(flags);
    let psi = YoungFunction::new(format!("{name}_conj"), move |y: f64| ExtNonneg::from_f64(psi_table.eval(y)))
        .with_flags(flags);
    Ok((phi, psi))
}

fn screen(density: &(dyn Fn(f64) -> f64 + Send + Sync)) -> Result<()> {
    let at_zero = density(0.0);
    if at_zero.abs() > 1e-12 {
        return Err(Error::InvalidDensity(format!("φ(0) = {at_zero}, expected 0")));
    }
    let grid = log_grid(1e-6, 1e6, 256);
    let values: Vec<f64> = grid.iter().map(|&t| density(t)).collect();
    if let Some(t) = grid.iter().zip(&values).find(|(_, v)| !v.is_finite()).map(|(t, _)| *t) {
        return Err(Error::InvalidDensity(format!("φ is not finite at t = {t}")));
    }
    let mut bad = Vec::new();
    if values[0] <= at_zero {
        bad.push(0.0);
    }
    for i in 1..grid.len() {
        if values[i] <= values[i - 1] {
            bad.push(grid[i - 1]);
        }
    }
    if !bad.is_empty() {
        return Err(Error::NonMonotoneDensity(bad));
    }
    let at_one = density(1.0);
    let last = *values.last().unwrap();
    if last < 10.0 * at_one {
        return Err(Error::InvalidDensity(format!(
            "φ does not appear to diverge: φ(1) = {at_one}, φ(1e6) = {last}"
        )));
    }
    Ok(())
}

fn inverse_density(density: &(dyn Fn(f64) -> f64 + Send + Sync), s: f64) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    let mut hi = 1.0;
    let mut lo = 0.0;
    while density(hi) < s {
        lo = hi;
        hi *= 2.0;
    }
    bisect(lo, hi, |t| density(t) >= s, 1e-16, 400).hi
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_density_gives_half_squares() {
        let (phi, psi) = young_from_density("half_sq", |t| t).unwrap();
        assert!((phi.eval(2.0).finite().unwrap() - 2.0).abs() < 1e-8);
        assert!((psi.eval(3.0).finite().unwrap() - 4.5).abs() < 1e-8);
    }

    #[test]
    fn linear_density_gives_square() {
        let (phi, _) = young_from_density("sq", |t| 2.0 * t).unwrap();
        for x in [0.5, 1.0, 7.0, 50.0] {
            assert!((phi.eval(x).finite().unwrap() - x * x).abs() < 1e-8 * x * x.max(1.0));
        }
    }

    #[test]
    fn log_density_recovers_xlog() {
        let (phi, _) = young_from_density("xlog_q", |t: f64| t.ln_1p() + t / (1.0 + t)).unwrap();
        for x in [0.1f64, 1.0, 2.5, 10.0, 31.0, 45.0] {
            let want = x * x.ln_1p();
            assert!((phi.eval(x).finite().unwrap() - want).abs() < 1e-8, "x = {x}");
        }
    }

    #[test]
    fn rejects_non_monotone_density() {
        let err = young_from_density("wiggle", |t: f64| t + 2.0 * (t.min(10.0)).sin()).unwrap_err();
        match err {
            Error::NonMonotoneDensity(xs) => assert!(!xs.is_empty()),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn rejects_bounded_density() {
        assert!(matches!(young_from_density("atan", |t: f64| t.atan()), Err(Error::InvalidDensity(_))));
        assert!(matches!(young_from_density("shifted", |t: f64| t + 1.0), Err(Error::InvalidDensity(_))));
    }
}
