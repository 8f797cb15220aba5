//! Luxemburg and parametric Luxemburg norms, the Amemiya functional standing
//! in for the Orlicz norm, sequence-space norms, dilation operator bounds and
//! the inequality suite tying them together.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ext::ExtNonneg;
use crate::gridfn::{l1_norm, GridFunction};
use crate::record::{Status, Tri, VerificationRecord};
use crate::solve::{bisect, golden_min, log_grid};
use crate::young::{pseudo_inverse, YoungFunction};

/// Bisection controls for the norm solvers.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormOptions {
    /// Relative width of the final bracket.
    pub rel_tol: f64,
    pub max_iter: usize,
}

impl Default for NormOptions {
    fn default() -> Self {
        NormOptions { rel_tol: 1e-12, max_iter: 200 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NormResult {
    pub value: ExtNonneg,
    /// Right-hand side of the modular inequality (1, or λ for `‖·‖^{∘,λ}`).
    pub target: f64,
    /// Relative width of the final bisection bracket.
    pub bracket: f64,
    /// The modular at the returned value; never above `target`.
    pub modular_at_value: ExtNonneg,
}

impl NormResult {
    fn zero(target: f64) -> Self {
        NormResult { value: ExtNonneg::ZERO, target, bracket: 0.0, modular_at_value: ExtNonneg::ZERO }
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }
}

/// `Σ Φ(mᵢ/k)·w` over the nonzero moduli, compensated and in index order.
fn modular(moduli: &[f64], weight: f64, phi: &YoungFunction, k: f64) -> ExtNonneg {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for &m in moduli {
        if m == 0.0 {
            continue;
        }
        let v = match phi.eval(m / k) {
            ExtNonneg::Infinite => return ExtNonneg::Infinite,
            ExtNonneg::Finite(v) => v,
        };
        let t = sum + v;
        if t == f64::INFINITY {
            // overflow; compensation would turn this into NaN
            return ExtNonneg::Infinite;
        }
        comp += if sum.abs() >= v.abs() { (sum - t) + v } else { (v - t) + sum };
        sum = t;
    }
    ExtNonneg::from_f64((sum + comp) * weight)
}

/// `inf{k > 0 : modular(k) ≤ target}` by geometric bracketing from `scale`
/// followed by bisection.
fn solve_norm(m: impl Fn(f64) -> ExtNonneg, scale: f64, target: f64, opts: NormOptions) -> NormResult {
    if scale == 0.0 {
        return NormResult::zero(target);
    }
    let ok = |k: f64| m(k) <= target;
    let (lo, hi) = if ok(scale) {
        let mut hi = scale;
        loop {
            let lo = 0.5 * hi;
            if lo < scale * 1e-300 {
                return NormResult { value: ExtNonneg::ZERO, target, bracket: 0.0, modular_at_value: m(hi) };
            }
            if !ok(lo) {
                break (lo, hi);
            }
            hi = lo;
        }
    } else {
        let mut lo = scale;
        loop {
            let hi = 2.0 * lo;
            if hi > 1e300 {
                return NormResult {
                    value: ExtNonneg::Infinite,
                    target,
                    bracket: f64::INFINITY,
                    modular_at_value: ExtNonneg::Infinite,
                };
            }
            if ok(hi) {
                break (lo, hi);
            }
            lo = hi;
        }
    };
    let b = bisect(lo, hi, ok, opts.rel_tol, opts.max_iter);
    NormResult {
        value: ExtNonneg::Finite(b.hi),
        target,
        bracket: b.relative_width(),
        modular_at_value: m(b.hi),
    }
}

/// Luxemburg norm with `∫Φ(|f|/k) ≤ target`; `target = λ` gives `‖f‖^{∘,λ}`.
pub fn luxemburg(f: &GridFunction, phi: &YoungFunction, target: f64) -> NormResult {
    luxemburg_with(f, phi, target, NormOptions::default())
}

pub fn luxemburg_with(f: &GridFunction, phi: &YoungFunction, target: f64, opts: NormOptions) -> NormResult {
    luxemburg_of_moduli(&f.moduli(), f.cell_volume(), phi, target, opts)
}

/// Luxemburg norm of a step function given by its cell moduli and common
/// cell measure.
pub fn luxemburg_of_moduli(moduli: &[f64], cell: f64, phi: &YoungFunction, target: f64, opts: NormOptions) -> NormResult {
    assert!(target > 0.0, "modular target must be positive");
    let scale = moduli.iter().fold(0.0f64, |a, b| a.max(*b));
    solve_norm(|k| modular(moduli, cell, phi, k), scale, target, opts)
}

/// Orlicz sequence-space norm: `inf{k : Σ Φ(|aⱼ|/k) ≤ 1}`.
pub fn seq_luxemburg(a: &[f64], phi: &YoungFunction) -> NormResult {
    let moduli: Vec<f64> = a.iter().map(|x| x.abs()).collect();
    luxemburg_of_moduli(&moduli, 1.0, phi, 1.0, NormOptions::default())
}

/// `inf_{k>0} (1 + ∫Φ(k|f|))/k`, the evaluator used for the Orlicz norm.
pub fn amemiya(f: &GridFunction, phi: &YoungFunction) -> ExtNonneg {
    let moduli = f.moduli();
    let cell = f.cell_volume();
    amemiya_of_moduli(&moduli, cell, phi)
}

pub fn amemiya_of_moduli(moduli: &[f64], cell: f64, phi: &YoungFunction) -> ExtNonneg {
    let lux = luxemburg_of_moduli(moduli, cell, phi, 1.0, NormOptions::default()).value;
    let lux = match lux {
        ExtNonneg::Finite(v) if v == 0.0 => return ExtNonneg::ZERO,
        ExtNonneg::Finite(v) => v,
        ExtNonneg::Infinite => return ExtNonneg::Infinite,
    };
    // (1 + M(k))/k is unimodal in log k; k = 1/‖f‖° already gives at most 2‖f‖°.
    let objective = |u: f64| {
        let k = u.exp();
        match modular(moduli, cell, phi, 1.0 / k) {
            ExtNonneg::Infinite => f64::INFINITY,
            ExtNonneg::Finite(m) => (1.0 + m) / k,
        }
    };
    let u0 = -lux.ln();
    let step = std::f64::consts::LN_2;
    let coarse: Vec<(f64, f64)> = (-60..=60).map(|j| u0 + j as f64 * step).map(|u| (u, objective(u))).collect();
    let (j, _) = coarse
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |best, (j, (_, v))| if *v < best.1 { (j, *v) } else { best });
    let a = coarse[j.saturating_sub(1)].0;
    let b = coarse[(j + 1).min(coarse.len() - 1)].0;
    let (_, v) = golden_min(a, b, objective, 1e-12, 200);
    ExtNonneg::from_f64(v.min(coarse[j].1))
}

/// Bounds on `C_Φ(λ) = ‖D_λ‖_{L^Φ→L^Φ}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DilationBounds {
    /// `sup_μ Φ⁻¹(μ)/Φ⁻¹(λμ)` over a logarithmic μ-grid.
    pub lower: f64,
    /// `1/Φ⁻¹(λ)`, present when Φ is submultiplicative.
    pub upper: Option<f64>,
    /// Both flags needed for `C_Φ(λ) = 1/Φ⁻¹(λ)` hold.
    pub exact: bool,
}

pub fn dilation_norm_bounds(phi: &YoungFunction, lambda: f64, require_upper: bool) -> Result<DilationBounds> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidArgument(format!("dilation factor must be positive, got {lambda}")));
    }
    let flags = phi.flags();
    if require_upper && flags.submultiplicative == Tri::Unknown {
        return Err(Error::FlagUnknown {
            name: phi.name().to_string(),
            flag: "submultiplicative",
            what: "an upper dilation bound",
        });
    }
    let mut lower = 0.0f64;
    for mu in log_grid(1e-6, 1e6, 241) {
        if let (Ok(a), Ok(b)) = (pseudo_inverse(phi, mu), pseudo_inverse(phi, lambda * mu)) {
            if b > 0.0 {
                lower = lower.max(a / b);
            }
        }
    }
    let upper = if flags.submultiplicative.is_yes() {
        Some(1.0 / pseudo_inverse(phi, lambda)?)
    } else {
        None
    };
    Ok(DilationBounds {
        lower,
        upper,
        exact: flags.submultiplicative.is_yes() && flags.normalized_at_one.is_yes(),
    })
}

/// Tolerance for inequalities that hold exactly for step functions; only the
/// norm solvers' brackets separate the two sides.
const SUITE_REL_TOL: f64 = 1e-9;
const IDENTITY_REL_TOL: f64 = 1e-6;

/// Hölder, the parametric-norm sandwiches, the chains through the Orlicz
/// evaluator, the dilation identity and bound, and the `L¹` embedding ratio,
/// for one function pair and every `λ` of the grid.
pub fn inequality_suite(
    f: &GridFunction,
    g: &GridFunction,
    phi: &YoungFunction,
    psi: &YoungFunction,
    lambda_grid: &[f64],
) -> Result<Vec<VerificationRecord>> {
    let pair = format!("{}|{}", phi.name(), psi.name());
    let tag = |r: VerificationRecord| r.input("pair", &pair);
    let mut out = Vec::new();

    let fg = f.mul(g)?;
    let nf = luxemburg(f, phi, 1.0).value;
    let ng = luxemburg(g, psi, 1.0).value;
    out.push(tag(VerificationRecord::check(
        "holder",
        "orlicz",
        ExtNonneg::from_f64(l1_norm(&fg)),
        (nf * ng).scale(2.0),
        SUITE_REL_TOL,
        0.0,
    )));

    let orlicz = amemiya(f, phi);
    let d = f.dim() as i32;
    let flags = phi.flags();
    for &lambda in lambda_grid {
        let nl = luxemburg(f, phi, lambda).value;
        let chk = |id: &str, lhs: ExtNonneg, bound: ExtNonneg| {
            tag(VerificationRecord::check(id, "orlicz", lhs, bound, SUITE_REL_TOL, 0.0).lambda(lambda))
        };
        if lambda <= 1.0 {
            out.push(chk("param_sandwich_lower", nl.scale(lambda), nf));
            out.push(chk("param_sandwich_upper", nf, nl));
            out.push(chk("orlicz_param_lower", nl.scale(lambda), orlicz));
            out.push(chk("orlicz_param_upper", orlicz, nl.scale(2.0)));
        } else {
            out.push(chk("param_sandwich_lower", nl, nf));
            out.push(chk("param_sandwich_upper", nf, nl.scale(lambda)));
            out.push(chk("orlicz_param_lower", nl, orlicz));
            out.push(chk("orlicz_param_upper", orlicz, nl.scale(2.0 * lambda)));
        }

        let dilated = luxemburg(&f.dilate(lambda)?, phi, 1.0).value;
        let same = match (dilated, nl) {
            (ExtNonneg::Finite(a), ExtNonneg::Finite(b)) => (a - b).abs() <= IDENTITY_REL_TOL * b.max(a),
            (a, b) => a == b,
        };
        out.push(tag(VerificationRecord::with_status(
            "dilation_identity",
            "orlicz",
            dilated,
            nl,
            if same { Status::Verified } else { Status::Violated },
        )
        .lambda(lambda)));

        let inv = pseudo_inverse(phi, lambda.powi(d))?;
        let bound = nf.scale(1.0 / inv);
        let rec = if flags.submultiplicative.is_yes() {
            VerificationRecord::check("dilation_bound", "orlicz", dilated, bound, SUITE_REL_TOL, 0.0)
        } else {
            VerificationRecord::with_status("dilation_bound", "orlicz", dilated, bound, Status::NotApplicable)
        };
        out.push(tag(rec.lambda(lambda).hypothesis("submultiplicative", flags.submultiplicative)));
    }

    let rd = flags.right_deriv_positive;
    let status = if rd.is_yes() { Status::ReportOnly } else { Status::NotApplicable };
    out.push(tag(VerificationRecord::with_status(
        "l1_embedding",
        "orlicz",
        ExtNonneg::from_f64(l1_norm(f)),
        orlicz,
        status,
    )
    .hypothesis("right_deriv_positive", rd)));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gridfn::{BoxNd, Descriptor};

    fn boxfn(b: f64) -> GridFunction {
        GridFunction::sample(&Descriptor::Indicator { a: 0.0, b }, &BoxNd::interval(0.0, b), (256.0 * b) as usize).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1e-300)
    }

    #[test]
    fn indicator_norms() {
        let p2 = YoungFunction::power(2.0);
        assert!(close(luxemburg(&boxfn(1.0), &p2, 1.0).to_f64(), 1.0, 1e-11));
        assert!(close(luxemburg(&boxfn(2.0), &p2, 1.0).to_f64(), 2f64.sqrt(), 1e-11));
        assert!(close(luxemburg(&boxfn(1.0), &p2, 4.0).to_f64(), 0.5, 1e-11));
        let zero = GridFunction::sample(&Descriptor::Zero, &BoxNd::interval(0.0, 1.0), 8).unwrap();
        assert_eq!(luxemburg(&zero, &p2, 1.0).value, ExtNonneg::ZERO);
    }

    #[test]
    fn result_invariants() {
        let r = luxemburg(&boxfn(2.0), &YoungFunction::xlog(), 1.0);
        assert!(r.bracket <= 1e-12);
        assert!(r.modular_at_value <= 1.0);
    }

    #[test]
    fn extremal_norms() {
        // ‖χ_[0,2)‖ for Φ_s is max(‖·‖₁, ‖·‖_∞) = 2, for Φ_b it is 1/Φ_b⁻¹(1/2) = 2/3
        assert!(close(luxemburg(&boxfn(2.0), &YoungFunction::phi_s(), 1.0).to_f64(), 2.0, 1e-11));
        assert!(close(luxemburg(&boxfn(2.0), &YoungFunction::phi_b(), 1.0).to_f64(), 2.0 / 3.0, 1e-11));
        assert!(close(luxemburg(&boxfn(2.0), &YoungFunction::linf(), 1.0).to_f64(), 1.0, 1e-11));
    }

    #[test]
    fn sequence_norms() {
        assert!(close(seq_luxemburg(&[1.0, 0.0, 0.0], &YoungFunction::power(1.5)).to_f64(), 1.0, 1e-11));
        assert!(close(seq_luxemburg(&[1.0, 1.0], &YoungFunction::power(2.0)).to_f64(), 2f64.sqrt(), 1e-11));
        assert_eq!(seq_luxemburg(&[0.0, 0.0], &YoungFunction::power(2.0)).value, ExtNonneg::ZERO);
    }

    #[test]
    fn amemiya_of_box() {
        let v = amemiya(&boxfn(1.0), &YoungFunction::power(2.0)).to_f64();
        assert!(close(v, 2.0, 1e-10), "{v}");
        // brute-force scan of (1 + k²)/k
        let brute = (1..100_000).map(|i| i as f64 * 1e-4).map(|k| (1.0 + k * k) / k).fold(f64::INFINITY, f64::min);
        assert!((v - brute).abs() < 1e-7);
    }

    #[test]
    fn amemiya_limit_at_infinity() {
        // Φ_b on χ_[0,1/2): (1 + (k−1)/2)/k decreases to 1/2
        let v = amemiya(&boxfn(0.5), &YoungFunction::phi_b()).to_f64();
        assert!(close(v, 0.5, 1e-9), "{v}");
    }

    #[test]
    fn power_dilation_bounds() {
        let b = dilation_norm_bounds(&YoungFunction::power(2.0), 4.0, true).unwrap();
        assert!(close(b.lower, 0.5, 1e-12) && close(b.upper.unwrap(), 0.5, 1e-12) && b.exact);
        for phi in [YoungFunction::power(3.0), YoungFunction::xlog(), YoungFunction::phi_b()] {
            let b = dilation_norm_bounds(&phi, 1.0, false).unwrap();
            assert!(close(b.lower, 1.0, 1e-12));
        }
        let p2 = YoungFunction::power(2.0);
        let u = |l| dilation_norm_bounds(&p2, l, true).unwrap().upper.unwrap();
        assert!(u(6.0) <= u(2.0) * u(3.0) * (1.0 + 1e-12));
    }

    #[test]
    fn unknown_submultiplicativity_refuses_upper_bound() {
        let err = dilation_norm_bounds(&YoungFunction::xlog(), 2.0, true);
        assert!(matches!(err, Err(Error::FlagUnknown { .. })));
    }

    #[test]
    fn suite_on_boxes() {
        let f = boxfn(1.0);
        let rs = inequality_suite(&f, &f, &YoungFunction::power(2.0), &YoungFunction::quarter_square(), &[0.25, 1.0, 4.0])
            .unwrap();
        assert!(rs.iter().all(|r| r.status != Status::Violated), "{rs:#?}");
        let holder = &rs[0];
        assert!(close(holder.lhs.to_f64(), 1.0, 1e-12));
        let id4 = rs.iter().find(|r| r.id == "dilation_identity" && r.lambda == Some(4.0)).unwrap();
        assert!(close(id4.lhs.to_f64(), 0.5, 1e-11) && close(id4.bound.to_f64(), 0.5, 1e-11));
        for r in rs.iter().filter(|r| r.lambda == Some(1.0) && r.id.starts_with("param_sandwich")) {
            assert!(close(r.lhs.to_f64(), r.bound.to_f64(), 1e-15));
        }
    }
}
