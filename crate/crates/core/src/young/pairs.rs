use super::{pseudo_inverse, YoungFunction};
use crate::ext::ExtNonneg;
use crate::record::{Status, VerificationRecord};

const ABS_TOL: f64 = 1e-12;

/// Young's inequality `xy ≤ Φ(x) + Ψ(y)` on the product grid `xy_grid²`, and
/// the inverse-product sandwich `u ≤ Φ⁻¹(u)·Ψ⁻¹(u) < 2u` on `u_grid`.
///
/// The sandwich is recorded in normalized form, `1 ≤ Φ⁻¹(u)Ψ⁻¹(u)/u` and
/// `Φ⁻¹(u)Ψ⁻¹(u)/u ≤ 2`, so the absolute tolerance means the same thing at
/// every scale. Products that meet `2u` are flagged as boundary equalities
/// rather than counted as violations.
pub fn pair_checks(
    phi: &YoungFunction,
    psi: &YoungFunction,
    u_grid: &[f64],
    xy_grid: &[f64],
) -> Vec<VerificationRecord> {
    let pair = format!("{}|{}", phi.name(), psi.name());
    let mut records = Vec::with_capacity(xy_grid.len() * xy_grid.len() + 2 * u_grid.len());

    for &x in xy_grid {
        let fx = phi.eval(x);
        for &y in xy_grid {
            let bound = fx + psi.eval(y);
            records.push(
                VerificationRecord::check("young_inequality", "young", x * y, bound, 0.0, ABS_TOL)
                    .input("pair", &pair)
                    .input("x", x)
                    .input("y", y),
            );
        }
    }

    for &u in u_grid {
        let product = match (pseudo_inverse(phi, u), pseudo_inverse(psi, u)) {
            (Ok(a), Ok(b)) => ExtNonneg::from_f64(a * b),
            _ => ExtNonneg::Infinite,
        };
        let normalized = product.ratio(ExtNonneg::from_f64(u));
        records.push(
            VerificationRecord::check("inverse_product_lower", "young", 1.0, normalized, 0.0, ABS_TOL)
                .input("pair", &pair)
                .input("u", u),
        );
        let mut upper = VerificationRecord::check("inverse_product_upper", "young", normalized, 2.0, 0.0, ABS_TOL)
            .input("pair", &pair)
            .input("u", u);
        if upper.status == Status::Verified {
            if let Some(r) = normalized.finite() {
                upper.boundary_equality = (r - 2.0).abs() <= ABS_TOL;
            }
        }
        records.push(upper);
    }
    records
}

#[cfg(test)]
mod tests {
    use super::*;

    fn upper_at(records: &[VerificationRecord], u: f64) -> &VerificationRecord {
        records
            .iter()
            .find(|r| r.id == "inverse_product_upper" && r.inputs["u"] == u.to_string())
            .unwrap()
    }

    #[test]
    fn legendre_square_pair_touches_upper_bound() {
        let rs = pair_checks(&YoungFunction::power(2.0), &YoungFunction::quarter_square(), &[1.0], &[0.5, 1.0, 2.0]);
        assert!(rs.iter().all(|r| r.status == Status::Verified));
        let up = upper_at(&rs, 1.0);
        assert!(up.boundary_equality);
        assert_eq!(up.lhs, 2.0);
    }

    #[test]
    fn holder_conjugate_powers_are_tight_below() {
        let (p, q) = (3.0, 1.5);
        let rs = pair_checks(&YoungFunction::power(p), &YoungFunction::power(q), &[0.01, 1.0, 37.0], &[]);
        for r in rs.iter().filter(|r| r.id == "inverse_product_lower") {
            assert!((r.bound.to_f64() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn extremal_pair_at_half() {
        let rs = pair_checks(&YoungFunction::phi_s(), &YoungFunction::phi_b(), &[0.5], &[]);
        // min(0.5, 1)·(0.5 + 1) = 0.75, normalized by u = 0.5
        assert!((upper_at(&rs, 0.5).lhs.to_f64() - 1.5).abs() < 1e-15);
        assert!(rs.iter().all(|r| r.status == Status::Verified));
    }
}
