use serde::Serialize;

use super::YoungFunction;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub young: YoungFunction,
    /// Catalog name of the declared complementary function.
    pub conjugate_name: Option<String>,
    pub provenance: &'static str,
}

/// Serializable summary of a catalog entry.
#[derive(Clone, Debug, Serialize)]
pub struct CatalogRow {
    pub name: String,
    pub conjugate: Option<String>,
    pub provenance: &'static str,
    pub closed_inverse: bool,
    pub flags: super::YoungFlags,
}

/// The fixed set of named Young functions.
#[derive(Clone, Debug)]
pub struct Catalog {
    entries: Vec<CatalogEntry>,
}

impl Default for Catalog {
    fn default() -> Self {
        Catalog::standard()
    }
}

impl Catalog {
    pub fn standard() -> Self {
        let e = |young: YoungFunction, conj: Option<&str>, provenance| CatalogEntry {
            young,
            conjugate_name: conj.map(str::to_string),
            provenance,
        };
        Catalog {
            entries: vec![
                e(YoungFunction::power(1.0), Some("linf"), "lebesgue L^1"),
                e(YoungFunction::power(4.0 / 3.0), Some("p4"), "lebesgue L^p"),
                e(YoungFunction::power(2.0), Some("p2_legendre"), "lebesgue L^p"),
                e(YoungFunction::power(3.0), Some("p3over2"), "lebesgue L^p"),
                e(YoungFunction::xlog(), None, "zygmund-type example"),
                e(YoungFunction::cosh_minus_one(), None, "exponential-type example"),
                e(YoungFunction::exp_minus_one(), None, "non-delta2 example"),
                e(YoungFunction::phi_s(), Some("phi_b"), "extremal: L^1 ∩ L^∞"),
                e(YoungFunction::phi_b(), Some("phi_s"), "extremal: L^1 + L^∞"),
                e(YoungFunction::linf(), Some("p1"), "conjugate of x: L^∞"),
                e(YoungFunction::power(4.0), Some("p4over3"), "conjugate exponent of 4/3"),
                e(YoungFunction::power(1.5), Some("p3"), "conjugate exponent of 3"),
                e(YoungFunction::quarter_square(), Some("p2"), "Legendre conjugate of x^2"),
            ],
        }
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn names(&self) -> Vec<&str> {
        self.entries.iter().map(|e| e.young.name()).collect()
    }

    pub fn entry(&self, name: &str) -> Option<&CatalogEntry> {
        self.entries.iter().find(|e| e.young.name() == name)
    }

    /// Looks up a catalog name, or parses an inline `power:<p>` spec.
    pub fn resolve(&self, spec: &str) -> Result<YoungFunction> {
        if let Some(entry) = self.entry(spec) {
            return Ok(entry.young.clone());
        }
        if let Some(p) = spec.strip_prefix("power:") {
            let p: f64 = p
                .parse()
                .map_err(|_| Error::UnknownYoung(spec.to_string()))?;
            if !(p >= 1.0 && p.is_finite()) {
                return Err(Error::InvalidArgument(format!("power exponent must be >= 1, got {p}")));
            }
            return Ok(YoungFunction::power(p));
        }
        Err(Error::UnknownYoung(spec.to_string()))
    }

    /// The declared complementary function of `name`.
    pub fn conjugate_of(&self, name: &str) -> Option<YoungFunction> {
        let partner = self.entry(name)?.conjugate_name.as_deref()?;
        self.entry(partner).map(|e| e.young.clone())
    }

    /// Each declared complementary pair once, in catalog order.
    pub fn pairs(&self) -> Vec<(YoungFunction, YoungFunction)> {
        let mut out = Vec::new();
        for (i, e) in self.entries.iter().enumerate() {
            if let Some(partner) = &e.conjugate_name {
                let j = self.entries.iter().position(|f| f.young.name() == partner).unwrap();
                if j >= i {
                    out.push((e.young.clone(), self.entries[j].young.clone()));
                }
            }
        }
        out
    }

    pub fn rows(&self) -> Vec<CatalogRow> {
        self.entries
            .iter()
            .map(|e| CatalogRow {
                name: e.young.name().to_string(),
                conjugate: e.conjugate_name.clone(),
                provenance: e.provenance,
                closed_inverse: e.young.has_closed_inverse(),
                flags: e.young.flags(),
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjugate_names_are_symmetric() {
        let cat = Catalog::standard();
        for e in cat.entries() {
            if let Some(partner) = &e.conjugate_name {
                let back = cat.entry(partner).expect("partner exists");
                assert_eq!(back.conjugate_name.as_deref(), Some(e.young.name()));
            }
        }
    }

    #[test]
    fn required_names_present() {
        let cat = Catalog::standard();
        for name in ["p1", "p4over3", "p2", "p3", "xlog", "cosh", "exp", "phi_s", "phi_b"] {
            assert!(cat.entry(name).is_some(), "{name}");
        }
        assert_eq!(cat.pairs().len(), 5);
    }

    #[test]
    fn resolve_inline_power() {
        let cat = Catalog::standard();
        assert_eq!(cat.resolve("power:2.5").unwrap().eval(2.0), 2f64.powf(2.5));
        assert!(matches!(cat.resolve("nope"), Err(Error::UnknownYoung(_))));
        assert!(cat.resolve("power:0.5").is_err());
    }
}
