use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::gridfn::Descriptor;
use crate::young::Catalog;

/// Tolerance names the suite reads from the config.
pub const TOLERANCE_KEYS: [&str; 3] = ["zak_identity", "zak_zero", "zak_onb"];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Grids {
    /// λ values for the Orlicz inequality suite.
    pub lambda: Vec<f64>,
    /// λ values for the exact-constant lemma.
    pub lemma_lambda: Vec<f64>,
    /// Points per octave of the dyadic grid used by scans and the main harness.
    pub per_octave: usize,
    /// Log-grid sizes for Young's inequality (per axis) and the inverse sandwich.
    pub xy_points: usize,
    pub u_points: usize,
    pub x_resolution: usize,
    pub zak_n: usize,
    pub zak_k: usize,
}

impl Default for Grids {
    fn default() -> Self {
        Grids {
            lambda: vec![0.25, 0.5, 2.0, 4.0],
            lemma_lambda: (-3..=3).map(|k| 2f64.powi(k)).collect(),
            per_octave: 2,
            xy_points: 24,
            u_points: 256,
            x_resolution: 64,
            zak_n: 128,
            zak_k: 32,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanSpec {
    /// Exponents; `null` in JSON stands for `∞`.
    pub p: Option<f64>,
    pub q: Option<f64>,
    #[serde(rename = "fn")]
    pub function: String,
}

impl ScanSpec {
    pub fn exponents(&self) -> (f64, f64) {
        (self.p.unwrap_or(f64::INFINITY), self.q.unwrap_or(f64::INFINITY))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Output {
    pub dir: String,
    pub formats: Vec<String>,
}

impl Default for Output {
    fn default() -> Self {
        Output { dir: "out".into(), formats: vec!["json".into(), "csv".into()] }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Young functions run through the Orlicz suite with their catalog partner.
    pub young_functions: Vec<String>,
    pub amalgam_pairs: Vec<(String, String)>,
    pub lemma_pairs: Vec<(String, String)>,
    pub main_pairs: Vec<(String, String)>,
    pub zak_young: Vec<String>,
    pub scans: Vec<ScanSpec>,
    pub corpus_seed: u64,
    pub grids: Grids,
    pub tolerances: BTreeMap<String, f64>,
    pub output: Output,
}

fn pair(a: &str, b: &str) -> (String, String) {
    (a.to_string(), b.to_string())
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            young_functions: ["p4over3", "p2", "p3", "phi_s", "phi_b"].map(String::from).to_vec(),
            amalgam_pairs: vec![pair("p2", "p2"), pair("p2", "p1"), pair("p3", "p4over3"), pair("phi_b", "p2")],
            lemma_pairs: vec![pair("p2", "p2"), pair("p2", "p3"), pair("p4over3", "p2")],
            main_pairs: vec![pair("p2", "p2"), pair("p3", "p2")],
            zak_young: ["p4over3", "p2", "p3"].map(String::from).to_vec(),
            scans: vec![
                ScanSpec { p: Some(2.0), q: Some(2.0), function: "gaussian".into() },
                ScanSpec { p: Some(2.0), q: Some(1.0), function: "box01".into() },
            ],
            corpus_seed: 7,
            grids: Grids::default(),
            tolerances: BTreeMap::from([
                ("zak_identity".to_string(), 1e-8),
                ("zak_zero".to_string(), 0.05),
                ("zak_onb".to_string(), 1e-6),
            ]),
            output: Output::default(),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
        let cfg: RunConfig =
            serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Ok(cfg)
    }

    pub fn tolerance(&self, key: &str) -> f64 {
        self.tolerances
            .get(key)
            .copied()
            .unwrap_or_else(|| RunConfig::default().tolerances[key])
    }

    /// Every name resolves, grids are nonempty and tolerances positive.
    pub fn validate(&self, catalog: &Catalog) -> Result<()> {
        let names = self
            .young_functions
            .iter()
            .chain(&self.zak_young)
            .chain(self.amalgam_pairs.iter().chain(&self.lemma_pairs).chain(&self.main_pairs).flat_map(|(a, b)| [a, b]));
        for name in names {
            catalog.resolve(name).map_err(|e| Error::Config(e.to_string()))?;
        }
        for s in &self.scans {
            Descriptor::parse(&s.function).map_err(|e| Error::Config(e.to_string()))?;
            let (p, q) = s.exponents();
            if !(p >= 1.0 && q >= 1.0) {
                return Err(Error::Config(format!("scan exponents must lie in [1, ∞], got ({p}, {q})")));
            }
        }
        let g = &self.grids;
        if g.lambda.is_empty() || g.lemma_lambda.is_empty() {
            return Err(Error::Config("λ-grids must be nonempty".into()));
        }
        if g.lambda.iter().chain(&g.lemma_lambda).any(|l| !(*l > 0.0 && l.is_finite())) {
            return Err(Error::Config("λ values must be positive and finite".into()));
        }
        if g.per_octave == 0 || g.xy_points < 2 || g.u_points < 2 || g.x_resolution == 0 {
            return Err(Error::Config("grid sizes must be positive (at least 2 for log grids)".into()));
        }
        if g.zak_n < 8 || g.zak_k < 1 {
            return Err(Error::Config("zak grid needs n ≥ 8 and K ≥ 1".into()));
        }
        for (k, v) in &self.tolerances {
            if !TOLERANCE_KEYS.contains(&k.as_str()) {
                return Err(Error::Config(format!("unknown tolerance `{k}`")));
            }
            if !(*v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("tolerance `{k}` must be positive, got {v}")));
            }
        }
        for f in &self.output.formats {
            if !["json", "csv"].contains(&f.as_str()) {
                return Err(Error::Config(format!("unknown output format `{f}`")));
            }
        }
        Ok(())
    }

    /// SHA-256 of the canonical JSON serialization, without the output
    /// location so that the same run written elsewhere hashes the same.
    pub fn hash(&self) -> String {
        let mut canon = self.clone();
        canon.output = Output::default();
        let bytes = serde_json::to_vec(&canon).expect("config serializes");
        Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
    }
}
