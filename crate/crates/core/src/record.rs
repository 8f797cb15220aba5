//! Verification records: one checked inequality each.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize, Serializer};

use crate::ext::ExtNonneg;

/// Three-valued property flag.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tri {
    Yes,
    No,
    #[default]
    Unknown,
}

impl Tri {
    pub fn from_bool(b: bool) -> Tri {
        if b {
            Tri::Yes
        } else {
            Tri::No
        }
    }

    pub fn is_yes(self) -> bool {
        self == Tri::Yes
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Tri::Yes => "yes",
            Tri::No => "no",
            Tri::Unknown => "unknown",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Verified,
    Violated,
    ReportOnly,
    NotApplicable,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Verified => "verified",
            Status::Violated => "violated",
            Status::ReportOnly => "report_only",
            Status::NotApplicable => "not_applicable",
        }
    }
}

/// One inequality `lhs ≤ bound` evaluated on concrete inputs.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationRecord {
    pub id: String,
    pub module: String,
    pub inputs: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    pub lhs: ExtNonneg,
    pub bound: ExtNonneg,
    /// `bound / lhs`; at least one when the inequality holds.
    #[serde(serialize_with = "ser_slack")]
    pub slack: f64,
    pub status: Status,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub hypotheses: BTreeMap<String, Tri>,
    /// Set when `lhs` meets `bound` to within tolerance on a strict inequality.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub boundary_equality: bool,
}

fn ser_slack<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    if x.is_nan() {
        s.serialize_none()
    } else if x.is_infinite() {
        s.serialize_str("inf")
    } else {
        s.serialize_f64(*x)
    }
}

pub fn slack_of(lhs: ExtNonneg, bound: ExtNonneg) -> f64 {
    bound.ratio(lhs).to_f64()
}

impl VerificationRecord {
    /// A checked inequality: verified iff `lhs ≤ bound·(1 + rel) + abs`.
    pub fn check(
        id: impl Into<String>,
        module: impl Into<String>,
        lhs: impl Into<ExtNonneg>,
        bound: impl Into<ExtNonneg>,
        rel: f64,
        abs: f64,
    ) -> Self {
        let (lhs, bound) = (lhs.into(), bound.into());
        let status = if lhs.le_within(bound, rel, abs) {
            Status::Verified
        } else {
            Status::Violated
        };
        Self::with_status(id, module, lhs, bound, status)
    }

    /// A record whose status is decided by the caller.
    pub fn with_status(
        id: impl Into<String>,
        module: impl Into<String>,
        lhs: impl Into<ExtNonneg>,
        bound: impl Into<ExtNonneg>,
        status: Status,
    ) -> Self {
        let (lhs, bound) = (lhs.into(), bound.into());
        VerificationRecord {
            id: id.into(),
            module: module.into(),
            inputs: BTreeMap::new(),
            lambda: None,
            lhs,
            bound,
            slack: slack_of(lhs, bound),
            status,
            hypotheses: BTreeMap::new(),
            boundary_equality: false,
        }
    }

    pub fn input(mut self, key: &str, value: impl ToString) -> Self {
        self.inputs.insert(key.to_string(), value.to_string());
        self
    }

    pub fn lambda(mut self, lambda: f64) -> Self {
        self.lambda = Some(lambda);
        self
    }

    pub fn hypothesis(mut self, name: &str, value: Tri) -> Self {
        self.hypotheses.insert(name.to_string(), value);
        self
    }

    pub fn is_violated(&self) -> bool {
        self.status == Status::Violated
    }
}
