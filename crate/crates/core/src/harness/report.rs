use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;
use serde_json::Value;

use crate::classes::{MARGIN_TOL, ROUNDING_SLACK, ZERO_TOL};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Inapplicable,
    Indeterminate,
}

impl CheckStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::Inapplicable => "inapplicable",
            CheckStatus::Indeterminate => "indeterminate",
        }
    }

    pub fn from_bool(ok: bool) -> Self {
        if ok {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: CheckStatus,
    pub margin: Option<f64>,
    pub witness: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub counts: BTreeMap<String, usize>,
}

impl Check {
    pub fn new(name: impl Into<String>, status: CheckStatus) -> Self {
        Self {
            name: name.into(),
            status,
            margin: None,
            witness: None,
            detail: None,
            counts: BTreeMap::new(),
        }
    }

    /// Non-finite margins are dropped; JSON has no representation for them.
    pub fn margin(mut self, margin: f64) -> Self {
        self.margin = margin.is_finite().then_some(margin);
        self
    }

    pub fn witness(mut self, witness: Option<Complex64>) -> Self {
        self.witness = witness.map(|w| [w.re, w.im]);
        self
    }

    pub fn detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    pub fn count(mut self, key: &str, value: usize) -> Self {
        self.counts.insert(key.to_string(), value);
        self
    }
}

/// Adjustments made where printed formulas are internally inconsistent.
pub const DEVIATIONS: [&str; 5] = [
    "coefficient-bound extremal uses d_n = sqrt(alpha^2 n^2 + 1) - alpha n; the printed '+' sign gives d_n > 1 and contradicts the bound it is meant to attain",
    "partial-sum weights read as d_k = 1 + alpha (k + 1), summed from k = 1",
    "the order-(1 - 1/alpha) sharpness of the (1 + cz)/(z - cz^2) extremal is measured along z = +r; along z = -r the limit is 1 + 1/alpha",
    "partial sums S_n and the neighborhood distance omit the constant coefficient a_0, as printed",
    "the neighborhood-stability claim is asserted only for sampling radius <= 1/(1 + 2 alpha) with the eps-premise holding; larger radii are reported as inapplicable",
];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub inputs: BTreeMap<String, Value>,
    pub checks: Vec<Check>,
    pub tolerances: BTreeMap<String, f64>,
    pub deviations: Vec<String>,
    pub runtime_ms: u64,
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>) -> Self {
        let tolerances = [
            ("margin_tol", MARGIN_TOL),
            ("zero_tol", ZERO_TOL),
            ("rounding_slack", ROUNDING_SLACK),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect();
        Self {
            suite: suite.into(),
            inputs: BTreeMap::new(),
            checks: Vec::new(),
            tolerances,
            deviations: DEVIATIONS.iter().map(|s| s.to_string()).collect(),
            runtime_ms: 0,
        }
    }

    pub fn input(&mut self, key: &str, value: Value) -> &mut Self {
        self.inputs.insert(key.to_string(), value);
        self
    }

    pub fn tolerance(&mut self, key: &str, value: f64) -> &mut Self {
        self.tolerances.insert(key.to_string(), value);
        self
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    /// Appends `other`'s checks under `prefix/`.
    pub fn absorb(&mut self, prefix: &str, other: VerificationReport) {
        for mut check in other.checks {
            check.name = format!("{prefix}/{}", check.name);
            self.checks.push(check);
        }
        for (k, v) in other.tolerances {
            self.tolerances.entry(k).or_insert(v);
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn count(&self, status: CheckStatus) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json_string()).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("name,status,margin,witness_re,witness_im\n");
        for c in &self.checks {
            let margin = c.margin.map(|m| m.to_string()).unwrap_or_default();
            let (wr, wi) = c
                .witness
                .map(|w| (w[0].to_string(), w[1].to_string()))
                .unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                c.name,
                c.status.as_str(),
                margin,
                wr,
                wi
            );
        }
        out
    }
}
