//! Verification suites, one per claim, and their JSON reports.

pub mod report;
mod suites;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde_json::json;

use crate::error::{invalid, Error, Result};
use crate::series::{DiscGrid, DEFAULT_ANGULAR_SAMPLES};

pub use report::{Check, CheckStatus, VerificationReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Thm21,
    Thm22,
    Thm23,
    Rem1,
    Rem2,
    Thm31,
    Thm32,
    Thm41,
    Cor1,
    Cor2,
    Thm42,
    All,
}

impl Suite {
    pub const EACH: [Suite; 11] = [
        Suite::Thm21,
        Suite::Thm22,
        Suite::Thm23,
        Suite::Rem1,
        Suite::Rem2,
        Suite::Thm31,
        Suite::Thm32,
        Suite::Thm41,
        Suite::Cor1,
        Suite::Cor2,
        Suite::Thm42,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Suite::Thm21 => "thm2.1",
            Suite::Thm22 => "thm2.2",
            Suite::Thm23 => "thm2.3",
            Suite::Rem1 => "rem1",
            Suite::Rem2 => "rem2",
            Suite::Thm31 => "thm3.1",
            Suite::Thm32 => "thm3.2",
            Suite::Thm41 => "thm4.1",
            Suite::Cor1 => "cor1",
            Suite::Cor2 => "cor2",
            Suite::Thm42 => "thm4.2",
            Suite::All => "all",
        }
    }

    fn stream(self) -> u64 {
        Suite::EACH.iter().position(|s| *s == self).unwrap_or(99) as u64
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.id() == s)
            .ok_or_else(|| Error::UnknownSuite(s.to_string()))
    }
}

/// Optional overrides; unset values fall back to each suite's defaults.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SuiteParams {
    pub alpha: Option<f64>,
    pub n: Option<usize>,
    pub delta: Option<f64>,
    pub eps: Option<f64>,
    pub count: Option<usize>,
    pub seed: u64,
    pub grid: DiscGrid,
}

fn parse_num<T: FromStr>(key: &'static str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| invalid(key, format!("cannot parse `{value}`")))
}

impl SuiteParams {
    /// Builds parameters from string pairs: `alpha`, `n`, `delta`, `eps`,
    /// `count`, `seed`, `grid_rmax`, `grid_theta`.
    pub fn from_map(map: &BTreeMap<String, String>) -> Result<Self> {
        let mut p = SuiteParams::default();
        let mut rmax = None;
        let mut theta = DEFAULT_ANGULAR_SAMPLES;
        for (k, v) in map {
            match k.as_str() {
                "alpha" => p.alpha = Some(parse_num("alpha", v)?),
                "n" => p.n = Some(parse_num("n", v)?),
                "delta" => p.delta = Some(parse_num("delta", v)?),
                "eps" => p.eps = Some(parse_num("eps", v)?),
                "count" => p.count = Some(parse_num("count", v)?),
                "seed" => p.seed = parse_num("seed", v)?,
                "grid_rmax" => rmax = Some(parse_num::<f64>("grid_rmax", v)?),
                "grid_theta" => theta = parse_num("grid_theta", v)?,
                other => return Err(Error::Schema(format!("unknown parameter `{other}`"))),
            }
        }
        p.grid = match rmax {
            Some(r) => DiscGrid::with_rmax(r, theta)?,
            None if theta != DEFAULT_ANGULAR_SAMPLES => {
                DiscGrid::new(DiscGrid::default().radii().to_vec(), theta)?
            }
            None => DiscGrid::default(),
        };
        Ok(p)
    }
}

/// Runs one suite (or all of them) and times it.
pub fn run_suite(suite: Suite, params: &SuiteParams) -> Result<VerificationReport> {
    let start = Instant::now();
    let mut report = match suite {
        Suite::All => {
            let mut all = VerificationReport::new("all");
            all.input("seed", json!(params.seed))
                .input("grid", params.grid.to_json());
            let defaults = SuiteParams {
                seed: params.seed,
                grid: params.grid.clone(),
                ..SuiteParams::default()
            };
            for s in Suite::EACH {
                all.absorb(s.id(), suites::run(s, &defaults)?);
            }
            all
        }
        s => suites::run(s, params)?,
    };
    report.runtime_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_ids_round_trip() {
        for s in Suite::EACH.into_iter().chain([Suite::All]) {
            assert_eq!(s.id().parse::<Suite>().unwrap(), s);
        }
        assert!(matches!(
            "thm9.9".parse::<Suite>(),
            Err(Error::UnknownSuite(_))
        ));
    }

    #[test]
    fn params_from_map() {
        let map: BTreeMap<String, String> = [
            ("alpha", "1.5"),
            ("n", "3"),
            ("seed", "7"),
            ("grid_rmax", "0.99"),
            ("grid_theta", "64"),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect();
        let p = SuiteParams::from_map(&map).unwrap();
        assert_eq!(p.alpha, Some(1.5));
        assert_eq!(p.n, Some(3));
        assert_eq!(p.seed, 7);
        assert_eq!(p.grid.max_radius(), 0.99);
        assert_eq!(p.grid.angular_samples(), 64);

        let bad: BTreeMap<String, String> = [("alpha".to_string(), "x".to_string())].into();
        assert!(SuiteParams::from_map(&bad).is_err());
        let unknown: BTreeMap<String, String> = [("beta".to_string(), "1".to_string())].into();
        assert!(SuiteParams::from_map(&unknown).is_err());
    }
}
