//! Command-line flags and the config file that can supply them.
//!
//! A config file holds one table per subcommand with the long flag names as
//! keys. Flags given on the command line win over the file.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SEED_ENV: &str = "FINSLER_SEED";

#[derive(Parser, Debug)]
#[command(name = "finsler", version, about = "Finsler curvature, Randers metrics and Zermelo navigation")]
pub struct Cli {
    /// TOML or JSON file supplying flags, one table per subcommand.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Curvature report for one tangent vector of a catalog metric.
    Eval(EvalArgs),
    /// Run a theorem's verification suite.
    Verify(VerifyArgs),
    /// Integrate a geodesic and write it as CSV.
    Geodesic(GeodesicArgs),
    /// Solve a navigation problem and report the resulting metric.
    Navigate(NavigateArgs),
    /// Flag and S-curvature over a grid, as CSV.
    Scan(ScanArgs),
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvalArgs {
    /// Catalog id, e.g. sphere_family.
    #[arg(long)]
    pub metric: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub eps: Option<f64>,
    /// Base point in cartesian coordinates.
    #[arg(long, num_args = 2, value_names = ["X", "Y"], allow_negative_numbers = true, conflicts_with = "polar")]
    pub point: Option<Vec<f64>>,
    /// Base point in polar coordinates.
    #[arg(long, num_args = 2, value_names = ["R", "THETA"], allow_negative_numbers = true)]
    pub polar: Option<Vec<f64>>,
    /// Direction components, in the chart the point was given in.
    #[arg(long, num_args = 2, value_names = ["U", "V"], allow_negative_numbers = true)]
    pub dir: Option<Vec<f64>>,
    /// Chart to compute in (defaults to the chart of the point).
    #[arg(long)]
    pub chart: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyArgs {
    /// 1, 2, 3 or remarks.
    #[arg(long)]
    pub theorem: Option<String>,
    /// Comma-separated ε values.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub eps: Option<Vec<f64>>,
    /// Radial x angular x directions, e.g. 20x16x8.
    #[arg(long)]
    pub grid: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Random points for the volume, classification and diagnostics checks.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Random tangent vectors for the closed-form vs engine comparison.
    #[arg(long)]
    pub oracle_samples: Option<usize>,
    #[arg(long)]
    pub chart: Option<String>,
    /// Tolerance override, e.g. curvature=1e-8. Repeatable.
    #[arg(long, value_name = "NAME=VALUE")]
    pub tol: Option<Vec<String>>,
    /// Where to write the JSON report.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Re-run the configuration recorded in a report and compare verdicts.
    #[arg(long, value_name = "REPORT")]
    pub replay: Option<PathBuf>,
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeodesicArgs {
    #[arg(long)]
    pub metric: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub eps: Option<f64>,
    #[arg(long, num_args = 2, value_names = ["X", "Y"], allow_negative_numbers = true, conflicts_with = "polar")]
    pub point: Option<Vec<f64>>,
    #[arg(long, num_args = 2, value_names = ["R", "THETA"], allow_negative_numbers = true)]
    pub polar: Option<Vec<f64>>,
    #[arg(long, num_args = 2, value_names = ["U", "V"], allow_negative_numbers = true)]
    pub dir: Option<Vec<f64>>,
    #[arg(long)]
    pub chart: Option<String>,
    #[arg(long)]
    pub t_end: Option<f64>,
    #[arg(long)]
    pub step: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NavigateArgs {
    /// round_sphere, klein, funk, poincare, minus_four, radial_sphere or radial_hyperbolic.
    #[arg(long)]
    pub background: Option<String>,
    /// rotation or constant.
    #[arg(long)]
    pub wind: Option<String>,
    /// Components of a constant wind.
    #[arg(long, num_args = 2, value_names = ["V1", "V2"], allow_negative_numbers = true)]
    pub wind_vector: Option<Vec<f64>>,
    #[arg(long, allow_negative_numbers = true)]
    pub eps: Option<f64>,
    /// Point at which solvability is required, in the background's chart. Repeatable.
    #[arg(long, num_args = 2, value_names = ["X1", "X2"], allow_negative_numbers = true, action = clap::ArgAction::Append)]
    pub point: Option<Vec<f64>>,
    /// Number of random sample points.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScanArgs {
    #[arg(long)]
    pub metric: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub chart: Option<String>,
    /// Radial x angular x directions.
    #[arg(long)]
    pub grid: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

const SECTIONS: [&str; 5] = ["eval", "verify", "geodesic", "navigate", "scan"];

/// Parsed config file: subcommand name to its table.
#[derive(Debug, Default)]
pub struct Config {
    sections: serde_json::Map<String, Value>,
}

impl Config {
    pub fn load(path: &Path) -> anyhow::Result<Config> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
        let value: Value = match ext.to_ascii_lowercase().as_str() {
            "toml" => serde_json::to_value(toml::from_str::<toml::Table>(&text)?)?,
            "json" => serde_json::from_str(&text)?,
            _ => bail!("config {} must end in .toml or .json", path.display()),
        };
        let Value::Object(top) = value else {
            bail!("config must be a table");
        };
        let mut sections = serde_json::Map::new();
        for (k, v) in top {
            if !SECTIONS.contains(&k.as_str()) {
                bail!("unknown config section [{k}]; expected one of {}", SECTIONS.join(", "));
            }
            let Value::Object(table) = v else {
                bail!("config section [{k}] must be a table");
            };
            // Flags are spelled with dashes on the command line.
            let table = table
                .into_iter()
                .map(|(key, val)| (key.replace('-', "_"), val))
                .collect();
            sections.insert(k, Value::Object(table));
        }
        Ok(Config { sections })
    }

    /// Fills every flag left unset on the command line from the section.
    pub fn merge<T: Serialize + DeserializeOwned>(&self, section: &str, cli: T) -> anyhow::Result<T> {
        let Some(Value::Object(file)) = self.sections.get(section) else {
            return Ok(cli);
        };
        let Value::Object(mut merged) = serde_json::to_value(&cli)? else {
            unreachable!("argument structs serialize to objects");
        };
        for (k, v) in file {
            match merged.get(k) {
                Some(Value::Null) => {
                    merged.insert(k.clone(), v.clone());
                }
                Some(_) => {}
                None => bail!("unknown key {k:?} in config section [{section}]"),
            }
        }
        serde_json::from_value(Value::Object(merged))
            .with_context(|| format!("invalid value in config section [{section}]"))
    }
}

/// Seed precedence: flag, then `FINSLER_SEED`, then config file, then default.
pub fn env_seed() -> anyhow::Result<Option<u64>> {
    match std::env::var(SEED_ENV) {
        Ok(s) => Ok(Some(
            s.trim()
                .parse()
                .with_context(|| format!("{SEED_ENV}={s:?} is not an unsigned integer"))?,
        )),
        Err(_) => Ok(None),
    }
}

pub fn parse_grid(s: &str) -> anyhow::Result<finsler_core::Grid> {
    let parts: Vec<usize> = s
        .split(['x', 'X', ','])
        .map(|p| p.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .with_context(|| format!("grid {s:?} is not of the form RxAxD"))?;
    let [radial, angular, directions] = parts[..] else {
        bail!("grid {s:?} needs three counts, e.g. 20x16x8");
    };
    Ok(finsler_core::Grid {
        radial,
        angular,
        directions,
    })
}
