//! Run configuration: defaults, `key=value` config files, flag overrides.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use hciz_core::scalar::{format_rational, parse_rational, ratio};
use num::{BigRational, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => bail!("unknown output format {other:?} (expected json or csv)"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub d_max: u32,
    /// series truncation degree
    pub degree: usize,
    /// ħ-order of the stable series
    pub hbar_order: usize,
    pub n_grid: Vec<u32>,
    /// evaluation radius for the discrepancy grid
    pub epsilon: BigRational,
    pub samples: usize,
    pub seed: u64,
    /// restricts the discrepancy check to one order k
    pub delta_order: Option<u32>,
    pub format: Format,
    pub output: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            d_max: 6,
            degree: 6,
            hbar_order: 12,
            n_grid: vec![4, 8, 16],
            epsilon: ratio(1, 20),
            samples: 100_000,
            seed: 7,
            delta_order: None,
            format: Format::Json,
            output: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.d_max > 9 {
            bail!("d_max = {} exceeds 9", self.d_max);
        }
        if self.degree > self.d_max as usize {
            bail!("D = {} exceeds d_max = {}", self.degree, self.d_max);
        }
        if self.epsilon <= BigRational::zero() || self.epsilon > ratio(1, 2) {
            bail!("epsilon = {} outside (0, 1/2]", format_rational(&self.epsilon));
        }
        if self.n_grid.is_empty() || self.n_grid.contains(&0) {
            bail!("N grid must be a nonempty list of positive integers");
        }
        Ok(())
    }

    /// Applies one `key=value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key.trim() {
            "d_max" => self.d_max = value.parse()?,
            "D" | "degree" => self.degree = value.parse()?,
            "R" | "hbar_order" => self.hbar_order = value.parse()?,
            "N" | "N_grid" | "n_grid" => self.n_grid = parse_list(value)?,
            "epsilon" => {
                self.epsilon = parse_rational(value).with_context(|| format!("bad epsilon {value:?}"))?
            }
            "samples" => self.samples = value.parse()?,
            "seed" => self.seed = value.parse()?,
            "k" => self.delta_order = Some(value.parse()?),
            "format" => self.format = value.parse()?,
            "output" => self.output = Some(PathBuf::from(value)),
            other => bail!("unknown config key {other:?}"),
        }
        Ok(())
    }

    /// Reads `key=value` lines; blank lines and `#` comments are skipped.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let mut cfg = RunConfig::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                bail!("{}:{}: expected key=value", path.display(), lineno + 1);
            };
            cfg.set(k, v)
                .with_context(|| format!("{}:{}", path.display(), lineno + 1))?;
        }
        Ok(cfg)
    }
}

pub fn parse_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    s.split(',')
        .filter(|x| !x.trim().is_empty())
        .map(|x| {
            x.trim()
                .parse::<T>()
                .map_err(|e| anyhow::anyhow!("bad list entry {x:?}: {e}"))
        })
        .collect()
}
