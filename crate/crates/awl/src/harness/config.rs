//! Declarative experiment descriptions: parse flat `key = value` config
//! text, merge CLI overrides, validate, resolve.

use std::path::PathBuf;

use thiserror::Error;

use crate::ensembles::AugmentSpec;
use crate::rng::WeightDistribution;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("missing required key '{0}'")]
    Missing(&'static str),
    #[error("bad value for '{key}': {value}")]
    BadValue { key: String, value: String },
    #[error("unknown key '{0}'")]
    UnknownKey(String),
    #[error("keys 'm' and 'p' are mutually exclusive")]
    AugmentClash,
    #[error("statistic '{stat}' requires a bipartite ensemble, got '{ensemble}'")]
    Incompatible { stat: String, ensemble: String },
    #[error("reps must be at least 1")]
    NoReps,
    #[error("n must be at least 2")]
    TinyN,
    #[error("ensemble '{0}' needs a degree: give 'alpha' or 'd'")]
    NeedsDegree(String),
    #[error("config line {0}: expected 'key = value'")]
    Malformed(usize),
    #[error("config file is empty")]
    EmptyFile,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ensemble {
    Circulant,
    BipRegular,
    Complete,
    CompleteBipartite,
    MstExtremal,
    BipExtremal,
}

impl Ensemble {
    pub fn is_bipartite(&self) -> bool {
        matches!(self, Ensemble::BipRegular | Ensemble::CompleteBipartite | Ensemble::BipExtremal)
    }

    /// For extremal ensembles the degree field carries the copy size r.
    pub fn needs_degree(&self) -> bool {
        !matches!(self, Ensemble::Complete | Ensemble::CompleteBipartite)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Ensemble::Circulant => "circulant",
            Ensemble::BipRegular => "bip_regular",
            Ensemble::Complete => "complete",
            Ensemble::CompleteBipartite => "complete_bipartite",
            Ensemble::MstExtremal => "mst_extremal",
            Ensemble::BipExtremal => "bip_extremal",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "circulant" => Ensemble::Circulant,
            "bip_regular" => Ensemble::BipRegular,
            "complete" => Ensemble::Complete,
            "complete_bipartite" => Ensemble::CompleteBipartite,
            "mst_extremal" => Ensemble::MstExtremal,
            "bip_extremal" => Ensemble::BipExtremal,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Statistic {
    Mst,
    PairDistance,
    Eccentricity,
    Diameter,
    MatchingTotal,
    MatchingIncrements,
    Codegree,
    HeavyVertices,
}

impl Statistic {
    pub fn needs_bipartite(&self) -> bool {
        matches!(
            self,
            Statistic::MatchingTotal | Statistic::MatchingIncrements | Statistic::Codegree
        )
    }

    pub fn name(&self) -> &'static str {
        match self {
            Statistic::Mst => "mst",
            Statistic::PairDistance => "pair_distance",
            Statistic::Eccentricity => "eccentricity",
            Statistic::Diameter => "diameter",
            Statistic::MatchingTotal => "matching_total",
            Statistic::MatchingIncrements => "matching_increments",
            Statistic::Codegree => "codegree",
            Statistic::HeavyVertices => "heavy_vertices",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "mst" => Statistic::Mst,
            "pair_distance" => Statistic::PairDistance,
            "eccentricity" => Statistic::Eccentricity,
            "diameter" => Statistic::Diameter,
            "matching_total" => Statistic::MatchingTotal,
            "matching_increments" => Statistic::MatchingIncrements,
            "codegree" => Statistic::Codegree,
            "heavy_vertices" => Statistic::HeavyVertices,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// A partially specified experiment: config-file blocks and CLI flags both
/// produce one of these, then merge.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig {
    pub ensemble: Option<String>,
    pub n: Option<usize>,
    pub alpha: Option<f64>,
    pub d: Option<usize>,
    pub m: Option<usize>,
    pub p: Option<f64>,
    pub dist: Option<String>,
    pub stat: Option<String>,
    pub reps: Option<usize>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<String>,
}

impl RawConfig {
    /// Parse `key = value` lines. Blocks separated by blank lines become
    /// separate configs (for sweeps); `#` starts a comment.
    pub fn parse_blocks(text: &str) -> Result<Vec<RawConfig>, ConfigError> {
        let mut blocks = Vec::new();
        let mut current = RawConfig::default();
        let mut current_has_keys = false;
        for (i, raw_line) in text.lines().enumerate() {
            let line = raw_line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                if current_has_keys {
                    blocks.push(std::mem::take(&mut current));
                    current_has_keys = false;
                }
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or(ConfigError::Malformed(i + 1))?;
            current.set(key.trim(), value.trim())?;
            current_has_keys = true;
        }
        if current_has_keys {
            blocks.push(current);
        }
        if blocks.is_empty() {
            return Err(ConfigError::EmptyFile);
        }
        Ok(blocks)
    }

    fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let bad = |key: &str, value: &str| ConfigError::BadValue {
            key: key.to_string(),
            value: value.to_string(),
        };
        match key {
            "ensemble" => self.ensemble = Some(value.to_string()),
            "n" => self.n = Some(value.parse().map_err(|_| bad(key, value))?),
            "alpha" => self.alpha = Some(value.parse().map_err(|_| bad(key, value))?),
            "d" => self.d = Some(value.parse().map_err(|_| bad(key, value))?),
            "m" => self.m = Some(value.parse().map_err(|_| bad(key, value))?),
            "p" => self.p = Some(value.parse().map_err(|_| bad(key, value))?),
            "dist" => self.dist = Some(value.to_string()),
            "stat" => self.stat = Some(value.to_string()),
            "reps" => self.reps = Some(value.parse().map_err(|_| bad(key, value))?),
            "seed" => self.seed = Some(value.parse().map_err(|_| bad(key, value))?),
            "out" => self.out = Some(PathBuf::from(value)),
            "format" => self.format = Some(value.to_string()),
            other => return Err(ConfigError::UnknownKey(other.to_string())),
        }
        Ok(())
    }

    /// Fields set in `self` win over `base` (CLI flags override file values).
    pub fn over(self, base: &RawConfig) -> RawConfig {
        RawConfig {
            ensemble: self.ensemble.or_else(|| base.ensemble.clone()),
            n: self.n.or(base.n),
            alpha: self.alpha.or(base.alpha),
            d: self.d.or(base.d),
            m: self.m.or(base.m),
            p: self.p.or(base.p),
            dist: self.dist.or_else(|| base.dist.clone()),
            stat: self.stat.or_else(|| base.stat.clone()),
            reps: self.reps.or(base.reps),
            seed: self.seed.or(base.seed),
            out: self.out.or_else(|| base.out.clone()),
            format: self.format.or_else(|| base.format.clone()),
        }
    }

    pub fn resolve(&self, default_seed: u64) -> Result<ExperimentConfig, ConfigError> {
        let bad = |key: &str, value: &str| ConfigError::BadValue {
            key: key.to_string(),
            value: value.to_string(),
        };
        let ens_name = self.ensemble.as_deref().ok_or(ConfigError::Missing("ensemble"))?;
        let ensemble = Ensemble::parse(ens_name).ok_or_else(|| bad("ensemble", ens_name))?;
        let n = self.n.ok_or(ConfigError::Missing("n"))?;
        if n < 2 {
            return Err(ConfigError::TinyN);
        }
        let degree = match (self.d, self.alpha) {
            (Some(d), _) => Some(d),
            (None, Some(alpha)) => {
                if !(alpha > 0.0 && alpha <= 1.0) {
                    return Err(bad("alpha", &alpha.to_string()));
                }
                Some((alpha * n as f64).round() as usize)
            }
            (None, None) => None,
        };
        if ensemble.needs_degree() && degree.is_none() {
            return Err(ConfigError::NeedsDegree(ensemble.name().to_string()));
        }
        let augment = match (self.m, self.p) {
            (Some(_), Some(_)) => return Err(ConfigError::AugmentClash),
            (Some(m), None) => AugmentSpec::Count(m),
            (None, Some(p)) => {
                if !(0.0..=1.0).contains(&p) {
                    return Err(bad("p", &p.to_string()));
                }
                AugmentSpec::Bernoulli(p)
            }
            (None, None) => AugmentSpec::Count(0),
        };
        let distribution = match self.dist.as_deref() {
            None | Some("uniform") => WeightDistribution::UniformUnit,
            Some("exp") => WeightDistribution::ExponentialMeanOne,
            Some(other) => return Err(bad("dist", other)),
        };
        let stat_name = self.stat.as_deref().ok_or(ConfigError::Missing("stat"))?;
        let statistic = Statistic::parse(stat_name).ok_or_else(|| bad("stat", stat_name))?;
        if statistic.needs_bipartite() && !ensemble.is_bipartite() {
            return Err(ConfigError::Incompatible {
                stat: statistic.name().to_string(),
                ensemble: ensemble.name().to_string(),
            });
        }
        let reps = self.reps.unwrap_or(1);
        if reps < 1 {
            return Err(ConfigError::NoReps);
        }
        let format = match self.format.as_deref() {
            None | Some("csv") => OutputFormat::Csv,
            Some("json") => OutputFormat::Json,
            Some(other) => return Err(bad("format", other)),
        };
        Ok(ExperimentConfig {
            ensemble,
            n,
            degree,
            augment,
            distribution,
            statistic,
            reps,
            base_seed: self.seed.unwrap_or(default_seed),
            out: self.out.clone(),
            format,
        })
    }
}

/// A fully resolved experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub ensemble: Ensemble,
    pub n: usize,
    /// degree for circulant/bip_regular; copy size r for the extremal
    /// ensembles; None for complete ensembles
    pub degree: Option<usize>,
    pub augment: AugmentSpec,
    pub distribution: WeightDistribution,
    pub statistic: Statistic,
    pub reps: usize,
    pub base_seed: u64,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
}

impl ExperimentConfig {
    pub fn dist_name(&self) -> &'static str {
        match self.distribution {
            WeightDistribution::UniformUnit => "uniform",
            WeightDistribution::ExponentialMeanOne => "exp",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_resolve_round_trip() {
        let text = "\
# spanning tree run
ensemble = circulant
n = 1000
alpha = 0.4
m = 30000
dist = uniform
stat = mst
reps = 20
seed = 7
";
        let blocks = RawConfig::parse_blocks(text).unwrap();
        assert_eq!(blocks.len(), 1);
        let cfg = blocks[0].resolve(0).unwrap();
        assert_eq!(cfg.ensemble, Ensemble::Circulant);
        assert_eq!(cfg.degree, Some(400));
        assert_eq!(cfg.augment, AugmentSpec::Count(30000));
        assert_eq!(cfg.base_seed, 7);
        assert_eq!(cfg.statistic, Statistic::Mst);
    }

    #[test]
    fn blank_lines_split_blocks() {
        let text = "ensemble = complete\nn = 10\nstat = mst\n\nensemble = complete\nn = 20\nstat = mst\n";
        let blocks = RawConfig::parse_blocks(text).unwrap();
        assert_eq!(blocks.len(), 2);
        assert_eq!(blocks[1].n, Some(20));
    }

    #[test]
    fn cli_overrides_file() {
        let file = RawConfig { n: Some(10), reps: Some(5), ..Default::default() };
        let cli = RawConfig { n: Some(99), ..Default::default() };
        let merged = cli.over(&file);
        assert_eq!(merged.n, Some(99));
        assert_eq!(merged.reps, Some(5));
    }

    #[test]
    fn rejects_incompatible_statistic() {
        let raw = RawConfig {
            ensemble: Some("circulant".into()),
            n: Some(10),
            d: Some(2),
            stat: Some("matching_total".into()),
            ..Default::default()
        };
        assert!(matches!(raw.resolve(0), Err(ConfigError::Incompatible { .. })));
    }

    #[test]
    fn rejects_m_and_p_together() {
        let raw = RawConfig {
            ensemble: Some("complete".into()),
            n: Some(10),
            m: Some(3),
            p: Some(0.1),
            stat: Some("mst".into()),
            ..Default::default()
        };
        assert_eq!(raw.resolve(0).unwrap_err(), ConfigError::AugmentClash);
    }

    #[test]
    fn missing_degree_flagged() {
        let raw = RawConfig {
            ensemble: Some("circulant".into()),
            n: Some(10),
            stat: Some("mst".into()),
            ..Default::default()
        };
        assert!(matches!(raw.resolve(0), Err(ConfigError::NeedsDegree(_))));
    }

    #[test]
    fn default_seed_applies_when_unset() {
        let raw = RawConfig {
            ensemble: Some("complete".into()),
            n: Some(5),
            stat: Some("mst".into()),
            ..Default::default()
        };
        assert_eq!(raw.resolve(123).unwrap().base_seed, 123);
    }

    #[test]
    fn unknown_key_is_an_error() {
        assert!(matches!(
            RawConfig::parse_blocks("bogus = 1\n"),
            Err(ConfigError::UnknownKey(_))
        ));
        assert!(matches!(
            RawConfig::parse_blocks("just a line\n"),
            Err(ConfigError::Malformed(1))
        ));
    }
}
