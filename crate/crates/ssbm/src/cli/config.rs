//! TOML configuration documents for the harness: generation configs and
//! benchmark suites.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::learner::FitConfig;
use crate::synth::{BlockPairConfig, SgConfig};

/// A generation config resolved to one concrete family.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Sg(SgConfig),
    BlockPair(BlockPairConfig),
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Sg(_) => "sg",
            Family::BlockPair(_) => "block_pair",
        }
    }

    pub fn seed(&self) -> u64 {
        match self {
            Family::Sg(c) => c.seed,
            Family::BlockPair(c) => c.seed,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        match &mut self {
            Family::Sg(c) => c.seed = seed,
            Family::BlockPair(c) => c.seed = seed,
        }
        self
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Family::Sg(c) => c.validate(),
            Family::BlockPair(c) => c.validate(),
        }
    }
}

/// Top level of a `generate` config file: exactly one family table.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenerateDoc {
    pub sg: Option<SgConfig>,
    pub block_pair: Option<BlockPairDoc>,
}

/// Block-pair table as written in config files; `preset` fills in the
/// bundled four-block community/bipartite mixture, explicit fields override
/// it.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct BlockPairDoc {
    pub preset: Option<String>,
    pub block_sizes: Option<Vec<usize>>,
    pub pi: Option<Vec<Vec<[f64; 3]>>>,
    #[serde(default)]
    pub seed: u64,
}

impl BlockPairDoc {
    pub fn resolve(&self) -> Result<BlockPairConfig> {
        let mut base = match self.preset.as_deref() {
            Some("two_communities_two_bipartites") => {
                BlockPairConfig::two_communities_two_bipartites()
            }
            Some(other) => {
                return Err(Error::config(
                    "preset",
                    format!("unknown preset '{other}'; expected 'two_communities_two_bipartites'"),
                ))
            }
            None => {
                let (Some(sizes), Some(pi)) = (self.block_sizes.clone(), self.pi.clone()) else {
                    return Err(Error::config(
                        "block_pair",
                        "either a preset or both block_sizes and pi are required",
                    ));
                };
                BlockPairConfig::new(sizes, pi)
            }
        };
        if let Some(sizes) = &self.block_sizes {
            base.block_sizes = sizes.clone();
        }
        if let Some(pi) = &self.pi {
            base.pi = pi.clone();
        }
        base.seed = self.seed;
        Ok(base)
    }
}

/// Parses a generate config file into a single resolved family.
pub fn parse_generate_config(text: &str) -> Result<Family> {
    let doc: GenerateDoc = toml::from_str(text).map_err(|e| Error::InvalidConfig {
        field: "config".into(),
        reason: e.to_string(),
    })?;
    let family = match (doc.sg, doc.block_pair) {
        (Some(sg), None) => Family::Sg(sg),
        (None, Some(bp)) => Family::BlockPair(bp.resolve()?),
        (Some(_), Some(_)) => {
            return Err(Error::config(
                "config",
                "give exactly one of [sg] or [block_pair], not both",
            ))
        }
        (None, None) => {
            return Err(Error::config(
                "config",
                "expected an [sg] or [block_pair] table",
            ))
        }
    };
    family.validate()?;
    Ok(family)
}

/// A benchmark suite: named sweeps, each a parameter grid over one network
/// family with shared fit options.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteDoc {
    pub suite: SuiteMeta,
    pub sweeps: BTreeMap<String, SweepDoc>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteMeta {
    #[serde(default)]
    pub base_seed: u64,
    pub seeds_per_point: usize,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SweepDoc {
    /// "sg" or "block_pair".
    pub family: String,
    /// Swept field: one of p_in, p_minus, p_plus, m, k, mk (m and k
    /// together). Omit for a single-point sweep.
    pub param: Option<String>,
    /// Explicit grid, or use from/to/step.
    pub values: Option<Vec<f64>>,
    pub from: Option<f64>,
    pub to: Option<f64>,
    pub step: Option<f64>,

    // sg family base parameters.
    pub c: Option<usize>,
    pub m: Option<usize>,
    pub k: Option<f64>,
    #[serde(default)]
    pub p_in: f64,
    #[serde(default)]
    pub p_minus: f64,
    #[serde(default)]
    pub p_plus: f64,

    // block_pair family parameters.
    pub preset: Option<String>,
    pub block_sizes: Option<Vec<usize>>,
    pub pi: Option<Vec<Vec<[f64; 3]>>>,

    // Fit options shared by every point of the sweep.
    pub k_min: Option<usize>,
    pub k_max: Option<usize>,
    pub epsilon: Option<f64>,
    pub restarts: Option<usize>,
    pub max_sweeps: Option<usize>,
}

impl SweepDoc {
    /// The grid of swept values; a single `0.0` point when nothing is swept.
    pub fn points(&self) -> Result<Vec<f64>> {
        if let Some(values) = &self.values {
            if values.is_empty() {
                return Err(Error::config("values", "must not be empty"));
            }
            return Ok(values.clone());
        }
        match (self.from, self.to, self.step) {
            (Some(from), Some(to), Some(step)) => {
                if !(step > 0.0) || to < from {
                    return Err(Error::config("step", "need step > 0 and to >= from"));
                }
                let count = ((to - from) / step).round() as usize + 1;
                Ok((0..count).map(|i| from + i as f64 * step).collect())
            }
            (None, None, None) => {
                if self.param.is_some() {
                    Err(Error::config(
                        "values",
                        "a swept param needs values or from/to/step",
                    ))
                } else {
                    Ok(vec![0.0])
                }
            }
            _ => Err(Error::config(
                "from",
                "from, to, and step must be given together",
            )),
        }
    }

    /// Materializes the generation config at one grid point.
    pub fn family_at(&self, value: f64) -> Result<Family> {
        match self.family.as_str() {
            "sg" => {
                let Some(c) = self.c else {
                    return Err(Error::config("c", "sg sweeps need c"));
                };
                let swept = self.param.as_deref();
                let m = match self.m {
                    Some(m) => m,
                    None if matches!(swept, Some("m") | Some("mk")) => 1,
                    None => return Err(Error::config("m", "sg sweeps need m unless it is swept")),
                };
                let k = match self.k {
                    Some(k) => k,
                    None if matches!(swept, Some("k") | Some("mk")) => 0.0,
                    None => return Err(Error::config("k", "sg sweeps need k unless it is swept")),
                };
                let mut cfg = SgConfig::new(c, m, k, self.p_in, self.p_minus, self.p_plus);
                match self.param.as_deref() {
                    None => {}
                    Some("p_in") => cfg.p_in = value,
                    Some("p_minus") => cfg.p_minus = value,
                    Some("p_plus") => cfg.p_plus = value,
                    Some("m") => cfg.m = value as usize,
                    Some("k") => cfg.k = value,
                    Some("mk") => {
                        cfg.m = value as usize;
                        cfg.k = value;
                    }
                    Some(other) => {
                        return Err(Error::config(
                            "param",
                            format!("unknown sg sweep parameter '{other}'"),
                        ))
                    }
                }
                Ok(Family::Sg(cfg))
            }
            "block_pair" => {
                if self.param.is_some() {
                    return Err(Error::config(
                        "param",
                        "block_pair sweeps support only single-point runs",
                    ));
                }
                let doc = BlockPairDoc {
                    preset: self.preset.clone(),
                    block_sizes: self.block_sizes.clone(),
                    pi: self.pi.clone(),
                    seed: 0,
                };
                Ok(Family::BlockPair(doc.resolve()?))
            }
            other => Err(Error::config(
                "family",
                format!("unknown family '{other}'; expected 'sg' or 'block_pair'"),
            )),
        }
    }

    /// Fit options of this sweep, seeded per run by the caller.
    pub fn fit_config(&self, seed: u64) -> FitConfig {
        let defaults = FitConfig::default();
        FitConfig {
            k_min: self.k_min.unwrap_or(defaults.k_min),
            k_max: self.k_max,
            epsilon: self.epsilon.unwrap_or(defaults.epsilon),
            restarts: self.restarts.unwrap_or(defaults.restarts),
            seed,
            max_sweeps: self.max_sweeps.unwrap_or(defaults.max_sweeps),
            ..defaults
        }
    }
}

pub fn parse_suite_config(text: &str) -> Result<SuiteDoc> {
    let doc: SuiteDoc = toml::from_str(text).map_err(|e| Error::InvalidConfig {
        field: "config".into(),
        reason: e.to_string(),
    })?;
    if doc.suite.seeds_per_point == 0 {
        return Err(Error::config("seeds_per_point", "must be at least 1"));
    }
    if doc.sweeps.is_empty() {
        return Err(Error::config("sweeps", "suite has no sweeps"));
    }
    for (name, sweep) in &doc.sweeps {
        sweep.points().map_err(|e| Error::InvalidConfig {
            field: format!("sweeps.{name}"),
            reason: e.to_string(),
        })?;
    }
    Ok(doc)
}

/// SplitMix64: the documented per-run seed derivation for sweeps, so that
/// reruns of the same suite are byte-identical.
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Generation seed for (sweep, point, repetition).
pub fn point_seed(base: u64, sweep_idx: usize, point_idx: usize, rep: usize) -> u64 {
    splitmix64(base ^ ((sweep_idx as u64) << 48) ^ ((point_idx as u64) << 24) ^ (rep as u64))
}

/// Fit seed derived from a generation seed.
pub fn fit_seed(gen_seed: u64) -> u64 {
    splitmix64(gen_seed ^ 0x5EED_F17A_11CE_0001)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sg_generate_config() {
        let text = "[sg]\nc = 4\nm = 32\nk = 32\np_in = 0.8\np_minus = 0.0\np_plus = 0.0\nseed = 7\n";
        let family = parse_generate_config(text).unwrap();
        match family {
            Family::Sg(cfg) => {
                assert_eq!(cfg.c, 4);
                assert_eq!(cfg.k, 32.0);
                assert_eq!(cfg.seed, 7);
            }
            _ => panic!("expected sg"),
        }
    }

    #[test]
    fn rejects_out_of_range_probability() {
        let text = "[sg]\nc = 4\nm = 32\nk = 32\np_in = 1.2\np_minus = 0.0\np_plus = 0.0\n";
        match parse_generate_config(text) {
            Err(Error::InvalidConfig { field, .. }) => assert_eq!(field, "p_in"),
            other => panic!("expected InvalidConfig, got {other:?}"),
        }
    }

    #[test]
    fn block_pair_preset_resolves() {
        let text = "[block_pair]\npreset = \"two_communities_two_bipartites\"\nseed = 3\n";
        let family = parse_generate_config(text).unwrap();
        match family {
            Family::BlockPair(cfg) => {
                assert_eq!(cfg.block_sizes, vec![32; 4]);
                assert_eq!(cfg.pi[0][0], [0.6, 0.1, 0.3]);
                assert_eq!(cfg.pi[1][3], [0.01, 0.4, 0.59]);
                assert_eq!(cfg.seed, 3);
            }
            _ => panic!("expected block_pair"),
        }
    }

    #[test]
    fn sweep_points_from_range() {
        let text = "\
[suite]\nseeds_per_point = 2\n\
[sweeps.noise]\nfamily = \"sg\"\nparam = \"p_minus\"\nfrom = 0.0\nto = 0.5\nstep = 0.05\nc = 4\nm = 32\nk = 32\np_in = 0.6\n";
        let doc = parse_suite_config(text).unwrap();
        let sweep = &doc.sweeps["noise"];
        let points = sweep.points().unwrap();
        assert_eq!(points.len(), 11);
        assert!((points[10] - 0.5).abs() < 1e-12);
        match sweep.family_at(points[3]).unwrap() {
            Family::Sg(cfg) => assert!((cfg.p_minus - 0.15).abs() < 1e-12),
            _ => panic!("expected sg"),
        }
    }

    #[test]
    fn seed_derivation_is_stable_and_spread() {
        let a = point_seed(42, 0, 1, 2);
        let b = point_seed(42, 0, 1, 2);
        assert_eq!(a, b);
        assert_ne!(point_seed(42, 0, 1, 3), a);
        assert_ne!(point_seed(42, 1, 1, 2), a);
        assert_ne!(fit_seed(a), a);
    }
}
