//! Config file schema, descriptor parsing and flag/file merging.

use std::path::{Path, PathBuf};

use marginal_core::{Algorithm, NodeRule, PartitionSmoother, PointSetSpec};
use serde::Deserialize;

/// A configuration problem: bad flag values, unreadable or malformed files.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

pub fn bad<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

/// Keys accepted in the `--config` TOML file. Relative paths are resolved
/// against the config file's directory.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub points: Option<PointSetSpec>,
    pub dims: Option<usize>,
    pub dist: Option<PathBuf>,
    pub algorithm: Option<String>,
    pub partitions: Option<usize>,
    pub smoother: Option<String>,
    pub seed: Option<u64>,
    pub eval_grid: Option<usize>,
    pub out: Option<PathBuf>,
    pub strict: Option<bool>,
    pub threads: Option<usize>,
    pub psi: Option<bool>,
    pub schedule: Option<Vec<PointSetSpec>>,
    pub seeds: Option<Vec<u64>>,
    pub pairs: Option<Vec<PairConfig>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairConfig {
    pub grid: usize,
    pub lattice: PointSetSpec,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("cannot read config {}: {e}", path.display())))?;
        let mut cfg: FileConfig =
            toml::from_str(&text).map_err(|e| ConfigError(format!("config {}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        for p in [&mut cfg.dist, &mut cfg.out].into_iter().flatten() {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(cfg)
    }
}

/// Parses `32` or `N=32`.
pub fn parse_count(s: &str) -> Result<u64, String> {
    let v = s.strip_prefix("N=").or_else(|| s.strip_prefix("n=")).unwrap_or(s);
    v.parse().map_err(|_| format!("expected a count like 32 or N=32, got {s:?}"))
}

/// Parses `1,3,5` or `1;3;5`.
pub fn parse_list(s: &str) -> Result<Vec<u64>, ConfigError> {
    s.split([',', ';'])
        .map(|t| t.trim().parse().map_err(|_| ConfigError(format!("bad integer {t:?} in {s:?}"))))
        .collect()
}

/// Parses a seed list: `1..20` (inclusive) or `1,2,7`.
pub fn parse_seeds(s: &str) -> Result<Vec<u64>, ConfigError> {
    if let Some((a, b)) = s.split_once("..") {
        let a: u64 = a.trim().parse().map_err(|_| ConfigError(format!("bad seed range {s:?}")))?;
        let b: u64 = b.trim().parse().map_err(|_| ConfigError(format!("bad seed range {s:?}")))?;
        if a > b {
            return bad(format!("empty seed range {s:?}"));
        }
        return Ok((a..=b).collect());
    }
    parse_list(s)
}

/// Parses one point-set descriptor:
/// `grid:n`, `korobov:N[:alpha]`, `maximal:l:r`, `random:N[:seed]`,
/// `rank1:N:z1;z2;...`.
pub fn parse_descriptor(s: &str, default_seed: u64) -> Result<PointSetSpec, ConfigError> {
    let parts: Vec<&str> = s.trim().split(':').collect();
    let num = |t: &str| -> Result<u64, ConfigError> {
        parse_count(t).map_err(ConfigError)
    };
    let spec = match parts.as_slice() {
        ["grid", n] => PointSetSpec::Grid { n: num(n)? as usize },
        ["korobov", n] => PointSetSpec::Korobov {
            n_points: num(n)?,
            alpha: None,
        },
        ["korobov", n, a] => PointSetSpec::Korobov {
            n_points: num(n)?,
            alpha: Some(num(a)?),
        },
        ["maximal", l, r] => PointSetSpec::MaximalRank {
            l: num(l)?,
            r: num(r)?,
            z: None,
        },
        ["random", n] => PointSetSpec::Random {
            n_points: num(n)? as usize,
            seed: default_seed,
        },
        ["random", n, k] => PointSetSpec::Random {
            n_points: num(n)? as usize,
            seed: num(k)?,
        },
        ["rank1", n, z] => PointSetSpec::Rank1 {
            n_points: num(n)?,
            z: parse_list(z)?,
        },
        _ => return bad(format!("unrecognised point-set descriptor {s:?}")),
    };
    Ok(spec)
}

/// Parses `6/korobov:1024`.
pub fn parse_pair(s: &str, default_seed: u64) -> Result<PairConfig, ConfigError> {
    let Some((g, lat)) = s.split_once('/') else {
        return bad(format!("expected GRID_N/DESCRIPTOR, got {s:?}"));
    };
    Ok(PairConfig {
        grid: parse_count(g.trim()).map_err(ConfigError)? as usize,
        lattice: parse_descriptor(lat, default_seed)?,
    })
}

pub fn parse_smoother(s: &str) -> Result<PartitionSmoother, ConfigError> {
    match s {
        "ls" | "least-squares" => Ok(PartitionSmoother::ProjectionLeastSquares),
        "bin-left" => Ok(PartitionSmoother::BinMeans(NodeRule::LeftBreakpoint)),
        "bin-mid" => Ok(PartitionSmoother::BinMeans(NodeRule::Midpoint)),
        _ => bad(format!("unknown smoother {s:?} (expected ls, bin-left or bin-mid)")),
    }
}

pub fn parse_algorithm(s: &str, partitions: usize, smoother: PartitionSmoother) -> Result<Algorithm, ConfigError> {
    match s {
        "auto" => Ok(Algorithm::Auto {
            partitions,
            smoother,
        }),
        "I" | "i" | "1" => Ok(Algorithm::One),
        "II" | "ii" | "2" => Ok(Algorithm::Two {
            partitions,
            smoother,
        }),
        _ => bad(format!("unknown algorithm {s:?} (expected auto, I or II)")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_and_lists() {
        assert_eq!(parse_count("N=32"), Ok(32));
        assert_eq!(parse_count("1024"), Ok(1024));
        assert!(parse_count("x").is_err());
        assert_eq!(parse_list("1;3,5").unwrap(), [1, 3, 5]);
        assert_eq!(parse_seeds("1..4").unwrap(), [1, 2, 3, 4]);
        assert_eq!(parse_seeds("7,9").unwrap(), [7, 9]);
        assert!(parse_seeds("5..1").is_err());
    }

    #[test]
    fn descriptors() {
        assert_eq!(parse_descriptor("grid:6", 0).unwrap(), PointSetSpec::Grid { n: 6 });
        assert_eq!(
            parse_descriptor("korobov:1024:5", 0).unwrap(),
            PointSetSpec::Korobov {
                n_points: 1024,
                alpha: Some(5)
            }
        );
        assert_eq!(
            parse_descriptor("random:100", 9).unwrap(),
            PointSetSpec::Random {
                n_points: 100,
                seed: 9
            }
        );
        assert_eq!(
            parse_descriptor("rank1:8:1;3", 0).unwrap(),
            PointSetSpec::Rank1 {
                n_points: 8,
                z: vec![1, 3]
            }
        );
        assert!(parse_descriptor("sobol:8", 0).is_err());
        let p = parse_pair("8/korobov:4096", 0).unwrap();
        assert_eq!(p.grid, 8);
    }
}
