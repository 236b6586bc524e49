//! Validated run configuration.

use bilinear_bsc::field::MatVertex;
use bilinear_bsc::local::{canonical_pair, distance, random_pair};
use bilinear_bsc::params::GraphParams;
use bilinear_bsc::{Error, Result};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum PairMode {
    Canonical,
    Random,
    Explicit,
}

/// Everything that determines report contents. Thread count and cache
/// location are deliberately absent so reports do not depend on them.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub q: u32,
    #[serde(rename = "D")]
    pub d: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub k: usize,
    pub pair: PairMode,
    pub x: String,
    pub y: String,
    pub seed: u64,
    /// Selected check names; empty means all.
    pub checks: Vec<String>,
    pub heavy: bool,
    pub n_max_words: usize,
    #[serde(skip)]
    pub params: GraphParams,
    #[serde(skip)]
    pub pair_vertices: (MatVertex, MatVertex),
}

pub struct RawConfig {
    pub q: u32,
    pub d: usize,
    pub n: usize,
    pub k: usize,
    pub pair: PairMode,
    pub x: Option<String>,
    pub y: Option<String>,
    pub seed: u64,
    pub checks: Vec<String>,
    pub heavy: bool,
    pub n_max_words: usize,
}

fn parse_vertex(p: &GraphParams, s: &str) -> Result<MatVertex> {
    let m: MatVertex = s.parse()?;
    if m.shape() != (p.rows(), p.cols()) {
        return Err(Error::InvalidParams(format!(
            "{s:?} is {}x{}, expected {}x{}",
            m.rows(),
            m.cols(),
            p.rows(),
            p.cols()
        )));
    }
    MatVertex::from_entries(p.rows(), p.cols(), m.entries(), p.field())
}

impl RunConfig {
    /// Checks every constraint before any work is done.
    pub fn validate(raw: RawConfig) -> Result<Self> {
        let params = GraphParams::new(raw.q, raw.d, raw.n)?;
        params.check_distance(raw.k)?;
        if raw.n_max_words == 0 {
            return Err(Error::InvalidParams(
                "--n-max-words must be at least 1".into(),
            ));
        }
        let (x, y) = match raw.pair {
            PairMode::Canonical => canonical_pair(&params, raw.k)?,
            PairMode::Random => random_pair(&params, raw.k, raw.seed)?,
            PairMode::Explicit => {
                let (Some(xs), Some(ys)) = (raw.x.as_deref(), raw.y.as_deref()) else {
                    return Err(Error::InvalidParams(
                        "--pair explicit needs --x and --y".into(),
                    ));
                };
                let (x, y) = (parse_vertex(&params, xs)?, parse_vertex(&params, ys)?);
                let dist = distance(&params, &x, &y)?;
                if dist != raw.k {
                    return Err(Error::InvalidParams(format!(
                        "the given pair is at distance {dist}, not k = {}",
                        raw.k
                    )));
                }
                (x, y)
            }
        };
        Ok(Self {
            q: raw.q,
            d: raw.d,
            n: raw.n,
            k: raw.k,
            pair: raw.pair,
            x: x.to_string(),
            y: y.to_string(),
            seed: raw.seed,
            checks: raw.checks,
            heavy: raw.heavy,
            n_max_words: raw.n_max_words,
            params,
            pair_vertices: (x, y),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(k: usize, pair: PairMode) -> RawConfig {
        RawConfig {
            q: 3,
            d: 3,
            n: 7,
            k,
            pair,
            x: None,
            y: None,
            seed: 5,
            checks: vec![],
            heavy: false,
            n_max_words: 10,
        }
    }

    #[test]
    fn pairs_sit_at_distance_k() {
        for mode in [PairMode::Canonical, PairMode::Random] {
            let cfg = RunConfig::validate(raw(2, mode)).unwrap();
            let (x, y) = &cfg.pair_vertices;
            assert_eq!(distance(&cfg.params, x, y).unwrap(), 2);
        }
    }

    #[test]
    fn explicit_pair_round_trips() {
        let mut r = raw(2, PairMode::Explicit);
        r.x = Some("0000;0000;0000".into());
        r.y = Some("1000;0100;0000".into());
        let cfg = RunConfig::validate(r).unwrap();
        assert_eq!(cfg.y, "1000;0100;0000");
    }

    #[test]
    fn rejects_out_of_range_k() {
        assert!(RunConfig::validate(raw(3, PairMode::Canonical)).is_err());
        assert!(RunConfig::validate(raw(1, PairMode::Canonical)).is_err());
    }
}
