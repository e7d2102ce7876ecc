//! Flat `key = value` job configuration.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use qwvd_core::io::{HeatmapFormat, HeatmapMode};
use qwvd_core::signals::GeneratorKind;
use qwvd_core::verify::{is_check_id, Suite};
use qwvd_core::{OffsetParams, PureUnitAxis, Quaternion};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Generate,
    Transform,
    Wvd,
    Verify,
    Bench,
}

impl FromStr for Command {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "generate" => Self::Generate,
            "transform" => Self::Transform,
            "wvd" => Self::Wvd,
            "verify" => Self::Verify,
            "bench" => Self::Bench,
            other => bail!("unknown command `{other}`"),
        })
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Generate => "generate",
            Self::Transform => "transform",
            Self::Wvd => "wvd",
            Self::Verify => "verify",
            Self::Bench => "bench",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct JobConfig {
    pub command: Command,
    pub input: Option<PathBuf>,
    pub window: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub p1: OffsetParams,
    pub p2: OffsetParams,
    pub left_axis: PureUnitAxis,
    pub right_axis: PureUnitAxis,
    pub n: usize,
    pub extent: f64,
    pub kind: GeneratorKind,
    pub sigma: f64,
    pub center: (f64, f64),
    pub rate: f64,
    pub amplitude: Quaternion,
    pub fast: bool,
    pub inverse: bool,
    pub refined: bool,
    pub heatmap: Option<PathBuf>,
    pub heatmap_mode: HeatmapMode,
    pub heatmap_format: HeatmapFormat,
    pub suite: Suite,
    pub k: usize,
    pub seeds: usize,
    pub use_oracle: bool,
    pub deterministic: bool,
    pub sizes: Vec<usize>,
    pub tolerances: BTreeMap<String, f64>,
}

impl JobConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            input: None,
            window: None,
            output: None,
            p1: OffsetParams::fourier(),
            p2: OffsetParams::fourier(),
            left_axis: PureUnitAxis::I,
            right_axis: PureUnitAxis::J,
            n: 64,
            extent: 6.0,
            kind: GeneratorKind::Gaussian,
            sigma: 1.0,
            center: (0.0, 0.0),
            rate: 0.5,
            amplitude: Quaternion::ONE,
            fast: false,
            inverse: false,
            refined: false,
            heatmap: None,
            heatmap_mode: HeatmapMode::Modulus,
            heatmap_format: HeatmapFormat::Pgm,
            suite: Suite::All,
            k: 6,
            seeds: 10,
            use_oracle: false,
            deterministic: false,
            sizes: vec![8, 16],
            tolerances: BTreeMap::new(),
        }
    }

    /// Reads `key = value` lines; `#` starts a comment.
    pub fn parse_text(text: &str) -> Result<Vec<(String, String)>> {
        let mut pairs = Vec::new();
        for (no, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| anyhow!("line {}: expected `key = value`", no + 1))?;
            pairs.push((k.trim().to_string(), v.trim().to_string()));
        }
        Ok(pairs)
    }

    /// Builds a config from ordered pairs; later keys win. A `command` key
    /// is required unless `default_command` is given.
    pub fn from_pairs(pairs: &[(String, String)], default_command: Option<Command>) -> Result<Self> {
        let command = match pairs.iter().rev().find(|(k, _)| k == "command") {
            Some((_, v)) => v.parse()?,
            None => default_command.ok_or_else(|| anyhow!("missing `command` key"))?,
        };
        let mut cfg = Self::new(command);
        for (k, v) in pairs {
            cfg.set(k, v).with_context(|| format!("config key `{k}`"))?;
        }
        Ok(cfg)
    }

    #[cfg(test)]
    pub fn parse(text: &str) -> Result<Self> {
        Self::from_pairs(&Self::parse_text(text)?, None)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let path = || (!value.is_empty()).then(|| PathBuf::from(value));
        match key {
            "command" => self.command = value.parse()?,
            "input" => self.input = path(),
            "window" => self.window = path(),
            "output" => self.output = path(),
            "p1" => self.p1 = OffsetParams::parse(value)?,
            "p2" => self.p2 = OffsetParams::parse(value)?,
            "left_axis" => self.left_axis = parse_axis(value)?,
            "right_axis" => self.right_axis = parse_axis(value)?,
            "n" => self.n = value.parse()?,
            "extent" => self.extent = value.parse()?,
            "kind" => self.kind = value.parse()?,
            "sigma" => self.sigma = value.parse()?,
            "center" => {
                let v = floats(value, 2)?;
                self.center = (v[0], v[1]);
            }
            "rate" => self.rate = value.parse()?,
            "amplitude" => self.amplitude = Quaternion::from_array(floats(value, 4)?.try_into().expect("length checked")),
            "fast" => self.fast = parse_bool(value)?,
            "inverse" => self.inverse = parse_bool(value)?,
            "refined" => self.refined = parse_bool(value)?,
            "heatmap" => self.heatmap = path(),
            "heatmap_mode" => self.heatmap_mode = HeatmapMode::parse(value)?,
            "heatmap_format" => {
                self.heatmap_format = match value {
                    "pgm" => HeatmapFormat::Pgm,
                    "csv" => HeatmapFormat::Csv,
                    other => bail!("heatmap format must be `pgm` or `csv`, got `{other}`"),
                }
            }
            "suite" => self.suite = value.parse()?,
            "k" => self.k = value.parse()?,
            "seeds" => self.seeds = value.parse()?,
            "use_oracle" => self.use_oracle = parse_bool(value)?,
            "deterministic" => self.deterministic = parse_bool(value)?,
            "sizes" => {
                self.sizes = value.split(',').map(str::trim).filter(|s| !s.is_empty()).map(|s| s.parse()).collect::<std::result::Result<_, _>>()?
            }
            _ => match key.strip_prefix("tol.") {
                Some(id) if is_check_id(id) => {
                    self.tolerances.insert(id.to_string(), value.parse()?);
                }
                Some(id) => bail!("unknown check `{id}`"),
                None => bail!("unknown key"),
            },
        }
        Ok(())
    }

    /// Every key in a fixed order; [`JobConfig::parse`] reads it back unchanged.
    pub fn serialize(&self) -> String {
        let mut out = Vec::new();
        let mut put = |k: &str, v: String| out.push(format!("{k} = {v}"));
        let opt = |p: &Option<PathBuf>| p.as_ref().map(|p| p.display().to_string()).unwrap_or_default();
        put("command", self.command.to_string());
        put("input", opt(&self.input));
        put("window", opt(&self.window));
        put("output", opt(&self.output));
        put("p1", self.p1.serialize());
        put("p2", self.p2.serialize());
        put("left_axis", axis_text(self.left_axis));
        put("right_axis", axis_text(self.right_axis));
        put("n", self.n.to_string());
        put("extent", format!("{:?}", self.extent));
        put("kind", self.kind.to_string());
        put("sigma", format!("{:?}", self.sigma));
        put("center", format!("{:?} {:?}", self.center.0, self.center.1));
        put("rate", format!("{:?}", self.rate));
        put("amplitude", self.amplitude.to_array().iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(" "));
        put("fast", self.fast.to_string());
        put("inverse", self.inverse.to_string());
        put("refined", self.refined.to_string());
        put("heatmap", opt(&self.heatmap));
        put(
            "heatmap_mode",
            match self.heatmap_mode {
                HeatmapMode::Modulus => "modulus".into(),
                HeatmapMode::Component(m) => m.to_string(),
            },
        );
        put(
            "heatmap_format",
            match self.heatmap_format {
                HeatmapFormat::Pgm => "pgm".into(),
                HeatmapFormat::Csv => "csv".into(),
            },
        );
        put("suite", self.suite.to_string());
        put("k", self.k.to_string());
        put("seeds", self.seeds.to_string());
        put("use_oracle", self.use_oracle.to_string());
        put("deterministic", self.deterministic.to_string());
        put("sizes", self.sizes.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(","));
        for (id, tol) in &self.tolerances {
            put(&format!("tol.{id}"), format!("{tol:?}"));
        }
        out.join("\n") + "\n"
    }
}

fn parse_bool(s: &str) -> Result<bool> {
    match s {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        other => bail!("expected a boolean, got `{other}`"),
    }
}

fn floats(s: &str, n: usize) -> Result<Vec<f64>> {
    let v: Vec<f64> = s.split_whitespace().map(str::parse).collect::<std::result::Result<_, _>>()?;
    if v.len() != n {
        bail!("expected {n} numbers, got {}", v.len());
    }
    Ok(v)
}

/// `i`, `j`, `k` or three direction components `x y z`.
pub fn parse_axis(s: &str) -> Result<PureUnitAxis> {
    Ok(match s {
        "i" => PureUnitAxis::I,
        "j" => PureUnitAxis::J,
        "k" => PureUnitAxis::K,
        _ => {
            let v = floats(s, 3)?;
            // already-unit directions are kept bit-exact
            PureUnitAxis::new(Quaternion::new(0.0, v[0], v[1], v[2])).or_else(|_| PureUnitAxis::from_vector(v[0], v[1], v[2]))?
        }
    })
}

fn axis_text(a: PureUnitAxis) -> String {
    let d = a.direction();
    match (d.q1, d.q2, d.q3) {
        (x, y, z) if x == 1.0 && y == 0.0 && z == 0.0 => "i".into(),
        (x, y, z) if x == 0.0 && y == 1.0 && z == 0.0 => "j".into(),
        (x, y, z) if x == 0.0 && y == 0.0 && z == 1.0 => "k".into(),
        (x, y, z) => format!("{x:?} {y:?} {z:?}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn defaults_round_trip() {
        for c in ["generate", "transform", "wvd", "verify", "bench"] {
            let cfg = JobConfig::new(c.parse().unwrap());
            assert_eq!(JobConfig::parse(&cfg.serialize()).unwrap(), cfg);
        }
    }

    #[test]
    fn rejects_unknown_keys_and_bad_params() {
        assert!(JobConfig::parse("command = verify\ncolour = red\n").is_err());
        assert!(JobConfig::parse("command = transform\np1 = 1 1 1 1 0 0\n").is_err());
        assert!(JobConfig::parse("command = verify\ntol.qft.bogus = 1\n").is_err());
        assert!(JobConfig::parse("p1 = 0 1 -1 0 0 0\n").is_err());
        assert!(JobConfig::parse("command = launch\n").is_err());
    }

    #[test]
    fn comments_overrides_and_lists() {
        let text = "# job\ncommand = bench\nsizes = 8, 16 ,32 # three\nsizes = 4\n";
        let cfg = JobConfig::parse(text).unwrap();
        assert_eq!(cfg.sizes, vec![4]);
        let cfg = JobConfig::parse("command = bench\nsizes =\n").unwrap();
        assert!(cfg.sizes.is_empty());
    }

    #[test]
    fn axes_parse() {
        assert_eq!(parse_axis("k").unwrap(), PureUnitAxis::K);
        let a = parse_axis("0 3 4").unwrap();
        assert!((a.direction().q2 - 0.6).abs() < 1e-15);
        assert!(parse_axis("0 0 0").is_err());
    }

    fn unimodular() -> impl Strategy<Value = OffsetParams> {
        (0.2f64..3.0, -2.0f64..2.0, -2.0f64..2.0, -1.0f64..1.0, -1.0f64..1.0)
            .prop_map(|(a, b, c, tau, eta)| OffsetParams::new(a, b, c, (1.0 + b * c) / a, tau, eta).unwrap())
    }

    proptest! {
        #[test]
        fn serialize_parse_round_trip(
            p1 in unimodular(),
            p2 in unimodular(),
            n in 1usize..300,
            extent in 0.1f64..50.0,
            center in (-5.0f64..5.0, -5.0f64..5.0),
            seeds in 0usize..100,
            sizes in proptest::collection::vec(1usize..64, 0..5),
            tol in proptest::option::of(1e-15f64..1.0),
            flags in proptest::array::uniform4(any::<bool>()),
            axis in (-1.0f64..1.0, -1.0f64..1.0, 0.1f64..1.0),
        ) {
            let mut cfg = JobConfig::new(Command::Wvd);
            cfg.p1 = p1;
            cfg.p2 = p2;
            cfg.n = n;
            cfg.extent = extent;
            cfg.center = center;
            cfg.seeds = seeds;
            cfg.sizes = sizes;
            cfg.fast = flags[0];
            cfg.refined = flags[1];
            cfg.use_oracle = flags[2];
            cfg.deterministic = flags[3];
            cfg.left_axis = PureUnitAxis::from_vector(axis.0, axis.1, axis.2).unwrap();
            cfg.input = Some(PathBuf::from("in put.qgrid"));
            if let Some(t) = tol {
                cfg.tolerances.insert("wvd.energy".into(), t);
            }
            prop_assert_eq!(JobConfig::parse(&cfg.serialize()).unwrap(), cfg);
        }
    }
}
