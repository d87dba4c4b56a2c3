use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::bifurcation::SmoothGrid;
use crate::dynamics::{OrbitSpec, DEFAULT_BURN_IN, DEFAULT_LENGTH};
use crate::error::{Error, Result};
use crate::maps::Family;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
#[value(rename_all = "kebab-case")]
pub enum Command {
    Sweep,
    Bisect,
    Orbit,
    Ulam,
    PhiCheck,
    Cones,
    TrapCheck,
    Smooth,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Sweep => "sweep",
            Command::Bisect => "bisect",
            Command::Orbit => "orbit",
            Command::Ulam => "ulam",
            Command::PhiCheck => "phi-check",
            Command::Cones => "cones",
            Command::TrapCheck => "trap-check",
            Command::Smooth => "smooth",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    Theoretical,
    Experimental,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum UlamSpace {
    Torus,
    Circle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum UlamMethod {
    Sampled,
    Exact,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub epsilon: f64,
    pub a: f64,
    pub delta: f64,
    pub m: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitConfig {
    pub burn_in: u64,
    pub length: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    pub nx: usize,
    pub ny: usize,
    pub cells: usize,
    pub samples_per_cell: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub a_lo: f64,
    pub a_hi: f64,
    pub step: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BisectConfig {
    pub lo: f64,
    pub hi: f64,
    pub resolution: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UlamConfig {
    pub space: UlamSpace,
    pub method: UlamMethod,
    pub tol: f64,
    pub max_iter: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmoothConfig {
    pub steps: Vec<f64>,
    pub observable: String,
    pub nx: usize,
    pub ny: usize,
    pub strata: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConesConfig {
    pub ms: Vec<u32>,
    pub grid: usize,
    pub calibration_grid: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckConfig {
    pub phi_grid: usize,
    pub trap_grid: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputConfig {
    pub dir: PathBuf,
    pub gamma: f64,
    pub dump_matrix: bool,
    pub gnuplot: bool,
}

/// Everything a run depends on. Field order is the manifest key order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub family: FamilyKind,
    pub params: Params,
    pub orbit: OrbitConfig,
    pub grid: GridConfig,
    pub sweep: SweepConfig,
    pub bisect: BisectConfig,
    pub ulam: UlamConfig,
    pub smooth: SmoothConfig,
    pub cones: ConesConfig,
    pub check: CheckConfig,
    pub output: OutputConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            command: Command::Sweep,
            family: FamilyKind::Experimental,
            params: Params {
                epsilon: 0.01,
                a: -0.02,
                delta: 0.01,
                m: 7,
            },
            orbit: OrbitConfig {
                burn_in: DEFAULT_BURN_IN,
                length: DEFAULT_LENGTH,
                seed: 1,
            },
            grid: GridConfig {
                nx: 256,
                ny: 256,
                cells: 1 << 12,
                samples_per_cell: 64,
            },
            sweep: SweepConfig {
                a_lo: -0.02,
                a_hi: 0.02,
                step: 1e-3,
            },
            bisect: BisectConfig {
                lo: -0.004,
                hi: 0.004,
                resolution: 1e-4,
            },
            ulam: UlamConfig {
                space: UlamSpace::Torus,
                method: UlamMethod::Sampled,
                tol: 1e-12,
                max_iter: 20_000,
            },
            smooth: SmoothConfig {
                steps: vec![4e-4, 2e-4, 1e-4],
                observable: "sin2piy".into(),
                nx: 128,
                ny: 128,
                strata: 64,
            },
            cones: ConesConfig {
                ms: vec![7, 17, 37, 77],
                grid: 256,
                calibration_grid: 100_000,
            },
            check: CheckConfig {
                phi_grid: 100_000,
                trap_grid: 1_000,
            },
            output: OutputConfig {
                dir: PathBuf::from("out"),
                gamma: 0.5,
                dump_matrix: false,
                gnuplot: false,
            },
        }
    }
}

/// Keys accepted in config files, in display order.
pub const KEYS: &[&str] = &[
    "command",
    "family",
    "params.epsilon",
    "params.a",
    "params.delta",
    "params.m",
    "orbit.burn_in",
    "orbit.length",
    "orbit.seed",
    "grid.nx",
    "grid.ny",
    "grid.cells",
    "grid.samples_per_cell",
    "sweep.a_lo",
    "sweep.a_hi",
    "sweep.step",
    "bisect.lo",
    "bisect.hi",
    "bisect.resolution",
    "ulam.space",
    "ulam.method",
    "ulam.tol",
    "ulam.max_iter",
    "smooth.steps",
    "smooth.observable",
    "smooth.nx",
    "smooth.ny",
    "smooth.strata",
    "cones.ms",
    "cones.grid",
    "cones.calibration_grid",
    "check.phi_grid",
    "check.trap_grid",
    "output.dir",
    "output.gamma",
    "output.dump_matrix",
    "output.gnuplot",
];

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("{key}: cannot parse '{value}'")))
}

fn parse_enum<T: ValueEnum>(key: &str, value: &str) -> Result<T> {
    T::from_str(value, false).map_err(|_| Error::Config(format!("{key}: unknown value '{value}'")))
}

fn parse_list<T: std::str::FromStr>(key: &str, value: &str) -> Result<Vec<T>> {
    value
        .split(',')
        .map(|s| parse(key, s.trim()))
        .collect::<Result<Vec<T>>>()
}

fn enum_name<T: ValueEnum>(v: &T) -> String {
    v.to_possible_value().expect("no skipped variants").get_name().to_string()
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

impl RunConfig {
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value;
        match key {
            "command" => self.command = parse_enum(key, v)?,
            "family" => self.family = parse_enum(key, v)?,
            "params.epsilon" => self.params.epsilon = parse(key, v)?,
            "params.a" => self.params.a = parse(key, v)?,
            "params.delta" => self.params.delta = parse(key, v)?,
            "params.m" => self.params.m = parse(key, v)?,
            "orbit.burn_in" => self.orbit.burn_in = parse(key, v)?,
            "orbit.length" => self.orbit.length = parse(key, v)?,
            "orbit.seed" => self.orbit.seed = parse(key, v)?,
            "grid.nx" => self.grid.nx = parse(key, v)?,
            "grid.ny" => self.grid.ny = parse(key, v)?,
            "grid.cells" => self.grid.cells = parse(key, v)?,
            "grid.samples_per_cell" => self.grid.samples_per_cell = parse(key, v)?,
            "sweep.a_lo" => self.sweep.a_lo = parse(key, v)?,
            "sweep.a_hi" => self.sweep.a_hi = parse(key, v)?,
            "sweep.step" => self.sweep.step = parse(key, v)?,
            "bisect.lo" => self.bisect.lo = parse(key, v)?,
            "bisect.hi" => self.bisect.hi = parse(key, v)?,
            "bisect.resolution" => self.bisect.resolution = parse(key, v)?,
            "ulam.space" => self.ulam.space = parse_enum(key, v)?,
            "ulam.method" => self.ulam.method = parse_enum(key, v)?,
            "ulam.tol" => self.ulam.tol = parse(key, v)?,
            "ulam.max_iter" => self.ulam.max_iter = parse(key, v)?,
            "smooth.steps" => self.smooth.steps = parse_list(key, v)?,
            "smooth.observable" => self.smooth.observable = v.to_string(),
            "smooth.nx" => self.smooth.nx = parse(key, v)?,
            "smooth.ny" => self.smooth.ny = parse(key, v)?,
            "smooth.strata" => self.smooth.strata = parse(key, v)?,
            "cones.ms" => self.cones.ms = parse_list(key, v)?,
            "cones.grid" => self.cones.grid = parse(key, v)?,
            "cones.calibration_grid" => self.cones.calibration_grid = parse(key, v)?,
            "check.phi_grid" => self.check.phi_grid = parse(key, v)?,
            "check.trap_grid" => self.check.trap_grid = parse(key, v)?,
            "output.dir" => self.output.dir = PathBuf::from(v),
            "output.gamma" => self.output.gamma = parse(key, v)?,
            "output.dump_matrix" => self.output.dump_matrix = parse(key, v)?,
            "output.gnuplot" => self.output.gnuplot = parse(key, v)?,
            _ => return Err(Error::Config(format!("unknown key '{key}'"))),
        }
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<String> {
        Some(match key {
            "command" => self.command.name().to_string(),
            "family" => enum_name(&self.family),
            "params.epsilon" => self.params.epsilon.to_string(),
            "params.a" => self.params.a.to_string(),
            "params.delta" => self.params.delta.to_string(),
            "params.m" => self.params.m.to_string(),
            "orbit.burn_in" => self.orbit.burn_in.to_string(),
            "orbit.length" => self.orbit.length.to_string(),
            "orbit.seed" => self.orbit.seed.to_string(),
            "grid.nx" => self.grid.nx.to_string(),
            "grid.ny" => self.grid.ny.to_string(),
            "grid.cells" => self.grid.cells.to_string(),
            "grid.samples_per_cell" => self.grid.samples_per_cell.to_string(),
            "sweep.a_lo" => self.sweep.a_lo.to_string(),
            "sweep.a_hi" => self.sweep.a_hi.to_string(),
            "sweep.step" => self.sweep.step.to_string(),
            "bisect.lo" => self.bisect.lo.to_string(),
            "bisect.hi" => self.bisect.hi.to_string(),
            "bisect.resolution" => self.bisect.resolution.to_string(),
            "ulam.space" => enum_name(&self.ulam.space),
            "ulam.method" => enum_name(&self.ulam.method),
            "ulam.tol" => self.ulam.tol.to_string(),
            "ulam.max_iter" => self.ulam.max_iter.to_string(),
            "smooth.steps" => join(&self.smooth.steps),
            "smooth.observable" => self.smooth.observable.clone(),
            "smooth.nx" => self.smooth.nx.to_string(),
            "smooth.ny" => self.smooth.ny.to_string(),
            "smooth.strata" => self.smooth.strata.to_string(),
            "cones.ms" => join(&self.cones.ms),
            "cones.grid" => self.cones.grid.to_string(),
            "cones.calibration_grid" => self.cones.calibration_grid.to_string(),
            "check.phi_grid" => self.check.phi_grid.to_string(),
            "check.trap_grid" => self.check.trap_grid.to_string(),
            "output.dir" => self.output.dir.display().to_string(),
            "output.gamma" => self.output.gamma.to_string(),
            "output.dump_matrix" => self.output.dump_matrix.to_string(),
            "output.gnuplot" => self.output.gnuplot.to_string(),
            _ => return None,
        })
    }

    /// Applies `key = value` lines and returns the keys set. `#` starts a
    /// comment; blank lines are skipped.
    pub fn apply_text(&mut self, text: &str, origin: &str) -> Result<Vec<String>> {
        let mut keys = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("{origin}:{}: expected 'key = value'", n + 1)))?;
            self.set(key.trim(), value.trim())
                .map_err(|e| Error::Config(format!("{origin}:{}: {e}", n + 1)))?;
            keys.push(key.trim().to_string());
        }
        Ok(keys)
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<Vec<String>> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        self.apply_text(&text, &path.display().to_string())
    }

    /// The config in file grammar; feeding it back through
    /// [`apply_text`](Self::apply_text) reproduces `self`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for key in KEYS {
            let _ = writeln!(out, "{key} = {}", self.get(key).expect("listed key"));
        }
        out
    }

    pub fn family(&self) -> Family {
        match self.family {
            FamilyKind::Theoretical => Family::Theoretical {
                epsilon: self.params.epsilon,
                delta: self.params.delta,
                m: self.params.m,
            },
            FamilyKind::Experimental => Family::Experimental {
                delta: self.params.delta,
                m: self.params.m,
            },
        }
    }

    pub fn orbit_spec(&self) -> OrbitSpec {
        OrbitSpec::random(self.orbit.seed)
            .with_burn_in(self.orbit.burn_in)
            .with_length(self.orbit.length)
    }

    pub fn smooth_grid(&self) -> SmoothGrid {
        SmoothGrid {
            nx: self.smooth.nx,
            ny: self.smooth.ny,
            strata: self.smooth.strata,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_the_experiment() {
        let c = RunConfig::default();
        assert_eq!(c.params.m, 7);
        assert_eq!(c.params.delta, 0.01);
        assert_eq!(c.orbit.length, 1_000_000);
        assert_eq!(c.orbit.burn_in, 1_000);
    }

    #[test]
    fn text_round_trip() {
        let mut c = RunConfig::default();
        c.set("command", "trap-check").unwrap();
        c.set("smooth.steps", "1e-3, 5e-4").unwrap();
        c.set("params.a", "-0.1").unwrap();
        let mut d = RunConfig::default();
        d.apply_text(&c.to_text(), "test").unwrap();
        assert_eq!(c, d);
        assert_eq!(d.smooth.steps, vec![1e-3, 5e-4]);
    }

    #[test]
    fn comments_and_errors() {
        let mut c = RunConfig::default();
        c.apply_text("# header\norbit.length = 5000 # short\n\n", "t").unwrap();
        assert_eq!(c.orbit.length, 5000);
        assert!(matches!(c.apply_text("bogus = 1", "t"), Err(Error::Config(_))));
        assert!(matches!(c.apply_text("orbit.length = many", "t"), Err(Error::Config(_))));
        assert!(matches!(c.apply_text("no equals sign", "t"), Err(Error::Config(_))));
    }

    #[test]
    fn every_key_is_settable() {
        let c = RunConfig::default();
        let mut d = RunConfig::default();
        for key in KEYS {
            d.set(key, &c.get(key).unwrap()).unwrap();
        }
        assert_eq!(c, d);
    }
}
