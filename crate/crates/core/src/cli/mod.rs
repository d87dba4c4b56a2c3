//! Command-line front end: flag parsing, config layering, and the run
//! artifacts (CSV tables, PGM rasters, JSON reports, manifest).
//!
//! Settings are resolved as built-in defaults, then a config file (or the
//! config stored in a manifest), then command-line flags.

pub mod commands;
pub mod config;
pub mod output;

use std::io::Write;
use std::path::PathBuf;

use clap::Parser;

pub use commands::{parse_observable, run, Manifest, RunOutcome, MANIFEST_FILE};
pub use config::{Command, FamilyKind, RunConfig, UlamMethod, UlamSpace};
pub use output::{read_sweep_csv, write_csv, write_pgm, write_sweep_csv, Field};

use crate::error::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NUMERICAL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "torus-srb", version, about = "SRB measures and central exponents of skew products on the 2-torus")]
pub struct Cli {
    /// What to run.
    #[arg(value_enum)]
    pub command: Option<Command>,

    /// Config file of `key = value` lines.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Rerun from a manifest.json written by an earlier run.
    #[arg(long, value_name = "FILE")]
    pub manifest: Option<PathBuf>,
    /// Print the resolved configuration and exit.
    #[arg(long)]
    pub show_config: bool,
    /// No progress line on stdout.
    #[arg(long, short)]
    pub quiet: bool,

    #[arg(long, value_enum)]
    pub family: Option<FamilyKind>,
    #[arg(long, allow_hyphen_values = true)]
    pub epsilon: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub m: Option<u32>,

    #[arg(long)]
    pub burn_in: Option<u64>,
    #[arg(long)]
    pub length: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,

    #[arg(long)]
    pub nx: Option<usize>,
    #[arg(long)]
    pub ny: Option<usize>,
    /// Cells of the circle grid.
    #[arg(long)]
    pub cells: Option<usize>,
    #[arg(long)]
    pub samples_per_cell: Option<usize>,

    #[arg(long, allow_hyphen_values = true)]
    pub a_lo: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub a_hi: Option<f64>,
    #[arg(long)]
    pub step: Option<f64>,

    #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_hyphen_values = true)]
    pub bracket: Option<Vec<f64>>,
    #[arg(long)]
    pub resolution: Option<f64>,

    /// Ulam grid on the torus or on the fiber circle.
    #[arg(long, value_enum)]
    pub space: Option<UlamSpace>,
    #[arg(long, value_enum)]
    pub method: Option<UlamMethod>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub max_iter: Option<usize>,

    /// Comma-separated finite-difference steps.
    #[arg(long)]
    pub steps: Option<String>,
    /// sin2piy, cos2piy, sin2pix, one, or band:LO:HI.
    #[arg(long)]
    pub observable: Option<String>,

    /// Comma-separated base multipliers for the cone count.
    #[arg(long)]
    pub ms: Option<String>,
    #[arg(long)]
    pub cone_grid: Option<usize>,

    #[arg(long)]
    pub phi_grid: Option<usize>,
    #[arg(long)]
    pub trap_grid: Option<usize>,

    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Also write the Ulam matrix as ulam.bin.
    #[arg(long)]
    pub dump_matrix: bool,
    /// Also write sweep.dat for gnuplot.
    #[arg(long)]
    pub gnuplot: bool,
}

impl Cli {
    /// Flags given on the command line, as config `(key, value)` pairs.
    pub fn overrides(&self) -> Vec<(&'static str, String)> {
        let mut v: Vec<(&'static str, String)> = Vec::new();
        macro_rules! put {
            ($key:literal, $field:expr) => {
                if let Some(x) = &$field {
                    v.push(($key, x.to_string()));
                }
            };
        }
        if let Some(c) = self.command {
            v.push(("command", c.name().to_string()));
        }
        if let Some(f) = self.family {
            v.push(("family", format!("{f:?}").to_lowercase()));
        }
        put!("params.epsilon", self.epsilon);
        put!("params.a", self.a);
        put!("params.delta", self.delta);
        put!("params.m", self.m);
        put!("orbit.burn_in", self.burn_in);
        put!("orbit.length", self.length);
        put!("orbit.seed", self.seed);
        put!("grid.nx", self.nx);
        put!("grid.ny", self.ny);
        put!("grid.cells", self.cells);
        put!("grid.samples_per_cell", self.samples_per_cell);
        put!("sweep.a_lo", self.a_lo);
        put!("sweep.a_hi", self.a_hi);
        put!("sweep.step", self.step);
        if let Some(b) = &self.bracket {
            v.push(("bisect.lo", b[0].to_string()));
            v.push(("bisect.hi", b[1].to_string()));
        }
        put!("bisect.resolution", self.resolution);
        if let Some(s) = self.space {
            v.push(("ulam.space", format!("{s:?}").to_lowercase()));
        }
        if let Some(m) = self.method {
            v.push(("ulam.method", format!("{m:?}").to_lowercase()));
        }
        put!("ulam.tol", self.tol);
        put!("ulam.max_iter", self.max_iter);
        put!("smooth.steps", self.steps);
        put!("smooth.observable", self.observable);
        put!("cones.ms", self.ms);
        put!("cones.grid", self.cone_grid);
        put!("check.phi_grid", self.phi_grid);
        put!("check.trap_grid", self.trap_grid);
        if let Some(d) = &self.out {
            v.push(("output.dir", d.display().to_string()));
        }
        put!("output.gamma", self.gamma);
        if self.dump_matrix {
            v.push(("output.dump_matrix", "true".into()));
        }
        if self.gnuplot {
            v.push(("output.gnuplot", "true".into()));
        }
        v
    }

    /// Defaults, then the manifest or config file, then flags.
    pub fn resolve(&self) -> Result<RunConfig> {
        let mut cfg = match &self.manifest {
            Some(path) => Manifest::read(path)?.config,
            None => RunConfig::default(),
        };
        let mut has_command = self.command.is_some() || self.manifest.is_some() || self.show_config;
        if let Some(path) = &self.config {
            has_command |= cfg.apply_file(path)?.iter().any(|k| k == "command");
        }
        for (key, value) in self.overrides() {
            cfg.set(key, &value)?;
        }
        if !has_command {
            return Err(Error::Config(
                "no command given (sweep, bisect, orbit, ulam, phi-check, cones, trap-check, smooth)".into(),
            ));
        }
        Ok(cfg)
    }
}

/// Parses `args`, runs, and returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let cfg = match cli.resolve() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("torus-srb: {e}");
            return EXIT_CONFIG;
        }
    };
    if cli.show_config {
        print!("{}", cfg.to_text());
        return EXIT_OK;
    }
    match run(&cfg) {
        Ok(outcome) => {
            for w in &outcome.warnings {
                eprintln!("torus-srb: warning: {w}");
            }
            if !cli.quiet {
                println!(
                    "{}: wrote {} in {}",
                    cfg.command.name(),
                    outcome.outputs.join(", "),
                    cfg.output.dir.display()
                );
                let _ = std::io::stdout().flush();
            }
            EXIT_OK
        }
        Err(e) => {
            eprintln!("torus-srb: {e}");
            if e.is_config() {
                EXIT_CONFIG
            } else {
                EXIT_NUMERICAL
            }
        }
    }
}
