use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::config::{Command, FamilyKind, RunConfig, UlamMethod, UlamSpace};
use super::output::{write_csv, write_gnuplot, write_json, write_pgm, write_sweep_csv, Field};
use crate::bifurcation::{find_sign_change, smoothness_diagnostic, sweep};
use crate::cones::{min_cone_constant, transversality_measure, ConeParams};
use crate::dynamics::{check_trapping, orbit_raster};
use crate::error::{Error, Result};
use crate::maps::{validate_phi, BumpProfile, FiberMap};
use crate::transfer::{
    integrate_observable, stationary_density, ulam_1d, ulam_1d_exact, ulam_2d, ulam_2d_fiber_exact,
    SpectralReport, UlamGrid, UlamScheme, NEAR_CRITICAL_MAX_ITER,
};

pub const MANIFEST_FILE: &str = "manifest.json";
/// `|a + δ|` below which the theoretical family counts as near-critical.
pub const NEAR_CRITICAL_WIDTH: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub config: RunConfig,
    pub outputs: Vec<String>,
}

impl Manifest {
    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }
}

/// Files written by a run, relative to the output directory.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub outputs: Vec<String>,
    pub warnings: Vec<String>,
}

type Observable = Box<dyn Fn(f64, f64) -> f64 + Sync>;

/// `sin2piy`, `cos2piy`, `sin2pix`, `one`, or `band:lo:hi` (indicator of
/// `lo ≤ y < hi`).
pub fn parse_observable(name: &str) -> Result<Observable> {
    Ok(match name {
        "sin2piy" => Box::new(|_, y| (2.0 * PI * y).sin()),
        "cos2piy" => Box::new(|_, y| (2.0 * PI * y).cos()),
        "sin2pix" => Box::new(|x, _| (2.0 * PI * x).sin()),
        "one" => Box::new(|_, _| 1.0),
        _ => {
            let parts: Vec<&str> = name.split(':').collect();
            let bad = || Error::Config(format!("unknown observable '{name}'"));
            if parts.len() != 3 || parts[0] != "band" {
                return Err(bad());
            }
            let lo: f64 = parts[1].parse().map_err(|_| bad())?;
            let hi: f64 = parts[2].parse().map_err(|_| bad())?;
            Box::new(move |_, y| if (lo..hi).contains(&y) { 1.0 } else { 0.0 })
        }
    })
}

struct Ctx<'a> {
    cfg: &'a RunConfig,
    dir: PathBuf,
    outputs: Vec<String>,
    warnings: Vec<String>,
}

impl Ctx<'_> {
    fn path(&mut self, name: &str) -> PathBuf {
        self.outputs.push(name.to_string());
        self.dir.join(name)
    }
}

/// Runs one command and writes its artifacts plus `manifest.json` into the
/// output directory.
pub fn run(cfg: &RunConfig) -> Result<RunOutcome> {
    let dir = cfg.output.dir.clone();
    std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    let mut ctx = Ctx {
        cfg,
        dir,
        outputs: Vec::new(),
        warnings: Vec::new(),
    };
    match cfg.command {
        Command::Sweep => run_sweep(&mut ctx)?,
        Command::Bisect => run_bisect(&mut ctx)?,
        Command::Orbit => run_orbit(&mut ctx)?,
        Command::Ulam => run_ulam(&mut ctx)?,
        Command::PhiCheck => run_phi_check(&mut ctx)?,
        Command::Cones => run_cones(&mut ctx)?,
        Command::TrapCheck => run_trap_check(&mut ctx)?,
        Command::Smooth => run_smooth(&mut ctx)?,
    }
    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: cfg.clone(),
        outputs: ctx.outputs.clone(),
    };
    write_json(&manifest, &ctx.dir.join(MANIFEST_FILE))?;
    ctx.outputs.push(MANIFEST_FILE.to_string());
    Ok(RunOutcome {
        outputs: ctx.outputs,
        warnings: ctx.warnings,
    })
}

fn run_sweep(ctx: &mut Ctx) -> Result<()> {
    let c = ctx.cfg;
    let table = sweep(&c.family(), c.sweep.a_lo, c.sweep.a_hi, c.sweep.step, &c.orbit_spec())?;
    write_sweep_csv(&table, &ctx.path("sweep.csv"))?;
    if c.output.gnuplot {
        write_gnuplot(&table, &ctx.path("sweep.dat"))?;
    }
    Ok(())
}

fn run_bisect(ctx: &mut Ctx) -> Result<()> {
    let c = ctx.cfg;
    let sc = find_sign_change(&c.family(), (c.bisect.lo, c.bisect.hi), c.bisect.resolution, &c.orbit_spec())?;
    for a in &sc.noisy_midpoints {
        ctx.warnings.push(format!("noisy midpoint at a = {a}: seeds disagreed on the sign, redrawn once"));
    }
    write_json(&sc, &ctx.path("bisect.json"))
}

#[derive(Serialize)]
struct OrbitSummary {
    a: f64,
    points: u64,
    max_band_fraction_0_2: f64,
    nonempty_bands_32: usize,
    occupied_rows: usize,
}

fn run_orbit(ctx: &mut Ctx) -> Result<()> {
    let c = ctx.cfg;
    let raster = orbit_raster(&c.family().at(c.params.a)?, &c.orbit_spec(), c.grid.nx, c.grid.ny)?;
    write_pgm(&raster, &ctx.path("orbit.pgm"), c.output.gamma)?;
    let summary = OrbitSummary {
        a: c.params.a,
        points: raster.total(),
        max_band_fraction_0_2: raster.max_band_fraction(0.2),
        nonempty_bands_32: raster.nonempty_bands(32),
        occupied_rows: raster.nonzero_rows(),
    };
    write_json(&summary, &ctx.path("orbit.json"))
}

#[derive(Serialize)]
struct Integrals {
    log_fiber_deriv: f64,
    sin_2pi_y: f64,
}

#[derive(Serialize)]
struct UlamSummary<'a> {
    scheme: UlamScheme,
    grid: UlamGrid,
    nnz: usize,
    samples_per_cell: usize,
    seed: u64,
    slow_mixing: bool,
    report: &'a SpectralReport,
    integrals: Integrals,
}

fn run_ulam(ctx: &mut Ctx) -> Result<()> {
    let c = ctx.cfg;
    let family = c.family();
    let system = family.at(c.params.a)?;
    let g = &c.grid;
    let op = match (c.ulam.space, c.ulam.method) {
        (UlamSpace::Torus, UlamMethod::Sampled) => ulam_2d(&system, g.nx, g.ny, g.samples_per_cell, c.orbit.seed)?,
        (UlamSpace::Torus, UlamMethod::Exact) => ulam_2d_fiber_exact(&system, g.nx, g.ny, g.samples_per_cell)?,
        (UlamSpace::Circle, UlamMethod::Sampled) => ulam_1d(system.fiber(), g.cells, g.samples_per_cell, c.orbit.seed)?,
        (UlamSpace::Circle, UlamMethod::Exact) => ulam_1d_exact(system.fiber(), g.cells)?,
    };
    let near_critical =
        c.family == FamilyKind::Theoretical && (c.params.a + c.params.delta).abs() <= NEAR_CRITICAL_WIDTH;
    let max_iter = if near_critical {
        NEAR_CRITICAL_MAX_ITER
    } else {
        c.ulam.max_iter
    };
    let report = stationary_density(&op, c.ulam.tol, max_iter)?;
    if report.slow_mixing() {
        ctx.warnings.push(format!(
            "stationary iteration stopped at {} iterations with residual {:e} (slow mixing)",
            report.iterations, report.residual
        ));
    }
    if c.output.dump_matrix {
        op.write_binary(&ctx.path("ulam.bin"))?;
    }
    let grid = op.grid();
    let rows: Vec<Vec<Field>> = report
        .stationary
        .iter()
        .enumerate()
        .map(|(j, &p)| {
            let (x, y) = grid.center(j);
            match grid {
                UlamGrid::Torus { nx, .. } => {
                    vec![(j % nx).into(), (j / nx).into(), x.into(), y.into(), p.into()]
                }
                UlamGrid::Circle { .. } => vec![j.into(), y.into(), p.into()],
            }
        })
        .collect();
    let header: &[&str] = match grid {
        UlamGrid::Torus { .. } => &["i", "j", "x", "y", "probability"],
        UlamGrid::Circle { .. } => &["j", "y", "probability"],
    };
    write_csv(&ctx.path("stationary.csv"), header, &rows)?;
    let fiber = system.fiber();
    let summary = UlamSummary {
        scheme: op.scheme(),
        grid,
        nnz: op.nnz(),
        samples_per_cell: op.samples_per_cell(),
        seed: op.seed(),
        slow_mixing: report.slow_mixing(),
        report: &report,
        integrals: Integrals {
            log_fiber_deriv: integrate_observable(&report.stationary, grid, |_, y| fiber.deriv(y).ln()),
            sin_2pi_y: integrate_observable(&report.stationary, grid, |_, y| (2.0 * PI * y).sin()),
        },
    };
    write_json(&summary, &ctx.path("spectral.json"))
}

/// Offsets at which the derivative box of the intermittent map is checked.
pub const DERIVATIVE_BOX_OFFSETS: [f64; 5] = [-2.0, -1.0, 0.0, 1.0, 2.0];

fn run_phi_check(ctx: &mut Ctx) -> Result<()> {
    let c = ctx.cfg;
    let bump = BumpProfile::standard()?;
    let report = validate_phi(&bump, c.check.phi_grid);
    let mut rows: Vec<Vec<Field>> = report
        .conditions
        .iter()
        .map(|k| vec![format!("condition_{}", k.condition.label()).as_str().into(), k.pass.into(), k.worst_margin.into()])
        .collect();
    rows.push(vec!["max_abs_slope".into(), report.passed().into(), report.max_abs_slope.into()]);
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &a in &DERIVATIVE_BOX_OFFSETS {
        let f = FiberMap::intermittent(c.params.epsilon, a)?;
        for k in 0..c.check.phi_grid {
            let d = f.deriv(k as f64 / c.check.phi_grid as f64);
            lo = lo.min(d);
            hi = hi.max(d);
        }
    }
    rows.push(vec!["fiber_deriv_min".into(), (lo >= 2.0 / 3.0).into(), lo.into()]);
    rows.push(vec!["fiber_deriv_max".into(), (hi <= 10.0 / 3.0).into(), hi.into()]);
    write_csv(&ctx.path("phi_check.csv"), &["check", "pass", "value"], &rows)?;
    if !report.passed() {
        return Err(Error::ConstructionInfeasible("bump profile fails validation".into()));
    }
    Ok(())
}

fn run_cones(ctx: &mut Ctx) -> Result<()> {
    let c = ctx.cfg;
    let family = c.family();
    let c0 = min_cone_constant(&family.at(c.params.a)?, c.cones.calibration_grid)?;
    let mut rows = Vec::new();
    for &m in &c.cones.ms {
        let system = family.with_m(m).at(c.params.a)?;
        let r = transversality_measure(&system, &ConeParams::for_system(&system, c0), c.cones.grid)?;
        if !r.stable() {
            ctx.warnings.push(format!(
                "m = {m}: transversal count moved from {} to {} under grid doubling",
                r.max_count, r.refined_count
            ));
        }
        rows.push(vec![
            m.into(),
            c0.into(),
            r.max_count.into(),
            r.refined_count.into(),
            r.value.into(),
            r.det_floor_value.into(),
            r.max_overlap_count.into(),
            r.overlap_value.into(),
            r.stable().into(),
        ]);
    }
    write_csv(
        &ctx.path("cones.csv"),
        &[
            "m",
            "c0",
            "max_count",
            "refined_count",
            "m_f",
            "m_f_det_floor",
            "overlap_count",
            "overlap_value",
            "stable",
        ],
        &rows,
    )
}

fn run_trap_check(ctx: &mut Ctx) -> Result<()> {
    let c = ctx.cfg;
    let report = check_trapping(&c.family(), c.params.a, c.check.trap_grid)?;
    write_json(&report, &ctx.path("trap.json"))
}

fn run_smooth(ctx: &mut Ctx) -> Result<()> {
    let c = ctx.cfg;
    let psi = parse_observable(&c.smooth.observable)?;
    let t = smoothness_diagnostic(&c.family(), c.params.a, &c.smooth.steps, psi.as_ref(), c.smooth_grid())?;
    if t.slow_mixing {
        ctx.warnings.push("a stationary solve hit its iteration cap (slow mixing)".into());
    }
    let rows: Vec<Vec<Field>> = t
        .rows
        .iter()
        .map(|r| {
            vec![
                r.h.into(),
                t.value.into(),
                r.value_minus.into(),
                r.value_plus.into(),
                r.first_difference.into(),
                r.second_difference.into(),
                r.slow_mixing.into(),
            ]
        })
        .collect();
    write_csv(
        &ctx.path("smooth.csv"),
        &["h", "i_center", "i_minus", "i_plus", "first_difference", "second_difference", "slow_mixing"],
        &rows,
    )
}
