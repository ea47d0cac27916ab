use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use nlphase::energy::{check_mixed_interaction, eval_density_field, eval_f_eps};
use nlphase::gamma_limit::eval_limit;
use nlphase::geometry::{rasterize_interface, CellSet, PhaseField, SurfactantField};
use nlphase::harness::{
    emit_results, fit_records, perturbed_uniform, recovery_record, relax, run_sweep, write_field_dump,
};
use nlphase::kernel::{
    calibrate_lower_bound, check_bound_cylinder_complement, check_bound_cylinder_cone,
    check_lower_bound_special_cylinder, BoundReport, KernelPlan,
};
use nlphase::recovery::build_recovery_pair;
use nlphase::scene::{FieldSpec, Scene};
use nlphase::{Error, Result};

const THREADS_ENV: &str = "NLPHASE_THREADS";

#[derive(Parser)]
#[command(name = "nlphase", version, about = "Nonlocal phase-field energies with surfactant")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate F_eps on the scene field.
    Energy {
        #[command(flatten)]
        common: Common,
        /// Write the per-cell energy density as a binary dump.
        #[arg(long)]
        density_dump: Option<PathBuf>,
    },
    /// Build recovery pairs along the ladder; dumps fields and a summary CSV.
    Recovery(Common),
    /// Evaluate the sharp-interface limit functional.
    Limit(Common),
    /// Evaluate the ladder and fit a + b/|ln eps|.
    Sweep(Common),
    /// Run the interaction bound checks listed in the scene.
    Bounds(Common),
    /// Projected subgradient descent from the scene state.
    Relax(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    scene: PathBuf,
    /// Comma-separated eps values; overrides the scene ladder.
    #[arg(long, value_delimiter = ',')]
    ladder: Vec<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    tile: Option<usize>,
}

struct Ctx {
    scene: Scene,
    scene_json: serde_json::Value,
    plan: KernelPlan,
    ladder: Vec<f64>,
    out: Option<PathBuf>,
}

impl Ctx {
    fn load(common: &Common) -> Result<Self> {
        let scene = Scene::load(&common.scene)?;
        let scene_json = serde_json::to_value(&scene).map_err(|e| Error::Config(e.to_string()))?;
        let mut plan = scene.plan;
        if let Ok(v) = std::env::var(THREADS_ENV) {
            let n = v
                .parse()
                .map_err(|_| Error::Config(format!("{THREADS_ENV} must be a positive integer, got {v:?}")))?;
            plan = plan.with_threads(n);
        }
        if let Some(n) = common.threads {
            plan = plan.with_threads(n);
        }
        if let Some(t) = common.tile {
            plan = plan.with_tile(t);
        }
        plan.validate()?;
        let ladder = if common.ladder.is_empty() {
            scene.effective_ladder()
        } else {
            common.ladder.clone()
        };
        Ok(Self {
            scene,
            scene_json,
            plan,
            ladder,
            out: common.out.clone(),
        })
    }

    fn eps(&self) -> Result<f64> {
        match self.scene.eps {
            Some(e) => Ok(e),
            None => self
                .ladder
                .last()
                .copied()
                .ok_or_else(|| Error::Config("scene needs eps or a ladder".into())),
        }
    }

    fn require_out(&self) -> Result<&Path> {
        self.out
            .as_deref()
            .ok_or_else(|| Error::Config("this subcommand needs --out <dir>".into()))
    }

    /// Prints `value` and, with `--out`, writes it to `<out>/<name>.json`.
    fn report<T: Serialize>(&self, name: &str, value: &T) -> Result<()> {
        let text = serde_json::to_string_pretty(value).map_err(|e| Error::Config(e.to_string()))? + "\n";
        if let Some(dir) = &self.out {
            fs::create_dir_all(dir).map_err(|source| Error::Io {
                path: dir.clone(),
                source,
            })?;
            let path = dir.join(format!("{name}.json"));
            fs::write(&path, &text).map_err(|source| Error::Io { path, source })?;
        }
        print!("{text}");
        Ok(())
    }
}

fn initial_state(ctx: &Ctx, eps: f64) -> Result<(PhaseField, SurfactantField)> {
    let s = &ctx.scene;
    let grid = s.build_grid()?;
    Ok(match s.field {
        FieldSpec::Recovery => {
            let cfg = s.recovery_config(&[eps])?;
            let pair = build_recovery_pair(&cfg, eps, &ctx.plan)?;
            (pair.u, pair.rho)
        }
        FieldSpec::Sharp => {
            let u = rasterize_interface(&s.interface()?, &grid, s.alpha, s.beta)?;
            (u, SurfactantField::zero(grid))
        }
        FieldSpec::Constant { value, rho } => {
            let n = grid.len();
            (
                PhaseField::constant(grid.clone(), value, s.alpha, s.beta)?,
                SurfactantField::new(grid, vec![rho; n])?,
            )
        }
    })
}

fn cmd_energy(ctx: &Ctx, density_dump: Option<&Path>) -> Result<()> {
    let eps = ctx.eps()?;
    let w = ctx.scene.well()?;
    let (u, rho) = initial_state(ctx, eps)?;
    let all = CellSet::full(u.grid().clone());
    let energy = eval_f_eps(&u, &rho, &all, eps, &w, &ctx.plan)?;
    if let Some(path) = density_dump {
        let density = eval_density_field(&u, &rho, eps, &w, &ctx.plan)?;
        write_field_dump(path, &density.grid, &density.values)?;
    }
    ctx.report("energy", &energy)
}

fn cmd_recovery(ctx: &Ctx) -> Result<()> {
    let out = ctx.require_out()?;
    if ctx.ladder.is_empty() {
        return Err(Error::Config("empty eps ladder".into()));
    }
    ctx.scene.recovery_config(&ctx.ladder)?;
    let mut records = Vec::with_capacity(ctx.ladder.len());
    for (i, &eps) in ctx.ladder.iter().enumerate() {
        let (rec, pair) = recovery_record(&ctx.scene, eps, &ctx.plan)?;
        write_field_dump(&out.join(format!("u_{i:02}.bin")), pair.u.grid(), pair.u.values())?;
        write_field_dump(&out.join(format!("rho_{i:02}.bin")), pair.rho.grid(), pair.rho.values())?;
        records.push(rec);
    }
    let fits = fit_records(&records);
    let files = emit_results(&records, &fits, &ctx.scene_json, out, "recovery")?;
    println!("{}", files.csv.display());
    println!("{}", files.json.display());
    Ok(())
}

fn cmd_limit(ctx: &Ctx) -> Result<()> {
    let s = &ctx.scene;
    let grid = s.build_grid()?;
    let interface = s.interface()?;
    let measure = s.measure(&grid, &interface)?;
    let limit = eval_limit(&interface, &measure, s.alpha, s.beta)?;
    ctx.report("limit", &limit)
}

fn cmd_sweep(ctx: &Ctx) -> Result<()> {
    let out = run_sweep(&ctx.scene, &ctx.ladder, &ctx.plan)?;
    match &ctx.out {
        Some(dir) => {
            let files = emit_results(&out.records, &out.fits, &ctx.scene_json, dir, "sweep")?;
            println!("{}", files.csv.display());
            println!("{}", files.json.display());
            Ok(())
        }
        None => ctx.report("sweep", &out),
    }
}

#[derive(Serialize)]
struct BoundsOutput {
    reports: Vec<BoundReport>,
    mixed: Vec<nlphase::energy::MixedInteractionReport>,
    constants: Option<nlphase::kernel::LowerBoundConstants>,
    failed: usize,
}

fn cmd_bounds(ctx: &Ctx) -> Result<()> {
    let b = &ctx.scene.bounds;
    let mut reports = Vec::new();
    for cfg in &b.cylinders {
        reports.push(check_bound_cylinder_complement(cfg, &ctx.plan)?);
    }
    for cfg in &b.cones {
        reports.push(check_bound_cylinder_cone(cfg, &ctx.plan)?);
    }
    let constants = if b.calibration.is_empty() {
        None
    } else {
        Some(calibrate_lower_bound(&b.calibration, b.xi.unwrap_or(0.0))?)
    };
    for cfg in &b.special {
        reports.push(check_lower_bound_special_cylinder(cfg, constants.as_ref())?);
    }
    let w = ctx.scene.well()?;
    let mixed = b
        .mixed
        .iter()
        .map(|cfg| check_mixed_interaction(cfg, &w, &ctx.plan))
        .collect::<Result<Vec<_>>>()?;
    let failed = reports.iter().filter(|r| r.holds == Some(false)).count() + mixed.iter().filter(|m| !m.holds).count();
    ctx.report(
        "bounds",
        &BoundsOutput {
            reports,
            mixed,
            constants,
            failed,
        },
    )?;
    if failed > 0 {
        return Err(Error::CheckFailed(format!("{failed} bound check(s) failed")));
    }
    Ok(())
}

fn cmd_relax(ctx: &Ctx) -> Result<()> {
    let eps = ctx.eps()?;
    let s = &ctx.scene;
    let w = s.well()?;
    let (u0, rho0) = if s.relax.from_recovery {
        let cfg = s.recovery_config(&[eps])?;
        let pair = build_recovery_pair(&cfg, eps, &ctx.plan)?;
        (pair.u, pair.rho)
    } else {
        let grid = s.build_grid()?;
        (perturbed_uniform(&grid, s.alpha, s.beta, 0.05)?, SurfactantField::zero(grid))
    };
    let summary = relax(&u0, &rho0, eps, &w, s.relax.steps, s.relax.step, &ctx.plan)?;
    ctx.report("relax", &summary)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Energy { common, density_dump } => cmd_energy(&Ctx::load(&common)?, density_dump.as_deref()),
        Command::Recovery(c) => cmd_recovery(&Ctx::load(&c)?),
        Command::Limit(c) => cmd_limit(&Ctx::load(&c)?),
        Command::Sweep(c) => cmd_sweep(&Ctx::load(&c)?),
        Command::Bounds(c) => cmd_bounds(&Ctx::load(&c)?),
        Command::Relax(c) => cmd_relax(&Ctx::load(&c)?),
    }
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Unresolvable { .. } => 3,
        Error::CheckFailed(_) => 4,
        _ => 2,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("nlphase: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
