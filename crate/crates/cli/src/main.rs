use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use subplanck::analysis::{Group, StateFamily};
use subplanck_cli::commands::{self, CliError};
use subplanck_cli::config::{ConfigError, PartialConfig, SceneConfig, SpinValue};
use subplanck_cli::output::{to_json, write_text};
use subplanck_cli::validate::{self, Level};

#[derive(Parser)]
#[command(name = "subplanck", version, about = "Sub-Planck structure of Wigner functions and displaced overlaps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Wigner function of a state on a phase-space grid.
    Wigner(SceneArgs),
    /// Overlap |<psi|D(delta)|psi>|^2 on a displacement grid.
    Overlap {
        #[command(flatten)]
        scene: SceneArgs,
        /// Also scan for zeros along the four reference directions.
        #[arg(long)]
        scan: bool,
    },
    /// Zero-scaling table and central-tile fit for one family.
    Scaling {
        #[arg(long)]
        group: String,
        #[arg(long)]
        state: String,
        /// Comma-separated x0 values (hw) or spins (su2).
        #[arg(long, value_delimiter = ',')]
        scales: Option<Vec<f64>>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cross-checks against independent oracles.
    Validate {
        #[arg(long, default_value = "quick")]
        level: String,
        /// Also write the report as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SceneArgs {
    /// TOML scene file; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    group: Option<String>,
    #[arg(long)]
    x0: Option<f64>,
    /// Spin, e.g. 30, 2.5 or 3/2.
    #[arg(long)]
    j: Option<String>,
    /// cat_h, cat_v, compass, cat_mixture, coherent, custom or a TOML file.
    #[arg(long)]
    state: Option<String>,
    /// Label of a coherent state as re,im: α for hw (peak at 2α), γ for su2.
    #[arg(long, allow_hyphen_values = true)]
    center: Option<String>,
    /// xmin:xmax:nx,pmin:pmax:np
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    /// max or raw.
    #[arg(long)]
    normalize: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    format: Option<String>,
}

impl SceneArgs {
    fn resolve(self) -> Result<SceneConfig, CliError> {
        let base = match &self.config {
            Some(p) => PartialConfig::from_file(p)?,
            None => PartialConfig::default(),
        };
        let flags = PartialConfig {
            group: self.group,
            x0: self.x0,
            j: self.j.map(SpinValue::Text),
            state: self.state,
            center: self.center.as_deref().map(parse_center).transpose()?,
            terms: None,
            grid: self.grid,
            normalize: self.normalize,
            format: self.format,
            out: self.out,
        };
        Ok(SceneConfig::from_partial(&base.merge(flags))?)
    }
}

fn parse_center(text: &str) -> Result<[f64; 2], CliError> {
    let parts: Vec<&str> = text.split(',').collect();
    match parts.as_slice() {
        [re, im] => match (re.trim().parse(), im.trim().parse()) {
            (Ok(re), Ok(im)) => Ok([re, im]),
            _ => Err(field("center", format!("{text:?} is not re,im"))),
        },
        _ => Err(field("center", format!("{text:?} is not re,im"))),
    }
}

fn field(name: &str, message: impl ToString) -> CliError {
    CliError::Config(ConfigError::Field { field: name.into(), message: message.to_string() })
}

fn report_paths(paths: &[PathBuf]) {
    for p in paths {
        println!("{}", p.display());
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Wigner(args) => report_paths(&commands::run_wigner(&args.resolve()?)?),
        Command::Overlap { scene, scan } => report_paths(&commands::run_overlap(&scene.resolve()?, scan)?),
        Command::Scaling { group, state, scales, out } => {
            let group: Group = match group.as_str() {
                "hw" => Group::Hw,
                "su2" => Group::Su2,
                other => return Err(field("group", format!("expected hw or su2, got {other:?}"))),
            };
            let family: StateFamily = state.parse().map_err(|e| field("state", e))?;
            let scales = scales.unwrap_or_else(|| commands::default_scales(group));
            let (report, path) = commands::run_scaling(group, family, &scales, out)?;
            print!("{}", commands::scaling_table(&report));
            println!("{}", path.display());
        }
        Command::Validate { level, out } => {
            let level: Level = level.parse().map_err(|e| field("level", e))?;
            let report = validate::run_validation(level);
            print!("{}", report.table());
            if let Some(path) = out {
                write_text(&path, &to_json(&report))
                    .map_err(|e| CliError::Output { path: path.display().to_string(), message: e.to_string() })?;
            }
            if !report.passed() {
                let failed = report.checks.iter().filter(|c| !c.passed).count();
                return Err(CliError::Validation(format!("{failed} of {} checks failed", report.checks.len())));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
