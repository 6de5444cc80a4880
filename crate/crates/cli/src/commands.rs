//! Backends of the `wigner`, `overlap` and `scaling` subcommands.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use serde::Serialize;
use subplanck::analysis::{
    self, AnyState, EnhancementReport, Group, StateFamily, TileScaling, DIRECTIONS,
};
use subplanck::field::{Grid, Normalization};
use subplanck::hw::{HwLabel, HwState};
use subplanck::su2::{self, Su2Label, Su2State};
use subplanck::Complex64;

use crate::config::{ConfigError, Scale, SceneConfig, StateChoice};
use crate::output::{field_csv, output_paths, to_json, write_text, Sidecar};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Numeric(#[from] subplanck::Error),
    #[error("cannot write {path}: {message}")]
    Output { path: String, message: String },
    #[error("validation failed: {0}")]
    Validation(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Output { .. } => 2,
            CliError::Numeric(_) => 3,
            CliError::Validation(_) => 4,
        }
    }
}

fn state_error(e: subplanck::Error) -> CliError {
    CliError::Config(ConfigError::Field { field: "state".into(), message: e.to_string() })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    write_text(path, text).map_err(|e| CliError::Output { path: path.display().to_string(), message: e.to_string() })
}

/// The state described by a scene; construction failures are config errors.
pub fn build_state(cfg: &SceneConfig) -> Result<AnyState, CliError> {
    let built = match (&cfg.state, cfg.scale) {
        (StateChoice::Named(f), scale) => analysis::build_state(cfg.group, *f, scale.value()),
        (StateChoice::Coherent(c), Scale::X0(_)) => HwState::coherent(*c).map(AnyState::Hw),
        (StateChoice::Coherent(c), Scale::J(j)) => Su2State::coherent(j, *c).map(AnyState::Su2),
        (StateChoice::Custom { name, terms }, Scale::X0(_)) => {
            HwState::custom(name, terms.iter().map(|(w, l)| (*w, HwLabel::new(*l))).collect()).map(AnyState::Hw)
        }
        (StateChoice::Custom { name, terms }, Scale::J(j)) => {
            Su2State::custom(j, name, terms.iter().map(|(w, l)| (*w, Su2Label::new(*l))).collect()).map(AnyState::Su2)
        }
    };
    built.map_err(state_error)
}

/// Default Wigner grid: 401² over `[-h, h]²` with `h = max(1.5 x0, 2 max|α| + 4)`
/// for HW and `h = 2` for SU(2).
pub fn default_wigner_grid(cfg: &SceneConfig, state: &AnyState) -> Result<Grid, CliError> {
    Ok(match (state, cfg.scale) {
        (AnyState::Hw(s), Scale::X0(x0)) => {
            let reach = s.labels().iter().map(|l| 2.0 * l.alpha.norm()).fold(0.0, f64::max) + 4.0;
            Grid::square((1.5 * x0).max(reach), 401)?
        }
        _ => su2::default_grid(),
    })
}

/// Displacement per overlap-grid unit: `π/x0` (HW) or `π/4j` (SU(2)).
pub fn axis_unit(scale: Scale) -> (f64, &'static str) {
    match scale {
        Scale::X0(x0) => (PI / x0, "pi/x0"),
        Scale::J(j) => (PI / (4.0 * j.value()), "pi/4j"),
    }
}

fn default_out(kind: &str, cfg: &SceneConfig) -> PathBuf {
    let group = match cfg.group {
        Group::Hw => "hw",
        Group::Su2 => "su2",
    };
    PathBuf::from(format!("{kind}_{group}_{}", cfg.state.name()))
}

/// Computes the Wigner field and writes `<out>.csv` and `<out>.json`.
pub fn run_wigner(cfg: &SceneConfig) -> Result<Vec<PathBuf>, CliError> {
    let state = build_state(cfg)?;
    let grid = match cfg.grid {
        Some(g) => g,
        None => default_wigner_grid(cfg, &state)?,
    };
    let field = state.wigner(&grid)?.normalized(cfg.normalization)?;
    let (csv, json) = output_paths(&cfg.out.clone().unwrap_or_else(|| default_out("wigner", cfg)));
    let sidecar = Sidecar {
        group: cfg.group,
        scale: cfg.scale.into(),
        state: cfg.state.name(),
        grid,
        normalization: field.meta.normalization,
        field_max: field.max(),
        field_min: field.min(),
        axis_unit: None,
        axis_unit_label: None,
    };
    write(&csv, &field_csv(&grid, &field.values))?;
    write(&json, &to_json(&sidecar))?;
    Ok(vec![csv, json])
}

#[derive(Serialize)]
struct ScanEntry {
    direction: f64,
    min_zero_magnitude: Option<f64>,
    min_zero_in_axis_units: Option<f64>,
    overlap_at_zero: Option<f64>,
}

/// Computes `F` over the displacement grid (in axis units, default
/// `[-4, 4]²` with 401² samples) and optionally the four direction scans.
pub fn run_overlap(cfg: &SceneConfig, scan: bool) -> Result<Vec<PathBuf>, CliError> {
    let state = build_state(cfg)?;
    let (unit, label) = axis_unit(cfg.scale);
    let grid = match cfg.grid {
        Some(g) => g,
        None => Grid::square(4.0, 401)?,
    };
    let field = state.overlap_field(&grid, unit)?;
    let base = cfg.out.clone().unwrap_or_else(|| default_out("overlap", cfg));
    let (csv, json) = output_paths(&base);
    let sidecar = Sidecar {
        group: cfg.group,
        scale: cfg.scale.into(),
        state: cfg.state.name(),
        grid,
        normalization: Normalization::Raw,
        field_max: field.max(),
        field_min: field.min(),
        axis_unit: Some(unit),
        axis_unit_label: Some(label.into()),
    };
    write(&csv, &field_csv(&grid, &field.values))?;
    write(&json, &to_json(&sidecar))?;
    let mut written = vec![csv, json];
    if scan {
        let radius = analysis::default_radius(cfg.group);
        let mut rows = String::from("direction,magnitude,value\n");
        let mut entries = Vec::new();
        for d in DIRECTIONS {
            let s = analysis::zero_scan(&state, d, radius, 1e-6)?;
            for (m, f) in &s.samples {
                rows.push_str(&format!("{d:.16e},{m:.16e},{f:.16e}\n"));
            }
            let at = s.min_zero_magnitude.map(|m| state.overlap(Complex64::from_polar(m, d))).transpose()?;
            entries.push(ScanEntry {
                direction: d,
                min_zero_magnitude: s.min_zero_magnitude,
                min_zero_in_axis_units: s.min_zero_magnitude.map(|m| m / unit),
                overlap_at_zero: at,
            });
        }
        let (scan_csv, scan_json) = output_paths(&with_suffix(&base, ".scan"));
        write(&scan_csv, &rows)?;
        write(&scan_json, &to_json(&entries))?;
        written.extend([scan_csv, scan_json]);
    }
    Ok(written)
}

fn with_suffix(base: &Path, suffix: &str) -> PathBuf {
    let stem = if base.extension().is_some_and(|e| e == "csv") { base.with_extension("") } else { base.to_path_buf() };
    let mut s = stem.into_os_string();
    s.push(suffix);
    PathBuf::from(s)
}

/// Enhancement table and central-tile fit for one family.
#[derive(Serialize)]
pub struct ScalingReport {
    pub enhancement: EnhancementReport,
    pub tiles: Option<TileScaling>,
    /// Why no tile fit was made (e.g. no chessboard for a single cat).
    pub tile_error: Option<String>,
}

pub fn default_scales(group: Group) -> Vec<f64> {
    match group {
        Group::Hw => vec![6.0, 8.0, 10.0, 12.0],
        Group::Su2 => vec![10.0, 20.0, 30.0],
    }
}

pub fn scaling_report(group: Group, family: StateFamily, scales: &[f64]) -> Result<ScalingReport, CliError> {
    for &s in scales {
        analysis::build_state(group, family, s).map_err(|e| {
            CliError::Config(ConfigError::Field { field: "scales".into(), message: e.to_string() })
        })?;
    }
    let enhancement = analysis::enhancement_report(group, family, scales, &[], 1e-6)?;
    let (tiles, tile_error) = match analysis::tile_scaling(group, family, scales) {
        Ok(t) => (Some(t), None),
        Err(e @ (subplanck::Error::NoChessboard(_) | subplanck::Error::InvalidFit(_))) => (None, Some(e.to_string())),
        Err(e) => return Err(e.into()),
    };
    Ok(ScalingReport { enhancement, tiles, tile_error })
}

/// Human-readable summary of a scaling report.
pub fn scaling_table(r: &ScalingReport) -> String {
    let mut out = String::new();
    let e = &r.enhancement;
    out.push_str(&format!("{:?} {}: minimal vanishing |delta| per direction\n", e.group, e.family.name()));
    out.push_str("scale");
    for d in &e.directions {
        out.push_str(&format!("  {:>11}", format!("{:.0}deg", d.direction.to_degrees())));
    }
    out.push('\n');
    for row in &e.rows {
        out.push_str(&format!("{:<5}", row.scale));
        for (_, z) in &row.zeros {
            match z {
                Some(z) => out.push_str(&format!("  {z:>11.6}")),
                None => out.push_str(&format!("  {:>11}", "none")),
            }
        }
        out.push('\n');
    }
    for d in &e.directions {
        let verdict = if !d.has_zeros {
            "no zeros".to_string()
        } else {
            format!("zero*scale spread {:.2}%{}", 100.0 * d.spread, if d.constant { "" } else { " (not constant)" })
        };
        out.push_str(&format!("  {:.0}deg: {verdict}\n", d.direction.to_degrees()));
    }
    match (&r.tiles, &r.tile_error) {
        (Some(t), _) => out.push_str(&format!(
            "central tile {} exponent {:.4} (r^2 {:.6})\n",
            if t.group == Group::Hw { "area" } else { "extent" },
            t.fit.exponent,
            t.fit.r_squared
        )),
        (None, Some(msg)) => out.push_str(&format!("central tile: {msg}\n")),
        _ => {}
    }
    out
}

pub fn run_scaling(
    group: Group,
    family: StateFamily,
    scales: &[f64],
    out: Option<PathBuf>,
) -> Result<(ScalingReport, PathBuf), CliError> {
    let report = scaling_report(group, family, scales)?;
    let name = match group {
        Group::Hw => "hw",
        Group::Su2 => "su2",
    };
    let path = out.unwrap_or_else(|| PathBuf::from(format!("scaling_{name}_{}.json", family.name())));
    write(&path, &to_json(&report))?;
    Ok((report, path))
}
