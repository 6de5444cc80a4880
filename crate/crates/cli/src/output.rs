//! CSV fields and JSON sidecars.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use subplanck::analysis::Group;
use subplanck::field::{Grid, Normalization};
use subplanck::specfn::HalfInt;

use crate::config::Scale;

/// `x,p,value` rows, `x` slow and `p` fast, 17 significant digits.
pub fn field_csv(grid: &Grid, values: &[f64]) -> String {
    let mut out = String::with_capacity(64 * values.len() + 16);
    out.push_str("x,p,value\n");
    for ix in 0..grid.x.count {
        for ip in 0..grid.p.count {
            let z = grid.point(ix, ip);
            let _ = writeln!(out, "{:.16e},{:.16e},{:.16e}", z.re, z.im, values[grid.index(ix, ip)]);
        }
    }
    out
}

/// Rows of a field CSV.
#[derive(Clone, Debug, PartialEq)]
pub struct CsvRows {
    pub x: Vec<f64>,
    pub p: Vec<f64>,
    pub value: Vec<f64>,
}

pub fn parse_csv(text: &str) -> Result<CsvRows, String> {
    let mut lines = text.lines();
    match lines.next() {
        Some("x,p,value") => {}
        other => return Err(format!("unexpected header {other:?}")),
    }
    let mut rows = CsvRows { x: Vec::new(), p: Vec::new(), value: Vec::new() };
    for (n, line) in lines.enumerate() {
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 3 {
            return Err(format!("line {}: expected 3 columns", n + 2));
        }
        let num = |s: &str| s.parse::<f64>().map_err(|e| format!("line {}: {e}", n + 2));
        rows.x.push(num(cols[0])?);
        rows.p.push(num(cols[1])?);
        rows.value.push(num(cols[2])?);
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaleJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j: Option<HalfInt>,
}

impl From<Scale> for ScaleJson {
    fn from(s: Scale) -> Self {
        match s {
            Scale::X0(x0) => ScaleJson { x0: Some(x0), j: None },
            Scale::J(j) => ScaleJson { x0: None, j: Some(j) },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    pub group: Group,
    pub scale: ScaleJson,
    pub state: String,
    pub grid: Grid,
    pub normalization: Normalization,
    pub field_max: f64,
    pub field_min: f64,
    /// Overlap fields: physical displacement per grid unit.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub axis_unit: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub axis_unit_label: Option<String>,
}

/// `base.csv` and `base.json`; a trailing `.csv` on `base` is dropped.
pub fn output_paths(base: &Path) -> (PathBuf, PathBuf) {
    let stem = if base.extension().is_some_and(|e| e == "csv") { base.with_extension("") } else { base.to_path_buf() };
    let with = |ext: &str| {
        let mut s = stem.clone().into_os_string();
        s.push(ext);
        PathBuf::from(s)
    };
    (with(".csv"), with(".json"))
}

pub fn write_text(path: &Path, text: &str) -> std::io::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, text)
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}
