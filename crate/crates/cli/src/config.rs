//! Scene configuration from a TOML file and command-line overrides.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use subplanck::analysis::{Group, StateFamily};
use subplanck::field::{Axis, Grid, Normalization};
use subplanck::specfn::HalfInt;
use subplanck::Complex64;

/// Minimum samples per grid axis.
pub const MIN_COUNT: usize = 16;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("invalid `{field}`: {message}")]
    Field { field: String, message: String },
    #[error("cannot read {path}: {message}")]
    Read { path: String, message: String },
    #[error("cannot parse {path}: {message}")]
    Parse { path: String, message: String },
}

fn field_err(field: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::Field { field: field.into(), message: message.into() }
}

/// `j` written as a number (`30`, `2.5`) or a string (`"3/2"`).
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum SpinValue {
    Number(f64),
    Text(String),
}

impl SpinValue {
    fn to_half_int(&self) -> Result<HalfInt, ConfigError> {
        let parsed = match self {
            SpinValue::Number(v) => subplanck::analysis::spin_from_scale(*v).map_err(|e| e.to_string()),
            SpinValue::Text(s) => s.parse::<HalfInt>().map_err(|e| e.to_string()),
        };
        match parsed {
            Ok(j) if j.twice() >= 1 => Ok(j),
            Ok(j) => Err(field_err("j", format!("spin {j} must be at least 1/2"))),
            Err(e) => Err(field_err("j", e)),
        }
    }
}

/// One term of a custom superposition: complex weight and label as `[re, im]`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    #[serde(default = "unit_weight")]
    pub weight: [f64; 2],
    pub label: [f64; 2],
}

fn unit_weight() -> [f64; 2] {
    [1.0, 0.0]
}

/// Every setting optional; a file and the flags are merged field by field.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialConfig {
    pub group: Option<String>,
    pub x0: Option<f64>,
    pub j: Option<SpinValue>,
    pub state: Option<String>,
    /// Label of a `coherent` state (α for hw, γ for su2).
    pub center: Option<[f64; 2]>,
    pub terms: Option<Vec<TermSpec>>,
    pub grid: Option<String>,
    pub normalize: Option<String>,
    pub format: Option<String>,
    pub out: Option<PathBuf>,
}

impl PartialConfig {
    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::Read { path: path.display().to_string(), message: e.to_string() })?;
        toml::from_str(&text).map_err(|e| ConfigError::Parse {
            path: path.display().to_string(),
            message: e.to_string().trim_end().to_string(),
        })
    }

    /// Fields set in `over` replace those of `self`.
    pub fn merge(self, over: PartialConfig) -> PartialConfig {
        PartialConfig {
            group: over.group.or(self.group),
            x0: over.x0.or(self.x0),
            j: over.j.or(self.j),
            state: over.state.or(self.state),
            center: over.center.or(self.center),
            terms: over.terms.or(self.terms),
            grid: over.grid.or(self.grid),
            normalize: over.normalize.or(self.normalize),
            format: over.format.or(self.format),
            out: over.out.or(self.out),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scale {
    X0(f64),
    J(HalfInt),
}

impl Scale {
    pub fn value(self) -> f64 {
        match self {
            Scale::X0(x) => x,
            Scale::J(j) => j.value(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum StateChoice {
    Named(StateFamily),
    Coherent(Complex64),
    /// `(weight, label)` pairs.
    Custom { name: String, terms: Vec<(Complex64, Complex64)> },
}

impl StateChoice {
    pub fn name(&self) -> String {
        match self {
            StateChoice::Named(f) => f.name().to_string(),
            StateChoice::Coherent(_) => "coherent".into(),
            StateChoice::Custom { name, .. } => name.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SceneConfig {
    pub group: Group,
    pub scale: Scale,
    pub state: StateChoice,
    pub grid: Option<Grid>,
    pub normalization: Normalization,
    pub out: Option<PathBuf>,
}

/// `xmin:xmax:n,pmin:pmax:n`.
pub fn parse_grid(text: &str) -> Result<Grid, ConfigError> {
    let bad = |m: String| field_err("grid", m);
    let axes: Vec<&str> = text.split(',').collect();
    if axes.len() != 2 {
        return Err(bad(format!("expected xmin:xmax:n,pmin:pmax:n, got {text:?}")));
    }
    let mut parsed = Vec::new();
    for (name, a) in ["x", "p"].iter().zip(axes) {
        let parts: Vec<&str> = a.trim().split(':').collect();
        if parts.len() != 3 {
            return Err(bad(format!("{name} axis {a:?} is not min:max:n")));
        }
        let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad(format!("{name} bound {s:?} is not a number")));
        let (min, max) = (num(parts[0])?, num(parts[1])?);
        let count: usize =
            parts[2].trim().parse().map_err(|_| bad(format!("{name} count {:?} is not an integer", parts[2])))?;
        if count < MIN_COUNT {
            return Err(bad(format!("{name} count {count} is below {MIN_COUNT}")));
        }
        parsed.push(Axis::new(min, max, count));
    }
    Grid::new(parsed[0], parsed[1]).map_err(|e| bad(e.to_string()))
}

fn parse_group(s: &str) -> Result<Group, ConfigError> {
    match s {
        "hw" => Ok(Group::Hw),
        "su2" => Ok(Group::Su2),
        _ => Err(field_err("group", format!("expected hw or su2, got {s:?}"))),
    }
}

fn complex(v: [f64; 2], field: &str) -> Result<Complex64, ConfigError> {
    let z = Complex64::new(v[0], v[1]);
    if !z.is_finite() {
        return Err(field_err(field, format!("value {v:?} is not finite")));
    }
    Ok(z)
}

fn custom_terms(terms: &[TermSpec]) -> Result<Vec<(Complex64, Complex64)>, ConfigError> {
    if terms.is_empty() {
        return Err(field_err("terms", "custom state needs at least one term"));
    }
    terms.iter().map(|t| Ok((complex(t.weight, "terms.weight")?, complex(t.label, "terms.label")?))).collect()
}

/// A state file holds `terms = [...]` and optionally `name`.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StateFile {
    name: Option<String>,
    terms: Vec<TermSpec>,
}

fn parse_state(p: &PartialConfig) -> Result<StateChoice, ConfigError> {
    let name = p.state.as_deref().ok_or_else(|| field_err("state", "missing"))?;
    match name {
        "coherent" => Ok(StateChoice::Coherent(complex(p.center.unwrap_or([0.0, 0.0]), "center")?)),
        "custom" => {
            let terms = p.terms.as_deref().ok_or_else(|| field_err("terms", "custom state needs `terms`"))?;
            Ok(StateChoice::Custom { name: "custom".into(), terms: custom_terms(terms)? })
        }
        _ => {
            if let Ok(f) = name.parse::<StateFamily>() {
                return Ok(StateChoice::Named(f));
            }
            let path = Path::new(name);
            if !path.is_file() {
                return Err(field_err(
                    "state",
                    format!("{name:?} is neither coherent, cat_h, cat_v, compass, cat_mixture, custom nor a file"),
                ));
            }
            let text = std::fs::read_to_string(path)
                .map_err(|e| ConfigError::Read { path: name.into(), message: e.to_string() })?;
            let file: StateFile = toml::from_str(&text)
                .map_err(|e| ConfigError::Parse { path: name.into(), message: e.to_string().trim_end().into() })?;
            let label = file.name.unwrap_or_else(|| {
                path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "custom".into())
            });
            Ok(StateChoice::Custom { name: label, terms: custom_terms(&file.terms)? })
        }
    }
}

impl SceneConfig {
    pub fn from_partial(p: &PartialConfig) -> Result<Self, ConfigError> {
        let group = parse_group(p.group.as_deref().ok_or_else(|| field_err("group", "missing"))?)?;
        let scale = match group {
            Group::Hw => {
                if p.j.is_some() {
                    return Err(field_err("j", "not a parameter of the hw group"));
                }
                let x0 = p.x0.ok_or_else(|| field_err("x0", "missing for group hw"))?;
                if !(x0.is_finite() && x0 > 0.0) {
                    return Err(field_err("x0", format!("{x0} must be positive and finite")));
                }
                Scale::X0(x0)
            }
            Group::Su2 => {
                if p.x0.is_some() {
                    return Err(field_err("x0", "not a parameter of the su2 group"));
                }
                Scale::J(p.j.as_ref().ok_or_else(|| field_err("j", "missing for group su2"))?.to_half_int()?)
            }
        };
        let state = parse_state(p)?;
        let grid = p.grid.as_deref().map(parse_grid).transpose()?;
        let normalization = match p.normalize.as_deref() {
            None | Some("max") => Normalization::Max,
            Some("raw") => Normalization::Raw,
            Some(other) => return Err(field_err("normalize", format!("expected max or raw, got {other:?}"))),
        };
        if let Some(f) = p.format.as_deref() {
            if f != "csv" {
                return Err(field_err("format", format!("only csv is supported, got {f:?}")));
            }
        }
        Ok(SceneConfig { group, scale, state, grid, normalization, out: p.out.clone() })
    }
}
