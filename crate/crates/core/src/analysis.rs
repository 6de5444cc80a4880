//! Overlap zero scans, central chessboard tiles and power-law fits.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Grid, OverlapField, WignerField};
use crate::hw::{self, HwState};
use crate::specfn::HalfInt;
use crate::su2::{self, Su2State};

/// A state of either group.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyState {
    Hw(HwState),
    Su2(Su2State),
}

impl AnyState {
    pub fn overlap(&self, delta: Complex64) -> Result<f64> {
        match self {
            AnyState::Hw(s) => hw::overlap(s, delta),
            AnyState::Su2(s) => su2::overlap(s, delta),
        }
    }

    pub fn wigner(&self, grid: &Grid) -> Result<WignerField> {
        match self {
            AnyState::Hw(s) => hw::wigner(s, grid),
            AnyState::Su2(s) => su2::wigner(s, grid),
        }
    }

    /// `F` over a displacement grid in units of `axis_unit`.
    pub fn overlap_field(&self, grid: &Grid, axis_unit: f64) -> Result<OverlapField> {
        match self {
            AnyState::Hw(s) => hw::overlap_field(s, grid, axis_unit),
            AnyState::Su2(s) => su2::overlap_field(s, grid, axis_unit),
        }
    }

    pub fn name(&self) -> &str {
        match self {
            AnyState::Hw(s) => &s.name,
            AnyState::Su2(s) => &s.name,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Group {
    Hw,
    Su2,
}

/// Named superpositions shared by both groups.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateFamily {
    CatH,
    CatV,
    Compass,
    #[serde(alias = "mixture")]
    CatMixture,
}

impl StateFamily {
    pub fn name(self) -> &'static str {
        match self {
            StateFamily::CatH => "cat_h",
            StateFamily::CatV => "cat_v",
            StateFamily::Compass => "compass",
            StateFamily::CatMixture => "cat_mixture",
        }
    }
}

impl std::str::FromStr for StateFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cat_h" | "cat" => Ok(StateFamily::CatH),
            "cat_v" => Ok(StateFamily::CatV),
            "compass" => Ok(StateFamily::Compass),
            "cat_mixture" | "mixture" => Ok(StateFamily::CatMixture),
            _ => Err(Error::InvalidState(format!("unknown state family {s:?}"))),
        }
    }
}

/// `j` from a real scale value; must be a non-negative multiple of 1/2.
pub fn spin_from_scale(scale: f64) -> Result<HalfInt> {
    let twice = 2.0 * scale;
    if !(twice.is_finite() && twice >= 0.0 && (twice - twice.round()).abs() < 1e-9) {
        return Err(Error::InvalidScale(format!("j = {scale} is not a half-integer")));
    }
    Ok(HalfInt::from_twice(twice.round() as i64))
}

/// Builds a named state; `scale` is `x0` for HW and `j` for SU(2).
pub fn build_state(group: Group, family: StateFamily, scale: f64) -> Result<AnyState> {
    match group {
        Group::Hw => Ok(AnyState::Hw(match family {
            StateFamily::CatH => HwState::cat_h(scale)?,
            StateFamily::CatV => HwState::cat_v(scale)?,
            StateFamily::Compass => HwState::compass(scale)?,
            StateFamily::CatMixture => HwState::cat_mixture(scale)?,
        })),
        Group::Su2 => {
            let j = spin_from_scale(scale)?;
            Ok(AnyState::Su2(match family {
                StateFamily::CatH => Su2State::cat_h(j)?,
                StateFamily::CatV => Su2State::cat_v(j)?,
                StateFamily::Compass => Su2State::compass(j)?,
                StateFamily::CatMixture => Su2State::cat_mixture(j)?,
            }))
        }
    }
}

/// Overlap along one ray of the displacement plane.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DirectionScan {
    /// Angle of the ray in radians.
    pub direction: f64,
    /// Smallest `|δ|` with `F < tol`, `None` if absent up to the scan radius.
    pub min_zero_magnitude: Option<f64>,
    /// `(|δ|, F)` on the coarse scan.
    pub samples: Vec<(f64, f64)>,
}

/// Samples along each ray before refinement.
pub const SCAN_STEPS: usize = 4000;

fn check_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0 && tol <= 1e-3) {
        return Err(Error::InvalidTolerance(tol));
    }
    Ok(())
}

/// Golden-section minimization of `f` on `[a, b]`.
fn golden_min<F: Fn(f64) -> Result<f64>>(f: F, mut a: f64, mut b: f64, xtol: f64) -> Result<f64> {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    while (b - a).abs() > xtol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d)?;
        }
    }
    Ok(0.5 * (a + b))
}

/// First zero of `F` along the ray at `direction`.
///
/// Local minima of the sampled `F` are refined by golden section on `√F`
/// (which is V-shaped at a simple zero); the first refined minimum with
/// `F < tol` is reported at the minimizer.
pub fn zero_scan(state: &AnyState, direction: f64, max_radius: f64, tol: f64) -> Result<DirectionScan> {
    zero_scan_with_steps(state, direction, max_radius, tol, SCAN_STEPS)
}

/// [`zero_scan`] with `steps` coarse samples instead of [`SCAN_STEPS`].
pub fn zero_scan_with_steps(
    state: &AnyState,
    direction: f64,
    max_radius: f64,
    tol: f64,
    steps: usize,
) -> Result<DirectionScan> {
    check_tol(tol)?;
    if steps < 2 {
        return Err(Error::InvalidScale(format!("scan needs at least 2 steps, got {steps}")));
    }
    if !(max_radius.is_finite() && max_radius > 0.0) {
        return Err(Error::InvalidScale(format!("scan radius {max_radius} must be positive")));
    }
    let unit = Complex64::from_polar(1.0, direction);
    let f = |s: f64| state.overlap(unit * s);
    let h = max_radius / steps as f64;
    let samples: Vec<(f64, f64)> = (0..=steps)
        .map(|i| {
            let s = i as f64 * h;
            Ok((s, f(s)?))
        })
        .collect::<Result<_>>()?;
    let mut found = None;
    for i in 1..steps {
        let (prev, cur, next) = (samples[i - 1].1, samples[i].1, samples[i + 1].1);
        if !(cur <= prev && cur <= next) {
            continue;
        }
        let s = golden_min(|s| Ok(f(s)?.max(0.0).sqrt()), samples[i - 1].0, samples[i + 1].0, 1e-13)?;
        if f(s)? < tol {
            found = Some(s);
            break;
        }
    }
    Ok(DirectionScan { direction, min_zero_magnitude: found, samples })
}

/// The four axes of the chessboard claims.
pub const DIRECTIONS: [f64; 4] = [0.0, PI / 4.0, PI / 2.0, 3.0 * PI / 4.0];

/// Central cell of a chessboard field.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TileReport {
    /// `Δx · Δp`.
    pub center_tile_area: f64,
    /// Full widths `(Δx, Δp)`.
    pub extents: (f64, f64),
    /// Distances from the origin to the nearest zero along `+x, -x, +p, -p`.
    pub half_extents: [f64; 4],
}

/// Relative depth below which a local minimum of `|W|` counts as a zero.
pub const TOUCH_FRACTION: f64 = 0.05;

/// Distance from the first sample to the first zero of `v`, sampled at
/// spacing `h`: a sign change (linear interpolation) or a touching zero (a
/// local minimum of `|v|` below `TOUCH_FRACTION · |v[0]|`, located at the
/// vertex of the parabola through the three samples).
fn first_zero(v: &[f64], h: f64) -> Option<f64> {
    let floor = TOUCH_FRACTION * v[0].abs();
    for k in 0..v.len() - 1 {
        let (a, b) = (v[k], v[k + 1]);
        if a == 0.0 {
            return Some(k as f64 * h);
        }
        if a * b < 0.0 {
            return Some((k as f64 + a / (a - b)) * h);
        }
        if k >= 1 {
            let (l, m, r) = (v[k - 1].abs(), a.abs(), b.abs());
            if m <= l && m <= r && m < floor {
                let den = l - 2.0 * m + r;
                let shift = if den > 0.0 { 0.5 * (l - r) / den } else { 0.0 };
                return Some((k as f64 + shift) * h);
            }
        }
    }
    None
}

fn origin_index(min: f64, step: f64, count: usize) -> Option<usize> {
    let i = (-min / step).round();
    if i < 0.0 || i as usize >= count {
        return None;
    }
    Some(i as usize)
}

/// Nearest zeros of `W` along the four half-axes through the origin.
pub fn tile_geometry(field: &WignerField) -> Result<TileReport> {
    let g = field.grid;
    let (hx, hp) = (g.x.step(), g.p.step());
    let ix0 = origin_index(g.x.min, hx, g.x.count);
    let ip0 = origin_index(g.p.min, hp, g.p.count);
    let (ix0, ip0) = match (ix0, ip0) {
        (Some(a), Some(b)) if g.x.coord(a).abs() < 1e-9 * hx.max(1.0) && g.p.coord(b).abs() < 1e-9 * hp.max(1.0) => {
            (a, b)
        }
        _ => return Err(Error::DegenerateGrid("the plane origin must be a grid sample".into())),
    };
    let px: Vec<f64> = (ix0..g.x.count).map(|i| field.value(i, ip0)).collect();
    let mx: Vec<f64> = (0..=ix0).rev().map(|i| field.value(i, ip0)).collect();
    let pp: Vec<f64> = (ip0..g.p.count).map(|i| field.value(ix0, i)).collect();
    let mp: Vec<f64> = (0..=ip0).rev().map(|i| field.value(ix0, i)).collect();
    let zero = |v: &[f64], h: f64, name: &'static str| -> Result<f64> {
        if v.len() < 3 {
            return Err(Error::NoChessboard(name));
        }
        first_zero(v, h).filter(|z| *z > 0.0).ok_or(Error::NoChessboard(name))
    };
    let half = [zero(&px, hx, "+x")?, zero(&mx, hx, "-x")?, zero(&pp, hp, "+p")?, zero(&mp, hp, "-p")?];
    let extents = (half[0] + half[1], half[2] + half[3]);
    Ok(TileReport { center_tile_area: extents.0 * extents.1, extents, half_extents: half })
}

/// Least-squares line through `(ln scale, ln quantity)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PowerFit {
    pub exponent: f64,
    pub prefactor: f64,
    pub r_squared: f64,
}

pub fn scaling_fit(points: &[(f64, f64)]) -> Result<PowerFit> {
    if points.len() < 3 {
        return Err(Error::InvalidFit(format!("need at least 3 points, got {}", points.len())));
    }
    if let Some(p) = points.iter().find(|(s, q)| !(s.is_finite() && q.is_finite() && *s > 0.0 && *q > 0.0)) {
        return Err(Error::InvalidFit(format!("point {p:?} is not positive")));
    }
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidFit("all scales are equal".into()));
    }
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 { 1.0 } else { (sxy * sxy / (sxx * syy)).min(1.0) };
    Ok(PowerFit { exponent: slope, prefactor: (my - slope * mx).exp(), r_squared })
}

/// Zero scans of one state at one scale.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnhancementRow {
    pub scale: f64,
    /// `(direction, min |δ| or None)`.
    pub zeros: Vec<(f64, Option<f64>)>,
}

/// Constancy of `min |δ| · scale` along one direction.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DirectionSummary {
    pub direction: f64,
    /// Zeros found at every scale.
    pub has_zeros: bool,
    /// `min |δ| · scale` per scale (where a zero exists).
    pub products: Vec<f64>,
    /// `(max - min) / mean` of the products.
    pub spread: f64,
    /// `spread ≤ 0.1`.
    pub constant: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnhancementReport {
    pub group: Group,
    pub family: StateFamily,
    pub rows: Vec<EnhancementRow>,
    pub directions: Vec<DirectionSummary>,
}

/// Default scan radius: 3 in HW phase-space units, 0.5 on the SU(2) plane
/// (inside the disc `|δ| < 1` where the sensitivity claims apply).
pub fn default_radius(group: Group) -> f64 {
    match group {
        Group::Hw => 3.0,
        Group::Su2 => 0.5,
    }
}

/// Minimal vanishing displacement per direction across scales. The
/// directions are [`DIRECTIONS`] followed by `extra_directions`.
pub fn enhancement_report(
    group: Group,
    family: StateFamily,
    scales: &[f64],
    extra_directions: &[f64],
    tol: f64,
) -> Result<EnhancementReport> {
    check_tol(tol)?;
    let dirs: Vec<f64> = DIRECTIONS.iter().chain(extra_directions).copied().collect();
    let radius = default_radius(group);
    let rows: Vec<EnhancementRow> = scales
        .par_iter()
        .map(|&scale| {
            let state = build_state(group, family, scale)?;
            let zeros = dirs
                .iter()
                .map(|&d| Ok((d, zero_scan(&state, d, radius, tol)?.min_zero_magnitude)))
                .collect::<Result<_>>()?;
            Ok(EnhancementRow { scale, zeros })
        })
        .collect::<Result<_>>()?;
    let directions = dirs
        .iter()
        .enumerate()
        .map(|(k, &direction)| {
            let found: Vec<Option<f64>> = rows.iter().map(|r| r.zeros[k].1).collect();
            let products: Vec<f64> =
                rows.iter().zip(&found).filter_map(|(r, z)| z.map(|z| z * r.scale)).collect();
            let has_zeros = !found.is_empty() && found.iter().all(Option::is_some);
            let spread = relative_spread(&products);
            DirectionSummary { direction, has_zeros, products, spread, constant: has_zeros && spread <= 0.1 }
        })
        .collect();
    Ok(EnhancementReport { group, family, rows, directions })
}

/// `(max - min) / mean`; zero for fewer than two values.
pub fn relative_spread(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    (max - min) / mean
}

/// Grid around the origin that resolves the central tile of a compass-like
/// state: `[-4π/x0, 4π/x0]²` (HW) or `[-π/j, π/j]²` (SU(2)), 401² samples.
pub fn tile_grid(group: Group, scale: f64) -> Result<Grid> {
    if !(scale.is_finite() && scale > 0.0) {
        return Err(Error::InvalidScale(format!("scale {scale} must be positive")));
    }
    match group {
        Group::Hw => Grid::square(4.0 * PI / scale, 401),
        Group::Su2 => Grid::square(PI / scale, 401),
    }
}

/// Central tile of `family` at each scale, with a power-law fit of the tile
/// area (HW) or mean extent (SU(2)) against the scale.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TileScaling {
    pub group: Group,
    pub family: StateFamily,
    pub tiles: Vec<(f64, TileReport)>,
    /// Fitted quantity per scale.
    pub quantity: Vec<(f64, f64)>,
    pub fit: PowerFit,
}

pub fn tile_scaling(group: Group, family: StateFamily, scales: &[f64]) -> Result<TileScaling> {
    let tiles: Vec<(f64, TileReport)> = scales
        .iter()
        .map(|&s| {
            let state = build_state(group, family, s)?;
            Ok((s, tile_geometry(&state.wigner(&tile_grid(group, s)?)?)?))
        })
        .collect::<Result<_>>()?;
    let quantity: Vec<(f64, f64)> = tiles
        .iter()
        .map(|(s, t)| match group {
            Group::Hw => (*s, t.center_tile_area),
            Group::Su2 => (*s, 0.5 * (t.extents.0 + t.extents.1)),
        })
        .collect();
    let fit = scaling_fit(&quantity)?;
    Ok(TileScaling { group, family, tiles, quantity, fit })
}
