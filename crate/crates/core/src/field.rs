//! Sampled planar fields: grids, Wigner fields and overlap fields.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfn::HalfInt;

/// Uniform samples `min, ..., max` (both ends included).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Axis {
    pub fn new(min: f64, max: f64, count: usize) -> Self {
        Axis { min, max, count }
    }

    /// Symmetric axis `[-half_width, half_width]`.
    pub fn symmetric(half_width: f64, count: usize) -> Self {
        Axis::new(-half_width, half_width, count)
    }

    pub fn step(&self) -> f64 {
        (self.max - self.min) / (self.count - 1) as f64
    }

    pub fn coord(&self, i: usize) -> f64 {
        if i + 1 == self.count {
            self.max
        } else {
            self.min + i as f64 * self.step()
        }
    }

    fn validate(&self, name: &str) -> Result<()> {
        if !(self.min.is_finite() && self.max.is_finite()) {
            return Err(Error::DegenerateGrid(format!("{name} range is not finite")));
        }
        if self.count < 2 {
            return Err(Error::DegenerateGrid(format!("{name} needs at least 2 samples")));
        }
        if !(self.max > self.min) {
            return Err(Error::DegenerateGrid(format!("{name} range [{}, {}] is empty", self.min, self.max)));
        }
        Ok(())
    }
}

/// Rectangular grid over the plane; values are stored row-major with `x`
/// as the slow index and `p` as the fast index.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub x: Axis,
    pub p: Axis,
}

impl Grid {
    pub fn new(x: Axis, p: Axis) -> Result<Self> {
        x.validate("x")?;
        p.validate("p")?;
        Ok(Grid { x, p })
    }

    /// Square grid `[-half_width, half_width]²` with `count` samples per axis.
    pub fn square(half_width: f64, count: usize) -> Result<Self> {
        Grid::new(Axis::symmetric(half_width, count), Axis::symmetric(half_width, count))
    }

    pub fn len(&self) -> usize {
        self.x.count * self.p.count
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, ix: usize, ip: usize) -> usize {
        ix * self.p.count + ip
    }

    pub fn point(&self, ix: usize, ip: usize) -> Complex64 {
        Complex64::new(self.x.coord(ix), self.p.coord(ip))
    }

    /// Evaluates `f` at every grid point, rows in parallel. The result does
    /// not depend on the thread count.
    pub fn fill<F>(&self, f: F) -> Result<Vec<f64>>
    where
        F: Fn(Complex64) -> Result<f64> + Sync,
    {
        let rows: Vec<Vec<f64>> = (0..self.x.count)
            .into_par_iter()
            .map(|ix| (0..self.p.count).map(|ip| f(self.point(ix, ip))).collect::<Result<Vec<f64>>>())
            .collect::<Result<_>>()?;
        let values: Vec<f64> = rows.into_iter().flatten().collect();
        if let Some(bad) = values.iter().position(|v| !v.is_finite()) {
            let (ix, ip) = (bad / self.p.count, bad % self.p.count);
            return Err(Error::Numeric(format!("non-finite value at {}", self.point(ix, ip))));
        }
        Ok(values)
    }

    /// Trapezoidal estimate of `∫∫ values dx dp`.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        let wx = |i: usize| if i == 0 || i + 1 == self.x.count { 0.5 } else { 1.0 };
        let wp = |i: usize| if i == 0 || i + 1 == self.p.count { 0.5 } else { 1.0 };
        let mut acc = 0.0;
        for ix in 0..self.x.count {
            for ip in 0..self.p.count {
                acc += wx(ix) * wp(ip) * values[self.index(ix, ip)];
            }
        }
        acc * self.x.step() * self.p.step()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Normalization {
    /// Divide by the field maximum.
    #[default]
    Max,
    /// Values of the normalized state, unscaled.
    Raw,
}

/// Which group a field belongs to, with its scale parameter.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "group", rename_all = "lowercase")]
pub enum GroupTag {
    Hw { x0: Option<f64> },
    Su2 { j: HalfInt },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldMeta {
    pub group: GroupTag,
    pub state: String,
    pub normalization: Normalization,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WignerField {
    pub grid: Grid,
    pub values: Vec<f64>,
    pub meta: FieldMeta,
}

fn extreme(values: &[f64], pick: fn(f64, f64) -> f64, init: f64) -> f64 {
    values.iter().copied().fold(init, pick)
}

impl WignerField {
    pub fn value(&self, ix: usize, ip: usize) -> f64 {
        self.values[self.grid.index(ix, ip)]
    }

    pub fn max(&self) -> f64 {
        extreme(&self.values, f64::max, f64::NEG_INFINITY)
    }

    pub fn min(&self) -> f64 {
        extreme(&self.values, f64::min, f64::INFINITY)
    }

    /// Rescales according to `mode`; `Max` divides by the maximum value.
    pub fn normalized(mut self, mode: Normalization) -> Result<Self> {
        if mode == Normalization::Max {
            let m = self.max();
            if !(m.is_finite() && m > 0.0) {
                return Err(Error::Numeric(format!("cannot normalize to maximum {m}")));
            }
            self.values.iter_mut().for_each(|v| *v /= m);
        }
        self.meta.normalization = mode;
        Ok(self)
    }

    pub fn integral(&self) -> f64 {
        self.grid.integrate(&self.values)
    }
}

/// Overlap `F` sampled over a displacement grid. Grid coordinates are in
/// units of `axis_unit`: the physical displacement at `(x, p)` is
/// `(x + i p) · axis_unit`.
#[derive(Clone, Debug, PartialEq)]
pub struct OverlapField {
    pub grid: Grid,
    pub axis_unit: f64,
    pub values: Vec<f64>,
    pub meta: FieldMeta,
}

impl OverlapField {
    pub fn value(&self, ix: usize, ip: usize) -> f64 {
        self.values[self.grid.index(ix, ip)]
    }

    pub fn max(&self) -> f64 {
        extreme(&self.values, f64::max, f64::NEG_INFINITY)
    }

    pub fn min(&self) -> f64 {
        extreme(&self.values, f64::min, f64::INFINITY)
    }

    pub(crate) fn check_range(values: &[f64]) -> Result<()> {
        if let Some(v) = values.iter().find(|v| !(**v >= -1e-12 && **v <= 1.0 + 1e-12)) {
            return Err(Error::Numeric(format!("overlap value {v} outside [0, 1]")));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_endpoints_are_exact() {
        let a = Axis::new(-12.0, 12.0, 401);
        assert_eq!(a.coord(0), -12.0);
        assert_eq!(a.coord(400), 12.0);
        assert_eq!(a.coord(200), 0.0);
    }

    #[test]
    fn degenerate_grids_rejected() {
        assert!(Grid::square(1.0, 1).is_err());
        assert!(Grid::new(Axis::new(1.0, 1.0, 10), Axis::new(0.0, 1.0, 10)).is_err());
        assert!(Grid::new(Axis::new(0.0, f64::NAN, 10), Axis::new(0.0, 1.0, 10)).is_err());
    }

    #[test]
    fn fill_is_row_major() {
        let g = Grid::new(Axis::new(0.0, 1.0, 2), Axis::new(0.0, 2.0, 3)).unwrap();
        let v = g.fill(|z| Ok(10.0 * z.re + z.im)).unwrap();
        assert_eq!(v, vec![0.0, 1.0, 2.0, 10.0, 11.0, 12.0]);
    }

    #[test]
    fn fill_rejects_non_finite() {
        let g = Grid::square(1.0, 3).unwrap();
        assert!(g.fill(|_| Ok(f64::NAN)).is_err());
    }

    #[test]
    fn trapezoid_integrates_bilinear_exactly() {
        let g = Grid::new(Axis::new(0.0, 2.0, 5), Axis::new(-1.0, 1.0, 7)).unwrap();
        let v = g.fill(|z| Ok(1.0 + z.re * z.im + z.re)).unwrap();
        // ∫_0^2 ∫_-1^1 (1 + x p + x) dp dx = 4 + 0 + 4
        assert!((g.integrate(&v) - 8.0).abs() < 1e-13);
    }
}
