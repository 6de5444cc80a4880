//! Heisenberg–Weyl coherent-state superpositions.
//!
//! Conventions: quadratures `x = a + a†`, `p = i(a† - a)`, so a coherent
//! state `|α⟩` sits at the phase-space point `r = 2(Re α, Im α)`. Plane
//! points and displacements are both passed as complex numbers `x + i p` in
//! these phase-space units; a displacement `δ = δ_x + i δ_p` corresponds to
//! the operator `D(δα)` with `δα = δ / 2`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{FieldMeta, Grid, GroupTag, Normalization, OverlapField, WignerField};
use crate::state::{self, CoherentFamily, PreparedState, StateKind, Terms};

/// Coherent amplitude `α`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HwLabel {
    pub alpha: Complex64,
}

impl HwLabel {
    pub fn new(alpha: Complex64) -> Self {
        HwLabel { alpha }
    }

    /// Phase-space location `r = 2α` as `x + i p`.
    pub fn point(&self) -> Complex64 {
        self.alpha * 2.0
    }

    /// Mean quantum number `|α|²` of the coherent state.
    pub fn mean_number(&self) -> f64 {
        self.alpha.norm_sqr()
    }
}

/// Oscillator coherent states.
#[derive(Clone, Copy, Debug, Default)]
pub struct HwFamily;

/// `aᵀ Ω b` with the symplectic form `Ω = ((0, 1), (-1, 0))`.
fn symplectic(a: Complex64, b: Complex64) -> f64 {
    a.re * b.im - a.im * b.re
}

/// `⟨a|b⟩ = exp(-i Im{a b*} - |a - b|²/2)`.
pub fn coherent_overlap(a: Complex64, b: Complex64) -> Complex64 {
    let phase = -(a * b.conj()).im;
    let mag = -(a - b).norm_sqr() / 2.0;
    Complex64::new(mag, phase).exp()
}

/// Wigner function of `|α_n⟩⟨α_m|` at the phase-space point `r`.
pub fn wigner_cross_term(n: HwLabel, m: HwLabel, r: Complex64) -> Complex64 {
    let rn = n.point();
    let rm = m.point();
    let centre = (rn + rm) / 2.0;
    let gauss = -(r - centre).norm_sqr() / 2.0;
    let phase = -0.5 * symplectic(rn - rm, r) + 0.25 * symplectic(rn, rm);
    Complex64::new(gauss, phase).exp() / (2.0 * PI)
}

impl CoherentFamily for HwFamily {
    type Label = HwLabel;

    fn overlap(&self, a: HwLabel, b: HwLabel) -> Complex64 {
        coherent_overlap(a.alpha, b.alpha)
    }

    fn displaced_element(&self, a: HwLabel, delta: Complex64, b: HwLabel) -> Complex64 {
        // D(δα)|β⟩ = exp(i Im{δα β*}) |β + δα⟩
        let da = delta / 2.0;
        let phase = Complex64::new(0.0, (da * b.alpha.conj()).im).exp();
        phase * coherent_overlap(a.alpha, b.alpha + da)
    }

    fn wigner_cross(&self, ket: HwLabel, bra: HwLabel, point: Complex64) -> Complex64 {
        wigner_cross_term(ket, bra, point)
    }
}

/// A Heisenberg–Weyl state: a superposition or a mixture of superpositions.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HwState {
    pub kind: StateKind<HwLabel>,
    /// Name of the constructor that built the state.
    pub name: String,
    /// Separation parameter of the named cat/compass constructors.
    pub x0: Option<f64>,
}

fn one(alpha: Complex64) -> (Complex64, HwLabel) {
    (Complex64::new(1.0, 0.0), HwLabel::new(alpha))
}

fn check_x0(x0: f64) -> Result<()> {
    if !(x0.is_finite() && x0 > 0.0) {
        return Err(Error::InvalidScale(format!("x0 = {x0} must be positive and finite")));
    }
    Ok(())
}

fn horizontal_terms(x0: f64) -> Terms<HwLabel> {
    vec![one(Complex64::new(x0 / 2.0, 0.0)), one(Complex64::new(-x0 / 2.0, 0.0))]
}

fn vertical_terms(x0: f64) -> Terms<HwLabel> {
    vec![one(Complex64::new(0.0, x0 / 2.0)), one(Complex64::new(0.0, -x0 / 2.0))]
}

impl HwState {
    pub fn coherent(alpha: Complex64) -> Result<Self> {
        HwState::custom("coherent", vec![one(alpha)])
    }

    /// `|x0/2⟩ + |-x0/2⟩`.
    pub fn cat_h(x0: f64) -> Result<Self> {
        check_x0(x0)?;
        Ok(HwState { kind: StateKind::Pure(horizontal_terms(x0)), name: "cat_h".into(), x0: Some(x0) })
    }

    /// `|i x0/2⟩ + |-i x0/2⟩`, the horizontal cat rotated by π/2.
    pub fn cat_v(x0: f64) -> Result<Self> {
        check_x0(x0)?;
        Ok(HwState { kind: StateKind::Pure(vertical_terms(x0)), name: "cat_v".into(), x0: Some(x0) })
    }

    /// Horizontal plus vertical cat.
    pub fn compass(x0: f64) -> Result<Self> {
        check_x0(x0)?;
        let mut terms = horizontal_terms(x0);
        terms.extend(vertical_terms(x0));
        Ok(HwState { kind: StateKind::Pure(terms), name: "compass".into(), x0: Some(x0) })
    }

    /// Equal-weight incoherent mixture of the horizontal and vertical cats.
    pub fn cat_mixture(x0: f64) -> Result<Self> {
        check_x0(x0)?;
        let kind = StateKind::Mixture(vec![(1.0, horizontal_terms(x0)), (1.0, vertical_terms(x0))]);
        Ok(HwState { kind, name: "cat_mixture".into(), x0: Some(x0) })
    }

    /// Arbitrary superposition `Σ ψ_n |α_n⟩`.
    pub fn custom(name: &str, terms: Terms<HwLabel>) -> Result<Self> {
        if terms.iter().any(|(w, l)| !(w.is_finite() && l.alpha.is_finite())) {
            return Err(Error::InvalidState("weights and labels must be finite".into()));
        }
        let s = HwState { kind: StateKind::Pure(terms), name: name.into(), x0: None };
        state::validate(&HwFamily, &s.kind)?;
        Ok(s)
    }

    /// Every coherent label appearing in the state.
    pub fn labels(&self) -> Vec<HwLabel> {
        match &self.kind {
            StateKind::Pure(t) => t.iter().map(|(_, l)| *l).collect(),
            StateKind::Mixture(p) => p.iter().flat_map(|(_, t)| t.iter().map(|(_, l)| *l)).collect(),
        }
    }

    /// `⟨ψ|ψ⟩` of a pure state, from the Gram matrix.
    pub fn norm_sq(&self) -> Option<f64> {
        match &self.kind {
            StateKind::Pure(t) => Some(state::norm_sq(&HwFamily, t)),
            StateKind::Mixture(_) => None,
        }
    }

    fn tag(&self) -> GroupTag {
        GroupTag::Hw { x0: self.x0 }
    }
}

/// Wigner function of the normalized state at `r = x + i p`.
pub fn wigner_at(state: &HwState, r: Complex64) -> Result<f64> {
    state::wigner_point(&HwFamily, &state.kind, r)
}

/// Wigner field of the normalized state (raw values).
pub fn wigner(state: &HwState, grid: &Grid) -> Result<WignerField> {
    let prepared = PreparedState::new(&HwFamily, &state.kind)?;
    let values = grid.fill(|r| prepared.wigner(&HwFamily, r))?;
    Ok(WignerField {
        grid: *grid,
        values,
        meta: FieldMeta { group: state.tag(), state: state.name.clone(), normalization: Normalization::Raw },
    })
}

/// Default plotting grid: 401² samples over `[-1.5 x0, 1.5 x0]²`.
pub fn default_grid(x0: f64) -> Result<Grid> {
    check_x0(x0)?;
    Grid::square(1.5 * x0, 401)
}

/// Displacement overlap `F(δ)` normalized to `F(0) = 1`, `δ = δ_x + i δ_p`.
pub fn overlap(state: &HwState, delta: Complex64) -> Result<f64> {
    state::overlap(&HwFamily, &state.kind, delta)
}

/// `F` over a displacement grid whose coordinates are in units of `axis_unit`.
pub fn overlap_field(state: &HwState, grid: &Grid, axis_unit: f64) -> Result<OverlapField> {
    state::validate(&HwFamily, &state.kind)?;
    let values = grid.fill(|d| overlap(state, d * axis_unit))?;
    OverlapField::check_range(&values)?;
    Ok(OverlapField {
        grid: *grid,
        axis_unit,
        values,
        meta: FieldMeta { group: state.tag(), state: state.name.clone(), normalization: Normalization::Raw },
    })
}

/// Closed forms valid for well-separated coherent states (`x0 ≫ 1`), used as
/// cross-checks of the pairwise evaluation. Wigner expressions omit the
/// `1/(2π)` prefactor and the state normalization.
pub mod closed {
    fn gauss(x: f64) -> f64 {
        (-0.5 * x * x).exp()
    }

    /// Double-peak profile `V(x; x0)`.
    pub fn double_peak(x: f64, x0: f64) -> f64 {
        gauss(x - x0) + gauss(x + x0)
    }

    /// Horizontal cat: `e^{-p²/2} [V(x; x0) + 2 e^{-x²/2} cos(x0 p)]`.
    pub fn cat_wigner(x0: f64, x: f64, p: f64) -> f64 {
        gauss(p) * (double_peak(x, x0) + 2.0 * gauss(x) * (x0 * p).cos())
    }

    /// Lobes of the four coherent components of a compass state.
    pub fn compass_coherent_part(x0: f64, x: f64, p: f64) -> f64 {
        gauss(p) * double_peak(x, x0) + gauss(x) * double_peak(p, x0)
    }

    /// Central chessboard `e^{-(x²+p²)/2} [cos(x0 p) + cos(x0 x)]`.
    pub fn central_pattern(x0: f64, x: f64, p: f64) -> f64 {
        gauss(x) * gauss(p) * ((x0 * p).cos() + (x0 * x).cos())
    }

    fn g(x0: f64, x: f64, p: f64) -> f64 {
        let h = x0 / 2.0;
        (-0.5 * ((x - h).powi(2) + (p - h).powi(2))).exp() * (h * (x + p - h)).cos()
    }

    /// Off-axis interference between horizontal and vertical components.
    pub fn compass_off_axis_part(x0: f64, x: f64, p: f64) -> f64 {
        let mut acc = 0.0;
        for sx in [1.0, -1.0] {
            for sp in [1.0, -1.0] {
                acc += g(x0, sx * x, sp * p);
            }
        }
        acc
    }

    /// `W_coh + 2 W_cent + 2 W_int`.
    pub fn compass_wigner(x0: f64, x: f64, p: f64) -> f64 {
        compass_coherent_part(x0, x, p) + 2.0 * central_pattern(x0, x, p) + 2.0 * compass_off_axis_part(x0, x, p)
    }

    /// `W_coh + 2 W_cent`.
    pub fn mixture_wigner(x0: f64, x: f64, p: f64) -> f64 {
        compass_coherent_part(x0, x, p) + 2.0 * central_pattern(x0, x, p)
    }

    fn envelope(dx: f64, dp: f64) -> f64 {
        // |δα|² = (δ_x² + δ_p²)/4
        (-(dx * dx + dp * dp) / 4.0).exp()
    }

    /// Coherent state: `e^{-|δα|²}`.
    pub fn coherent_overlap(dx: f64, dp: f64) -> f64 {
        envelope(dx, dp)
    }

    /// Horizontal cat: `½ e^{-|δα|²} [1 + cos(x0 δ_p)]`.
    pub fn cat_overlap(x0: f64, dx: f64, dp: f64) -> f64 {
        0.5 * envelope(dx, dp) * (1.0 + (x0 * dp).cos())
    }

    /// Compass, bracket form: `¼ e^{-|δα|²} [cos(x0 δ_x/2) + cos(x0 δ_p/2)]²`.
    pub fn compass_overlap(x0: f64, dx: f64, dp: f64) -> f64 {
        let b = (x0 * dx / 2.0).cos() + (x0 * dp / 2.0).cos();
        0.25 * envelope(dx, dp) * b * b
    }

    /// Compass, product form in `δ_± = δ_x ± δ_p`.
    pub fn compass_overlap_product(x0: f64, dx: f64, dp: f64) -> f64 {
        let c1 = (x0 * (dx + dp) / 4.0).cos();
        let c2 = (x0 * (dx - dp) / 4.0).cos();
        envelope(dx, dp) * c1 * c1 * c2 * c2
    }

    /// Cat mixture: `¼ e^{-|δα|²} [2 + cos(x0 δ_x) + cos(x0 δ_p)]`.
    pub fn mixture_overlap(x0: f64, dx: f64, dp: f64) -> f64 {
        0.25 * envelope(dx, dp) * (2.0 + (x0 * dx).cos() + (x0 * dp).cos())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn coherent_overlap_examples() {
        assert!((coherent_overlap(c(0.0, 0.0), c(0.0, 0.0)) - 1.0).norm() < 1e-15);
        assert!((coherent_overlap(c(2.0, 1.0), c(2.0, 1.0)) - 1.0).norm() < 1e-15);
        assert!((coherent_overlap(c(0.0, 0.0), c(2.0, 0.0)).norm() - (-2.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn cross_term_examples() {
        let zero = HwLabel::new(c(0.0, 0.0));
        assert!((wigner_cross_term(zero, zero, c(0.0, 0.0)) - 1.0 / (2.0 * PI)).norm() < 1e-16);
        let a = HwLabel::new(c(1.3, -0.4));
        assert!((wigner_cross_term(a, a, a.point()) - 1.0 / (2.0 * PI)).norm() < 1e-16);
        // cat components ±4 at r = (0, π/8): modulus e^{-(π/8)²/2}/(2π), phase x0 p
        let (n, m) = (HwLabel::new(c(2.0, 0.0)), HwLabel::new(c(-2.0, 0.0)));
        let w = wigner_cross_term(n, m, c(0.0, PI / 8.0));
        assert!((w.norm() - (-(PI / 8.0).powi(2) / 2.0).exp() / (2.0 * PI)).abs() < 1e-15);
        assert!((w.arg() + 4.0 * PI / 8.0).abs() < 1e-14);
    }

    #[test]
    fn named_constructors() {
        let labels = |s: HwState| s.labels().iter().map(|l| l.alpha).collect::<Vec<_>>();
        assert_eq!(labels(HwState::cat_h(8.0).unwrap()), vec![c(4.0, 0.0), c(-4.0, 0.0)]);
        assert_eq!(labels(HwState::cat_v(8.0).unwrap()), vec![c(0.0, 4.0), c(0.0, -4.0)]);
        assert_eq!(labels(HwState::compass(8.0).unwrap()).len(), 4);
        assert!(matches!(HwState::cat_mixture(8.0).unwrap().kind, StateKind::Mixture(_)));
        assert!(HwState::cat_h(0.0).is_err());
        assert!(HwState::compass(-1.0).is_err());
        assert!(HwState::cat_v(f64::INFINITY).is_err());
    }

    #[test]
    fn zero_norm_superposition_rejected() {
        let l = HwLabel::new(c(1.0, 0.0));
        let r = HwState::custom("null", vec![(c(1.0, 0.0), l), (c(-1.0, 0.0), l)]);
        assert!(matches!(r, Err(Error::InvalidState(_))));
        assert!(HwState::custom("empty", vec![]).is_err());
    }

    #[test]
    fn vacuum_peak() {
        let v = HwState::coherent(c(0.0, 0.0)).unwrap();
        assert!((wigner_at(&v, c(0.0, 0.0)).unwrap() - 1.0 / (2.0 * PI)).abs() < 1e-16);
    }

    #[test]
    fn cat_central_zero() {
        let cat = HwState::cat_h(8.0).unwrap();
        let w = wigner_at(&cat, c(0.0, PI / 16.0)).unwrap();
        assert!(w.abs() < 1e-13, "{w}");
    }

    #[test]
    fn overlap_examples() {
        let coh = HwState::coherent(c(0.7, -1.1)).unwrap();
        // δ = 2 ⇔ δα = 1
        assert!((overlap(&coh, c(2.0, 0.0)).unwrap() - (-1.0f64).exp()).abs() < 1e-15);
        let cat = HwState::cat_h(8.0).unwrap();
        assert!(overlap(&cat, c(0.0, PI / 8.0)).unwrap() < 1e-12);
        let compass = HwState::compass(8.0).unwrap();
        assert!(overlap(&compass, c(PI / 8.0, PI / 8.0)).unwrap() < 1e-12);
        let mix = HwState::cat_mixture(8.0).unwrap();
        assert!(overlap(&mix, c(PI / 8.0, PI / 8.0)).unwrap() < 1e-12);
        assert!(overlap(&mix, c(PI / 8.0, 0.0)).unwrap() > 0.2);
    }

    #[test]
    fn compass_closed_forms_agree() {
        for &(dx, dp) in &[(0.1, 0.2), (-0.7, 0.3), (1.1, -0.9)] {
            let a = closed::compass_overlap(8.0, dx, dp);
            let b = closed::compass_overlap_product(8.0, dx, dp);
            assert!((a - b).abs() < 1e-14);
        }
    }
}
