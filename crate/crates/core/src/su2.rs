//! SU(2) coherent-state superpositions on the stereographic plane.
//!
//! A spin coherent state `|γ⟩ = D(γ)|j,j⟩` is labelled by the stereographic
//! image `γ = e^{iφ} tan(θ/2)` of its point on the sphere; the origin is the
//! north pole and the unit circle the equator. Basis amplitudes are indexed by
//! `k = j - μ`, so index 0 is the reference state `|j,j⟩`.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{FieldMeta, Grid, GroupTag, Normalization, OverlapField, WignerField};
use crate::specfn::{self, kernel_weights, ln_binomial, ln_factorial, HalfInt, KernelWeights};
use crate::state::{self, CoherentFamily, PreparedState, StateKind, Terms};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Su2Label {
    pub gamma: Complex64,
}

impl Su2Label {
    pub fn new(gamma: Complex64) -> Self {
        Su2Label { gamma }
    }

    pub fn from_sphere(theta: f64, phi: f64) -> Result<Self> {
        sphere_to_stereographic(theta, phi).map(Su2Label::new)
    }

    /// `(θ, φ)` on the unit sphere.
    pub fn sphere(&self) -> (f64, f64) {
        stereographic_to_sphere(self.gamma)
    }
}

/// `γ ↦ (θ, φ)` with `θ = 2 atan|γ|`, `φ = arg γ`.
pub fn stereographic_to_sphere(gamma: Complex64) -> (f64, f64) {
    (2.0 * gamma.norm().atan(), gamma.arg())
}

/// `(θ, φ) ↦ e^{iφ} tan(θ/2)`; the south pole has no image.
pub fn sphere_to_stereographic(theta: f64, phi: f64) -> Result<Complex64> {
    if (PI - theta).abs() < 1e-12 {
        return Err(Error::SouthPole);
    }
    Ok(Complex64::from_polar((theta / 2.0).tan(), phi))
}

/// `D(γ1) D(γ2) = D(γ3) e^{iφ J_3}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Composition {
    pub gamma3: Complex64,
    pub varphi: f64,
}

/// Composition rule `γ3 = (γ1 + γ2)/(1 - γ1* γ2)`, `φ = 2 arg(1 - γ1* γ2)`.
pub fn compose(g1: Complex64, g2: Complex64) -> Result<Composition> {
    let den = 1.0 - g1.conj() * g2;
    if den.norm() < 1e-12 {
        return Err(Error::Antipodal(den.norm()));
    }
    Ok(Composition { gamma3: (g1 + g2) / den, varphi: 2.0 * den.arg() })
}

fn check_spin(j: HalfInt) -> Result<()> {
    if j.twice() < 0 {
        return Err(Error::InvalidScale(format!("spin j = {j} must be non-negative")));
    }
    Ok(())
}

/// `z^n` from the polar form, with `0^0 = 1`.
fn ipow(z: Complex64, n: i64) -> Complex64 {
    if n == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let r = z.norm();
    if r == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    Complex64::from_polar((n as f64 * r.ln()).exp(), n as f64 * z.arg())
}

/// `u_k(γ) = √C(2j,k) γ^k / (1+|γ|²)^j`, `k = j - μ`, in log-space.
pub fn coherent_amplitudes(j: HalfInt, gamma: Complex64) -> Result<Vec<Complex64>> {
    check_spin(j)?;
    let n = j.twice();
    let ln_norm = 0.5 * n as f64 * gamma.norm_sqr().ln_1p();
    let (ln_g, arg_g) = (gamma.norm().ln(), gamma.arg());
    Ok((0..=n)
        .map(|k| {
            if gamma.norm() == 0.0 {
                return Complex64::new(if k == 0 { 1.0 } else { 0.0 }, 0.0);
            }
            let ln_mag = 0.5 * ln_binomial(n as u64, k as u64) + k as f64 * ln_g - ln_norm;
            Complex64::from_polar(ln_mag.exp(), k as f64 * arg_g)
        })
        .collect())
}

/// `⟨γ1|γ2⟩ = (1 + γ1* γ2)^{2j} / ((1+|γ1|²)(1+|γ2|²))^j`.
pub fn coherent_overlap(j: HalfInt, g1: Complex64, g2: Complex64) -> Complex64 {
    let n = j.twice();
    let den = (0.5 * n as f64 * (g1.norm_sqr().ln_1p() + g2.norm_sqr().ln_1p())).exp();
    ipow(1.0 + g1.conj() * g2, n) / den
}

/// `⟨γ1|D(δ)|γ2⟩ = (1 + γ1* δ - δ* γ2 + γ1* γ2)^{2j} / ((1+|δ|²)(1+|γ1|²)(1+|γ2|²))^j`.
pub fn displaced_matrix_element(j: HalfInt, g1: Complex64, delta: Complex64, g2: Complex64) -> Complex64 {
    let n = j.twice();
    let ln_den = delta.norm_sqr().ln_1p() + g1.norm_sqr().ln_1p() + g2.norm_sqr().ln_1p();
    let num = 1.0 + g1.conj() * delta - delta.conj() * g2 + g1.conj() * g2;
    ipow(num, n) / (0.5 * n as f64 * ln_den).exp()
}

/// Spin-`j` coherent states with the Stratonovich–Weyl kernel.
#[derive(Debug)]
pub struct Su2Family {
    j: HalfInt,
    half_ln_binom: Vec<f64>,
    kernel: OnceLock<KernelWeights>,
}

impl Su2Family {
    pub fn new(j: HalfInt) -> Result<Self> {
        check_spin(j)?;
        let n = j.twice() as u64;
        let half_ln_binom = (0..=n).map(|k| 0.5 * ln_binomial(n, k)).collect();
        Ok(Su2Family { j, half_ln_binom, kernel: OnceLock::new() })
    }

    pub fn j(&self) -> HalfInt {
        self.j
    }

    pub fn kernel(&self) -> &KernelWeights {
        self.kernel.get_or_init(|| kernel_weights(self.j).expect("spin checked on construction"))
    }

    /// `v_k = ⟨j, j-k| D(γ)† |γ_c⟩`
    /// `    = √C(2j,k) (γ_c - γ)^k (1 + γ* γ_c)^{2j-k} / ((1+|γ|²)(1+|γ_c|²))^j`.
    fn displaced_amplitudes(&self, point: Complex64, centre: Complex64, out: &mut Vec<Complex64>) {
        let n = self.j.twice() as usize;
        let a = centre - point;
        let b = 1.0 + point.conj() * centre;
        let ln_den = 0.5 * n as f64 * (point.norm_sqr().ln_1p() + centre.norm_sqr().ln_1p());
        out.clear();
        let (ra, rb) = (a.norm(), b.norm());
        if ra == 0.0 || rb == 0.0 {
            // only one basis state survives
            let k = if ra == 0.0 { 0 } else { n };
            out.resize(n + 1, Complex64::new(0.0, 0.0));
            out[k] = ipow(if ra == 0.0 { b } else { a }, n as i64) / ln_den.exp();
            return;
        }
        let (la, lb) = (ra.ln(), rb.ln());
        let (pa, pb) = (a / ra, b / rb);
        // unit phases (a/|a|)^k (b/|b|)^{n-k}, built up incrementally
        let step = pa * pb.conj();
        let mut phase = ipow(pb, n as i64);
        for k in 0..=n {
            let ln_mag = self.half_ln_binom[k] + k as f64 * la + (n - k) as f64 * lb - ln_den;
            out.push(phase * ln_mag.exp());
            phase *= step;
        }
    }
}

impl CoherentFamily for Su2Family {
    type Label = Su2Label;

    fn overlap(&self, a: Su2Label, b: Su2Label) -> Complex64 {
        coherent_overlap(self.j, a.gamma, b.gamma)
    }

    fn displaced_element(&self, a: Su2Label, delta: Complex64, b: Su2Label) -> Complex64 {
        displaced_matrix_element(self.j, a.gamma, delta, b.gamma)
    }

    fn wigner_cross(&self, ket: Su2Label, bra: Su2Label, point: Complex64) -> Complex64 {
        let (mut vn, mut vm) = (Vec::new(), Vec::new());
        self.displaced_amplitudes(point, ket.gamma, &mut vn);
        self.displaced_amplitudes(point, bra.gamma, &mut vm);
        kernel_sum(self.kernel(), &vn, &vm)
    }

    fn wigner_terms(&self, terms: &Terms<Su2Label>, point: Complex64) -> (Complex64, f64) {
        let kernel = self.kernel();
        let v: Vec<Vec<Complex64>> = terms
            .iter()
            .map(|(_, l)| {
                let mut out = Vec::new();
                self.displaced_amplitudes(point, l.gamma, &mut out);
                out
            })
            .collect();
        let mut acc = Complex64::new(0.0, 0.0);
        let mut scale = 0.0;
        for (n, &(wn, _)) in terms.iter().enumerate() {
            for (m, &(wm, _)) in terms.iter().enumerate() {
                let t = wn * wm.conj() * kernel_sum(kernel, &v[n], &v[m]);
                scale += t.norm();
                acc += t;
            }
        }
        (acc, scale)
    }

    fn residue_tolerance(&self) -> f64 {
        1e-10
    }
}

/// `Σ_k Δ_{j-k} v_n[k] conj(v_m[k])`.
fn kernel_sum(kernel: &KernelWeights, vn: &[Complex64], vm: &[Complex64]) -> Complex64 {
    // ascending μ: Δ_{j-k} is at position 2j - k
    kernel
        .ascending()
        .iter()
        .rev()
        .zip(vn.iter().zip(vm))
        .map(|(d, (a, b))| a * b.conj() * *d)
        .sum()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Su2State {
    pub j: HalfInt,
    pub kind: StateKind<Su2Label>,
    pub name: String,
}

fn one(gamma: Complex64) -> (Complex64, Su2Label) {
    (Complex64::new(1.0, 0.0), Su2Label::new(gamma))
}

fn horizontal_terms() -> Terms<Su2Label> {
    vec![one(Complex64::new(1.0, 0.0)), one(Complex64::new(-1.0, 0.0))]
}

fn vertical_terms() -> Terms<Su2Label> {
    vec![one(Complex64::new(0.0, 1.0)), one(Complex64::new(0.0, -1.0))]
}

fn check_named(j: HalfInt) -> Result<()> {
    if j.twice() < 1 {
        return Err(Error::InvalidScale(format!("spin j = {j} must be at least 1/2")));
    }
    Ok(())
}

impl Su2State {
    pub fn coherent(j: HalfInt, gamma: Complex64) -> Result<Self> {
        Su2State::custom(j, "coherent", vec![one(gamma)])
    }

    /// `|1⟩ + |-1⟩`.
    pub fn cat_h(j: HalfInt) -> Result<Self> {
        check_named(j)?;
        Ok(Su2State { j, kind: StateKind::Pure(horizontal_terms()), name: "cat_h".into() })
    }

    /// `|i⟩ + |-i⟩`.
    pub fn cat_v(j: HalfInt) -> Result<Self> {
        check_named(j)?;
        Ok(Su2State { j, kind: StateKind::Pure(vertical_terms()), name: "cat_v".into() })
    }

    pub fn compass(j: HalfInt) -> Result<Self> {
        check_named(j)?;
        let mut terms = horizontal_terms();
        terms.extend(vertical_terms());
        Ok(Su2State { j, kind: StateKind::Pure(terms), name: "compass".into() })
    }

    pub fn cat_mixture(j: HalfInt) -> Result<Self> {
        check_named(j)?;
        let kind = StateKind::Mixture(vec![(1.0, horizontal_terms()), (1.0, vertical_terms())]);
        Ok(Su2State { j, kind, name: "cat_mixture".into() })
    }

    pub fn custom(j: HalfInt, name: &str, terms: Terms<Su2Label>) -> Result<Self> {
        if terms.iter().any(|(w, l)| !(w.is_finite() && l.gamma.is_finite())) {
            return Err(Error::InvalidState("weights and labels must be finite".into()));
        }
        let s = Su2State { j, kind: StateKind::Pure(terms), name: name.into() };
        state::validate(&Su2Family::new(j)?, &s.kind)?;
        Ok(s)
    }

    pub fn labels(&self) -> Vec<Su2Label> {
        match &self.kind {
            StateKind::Pure(t) => t.iter().map(|(_, l)| *l).collect(),
            StateKind::Mixture(p) => p.iter().flat_map(|(_, t)| t.iter().map(|(_, l)| *l)).collect(),
        }
    }

    pub fn family(&self) -> Result<Su2Family> {
        Su2Family::new(self.j)
    }

    fn meta(&self) -> FieldMeta {
        FieldMeta { group: GroupTag::Su2 { j: self.j }, state: self.name.clone(), normalization: Normalization::Raw }
    }
}

pub fn wigner_at(state: &Su2State, gamma: Complex64) -> Result<f64> {
    state::wigner_point(&state.family()?, &state.kind, gamma)
}

/// Wigner field of the normalized state over the stereographic plane.
pub fn wigner(state: &Su2State, grid: &Grid) -> Result<WignerField> {
    let family = state.family()?;
    family.kernel();
    let prepared = PreparedState::new(&family, &state.kind)?;
    let values = grid.fill(|g| prepared.wigner(&family, g))?;
    Ok(WignerField { grid: *grid, values, meta: state.meta() })
}

/// `Σ_{nm} ψ_n ψ*_m W_{|γ_n⟩⟨γ_m|}(γ)` with the weights taken as given.
pub fn wigner_unnormalized(j: HalfInt, terms: &Terms<Su2Label>, gamma: Complex64) -> Result<f64> {
    state::wigner_unnormalized(&Su2Family::new(j)?, terms, gamma)
}

/// Default grid: 401² samples over `[-2, 2]²`.
pub fn default_grid() -> Grid {
    Grid::square(2.0, 401).expect("fixed grid is valid")
}

pub fn overlap(state: &Su2State, delta: Complex64) -> Result<f64> {
    state::overlap(&state.family()?, &state.kind, delta)
}

pub fn overlap_field(state: &Su2State, grid: &Grid, axis_unit: f64) -> Result<OverlapField> {
    let family = state.family()?;
    state::validate(&family, &state.kind)?;
    let values = grid.fill(|d| state::overlap(&family, &state.kind, d * axis_unit))?;
    OverlapField::check_range(&values)?;
    Ok(OverlapField { grid: *grid, axis_unit, values, meta: state.meta() })
}

/// `(2j+1)/(4π) ∮ f dΩ` by Gauss–Legendre in `cos θ` times the trapezoid rule
/// in `φ`, with `4j + 2` nodes in each.
pub fn sphere_average<F>(j: HalfInt, f: F) -> Result<f64>
where
    F: Fn(Complex64) -> Result<f64>,
{
    let n = 2 * j.twice() as usize + 2;
    let rule = specfn::gauss_legendre(n);
    let mut acc = 0.0;
    for &(c, w) in &rule {
        let theta = c.acos();
        for k in 0..n {
            let phi = 2.0 * PI * k as f64 / n as f64;
            acc += w * f(sphere_to_stereographic(theta, phi)?)?;
        }
    }
    Ok(acc * (2.0 * PI / n as f64) * (j.twice() + 1) as f64 / (4.0 * PI))
}

/// `((2j+1)/4π) ∮ W dΩ` of the normalized state; equals 1.
pub fn sum_rule(state: &Su2State) -> Result<f64> {
    let family = state.family()?;
    let prepared = PreparedState::new(&family, &state.kind)?;
    sphere_average(state.j, |g| prepared.wigner(&family, g))
}

/// Angle `θ̄ = 2 atan|(γ-1)/(γ+1)|` between `γ` and the point `+1`.
fn angle_from_plus_one(gamma: Complex64) -> f64 {
    let den = gamma + 1.0;
    if den.norm() == 0.0 {
        return PI;
    }
    2.0 * ((gamma - 1.0) / den).norm().atan()
}

/// Wigner function of `|±1⟩`:
/// `(2j)!/√(2j+1) Σ_l (2l+1) P_l(±cos θ̄) / √((2j-l)!(2j+l+1)!)`.
pub fn wigner_coherent_closed(j: HalfInt, sign: i32, gamma: Complex64) -> Result<f64> {
    check_spin(j)?;
    if sign != 1 && sign != -1 {
        return Err(Error::InvalidState(format!("sign must be +1 or -1, got {sign}")));
    }
    let n = j.twice() as u64;
    let x = sign as f64 * angle_from_plus_one(gamma).cos();
    let p = specfn::legendre_sequence(n as usize, x.clamp(-1.0, 1.0));
    let ln_pre = ln_factorial(n) - 0.5 * ((n + 1) as f64).ln();
    Ok((0..=n)
        .map(|l| {
            let ln_c = ln_pre - 0.5 * (ln_factorial(n - l) + ln_factorial(n + l + 1));
            (2 * l + 1) as f64 * ln_c.exp() * p[l as usize]
        })
        .sum())
}

/// Interference term of the horizontal cat, `Re W_{|1⟩⟨-1|}`:
/// `(-1)^{2j} √((4j+1)!/(2j+1)) cos(2j φ̄) sin^{2j} θ̄ / (4^j (2j)!)` with
/// `φ̄ = arg(γ-1) - arg(γ+1)`.
pub fn interference_h(j: HalfInt, gamma: Complex64) -> Result<f64> {
    check_spin(j)?;
    let n = j.twice() as u64;
    let theta = angle_from_plus_one(gamma);
    let phi = (gamma - 1.0).arg() - (gamma + 1.0).arg();
    let ln_c = 0.5 * (ln_factorial(2 * n + 1) - ((n + 1) as f64).ln()) - n as f64 * 2f64.ln() - ln_factorial(n);
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    Ok(sign * ln_c.exp() * (n as f64 * phi).cos() * theta.sin().powi(n as i32))
}

/// Closed forms of the overlap for the equatorial cats and compass.
pub mod closed {
    use num_complex::Complex64;

    use crate::specfn::HalfInt;

    /// The `d^{2j}` term comes from the two cross terms `⟨±1|D|∓1⟩`, which
    /// cancel for half-integer `j`.
    fn bracket(j: HalfInt, d: f64, e: f64) -> f64 {
        let n = j.twice() as i32;
        let cross = if n % 2 == 0 { d.powi(n) } else { 0.0 };
        cross + (1.0 + e * e).powf(j.value()) * (n as f64 * e.atan()).cos()
    }

    fn envelope(j: HalfInt, delta: Complex64) -> f64 {
        (1.0 + delta.norm_sqr()).powf(-2.0 * j.value())
    }

    /// `[δ_x^{2j} + (1+δ_p²)^j cos(2j atan δ_p)]² / (1+|δ|²)^{2j}`.
    pub fn cat_h_overlap(j: HalfInt, delta: Complex64) -> f64 {
        bracket(j, delta.re, delta.im).powi(2) * envelope(j, delta)
    }

    /// Vertical cat: the horizontal form at `δ_p + i δ_x`.
    pub fn cat_v_overlap(j: HalfInt, delta: Complex64) -> f64 {
        cat_h_overlap(j, Complex64::new(delta.im, delta.re))
    }

    /// Compass overlap as printed: `Σ_q [δ_q^{2j} + (1+δ_q²)^j cos(2j atan δ_q)] / (4(1+|δ|²)^{2j})`.
    pub fn compass_overlap_printed(j: HalfInt, delta: Complex64) -> f64 {
        (bracket(j, delta.re, delta.re) + bracket(j, delta.im, delta.im)) * envelope(j, delta) / 4.0
    }

    /// The printed compass bracket squared, which fixes `F(0) = 1`.
    pub fn compass_overlap_squared(j: HalfInt, delta: Complex64) -> f64 {
        (bracket(j, delta.re, delta.re) + bracket(j, delta.im, delta.im)).powi(2) * envelope(j, delta) / 4.0
    }

    /// Small-displacement mixture approximation `F_H + F_V`.
    pub fn mixture_overlap(j: HalfInt, delta: Complex64) -> f64 {
        cat_h_overlap(j, delta) + cat_v_overlap(j, delta)
    }
}
