//! Group-agnostic machinery for coherent-state superpositions and mixtures.
//!
//! A [`CoherentFamily`] supplies the pairwise primitives (overlap, displaced
//! matrix element, Wigner function of `|a⟩⟨b|`). Gram-matrix normalization,
//! mixture bookkeeping, the overlap `F` and Wigner assembly are shared by
//! both groups.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// One superposition: complex weights on coherent labels.
pub type Terms<L> = Vec<(Complex64, L)>;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum StateKind<L> {
    /// `Σ_n ψ_n |label_n⟩`, normalized numerically on use.
    Pure(Terms<L>),
    /// `Σ_k w_k |ψ_k⟩⟨ψ_k| / ⟨ψ_k|ψ_k⟩` with `w_k ≥ 0`, weights rescaled to sum 1.
    Mixture(Vec<(f64, Terms<L>)>),
}

/// Pairwise primitives of a coherent-state family.
pub trait CoherentFamily: Sync {
    type Label: Copy + Send + Sync;

    /// `⟨a|b⟩`.
    fn overlap(&self, a: Self::Label, b: Self::Label) -> Complex64;

    /// `⟨a|D(δ)|b⟩` with the family's native displacement parameter.
    fn displaced_element(&self, a: Self::Label, delta: Complex64, b: Self::Label) -> Complex64;

    /// Wigner function of the operator `|ket⟩⟨bra|` at a plane point.
    fn wigner_cross(&self, ket: Self::Label, bra: Self::Label, point: Complex64) -> Complex64;

    /// `Σ_{nm} ψ_n ψ*_m W_{|n⟩⟨m|}(point)` and `Σ |ψ_n ψ*_m W_{|n⟩⟨m|}|`.
    fn wigner_terms(&self, terms: &Terms<Self::Label>, point: Complex64) -> (Complex64, f64) {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut scale = 0.0;
        for &(wn, n) in terms {
            for &(wm, m) in terms {
                let t = wn * wm.conj() * self.wigner_cross(n, m, point);
                scale += t.norm();
                acc += t;
            }
        }
        (acc, scale)
    }

    /// Relative tolerance for the imaginary residue of an assembled Wigner value.
    fn residue_tolerance(&self) -> f64 {
        1e-12
    }
}

/// `⟨ψ|ψ⟩` from the Gram matrix of coherent overlaps.
pub fn norm_sq<F: CoherentFamily>(family: &F, terms: &Terms<F::Label>) -> f64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for &(wa, a) in terms {
        for &(wb, b) in terms {
            acc += wa.conj() * wb * family.overlap(a, b);
        }
    }
    acc.re
}

/// `⟨φ|D(δ)|ψ⟩` for unnormalized superpositions.
pub fn displaced_amplitude<F: CoherentFamily>(
    family: &F,
    bra: &Terms<F::Label>,
    delta: Complex64,
    ket: &Terms<F::Label>,
) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for &(wa, a) in bra {
        for &(wb, b) in ket {
            acc += wa.conj() * wb * family.displaced_element(a, delta, b);
        }
    }
    acc
}

fn checked_norm<F: CoherentFamily>(family: &F, terms: &Terms<F::Label>) -> Result<f64> {
    if terms.is_empty() {
        return Err(Error::InvalidState("superposition has no terms".into()));
    }
    let n = norm_sq(family, terms);
    if !(n.is_finite() && n > 1e-300) {
        return Err(Error::InvalidState(format!("superposition norm {n:e} is not positive")));
    }
    Ok(n)
}

/// Components of a mixture with normalized weights and their norms.
fn mixture_parts<'a, F: CoherentFamily>(
    family: &F,
    parts: &'a [(f64, Terms<F::Label>)],
) -> Result<Vec<(f64, f64, &'a Terms<F::Label>)>> {
    if parts.is_empty() {
        return Err(Error::InvalidState("mixture has no components".into()));
    }
    if parts.iter().any(|(w, _)| !(w.is_finite() && *w >= 0.0)) {
        return Err(Error::InvalidState("mixture weights must be finite and non-negative".into()));
    }
    let total: f64 = parts.iter().map(|(w, _)| w).sum();
    if total <= 0.0 {
        return Err(Error::InvalidState("mixture weights sum to zero".into()));
    }
    parts
        .iter()
        .map(|(w, t)| Ok((w / total, checked_norm(family, t)?, t)))
        .collect()
}

/// Checks the invariants of a state: at least one term, non-negative mixture
/// weights, strictly positive norm.
pub fn validate<F: CoherentFamily>(family: &F, state: &StateKind<F::Label>) -> Result<()> {
    match state {
        StateKind::Pure(t) => checked_norm(family, t).map(|_| ()),
        StateKind::Mixture(parts) => mixture_parts(family, parts).map(|_| ()),
    }
}

/// Displacement overlap `F(δ) = tr{ρ D ρ D†} / tr{ρ²}` of the normalized state.
pub fn overlap<F: CoherentFamily>(family: &F, state: &StateKind<F::Label>, delta: Complex64) -> Result<f64> {
    match state {
        StateKind::Pure(t) => {
            let n = checked_norm(family, t)?;
            Ok(displaced_amplitude(family, t, delta, t).norm_sqr() / (n * n))
        }
        StateKind::Mixture(parts) => {
            let parts = mixture_parts(family, parts)?;
            let num = mixture_sum(family, &parts, Some(delta));
            let purity = mixture_sum(family, &parts, None);
            Ok(num / purity)
        }
    }
}

/// `tr{ρ D ρ D†}` for `ρ = Σ_k w_k |ψ_k⟩⟨ψ_k| / ⟨ψ_k|ψ_k⟩` with the weights
/// taken exactly as given (no rescaling, no purity normalization).
pub fn mixture_overlap_unnormalized<F: CoherentFamily>(
    family: &F,
    parts: &[(f64, Terms<F::Label>)],
    delta: Complex64,
) -> Result<f64> {
    let parts: Vec<_> = parts
        .iter()
        .map(|(w, t)| Ok((*w, checked_norm(family, t)?, t)))
        .collect::<Result<_>>()?;
    Ok(mixture_sum(family, &parts, Some(delta)))
}

fn mixture_sum<F: CoherentFamily>(
    family: &F,
    parts: &[(f64, f64, &Terms<F::Label>)],
    delta: Option<Complex64>,
) -> f64 {
    let mut acc = 0.0;
    for &(wk, nk, tk) in parts {
        for &(wl, nl, tl) in parts {
            let amp = match delta {
                Some(d) => displaced_amplitude(family, tk, d, tl),
                None => {
                    let mut a = Complex64::new(0.0, 0.0);
                    for &(x, la) in tk.iter() {
                        for &(y, lb) in tl.iter() {
                            a += x.conj() * y * family.overlap(la, lb);
                        }
                    }
                    a
                }
            };
            acc += wk * wl * amp.norm_sqr() / (nk * nl);
        }
    }
    acc
}

/// `Σ_{nm} ψ_n ψ*_m W_{|n⟩⟨m|}` without normalization, full complex sum.
pub fn wigner_operator<F: CoherentFamily>(family: &F, terms: &Terms<F::Label>, point: Complex64) -> (Complex64, f64) {
    family.wigner_terms(terms, point)
}

/// Real part of the unnormalized Wigner sum after the imaginary-residue check.
pub fn wigner_unnormalized<F: CoherentFamily>(family: &F, terms: &Terms<F::Label>, point: Complex64) -> Result<f64> {
    let (w, scale) = wigner_operator(family, terms, point);
    let tol = family.residue_tolerance() * scale.max(1.0);
    if !(w.re.is_finite() && w.im.abs() <= tol) {
        return Err(Error::Numeric(format!(
            "Wigner sum at {point} has imaginary residue {:e} (tolerance {tol:e})",
            w.im
        )));
    }
    Ok(w.re)
}

fn pure_wigner<F: CoherentFamily>(family: &F, terms: &Terms<F::Label>, norm: f64, point: Complex64) -> Result<f64> {
    Ok(wigner_unnormalized(family, terms, point)? / norm)
}

/// Wigner function of the normalized state at one point.
pub fn wigner_point<F: CoherentFamily>(family: &F, state: &StateKind<F::Label>, point: Complex64) -> Result<f64> {
    match state {
        StateKind::Pure(t) => {
            let n = checked_norm(family, t)?;
            pure_wigner(family, t, n, point)
        }
        StateKind::Mixture(parts) => {
            let mut acc = 0.0;
            for (w, n, t) in mixture_parts(family, parts)? {
                acc += w * pure_wigner(family, t, n, point)?;
            }
            Ok(acc)
        }
    }
}

/// Precomputed normalization for repeated Wigner evaluation over a grid.
pub(crate) struct PreparedState<'a, L> {
    parts: Vec<(f64, f64, &'a Terms<L>)>,
}

impl<'a, L: Copy + Send + Sync> PreparedState<'a, L> {
    pub(crate) fn new<F: CoherentFamily<Label = L>>(family: &F, state: &'a StateKind<L>) -> Result<Self> {
        let parts = match state {
            StateKind::Pure(t) => vec![(1.0, checked_norm(family, t)?, t)],
            StateKind::Mixture(parts) => mixture_parts(family, parts)?,
        };
        Ok(PreparedState { parts })
    }

    pub(crate) fn wigner<F: CoherentFamily<Label = L>>(&self, family: &F, point: Complex64) -> Result<f64> {
        let mut acc = 0.0;
        for &(w, n, t) in &self.parts {
            acc += w * pure_wigner(family, t, n, point)?;
        }
        Ok(acc)
    }
}
