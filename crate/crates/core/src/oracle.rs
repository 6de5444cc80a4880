//! Brute-force finite-matrix references.
//!
//! Nothing here calls the closed-form paths of [`crate::hw`], [`crate::su2`]
//! or the Racah formula of [`crate::specfn`]: states are built by
//! exponentiating generators, kernels from a ladder-operator coupling table,
//! and Wigner values as traces against displaced kernels.

use std::collections::HashMap;
use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hw::HwState;
use crate::specfn::HalfInt;
use crate::state::{StateKind, Terms};
use crate::su2::Su2State;

/// Largest spin the matrix oracle accepts.
pub const MAX_TWICE_J: i64 = 40;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Dense complex square matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseOperator {
    pub entries: DMatrix<Complex64>,
}

impl DenseOperator {
    pub fn new(entries: DMatrix<Complex64>) -> Self {
        assert!(entries.is_square(), "operator must be square");
        DenseOperator { entries }
    }

    pub fn identity(dim: usize) -> Self {
        DenseOperator::new(DMatrix::identity(dim, dim))
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn adjoint(&self) -> Self {
        DenseOperator::new(self.entries.adjoint())
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.trace()
    }

    /// Largest entry of `|A - A†|`.
    pub fn hermiticity_error(&self) -> f64 {
        (&self.entries - self.entries.adjoint()).camax()
    }

    /// Largest entry of `|A† A - 1|`.
    pub fn unitarity_error(&self) -> f64 {
        (self.entries.adjoint() * &self.entries - DMatrix::identity(self.dim(), self.dim())).camax()
    }

    /// `exp(G)` for an anti-Hermitian `G`, through the eigendecomposition of
    /// the Hermitian matrix `iG`.
    pub fn exp_anti_hermitian(generator: &DMatrix<Complex64>) -> Self {
        let h = generator * Complex64::new(0.0, 1.0);
        let h = (&h + h.adjoint()) * c(0.5);
        let eig = h.symmetric_eigen();
        let phases = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| Complex64::new(0.0, -l).exp()));
        DenseOperator::new(&eig.eigenvectors * phases * eig.eigenvectors.adjoint())
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn projector(psi: &DVector<Complex64>) -> Self {
        DenseOperator::new(psi * psi.adjoint())
    }

    /// `tr{ρ D ρ D†} / tr{ρ²}`.
    pub fn displaced_overlap(&self, d: &DenseOperator) -> f64 {
        let rho = &self.entries;
        let num = (rho * &d.entries * rho * d.entries.adjoint()).trace();
        let purity = (rho * rho).trace();
        num.re / purity.re
    }
}

impl std::ops::Mul for &DenseOperator {
    type Output = DenseOperator;

    fn mul(self, rhs: &DenseOperator) -> DenseOperator {
        DenseOperator::new(&self.entries * &rhs.entries)
    }
}

fn check_oracle_spin(j: HalfInt) -> Result<()> {
    if j.twice() < 0 || j.twice() > MAX_TWICE_J {
        return Err(Error::InvalidScale(format!("matrix oracle supports 0 ≤ j ≤ 20, got {j}")));
    }
    Ok(())
}

/// `J_-` with `J_-|j,μ⟩ = N_μ |j,μ-1⟩`, `N_μ = √((j+μ)(j-μ+1))`; row and
/// column `k` hold `μ = j - k`.
fn lowering(j: HalfInt) -> DMatrix<Complex64> {
    let n = j.dim();
    let jv = j.value();
    let mut m = DMatrix::zeros(n, n);
    for k in 0..n - 1 {
        let mu = jv - k as f64;
        m[(k + 1, k)] = c(((jv + mu) * (jv - mu + 1.0)).sqrt());
    }
    m
}

/// `(J_1, J_2, J_3)` in the basis `|j, j-k⟩`, `k = 0..2j`.
pub fn j_matrices(j: HalfInt) -> Result<(DenseOperator, DenseOperator, DenseOperator)> {
    check_oracle_spin(j)?;
    let jm = lowering(j);
    let jp = jm.adjoint();
    let j1 = (&jp + &jm) * c(0.5);
    let j2 = (&jp - &jm) * Complex64::new(0.0, -0.5);
    let j3 = DMatrix::from_fn(j.dim(), j.dim(), |r, s| if r == s { c(j.value() - r as f64) } else { c(0.0) });
    Ok((DenseOperator::new(j1), DenseOperator::new(j2), DenseOperator::new(j3)))
}

/// `D(γ) = exp(α J_- - α* J_+)` with `α = e^{iφ} θ/2`, `γ = e^{iφ} tan(θ/2)`.
pub fn displacement_matrix(j: HalfInt, gamma: Complex64) -> Result<DenseOperator> {
    check_oracle_spin(j)?;
    let alpha = Complex64::from_polar(gamma.norm().atan(), gamma.arg());
    let jm = lowering(j);
    let g = &jm * alpha - jm.adjoint() * alpha.conj();
    Ok(DenseOperator::exp_anti_hermitian(&g))
}

/// `e^{iφ J_3}`.
pub fn rotation_j3(j: HalfInt, phi: f64) -> Result<DenseOperator> {
    check_oracle_spin(j)?;
    let diag = DVector::from_fn(j.dim(), |k, _| Complex64::new(0.0, phi * (j.value() - k as f64)).exp());
    Ok(DenseOperator::new(DMatrix::from_diagonal(&diag)))
}

/// `D(γ)|j,j⟩`.
pub fn su2_coherent_vector(j: HalfInt, gamma: Complex64) -> Result<DVector<Complex64>> {
    Ok(displacement_matrix(j, gamma)?.entries.column(0).into_owned())
}

fn su2_superposition(j: HalfInt, terms: &Terms<crate::su2::Su2Label>) -> Result<DVector<Complex64>> {
    let mut psi = DVector::zeros(j.dim());
    for (w, l) in terms {
        psi += su2_coherent_vector(j, l.gamma)? * *w;
    }
    Ok(psi)
}

fn density<L>(
    kind: &StateKind<L>,
    dim: usize,
    vector: impl Fn(&Terms<L>) -> Result<DVector<Complex64>>,
) -> Result<DenseOperator> {
    let parts: Vec<(f64, &Terms<L>)> = match kind {
        StateKind::Pure(t) => vec![(1.0, t)],
        StateKind::Mixture(p) => p.iter().map(|(w, t)| (*w, t)).collect(),
    };
    let mut rho = DMatrix::zeros(dim, dim);
    for (w, t) in parts {
        let psi = vector(t)?;
        let n = psi.norm_squared();
        if !(n > 1e-300) {
            return Err(Error::InvalidState("superposition has zero norm".into()));
        }
        rho += DenseOperator::projector(&psi).entries * c(w / n);
    }
    let tr = rho.trace().re;
    if !(tr > 0.0) {
        return Err(Error::InvalidState("mixture weights sum to zero".into()));
    }
    Ok(DenseOperator::new(rho / c(tr)))
}

/// Normalized density matrix of an SU(2) state, built from displacement matrices.
pub fn su2_density(state: &Su2State) -> Result<DenseOperator> {
    check_oracle_spin(state.j)?;
    density(&state.kind, state.j.dim(), |t| su2_superposition(state.j, t))
}

/// Clebsch–Gordan table for `j1 ⊗ j2` from highest-weight states and
/// repeated lowering, with `⟨j1,j1; j2,J-j1|J,J⟩ > 0`.
#[derive(Clone, Debug)]
pub struct CgTable {
    pub j1: HalfInt,
    pub j2: HalfInt,
    /// `(2J, 2M) ↦` coefficients over the product basis `(m1, m2)`.
    states: HashMap<(i64, i64), Vec<f64>>,
}

impl CgTable {
    fn product_index(&self, m1: HalfInt, m2: HalfInt) -> Option<usize> {
        let (a, b) = ((self.j1 - m1).twice(), (self.j2 - m2).twice());
        if a % 2 != 0 || b % 2 != 0 || a < 0 || b < 0 || a > 2 * self.j1.twice() || b > 2 * self.j2.twice() {
            return None;
        }
        let (a, b) = ((a / 2) as usize, (b / 2) as usize);
        if a >= self.j1.dim() || b >= self.j2.dim() {
            return None;
        }
        Some(a * self.j2.dim() + b)
    }

    /// `⟨j1,m1; j2,m2 | J,M⟩`; zero for invalid quantum numbers.
    pub fn get(&self, m1: HalfInt, m2: HalfInt, jj: HalfInt, mm: HalfInt) -> f64 {
        match (self.states.get(&(jj.twice(), mm.twice())), self.product_index(m1, m2)) {
            (Some(v), Some(i)) => v[i],
            _ => 0.0,
        }
    }

    /// Coupled states `(J, M)` in the table.
    pub fn coupled(&self) -> impl Iterator<Item = (HalfInt, HalfInt)> + '_ {
        self.states.keys().map(|&(a, b)| (HalfInt::from_twice(a), HalfInt::from_twice(b)))
    }
}

/// Real matrix of `J_-` in the basis `|j, j-k⟩`.
fn lowering_real(j: HalfInt) -> DMatrix<f64> {
    lowering(j).map(|z| z.re)
}

pub fn cg_ladder_oracle(j1: HalfInt, j2: HalfInt) -> Result<CgTable> {
    for j in [j1, j2] {
        if j.twice() < 0 || j.twice() > 12 {
            return Err(Error::InvalidScale(format!("ladder oracle supports 0 ≤ j ≤ 6, got {j}")));
        }
    }
    let (d1, d2) = (j1.dim(), j2.dim());
    let lower = lowering_real(j1).kronecker(&DMatrix::identity(d2, d2))
        + DMatrix::identity(d1, d1).kronecker(&lowering_real(j2));
    let mut table = CgTable { j1, j2, states: HashMap::new() };
    let jmax = j1 + j2;
    let jmin = HalfInt::from_twice((j1.twice() - j2.twice()).abs());
    let mut jj = jmax;
    while jj.twice() >= jmin.twice() {
        // |J,J⟩: start from |j1, J-j1⟩, project out the larger J, normalize
        let start = table.product_index(j1, jj - j1).expect("m2 = J - j1 is valid");
        let mut v = DVector::zeros(d1 * d2);
        v[start] = 1.0;
        // two Gram-Schmidt passes keep the residual orthogonal to rounding level
        for _ in 0..2 {
            let mut higher = jmax;
            while higher.twice() > jj.twice() {
                let u = DVector::from_vec(table.states[&(higher.twice(), jj.twice())].clone());
                let proj = u.dot(&v);
                v -= u * proj;
                higher = higher - HalfInt::from_int(1);
            }
        }
        v /= v.norm();
        if v[start] < 0.0 {
            v = -v;
        }
        let mut mm = jj;
        loop {
            table.states.insert((jj.twice(), mm.twice()), v.iter().copied().collect());
            if mm.twice() == -jj.twice() {
                break;
            }
            v = &lower * v;
            v /= v.norm();
            mm = mm - HalfInt::from_int(1);
        }
        jj = jj - HalfInt::from_int(1);
    }
    Ok(table)
}

/// Kernel weights `Δ_μ` (ascending `μ`) from the ladder coupling tables.
pub fn ladder_kernel_weights(j: HalfInt) -> Result<Vec<f64>> {
    let n = j.twice();
    let mut weights = vec![0.0; j.dim()];
    for l in 0..=n {
        let lh = HalfInt::from_int(l);
        let table = cg_ladder_oracle(j, lh)?;
        for (i, mu) in j.projections().enumerate() {
            weights[i] += (2 * l + 1) as f64 / (n + 1) as f64 * table.get(mu, HalfInt::ZERO, j, mu);
        }
    }
    Ok(weights)
}

/// Stratonovich–Weyl kernel `Δ = diag(Δ_μ)` in the basis `|j, j-k⟩`.
pub fn kernel_matrix(j: HalfInt) -> Result<DenseOperator> {
    let w = ladder_kernel_weights(j)?;
    let diag = DVector::from_fn(j.dim(), |k, _| c(w[j.dim() - 1 - k]));
    Ok(DenseOperator::new(DMatrix::from_diagonal(&diag)))
}

/// Wigner function evaluator `tr{ρ D(γ) Δ D(γ)†}` for one spin.
#[derive(Clone, Debug)]
pub struct Su2WignerOracle {
    pub j: HalfInt,
    kernel: DenseOperator,
}

impl Su2WignerOracle {
    /// The ladder oracle limits the kernel to `j ≤ 3`.
    pub fn new(j: HalfInt) -> Result<Self> {
        Ok(Su2WignerOracle { j, kernel: kernel_matrix(j)? })
    }

    pub fn wigner(&self, rho: &DenseOperator, gamma: Complex64) -> Result<f64> {
        let tr = rho.trace();
        if (tr - 1.0).norm() > 1e-10 {
            return Err(Error::NonNormalized(tr.re));
        }
        let d = displacement_matrix(self.j, gamma)?;
        let w = (&rho.entries * &d.entries * &self.kernel.entries * d.entries.adjoint()).trace();
        if w.im.abs() > 1e-10 {
            return Err(Error::Numeric(format!("oracle Wigner value {w} is not real")));
        }
        Ok(w.re)
    }
}

/// `tr{ρ D(γ) Δ D(γ)†}` for a normalized `ρ`.
pub fn su2_wigner_oracle(rho: &DenseOperator, j: HalfInt, gamma: Complex64) -> Result<f64> {
    Su2WignerOracle::new(j)?.wigner(rho, gamma)
}

/// `F(δ)` of a normalized density matrix under `D(δ)`.
pub fn su2_overlap_oracle(rho: &DenseOperator, j: HalfInt, delta: Complex64) -> Result<f64> {
    Ok(rho.displaced_overlap(&displacement_matrix(j, delta)?))
}

/// Largest coherent amplitude the Fock oracle accepts.
pub const MAX_FOCK_AMPLITUDE: f64 = 6.0;

/// Poisson weight `Σ_{n ≥ cutoff} e^{-λ} λ^n / n!` with `λ = amplitude²`.
pub fn poisson_tail(amplitude: f64, cutoff: usize) -> f64 {
    let lambda = amplitude * amplitude;
    if lambda == 0.0 {
        return if cutoff == 0 { 1.0 } else { 0.0 };
    }
    let ln_l = lambda.ln();
    let mut ln_term = -lambda + cutoff as f64 * ln_l - crate::specfn::ln_factorial(cutoff as u64);
    let mut acc = 0.0;
    for n in cutoff..cutoff + 2000 {
        let t = ln_term.exp();
        acc += t;
        if t < acc * 1e-17 && n as f64 > lambda {
            break;
        }
        ln_term += ln_l - ((n + 1) as f64).ln();
    }
    acc
}

/// Enforces `cutoff ≥ |α|² + 8|α| + 20` and a Poisson tail below `1e-10`.
pub fn check_cutoff(cutoff: usize, amplitude: f64) -> Result<()> {
    let tail = poisson_tail(amplitude, cutoff);
    let need = amplitude * amplitude + 8.0 * amplitude + 20.0;
    if (cutoff as f64) < need || tail >= 1e-10 {
        return Err(Error::InsufficientCutoff { cutoff, amplitude, tail });
    }
    Ok(())
}

/// Truncated `D(α) = exp(α a† - α* a)` on `cutoff` Fock states.
pub fn fock_displacement(cutoff: usize, alpha: Complex64) -> DenseOperator {
    let mut a = DMatrix::zeros(cutoff, cutoff);
    for n in 1..cutoff {
        a[(n - 1, n)] = c((n as f64).sqrt());
    }
    let g = a.adjoint() * alpha - a * alpha.conj();
    DenseOperator::exp_anti_hermitian(&g)
}

/// Truncated-Fock reference for a Heisenberg–Weyl state. Plane points and
/// displacements use the phase-space units of [`crate::hw`].
#[derive(Clone, Debug)]
pub struct FockOracle {
    pub cutoff: usize,
    pub rho: DenseOperator,
    max_amplitude: f64,
}

impl FockOracle {
    fn check(&self, shift: Complex64) -> Result<()> {
        check_cutoff(self.cutoff, self.max_amplitude + shift.norm() / 2.0)
    }

    /// `W(r) = (1/2π) tr{ρ D(r/2) Π D(r/2)†}`, `Π = (-1)^{a†a}`.
    pub fn wigner(&self, r: Complex64) -> Result<f64> {
        self.check(r)?;
        let d = fock_displacement(self.cutoff, r / 2.0);
        let moved = d.entries.adjoint() * &self.rho.entries * &d.entries;
        let parity: Complex64 = (0..self.cutoff).map(|n| moved[(n, n)] * if n % 2 == 0 { 1.0 } else { -1.0 }).sum();
        Ok(parity.re / (2.0 * PI))
    }

    /// `tr{ρ D ρ D†} / tr{ρ²}` with `D = D(δ/2)`.
    pub fn overlap(&self, delta: Complex64) -> Result<f64> {
        self.check(delta)?;
        Ok(self.rho.displaced_overlap(&fock_displacement(self.cutoff, delta / 2.0)))
    }
}

pub fn hw_fock_oracle(state: &HwState, cutoff: usize) -> Result<FockOracle> {
    let max_amplitude = state.labels().iter().map(|l| l.alpha.norm()).fold(0.0, f64::max);
    if max_amplitude > MAX_FOCK_AMPLITUDE {
        return Err(Error::InvalidState(format!(
            "Fock oracle supports |α| ≤ {MAX_FOCK_AMPLITUDE}, got {max_amplitude}"
        )));
    }
    check_cutoff(cutoff, max_amplitude)?;
    let mut vacuum = DVector::zeros(cutoff);
    vacuum[0] = c(1.0);
    let rho = density(&state.kind, cutoff, |terms| {
        let mut psi = DVector::zeros(cutoff);
        for (w, l) in terms {
            psi += fock_displacement(cutoff, l.alpha).entries * &vacuum * *w;
        }
        Ok(psi)
    })?;
    Ok(FockOracle { cutoff, rho, max_amplitude })
}
