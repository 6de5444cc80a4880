//! Special functions behind the SU(2) Stratonovich–Weyl kernel.
//!
//! Angular-momentum labels are carried as doubled integers ([`HalfInt`]) so
//! that no index arithmetic ever happens in floating point. Clebsch–Gordan
//! coefficients follow the Condon–Shortley convention in the coupling order
//! `⟨j1,m1; j2,m2 | J,M⟩`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A non-negative or signed half-integer stored as twice its value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct HalfInt(i64);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);
    pub const HALF: HalfInt = HalfInt(1);

    pub const fn from_twice(twice: i64) -> Self {
        HalfInt(twice)
    }

    pub const fn from_int(n: i64) -> Self {
        HalfInt(2 * n)
    }

    pub const fn twice(self) -> i64 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }

    pub const fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    /// Magnetic indices `m = -j, -j+1, ..., j` in ascending order.
    pub fn projections(self) -> impl DoubleEndedIterator<Item = HalfInt> {
        let j2 = self.0;
        (0..=j2.max(-1)).map(move |k| HalfInt(-j2 + 2 * k))
    }

    /// Dimension `2j + 1` of the irreducible representation.
    pub fn dim(self) -> usize {
        (self.0 + 1) as usize
    }
}

impl std::ops::Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 + rhs.0)
    }
}

impl std::ops::Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 - rhs.0)
    }
}

impl std::ops::Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt(-self.0)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// Parses `n`, `n/2` or a decimal with a zero or `.5` fraction.
impl FromStr for HalfInt {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let bad = || Error::HalfInt(s.to_string());
        if let Some((num, den)) = t.split_once('/') {
            let num: i64 = num.trim().parse().map_err(|_| bad())?;
            let den: i64 = den.trim().parse().map_err(|_| bad())?;
            return match den {
                1 => Ok(HalfInt(2 * num)),
                2 => Ok(HalfInt(num)),
                _ => Err(bad()),
            };
        }
        if let Ok(n) = t.parse::<i64>() {
            return Ok(HalfInt(2 * n));
        }
        let v: f64 = t.parse().map_err(|_| bad())?;
        let twice = 2.0 * v;
        if v.is_finite() && (twice - twice.round()).abs() < 1e-12 {
            Ok(HalfInt(twice.round() as i64))
        } else {
            Err(bad())
        }
    }
}

impl TryFrom<String> for HalfInt {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<HalfInt> for String {
    fn from(h: HalfInt) -> String {
        h.to_string()
    }
}

const EXACT_TABLE_LEN: usize = 171;

fn factorial_table() -> &'static [f64; EXACT_TABLE_LEN] {
    static TABLE: OnceLock<[f64; EXACT_TABLE_LEN]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [0.0; EXACT_TABLE_LEN];
        let mut prod = 1.0f64;
        for (n, slot) in t.iter_mut().enumerate().skip(1) {
            prod *= n as f64;
            *slot = prod.ln();
        }
        t
    })
}

/// `ln(n!)`.
///
/// Tabulated from the floating-point product up to `170!` (the last finite
/// factorial in `f64`), Stirling series beyond.
pub fn ln_factorial(n: u64) -> f64 {
    if (n as usize) < EXACT_TABLE_LEN {
        return factorial_table()[n as usize];
    }
    let x = n as f64;
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let series = inv / 12.0 - inv * inv2 / 360.0 + inv * inv2 * inv2 / 1260.0
        - inv * inv2 * inv2 * inv2 / 1680.0;
    x * x.ln() - x + 0.5 * (2.0 * PI * x).ln() + series
}

fn lnf(n: i64) -> f64 {
    debug_assert!(n >= 0);
    ln_factorial(n as u64)
}

/// `ln` of the binomial coefficient `C(n, k)`.
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

fn check_unit_interval(function: &'static str, x: f64) -> Result<()> {
    if !(x.abs() <= 1.0 + 1e-12) {
        return Err(Error::Domain { function, value: x });
    }
    Ok(())
}

/// Legendre polynomial `P_l(x)` by upward three-term recurrence.
pub fn legendre_p(l: usize, x: f64) -> Result<f64> {
    check_unit_interval("legendre_p", x)?;
    Ok(legendre_sequence(l, x)[l])
}

/// `[P_0(x), ..., P_lmax(x)]` with no domain check.
pub(crate) fn legendre_sequence(lmax: usize, x: f64) -> Vec<f64> {
    let mut p = Vec::with_capacity(lmax + 1);
    p.push(1.0);
    if lmax >= 1 {
        p.push(x);
    }
    for l in 1..lmax {
        let lf = l as f64;
        let next = ((2.0 * lf + 1.0) * x * p[l] - lf * p[l - 1]) / (lf + 1.0);
        p.push(next);
    }
    p
}

/// Spherical harmonic `Y_lm(θ, φ)` with Condon–Shortley phase.
pub fn spherical_harmonic(l: i64, m: i64, theta: f64, phi: f64) -> Result<Complex64> {
    if l < 0 || m.abs() > l {
        return Err(Error::Index { l, m });
    }
    let ma = m.abs();
    let value = normalized_assoc_legendre(l, ma, theta) * Complex64::from_polar(1.0, ma as f64 * phi);
    if m >= 0 {
        Ok(value)
    } else {
        let sign = if ma % 2 == 0 { 1.0 } else { -1.0 };
        Ok(value.conj() * sign)
    }
}

/// `sqrt((2l+1)/4π · (l-m)!/(l+m)!) · P_l^m(cos θ)`, including `(-1)^m`.
fn normalized_assoc_legendre(l: i64, m: i64, theta: f64) -> f64 {
    let x = theta.cos();
    let s = theta.sin();
    let mut pmm = (1.0 / (4.0 * PI)).sqrt();
    for k in 1..=m {
        let kf = k as f64;
        pmm *= -((2.0 * kf + 1.0) / (2.0 * kf)).sqrt() * s;
    }
    if l == m {
        return pmm;
    }
    let mf = m as f64;
    let mut prev = pmm;
    let mut cur = x * (2.0 * mf + 3.0).sqrt() * pmm;
    for ll in (m + 2)..=l {
        let lf = ll as f64;
        let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
        let b = (((lf - 1.0) * (lf - 1.0) - mf * mf) / (4.0 * (lf - 1.0) * (lf - 1.0) - 1.0)).sqrt();
        let next = a * (x * cur - b * prev);
        prev = cur;
        cur = next;
    }
    cur
}

fn ln_abs_big(x: &BigInt) -> f64 {
    let bits = x.bits();
    let shift = bits.saturating_sub(64);
    let top = (x.abs() >> shift).to_f64().unwrap_or(f64::NAN);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Clebsch–Gordan coefficient `⟨j1,m1; j2,m2 | J,M⟩`.
///
/// Racah's single-sum formula. The factorial prefactors are taken in log
/// space; the alternating sum is nested as `1 + r_0(1 + r_1(1 + ...))` with
/// the integer term ratios `r_k` and accumulated exactly in big integers, so
/// no cancellation is lost for large `j`. Returns 0 for any invalid set of
/// quantum numbers.
pub fn clebsch_gordan(j1: HalfInt, m1: HalfInt, j2: HalfInt, m2: HalfInt, jj: HalfInt, mm: HalfInt) -> f64 {
    let (j1, m1, j2, m2, jj, mm) = (j1.0, m1.0, j2.0, m2.0, jj.0, mm.0);
    if j1 < 0 || j2 < 0 || jj < 0 {
        return 0.0;
    }
    if m1 + m2 != mm || m1.abs() > j1 || m2.abs() > j2 || mm.abs() > jj {
        return 0.0;
    }
    if (j1 + m1) % 2 != 0 || (j2 + m2) % 2 != 0 || (jj + mm) % 2 != 0 || (j1 + j2 + jj) % 2 != 0 {
        return 0.0;
    }
    if jj < (j1 - j2).abs() || jj > j1 + j2 {
        return 0.0;
    }
    // All of the following are integers once halved.
    let h = |x: i64| x / 2;
    let a = h(j1 + j2 - jj);
    let b = h(j1 - j2 + jj);
    let c = h(-j1 + j2 + jj);
    let s = h(j1 + j2 + jj) + 1;
    let j1pm = h(j1 + m1);
    let j1mm = h(j1 - m1);
    let j2pm = h(j2 + m2);
    let j2mm = h(j2 - m2);
    let jpm = h(jj + mm);
    let jmm = h(jj - mm);
    // Lower-bound offsets of the last two denominator factorials.
    let d = h(jj - j2 + m1);
    let e = h(jj - j1 - m2);

    let ln_pref = 0.5
        * (((jj + 1) as f64).ln() + lnf(a) + lnf(b) + lnf(c) - lnf(s)
            + lnf(j1pm)
            + lnf(j1mm)
            + lnf(j2pm)
            + lnf(j2mm)
            + lnf(jpm)
            + lnf(jmm));

    let kmin = 0.max(-d).max(-e);
    let kmax = a.min(j1mm).min(j2pm);
    if kmin > kmax {
        return 0.0;
    }

    // v = 1 + r_k v, innermost first; r_k = -N_k / D_k.
    let mut p = BigInt::from(1);
    let mut q = BigInt::from(1);
    for k in (kmin..kmax).rev() {
        let num = (a - k) * (j1mm - k) * (j2pm - k);
        let den = (k + 1) * (d + k + 1) * (e + k + 1);
        p = &q * den - &p * num;
        q *= den;
    }
    if p.is_zero() {
        return 0.0;
    }
    let ln_first = -(lnf(kmin) + lnf(a - kmin) + lnf(j1mm - kmin) + lnf(j2pm - kmin) + lnf(d + kmin) + lnf(e + kmin));
    let mut sign = if kmin % 2 == 0 { 1.0 } else { -1.0 };
    if p.is_negative() {
        sign = -sign;
    }
    sign * (ln_pref + ln_first + ln_abs_big(&p) - ln_abs_big(&q)).exp()
}

/// Diagonal Stratonovich–Weyl kernel weights `Δ_μ` for spin `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelWeights {
    j: HalfInt,
    /// Indexed by ascending μ: `weights[k]` belongs to `μ = -j + k`.
    weights: Vec<f64>,
}

impl KernelWeights {
    pub fn j(&self) -> HalfInt {
        self.j
    }

    /// Weights in ascending order of μ.
    pub fn ascending(&self) -> &[f64] {
        &self.weights
    }

    pub fn get(&self, mu: HalfInt) -> Option<f64> {
        if mu.0.abs() > self.j.0 || (mu.0 + self.j.0) % 2 != 0 {
            return None;
        }
        Some(self.weights[((mu.0 + self.j.0) / 2) as usize])
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// `Σ_μ Δ_μ`, the trace of the kernel.
    pub fn trace(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// `Δ_μ = Σ_{l=0}^{2j} (2l+1)/(2j+1) ⟨j,μ; l,0 | j,μ⟩` for `μ = -j..j`.
pub fn kernel_weights(j: HalfInt) -> Result<KernelWeights> {
    if j.0 < 0 {
        return Err(Error::InvalidScale(format!("spin j = {j} must be non-negative")));
    }
    let dim = (j.0 + 1) as f64;
    let weights = j
        .projections()
        .map(|mu| {
            (0..=j.0)
                .map(|l| {
                    let l2 = HalfInt::from_int(l);
                    (2 * l + 1) as f64 / dim * clebsch_gordan(j, mu, l2, HalfInt::ZERO, j, mu)
                })
                .sum()
        })
        .collect();
    Ok(KernelWeights { j, weights })
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, exact for polynomials of
/// degree `2n - 1`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let nf = n as f64;
    (0..n)
        .map(|i| {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let p = legendre_sequence(n, x);
                // P_n'(x) = n (x P_n - P_{n-1}) / (x² - 1)
                dp = nf * (x * p[n] - p[n - 1]) / (x * x - 1.0);
                let dx = p[n] / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            (x, 2.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}
