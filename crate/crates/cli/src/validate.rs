//! Oracle-equivalence and invariant checks behind `subplanck validate`.

use std::f64::consts::PI;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use subplanck::hw::{self, HwLabel, HwState};
use subplanck::oracle;
use subplanck::specfn::{self, HalfInt};
use subplanck::su2::{self, Su2Label, Su2State};
use subplanck::Complex64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    Quick,
    Full,
}

impl std::str::FromStr for Level {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "quick" => Ok(Level::Quick),
            "full" => Ok(Level::Full),
            _ => Err(format!("expected quick or full, got {s:?}")),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Largest observed error and the tolerance, or the failure message.
    pub detail: String,
    pub seconds: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn table(&self) -> String {
        self.checks
            .iter()
            .map(|c| {
                format!("{} {:<44} {} ({:.2}s)\n", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail, c.seconds)
            })
            .collect()
    }
}

type Outcome = Result<f64, String>;

fn run(checks: &mut Vec<Check>, name: &str, tol: f64, f: impl FnOnce() -> Outcome) {
    let t = Instant::now();
    let result = f();
    let seconds = t.elapsed().as_secs_f64();
    let (passed, detail) = match result {
        Ok(err) if err <= tol => (true, format!("max error {err:.2e} <= {tol:.0e}")),
        Ok(err) => (false, format!("max error {err:.2e} > {tol:.0e}")),
        Err(msg) => (false, msg),
    };
    checks.push(Check { name: name.into(), passed, detail, seconds });
}

fn e2s(e: subplanck::Error) -> String {
    e.to_string()
}

fn hi(twice: i64) -> HalfInt {
    HalfInt::from_twice(twice)
}

fn random_gamma(rng: &mut ChaCha8Rng, radius: f64) -> Complex64 {
    Complex64::from_polar(radius * rng.gen::<f64>().sqrt(), 2.0 * PI * rng.gen::<f64>())
}

fn random_weight(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

fn random_su2_state(rng: &mut ChaCha8Rng, j: HalfInt, terms: usize) -> Su2State {
    loop {
        let t = (0..terms).map(|_| (random_weight(rng), Su2Label::new(random_gamma(rng, 1.5)))).collect();
        if let Ok(s) = Su2State::custom(j, "random", t) {
            return s;
        }
    }
}

fn cg_vs_ladder() -> Outcome {
    let mut worst: f64 = 0.0;
    for a in 0..=4 {
        for b in 0..=4 {
            let (j1, j2) = (hi(a), hi(b));
            let table = oracle::cg_ladder_oracle(j1, j2).map_err(e2s)?;
            for (jj, mm) in table.coupled() {
                for m1 in j1.projections() {
                    let m2 = mm - m1;
                    let racah = specfn::clebsch_gordan(j1, m1, j2, m2, jj, mm);
                    worst = worst.max((racah - table.get(m1, m2, jj, mm)).abs());
                }
            }
        }
    }
    Ok(worst)
}

fn kernel_vs_ladder() -> Outcome {
    let mut worst: f64 = 0.0;
    for twice in 0..=4 {
        let k = specfn::kernel_weights(hi(twice)).map_err(e2s)?;
        let l = oracle::ladder_kernel_weights(hi(twice)).map_err(e2s)?;
        for (a, b) in k.ascending().iter().zip(&l) {
            worst = worst.max((a - b).abs());
        }
        worst = worst.max((k.trace() - 1.0).abs());
    }
    Ok(worst)
}

fn algebra() -> Outcome {
    let mut worst: f64 = 0.0;
    for twice in 0..=4 {
        let j = hi(twice);
        let (a, b, z) = oracle::j_matrices(j).map_err(e2s)?;
        let comm = &a.entries * &b.entries - &b.entries * &a.entries - &z.entries * Complex64::new(0.0, 1.0);
        worst = worst.max(comm.camax());
    }
    Ok(worst)
}

fn composition(rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst: f64 = 0.0;
    for twice in [1, 2] {
        let j = hi(twice);
        for _ in 0..20 {
            let (g1, g2) = (random_gamma(rng, 2.0), random_gamma(rng, 2.0));
            let c = su2::compose(g1, g2).map_err(e2s)?;
            let lhs = &oracle::displacement_matrix(j, g1).map_err(e2s)? * &oracle::displacement_matrix(j, g2).map_err(e2s)?;
            let rhs = &oracle::displacement_matrix(j, c.gamma3).map_err(e2s)?
                * &oracle::rotation_j3(j, c.varphi).map_err(e2s)?;
            worst = worst.max((lhs.entries - rhs.entries).camax());
        }
    }
    Ok(worst)
}

fn amplitudes(rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst: f64 = 0.0;
    for twice in 0..=4 {
        for _ in 0..5 {
            let g = random_gamma(rng, 3.0);
            let u = su2::coherent_amplitudes(hi(twice), g).map_err(e2s)?;
            let v = oracle::su2_coherent_vector(hi(twice), g).map_err(e2s)?;
            for (a, b) in u.iter().zip(v.iter()) {
                worst = worst.max((a - b).norm());
            }
        }
    }
    Ok(worst)
}

/// Wigner values and overlaps of random 4-term superpositions against the
/// matrix oracle, 5 states per spin, 25 points each.
fn su2_states_vs_oracle(rng: &mut ChaCha8Rng, overlaps: bool) -> Outcome {
    let mut worst: f64 = 0.0;
    for twice in 1..=4 {
        let j = hi(twice);
        let w_oracle = oracle::Su2WignerOracle::new(j).map_err(e2s)?;
        for _ in 0..5 {
            let s = random_su2_state(rng, j, 4);
            let rho = oracle::su2_density(&s).map_err(e2s)?;
            for _ in 0..25 {
                let g = random_gamma(rng, 2.0);
                let err = if overlaps {
                    su2::overlap(&s, g).map_err(e2s)? - oracle::su2_overlap_oracle(&rho, j, g).map_err(e2s)?
                } else {
                    su2::wigner_at(&s, g).map_err(e2s)? - w_oracle.wigner(&rho, g).map_err(e2s)?
                };
                worst = worst.max(err.abs());
            }
        }
    }
    Ok(worst)
}

fn sum_rules(spins: &[i64], rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst: f64 = 0.0;
    for &twice in spins {
        let j = hi(twice);
        let states = [random_su2_state(rng, j, 3), Su2State::coherent(j, Complex64::new(0.3, -0.2)).map_err(e2s)?];
        for s in states {
            worst = worst.max((su2::sum_rule(&s).map_err(e2s)? - 1.0).abs());
        }
        if twice >= 1 {
            worst = worst.max((su2::sum_rule(&Su2State::compass(j).map_err(e2s)?).map_err(e2s)? - 1.0).abs());
        }
    }
    Ok(worst)
}

/// Closed-form cat Wigner against the general evaluation on identical
/// unnormalized operators, 101² points over `|x|, |p| ≤ 2` inside `|γ| ≤ 2`.
fn cat_closed_form(twice: i64) -> Outcome {
    let j = hi(twice);
    let terms = vec![
        (Complex64::new(1.0, 0.0), Su2Label::new(Complex64::new(1.0, 0.0))),
        (Complex64::new(1.0, 0.0), Su2Label::new(Complex64::new(-1.0, 0.0))),
    ];
    let family = su2::Su2Family::new(j).map_err(e2s)?;
    let mut worst: f64 = 0.0;
    for a in 0..101 {
        for b in 0..101 {
            let g = Complex64::new(-2.0 + 0.04 * a as f64, -2.0 + 0.04 * b as f64);
            if g.norm() > 2.0 {
                continue;
            }
            let general = subplanck::state::wigner_unnormalized(&family, &terms, g).map_err(e2s)?;
            let closed = su2::wigner_coherent_closed(j, 1, g).map_err(e2s)?
                + su2::wigner_coherent_closed(j, -1, g).map_err(e2s)?
                + 2.0 * su2::interference_h(j, g).map_err(e2s)?;
            worst = worst.max((general - closed).abs());
        }
    }
    Ok(worst)
}

/// HW states at `x0 = 4` against the truncated-Fock oracle, cutoff 64.
fn hw_fock(rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst: f64 = 0.0;
    let custom = HwState::custom(
        "random",
        (0..4)
            .map(|_| (random_weight(rng), HwLabel::new(Complex64::from_polar(2.0 * rng.gen::<f64>(), 2.0 * PI * rng.gen::<f64>()))))
            .collect(),
    )
    .map_err(e2s)?;
    let states = [
        HwState::cat_h(4.0).map_err(e2s)?,
        HwState::compass(4.0).map_err(e2s)?,
        HwState::cat_mixture(4.0).map_err(e2s)?,
        custom,
    ];
    for s in &states {
        let fock = oracle::hw_fock_oracle(s, 64).map_err(e2s)?;
        for _ in 0..25 {
            let r = Complex64::from_polar(2.5 * rng.gen::<f64>().sqrt(), 2.0 * PI * rng.gen::<f64>());
            worst = worst.max((hw::wigner_at(s, r).map_err(e2s)? - fock.wigner(r).map_err(e2s)?).abs());
            worst = worst.max((hw::overlap(s, r).map_err(e2s)? - fock.overlap(r).map_err(e2s)?).abs());
        }
    }
    Ok(worst)
}

pub fn run_validation(level: Level) -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut checks = Vec::new();
    run(&mut checks, "Clebsch-Gordan Racah vs ladder, 2j <= 4", 1e-12, cg_vs_ladder);
    run(&mut checks, "kernel weights vs ladder, trace = 1", 1e-12, kernel_vs_ladder);
    run(&mut checks, "[J1, J2] = i J3, 2j <= 4", 1e-13, algebra);
    run(&mut checks, "composition rule vs matrices, j <= 1", 1e-13, || composition(&mut rng));
    run(&mut checks, "coherent amplitudes vs D|j,j>, 2j <= 4", 1e-12, || amplitudes(&mut rng));
    run(&mut checks, "SU(2) Wigner vs matrix oracle, 2j <= 4", 1e-10, || su2_states_vs_oracle(&mut rng, false));
    run(&mut checks, "SU(2) overlap vs matrix oracle, 2j <= 4", 1e-10, || su2_states_vs_oracle(&mut rng, true));
    run(&mut checks, "sphere sum rule, 2j <= 4", 1e-10, || sum_rules(&[1, 2, 3, 4], &mut rng));
    if level == Level::Full {
        run(&mut checks, "cat closed form vs general Wigner, j = 30", 1e-9, || cat_closed_form(60));
        run(&mut checks, "HW Wigner and overlap vs Fock oracle, x0 = 4", 1e-8, || hw_fock(&mut rng));
        run(&mut checks, "sphere sum rule, j = 10 and 30", 1e-6, || sum_rules(&[20, 60], &mut rng));
    }
    Report { checks }
}
