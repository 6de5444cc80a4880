//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero if any fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use subplanck::analysis::{self, AnyState, Group, StateFamily};
use subplanck::field::Grid;
use subplanck::hw::{self, HwLabel, HwState};
use subplanck::specfn::HalfInt;
use subplanck::su2::{self, Su2Family, Su2Label, Su2State};
use subplanck::{oracle, state, Complex64, Result};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn hi(twice: i64) -> HalfInt {
    HalfInt::from_twice(twice)
}

fn random_gamma(rng: &mut ChaCha8Rng, radius: f64) -> Complex64 {
    Complex64::from_polar(radius * rng.gen::<f64>().sqrt(), 2.0 * PI * rng.gen::<f64>())
}

fn random_weight(rng: &mut ChaCha8Rng) -> Complex64 {
    c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// Outcome of one criterion: pass flag and a short account of the numbers.
type Verdict = (bool, String);

fn hw_cat_zeros() -> Result<Verdict> {
    let s = HwState::cat_h(8.0)?;
    let f1 = hw::overlap(&s, c(0.0, PI / 8.0))?;
    let f3 = hw::overlap(&s, c(0.0, 3.0 * PI / 8.0))?;
    let mut real_min = f64::INFINITY;
    for k in 0..=2000 {
        let d = -1.0 + k as f64 * 1e-3;
        real_min = real_min.min(hw::overlap(&s, c(d, 0.0))?);
    }
    let ok = f1 < 1e-12 && f3 < 1e-12 && real_min > 0.1;
    Ok((ok, format!("F(i pi/8) = {f1:.1e}, F(3i pi/8) = {f3:.1e}, min real-axis F = {real_min:.4}")))
}

fn hw_compass_zeros() -> Result<Verdict> {
    let s = HwState::compass(8.0)?;
    // The central zero contour |δx| + |δp| = π/4, where the four lines meet.
    let mut line_max: f64 = 0.0;
    for k in 0..=40 {
        let t = PI / 4.0 * k as f64 / 40.0;
        for (sx, sp) in [(1.0, 1.0), (-1.0, 1.0), (1.0, -1.0), (-1.0, -1.0)] {
            line_max = line_max.max(hw::overlap(&s, c(sx * t, sp * (PI / 4.0 - t)))?);
        }
    }
    let any = AnyState::Hw(s);
    let mut mins = Vec::new();
    for d in [0.0, PI / 4.0, PI / 2.0] {
        mins.push(analysis::zero_scan(&any, d, 3.0, 1e-6)?.min_zero_magnitude);
    }
    let found: Vec<f64> = mins.iter().flatten().copied().collect();
    let spread = if found.len() == 3 { analysis::relative_spread(&found) } else { f64::INFINITY };
    let ok = line_max < 1e-12 && spread <= 0.1;
    Ok((ok, format!("max F on lines = {line_max:.1e}, min zeros {mins:.4?}, spread {:.1}%", 100.0 * spread)))
}

fn hw_mixture_zeros() -> Result<Verdict> {
    let s = HwState::cat_mixture(8.0)?;
    let q = PI / 8.0;
    let mut at_zero: f64 = 0.0;
    for (a, b) in [(1.0, 1.0), (-1.0, 1.0), (1.0, -1.0), (-1.0, -1.0)] {
        at_zero = at_zero.max(hw::overlap(&s, c(a * q, b * q))?);
    }
    let real = hw::overlap(&s, c(q, 0.0))?;
    // Every near-zero sample of a fine grid sits next to an odd-odd lattice point.
    let grid = Grid::square(4.0 * q, 161)?;
    let mut stray = 0;
    for ix in 0..grid.x.count {
        for ip in 0..grid.p.count {
            let z = grid.point(ix, ip);
            if hw::overlap(&s, z)? < 1e-3 {
                let off = |v: f64| ((v / q - 1.0) / 2.0 - ((v / q - 1.0) / 2.0).round()).abs() * 2.0 * q;
                if off(z.re).hypot(off(z.im)) > 0.1 {
                    stray += 1;
                }
            }
        }
    }
    let ok = at_zero < 1e-12 && real > 0.2 && stray == 0;
    Ok((ok, format!("max F at odd-odd points = {at_zero:.1e}, F(pi/8) = {real:.4}, stray near-zeros {stray}")))
}

fn su2_cat_zero() -> Result<Verdict> {
    let f = su2::overlap(&Su2State::cat_h(hi(20))?, c(0.0, (PI / 40.0).tan()))?;
    Ok((f < 1e-10, format!("F(i tan(pi/40)) = {f:.1e}")))
}

fn closed_vs_general() -> Result<Verdict> {
    let j = hi(60);
    let family = Su2Family::new(j)?;
    let terms = vec![(c(1.0, 0.0), Su2Label::new(c(1.0, 0.0))), (c(1.0, 0.0), Su2Label::new(c(-1.0, 0.0)))];
    let mut worst: f64 = 0.0;
    for a in 0..101 {
        for b in 0..101 {
            let g = c(-2.0 + 0.04 * a as f64, -2.0 + 0.04 * b as f64);
            if g.norm() > 2.0 {
                continue;
            }
            let general = state::wigner_unnormalized(&family, &terms, g)?;
            let closed = su2::wigner_coherent_closed(j, 1, g)?
                + su2::wigner_coherent_closed(j, -1, g)?
                + 2.0 * su2::interference_h(j, g)?;
            worst = worst.max((general - closed).abs());
        }
    }
    Ok((worst < 1e-9, format!("max |diff| = {worst:.1e}")))
}

fn oracle_equivalence() -> Result<Verdict> {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut su2_worst: f64 = 0.0;
    for twice in 1..=4 {
        let j = hi(twice);
        let w_oracle = oracle::Su2WignerOracle::new(j)?;
        for _ in 0..5 {
            let terms = (0..4).map(|_| (random_weight(&mut rng), Su2Label::new(random_gamma(&mut rng, 1.5)))).collect();
            let s = Su2State::custom(j, "random", terms)?;
            let rho = oracle::su2_density(&s)?;
            for _ in 0..25 {
                let g = random_gamma(&mut rng, 2.0);
                su2_worst = su2_worst.max((su2::wigner_at(&s, g)? - w_oracle.wigner(&rho, g)?).abs());
                su2_worst = su2_worst.max((su2::overlap(&s, g)? - oracle::su2_overlap_oracle(&rho, j, g)?).abs());
            }
        }
    }
    let mut hw_worst: f64 = 0.0;
    let custom = HwState::custom(
        "random",
        (0..4).map(|_| (random_weight(&mut rng), HwLabel::new(random_gamma(&mut rng, 2.0)))).collect(),
    )?;
    for s in [HwState::cat_h(4.0)?, HwState::compass(4.0)?, HwState::cat_mixture(4.0)?, custom] {
        let fock = oracle::hw_fock_oracle(&s, 64)?;
        for _ in 0..25 {
            let r = random_gamma(&mut rng, 2.5);
            hw_worst = hw_worst.max((hw::wigner_at(&s, r)? - fock.wigner(r)?).abs());
            hw_worst = hw_worst.max((hw::overlap(&s, r)? - fock.overlap(r)?).abs());
        }
    }
    let ok = su2_worst < 1e-10 && hw_worst < 1e-8;
    Ok((ok, format!("SU(2) max |diff| = {su2_worst:.1e}, HW max |diff| = {hw_worst:.1e}")))
}

fn scaling_fits() -> Result<Verdict> {
    let hw_scales = [6.0, 8.0, 10.0, 12.0];
    let su2_scales = [10.0, 20.0, 30.0];
    let hw_tiles = analysis::tile_scaling(Group::Hw, StateFamily::Compass, &hw_scales)?;
    let su2_tiles = analysis::tile_scaling(Group::Su2, StateFamily::Compass, &su2_scales)?;
    let hw_zeros = analysis::enhancement_report(Group::Hw, StateFamily::Compass, &hw_scales, &[], 1e-6)?;
    let su2_zeros = analysis::enhancement_report(Group::Su2, StateFamily::Compass, &su2_scales, &[], 1e-6)?;
    let worst_spread = |r: &analysis::EnhancementReport| {
        r.directions.iter().filter(|d| d.has_zeros).map(|d| d.spread).fold(0.0, f64::max)
    };
    let (hs, ss) = (worst_spread(&hw_zeros), worst_spread(&su2_zeros));
    let ok = (hw_tiles.fit.exponent + 2.0).abs() <= 0.1
        && (su2_tiles.fit.exponent + 1.0).abs() <= 0.15
        && hw_zeros.directions.iter().any(|d| d.has_zeros)
        && su2_zeros.directions.iter().any(|d| d.has_zeros)
        && hs <= 0.1
        && ss <= 0.1;
    Ok((
        ok,
        format!(
            "HW area exponent {:.3}, SU(2) extent exponent {:.3}, zero*scale spread HW {:.2}% SU(2) {:.2}%",
            hw_tiles.fit.exponent,
            su2_tiles.fit.exponent,
            100.0 * hs,
            100.0 * ss
        ),
    ))
}

fn mixture_approximation() -> Result<Verdict> {
    let j = hi(20);
    let family = Su2Family::new(j)?;
    let parts = match Su2State::cat_mixture(j)?.kind {
        state::StateKind::Mixture(parts) => parts,
        state::StateKind::Pure(_) => unreachable!("cat_mixture is a mixture"),
    };
    let grid = Grid::square(0.5, 41)?;
    let mut worst: f64 = 0.0;
    for ix in 0..grid.x.count {
        for ip in 0..grid.p.count {
            let d = grid.point(ix, ip);
            if d.norm() > 0.5 + 1e-12 {
                continue;
            }
            worst = worst.max((state::mixture_overlap_unnormalized(&family, &parts, d)? - su2::closed::mixture_overlap(j, d)).abs());
        }
    }
    Ok((worst < 1e-6, format!("max |exact - (F_H + F_V)| = {worst:.2e}")))
}

fn sum_rules() -> Result<Verdict> {
    let grid = Grid::square(16.0, 401)?;
    let vacuum = hw::wigner(&HwState::coherent(c(0.0, 0.0))?, &grid)?.integral();
    let mut hw_worst: f64 = 0.0;
    for s in [
        HwState::coherent(c(1.5, -2.0))?,
        HwState::cat_h(8.0)?,
        HwState::cat_v(8.0)?,
        HwState::compass(8.0)?,
        HwState::cat_mixture(8.0)?,
    ] {
        hw_worst = hw_worst.max((hw::wigner(&s, &grid)?.integral() - vacuum).abs());
    }
    let mut su2_worst: f64 = 0.0;
    for twice in [1, 2, 20, 60] {
        let j = hi(twice);
        for s in [Su2State::coherent(j, c(0.4, 0.3))?, Su2State::cat_h(j)?, Su2State::compass(j)?] {
            su2_worst = su2_worst.max((su2::sum_rule(&s)? - 1.0).abs());
        }
    }
    let ok = hw_worst < 1e-6 && su2_worst < 1e-6;
    Ok((ok, format!("HW max |I - I_vac| = {hw_worst:.1e} (I_vac = {vacuum:.12}), SU(2) max |S - 1| = {su2_worst:.1e}")))
}

fn composition() -> Result<Verdict> {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let j = hi(1);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let (g1, g2) = (random_gamma(&mut rng, 3.0), random_gamma(&mut rng, 3.0));
        let comp = su2::compose(g1, g2)?;
        let lhs = &oracle::displacement_matrix(j, g1)? * &oracle::displacement_matrix(j, g2)?;
        let rhs = &oracle::displacement_matrix(j, comp.gamma3)? * &oracle::rotation_j3(j, comp.varphi)?;
        worst = worst.max((lhs.entries - rhs.entries).camax());
    }
    Ok((worst < 1e-14, format!("max |D1 D2 - D3 R| = {worst:.1e}")))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Result<Verdict>); 10] = [
        ("HW cat zeros", hw_cat_zeros),
        ("HW compass zeros", hw_compass_zeros),
        ("HW mixture zeros", hw_mixture_zeros),
        ("SU(2) cat zero", su2_cat_zero),
        ("closed-form vs general SU(2) Wigner", closed_vs_general),
        ("oracle equivalence", oracle_equivalence),
        ("scaling fits", scaling_fits),
        ("mixture approximation", mixture_approximation),
        ("normalization sum rules", sum_rules),
        ("composition rule", composition),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let (ok, detail) = match check() {
            Ok(v) => v,
            Err(e) => (false, format!("error: {e}")),
        };
        failed += usize::from(!ok);
        println!(
            "{} criterion {:>2} {name}: {detail} ({:.1}s)",
            if ok { "PASS" } else { "FAIL" },
            k + 1,
            t.elapsed().as_secs_f64()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
