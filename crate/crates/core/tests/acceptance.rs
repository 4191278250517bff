//! End-to-end acceptance gate. Each numbered check prints a single
//! PASS/FAIL line; the process exits nonzero if any check fails.

use std::time::Instant;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qwalk::analytic::{self, CoinSeries};
use qwalk::ensemble::{self, InitialState};
use qwalk::fock::{FockState, StateVector};
use qwalk::lon::{apply_lon, random_sphere_point, ModeUnitary};
use qwalk::schmidt::{self, Bipartition};
use qwalk::walk::{eg_series, CoinInitialState, Walk, WalkConfig, WalkPartition};
use qwalk::wstate::{self, WState};

type CheckResult = Result<String, String>;

fn main() {
    let checks: Vec<(&str, fn() -> CheckResult)> = vec![
        ("symmetric W-state golden values", golden_values),
        ("W-solver vs product-state maximization", oracle_equivalence),
        ("closed-form phi1 vs walk engine", analytic_vs_simulation),
        ("phi1 asymptote at 10^4 steps", asymptotics),
        ("von Neumann entropy closed form", entropy),
        ("circle-walk periodicity", periodicity),
        ("boundary onset at P=64", boundary_onset),
        ("entanglement typicality power law", typicality),
        ("multi-photon entanglement", multi_photon),
        ("P=500 x 5000-step scale run", scale_run),
    ];

    let mut failed = 0;
    for (idx, (name, check)) in checks.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("[{:2}] {name}: PASS ({secs:.1} s) — {detail}", idx + 1),
            Err(reason) => {
                failed += 1;
                println!("[{:2}] {name}: FAIL ({secs:.1} s) — {reason}", idx + 1);
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance check(s) failed");
        std::process::exit(1);
    }
}

// 1. E_g of the symmetric W state equals 1 - (1 - 1/M)^{M-1} to 1e-12 for
//    M = 2..=1000.
fn golden_values() -> CheckResult {
    let mut worst = 0.0f64;
    for m in 2..=1000usize {
        let report = wstate::g_max_full(&WState::symmetric(m))
            .map_err(|e| format!("M={m}: {e}"))?;
        let expect = 1.0 - (1.0 - 1.0 / m as f64).powi(m as i32 - 1);
        worst = worst.max((report.e_g - expect).abs());
    }
    if worst < 1e-12 {
        Ok(format!("max |error| {worst:.2e}"))
    } else {
        Err(format!("max |error| {worst:.2e} exceeds 1e-12"))
    }
}

// Coordinate-ascent maximization of |<product|psi>|^2 with multistarts; the
// optimal product state for nonnegative coefficients has real parameters.
fn product_overlap_oracle(lambda: &[f64], rng: &mut ChaCha8Rng) -> f64 {
    let m = lambda.len();
    let mut best = lambda.iter().map(|l| l * l).fold(0.0f64, f64::max);
    for _ in 0..24 {
        let mut angles: Vec<f64> = (0..m).map(|_| rng.random_range(0.05..1.5)).collect();
        for _ in 0..500 {
            let mut moved = 0.0;
            for i in 0..m {
                let mut sin_coef = lambda[i];
                for j in 0..m {
                    if j != i {
                        sin_coef *= angles[j].cos();
                    }
                }
                let mut cos_coef = 0.0;
                for k in 0..m {
                    if k == i {
                        continue;
                    }
                    let mut term = lambda[k] * angles[k].sin();
                    for j in 0..m {
                        if j != i && j != k {
                            term *= angles[j].cos();
                        }
                    }
                    cos_coef += term;
                }
                let updated = sin_coef.atan2(cos_coef);
                moved += (updated - angles[i]).abs();
                angles[i] = updated;
            }
            if moved < 1e-13 {
                break;
            }
        }
        let mut overlap = 0.0;
        for i in 0..m {
            let mut term = lambda[i] * angles[i].sin();
            for j in 0..m {
                if j != i {
                    term *= angles[j].cos();
                }
            }
            overlap += term;
        }
        best = best.max(overlap * overlap);
    }
    best
}

// 2. 200 random W states with M <= 4: solver matches the direct
//    maximization to 1e-6.
fn oracle_equivalence() -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(2001);
    let mut worst = 0.0f64;
    for trial in 0..200 {
        let m = 2 + trial % 3;
        let lambda: Vec<f64> = random_sphere_point(m, &mut rng)
            .into_iter()
            .map(f64::abs)
            .collect();
        let solved = wstate::g_max_full(&WState::new(lambda.clone()).unwrap())
            .map_err(|e| format!("trial {trial}: {e}"))?
            .g_max;
        let oracle = product_overlap_oracle(&lambda, &mut rng);
        worst = worst.max((solved - oracle).abs());
    }
    if worst < 1e-6 {
        Ok(format!("max |solver - oracle| {worst:.2e}"))
    } else {
        Err(format!("max |solver - oracle| {worst:.2e} exceeds 1e-6"))
    }
}

// 3. phi1(n) closed form vs the engine's coin weight on the line, n <= 50,
//    5x5 grid of (theta, phi).
fn analytic_vs_simulation() -> CheckResult {
    let n_max = 50;
    let series = CoinSeries::new(n_max);
    let mut worst = 0.0f64;
    for i in 0..5 {
        let theta = std::f64::consts::PI * i as f64 / 4.0;
        for j in 0..5 {
            let phi = 2.0 * std::f64::consts::PI * j as f64 / 4.0;
            let mut walk = Walk::new(WalkConfig::line(n_max), CoinInitialState::new(theta, phi));
            for n in 1..=n_max {
                walk.step();
                let engine = walk.coin_partition_weights().1;
                let closed = series.phi1(n, theta, phi).unwrap();
                worst = worst.max((engine - closed).abs());
            }
        }
    }
    if worst < 1e-12 {
        Ok(format!("max |engine - closed form| {worst:.2e}"))
    } else {
        Err(format!("max |engine - closed form| {worst:.2e} exceeds 1e-12"))
    }
}

// 4. |phi1(10^4) - limit| < 5e-3 at theta = 0, with alternating error sign.
fn asymptotics() -> CheckResult {
    let n = 10_000;
    let series = CoinSeries::new(n + 1);
    let limit = analytic::asymptotic_phi1(0.0, 0.0);
    if (limit - 0.353553).abs() > 1e-6 {
        return Err(format!("limit {limit} is not 0.353553..."));
    }
    let even = series.phi1(n, 0.0, 0.0).unwrap() - limit;
    let odd = series.phi1(n + 1, 0.0, 0.0).unwrap() - limit;
    if even.abs() >= 5e-3 || odd.abs() >= 5e-3 {
        return Err(format!("errors {even:.2e}, {odd:.2e} exceed 5e-3"));
    }
    if even * odd >= 0.0 {
        return Err(format!("errors {even:.2e}, {odd:.2e} do not alternate"));
    }
    Ok(format!("|error| {:.2e}, signs alternate", even.abs()))
}

// 5. Closed-form entropy vs partial trace to 1e-10 for n <= 50; within
//    5e-3 of the limit for n >= 10^3.
fn entropy() -> CheckResult {
    let series = CoinSeries::new(2001);
    let mut walk = Walk::new(WalkConfig::line(50), CoinInitialState::minus());
    let mut worst = 0.0f64;
    for n in 1..=50 {
        walk.step();
        let traced = qwalk::walk::coin_position_entropy(walk.amplitudes());
        worst = worst.max((series.entropy(n).unwrap() - traced).abs());
    }
    if worst >= 1e-10 {
        return Err(format!("max |closed - traced| {worst:.2e} exceeds 1e-10"));
    }
    let limit = analytic::entropy_limit();
    for n in [1000usize, 1500, 2000] {
        let s = series.entropy(n).unwrap();
        if (s - limit).abs() >= 5e-3 {
            return Err(format!("S({n}) = {s} not within 5e-3 of {limit}"));
        }
    }
    Ok(format!(
        "max |closed - traced| {worst:.2e}; limit {limit:.4} reached"
    ))
}

// 6. Full-separability E_g periodic with periods 2, 2, 4, 24 for
//    P = 1, 2, 4, 8; P=3 and P=6 series identical.
fn periodicity() -> CheckResult {
    for (p, period) in [(1usize, 2usize), (2, 2), (4, 4), (8, 24)] {
        let steps = 3 * period;
        let series = eg_series(
            WalkConfig::circle(p).unwrap(),
            CoinInitialState::minus(),
            steps,
            WalkPartition::Full,
        )
        .map_err(|e| format!("P={p}: {e}"))?;
        for n in 0..=steps - period {
            if (series[n] - series[n + period]).abs() >= 1e-12 {
                return Err(format!("P={p}: period {period} violated at n={n}"));
            }
        }
        // the period must be minimal
        for d in 1..period {
            if period % d == 0
                && (0..=steps - d).all(|n| (series[n] - series[n + d]).abs() < 1e-9)
            {
                return Err(format!("P={p}: series also has smaller period {d}"));
            }
        }
    }
    let three = eg_series(
        WalkConfig::circle(3).unwrap(),
        CoinInitialState::minus(),
        60,
        WalkPartition::Full,
    )
    .unwrap();
    let six = eg_series(
        WalkConfig::circle(6).unwrap(),
        CoinInitialState::minus(),
        60,
        WalkPartition::Full,
    )
    .unwrap();
    for n in 0..=60 {
        if (three[n] - six[n]).abs() >= 1e-12 {
            return Err(format!("P=3 vs P=6 differ at n={n}"));
        }
    }
    Ok("periods 2, 2, 4, 24 minimal; P=3 ≡ P=6".into())
}

// 7. Coin-partition E_g at P=64 (circle) vs the line: identical to 1e-12
//    through n=32, first deviation at n=33 in (1e-11, 1e-9).
fn boundary_onset() -> CheckResult {
    let steps = 34;
    let circle = eg_series(
        WalkConfig::circle(64).unwrap(),
        CoinInitialState::minus(),
        steps,
        WalkPartition::Coin,
    )
    .unwrap();
    let line = eg_series(
        WalkConfig::line(steps),
        CoinInitialState::minus(),
        steps,
        WalkPartition::Coin,
    )
    .unwrap();
    for n in 0..=32 {
        let delta = (circle[n] - line[n]).abs();
        if delta >= 1e-12 {
            return Err(format!("premature deviation {delta:.2e} at n={n}"));
        }
    }
    let onset = (circle[33] - line[33]).abs();
    if onset <= 1e-11 || onset >= 1e-9 {
        return Err(format!("deviation at n=33 is {onset:.2e}, not in (1e-11, 1e-9)"));
    }
    Ok(format!(
        "onset |Δ(33)| = {onset:.1e}, |Δ(34)| = {:.1e}",
        (circle[34] - line[34]).abs()
    ))
}

// 8. Typicality gap E_g,max - mean(E_g) strictly decreasing over
//    M = 10, 100, 1000, 10000 (500 samples); log-log fit over M >= 50 has
//    R^2 >= 0.99 and exponent in [-1.15, -0.85].
fn typicality() -> CheckResult {
    let mut points = Vec::new();
    for m in [10usize, 100, 1000, 10000] {
        let summary = ensemble::sample_w_ensemble(m, 500, 20240817, false)
            .map_err(|e| format!("M={m}: {e}"))?;
        let gap = wstate::e_g_max(m) - summary.mean;
        if gap <= 0.0 {
            return Err(format!("gap at M={m} is not positive"));
        }
        points.push((m as f64, gap));
    }
    for w in points.windows(2) {
        if w[1].1 >= w[0].1 {
            return Err(format!("gap not strictly decreasing: {points:?}"));
        }
    }
    let fit = ensemble::fit_power_law(&points, 50.0).map_err(|e| e.to_string())?;
    if fit.r_squared < 0.99 {
        return Err(format!("R^2 = {} below 0.99", fit.r_squared));
    }
    if !(-1.15..=-0.85).contains(&fit.exponent) {
        return Err(format!("exponent {} outside [-1.15, -0.85]", fit.exponent));
    }
    Ok(format!(
        "exponent {:.3}, R^2 {:.4}",
        fit.exponent, fit.r_squared
    ))
}

// 9. Hong-Ou-Mandel E_g = 1/2; GME of the symmetric three-mode
//    single-photon state = 1/3 (against a brute-force cut minimum); GME
//    means rise with N at fixed M and fall with M at fixed N.
fn multi_photon() -> CheckResult {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let bs = ModeUnitary::new(DMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(r, 0.0),
            Complex64::new(r, 0.0),
            Complex64::new(r, 0.0),
            Complex64::new(-r, 0.0),
        ],
    ))
    .unwrap();
    let hom = apply_lon(
        &bs,
        &StateVector::basis_state(&FockState::new(vec![1, 1])).unwrap(),
    )
    .unwrap();
    let hom_eg = schmidt::e_g_bipartite(&hom, &Bipartition::new(vec![0], 2).unwrap()).unwrap();
    if (hom_eg - 0.5).abs() >= 1e-12 {
        return Err(format!("Hong-Ou-Mandel E_g = {hom_eg}, expected 1/2"));
    }

    let w3 = StateVector::single_photon(vec![Complex64::new(1.0 / 3f64.sqrt(), 0.0); 3]).unwrap();
    let gme = schmidt::gme(&w3).unwrap().e_g;
    // brute-force oracle: a single photon across a cut has Schmidt weights
    // (p_left, 1 - p_left)
    let brute = schmidt::bipartitions(3)
        .map(|cut| {
            let left = cut.left().len() as f64 / 3.0;
            left.min(1.0 - left)
        })
        .fold(f64::INFINITY, f64::min);
    if (gme - 1.0 / 3.0).abs() >= 1e-10 || (gme - brute).abs() >= 1e-10 {
        return Err(format!("W3 GME = {gme}, expected 1/3 (brute force {brute})"));
    }

    let samples = 500;
    let mean = |m: usize, n: u32| -> Result<f64, String> {
        Ok(
            ensemble::sample_gme_ensemble(m, n, samples, 909, InitialState::N0, false)
                .map_err(|e| e.to_string())?
                .mean,
        )
    };
    let by_n: Vec<f64> = [1u32, 2, 3]
        .iter()
        .map(|&n| mean(4, n))
        .collect::<Result<_, _>>()?;
    if !(by_n[0] < by_n[1] && by_n[1] < by_n[2]) {
        return Err(format!("mean GME not increasing in N at M=4: {by_n:?}"));
    }
    let by_m: Vec<f64> = [4usize, 8, 12]
        .iter()
        .map(|&m| mean(m, 2))
        .collect::<Result<_, _>>()?;
    if !(by_m[0] > by_m[1] && by_m[1] > by_m[2]) {
        return Err(format!("mean GME not decreasing in M at N=2: {by_m:?}"));
    }
    Ok(format!(
        "HOM 1/2; W3 1/3; N-trend {by_n:?}; M-trend {by_m:?}"
    ))
}

// 10. P=500 walk for 5000 steps with per-step full-separability E_g in
//     under 5 minutes, norm drift < 1e-9.
fn scale_run() -> CheckResult {
    let start = Instant::now();
    let partition = WalkPartition::Full.to_partition(500);
    let mut walk = Walk::new(WalkConfig::circle(500).unwrap(), CoinInitialState::minus());
    let mut last_eg = 0.0;
    for _ in 0..5000 {
        walk.step();
        last_eg = wstate::e_g(walk.amplitudes(), &partition)
            .map_err(|e| e.to_string())?
            .e_g;
    }
    let drift = (walk.norm() - 1.0).abs();
    let secs = start.elapsed().as_secs_f64();
    if drift >= 1e-9 {
        return Err(format!("norm drift {drift:.2e} exceeds 1e-9"));
    }
    if secs >= 300.0 {
        return Err(format!("run took {secs:.0} s, over the 5-minute budget"));
    }
    Ok(format!(
        "{secs:.1} s, norm drift {drift:.1e}, final E_g {last_eg:.4}"
    ))
}
