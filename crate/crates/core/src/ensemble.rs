//! Ensemble statistics over Haar-random networks.
//!
//! Trials are embarrassingly parallel. Determinism is independent of the
//! thread count: trial `t` of a run seeded with `s` always uses ChaCha
//! stream `t` of the generator seeded with `s`, and raw values are sorted
//! before any reduction that is order-sensitive.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::fock::{FockState, StateVector};
use crate::lon::{apply_lon, haar_random_unitary, random_sphere_point};
use crate::{schmidt, wstate, Error, Result};

/// Summary statistics of one ensemble: mean and the central 68% interval
/// (16th–84th percentile), which is preferred over the standard deviation
/// because the distributions are skewed.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnsembleSummary {
    pub modes: usize,
    pub photons: u32,
    pub samples: usize,
    pub mean: f64,
    pub p16: f64,
    pub p84: f64,
    /// Raw per-trial values, ascending; retained only on request.
    pub values: Option<Vec<f64>>,
}

/// Least-squares fit of `gap = prefactor · M^exponent` on log-log data.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub prefactor: f64,
    pub r_squared: f64,
    pub fit_range_min_m: f64,
}

/// Initial Fock state for network ensembles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialState {
    /// All `N` photons in mode 0.
    N0,
    /// One photon in each of the first `N` modes.
    Ones,
}

impl InitialState {
    pub fn fock(self, modes: usize, photons: u32) -> Result<FockState> {
        let mut occ = vec![0u32; modes];
        match self {
            InitialState::N0 => occ[0] = photons,
            InitialState::Ones => {
                if (photons as usize) > modes {
                    return Err(Error::InvalidArgument(format!(
                        "one photon per mode needs M ≥ N, got M={modes}, N={photons}"
                    )));
                }
                occ[..photons as usize].fill(1);
            }
        }
        Ok(FockState::new(occ))
    }
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn summarize(modes: usize, photons: u32, mut values: Vec<f64>, keep: bool) -> EnsembleSummary {
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let samples = values.len();
    let mean = values.iter().sum::<f64>() / samples as f64;
    let (p16, p84) = central_interval(&values, 0.68);
    EnsembleSummary {
        modes,
        photons,
        samples,
        mean,
        p16,
        p84,
        values: keep.then_some(values),
    }
}

/// Per-trial full-separability `E_g` of random single-photon states on `M`
/// modes (the first column of a Haar unitary: uniform on the complex unit
/// sphere).
pub fn w_ensemble_values(modes: usize, samples: usize, seed: u64) -> Result<Vec<f64>> {
    if modes < 2 || samples < 2 {
        return Err(Error::InvalidArgument(
            "need M ≥ 2 and at least two samples".into(),
        ));
    }
    (0..samples as u64)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(seed, trial);
            let point = random_sphere_point(2 * modes, &mut rng);
            let coeffs: Vec<f64> = point
                .chunks(2)
                .map(|c| (c[0] * c[0] + c[1] * c[1]).sqrt())
                .collect();
            let w = wstate::WState::new(coeffs)?;
            Ok(1.0 - wstate::g_max_full(&w)?.g_max)
        })
        .collect()
}

/// Summary of `w_ensemble_values`; deterministic per seed.
pub fn sample_w_ensemble(
    modes: usize,
    samples: usize,
    seed: u64,
    keep_values: bool,
) -> Result<EnsembleSummary> {
    let values = w_ensemble_values(modes, samples, seed)?;
    Ok(summarize(modes, 1, values, keep_values))
}

/// Per-trial GME of a fixed input state sent through independent
/// Haar-random networks.
pub fn gme_ensemble_values(
    modes: usize,
    photons: u32,
    samples: usize,
    seed: u64,
    initial: InitialState,
) -> Result<Vec<f64>> {
    if samples < 2 {
        return Err(Error::InvalidArgument("need at least two samples".into()));
    }
    let input = StateVector::basis_state(&initial.fock(modes, photons)?)?;
    (0..samples as u64)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(seed, trial);
            let u = haar_random_unitary(modes, &mut rng);
            let out = apply_lon(&u, &input)?;
            Ok(schmidt::gme(&out)?.e_g)
        })
        .collect()
}

/// Summary of `gme_ensemble_values`; deterministic per seed.
pub fn sample_gme_ensemble(
    modes: usize,
    photons: u32,
    samples: usize,
    seed: u64,
    initial: InitialState,
    keep_values: bool,
) -> Result<EnsembleSummary> {
    let values = gme_ensemble_values(modes, photons, samples, seed, initial)?;
    Ok(summarize(modes, photons, values, keep_values))
}

/// Central `fraction` interval of sorted-or-unsorted data, by linear
/// interpolation between order statistics (the "inclusive" convention:
/// percentile p sits at 1-based position `h = (n-1)p + 1`).
pub fn central_interval(values: &[f64], fraction: f64) -> (f64, f64) {
    let mut sorted: Vec<f64>;
    let data = if values.windows(2).all(|w| w[0] <= w[1]) {
        values
    } else {
        sorted = values.to_vec();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        &sorted
    };
    let p_low = (1.0 - fraction) / 2.0;
    (percentile(data, p_low), percentile(data, 1.0 - p_low))
}

fn percentile(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let h = (n - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Fit `gap = prefactor · M^exponent` by least squares on the log-log
/// transform, using only points with `M ≥ min_m`.
pub fn fit_power_law(points: &[(f64, f64)], min_m: f64) -> Result<PowerLawFit> {
    let fit_points: Vec<(f64, f64)> = points
        .iter()
        .filter(|(m, _)| *m >= min_m)
        .map(|&(m, gap)| {
            if m <= 0.0 || gap <= 0.0 {
                Err(Error::InvalidArgument(format!(
                    "power-law fit needs positive data, got ({m}, {gap})"
                )))
            } else {
                Ok((m.ln(), gap.ln()))
            }
        })
        .collect::<Result<_>>()?;
    if fit_points.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "power-law fit needs at least two points with M ≥ {min_m}, got {}",
            fit_points.len()
        )));
    }

    let n = fit_points.len() as f64;
    let mean_x = fit_points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = fit_points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = fit_points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = fit_points
        .iter()
        .map(|p| (p.0 - mean_x) * (p.1 - mean_y))
        .sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;

    let ss_res: f64 = fit_points
        .iter()
        .map(|p| (p.1 - (slope * p.0 + intercept)).powi(2))
        .sum();
    let ss_tot: f64 = fit_points.iter().map(|p| (p.1 - mean_y).powi(2)).sum();
    let r_squared = if ss_tot == 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot };

    Ok(PowerLawFit {
        exponent: slope,
        prefactor: intercept.exp(),
        r_squared,
        fit_range_min_m: min_m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn percentile_hand_values() {
        let constant = vec![3.5; 17];
        assert_eq!(central_interval(&constant, 0.68), (3.5, 3.5));

        let ladder: Vec<f64> = (1..=100).map(|i| i as f64).collect();
        let (lo, hi) = central_interval(&ladder, 0.68);
        assert!((lo - 16.84).abs() < 1e-12, "p16 = {lo}");
        assert!((hi - 84.16).abs() < 1e-12, "p84 = {hi}");
    }

    #[test]
    fn percentile_symmetric_data() {
        let data: Vec<f64> = (-500..=500).map(|i| i as f64 / 100.0).collect();
        let (lo, hi) = central_interval(&data, 0.68);
        assert!((lo + hi).abs() < 1e-12);
    }

    #[test]
    fn exact_power_law_recovered() {
        let points: Vec<(f64, f64)> = [50.0, 100.0, 400.0, 1000.0, 10000.0]
            .iter()
            .map(|&m| (m, 2.5 / m))
            .collect();
        let fit = fit_power_law(&points, 50.0).unwrap();
        assert!((fit.exponent + 1.0).abs() < 1e-10);
        assert!((fit.prefactor - 2.5).abs() < 1e-9);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn underdetermined_fit_rejected() {
        assert!(fit_power_law(&[(100.0, 0.1)], 50.0).is_err());
        assert!(fit_power_law(&[(10.0, 0.5), (20.0, 0.2)], 50.0).is_err());
        assert!(fit_power_law(&[(100.0, 0.0), (200.0, 0.1)], 50.0).is_err());
    }

    #[test]
    fn w_ensemble_deterministic() {
        let a = sample_w_ensemble(6, 50, 1234, true).unwrap();
        let b = sample_w_ensemble(6, 50, 1234, true).unwrap();
        assert_eq!(a.mean.to_bits(), b.mean.to_bits());
        assert_eq!(a.values, b.values);
        let c = sample_w_ensemble(6, 50, 1235, false).unwrap();
        assert_ne!(a.mean.to_bits(), c.mean.to_bits());
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let single = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| sample_gme_ensemble(4, 2, 30, 7, InitialState::N0, true).unwrap());
        let multi = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap()
            .install(|| sample_gme_ensemble(4, 2, 30, 7, InitialState::N0, true).unwrap());
        assert_eq!(single.values, multi.values);
    }

    #[test]
    fn two_mode_values_bounded_by_maximum() {
        let summary = sample_w_ensemble(2, 300, 9, true).unwrap();
        for &v in summary.values.as_ref().unwrap() {
            assert!(v <= 0.5 + 1e-12);
        }
        assert!(summary.p16 <= summary.p84);
    }

    #[test]
    fn typicality_gap_shrinks() {
        let mut gaps = Vec::new();
        for m in [10usize, 100, 1000] {
            let summary = sample_w_ensemble(m, 200, 42, false).unwrap();
            let gap = wstate::e_g_max(m) - summary.mean;
            assert!(gap > 0.0, "M={m}");
            gaps.push(gap);
        }
        assert!(gaps[0] > gaps[1] && gaps[1] > gaps[2], "{gaps:?}");
    }

    #[test]
    fn large_m_mean_near_power_law_prediction() {
        let m = 10_000;
        let summary = sample_w_ensemble(m, 500, 2024, false).unwrap();
        let predicted = wstate::e_g_max(m) - 1.0 / (std::f64::consts::E * m as f64);
        assert!(
            (summary.mean - predicted).abs() < 0.1 * predicted,
            "mean {} vs predicted {predicted}",
            summary.mean
        );
    }

    fn ks_distance(mut a: Vec<f64>, mut b: Vec<f64>) -> f64 {
        a.sort_by(|x, y| x.partial_cmp(y).unwrap());
        b.sort_by(|x, y| x.partial_cmp(y).unwrap());
        let mut d: f64 = 0.0;
        let (mut i, mut j) = (0usize, 0usize);
        while i < a.len() && j < b.len() {
            if a[i] <= b[j] {
                i += 1;
            } else {
                j += 1;
            }
            let fa = i as f64 / a.len() as f64;
            let fb = j as f64 / b.len() as f64;
            d = d.max((fa - fb).abs());
        }
        d
    }

    #[test]
    fn single_photon_gme_matches_w_ensemble_distribution() {
        let m = 4;
        let samples = 2000;
        // for N=1 the GME is the minimum over cuts; reduce the W ensemble
        // the same way by taking min over coarse-grained bipartitions
        let w_min: Vec<f64> = (0..samples as u64)
            .map(|trial| {
                let mut rng = trial_rng(4321, trial);
                let point = random_sphere_point(2 * m, &mut rng);
                let probs: Vec<f64> = point.chunks(2).map(|c| c[0] * c[0] + c[1] * c[1]).collect();
                schmidt::bipartitions(m)
                    .map(|cut| {
                        let left: f64 = cut.left().iter().map(|&i| probs[i]).sum();
                        left.min(1.0 - left)
                    })
                    .fold(f64::INFINITY, f64::min)
            })
            .collect();
        let gme_values = gme_ensemble_values(m, 1, samples, 8765, InitialState::N0).unwrap();
        let d = ks_distance(w_min, gme_values);
        assert!(d < 0.05, "KS distance {d}");
    }

    #[test]
    fn gme_mean_rises_with_photon_number() {
        let m = 4;
        let means: Vec<f64> = [1u32, 3]
            .iter()
            .map(|&n| {
                sample_gme_ensemble(m, n, 150, 11, InitialState::N0, false)
                    .unwrap()
                    .mean
            })
            .collect();
        assert!(means[1] > means[0], "{means:?}");
    }

    #[test]
    fn ones_initial_state_shape() {
        assert_eq!(
            InitialState::Ones.fock(4, 2).unwrap().occupations(),
            &[1, 1, 0, 0]
        );
        assert_eq!(
            InitialState::N0.fock(3, 2).unwrap().occupations(),
            &[2, 0, 0]
        );
        assert!(InitialState::Ones.fock(2, 3).is_err());
    }
}
