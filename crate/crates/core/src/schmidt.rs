//! Bipartite and genuine multipartite entanglement of multi-photon states.
//!
//! A mode bipartition `L : R` splits a Fock state by how many of the `N`
//! photons sit in the left modes. Amplitudes with `t` photons on the left
//! form a `dim(|L|, t) × dim(|R|, N-t)` coefficient block; the state's
//! Schmidt coefficients are the singular values of these blocks taken
//! together, and the maximal product-state overlap is the largest σ².
//!
//! Genuine multipartite entanglement (GME) is the minimum `E_g = 1 - σ²_max`
//! over all bipartitions; a state is fully multipartite entangled iff it is
//! entangled across every cut.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::fock::{basis_dimension, basis_iter, FockState, StateVector};
use crate::{Error, Result};

const SCHMIDT_SUM_TOL: f64 = 1e-10;

/// Default cap on the mode count for exhaustive bipartition enumeration
/// (`2^{M-1} - 1` cuts).
pub const GME_MODE_CAP: usize = 16;

/// A cut of the modes into two non-empty blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    left: Vec<usize>,
    right: Vec<usize>,
    modes: usize,
}

impl Bipartition {
    pub fn new(left: Vec<usize>, modes: usize) -> Result<Self> {
        let mut seen = vec![false; modes];
        for &i in &left {
            if i >= modes {
                return Err(Error::InvalidPartition {
                    reason: format!("mode {i} out of range for {modes} modes"),
                });
            }
            if seen[i] {
                return Err(Error::InvalidPartition {
                    reason: format!("mode {i} listed twice"),
                });
            }
            seen[i] = true;
        }
        if left.is_empty() || left.len() == modes {
            return Err(Error::InvalidPartition {
                reason: "both sides of a bipartition must be non-empty".into(),
            });
        }
        let right = (0..modes).filter(|&i| !seen[i]).collect();
        let mut left = left;
        left.sort_unstable();
        Ok(Self { left, right, modes })
    }

    /// Left block from a bitmask (bit `i` set ⇔ mode `i` on the left).
    pub fn from_mask(mask: u64, modes: usize) -> Result<Self> {
        let left = (0..modes).filter(|&i| mask >> i & 1 == 1).collect();
        Self::new(left, modes)
    }

    pub fn mask(&self) -> u64 {
        self.left.iter().fold(0, |m, &i| m | 1 << i)
    }

    pub fn left(&self) -> &[usize] {
        &self.left
    }

    pub fn right(&self) -> &[usize] {
        &self.right
    }

    pub fn modes(&self) -> usize {
        self.modes
    }
}

/// All bipartitions in canonical order: mode 0 on the left, the remaining
/// modes added by ascending bitmask. `2^{M-1} - 1` entries.
pub fn bipartitions(modes: usize) -> impl Iterator<Item = Bipartition> {
    let top = 1u64 << (modes - 1);
    (0..top - 1).map(move |rest| {
        Bipartition::from_mask(1 | rest << 1, modes)
            .expect("canonical masks are valid bipartitions")
    })
}

/// Squared Schmidt coefficients across the cut, descending. Sums to 1.
pub fn schmidt_coefficients(state: &StateVector, cut: &Bipartition) -> Result<Vec<f64>> {
    if cut.modes() != state.modes() {
        return Err(Error::InvalidPartition {
            reason: format!(
                "bipartition covers {} modes but the state has {}",
                cut.modes(),
                state.modes()
            ),
        });
    }
    let n = state.photons();
    let (k, r) = (cut.left().len(), cut.right().len());

    let mut coeffs = Vec::new();
    for t in 0..=n {
        let rows = basis_dimension(k, t)? as usize;
        let cols = basis_dimension(r, n - t)? as usize;
        let mut block = DMatrix::<Complex64>::zeros(rows, cols);
        for (i, ls) in basis_iter(k, t).enumerate() {
            for (j, rs) in basis_iter(r, n - t).enumerate() {
                let mut occ = vec![0u32; state.modes()];
                for (&m, &o) in cut.left().iter().zip(ls.occupations()) {
                    occ[m] = o;
                }
                for (&m, &o) in cut.right().iter().zip(rs.occupations()) {
                    occ[m] = o;
                }
                block[(i, j)] = state.amplitude(&FockState::new(occ));
            }
        }
        let svd = block.svd(false, false);
        coeffs.extend(svd.singular_values.iter().map(|s| s * s));
    }

    let total: f64 = coeffs.iter().sum();
    if (total - 1.0).abs() > SCHMIDT_SUM_TOL {
        return Err(Error::NotNormalized {
            norm: total.sqrt(),
            tol: SCHMIDT_SUM_TOL,
        });
    }
    coeffs.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(coeffs)
}

/// Largest squared product-state overlap across the cut.
pub fn g_max_bipartite(state: &StateVector, cut: &Bipartition) -> Result<f64> {
    Ok(schmidt_coefficients(state, cut)?[0])
}

/// `E_g = 1 - σ²_max` across the cut.
pub fn e_g_bipartite(state: &StateVector, cut: &Bipartition) -> Result<f64> {
    Ok(1.0 - g_max_bipartite(state, cut)?)
}

/// Result of a GME minimization: the minimal `E_g` and the cut achieving it.
#[derive(Debug, Clone)]
pub struct GmeReport {
    pub e_g: f64,
    pub g_max: f64,
    pub argmin: Bipartition,
}

/// Minimum `E_g` over all bipartitions, with the default mode cap.
pub fn gme(state: &StateVector) -> Result<GmeReport> {
    gme_with_cap(state, GME_MODE_CAP)
}

/// GME with an explicit cap on the exhaustive enumeration. Ties resolve to
/// the first cut in canonical order regardless of thread count.
pub fn gme_with_cap(state: &StateVector, cap: usize) -> Result<GmeReport> {
    let m = state.modes();
    if m > cap {
        return Err(Error::GmeCap { modes: m, cap });
    }
    if m < 2 {
        return Err(Error::InvalidPartition {
            reason: "GME needs at least two modes".into(),
        });
    }
    let cuts: Vec<Bipartition> = bipartitions(m).collect();
    let evaluated: Vec<f64> = cuts
        .par_iter()
        .map(|cut| e_g_bipartite(state, cut))
        .collect::<Result<_>>()?;
    let (best, &e_g) = evaluated
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| a.partial_cmp(b).unwrap())
        .expect("at least one bipartition");
    Ok(GmeReport {
        e_g,
        g_max: 1.0 - e_g,
        argmin: cuts[best].clone(),
    })
}
