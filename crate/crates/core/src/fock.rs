//! Fock-basis bookkeeping: enumeration, ranking, and normalized state
//! vectors for `N` photons in `M` modes.
//!
//! Basis states are ordered lexicographically *descending* on the occupation
//! vector, so `(N, 0, ..., 0)` has rank 0 and `(0, ..., 0, N)` has rank
//! `dim - 1`. Ranking and unranking run in O(M + N) using the combinatorial
//! number system; no lookup tables are built.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Norm tolerance for state-vector construction. Inputs outside it are
/// rejected, not silently renormalized.
pub const NORM_TOL: f64 = 1e-12;

/// Occupation-number basis state: photon counts per mode.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FockState(Vec<u32>);

impl FockState {
    pub fn new(occupations: Vec<u32>) -> Self {
        Self(occupations)
    }

    pub fn occupations(&self) -> &[u32] {
        &self.0
    }

    pub fn modes(&self) -> usize {
        self.0.len()
    }

    /// Total photon number `|n⃗|`.
    pub fn photons(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl From<Vec<u32>> for FockState {
    fn from(v: Vec<u32>) -> Self {
        Self(v)
    }
}

/// `C(m - 1 + n, n)` as u64, with `dim(0, 0) = 1` and `dim(0, n>0) = 0`.
fn dim_u128(modes: usize, photons: u32) -> Option<u128> {
    if modes == 0 {
        return Some(if photons == 0 { 1 } else { 0 });
    }
    binomial_u128(modes as u128 - 1 + photons as u128, photons as u128)
}

fn binomial_u128(n: u128, k: u128) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for j in 1..=k {
        // acc is always an exact binomial after the division
        acc = acc.checked_mul(n - k + j)? / j;
    }
    Some(acc)
}

/// Dimension of the fixed-photon-number Hilbert space, `C(M - 1 + N, N)`.
pub fn basis_dimension(modes: usize, photons: u32) -> Result<u64> {
    if modes == 0 {
        return Err(Error::InvalidArgument("mode count must be >= 1".into()));
    }
    dim_u128(modes, photons)
        .filter(|&d| d <= u64::MAX as u128)
        .map(|d| d as u64)
        .ok_or(Error::DimensionOverflow {
            modes,
            photons: photons as usize,
        })
}

/// Rank of a basis state under the documented lexicographic-descending order.
pub fn rank(state: &FockState) -> u64 {
    let occ = state.occupations();
    let m = occ.len();
    let mut remaining: u32 = state.photons();
    let mut r: u128 = 0;
    for (j, &nj) in occ.iter().enumerate().take(m.saturating_sub(1)) {
        let tail_modes = m - j - 1;
        // states with a larger occupation at position j come first
        for a in (nj + 1)..=remaining {
            r += dim_u128(tail_modes, remaining - a).expect("dimension fits in u128");
        }
        remaining -= nj;
    }
    r as u64
}

/// Inverse of [`rank`]: the basis state at `index` for `M` modes, `N` photons.
pub fn unrank(index: u64, modes: usize, photons: u32) -> Result<FockState> {
    let dim = basis_dimension(modes, photons)?;
    if index >= dim {
        return Err(Error::IndexOutOfRange { index, dim });
    }
    let mut idx = index as u128;
    let mut occ = vec![0u32; modes];
    let mut remaining = photons;
    for j in 0..modes - 1 {
        let tail_modes = modes - j - 1;
        for a in (0..=remaining).rev() {
            let count = dim_u128(tail_modes, remaining - a).expect("dimension fits in u128");
            if idx < count {
                occ[j] = a;
                remaining -= a;
                break;
            }
            idx -= count;
        }
    }
    occ[modes - 1] = remaining;
    Ok(FockState(occ))
}

/// Iterate all basis states for `(M, N)` in rank order.
pub fn basis_iter(modes: usize, photons: u32) -> impl Iterator<Item = FockState> {
    let dim = basis_dimension(modes, photons).unwrap_or(0);
    (0..dim).map(move |k| unrank(k, modes, photons).expect("index in range"))
}

/// Normalized complex amplitude vector over a fixed-photon-number Fock basis,
/// dense in rank order. For `N = 1` the amplitude at index `i` is the
/// amplitude of one photon in mode `i`.
///
/// Immutable after construction; safe to share across threads.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StateVectorRepr", into = "StateVectorRepr")]
pub struct StateVector {
    modes: usize,
    photons: u32,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Build from amplitudes in rank order. The norm must be within
    /// [`NORM_TOL`] of 1.
    pub fn new(modes: usize, photons: u32, amps: Vec<Complex64>) -> Result<Self> {
        let dim = basis_dimension(modes, photons)? as usize;
        if amps.len() != dim {
            return Err(Error::InvalidArgument(format!(
                "expected {dim} amplitudes for (M={modes}, N={photons}), got {}",
                amps.len()
            )));
        }
        let norm = norm_of(&amps);
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized {
                norm,
                tol: NORM_TOL,
            });
        }
        Ok(Self {
            modes,
            photons,
            amps,
        })
    }

    /// Build from arbitrary nonzero amplitudes, scaling to unit norm.
    /// Relative phases are preserved.
    pub fn normalize(modes: usize, photons: u32, mut amps: Vec<Complex64>) -> Result<Self> {
        let dim = basis_dimension(modes, photons)? as usize;
        if amps.len() != dim {
            return Err(Error::InvalidArgument(format!(
                "expected {dim} amplitudes for (M={modes}, N={photons}), got {}",
                amps.len()
            )));
        }
        let norm = norm_of(&amps);
        if norm == 0.0 {
            return Err(Error::ZeroNorm);
        }
        for a in &mut amps {
            *a /= norm;
        }
        Ok(Self {
            modes,
            photons,
            amps,
        })
    }

    /// Internal path for amplitudes that are unit norm up to roundoff drift
    /// (e.g. after long unitary evolution); rescales exactly.
    pub(crate) fn renormalized(modes: usize, photons: u32, amps: Vec<Complex64>) -> Result<Self> {
        Self::normalize(modes, photons, amps)
    }

    /// Single basis state `|n⃗⟩`.
    pub fn basis_state(state: &FockState) -> Result<Self> {
        let modes = state.modes();
        let photons = state.photons();
        let dim = basis_dimension(modes, photons)? as usize;
        let mut amps = vec![Complex64::ZERO; dim];
        amps[rank(state) as usize] = Complex64::ONE;
        Ok(Self {
            modes,
            photons,
            amps,
        })
    }

    /// Single-photon state from a length-M amplitude vector.
    pub fn single_photon(amps: Vec<Complex64>) -> Result<Self> {
        let modes = amps.len();
        Self::new(modes, 1, amps)
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn photons(&self) -> u32 {
        self.photons
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, state: &FockState) -> Complex64 {
        self.amps[rank(state) as usize]
    }

    pub fn norm(&self) -> f64 {
        norm_of(&self.amps)
    }

    /// `(basis state, amplitude)` pairs in rank order.
    pub fn iter(&self) -> impl Iterator<Item = (FockState, Complex64)> + '_ {
        self.amps
            .iter()
            .enumerate()
            .map(|(k, &a)| (unrank(k as u64, self.modes, self.photons).unwrap(), a))
    }
}

fn norm_of(amps: &[Complex64]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

/// JSON form: `{"M", "N", "entries": [[occupations...], re, im]}` with only
/// nonzero amplitudes stored. Floats use serde_json's shortest-representation
/// decimal encoding, which round-trips f64 exactly.
#[derive(Serialize, Deserialize)]
struct StateVectorRepr {
    #[serde(rename = "M")]
    modes: usize,
    #[serde(rename = "N")]
    photons: u32,
    entries: Vec<(Vec<u32>, f64, f64)>,
}

impl From<StateVector> for StateVectorRepr {
    fn from(sv: StateVector) -> Self {
        let entries = sv
            .iter()
            .filter(|(_, a)| *a != Complex64::ZERO)
            .map(|(s, a)| (s.0, a.re, a.im))
            .collect();
        Self {
            modes: sv.modes,
            photons: sv.photons,
            entries,
        }
    }
}

impl TryFrom<StateVectorRepr> for StateVector {
    type Error = Error;

    fn try_from(repr: StateVectorRepr) -> Result<Self> {
        let dim = basis_dimension(repr.modes, repr.photons)? as usize;
        let mut amps = vec![Complex64::ZERO; dim];
        for (occ, re, im) in repr.entries {
            let state = FockState(occ);
            if state.modes() != repr.modes || state.photons() != repr.photons {
                return Err(Error::InvalidArgument(format!(
                    "entry {:?} inconsistent with (M={}, N={})",
                    state.occupations(),
                    repr.modes,
                    repr.photons
                )));
            }
            amps[rank(&state) as usize] = Complex64::new(re, im);
        }
        StateVector::new(repr.modes, repr.photons, amps)
    }
}
