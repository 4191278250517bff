//! Linear-optical-network unitaries and their action on Fock-basis states.
//!
//! A network on `M` modes is a unitary `U ∈ U(M)` in the mode picture. Its
//! state-space representation acts on single-photon amplitude vectors as a
//! plain matrix-vector product; for `N > 1` photons the transition amplitudes
//! are permanents of row/column-repeated submatrices of `U`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::fock::{self, StateVector};
use crate::{Error, Result};

/// Frobenius-norm tolerance on `U†U - 1` at construction.
pub const UNITARITY_TOL: f64 = 1e-10;

/// Largest matrix dimension accepted by [`permanent`].
pub const PERMANENT_CAP: usize = 20;

/// Unitary mode transformation of an `M`-mode network.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ModeUnitaryRepr", into = "ModeUnitaryRepr")]
pub struct ModeUnitary {
    mat: DMatrix<Complex64>,
}

impl ModeUnitary {
    /// Wrap a matrix, verifying unitarity to [`UNITARITY_TOL`].
    pub fn new(mat: DMatrix<Complex64>) -> Result<Self> {
        if !mat.is_square() || mat.nrows() == 0 {
            return Err(Error::InvalidArgument(
                "mode unitary must be square and non-empty".into(),
            ));
        }
        let defect = (mat.adjoint() * &mat - DMatrix::identity(mat.nrows(), mat.ncols())).norm();
        if defect > UNITARITY_TOL {
            return Err(Error::NotUnitary {
                defect,
                tol: UNITARITY_TOL,
            });
        }
        Ok(Self { mat })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            mat: DMatrix::identity(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.mat
    }

    /// Network composition: `self` applied after `first`.
    pub fn compose(&self, first: &ModeUnitary) -> Result<Self> {
        if self.dim() != first.dim() {
            return Err(Error::InvalidArgument(
                "cannot compose unitaries of different dimension".into(),
            ));
        }
        Ok(Self {
            mat: &self.mat * &first.mat,
        })
    }
}

/// JSON form: `{dim, entries: [[re, im], ...]}` row-major.
#[derive(Serialize, Deserialize)]
struct ModeUnitaryRepr {
    dim: usize,
    entries: Vec<(f64, f64)>,
}

impl From<ModeUnitary> for ModeUnitaryRepr {
    fn from(u: ModeUnitary) -> Self {
        let dim = u.dim();
        let entries = (0..dim)
            .flat_map(|i| (0..dim).map(move |j| (i, j)))
            .map(|(i, j)| (u.mat[(i, j)].re, u.mat[(i, j)].im))
            .collect();
        Self { dim, entries }
    }
}

impl TryFrom<ModeUnitaryRepr> for ModeUnitary {
    type Error = Error;

    fn try_from(repr: ModeUnitaryRepr) -> Result<Self> {
        if repr.entries.len() != repr.dim * repr.dim {
            return Err(Error::InvalidArgument(format!(
                "expected {} entries for dim {}, got {}",
                repr.dim * repr.dim,
                repr.dim,
                repr.entries.len()
            )));
        }
        let mat = DMatrix::from_iterator(
            repr.dim,
            repr.dim,
            // column-major fill from a row-major list
            (0..repr.dim).flat_map(|j| {
                let entries = &repr.entries;
                (0..repr.dim).map(move |i| {
                    let (re, im) = entries[i * repr.dim + j];
                    Complex64::new(re, im)
                })
            }),
        );
        ModeUnitary::new(mat)
    }
}

/// The Hadamard-walk block unitary on `M = 2P` modes,
/// `(1/√2) [[Σ, Σ], [Σᵀ, -Σᵀ]]`, with `Σ` the cyclic translation matrix
/// (`Σ v` shifts `v_{x+1}` into slot `x`). Mode index convention is
/// `i = P·c + x` with coin `c ∈ {0 ≡ -, 1 ≡ +}`.
pub fn hadamard_walk_unitary(positions: usize) -> ModeUnitary {
    let p = positions;
    let m = 2 * p;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut mat = DMatrix::zeros(m, m);
    for x in 0..p {
        let xp = (x + 1) % p; // source position for a left-mover
        let xm = (x + p - 1) % p; // source position for a right-mover
        mat[(x, xp)] = Complex64::new(s, 0.0); // - block from -
        mat[(x, p + xp)] = Complex64::new(s, 0.0); // - block from +
        mat[(p + x, xm)] = Complex64::new(s, 0.0); // + block from -
        mat[(p + x, p + xm)] = Complex64::new(-s, 0.0); // + block from +
    }
    ModeUnitary::new(mat).expect("walk unitary is unitary by construction")
}

/// Haar-random unitary via QR of a complex standard-Gaussian matrix with the
/// diagonal-phase fix. Deterministic for a fixed RNG state.
pub fn haar_random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ModeUnitary {
    let z = DMatrix::from_fn(dim, dim, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    });
    let qr = z.qr();
    let r = qr.r();
    let mut q = qr.q();
    // absorb the phases of R's diagonal so the distribution is Haar
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() == 0.0 {
            Complex64::ONE
        } else {
            d / d.norm()
        };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    ModeUnitary::new(q).expect("QR of a Gaussian matrix yields a unitary")
}

/// Uniform random point on the unit sphere in `ℝ^M` (normalized standard
/// Gaussian vector).
pub fn random_sphere_point<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(rng)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-100 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

/// Permanent of a square complex matrix by Ryser's inclusion-exclusion with
/// Gray-code updates, O(2ⁿ·n). The empty matrix has permanent 1.
pub fn permanent(mat: &DMatrix<Complex64>) -> Result<Complex64> {
    if !mat.is_square() {
        return Err(Error::InvalidArgument(
            "permanent requires a square matrix".into(),
        ));
    }
    let n = mat.nrows();
    if n > PERMANENT_CAP {
        return Err(Error::PermanentCap {
            dim: n,
            cap: PERMANENT_CAP,
        });
    }
    if n == 0 {
        return Ok(Complex64::ONE);
    }
    let mut row_sums = vec![Complex64::ZERO; n];
    let mut total = Complex64::ZERO;
    let mut gray: u64 = 0;
    let mut sign = 1.0f64; // (-1)^{|S|}, |S| starts at 0
    for k in 1u64..(1u64 << n) {
        let bit = k.trailing_zeros() as usize;
        let new_gray = gray ^ (1 << bit);
        if new_gray & (1 << bit) != 0 {
            for (i, s) in row_sums.iter_mut().enumerate() {
                *s += mat[(i, bit)];
            }
        } else {
            for (i, s) in row_sums.iter_mut().enumerate() {
                *s -= mat[(i, bit)];
            }
        }
        gray = new_gray;
        sign = -sign;
        let prod: Complex64 = row_sums.iter().product();
        total += sign * prod;
    }
    let overall = if n % 2 == 0 { 1.0 } else { -1.0 };
    Ok(total * overall)
}

/// Apply the state-space representation of `u` to `input`.
///
/// For `N = 1` this is the matrix-vector product `U ψ`. For `N > 1` the
/// transition amplitude from `|n⃗⟩` to `|m⃗⟩` is
/// `per(U[m⃗, n⃗]) / √(∏ nᵢ! ∏ mⱼ!)`, with row `j` of `U` repeated `mⱼ`
/// times and column `i` repeated `nᵢ` times. The output is renormalized
/// (the drift is checked to stay below 1e-10).
pub fn apply_lon(u: &ModeUnitary, input: &StateVector) -> Result<StateVector> {
    let modes = input.modes();
    if u.dim() != modes {
        return Err(Error::ShapeMismatch {
            expected_modes: u.dim(),
            expected_photons: input.photons() as usize,
            modes,
            photons: input.photons() as usize,
        });
    }
    let photons = input.photons();

    if photons == 1 {
        let amps = input.amplitudes();
        let out: Vec<Complex64> = (0..modes)
            .map(|j| (0..modes).map(|i| u.matrix()[(j, i)] * amps[i]).sum())
            .collect();
        return StateVector::renormalized(modes, 1, out);
    }

    let dim = fock::basis_dimension(modes, photons)? as usize;
    let inputs: Vec<_> = input
        .iter()
        .filter(|(_, a)| a.norm_sqr() > 0.0)
        .map(|(s, a)| {
            let cols = repeat_indices(s.occupations());
            let fac = occupation_factorial(s.occupations());
            (cols, fac, a)
        })
        .collect();

    let mut out = vec![Complex64::ZERO; dim];
    for (k, slot) in out.iter_mut().enumerate() {
        let target = fock::unrank(k as u64, modes, photons)?;
        let rows = repeat_indices(target.occupations());
        let tfac = occupation_factorial(target.occupations());
        let mut acc = Complex64::ZERO;
        for (cols, sfac, amp) in &inputs {
            let sub = DMatrix::from_fn(rows.len(), cols.len(), |r, c| {
                u.matrix()[(rows[r], cols[c])]
            });
            acc += *amp * permanent(&sub)? / (sfac * tfac).sqrt();
        }
        *slot = acc;
    }

    let norm: f64 = out.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized { norm, tol: 1e-10 });
    }
    StateVector::renormalized(modes, photons, out)
}

fn repeat_indices(occ: &[u32]) -> Vec<usize> {
    occ.iter()
        .enumerate()
        .flat_map(|(i, &n)| std::iter::repeat(i).take(n as usize))
        .collect()
}

fn occupation_factorial(occ: &[u32]) -> f64 {
    occ.iter()
        .map(|&n| (1..=n as u64).map(|k| k as f64).product::<f64>())
        .product()
}
