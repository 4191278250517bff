//! Geometric measure of entanglement for generalized W states.
//!
//! A single photon in `M` modes is a W state `Σ λᵢ |1ᵢ⟩` with nonnegative,
//! ascending coefficients. Its maximal separability eigenvalue `g_max` under
//! the full partition is found by at most two one-dimensional root searches
//! on a compact interval, so the whole computation scales like O(M). The
//! geometric measure is `E_g = 1 - g_max`. Arbitrary partitions reduce to
//! the full-partition problem by coarse-graining block weights into a
//! smaller W state.

use num_complex::Complex64;

use crate::{Error, Result};

/// Coefficient magnitudes below this are treated as vacuum modes and dropped;
/// vacuum modes do not contribute to the entanglement.
pub const VACUUM_TOL: f64 = 1e-14;

const NORM_TOL: f64 = 1e-12;
/// Half-width of the seam around `λ_M² = 1/2` where the simple branch is
/// taken directly.
const BRANCH_TIE_TOL: f64 = 1e-14;
/// Residual requirement on the separability root.
const ROOT_RESIDUAL_TOL: f64 = 1e-13;
const MAX_ROOT_ITERS: usize = 300;
/// Above this mode count the `g` products are evaluated in log space.
const LOG_SPACE_THRESHOLD: usize = 64;

/// Generalized W state: nonnegative coefficients `λ₁ ≤ … ≤ λ_M`,
/// `Σ λᵢ² = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct WState {
    coeffs: Vec<f64>,
}

impl WState {
    /// Build from nonnegative coefficients; sorts ascending and verifies
    /// normalization to 1e-12.
    pub fn new(mut coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("W state needs at least one mode".into()));
        }
        if coeffs.iter().any(|&c| c < 0.0 || !c.is_finite()) {
            return Err(Error::InvalidArgument(
                "W-state coefficients must be finite and nonnegative".into(),
            ));
        }
        let norm2: f64 = coeffs.iter().map(|c| c * c).sum();
        if (norm2 - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized {
                norm: norm2.sqrt(),
                tol: NORM_TOL,
            });
        }
        coeffs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(Self { coeffs })
    }

    /// The symmetric W state, `λᵢ = 1/√M`.
    pub fn symmetric(modes: usize) -> Self {
        let c = 1.0 / (modes as f64).sqrt();
        Self {
            coeffs: vec![c; modes],
        }
    }

    /// Strip phases from a complex single-photon amplitude vector, sort the
    /// moduli ascending, and drop vacuum modes (below [`VACUUM_TOL`]). The
    /// entanglement is invariant under this map.
    pub fn from_amplitudes(amplitudes: &[Complex64]) -> Result<Self> {
        let mut coeffs: Vec<f64> = amplitudes
            .iter()
            .map(|a| a.norm())
            .filter(|&c| c >= VACUUM_TOL)
            .collect();
        if coeffs.is_empty() {
            return Err(Error::ZeroNorm);
        }
        coeffs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let norm2: f64 = coeffs.iter().map(|c| c * c).sum();
        if (norm2 - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized {
                norm: norm2.sqrt(),
                tol: NORM_TOL,
            });
        }
        Ok(Self { coeffs })
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn modes(&self) -> usize {
        self.coeffs.len()
    }
}

/// Disjoint, covering, non-empty blocks of mode indices `0..M`.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
    modes: usize,
}

impl Partition {
    pub fn new(blocks: Vec<Vec<usize>>, modes: usize) -> Result<Self> {
        let mut seen = vec![false; modes];
        if blocks.is_empty() {
            return Err(Error::InvalidPartition {
                reason: "no blocks".into(),
            });
        }
        for block in &blocks {
            if block.is_empty() {
                return Err(Error::InvalidPartition {
                    reason: "empty block".into(),
                });
            }
            for &i in block {
                if i >= modes {
                    return Err(Error::InvalidPartition {
                        reason: format!("index {i} out of range for {modes} modes"),
                    });
                }
                if seen[i] {
                    return Err(Error::InvalidPartition {
                        reason: format!("index {i} appears twice"),
                    });
                }
                seen[i] = true;
            }
        }
        if !seen.iter().all(|&s| s) {
            return Err(Error::InvalidPartition {
                reason: "blocks do not cover all modes".into(),
            });
        }
        Ok(Self { blocks, modes })
    }

    /// Full separability: each mode its own block.
    pub fn full(modes: usize) -> Self {
        Self {
            blocks: (0..modes).map(|i| vec![i]).collect(),
            modes,
        }
    }

    /// A single block: everything separable from nothing.
    pub fn trivial(modes: usize) -> Self {
        Self {
            blocks: vec![(0..modes).collect()],
            modes,
        }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }
}

/// Which solver branch produced `g_max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// `λ_M² ≥ 1/2`: the largest eigenvalue `λ_M²` dominates.
    Simple,
    /// Root of `F₁` on `(0, ξ_max]`.
    F1Root,
    /// Nontrivial root of `F₂`, isolated via the root of `∂_ξ F₂`.
    F2Root,
}

/// Result of an entanglement computation.
#[derive(Debug, Clone, PartialEq)]
pub struct EntanglementReport {
    pub g_max: f64,
    pub e_g: f64,
    pub branch: Branch,
    /// Root `ξ₀` of the separability function, when a root search ran.
    pub xi0: Option<f64>,
}

impl EntanglementReport {
    fn new(g_max: f64, branch: Branch, xi0: Option<f64>) -> Self {
        Self {
            g_max,
            e_g: 1.0 - g_max,
            branch,
            xi0,
        }
    }
}

/// Compensated sum: plain accumulation over ~10³ terms costs ~10⁻¹¹ of
/// absolute accuracy, which the root residual test cannot tolerate.
fn kahan_sum(terms: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut carry = 0.0;
    for t in terms {
        let y = t - carry;
        let s = sum + y;
        carry = (s - sum) - y;
        sum = s;
    }
    sum
}

/// Maximal separability eigenvalue of a W state under the full partition.
///
/// If `λ_M² ≥ 1/2` the `M` trivial solutions dominate and `g_max = λ_M²`.
/// Otherwise there is exactly one extra solution, reached through the root
/// `ξ₀` of either `F₁` or `F₂` (selected by the sign of `f₀`) on
/// `(0, 1/λ_M²]`.
pub fn g_max_full(w: &WState) -> Result<EntanglementReport> {
    let lam = w.coefficients();
    let m = lam.len();
    if m == 1 {
        return Ok(EntanglementReport::new(1.0, Branch::Simple, None));
    }
    let lm2 = lam[m - 1] * lam[m - 1];
    if lm2 >= 0.5 - BRANCH_TIE_TOL {
        return Ok(EntanglementReport::new(lm2, Branch::Simple, None));
    }

    let xi_max = 1.0 / lm2;
    let f0 = (m as f64 - 2.0)
        - kahan_sum(lam[..m - 1].iter().map(|&l| (1.0 - l * l / lm2).max(0.0).sqrt()));

    if f0 >= 0.0 {
        // F₁ has its single root between ξ = 0 (where F₁ = -2) and ξ_max
        let f1 = |xi: f64| {
            (m as f64 - 2.0)
                - kahan_sum(lam.iter().map(|&l| (1.0 - l * l * xi).max(0.0).sqrt()))
        };
        let xi0 = bracketed_root(&f1, 0.0, xi_max, -2.0, f0, xi_max)?;
        let g = eval_g(lam, xi0, true);
        Ok(EntanglementReport::new(g, Branch::F1Root, Some(xi0)))
    } else {
        // F₂ has a trivial root at 0; Rolle isolates the nontrivial one:
        // ∂F₂ > 0 at 0 and → -∞ at ξ_max, so its root ξ̃ brackets [ξ̃, ξ_max]
        let f2 = |xi: f64| {
            let sm = (1.0 - lm2 * xi).max(0.0).sqrt();
            (m as f64 - 2.0) + sm
                - kahan_sum(lam[..m - 1].iter().map(|&l| (1.0 - l * l * xi).max(0.0).sqrt()))
        };
        let df2 = |xi: f64| {
            let sm = (1.0 - lm2 * xi).max(0.0).sqrt();
            let falling = if sm > 0.0 { -lm2 / (2.0 * sm) } else { f64::NEG_INFINITY };
            kahan_sum(lam[..m - 1].iter().map(|&l| {
                let s = (1.0 - l * l * xi).max(0.0).sqrt();
                if s > 0.0 {
                    l * l / (2.0 * s)
                } else {
                    f64::INFINITY
                }
            })) + falling
        };
        let hi = xi_max * (1.0 - 1e-14);
        let d_lo = df2(0.0);
        let d_hi = df2(hi);
        let xi_tilde = bracketed_root_loose(&df2, 0.0, hi, d_lo, d_hi, xi_max)?;
        let f_tilde = f2(xi_tilde);
        let f_hi = f0; // F₂(ξ_max) = f₀ < 0
        let xi0 = bracketed_root(&f2, xi_tilde, xi_max, f_tilde, f_hi, xi_max)?;
        let g = eval_g(lam, xi0, false);
        Ok(EntanglementReport::new(g, Branch::F2Root, Some(xi0)))
    }
}

/// `g₁` (`plus = true`) or `g₂` (`plus = false`) at ξ. Log-space form
/// `Σ log((1 + sᵢ)/2) + log(2 (1 ± s_M)/ξ)` avoids underflow for large M.
fn eval_g(lam: &[f64], xi: f64, plus: bool) -> f64 {
    let m = lam.len();
    let sm = (1.0 - lam[m - 1] * lam[m - 1] * xi).max(0.0).sqrt();
    let last = if plus { 1.0 + sm } else { 1.0 - sm };
    if m > LOG_SPACE_THRESHOLD {
        let log_sum: f64 = lam[..m - 1]
            .iter()
            .map(|&l| (((1.0 - l * l * xi).max(0.0).sqrt() + 1.0) / 2.0).ln())
            .sum();
        (log_sum + (2.0 * last / xi).ln()).exp()
    } else {
        let prod: f64 = lam[..m - 1]
            .iter()
            .map(|&l| 1.0 + (1.0 - l * l * xi).max(0.0).sqrt())
            .product();
        prod * last / (2f64.powi(m as i32 - 2) * xi)
    }
}

/// Bracketing hybrid root finder (bisection with secant acceleration).
/// Converges when `|f| < 1e-13` or the bracket shrinks below `1e-15 · scale`.
fn bracketed_root(
    f: &dyn Fn(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
    mut f_lo: f64,
    mut f_hi: f64,
    scale: f64,
) -> Result<f64> {
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::RootNotConverged {
            iterations: 0,
            lo,
            hi,
            residual: f_lo.abs().min(f_hi.abs()),
        });
    }
    let width_tol = 1e-15 * scale;
    let mut best = lo;
    let mut best_res = f_lo.abs();
    for iter in 0..MAX_ROOT_ITERS {
        // secant proposal, clipped safely inside the bracket
        let mut x = hi - f_hi * (hi - lo) / (f_hi - f_lo);
        let mid = 0.5 * (lo + hi);
        if !x.is_finite() || x <= lo || x >= hi || (iter % 2 == 1) {
            x = mid;
        }
        let fx = f(x);
        if fx.abs() < best_res {
            best = x;
            best_res = fx.abs();
        }
        if fx.abs() < ROOT_RESIDUAL_TOL || (hi - lo) < width_tol {
            return Ok(x);
        }
        if fx.signum() == f_lo.signum() {
            lo = x;
            f_lo = fx;
        } else {
            hi = x;
            f_hi = fx;
        }
        if (hi - lo) < width_tol {
            return Ok(0.5 * (lo + hi));
        }
    }
    if best_res < ROOT_RESIDUAL_TOL {
        return Ok(best);
    }
    Err(Error::RootNotConverged {
        iterations: MAX_ROOT_ITERS,
        lo,
        hi,
        residual: best_res,
    })
}

/// Like [`bracketed_root`] but without the residual requirement; used for the
/// derivative root, where only a valid bracket point is needed.
fn bracketed_root_loose(
    f: &dyn Fn(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
    f_lo: f64,
    f_hi: f64,
    scale: f64,
) -> Result<f64> {
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::RootNotConverged {
            iterations: 0,
            lo,
            hi,
            residual: f_lo.abs().min(f_hi.abs()),
        });
    }
    let sign_lo = f_lo.signum();
    let width_tol = 1e-13 * scale;
    for _ in 0..MAX_ROOT_ITERS {
        let mid = 0.5 * (lo + hi);
        if (hi - lo) < width_tol {
            return Ok(mid);
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == sign_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Coarse-grain single-photon amplitudes over a partition: block `k` gets
/// coefficient `√(Σ_{i ∈ ℐ_k} |αᵢ|²)`; zero-weight blocks are dropped.
pub fn coarse_grain(amplitudes: &[Complex64], partition: &Partition) -> Result<WState> {
    if partition.modes() != amplitudes.len() {
        return Err(Error::InvalidPartition {
            reason: format!(
                "partition covers {} modes but state has {}",
                partition.modes(),
                amplitudes.len()
            ),
        });
    }
    let coeffs: Vec<f64> = partition
        .blocks()
        .iter()
        .map(|block| {
            block
                .iter()
                .map(|&i| amplitudes[i].norm_sqr())
                .sum::<f64>()
                .sqrt()
        })
        .filter(|&c| c >= VACUUM_TOL)
        .collect();
    if coeffs.is_empty() {
        return Err(Error::ZeroNorm);
    }
    let norm2: f64 = coeffs.iter().map(|c| c * c).sum();
    if (norm2 - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized {
            norm: norm2.sqrt(),
            tol: NORM_TOL,
        });
    }
    let mut coeffs = coeffs;
    coeffs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(WState { coeffs })
}

/// Geometric entanglement of a single-photon state under an arbitrary
/// partition: coarse-grain, then solve the full-partition problem.
pub fn e_g(amplitudes: &[Complex64], partition: &Partition) -> Result<EntanglementReport> {
    g_max_full(&coarse_grain(amplitudes, partition)?)
}

/// Largest attainable `E_g` over all W states with `M` modes:
/// `1 - ((M-1)/M)^{M-1}`, reached by the symmetric W state.
pub fn e_g_max(modes: usize) -> f64 {
    if modes <= 1 {
        return 0.0;
    }
    let m = modes as f64;
    1.0 - ((m - 1.0) * (-1.0 / m).ln_1p()).exp()
}

/// Geometric entanglement of the symmetric Dicke state with `N` excitations
/// in `M` modes: `1 - C(M,N) (N/M)^N ((M-N)/M)^{M-N}`. Evaluated in log
/// space, stable up to `M ~ 10⁶`.
pub fn e_g_max_dicke(modes: usize, excitations: u32) -> Result<f64> {
    let n = excitations as usize;
    if n > modes {
        return Err(Error::InvalidArgument(format!(
            "excitations {n} exceed modes {modes}"
        )));
    }
    if n == 0 || n == modes {
        return Ok(0.0);
    }
    let (mf, nf) = (modes as f64, n as f64);
    let log_binom: f64 = (1..=n)
        .map(|j| (((modes - n + j) as f64) / j as f64).ln())
        .sum();
    let log_g = log_binom + nf * (nf / mf).ln() + (mf - nf) * (-nf / mf).ln_1p();
    Ok(1.0 - log_g.exp())
}
