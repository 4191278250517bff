//! Closed-form coin-block dynamics of the Hadamard walk on the line.
//!
//! Everything here reduces to the alternating central-binomial series
//!
//! ```text
//! i(n) = Σ_{k=0}^{⌊(n-1)/2⌋} (-1)^k C(2k, k) / 4^k,      I(n) = (i(n) - 1) / 2.
//! ```
//!
//! For the localized start `cos(θ/2)|-, 0⟩ + e^{iφ} sin(θ/2)|+, 0⟩` the weight
//! of the `+` coin block after `n ≥ 1` steps is
//!
//! ```text
//! φ₁(n) = 1/2 + cos θ · I(n) + sin θ cos φ · I(n-1),
//! ```
//!
//! and the coin/position entanglement entropy has eigenvalues built from
//! consecutive `i` values. The series terms shrink like `1/√k`, so `i(n)`
//! converges slowly to `1/√2`; all of it is computed by the exact term
//! recurrence, never by floating-point binomials.

use crate::{Error, Result};

/// `I(n → ∞) = (1/√2 - 1)/2 ≈ -0.1464`.
pub const I_LIMIT: f64 = (std::f64::consts::FRAC_1_SQRT_2 - 1.0) / 2.0;

/// Cached prefix of the series `i(0), …, i(n_max)`.
#[derive(Debug, Clone)]
pub struct CoinSeries {
    i: Vec<f64>,
}

impl CoinSeries {
    /// Cache `i(n)` for `n = 0..=n_max`.
    pub fn new(n_max: usize) -> Self {
        let mut i = Vec::with_capacity(n_max + 1);
        // i(n) gains term t_k = (-1)^k C(2k,k)/4^k when n reaches 2k+1;
        // t_k = -t_{k-1} (2k-1)/(2k)
        let mut sum = 0.0;
        let mut term = 1.0;
        let mut k = 0usize;
        for n in 0..=n_max {
            if n % 2 == 1 {
                sum += term;
                k += 1;
                term *= -(2.0 * k as f64 - 1.0) / (2.0 * k as f64);
            }
            i.push(sum);
        }
        Self { i }
    }

    pub fn n_max(&self) -> usize {
        self.i.len() - 1
    }

    fn i_at(&self, n: usize) -> Result<f64> {
        self.i.get(n).copied().ok_or_else(|| {
            Error::InvalidArgument(format!(
                "step {n} beyond cached series length {}",
                self.i.len()
            ))
        })
    }

    /// `I(n) = (i(n) - 1)/2`.
    pub fn interference(&self, n: usize) -> Result<f64> {
        Ok((self.i_at(n)? - 1.0) / 2.0)
    }

    /// Weight of the `+` coin block after `n ≥ 1` steps.
    pub fn phi1(&self, n: usize, theta: f64, phi: f64) -> Result<f64> {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "coin-block weight formula holds for n ≥ 1".into(),
            ));
        }
        Ok(0.5
            + theta.cos() * self.interference(n)?
            + theta.sin() * phi.cos() * self.interference(n - 1)?)
    }

    /// Geometric entanglement of the coin bipartition after `n ≥ 1` steps:
    /// `min(φ₁, 1 - φ₁)`.
    pub fn e_g(&self, n: usize, theta: f64, phi: f64) -> Result<f64> {
        let phi1 = self.phi1(n, theta, phi)?;
        Ok(phi1.min(1.0 - phi1))
    }

    /// Von Neumann entropy (base 2) between coin and position after `n`
    /// steps of the `|-, 0⟩` walk. Needs `i(n+1)` in the cache.
    pub fn entropy(&self, n: usize) -> Result<f64> {
        let a = self.i_at(n + 1)?;
        let b = self.i_at(n)?;
        // radicand is exactly 0 at n where the spectrum degenerates; clamp
        // roundoff
        let radicand = (2.0 - a * (2.0 - a) - b * (2.0 - b)).max(0.0);
        let root = radicand.sqrt();
        let r1 = (1.0 + root) / 2.0;
        let r2 = (1.0 - root) / 2.0;
        let h = |r: f64| if r > 0.0 { -r * r.log2() } else { 0.0 };
        Ok(h(r1) + h(r2))
    }
}

/// `I(n)` without a persistent cache.
pub fn interference(n: usize) -> f64 {
    CoinSeries::new(n).interference(n).expect("n is cached")
}

/// `φ₁(n)` without a persistent cache; errors for `n = 0`.
pub fn phi1(n: usize, theta: f64, phi: f64) -> Result<f64> {
    CoinSeries::new(n).phi1(n, theta, phi)
}

/// `n → ∞` limit of `φ₁`:
/// `1/2 - ((√2-1)/(2√2)) (cos θ + sin θ cos φ)`.
pub fn asymptotic_phi1(theta: f64, phi: f64) -> f64 {
    0.5 + I_LIMIT * contour_residual(theta, phi)
}

/// `cos θ + sin θ cos φ`; zero exactly on the initial-condition great circle
/// where the even-step coin entanglement is maximal.
pub fn contour_residual(theta: f64, phi: f64) -> f64 {
    theta.cos() + theta.sin() * phi.cos()
}

/// Entropy limit `n → ∞`, with reduced-coin eigenvalue `(1 + √(3-2√2))/2`.
pub fn entropy_limit() -> f64 {
    let root = (3.0 - 2.0 * std::f64::consts::SQRT_2).sqrt();
    let r1 = (1.0 + root) / 2.0;
    let r2 = (1.0 - root) / 2.0;
    -r1 * r1.log2() - r2 * r2.log2()
}
