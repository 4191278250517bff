//! Coined quantum walk for a single walker on a line or circle.
//!
//! The state lives on `M = 2P` modes with index convention `i = P·c + x`,
//! coin `c ∈ {0 ≡ -, 1 ≡ +}` and position `x ∈ {0, …, P-1}`. A step applies
//! the coin at every position and then shifts `x → x-1` for `-` and
//! `x → x+1` for `+`, with periodic wraparound. Each step is O(P) with a
//! single scratch buffer; no `2P × 2P` matrix is ever built.
//!
//! A walk "on the line" is realized as a circle with `P ≥ 2n+2` positions,
//! large enough that the walker never wraps within `n` steps.

use num_complex::Complex64;

use crate::fock::StateVector;
use crate::wstate::{self, EntanglementReport, Partition};
use crate::{Error, Result};

const COIN_TOL: f64 = 1e-12;

/// Topology of the position space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Topology {
    Circle,
    Line,
}

/// 2×2 coin unitary, row-major over the `(-, +)` coin basis.
pub type Coin = [[Complex64; 2]; 2];

/// The Hadamard coin.
pub fn hadamard_coin() -> Coin {
    let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    [[s, s], [s, -s]]
}

/// Walk configuration: number of positions, topology, and coin.
#[derive(Debug, Clone)]
pub struct WalkConfig {
    positions: usize,
    topology: Topology,
    coin: Coin,
}

impl WalkConfig {
    /// Walk on a circle with `P` positions and the Hadamard coin.
    pub fn circle(positions: usize) -> Result<Self> {
        if positions == 0 {
            return Err(Error::InvalidArgument("need at least one position".into()));
        }
        Ok(Self {
            positions,
            topology: Topology::Circle,
            coin: hadamard_coin(),
        })
    }

    /// Walk on the line for up to `max_steps` steps: internally a circle
    /// with `P = 2·max_steps + 2`, so the boundary is never reached.
    pub fn line(max_steps: usize) -> Self {
        Self {
            positions: 2 * max_steps + 2,
            topology: Topology::Line,
            coin: hadamard_coin(),
        }
    }

    /// Replace the coin; must be unitary to 1e-12.
    pub fn with_coin(mut self, coin: Coin) -> Result<Self> {
        let defect: f64 = (0..2)
            .flat_map(|i| (0..2).map(move |j| (i, j)))
            .map(|(i, j)| {
                let dot: Complex64 =
                    (0..2).map(|k| coin[k][i].conj() * coin[k][j]).sum();
                let target = if i == j { Complex64::ONE } else { Complex64::ZERO };
                (dot - target).norm_sqr()
            })
            .sum::<f64>()
            .sqrt();
        if defect > COIN_TOL {
            return Err(Error::NotUnitary {
                defect,
                tol: COIN_TOL,
            });
        }
        self.coin = coin;
        Ok(self)
    }

    pub fn positions(&self) -> usize {
        self.positions
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    pub fn modes(&self) -> usize {
        2 * self.positions
    }
}

/// Localized initial condition at position 0:
/// `cos(θ/2) |-, 0⟩ + e^{iφ} sin(θ/2) |+, 0⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoinInitialState {
    pub theta: f64,
    pub phi: f64,
}

impl CoinInitialState {
    pub fn new(theta: f64, phi: f64) -> Self {
        Self { theta, phi }
    }

    /// The `|-, 0⟩` start (θ = 0).
    pub fn minus() -> Self {
        Self::new(0.0, 0.0)
    }

    fn amplitudes(&self, positions: usize) -> Vec<Complex64> {
        let mut amps = vec![Complex64::ZERO; 2 * positions];
        amps[0] = Complex64::new((self.theta / 2.0).cos(), 0.0);
        amps[positions] =
            Complex64::from_polar((self.theta / 2.0).sin(), self.phi);
        amps
    }
}

/// Step engine. Single-threaded; run distinct instances concurrently for
/// parameter sweeps.
#[derive(Debug, Clone)]
pub struct Walk {
    config: WalkConfig,
    state: Vec<Complex64>,
    scratch: Vec<Complex64>,
    steps_taken: usize,
}

impl Walk {
    pub fn new(config: WalkConfig, initial: CoinInitialState) -> Self {
        let state = initial.amplitudes(config.positions);
        let scratch = vec![Complex64::ZERO; state.len()];
        Self {
            config,
            state,
            scratch,
            steps_taken: 0,
        }
    }

    /// Start from an arbitrary single-photon state over `2P` modes.
    pub fn from_state(config: WalkConfig, state: &StateVector) -> Result<Self> {
        if state.photons() != 1 || state.modes() != config.modes() {
            return Err(Error::ShapeMismatch {
                expected_modes: config.modes(),
                expected_photons: 1,
                modes: state.modes(),
                photons: state.photons() as usize,
            });
        }
        let amps = state.amplitudes().to_vec();
        let scratch = vec![Complex64::ZERO; amps.len()];
        Ok(Self {
            config,
            state: amps,
            scratch,
            steps_taken: 0,
        })
    }

    pub fn config(&self) -> &WalkConfig {
        &self.config
    }

    pub fn steps_taken(&self) -> usize {
        self.steps_taken
    }

    /// Raw amplitudes, index `i = P·c + x`.
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.state
    }

    pub fn state_vector(&self) -> StateVector {
        StateVector::renormalized(self.state.len(), 1, self.state.clone())
            .expect("walk state has unit norm up to roundoff")
    }

    /// One application of `T̂ = Ŝ(Ĉ ⊗ 1)`: coin at every position, then
    /// conditional cyclic shift.
    pub fn step(&mut self) {
        let p = self.config.positions;
        let c = &self.config.coin;
        self.scratch.iter_mut().for_each(|a| *a = Complex64::ZERO);
        for x in 0..p {
            let minus = self.state[x];
            let plus = self.state[p + x];
            let out_minus = c[0][0] * minus + c[0][1] * plus;
            let out_plus = c[1][0] * minus + c[1][1] * plus;
            self.scratch[(x + p - 1) % p] = out_minus;
            self.scratch[p + (x + 1) % p] = out_plus;
        }
        std::mem::swap(&mut self.state, &mut self.scratch);
        self.steps_taken += 1;
    }

    /// Probability weights of the coin blocks `(φ₀, φ₁)`;
    /// `φ₁ = Σ_x |ψ_{(+,x)}|²`.
    pub fn coin_partition_weights(&self) -> (f64, f64) {
        coin_partition_weights_of(&self.state)
    }

    /// `Σ |ψ|²` per position, summed over the coin.
    pub fn position_distribution(&self) -> Vec<f64> {
        let p = self.config.positions;
        (0..p)
            .map(|x| self.state[x].norm_sqr() + self.state[p + x].norm_sqr())
            .collect()
    }

    pub fn norm(&self) -> f64 {
        self.state.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// One step applied to a standalone state vector.
pub fn step(state: &StateVector, config: &WalkConfig) -> Result<StateVector> {
    let mut walk = Walk::from_state(config.clone(), state)?;
    walk.step();
    Ok(walk.state_vector())
}

/// Evolve from a localized initial condition, invoking `visit(n, walk)` for
/// every step `n = 0..=steps` (step 0 is the initial state).
pub fn evolve_with<F>(
    config: WalkConfig,
    initial: CoinInitialState,
    steps: usize,
    mut visit: F,
) -> Walk
where
    F: FnMut(usize, &Walk),
{
    let mut walk = Walk::new(config, initial);
    visit(0, &walk);
    for n in 1..=steps {
        walk.step();
        visit(n, &walk);
    }
    walk
}

/// Evolve and collect the state after each step `0..=steps`.
pub fn evolve(
    config: WalkConfig,
    initial: CoinInitialState,
    steps: usize,
) -> Vec<StateVector> {
    let mut out = Vec::with_capacity(steps + 1);
    evolve_with(config, initial, steps, |_, w| out.push(w.state_vector()));
    out
}

/// Coin-block weights of a raw single-photon amplitude vector over 2P modes.
pub fn coin_partition_weights_of(amps: &[Complex64]) -> (f64, f64) {
    let p = amps.len() / 2;
    let phi1: f64 = amps[p..].iter().map(|a| a.norm_sqr()).sum();
    let phi0: f64 = amps[..p].iter().map(|a| a.norm_sqr()).sum();
    (phi0, phi1)
}

/// The partitions studied for walk states.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WalkPartition {
    /// Every mode its own block.
    Full,
    /// `{(-, x)}ₓ : {(+, x)}ₓ`.
    Coin,
    /// One block per position, `{(-, x), (+, x)}`.
    Position,
}

impl WalkPartition {
    /// The mode-index partition for `P` positions.
    pub fn to_partition(self, positions: usize) -> Partition {
        let p = positions;
        let blocks = match self {
            WalkPartition::Full => (0..2 * p).map(|i| vec![i]).collect(),
            WalkPartition::Coin => vec![(0..p).collect(), (p..2 * p).collect()],
            WalkPartition::Position => (0..p).map(|x| vec![x, p + x]).collect(),
        };
        Partition::new(blocks, 2 * p).expect("walk partitions are valid by construction")
    }
}

/// Geometric entanglement of the current walk state under a named partition.
pub fn walk_entanglement(walk: &Walk, partition: WalkPartition) -> Result<EntanglementReport> {
    wstate::e_g(
        walk.amplitudes(),
        &partition.to_partition(walk.config().positions()),
    )
}

/// `E_g` at every step `0..=steps` for a localized initial condition.
pub fn eg_series(
    config: WalkConfig,
    initial: CoinInitialState,
    steps: usize,
    partition: WalkPartition,
) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(steps + 1);
    let mut err = None;
    evolve_with(config, initial, steps, |_, w| {
        if err.is_none() {
            match walk_entanglement(w, partition) {
                Ok(rep) => out.push(rep.e_g),
                Err(e) => err = Some(e),
            }
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// `E_g` at step `n` over a `(θ, φ)` grid of localized initial conditions.
/// Returns `(θ, φ, E_g)` triples in row-major `θ`-then-`φ` order.
pub fn sweep_theta_phi(
    config: &WalkConfig,
    step_count: usize,
    partition: WalkPartition,
    thetas: &[f64],
    phis: &[f64],
) -> Result<Vec<(f64, f64, f64)>> {
    let mut out = Vec::with_capacity(thetas.len() * phis.len());
    for &theta in thetas {
        for &phi in phis {
            let mut walk = Walk::new(config.clone(), CoinInitialState::new(theta, phi));
            for _ in 0..step_count {
                walk.step();
            }
            out.push((theta, phi, walk_entanglement(&walk, partition)?.e_g));
        }
    }
    Ok(out)
}

/// Reduced 2×2 coin density matrix of a single-photon walk state:
/// the position degrees of freedom are traced out.
pub fn coin_reduced_density(amps: &[Complex64]) -> [[Complex64; 2]; 2] {
    let p = amps.len() / 2;
    let r00: f64 = amps[..p].iter().map(|a| a.norm_sqr()).sum();
    let r11: f64 = amps[p..].iter().map(|a| a.norm_sqr()).sum();
    let r01: Complex64 = (0..p).map(|x| amps[x] * amps[p + x].conj()).sum();
    [
        [Complex64::new(r00, 0.0), r01],
        [r01.conj(), Complex64::new(r11, 0.0)],
    ]
}

/// Von Neumann entropy (base 2) between coin and position, from the reduced
/// coin density matrix eigenvalues.
pub fn coin_position_entropy(amps: &[Complex64]) -> f64 {
    let rho = coin_reduced_density(amps);
    // 2×2 Hermitian eigenvalues in closed form
    let tr = rho[0][0].re + rho[1][1].re;
    let det = rho[0][0].re * rho[1][1].re - rho[0][1].norm_sqr();
    let disc = (tr * tr / 4.0 - det).max(0.0).sqrt();
    let r1 = tr / 2.0 + disc;
    let r2 = tr / 2.0 - disc;
    let h = |r: f64| if r > 0.0 { -r * r.log2() } else { 0.0 };
    h(r1) + h(r2)
}
