//! Collective noise as an ensemble of random collective unitaries.
//!
//! One event applies `exp(-i sum_a phi_a S_a)` to the whole register. The
//! collective operators are sums of commuting single-qubit terms, so the
//! exponential factorizes into the same `exp(-i phi . sigma)` on every
//! qubit; [`collective_unitary_dense`] is the unfactorized form.
//!
//! Events strike between gates at positions chosen by [`Granularity`].
//! Position `p` means "before gate `p`", so `0` is the input and `len` the
//! output. Only block boundaries keep an encoded state inside the code space:
//! inside a conjugated logical gate the register is briefly unencoded, and
//! per-gate noise there degrades fidelity. Reports carry the leakage out of
//! the code space so that degradation is visible rather than hidden.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution as _, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;
use crate::dfs::{collective_operator, CollectiveModel, MAX_BRUTE_FORCE_QUBITS};
use crate::error::{Error, Result};
use crate::statevector::{apply_gate_raw, apply_mat2, fidelity, Mat2, StateVector, C64};
use crate::unitary::{CMatrix, SubspaceBasis, UnitaryMatrix};

/// Angles of one collective noise event, one per model axis (`z` for WCD;
/// `x, y, z` for SCD).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseEvent {
    pub phis: Vec<f64>,
}

impl NoiseEvent {
    pub fn new(phis: Vec<f64>) -> Self {
        NoiseEvent { phis }
    }

    pub fn zero(model: CollectiveModel) -> Self {
        NoiseEvent::new(vec![0.0; model.axes().len()])
    }

    fn check(&self, model: CollectiveModel) -> Result<()> {
        if self.phis.len() != model.axes().len() {
            return Err(Error::DimensionMismatch {
                expected: model.axes().len(),
                found: self.phis.len(),
            });
        }
        if let Some(p) = self.phis.iter().find(|p| !p.is_finite()) {
            return Err(Error::InvalidPolicy(format!(
                "noise angle {p} is not finite"
            )));
        }
        Ok(())
    }

    /// `(phi_x, phi_y, phi_z)` with absent axes set to zero.
    fn xyz(&self, model: CollectiveModel) -> [f64; 3] {
        match model {
            CollectiveModel::Wcd => [0.0, 0.0, self.phis[0]],
            CollectiveModel::Scd => [self.phis[0], self.phis[1], self.phis[2]],
        }
    }
}

/// `exp(-i phi . sigma) = cos r I - i sin r (n . sigma)` with `r = |phi|`.
pub fn single_qubit_factor([x, y, z]: [f64; 3]) -> Mat2 {
    let r = (x * x + y * y + z * z).sqrt();
    let c = r.cos();
    // sin(r) / r, continuous at 0
    let s = if r < 1e-300 { 1.0 } else { r.sin() / r };
    [
        [C64::new(c, -s * z), C64::new(-s * y, -s * x)],
        [C64::new(s * y, -s * x), C64::new(c, s * z)],
    ]
}

/// `exp(-i sum_a phi_a S_a)` by dense matrix exponential.
pub fn collective_unitary_dense(
    n: usize,
    event: &NoiseEvent,
    model: CollectiveModel,
) -> Result<UnitaryMatrix> {
    event.check(model)?;
    if n > MAX_BRUTE_FORCE_QUBITS {
        return Err(Error::OutOfRange {
            what: "n_qubits",
            value: n,
            min: 1,
            max: MAX_BRUTE_FORCE_QUBITS,
        });
    }
    let dim = 1usize << n;
    let mut h: CMatrix = DMatrix::zeros(dim, dim);
    for (axis, phi) in model.axes().iter().zip(&event.phis) {
        h += collective_operator(n, *axis)? * C64::new(*phi, 0.0);
    }
    UnitaryMatrix::new((h * C64::new(0.0, -1.0)).exp())
}

fn apply_event_raw(amps: &mut [C64], n: usize, factor: &Mat2) {
    for bit in 0..n {
        apply_mat2(amps, bit, factor, None);
    }
}

/// Applies one collective noise event to `state`.
pub fn apply_noise(
    state: &StateVector,
    event: &NoiseEvent,
    model: CollectiveModel,
) -> Result<StateVector> {
    event.check(model)?;
    let factor = single_qubit_factor(event.xyz(model));
    let mut amps = state.amplitudes().to_vec();
    apply_event_raw(&mut amps, state.n_qubits(), &factor);
    StateVector::normalized(state.n_qubits(), amps)
}

/// Where noise events strike during a circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Granularity {
    PerElementaryGate,
    PerLogicalBlock,
    EndpointsOnly,
}

impl Granularity {
    /// Short name used on the command line.
    pub fn short_name(self) -> &'static str {
        match self {
            Granularity::PerElementaryGate => "elementary",
            Granularity::PerLogicalBlock => "block",
            Granularity::EndpointsOnly => "endpoints",
        }
    }
}

impl fmt::Display for Granularity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for Granularity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "elementary" | "per_elementary_gate" => Ok(Granularity::PerElementaryGate),
            "block" | "per_logical_block" => Ok(Granularity::PerLogicalBlock),
            "endpoints" | "endpoints_only" => Ok(Granularity::EndpointsOnly),
            _ => Err(Error::InvalidPolicy(format!("unknown granularity {s:?}"))),
        }
    }
}

/// Per-axis angle distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Distribution {
    /// Uniform on `[0, 2 pi)`.
    Uniform,
    /// Zero-mean normal; `sigma = 0` gives noiseless events.
    Gaussian { sigma: f64 },
}

impl Distribution {
    fn sample<R: Rng>(&self, rng: &mut R) -> f64 {
        match *self {
            Distribution::Uniform => rng.random_range(0.0..TAU),
            Distribution::Gaussian { sigma: 0.0 } => 0.0,
            Distribution::Gaussian { sigma } => Normal::new(0.0, sigma)
                .expect("sigma validated by NoisePolicy")
                .sample(rng),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoisePolicy {
    pub granularity: Granularity,
    pub distribution: Distribution,
    pub trials: usize,
    pub seed: u64,
}

impl NoisePolicy {
    pub fn new(granularity: Granularity, trials: usize, seed: u64) -> Self {
        NoisePolicy {
            granularity,
            distribution: Distribution::Uniform,
            trials,
            seed,
        }
    }

    pub fn with_distribution(mut self, distribution: Distribution) -> Self {
        self.distribution = distribution;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidPolicy("trials must be at least 1".into()));
        }
        if let Distribution::Gaussian { sigma } = self.distribution {
            if !(sigma.is_finite() && sigma >= 0.0) {
                return Err(Error::InvalidPolicy(format!(
                    "gaussian sigma must be finite and nonnegative, got {sigma}"
                )));
            }
        }
        Ok(())
    }

    /// Independent generator for trial `trial`.
    pub fn trial_rng(&self, trial: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(trial as u64);
        rng
    }
}

/// Boundaries must run strictly increasing from `0` to `len`.
pub fn validate_boundaries(boundaries: &[usize], len: usize) -> Result<()> {
    match (boundaries.first(), boundaries.last()) {
        (Some(0), Some(&last)) if last == len => {}
        _ => {
            return Err(Error::InvalidBoundaries(format!(
                "expected a list from 0 to {len}, got {boundaries:?}"
            )))
        }
    }
    if boundaries.len() > 1 && boundaries.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidBoundaries(format!(
            "positions must be strictly increasing: {boundaries:?}"
        )));
    }
    Ok(())
}

/// Gate positions at which events strike, ascending and deduplicated.
pub fn noise_positions(
    granularity: Granularity,
    len: usize,
    boundaries: &[usize],
) -> Result<Vec<usize>> {
    let mut positions = match granularity {
        Granularity::PerElementaryGate => (0..=len).collect(),
        Granularity::PerLogicalBlock => {
            validate_boundaries(boundaries, len)?;
            boundaries.to_vec()
        }
        Granularity::EndpointsOnly => vec![0, len],
    };
    positions.dedup();
    Ok(positions)
}

/// A circuit, its input and expected output, and where its blocks end.
#[derive(Debug, Clone, Copy)]
pub struct NoiseExperiment<'a> {
    pub circuit: &'a Circuit,
    pub input: &'a StateVector,
    pub ideal_output: &'a StateVector,
    pub model: CollectiveModel,
    pub boundaries: &'a [usize],
    /// Logical subspace used for leakage; `None` reports zero leakage.
    pub code_space: Option<&'a SubspaceBasis>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialSample {
    pub trial: usize,
    pub fidelity: f64,
    pub leakage: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub mean_fidelity: f64,
    pub min_fidelity: f64,
    pub std_fidelity: f64,
    pub mean_leakage: f64,
    pub trials: usize,
    pub noise_events_per_trial: usize,
    pub model: CollectiveModel,
    pub policy: NoisePolicy,
    #[serde(skip)]
    pub samples: Vec<TrialSample>,
}

impl NoiseExperiment<'_> {
    fn check(&self) -> Result<()> {
        let n = self.input.n_qubits();
        let mismatch = [
            Some(self.ideal_output.n_qubits()).filter(|&m| m != n),
            Some(self.circuit.n_qubits()).filter(|&m| m > n),
            self.code_space.map(|b| b.n_qubits()).filter(|&m| m != n),
        ];
        match mismatch.into_iter().flatten().next() {
            Some(found) => Err(Error::DimensionMismatch { expected: n, found }),
            None => Ok(()),
        }
    }

    fn trial(&self, policy: &NoisePolicy, positions: &[usize], trial: usize) -> TrialSample {
        let mut rng = policy.trial_rng(trial);
        let n = self.input.n_qubits();
        let axes = self.model.axes().len();
        let mut amps = self.input.amplitudes().to_vec();
        let mut strike = |amps: &mut [C64]| {
            let phis: Vec<f64> = (0..axes)
                .map(|_| policy.distribution.sample(&mut rng))
                .collect();
            let event = NoiseEvent::new(phis);
            apply_event_raw(amps, n, &single_qubit_factor(event.xyz(self.model)));
        };
        let mut next = positions.iter().peekable();
        for (p, gate) in self.circuit.gates().iter().enumerate() {
            if next.next_if_eq(&&p).is_some() {
                strike(&mut amps);
            }
            apply_gate_raw(&mut amps, gate);
        }
        if next.next_if_eq(&&self.circuit.len()).is_some() {
            strike(&mut amps);
        }
        let out = StateVector::normalized(n, amps).expect("unitary evolution preserves the norm");
        TrialSample {
            trial,
            fidelity: fidelity(&out, self.ideal_output).expect("shapes checked"),
            leakage: self
                .code_space
                .map_or(0.0, |b| b.residual_norm(out.amplitudes())),
        }
    }

    /// Runs `policy.trials` independent noisy executions in parallel.
    pub fn run(&self, policy: &NoisePolicy) -> Result<RunReport> {
        policy.validate()?;
        self.check()?;
        let positions = noise_positions(policy.granularity, self.circuit.len(), self.boundaries)?;
        let samples: Vec<TrialSample> = (0..policy.trials)
            .into_par_iter()
            .map(|t| self.trial(policy, &positions, t))
            .collect();
        Ok(summarize(samples, positions.len(), self.model, *policy))
    }
}

fn summarize(
    samples: Vec<TrialSample>,
    events: usize,
    model: CollectiveModel,
    policy: NoisePolicy,
) -> RunReport {
    let k = samples.len() as f64;
    let mean = samples.iter().map(|s| s.fidelity).sum::<f64>() / k;
    let var = samples
        .iter()
        .map(|s| (s.fidelity - mean).powi(2))
        .sum::<f64>()
        / k;
    let min = samples
        .iter()
        .map(|s| s.fidelity)
        .fold(f64::INFINITY, f64::min);
    RunReport {
        // round-off can put the mean a hair outside [min, 1]
        mean_fidelity: mean.clamp(min, 1.0),
        min_fidelity: min,
        std_fidelity: var.sqrt(),
        mean_leakage: samples.iter().map(|s| s.leakage).sum::<f64>() / k,
        trials: samples.len(),
        noise_events_per_trial: events,
        model,
        policy,
        samples,
    }
}

/// [`NoiseExperiment::run`] without a code space.
pub fn noisy_run(
    circuit: &Circuit,
    input: &StateVector,
    ideal_output: &StateVector,
    policy: &NoisePolicy,
    model: CollectiveModel,
    boundaries: &[usize],
) -> Result<RunReport> {
    NoiseExperiment {
        circuit,
        input,
        ideal_output,
        model,
        boundaries,
        code_space: None,
    }
    .run(policy)
}
