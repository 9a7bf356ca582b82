//! Round-trip compensation with a Faraday mirror.
//!
//! A reciprocal disturbance `U` followed by the Faraday mirror and the
//! retraced disturbance gives `σ₁U†σ₁ · iσ₁ · U = iσ₁` for every `U`, so the
//! returning photon only sees the mirror. The ergodic experiment drives the
//! disturbance with a fresh random draw per time step, averages the
//! two-qubit output over the steps, and compares its tomographic
//! reconstruction with the undisturbed one.
//!
//! Counting is time-integrated: every step is one counting window of
//! `shots_per_setting` pairs per setting, so each reconstruction rests on
//! `steps × shots_per_setting` pairs per setting. The idle reference is
//! counted over the same number of windows.
//!
//! Seed splitting: step `k` of a [`DisturbanceProcess`] draws its
//! disturbance from a ChaCha8 generator seeded with the process seed and
//! switched to stream `k`. Steps therefore do not depend on each other or
//! on evaluation order, and the averaged state is summed in step order.

use std::f64::consts::{FRAC_PI_4, TAU};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bench::{acquire, singlet_state, CountRecord, MeasurementSetting, NoiseModel};
use crate::elements::{linear_retarder, ElementChain, OpticalElement, Reciprocity, Turn};
use crate::error::{Error, Result};
use crate::spin::{uhlmann_fidelity, AxisAngle, DensityMatrix, PureQubit, Unitary};
use crate::tomography::{tomograph_pair, TomoResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DisturbanceMode {
    /// Two Pockels cells with axes 45° apart, random retardances.
    PockelsPair,
    /// One element with a Haar-uniform rotation.
    Haar,
}

impl fmt::Display for DisturbanceMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DisturbanceMode::PockelsPair => "pockels_pair",
            DisturbanceMode::Haar => "haar",
        })
    }
}

impl FromStr for DisturbanceMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pockels_pair" | "pockels-pair" | "pockels" => Ok(DisturbanceMode::PockelsPair),
            "haar" => Ok(DisturbanceMode::Haar),
            other => Err(Error::Parse(format!("unknown disturbance mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DisturbanceProcess {
    pub mode: DisturbanceMode,
    pub seed: u64,
    pub steps: usize,
}

impl DisturbanceProcess {
    pub fn new(mode: DisturbanceMode, seed: u64, steps: usize) -> Result<Self> {
        if steps == 0 {
            return Err(Error::InvalidArgument("steps must be at least 1".into()));
        }
        Ok(Self { mode, seed, steps })
    }

    pub fn step_rng(&self, step: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(step as u64);
        rng
    }

    pub fn disturbance(&self, step: usize) -> ElementChain {
        random_disturbance(self.mode, &mut self.step_rng(step))
    }
}

/// Cells at lab angles 0 and π/4 with retardances `phi1`, `phi2`.
///
/// The forward unitary is `exp(i(φ₂/2)σ₁) · exp(i(φ₁/2)σ₃)`.
pub fn pockels_pair(phi1: f64, phi2: f64) -> ElementChain {
    let mut first = linear_retarder(0.0, phi1);
    first.label = "PC1".into();
    let mut second = linear_retarder(FRAC_PI_4, phi2);
    second.label = "PC2".into();
    ElementChain::new(vec![first, second])
}

pub fn random_disturbance<R: Rng + ?Sized>(mode: DisturbanceMode, rng: &mut R) -> ElementChain {
    match mode {
        DisturbanceMode::PockelsPair => {
            let phi1 = rng.random_range(0.0..TAU);
            let phi2 = rng.random_range(0.0..TAU);
            pockels_pair(phi1, phi2)
        }
        DisturbanceMode::Haar => ElementChain::new(vec![OpticalElement::reciprocal(
            AxisAngle::random(rng),
            "U",
        )]),
    }
}

/// Round trip through a reciprocal chain terminated by the Faraday mirror.
pub fn compensated_round_trip(chain: &ElementChain) -> Result<Unitary> {
    if let Some(e) = chain
        .elements
        .iter()
        .find(|e| e.kind != Reciprocity::Reciprocal)
    {
        return Err(Error::InvalidArgument(format!(
            "element `{}` is not reciprocal",
            e.label
        )));
    }
    chain.round_trip(Turn::Frm)
}

#[derive(Debug, Clone)]
pub struct StepRecord {
    pub step: usize,
    pub chain: ElementChain,
    /// Exact fidelity of this step's output to the undisturbed output.
    pub fidelity: f64,
}

#[derive(Debug, Clone)]
pub struct ErgodicOutcome {
    /// Fidelity between the reconstructed undisturbed and disturbed outputs.
    pub fidelity: f64,
    pub steps: Vec<StepRecord>,
    pub active: TomoResult<4>,
    pub inactive: TomoResult<4>,
    pub counts_active: Vec<CountRecord>,
    pub counts_inactive: Vec<CountRecord>,
}

/// Singlet pairs with qubit 2 sent through the cells and the Faraday mirror,
/// cells driven (fresh disturbance per step) versus idle.
///
/// Both configurations are counted over `process.steps` windows of
/// `noise.shots_per_setting` pairs per setting.
pub fn ergodic_experiment<R: Rng + ?Sized>(
    process: &DisturbanceProcess,
    noise: &NoiseModel,
    rng: &mut R,
) -> Result<ErgodicOutcome> {
    if process.steps == 0 {
        return Err(Error::InvalidArgument("steps must be at least 1".into()));
    }
    let source = singlet_state();
    let idle = pockels_pair(0.0, 0.0);
    let reference = source.apply_second(&compensated_round_trip(&idle)?);

    let mut steps = Vec::with_capacity(process.steps);
    let mut outputs = Vec::with_capacity(process.steps);
    for k in 0..process.steps {
        let chain = process.disturbance(k);
        let out = source.apply_second(&compensated_round_trip(&chain)?);
        steps.push(StepRecord {
            step: k,
            fidelity: uhlmann_fidelity(&reference, &out),
            chain,
        });
        outputs.push(out);
    }
    let weight = 1.0 / process.steps as f64;
    let averaged = DensityMatrix::mixture(outputs.iter().map(|rho| (weight, rho)))?;

    let active_state = averaged.depolarize_second(noise.depolarizing_p)?;
    let inactive_state = reference.depolarize_second(noise.depolarizing_p)?;
    let settings = MeasurementSetting::all_pairs();
    let shots = noise
        .shots_per_setting
        .checked_mul(process.steps as u64)
        .ok_or_else(|| Error::InvalidArgument("total shot count overflows".into()))?;
    let (freqs_inactive, counts_inactive) = acquire(&inactive_state, &settings, shots, rng)?;
    let (freqs_active, counts_active) = acquire(&active_state, &settings, shots, rng)?;
    let inactive = tomograph_pair(&freqs_inactive)?;
    let active = tomograph_pair(&freqs_active)?;
    Ok(ErgodicOutcome {
        fidelity: uhlmann_fidelity(&inactive.state, &active.state),
        steps,
        active,
        inactive,
        counts_active,
        counts_inactive,
    })
}

/// Output-state fidelities of mirror-only round trips against the
/// Faraday-mirror target, one Haar disturbance and one Haar probe per trial.
pub fn mirror_control_fidelities<R: Rng + ?Sized>(trials: usize, rng: &mut R) -> Result<Vec<f64>> {
    (0..trials)
        .map(|_| {
            let chain = random_disturbance(DisturbanceMode::Haar, rng);
            let probe = PureQubit::haar_random(rng);
            let uncompensated = chain.round_trip(Turn::Mirror)?.apply(&probe);
            let target = compensated_round_trip(&chain)?.apply(&probe);
            Ok(uncompensated.inner(&target).norm_sqr())
        })
        .collect()
}
