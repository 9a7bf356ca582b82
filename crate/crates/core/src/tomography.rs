//! Linear-inversion state tomography and entanglement-assisted process
//! tomography.
//!
//! Channels on qubit 2 are represented by their Pauli transfer matrix
//! `m[j][l] = ½ Tr[σⱼ ℰ(σₗ)]` (row = output Pauli component), which acts on
//! the Pauli vector `(1, r)` of the input state.
//!
//! With a probe `ρ_in` on k₁k₂ and `ρ_out = (I ⊗ ℰ)(ρ_in)`, the correlator
//! tables satisfy `S_out = S_in · Mᵀ`, so a probe whose table is invertible
//! (the singlet gives `S_in = diag(1, −1, −1, −1)`) determines `M` exactly.

use std::collections::BTreeMap;

use nalgebra::{Matrix2, Matrix4, Vector4};
use rand::Rng;

use crate::bench::{
    acquire, singlet_state, CountRecord, FrequencyRecord, MeasurementSetting, NoiseModel, Outcome,
};
use crate::error::{Error, Result};
use crate::spin::{
    pauli, real, uhlmann_fidelity, CMatrix, DensityMatrix, DensityMatrix1Q, PauliExpectationMatrix,
    PureQubit, TwoQubitDensity, Unitary, C64,
};

/// Largest acceptable condition number of the probe correlator table.
pub const MAX_PROBE_CONDITION: f64 = 1e6;

#[derive(Debug, Clone, PartialEq)]
pub struct TomoResult<const D: usize> {
    /// Physical estimate: the nearest density matrix to `raw_linear`.
    pub state: DensityMatrix<D>,
    /// Linear-inversion estimate before projection; may be non-positive.
    pub raw_linear: CMatrix<D>,
    /// Negative eigenvalue mass removed by the projection.
    pub clipped_mass: f64,
    pub settings_used: Vec<MeasurementSetting>,
    /// Smallest per-setting shot count; zero for exact frequencies.
    pub shots: u64,
}

/// Result of [`state_tomography`], which accepts either qubit count.
#[derive(Debug, Clone, PartialEq)]
pub enum Reconstruction {
    Qubit(TomoResult<2>),
    Pair(Box<TomoResult<4>>),
}

/// Merges records per setting, weighting by shots (exact records weigh 1).
fn pooled(
    records: &[FrequencyRecord],
) -> BTreeMap<MeasurementSetting, (BTreeMap<Outcome, f64>, u64)> {
    let mut acc: BTreeMap<MeasurementSetting, (BTreeMap<Outcome, f64>, f64, u64)> = BTreeMap::new();
    for rec in records {
        let w = rec.shots.max(1) as f64;
        let entry = acc
            .entry(rec.setting)
            .or_insert_with(|| (BTreeMap::new(), 0.0, u64::MAX));
        for (o, f) in &rec.freqs {
            *entry.0.entry(*o).or_insert(0.0) += w * f;
        }
        entry.1 += w;
        entry.2 = entry.2.min(rec.shots);
    }
    acc.into_iter()
        .map(|(s, (freqs, w, shots))| {
            (
                s,
                (freqs.into_iter().map(|(o, f)| (o, f / w)).collect(), shots),
            )
        })
        .collect()
}

fn signed_sum(freqs: &BTreeMap<Outcome, f64>, weight: impl Fn(&Outcome) -> f64) -> f64 {
    freqs.iter().map(|(o, f)| weight(o) * f).sum()
}

/// Single-qubit tomography from the HV, L and C settings.
pub fn tomograph_qubit(records: &[FrequencyRecord]) -> Result<TomoResult<2>> {
    let data = pooled(records);
    let mut r = [0.0; 3];
    let mut shots = u64::MAX;
    for setting in MeasurementSetting::all_single() {
        let (freqs, n) = data
            .get(&setting)
            .ok_or_else(|| Error::IncompleteData(setting.to_string()))?;
        r[setting.second.pauli_index() - 1] = signed_sum(freqs, |o| o.second.value());
        shots = shots.min(*n);
    }
    let mut raw = pauli(0);
    for (k, rk) in r.iter().enumerate() {
        raw += pauli(k + 1) * real(*rk);
    }
    let raw: Matrix2<C64> = raw * real(0.5);
    let (state, clipped_mass) = DensityMatrix1Q::project_physical(&raw);
    Ok(TomoResult {
        state,
        raw_linear: raw,
        clipped_mass,
        settings_used: MeasurementSetting::all_single(),
        shots,
    })
}

/// Two-qubit tomography from the nine Pauli settings.
///
/// Single-qubit marginals ⟨σᵢ⊗I⟩ and ⟨I⊗σⱼ⟩ are averaged over the three
/// settings that share the relevant analyzer.
pub fn tomograph_pair(records: &[FrequencyRecord]) -> Result<TomoResult<4>> {
    let data = pooled(records);
    let mut s = Matrix4::<f64>::zeros();
    s[(0, 0)] = 1.0;
    let mut shots = u64::MAX;
    for setting in MeasurementSetting::all_pairs() {
        let (freqs, n) = data
            .get(&setting)
            .ok_or_else(|| Error::IncompleteData(setting.to_string()))?;
        shots = shots.min(*n);
        let a = setting.first.expect("pair setting").pauli_index();
        let b = setting.second.pauli_index();
        let first = |o: &Outcome| o.first.map_or(0.0, |x| x.value());
        s[(a, b)] = signed_sum(freqs, |o| first(o) * o.second.value());
        s[(a, 0)] += signed_sum(freqs, first) / 3.0;
        s[(0, b)] += signed_sum(freqs, |o| o.second.value()) / 3.0;
    }
    let raw = PauliExpectationMatrix { s }.to_matrix();
    let (state, clipped_mass) = TwoQubitDensity::project_physical(&raw);
    Ok(TomoResult {
        state,
        raw_linear: raw,
        clipped_mass,
        settings_used: MeasurementSetting::all_pairs(),
        shots,
    })
}

/// Reconstructs a one- or two-qubit state from coincidence counts.
pub fn state_tomography(records: &[CountRecord]) -> Result<Reconstruction> {
    let first = records.first().ok_or(Error::NoSettings)?;
    let freqs = records
        .iter()
        .map(CountRecord::frequencies)
        .collect::<Result<Vec<_>>>()?;
    match first.setting.first {
        None => Ok(Reconstruction::Qubit(tomograph_qubit(&freqs)?)),
        Some(_) => Ok(Reconstruction::Pair(Box::new(tomograph_pair(&freqs)?))),
    }
}

/// A 4×4 real Pauli transfer matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliTransferMatrix {
    pub m: Matrix4<f64>,
}

impl PauliTransferMatrix {
    pub fn identity() -> Self {
        Self {
            m: Matrix4::identity(),
        }
    }

    /// The transfer matrix of σ₁ (equivalently iσ₁): diag(1, 1, −1, −1).
    pub fn sigma1() -> Self {
        Self {
            m: Matrix4::from_diagonal(&Vector4::new(1.0, 1.0, -1.0, -1.0)),
        }
    }

    /// First row equal to (1, 0, 0, 0) within `tol`.
    pub fn is_trace_preserving(&self, tol: f64) -> bool {
        (self.m[(0, 0)] - 1.0).abs() <= tol && (1..4).all(|l| self.m[(0, l)].abs() <= tol)
    }

    /// The 3×3 block acting on Bloch vectors.
    pub fn bloch_block(&self) -> nalgebra::Matrix3<f64> {
        self.m.fixed_view::<3, 3>(1, 1).into_owned()
    }

    pub fn max_deviation(&self, other: &Self) -> f64 {
        (self.m - other.m).abs().max()
    }

    /// Applies the map to a single-qubit state, projecting the result back
    /// onto the physical states when a reconstructed matrix overshoots.
    pub fn apply(&self, rho: &DensityMatrix1Q) -> DensityMatrix1Q {
        let v = Vector4::from_fn(|l, _| rho.expectation(&pauli(l)));
        let out = self.m * v;
        let mut m = Matrix2::zeros();
        for j in 0..4 {
            m += pauli(j) * real(0.5 * out[j]);
        }
        DensityMatrix1Q::project_physical(&m).0
    }
}

/// `m[j][l] = ½ Tr[σⱼ U σₗ U†]`.
pub fn ptm_of_unitary(u: &Unitary) -> PauliTransferMatrix {
    let um = u.matrix();
    PauliTransferMatrix {
        m: Matrix4::from_fn(|j, l| {
            let image = um * pauli(l) * um.adjoint();
            0.5 * (pauli(j) * image).trace().re
        }),
    }
}

/// Solves `S_out = S_in · Mᵀ` for `M`.
pub fn ptm_from_expectations(
    s_in: &PauliExpectationMatrix,
    s_out: &PauliExpectationMatrix,
) -> Result<PauliTransferMatrix> {
    let sv = s_in.s.singular_values();
    let (max, min) = (sv.max(), sv.min());
    let condition = if min > 0.0 { max / min } else { f64::INFINITY };
    if condition >= MAX_PROBE_CONDITION {
        return Err(Error::IllConditionedProbe(condition));
    }
    let mt = s_in
        .s
        .lu()
        .solve(&s_out.s)
        .ok_or(Error::IllConditionedProbe(f64::INFINITY))?;
    Ok(PauliTransferMatrix { m: mt.transpose() })
}

/// Transfer matrix of the qubit-2 channel taking `rho_in` to `rho_out`.
pub fn ptm_from_io_states(
    rho_in: &TwoQubitDensity,
    rho_out: &TwoQubitDensity,
) -> Result<PauliTransferMatrix> {
    ptm_from_expectations(&rho_in.pauli_expectations(), &rho_out.pauli_expectations())
}

/// Average gate fidelity to the σ₁ channel: ½ + (M₁₁ − M₂₂ − M₃₃)/6.
pub fn fidelity_to_sigma1(ptm: &PauliTransferMatrix) -> f64 {
    0.5 + (ptm.m[(1, 1)] - ptm.m[(2, 2)] - ptm.m[(3, 3)]) / 6.0
}

/// A single-qubit channel given either as a unitary or a transfer matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Channel {
    Unitary(Unitary),
    Ptm(PauliTransferMatrix),
}

impl Channel {
    pub fn apply(&self, rho: &DensityMatrix1Q) -> DensityMatrix1Q {
        match self {
            Channel::Unitary(u) => rho.apply_unitary(u),
            Channel::Ptm(m) => m.apply(rho),
        }
    }

    pub fn ptm(&self) -> PauliTransferMatrix {
        match self {
            Channel::Unitary(u) => ptm_of_unitary(u),
            Channel::Ptm(m) => *m,
        }
    }
}

impl From<Unitary> for Channel {
    fn from(u: Unitary) -> Self {
        Channel::Unitary(u)
    }
}

impl From<PauliTransferMatrix> for Channel {
    fn from(m: PauliTransferMatrix) -> Self {
        Channel::Ptm(m)
    }
}

/// Monte Carlo estimate of ∫dψ F[ℰ(ψ), ℒ(ψ)] over Haar-random pure inputs.
///
/// Returns the sample mean and its standard error.
pub fn haar_average_fidelity<R: Rng + ?Sized>(
    e: &Channel,
    l: &Channel,
    samples: usize,
    rng: &mut R,
) -> Result<(f64, f64)> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be at least 1".into()));
    }
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..samples {
        let rho = PureQubit::haar_random(rng).density();
        let f = uhlmann_fidelity(&e.apply(&rho), &l.apply(&rho));
        sum += f;
        sum_sq += f * f;
    }
    let n = samples as f64;
    let mean = sum / n;
    let stderr = if samples > 1 {
        let var = ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0);
        (var / n).sqrt()
    } else {
        0.0
    };
    Ok((mean, stderr))
}

#[derive(Debug, Clone)]
pub struct QptResult {
    pub input: TomoResult<4>,
    pub output: TomoResult<4>,
    pub ptm: PauliTransferMatrix,
    pub fidelity_to_sigma1: f64,
    pub counts_in: Vec<CountRecord>,
    pub counts_out: Vec<CountRecord>,
}

/// Entanglement-assisted process tomography of `channel` acting on k₂.
///
/// The singlet is tomographed directly, then again after qubit 2 passes the
/// channel and the depolarizing knob of `noise`; the transfer matrix is
/// inverted from the two reconstructions.
pub fn entanglement_assisted_qpt<R: Rng + ?Sized>(
    channel: &Unitary,
    noise: &NoiseModel,
    rng: &mut R,
) -> Result<QptResult> {
    let settings = MeasurementSetting::all_pairs();
    let rho_in = singlet_state();
    let rho_out = rho_in
        .apply_second(channel)
        .depolarize_second(noise.depolarizing_p)?;
    let (freqs_in, counts_in) = acquire(&rho_in, &settings, noise.shots_per_setting, rng)?;
    let (freqs_out, counts_out) = acquire(&rho_out, &settings, noise.shots_per_setting, rng)?;
    let input = tomograph_pair(&freqs_in)?;
    let output = tomograph_pair(&freqs_out)?;
    let ptm = ptm_from_io_states(&input.state, &output.state)?;
    Ok(QptResult {
        fidelity_to_sigma1: fidelity_to_sigma1(&ptm),
        input,
        output,
        ptm,
        counts_in,
        counts_out,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::{exact_frequencies, simulate_counts};
    use crate::elements::{faraday_pass, Direction};
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn exact_qubit_inversion() {
        let h = PureQubit::horizontal().density();
        let freqs = exact_frequencies(&h, &MeasurementSetting::all_single()).unwrap();
        let t = tomograph_qubit(&freqs).unwrap();
        assert!(t.state.max_deviation(&h) < 1e-12);
        assert_eq!(t.shots, 0);
    }

    #[test]
    fn exact_singlet_inversion() {
        let s = singlet_state();
        let freqs = exact_frequencies(&s, &MeasurementSetting::all_pairs()).unwrap();
        let t = tomograph_pair(&freqs).unwrap();
        assert!(t.state.max_deviation(&s) < 1e-12);
    }

    #[test]
    fn missing_setting_is_incomplete() {
        let h = PureQubit::horizontal().density();
        let freqs = exact_frequencies(&h, &MeasurementSetting::all_single()[..2]).unwrap();
        assert!(matches!(
            tomograph_qubit(&freqs),
            Err(Error::IncompleteData(_))
        ));
    }

    #[test]
    fn zero_shot_counts_rejected() {
        let h = PureQubit::horizontal().density();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let counts = simulate_counts(&h, &MeasurementSetting::all_single(), 0, &mut rng).unwrap();
        assert!(matches!(
            state_tomography(&counts),
            Err(Error::ZeroShots(_))
        ));
        assert!(matches!(state_tomography(&[]), Err(Error::NoSettings)));
    }

    #[test]
    fn counts_dispatch_by_qubit_count() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let counts = simulate_counts(
            &singlet_state(),
            &MeasurementSetting::all_pairs(),
            200,
            &mut rng,
        )
        .unwrap();
        assert!(matches!(
            state_tomography(&counts),
            Ok(Reconstruction::Pair(_))
        ));
    }

    #[test]
    fn ptm_of_unitary_examples() {
        assert_eq!(
            ptm_of_unitary(&Unitary::i_sigma(1)),
            PauliTransferMatrix::sigma1()
        );
        assert_eq!(
            ptm_of_unitary(&Unitary::identity()),
            PauliTransferMatrix::identity()
        );
        let expected = Matrix4::from_diagonal(&Vector4::new(1.0, -1.0, -1.0, 1.0));
        assert_abs_diff_eq!(
            ptm_of_unitary(&Unitary::i_sigma(3)).m,
            expected,
            epsilon = 1e-15
        );
    }

    #[test]
    fn ptm_from_io_examples() {
        let s = singlet_state();
        let out = s.apply_second(&Unitary::i_sigma(1));
        let m = ptm_from_io_states(&s, &out).unwrap();
        assert!(m.max_deviation(&PauliTransferMatrix::sigma1()) < 1e-10);

        let m = ptm_from_io_states(&s, &s).unwrap();
        assert!(m.max_deviation(&PauliTransferMatrix::identity()) < 1e-10);

        let p = 0.3;
        let m = ptm_from_io_states(&s, &s.depolarize_second(p).unwrap()).unwrap();
        let expected = Matrix4::from_diagonal(&Vector4::new(1.0, 1.0 - p, 1.0 - p, 1.0 - p));
        assert_abs_diff_eq!(m.m, expected, epsilon = 1e-12);
    }

    #[test]
    fn product_probe_is_ill_conditioned() {
        let hh = TwoQubitDensity::product(
            &PureQubit::horizontal().density(),
            &PureQubit::horizontal().density(),
        );
        assert!(matches!(
            ptm_from_io_states(&hh, &hh),
            Err(Error::IllConditionedProbe(_))
        ));
    }

    #[test]
    fn sigma1_fidelity_examples() {
        assert_abs_diff_eq!(
            fidelity_to_sigma1(&PauliTransferMatrix::sigma1()),
            1.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            fidelity_to_sigma1(&PauliTransferMatrix::identity()),
            1.0 / 3.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn haar_average_of_identical_channels_is_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let u = Unitary::haar_random(&mut rng);
        let (mean, se) = haar_average_fidelity(&u.into(), &u.into(), 200, &mut rng).unwrap();
        assert_abs_diff_eq!(mean, 1.0, epsilon = 1e-10);
        assert!(se < 1e-10);
        assert!(haar_average_fidelity(&u.into(), &u.into(), 0, &mut rng).is_err());
    }

    #[test]
    fn round_trip_through_faraday_pass() {
        let u = faraday_pass(Direction::Forward);
        let s = singlet_state();
        let m = ptm_from_io_states(&s, &s.apply_second(&u)).unwrap();
        assert!(m.max_deviation(&ptm_of_unitary(&u)) < 1e-10);
        let block = m.bloch_block();
        assert_abs_diff_eq!(block.determinant(), 1.0, epsilon = 1e-10);
    }

    #[test]
    fn noiseless_qpt_recovers_sigma1() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let r = entanglement_assisted_qpt(&Unitary::i_sigma(1), &NoiseModel::ideal(), &mut rng)
            .unwrap();
        assert!(r.ptm.max_deviation(&PauliTransferMatrix::sigma1()) < 1e-10);
        assert_abs_diff_eq!(r.fidelity_to_sigma1, 1.0, epsilon = 1e-10);
        assert!(r.counts_in.is_empty());
    }
}
