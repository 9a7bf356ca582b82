//! The simulated bench: singlet source, heralded preparation on mode k₂,
//! Pauli-basis analyzers with multinomial coincidence counts, and the
//! six-state reflection experiment.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use nalgebra::{Matrix2, Vector4};
use rand::Rng;
use rand_distr::{Binomial, Distribution};

use crate::elements::Turn;
use crate::error::{Error, Result};
use crate::spin::{
    kron, pauli, real, uhlmann_fidelity, DensityMatrix, DensityMatrix1Q, PureQubit,
    TwoQubitDensity, C64,
};
use crate::tomography::{tomograph_qubit, TomoResult};

/// Analyzer basis: `HV` measures σ₃, `L` measures σ₁, `C` measures σ₂.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Basis {
    HV,
    L,
    C,
}

impl Basis {
    pub const ALL: [Basis; 3] = [Basis::HV, Basis::L, Basis::C];

    /// Index of the measured Pauli operator.
    pub fn pauli_index(self) -> usize {
        match self {
            Basis::HV => 3,
            Basis::L => 1,
            Basis::C => 2,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Basis::HV => "HV",
            Basis::L => "L",
            Basis::C => "C",
        }
    }

    /// ½(I ± σ).
    pub fn projector(self, sign: Sign) -> Matrix2<C64> {
        (pauli(0) + pauli(self.pauli_index()) * real(sign.value())) * real(0.5)
    }
}

impl FromStr for Basis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "HV" => Ok(Basis::HV),
            "L" => Ok(Basis::L),
            "C" => Ok(Basis::C),
            other => Err(Error::Parse(format!("unknown basis `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub const ALL: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }

    fn from_symbol(ch: char) -> Result<Self> {
        match ch {
            '+' => Ok(Sign::Plus),
            '-' => Ok(Sign::Minus),
            other => Err(Error::Parse(format!("unknown outcome sign `{other}`"))),
        }
    }
}

/// Analyzer settings on k₁ (absent for single-qubit measurements) and k₂.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MeasurementSetting {
    pub first: Option<Basis>,
    pub second: Basis,
}

impl MeasurementSetting {
    pub fn single(basis: Basis) -> Self {
        Self {
            first: None,
            second: basis,
        }
    }

    pub fn pair(first: Basis, second: Basis) -> Self {
        Self {
            first: Some(first),
            second,
        }
    }

    /// The three single-qubit Pauli settings.
    pub fn all_single() -> Vec<Self> {
        Basis::ALL.iter().map(|&b| Self::single(b)).collect()
    }

    /// The nine two-qubit Pauli settings.
    pub fn all_pairs() -> Vec<Self> {
        Basis::ALL
            .iter()
            .flat_map(|&a| Basis::ALL.iter().map(move |&b| Self::pair(a, b)))
            .collect()
    }

    pub fn outcomes(&self) -> Vec<Outcome> {
        match self.first {
            None => Sign::ALL
                .iter()
                .map(|&s| Outcome {
                    first: None,
                    second: s,
                })
                .collect(),
            Some(_) => Sign::ALL
                .iter()
                .flat_map(|&a| {
                    Sign::ALL.iter().map(move |&b| Outcome {
                        first: Some(a),
                        second: b,
                    })
                })
                .collect(),
        }
    }
}

impl fmt::Display for MeasurementSetting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.first {
            None => f.write_str(self.second.label()),
            Some(a) => write!(f, "{}/{}", a.label(), self.second.label()),
        }
    }
}

impl FromStr for MeasurementSetting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.split_once('/') {
            Some((a, b)) => Ok(Self::pair(a.parse()?, b.parse()?)),
            None => Ok(Self::single(s.parse()?)),
        }
    }
}

/// Which detector fired on each arm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Outcome {
    pub first: Option<Sign>,
    pub second: Sign,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(a) = self.first {
            write!(f, "{}", a.symbol())?;
        }
        write!(f, "{}", self.second.symbol())
    }
}

impl FromStr for Outcome {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let chars: Vec<char> = s.chars().collect();
        match chars.as_slice() {
            [b] => Ok(Outcome {
                first: None,
                second: Sign::from_symbol(*b)?,
            }),
            [a, b] => Ok(Outcome {
                first: Some(Sign::from_symbol(*a)?),
                second: Sign::from_symbol(*b)?,
            }),
            _ => Err(Error::Parse(format!("bad outcome label `{s}`"))),
        }
    }
}

/// Coincidence counts for one analyzer setting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountRecord {
    pub setting: MeasurementSetting,
    pub counts: BTreeMap<Outcome, u64>,
}

impl CountRecord {
    pub fn shots(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn frequencies(&self) -> Result<FrequencyRecord> {
        let shots = self.shots();
        if shots == 0 {
            return Err(Error::ZeroShots(self.setting.to_string()));
        }
        let freqs = self
            .counts
            .iter()
            .map(|(&o, &n)| (o, n as f64 / shots as f64))
            .collect();
        Ok(FrequencyRecord {
            setting: self.setting,
            freqs,
            shots,
        })
    }
}

/// Relative outcome frequencies for one setting. `shots == 0` marks exact
/// Born probabilities (the infinite-statistics limit).
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyRecord {
    pub setting: MeasurementSetting,
    pub freqs: BTreeMap<Outcome, f64>,
    pub shots: u64,
}

/// Depolarization on qubit 2, shots per analyzer setting, and the seed of
/// the counting stream.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    pub depolarizing_p: f64,
    /// Zero means exact probabilities instead of sampled counts.
    pub shots_per_setting: u64,
    pub seed: u64,
}

impl NoiseModel {
    pub fn new(depolarizing_p: f64, shots_per_setting: u64, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&depolarizing_p) {
            return Err(Error::ProbabilityOutOfRange(depolarizing_p));
        }
        Ok(Self {
            depolarizing_p,
            shots_per_setting,
            seed,
        })
    }

    /// No depolarization, no shot noise.
    pub fn ideal() -> Self {
        Self {
            depolarizing_p: 0.0,
            shots_per_setting: 0,
            seed: 0,
        }
    }

    pub fn is_shot_free(&self) -> bool {
        self.shots_per_setting == 0
    }
}

/// States that analyzers can act on.
pub trait Measurable {
    /// Born-rule probabilities of every outcome of `setting`, in
    /// [`MeasurementSetting::outcomes`] order.
    fn born_probabilities(&self, setting: &MeasurementSetting) -> Result<Vec<(Outcome, f64)>>;
}

impl Measurable for DensityMatrix1Q {
    fn born_probabilities(&self, setting: &MeasurementSetting) -> Result<Vec<(Outcome, f64)>> {
        if setting.first.is_some() {
            return Err(Error::SettingMismatch(setting.to_string()));
        }
        Ok(setting
            .outcomes()
            .into_iter()
            .map(|o| (o, self.expectation(&setting.second.projector(o.second))))
            .collect())
    }
}

impl Measurable for TwoQubitDensity {
    fn born_probabilities(&self, setting: &MeasurementSetting) -> Result<Vec<(Outcome, f64)>> {
        let Some(first) = setting.first else {
            return Err(Error::SettingMismatch(setting.to_string()));
        };
        Ok(setting
            .outcomes()
            .into_iter()
            .map(|o| {
                let a = o.first.expect("pair outcome");
                let proj = kron(&first.projector(a), &setting.second.projector(o.second));
                (o, self.expectation(&proj))
            })
            .collect())
    }
}

fn checked_probabilities<S: Measurable>(
    rho: &S,
    setting: &MeasurementSetting,
) -> Result<Vec<(Outcome, f64)>> {
    let probs = rho.born_probabilities(setting)?;
    let total: f64 = probs.iter().map(|(_, p)| p).sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::ProbabilitySum(total));
    }
    Ok(probs.into_iter().map(|(o, p)| (o, p.max(0.0))).collect())
}

/// Exact outcome frequencies for each setting.
pub fn exact_frequencies<S: Measurable>(
    rho: &S,
    settings: &[MeasurementSetting],
) -> Result<Vec<FrequencyRecord>> {
    if settings.is_empty() {
        return Err(Error::NoSettings);
    }
    settings
        .iter()
        .map(|s| {
            Ok(FrequencyRecord {
                setting: *s,
                freqs: checked_probabilities(rho, s)?.into_iter().collect(),
                shots: 0,
            })
        })
        .collect()
}

/// Multinomial counts, drawn as a chain of conditional binomials.
fn multinomial<R: Rng + ?Sized>(probs: &[f64], shots: u64, rng: &mut R) -> Vec<u64> {
    let mut out = vec![0; probs.len()];
    let mut remaining = shots;
    let mut mass: f64 = probs.iter().sum();
    for (k, &p) in probs.iter().enumerate() {
        if remaining == 0 {
            break;
        }
        if k + 1 == probs.len() {
            out[k] = remaining;
            break;
        }
        let q = if mass > 0.0 {
            (p / mass).clamp(0.0, 1.0)
        } else {
            0.0
        };
        let n = Binomial::new(remaining, q)
            .expect("conditional probability lies in [0, 1]")
            .sample(rng);
        out[k] = n;
        remaining -= n;
        mass -= p;
    }
    out
}

/// Samples `shots` coincidences per setting from the Born probabilities.
pub fn simulate_counts<S: Measurable, R: Rng + ?Sized>(
    rho: &S,
    settings: &[MeasurementSetting],
    shots: u64,
    rng: &mut R,
) -> Result<Vec<CountRecord>> {
    if settings.is_empty() {
        return Err(Error::NoSettings);
    }
    settings
        .iter()
        .map(|setting| {
            let probs = checked_probabilities(rho, setting)?;
            let p: Vec<f64> = probs.iter().map(|(_, p)| *p).collect();
            let n = multinomial(&p, shots, rng);
            Ok(CountRecord {
                setting: *setting,
                counts: probs.iter().map(|(o, _)| *o).zip(n).collect(),
            })
        })
        .collect()
}

/// Counts when `shots > 0`, exact frequencies otherwise.
pub fn acquire<S: Measurable, R: Rng + ?Sized>(
    rho: &S,
    settings: &[MeasurementSetting],
    shots: u64,
    rng: &mut R,
) -> Result<(Vec<FrequencyRecord>, Vec<CountRecord>)> {
    if shots == 0 {
        return Ok((exact_frequencies(rho, settings)?, Vec::new()));
    }
    let counts = simulate_counts(rho, settings, shots, rng)?;
    let freqs = counts
        .iter()
        .map(CountRecord::frequencies)
        .collect::<Result<Vec<_>>>()?;
    Ok((freqs, counts))
}

/// 2^{-1/2}(|H⟩₁|V⟩₂ − |V⟩₁|H⟩₂).
pub fn singlet_vector() -> Vector4<C64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Vector4::new(real(0.0), real(s), real(-s), real(0.0))
}

pub fn singlet_state() -> TwoQubitDensity {
    let psi = singlet_vector();
    DensityMatrix::from_pure(&psi).expect("singlet is normalized")
}

/// Projects qubit 1 of the singlet onto `chi` and returns the conditional
/// state of qubit 2 with the heralding probability.
pub fn herald_prepare(chi: &PureQubit) -> (PureQubit, f64) {
    let phi = singlet_vector();
    let amp = |k: usize| chi.psi1().conj() * phi[k] + chi.psi2().conj() * phi[2 + k];
    let (a, b) = (amp(0), amp(1));
    let prob = a.norm_sqr() + b.norm_sqr();
    let out = PureQubit::normalized(a, b).expect("singlet heralds every projection");
    (out, prob)
}

/// (1 − p) ρ + p I/2.
pub fn depolarize(rho: &DensityMatrix1Q, p: f64) -> Result<DensityMatrix1Q> {
    rho.depolarize(p)
}

/// The six probe states of the reflection experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SixState {
    H,
    V,
    LPlus,
    LMinus,
    CPlus,
    CMinus,
}

impl SixState {
    pub const ALL: [SixState; 6] = [
        SixState::H,
        SixState::V,
        SixState::LPlus,
        SixState::LMinus,
        SixState::CPlus,
        SixState::CMinus,
    ];

    pub fn state(self) -> PureQubit {
        match self {
            SixState::H => PureQubit::horizontal(),
            SixState::V => PureQubit::vertical(),
            SixState::LPlus => PureQubit::diagonal(true),
            SixState::LMinus => PureQubit::diagonal(false),
            SixState::CPlus => PureQubit::circular(true),
            SixState::CMinus => PureQubit::circular(false),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            SixState::H => "H",
            SixState::V => "V",
            SixState::LPlus => "L+",
            SixState::LMinus => "L-",
            SixState::CPlus => "C+",
            SixState::CMinus => "C-",
        }
    }

    pub fn antipode(self) -> SixState {
        match self {
            SixState::H => SixState::V,
            SixState::V => SixState::H,
            SixState::LPlus => SixState::LMinus,
            SixState::LMinus => SixState::LPlus,
            SixState::CPlus => SixState::CMinus,
            SixState::CMinus => SixState::CPlus,
        }
    }

    /// Reflection tables: the mirror keeps H/V and swaps the
    /// diagonal and circular pairs; the Faraday mirror swaps H/V and the
    /// circular pair but keeps the diagonal states.
    pub fn expected_output(self, turn: Turn) -> SixState {
        use SixState::*;
        match (turn, self) {
            (Turn::Mirror, H | V) => self,
            (Turn::Mirror, _) => self.antipode(),
            (Turn::Frm, LPlus | LMinus) => self,
            (Turn::Frm, _) => self.antipode(),
        }
    }
}

impl fmt::Display for SixState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone)]
pub struct SixStateRow {
    pub input: SixState,
    pub expected: SixState,
    pub herald_probability: f64,
    pub tomography: TomoResult<2>,
    /// Fidelity of the reconstructed output to `expected`.
    pub fidelity: f64,
    pub counts: Vec<CountRecord>,
}

#[derive(Debug, Clone)]
pub struct SixStateTable {
    pub turn: Turn,
    pub noise: NoiseModel,
    pub rows: Vec<SixStateRow>,
}

impl SixStateTable {
    pub fn min_fidelity(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| r.fidelity)
            .fold(f64::INFINITY, f64::min)
    }
}

/// Heralds each of the six probe states on k₂, reflects it off `turn`,
/// depolarizes it, tomographs it and scores it against the expected mapping.
pub fn six_state_experiment<R: Rng + ?Sized>(
    turn: Turn,
    noise: &NoiseModel,
    rng: &mut R,
) -> Result<SixStateTable> {
    let turn_unitary = turn.unitary()?;
    let settings = MeasurementSetting::all_single();
    let mut rows = Vec::with_capacity(SixState::ALL.len());
    for input in SixState::ALL {
        let (prepared, herald_probability) = herald_prepare(&input.state().orthogonal());
        let out = prepared
            .density()
            .apply_unitary(&turn_unitary)
            .depolarize(noise.depolarizing_p)?;
        let (freqs, counts) = acquire(&out, &settings, noise.shots_per_setting, rng)?;
        let tomography = tomograph_qubit(&freqs)?;
        let expected = input.expected_output(turn);
        let fidelity = uhlmann_fidelity(&tomography.state, &expected.state().density());
        rows.push(SixStateRow {
            input,
            expected,
            herald_probability,
            tomography,
            fidelity,
            counts,
        });
    }
    Ok(SixStateTable {
        turn,
        noise: *noise,
        rows,
    })
}

/// Classifies a single-qubit state as the closest of the six probe states.
pub fn nearest_six_state(rho: &DensityMatrix1Q) -> SixState {
    SixState::ALL
        .iter()
        .copied()
        .max_by(|a, b| {
            let fa = uhlmann_fidelity(rho, &a.state().density());
            let fb = uhlmann_fidelity(rho, &b.state().density());
            fa.total_cmp(&fb)
        })
        .expect("six candidates")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn singlet_properties() {
        let rho = singlet_state();
        assert_abs_diff_eq!(rho.purity(), 1.0, epsilon = 1e-14);
        let s = rho.pauli_expectations().s;
        assert_abs_diff_eq!(s[(3, 3)], -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(s[(1, 1)], -1.0, epsilon = 1e-14);
    }

    #[test]
    fn herald_examples() {
        let cases = [
            (PureQubit::horizontal(), PureQubit::vertical()),
            (PureQubit::diagonal(true), PureQubit::diagonal(false)),
            (PureQubit::circular(true), PureQubit::circular(false)),
        ];
        for (chi, expected) in cases {
            let (out, p) = herald_prepare(&chi);
            assert_abs_diff_eq!(p, 0.5, epsilon = 1e-15);
            assert_abs_diff_eq!(out.inner(&expected).norm_sqr(), 1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn zero_shots_gives_zero_counts() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let rho = PureQubit::horizontal().density();
        let recs = simulate_counts(&rho, &MeasurementSetting::all_single(), 0, &mut rng).unwrap();
        assert!(recs.iter().all(|r| r.shots() == 0));
        assert!(matches!(recs[0].frequencies(), Err(Error::ZeroShots(_))));
    }

    #[test]
    fn deterministic_outcome() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let rho = PureQubit::horizontal().density();
        let recs = simulate_counts(
            &rho,
            &[MeasurementSetting::single(Basis::HV)],
            1000,
            &mut rng,
        )
        .unwrap();
        let plus = Outcome {
            first: None,
            second: Sign::Plus,
        };
        let minus = Outcome {
            first: None,
            second: Sign::Minus,
        };
        assert_eq!(recs[0].counts[&plus], 1000);
        assert_eq!(recs[0].counts[&minus], 0);
    }

    #[test]
    fn mixed_state_binomial_spread() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let rho = DensityMatrix1Q::maximally_mixed();
        let recs = simulate_counts(
            &rho,
            &[MeasurementSetting::single(Basis::HV)],
            10_000,
            &mut rng,
        )
        .unwrap();
        for &n in recs[0].counts.values() {
            // 4σ with σ = √(N p q) = 50
            assert!((n as f64 - 5000.0).abs() <= 4.0 * 2500f64.sqrt());
        }
    }

    #[test]
    fn setting_dimension_mismatch() {
        let rho = PureQubit::horizontal().density();
        let err = rho
            .born_probabilities(&MeasurementSetting::pair(Basis::HV, Basis::HV))
            .unwrap_err();
        assert!(matches!(err, Error::SettingMismatch(_)));
        assert_eq!(
            simulate_counts(&rho, &[], 10, &mut ChaCha8Rng::seed_from_u64(0)),
            Err(Error::NoSettings)
        );
    }

    #[test]
    fn same_seed_same_counts() {
        let rho = singlet_state();
        let run = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            simulate_counts(&rho, &MeasurementSetting::all_pairs(), 500, &mut rng).unwrap()
        };
        assert_eq!(run(9), run(9));
        assert_ne!(run(9), run(10));
    }

    #[test]
    fn depolarize_examples() {
        let h = PureQubit::horizontal().density();
        assert_eq!(depolarize(&h, 0.0).unwrap(), h);
        let f = uhlmann_fidelity(&depolarize(&h, 0.1).unwrap(), &h);
        assert_abs_diff_eq!(f, 0.95, epsilon = 1e-12);
    }

    #[test]
    fn labels_round_trip() {
        for s in MeasurementSetting::all_pairs()
            .into_iter()
            .chain(MeasurementSetting::all_single())
        {
            assert_eq!(s.to_string().parse::<MeasurementSetting>().unwrap(), s);
            for o in s.outcomes() {
                assert_eq!(o.to_string().parse::<Outcome>().unwrap(), o);
            }
        }
    }

    #[test]
    fn six_state_noiseless_tables() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for turn in [Turn::Mirror, Turn::Frm] {
            let table = six_state_experiment(turn, &NoiseModel::ideal(), &mut rng).unwrap();
            for row in &table.rows {
                assert_abs_diff_eq!(row.fidelity, 1.0, epsilon = 1e-10);
                assert_eq!(nearest_six_state(&row.tomography.state), row.expected);
            }
        }
    }
}
