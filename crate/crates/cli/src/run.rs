//! Experiment drivers and artifact export.
//!
//! Random streams: the main experiment draws from ChaCha8 seeded with
//! `seed` on stream 0. Shot sweeps use stream `1 + i` for sweep entry `i`,
//! and the mirror-only control uses stream [`CONTROL_STREAM`].

use std::fs;
use std::path::Path;

use faraday_core::bench::{six_state_experiment, NoiseModel};
use faraday_core::compensation::{
    compensated_round_trip, ergodic_experiment, mirror_control_fidelities, random_disturbance,
    DisturbanceMode, DisturbanceProcess,
};
use faraday_core::elements::{faraday_pass, frm_unitary, Direction};
use faraday_core::io::{
    chain_json, complex_matrix_json, counts_csv, format_g17, mapping_csv, ptm_rows,
    real_matrix_json, six_state_counts_csv, steps_csv, summary_json, tomo_json, SummaryValue,
};
use faraday_core::spin::Unitary;
use faraday_core::tomography::{entanglement_assisted_qpt, PauliTransferMatrix};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::{Experiment, ExperimentConfig};

pub const SWEEP_SHOTS: [u64; 4] = [100, 1_000, 10_000, 100_000];
pub const CONTROL_STREAM: u64 = 1_000;
const IDENTITY_TRIALS: usize = 1000;

/// Files to write, in order, with their contents.
pub struct Artifacts {
    pub files: Vec<(&'static str, String)>,
    pub line: String,
}

pub fn stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn core(e: faraday_core::Error) -> String {
    e.to_string()
}

fn noise(c: &ExperimentConfig, shots: u64) -> Result<NoiseModel, String> {
    NoiseModel::new(c.depolarizing_p, shots, c.seed).map_err(core)
}

fn common(c: &ExperimentConfig, frm_dev: f64) -> Vec<(&'static str, SummaryValue)> {
    vec![
        ("experiment", SummaryValue::Text(c.experiment.to_string())),
        ("seed", SummaryValue::Int(c.seed)),
        ("frm_identity_max_deviation", SummaryValue::Float(frm_dev)),
    ]
}

/// Checks `U₂₋U₃U₂₊ = iσ₁`, then runs the configured experiment.
pub fn run(c: &ExperimentConfig) -> Result<Artifacts, String> {
    let frm = frm_unitary().map_err(core)?;
    let frm_dev = frm.max_deviation(&Unitary::i_sigma(1));
    match c.experiment {
        Experiment::Identities => identities(c, &frm, frm_dev),
        Experiment::SixState => six_state(c, frm_dev),
        Experiment::Qpt => qpt(c, frm_dev),
        Experiment::Compensation => compensation(c, frm_dev),
    }
}

fn identities(c: &ExperimentConfig, frm: &Unitary, frm_dev: f64) -> Result<Artifacts, String> {
    let pass_dev = (faraday_pass(Direction::Backward) * faraday_pass(Direction::Forward))
        .max_deviation(&Unitary::identity());
    let mut rng = stream(c.seed, 0);
    let mut worst = 0.0f64;
    for _ in 0..IDENTITY_TRIALS {
        let chain = random_disturbance(DisturbanceMode::Haar, &mut rng);
        let u = compensated_round_trip(&chain).map_err(core)?;
        worst = worst.max(u.phase_distance(&Unitary::i_sigma(1)));
    }
    let control = mirror_control_fidelities(IDENTITY_TRIALS, &mut stream(c.seed, CONTROL_STREAM))
        .map_err(core)?;
    let control_min = control.iter().cloned().fold(f64::INFINITY, f64::min);
    if worst > 1e-10 {
        return Err(format!(
            "compensated round trip deviates from iσ₁ by {worst:e}"
        ));
    }

    let report = [
        ("frm_identity_max_deviation", format_g17(frm_dev)),
        ("faraday_pass_inverse_max_deviation", format_g17(pass_dev)),
        ("compensation_trials", IDENTITY_TRIALS.to_string()),
        ("compensation_worst_phase_distance", format_g17(worst)),
        ("mirror_only_min_fidelity", format_g17(control_min)),
    ]
    .iter()
    .map(|(k, v)| format!("{k} {v}\n"))
    .collect::<String>();

    let mut summary = common(c, frm_dev);
    summary.extend([
        (
            "compensation_trials",
            SummaryValue::Int(IDENTITY_TRIALS as u64),
        ),
        (
            "compensation_worst_phase_distance",
            SummaryValue::Float(worst),
        ),
        ("mirror_only_min_fidelity", SummaryValue::Float(control_min)),
    ]);
    Ok(Artifacts {
        files: vec![
            ("identities.txt", report),
            ("frm_unitary.json", complex_matrix_json(frm.matrix())),
            ("summary.json", summary_json(&summary)),
        ],
        line: format!(
            "identities: U2- U3 U2+ = i sigma1 within {frm_dev:.1e}; {IDENTITY_TRIALS} compensated round trips within {worst:.1e}"
        ),
    })
}

fn six_state(c: &ExperimentConfig, frm_dev: f64) -> Result<Artifacts, String> {
    let table =
        six_state_experiment(c.turn, &noise(c, c.shots)?, &mut stream(c.seed, 0)).map_err(core)?;
    let min = table.min_fidelity();
    let mut summary = common(c, frm_dev);
    summary.extend([
        ("turn", SummaryValue::Text(c.turn.to_string())),
        ("shots", SummaryValue::Int(c.shots)),
        ("depolarizing_p", SummaryValue::Float(c.depolarizing_p)),
        ("min_fidelity", SummaryValue::Float(min)),
    ]);
    Ok(Artifacts {
        files: vec![
            ("six_state_mapping.csv", mapping_csv(&table)),
            ("six_state_counts.csv", six_state_counts_csv(&table)),
            ("summary.json", summary_json(&summary)),
        ],
        line: format!(
            "six-state ({}): minimum fidelity {min:.6} over 6 inputs",
            c.turn
        ),
    })
}

fn qpt(c: &ExperimentConfig, frm_dev: f64) -> Result<Artifacts, String> {
    let channel = c.turn.unitary().map_err(core)?;
    let result = entanglement_assisted_qpt(&channel, &noise(c, c.shots)?, &mut stream(c.seed, 0))
        .map_err(core)?;
    let mut sweep = String::from("shots,fidelity_to_sigma1\n");
    for (i, shots) in SWEEP_SHOTS.iter().enumerate() {
        let r = entanglement_assisted_qpt(
            &channel,
            &noise(c, *shots)?,
            &mut stream(c.seed, 1 + i as u64),
        )
        .map_err(core)?;
        sweep.push_str(&format!("{shots},{}\n", format_g17(r.fidelity_to_sigma1)));
    }
    let f = result.fidelity_to_sigma1;
    let mut summary = common(c, frm_dev);
    summary.extend([
        ("turn", SummaryValue::Text(c.turn.to_string())),
        ("shots", SummaryValue::Int(c.shots)),
        ("depolarizing_p", SummaryValue::Float(c.depolarizing_p)),
        ("fidelity_to_sigma1", SummaryValue::Float(f)),
        (
            "trace_preserving_row_max_deviation",
            SummaryValue::Float(first_row_deviation(&result.ptm)),
        ),
    ]);
    Ok(Artifacts {
        files: vec![
            ("ptm.txt", ptm_rows(&result.ptm)),
            ("ptm.json", real_matrix_json(&result.ptm.m)),
            ("rho_in.json", tomo_json(&result.input, c.seed)),
            ("rho_out.json", tomo_json(&result.output, c.seed)),
            ("counts_in.csv", counts_csv(&result.counts_in)),
            ("counts_out.csv", counts_csv(&result.counts_out)),
            ("fidelity_vs_shots.csv", sweep),
            ("summary.json", summary_json(&summary)),
        ],
        line: format!(
            "qpt ({}): fidelity_to_sigma1 = {f:.6} at {} shots per setting",
            c.turn, c.shots
        ),
    })
}

fn first_row_deviation(ptm: &PauliTransferMatrix) -> f64 {
    (0..4)
        .map(|k| (ptm.m[(0, k)] - if k == 0 { 1.0 } else { 0.0 }).abs())
        .fold(0.0, f64::max)
}

fn compensation(c: &ExperimentConfig, frm_dev: f64) -> Result<Artifacts, String> {
    let process = DisturbanceProcess::new(c.disturbance_mode, c.seed, c.steps).map_err(core)?;
    let outcome =
        ergodic_experiment(&process, &noise(c, c.shots)?, &mut stream(c.seed, 0)).map_err(core)?;
    let mut sweep = String::from("shots,fidelity\n");
    for (i, shots) in SWEEP_SHOTS.iter().enumerate() {
        let r = ergodic_experiment(
            &process,
            &noise(c, *shots)?,
            &mut stream(c.seed, 1 + i as u64),
        )
        .map_err(core)?;
        sweep.push_str(&format!("{shots},{}\n", format_g17(r.fidelity)));
    }
    let min_step = outcome
        .steps
        .iter()
        .map(|s| s.fidelity)
        .fold(f64::INFINITY, f64::min);
    let control = mirror_control_fidelities(IDENTITY_TRIALS, &mut stream(c.seed, CONTROL_STREAM))
        .map_err(core)?;
    let control_min = control.iter().cloned().fold(f64::INFINITY, f64::min);
    let first_chain = chain_json(&outcome.steps[0].chain);

    let mut summary = common(c, frm_dev);
    summary.extend([
        (
            "disturbance_mode",
            SummaryValue::Text(c.disturbance_mode.to_string()),
        ),
        ("steps", SummaryValue::Int(c.steps as u64)),
        ("shots", SummaryValue::Int(c.shots)),
        ("depolarizing_p", SummaryValue::Float(c.depolarizing_p)),
        ("fidelity", SummaryValue::Float(outcome.fidelity)),
        ("min_step_fidelity", SummaryValue::Float(min_step)),
        ("mirror_only_min_fidelity", SummaryValue::Float(control_min)),
    ]);
    Ok(Artifacts {
        files: vec![
            ("steps.csv", steps_csv(&outcome.steps)),
            ("first_disturbance.json", first_chain),
            ("rho_active.json", tomo_json(&outcome.active, c.seed)),
            ("rho_inactive.json", tomo_json(&outcome.inactive, c.seed)),
            ("counts_active.csv", counts_csv(&outcome.counts_active)),
            ("counts_inactive.csv", counts_csv(&outcome.counts_inactive)),
            ("fidelity_vs_shots.csv", sweep),
            ("summary.json", summary_json(&summary)),
        ],
        line: format!(
            "compensation ({}, {} steps): fidelity {:.6}; mirror-only minimum {control_min:.4}",
            c.disturbance_mode, c.steps, outcome.fidelity
        ),
    })
}

pub fn write(dir: &Path, artifacts: &Artifacts) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    for (name, body) in &artifacts.files {
        fs::write(dir.join(name), body)?;
    }
    Ok(())
}
