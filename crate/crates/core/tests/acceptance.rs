//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use faraday_core::bench::singlet_state;
use faraday_core::bench::{six_state_experiment, NoiseModel, SixState};
use faraday_core::compensation::{
    compensated_round_trip, ergodic_experiment, mirror_control_fidelities, random_disturbance,
    DisturbanceMode, DisturbanceProcess,
};
use faraday_core::elements::{faraday_pass, mirror_reflection, Direction, Turn};
use faraday_core::spin::{uhlmann_fidelity, Unitary};
use faraday_core::tomography::{
    entanglement_assisted_qpt, fidelity_to_sigma1, haar_average_fidelity, ptm_from_io_states,
    ptm_of_unitary, Channel, PauliTransferMatrix,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Check = fn() -> Result<String, String>;

fn ensure(ok: bool, detail: String) -> Result<String, String> {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn ac1() -> Result<String, String> {
    let product =
        faraday_pass(Direction::Backward) * mirror_reflection() * faraday_pass(Direction::Forward);
    let dev = product.max_deviation(&Unitary::i_sigma(1));
    ensure(
        dev <= 1e-12,
        format!("max |U2- U3 U2+ - i sigma1| = {dev:.3e}"),
    )
}

fn ac2() -> Result<String, String> {
    use SixState::*;
    let tables = [
        (
            Turn::Mirror,
            [
                (H, H),
                (V, V),
                (LPlus, LMinus),
                (LMinus, LPlus),
                (CPlus, CMinus),
                (CMinus, CPlus),
            ],
        ),
        (
            Turn::Frm,
            [
                (H, V),
                (V, H),
                (LPlus, LPlus),
                (LMinus, LMinus),
                (CPlus, CMinus),
                (CMinus, CPlus),
            ],
        ),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for (turn, table) in tables {
        let sim = six_state_experiment(turn, &NoiseModel::ideal(), &mut rng)
            .map_err(|e| e.to_string())?;
        for (row, (input, output)) in sim.rows.iter().zip(table) {
            let f = uhlmann_fidelity(&row.tomography.state, &output.state().density());
            if row.input != input || (f - 1.0).abs() > 1e-10 {
                return Err(format!(
                    "{turn}: {} -> {} has fidelity {f}",
                    input.label(),
                    output.label()
                ));
            }
            worst = worst.max((f - 1.0).abs()).max((row.fidelity - 1.0).abs());
        }
    }
    let noise = NoiseModel::new(0.16, 10_000, 2).map_err(|e| e.to_string())?;
    let mut fids = Vec::new();
    for turn in [Turn::Mirror, Turn::Frm] {
        let table = six_state_experiment(turn, &noise, &mut rng).map_err(|e| e.to_string())?;
        fids.extend(table.rows.iter().map(|r| r.fidelity));
    }
    let lo = fids.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = fids.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    ensure(
        worst <= 1e-10 && lo >= 0.90 && hi <= 0.94,
        format!("noiseless |F-1| <= {worst:.1e}; p=0.16 fidelities in [{lo:.4}, {hi:.4}]"),
    )
}

fn ac3() -> Result<String, String> {
    let rho_in = singlet_state();
    let rho_out = rho_in.apply_second(&Unitary::i_sigma(1));
    let ptm = ptm_from_io_states(&rho_in, &rho_out).map_err(|e| e.to_string())?;
    let dev = ptm.max_deviation(&PauliTransferMatrix::sigma1());
    let f = fidelity_to_sigma1(&ptm);
    ensure(
        dev <= 1e-10 && (f - 1.0).abs() <= 1e-10,
        format!("max |M - diag(1,1,-1,-1)| = {dev:.1e}, fidelity = {f}"),
    )
}

fn ac4() -> Result<String, String> {
    let frm = Unitary::i_sigma(1);
    let fids = (0..100u64)
        .map(|seed| {
            let noise = NoiseModel::new(0.0, 10_000, seed)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Ok(entanglement_assisted_qpt(&frm, &noise, &mut rng)?.fidelity_to_sigma1)
        })
        .collect::<faraday_core::Result<Vec<f64>>>()
        .map_err(|e| e.to_string())?;
    let (mean, std) = mean_std(&fids);
    ensure(
        mean >= 0.995 && std <= 0.005,
        format!("100 seeds at 1e4 shots: mean {mean:.5}, std {std:.5}"),
    )
}

fn ac5() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let target = Unitary::i_sigma(1);
    let mut failures = 0;
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let chain = random_disturbance(DisturbanceMode::Haar, &mut rng);
        let u = compensated_round_trip(&chain).map_err(|e| e.to_string())?;
        let d = u.phase_distance(&target);
        worst = worst.max(d);
        if d > 1e-10 {
            failures += 1;
        }
    }
    ensure(
        failures == 0,
        format!("1000 Haar disturbances, {failures} failures, worst {worst:.1e}"),
    )
}

fn ac6() -> Result<String, String> {
    let run = |seed: u64, shots: u64| -> faraday_core::Result<f64> {
        let process = DisturbanceProcess::new(DisturbanceMode::PockelsPair, seed, 100)?;
        let noise = NoiseModel::new(0.0, shots, seed)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Ok(ergodic_experiment(&process, &noise, &mut rng)?.fidelity)
    };
    let exact = run(0, 0).map_err(|e| e.to_string())?;
    let fids = (0..20u64)
        .map(|seed| run(seed, 10_000))
        .collect::<faraday_core::Result<Vec<f64>>>()
        .map_err(|e| e.to_string())?;
    let min = fids.iter().cloned().fold(f64::INFINITY, f64::min);
    let (mean, _) = mean_std(&fids);
    ensure(
        (exact - 1.0).abs() <= 1e-10 && min >= 0.998,
        format!("shot-free F = {exact}; 20 seeds, 100 windows of 1e4 pairs per setting: min {min:.5}, mean {mean:.5}"),
    )
}

fn ac7() -> Result<String, String> {
    let frm = Unitary::i_sigma(1);
    let mut report = Vec::new();
    for s in SixState::ALL {
        let out = s.state().density().apply_unitary(&frm);
        let f = uhlmann_fidelity(&out, &s.state().orthogonal().density());
        let want = match s {
            SixState::LPlus | SixState::LMinus => 0.0,
            _ => 1.0,
        };
        if (f - want).abs() > 1e-10 {
            return Err(format!("{}: fidelity to orthogonal state {f}", s.label()));
        }
        report.push(format!("{}:{}", s.label(), want));
    }
    Ok(format!("fidelity to orthogonal state {}", report.join(" ")))
}

fn ac8() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let sigma1 = Channel::from(Unitary::i_sigma(1));
    let mut worst_z = 0.0f64;
    for _ in 0..10 {
        let u = Unitary::haar_random(&mut rng);
        let closed = fidelity_to_sigma1(&ptm_of_unitary(&u));
        let (mean, se) = haar_average_fidelity(&Channel::from(u), &sigma1, 100_000, &mut rng)
            .map_err(|e| e.to_string())?;
        worst_z = worst_z.max((mean - closed).abs() / se);
    }
    let identity = fidelity_to_sigma1(&PauliTransferMatrix::identity());
    ensure(
        worst_z <= 3.0 && (identity - 1.0 / 3.0).abs() <= 1e-12,
        format!("10 Haar unitaries, worst |MC - formula| = {worst_z:.2} SE; identity channel {identity:.6}"),
    )
}

fn ac9() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let f = mirror_control_fidelities(1000, &mut rng).map_err(|e| e.to_string())?;
    let min = f.iter().cloned().fold(f64::INFINITY, f64::min);
    ensure(
        min < 0.5,
        format!("1000 mirror-only round trips, min fidelity {min:.4}"),
    )
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

fn main() -> ExitCode {
    let checks: [(&str, &str, Check, Duration); 9] = [
        ("AC1", "algebraic core", ac1, Duration::from_secs(1)),
        ("AC2", "six-state tables", ac2, Duration::from_secs(1)),
        ("AC3", "QPT exactness", ac3, Duration::from_secs(1)),
        ("AC4", "QPT under shot noise", ac4, Duration::from_secs(30)),
        ("AC5", "compensation identity", ac5, Duration::from_secs(1)),
        ("AC6", "ergodic experiment", ac6, Duration::from_secs(30)),
        ("AC7", "non-universality", ac7, Duration::from_secs(1)),
        ("AC8", "oracle cross-check", ac8, Duration::from_secs(10)),
        ("AC9", "negative control", ac9, Duration::from_secs(1)),
    ];
    let mut failed = 0;
    for (id, name, check, budget) in checks {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let (ok, detail) = match result {
            Ok(d) if elapsed <= budget => (true, d),
            Ok(d) => (false, format!("{d}; over time budget {budget:?}")),
            Err(d) => (false, d),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "[{}] {id} {name}: {detail} ({:.1} ms)",
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64() * 1e3
        );
    }
    println!("{} of 9 criteria passed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
