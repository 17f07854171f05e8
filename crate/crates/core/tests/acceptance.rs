//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//!
//! Run with `cargo test -p otto-core --test acceptance`.

use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use otto_core::constants::{hz_to_angular, HBAR, K_B, LITHIUM_7_MASS};
use otto_core::cycle::{
    bose_occupation, efficiency_at_max_work, efficiency_bounds, optimal_coupling, otto_cycle, perturbative_work,
    CycleConfig, HIGH_TEMPERATURE_LIMIT,
};
use otto_core::gaussian::{quadratic_form, williamson_diagonalize};
use otto_core::model::{polariton_frequencies, Branch, SystemParams};
use otto_core::protocol::{
    damping_from_quality, recoil_temperature_limit, validate_timescales, StrokeDurations, DEFAULT_MARGIN,
};
use otto_core::scenario::Scenario;
use otto_core::sweep::run_sweep;

// Tolerances and thresholds, as stated by the acceptance criteria.
const SPECTRUM_REL_TOL: f64 = 1e-10;
const SPECTRUM_DRAWS: usize = 100;
const SPECTRUM_BUDGET: Duration = Duration::from_secs(1);
const SPLITTING_REL_TOL: f64 = 1e-10;
const OPTICAL_OCCUPATION_RANGE: (f64, f64) = (9.7, 10.2);
const PERTURBATIVE_REL_TOL: f64 = 0.05;
const PERTURBATIVE_SUBGRID: (f64, f64) = (0.05, 0.1);
const SMALL_COUPLING_ORACLE: f64 = 9.0025;
const SMALL_COUPLING_ORACLE_TOL: f64 = 5e-5;
const PERTURBATIVE_BUDGET: Duration = Duration::from_secs(10);
const RIDGE_TARGET: f64 = 0.114;
const BOUND_SAMPLES: usize = 1000;
const HIERARCHY_MARGIN: f64 = DEFAULT_MARGIN;
const RECOIL_RANGE: (f64, f64) = (1e-12, 1e-11);
const OPTICAL_GRID: (usize, usize) = (200, 200);

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

/// Phonon temperature giving `n_b = 10` exactly at `omega_m`.
fn temperature_for_ten_phonons(omega_m: f64) -> f64 {
    HBAR * omega_m / (K_B * 1.1f64.ln())
}

fn optical_scenario() -> Scenario {
    Scenario {
        grid: OPTICAL_GRID,
        ..Scenario::optical()
    }
}

fn spectrum_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0x5eed_0001);
    let mut worst: f64 = 0.0;
    for _ in 0..SPECTRUM_DRAWS {
        let wm = 10f64.powf(rng.gen_range(0.0..9.0));
        let d = rng.gen_range(-5.0..-0.05) * wm;
        let g = rng.gen_range(0.0..1.0) * (d.abs() * wm).sqrt() / 2.0;
        let params = SystemParams::new(wm, d, g);
        let s = polariton_frequencies(&params).unwrap();
        let t = williamson_diagonalize(&quadratic_form(&params).unwrap()).unwrap();
        worst = worst
            .max((t.frequencies.0 - s.omega_a).abs() / s.omega_a)
            .max((t.frequencies.1 - s.omega_b).abs() / s.omega_b);
    }
    let elapsed = start.elapsed();
    outcome(
        worst <= SPECTRUM_REL_TOL && elapsed < SPECTRUM_BUDGET,
        format!("max relative deviation {worst:.2e} over {SPECTRUM_DRAWS} draws in {elapsed:.2?}"),
    )
}

fn avoided_crossing() -> Outcome {
    let wm = 1.0;
    let params = SystemParams::new(wm, -wm, 0.1 * wm);
    let closed = (1.2f64.sqrt() - 0.8f64.sqrt()) * wm;
    let s = polariton_frequencies(&params).unwrap();
    let t = williamson_diagonalize(&quadratic_form(&params).unwrap()).unwrap();
    let rel_closed = (s.splitting() - closed).abs() / closed;
    let rel_numeric = (t.frequencies.0 - t.frequencies.1 - closed).abs() / closed;
    let order_2g = (s.splitting() / (0.2 * wm) - 1.0).abs() < 0.05;
    outcome(
        rel_closed <= SPLITTING_REL_TOL && rel_numeric <= SPLITTING_REL_TOL && order_2g,
        format!(
            "splitting {:.5} omega_m (closed form {:.5}), rel dev {rel_closed:.1e} / {rel_numeric:.1e}",
            s.splitting(),
            closed
        ),
    )
}

fn bath_occupation() -> Outcome {
    let n = bose_occupation(hz_to_angular(200e6), 0.1).unwrap();
    outcome(
        (OPTICAL_OCCUPATION_RANGE.0..=OPTICAL_OCCUPATION_RANGE.1).contains(&n),
        format!("n_b(2pi x 200 MHz, 0.1 K) = {n:.4}"),
    )
}

fn stability_mask() -> Outcome {
    let s = optical_scenario();
    let table = run_sweep(&s, None).unwrap();
    let wm = s.omega_m;
    let mut mismatches = 0;
    for c in &table.cells {
        let g = c.g_over_wm * wm;
        let d = c.deltaf_over_wm * wm;
        let expected_masked = g * g > d.abs() * wm / 4.0;
        if expected_masked == c.stable {
            mismatches += 1;
        }
    }
    outcome(
        mismatches == 0,
        format!(
            "{} of {} cells masked, {mismatches} mismatches",
            table.cells.len() - table.stable_count(),
            table.cells.len()
        ),
    )
}

fn perturbative_work_agreement() -> Outcome {
    let start = Instant::now();
    let wm = hz_to_angular(200e6);
    let mut s = optical_scenario();
    s.t_phonon = temperature_for_ten_phonons(wm);
    // same cell centres as the full grid, cut down to the subgrid corner
    let (g_axis, d_axis) = s.axes();
    let rows = g_axis.iter().filter(|&&g| g <= PERTURBATIVE_SUBGRID.0).count();
    let cols = d_axis.iter().filter(|&&d| -d <= PERTURBATIVE_SUBGRID.1).count();
    let g_step = (s.g_range.1 - s.g_range.0) / s.grid.0 as f64;
    let d_step = (s.deltaf_range.1 - s.deltaf_range.0) / s.grid.1 as f64;
    s.g_range.1 = s.g_range.0 + rows as f64 * g_step;
    s.deltaf_range.0 = s.deltaf_range.1 - cols as f64 * d_step;
    s.grid = (rows, cols);
    let table = run_sweep(&s, None).unwrap();
    let n_b = bose_occupation(wm, s.t_phonon).unwrap();
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for c in &table.cells {
        if c.g_over_wm > PERTURBATIVE_SUBGRID.0 || -c.deltaf_over_wm > PERTURBATIVE_SUBGRID.1 {
            continue;
        }
        let Some(y) = c.cycle else { continue };
        let approx = perturbative_work(wm, c.g_over_wm * wm, c.deltaf_over_wm * wm, 0.0, n_b)
            .unwrap()
            .value
            / (HBAR * wm);
        worst = worst.max((y.work - approx).abs() / y.work.abs());
        count += 1;
    }
    let oracle = perturbative_work(1.0, 0.05, -0.1, 0.0, 10.0).unwrap().value / HBAR;
    let elapsed = start.elapsed();
    outcome(
        count > 0 && worst <= PERTURBATIVE_REL_TOL && (oracle - SMALL_COUPLING_ORACLE).abs() <= SMALL_COUPLING_ORACLE_TOL && elapsed < PERTURBATIVE_BUDGET,
        format!(
            "{count} stable subgrid cells, max |W - W_approx|/W = {:.2}%, W_approx(0.05, -0.1) = {oracle:.7}, {elapsed:.2?}",
            100.0 * worst
        ),
    )
}

fn maximum_work_ridge() -> Outcome {
    let s = optical_scenario();
    let wm = s.omega_m;
    let delta_f = -0.1 * wm;
    let (g_axis, _) = s.axes();
    let resolution = g_axis[1] - g_axis[0];
    let mut best = (f64::NEG_INFINITY, f64::NAN);
    for &g in &g_axis {
        let base = s.params(g);
        if g * g >= 0.1 / 4.0 {
            continue;
        }
        let r = otto_cycle(&CycleConfig::new(base, s.delta_i, delta_f, Branch::LowerB)).unwrap();
        if r.work > best.0 {
            best = (r.work, g);
        }
    }
    let g_star = optimal_coupling(wm, delta_f, s.t_phonon).unwrap().value / wm;
    let target_ok = (g_star - RIDGE_TARGET).abs() < 1e-3;
    let off = (best.1 - g_star).abs();
    outcome(
        target_ok && off <= resolution,
        format!(
            "exact-W argmax G/omega_m = {:.4} (W = {:.4} hbar omega_m), G*/omega_m = {g_star:.4}, offset {off:.4} vs resolution {resolution:.4}",
            best.1,
            best.0 / (HBAR * wm)
        ),
    )
}

fn bound_ordering() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed_0007);
    let mut violations = 0;
    let mut evaluated = 0;
    while evaluated < BOUND_SAMPLES {
        let wm = 10f64.powf(rng.gen_range(6.0..10.0));
        let x = rng.gen_range(1e-4..HIGH_TEMPERATURE_LIMIT);
        let t_b = HBAR * wm / (K_B * x);
        let d = rng.gen_range(1e-3..1.0);
        let delta_f = -d * wm;
        if HBAR * delta_f.abs() >= 2.0 * K_B * t_b {
            continue;
        }
        let eta_w = efficiency_at_max_work(wm, delta_f, t_b).unwrap();
        assert!(eta_w.warning.is_none());
        let (ca, carnot) = efficiency_bounds(delta_f, t_b).unwrap();
        if !(eta_w.value < ca && ca < carnot) {
            violations += 1;
        }
        evaluated += 1;
    }
    outcome(violations == 0, format!("{evaluated} samples, {violations} violations"))
}

fn upper_branch_sign() -> Outcome {
    let s = Scenario {
        branch: Branch::UpperA,
        ..optical_scenario()
    };
    let table = run_sweep(&s, None).unwrap();
    let evaluated: Vec<_> = table.cells.iter().filter_map(|c| c.cycle).collect();
    let positive = evaluated.iter().filter(|y| y.work > 0.0).count();
    outcome(
        !evaluated.is_empty() && positive == 0,
        format!("{} stable cells on branch A, {positive} with W > 0", evaluated.len()),
    )
}

fn energy_bookkeeping() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut cells = 0;
    for branch in [Branch::LowerB, Branch::UpperA] {
        let s = Scenario {
            branch,
            grid: (80, 80),
            ..Scenario::optical()
        };
        let (g_axis, d_axis) = s.axes();
        for &g in &g_axis {
            for &d in &d_axis {
                if g * g >= d.abs() / 4.0 {
                    continue;
                }
                let r = otto_cycle(&CycleConfig::new(s.params(g), s.delta_i, d * s.omega_m, branch)).unwrap();
                let scale = [r.e1, r.e2, r.e3, r.e4].iter().fold(0.0f64, |m, e| m.max(e.abs()));
                let residual = (r.work - ((r.e1 - r.e4) - (r.e2 - r.e3))).abs();
                worst = worst.max(residual / (f64::EPSILON * scale));
                cells += 1;
            }
        }
    }
    outcome(
        worst <= 4.0,
        format!("{cells} cells, max residual {worst:.1} ulp of the largest stage energy"),
    )
}

fn timescale_validator() -> Outcome {
    let wm = 2e8;
    let params = SystemParams::new(wm, -3.0 * wm, 0.0)
        .with_mean_field(1e10f64.sqrt(), 1e2)
        .with_damping(1e6, damping_from_quality(wm, 1e5).unwrap());
    let durations = StrokeDurations::new(3e-7, 1e-5, 3e-7, 1e-3).unwrap();
    let report = validate_timescales(&params, &durations, HIERARCHY_MARGIN).unwrap();
    let mut swapped = params;
    std::mem::swap(&mut swapped.kappa, &mut swapped.gamma);
    let swapped_report = validate_timescales(&swapped, &durations, HIERARCHY_MARGIN).unwrap();
    let min_ratio = report.links.iter().map(|l| l.ratio).fold(f64::INFINITY, f64::min);
    outcome(
        report.pass && !swapped_report.pass,
        format!(
            "reference set {} (smallest ratio {min_ratio:.3}), gamma<->kappa {}",
            if report.pass { "passes" } else { "fails" },
            if swapped_report.pass { "passes" } else { "fails" }
        ),
    )
}

fn recoil_bound() -> Outcome {
    let t = recoil_temperature_limit(hz_to_angular(300e9), LITHIUM_7_MASS).unwrap();
    outcome(
        (RECOIL_RANGE.0..=RECOIL_RANGE.1).contains(&t),
        format!("T_max = {t:.3e} K"),
    )
}

fn determinism() -> Outcome {
    let s = Scenario {
        grid: (120, 120),
        ..Scenario::optical()
    };
    let reference = run_sweep(&s, Some(1)).unwrap().to_csv_string().unwrap();
    let mut identical = true;
    for workers in [Some(2), Some(3), Some(8), None] {
        let csv = run_sweep(&s, workers).unwrap().to_csv_string().unwrap();
        identical &= csv == reference;
    }
    identical &= run_sweep(&s, Some(1)).unwrap().to_csv_string().unwrap() == reference;
    outcome(
        identical,
        format!("{} bytes, worker counts 1/2/3/8/default", reference.len()),
    )
}

/// Efficiency rises toward the stability boundary at fixed Δ_f.
fn efficiency_monotonicity() -> Outcome {
    let s = optical_scenario();
    let table = run_sweep(&s, None).unwrap();
    let (rows, cols) = table.shape();
    let mut checked = 0;
    let mut breaks = 0;
    for col in (0..cols).step_by(10) {
        let mut prev = f64::NEG_INFINITY;
        for row in 0..rows {
            let Some(y) = table.cell(row, col).cycle else { break };
            if y.efficiency < prev {
                breaks += 1;
            }
            prev = y.efficiency;
            checked += 1;
        }
    }
    outcome(
        breaks == 0 && checked > 0,
        format!("{checked} cells along 20 columns, {breaks} decreases"),
    )
}

fn main() {
    let criteria: [Criterion; 13] = [
        ("1  spectrum oracle equivalence", spectrum_oracle),
        ("2  avoided crossing", avoided_crossing),
        ("3  bath-occupation consistency", bath_occupation),
        ("4  stability mask", stability_mask),
        ("5  perturbative work", perturbative_work_agreement),
        ("6  maximum-work ridge", maximum_work_ridge),
        ("7  bound ordering", bound_ordering),
        ("8  upper-branch sign", upper_branch_sign),
        ("9  energy bookkeeping", energy_bookkeeping),
        ("10 timescale validator", timescale_validator),
        ("11 recoil bound", recoil_bound),
        ("12 determinism", determinism),
        ("-- efficiency monotonicity spot check", efficiency_monotonicity),
    ];
    let mut failed = Vec::new();
    for (name, check) in criteria {
        let o = check();
        println!("[{}] {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        if !o.pass {
            failed.push(name);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria pass");
    } else {
        println!("acceptance: {} failing: {}", failed.len(), failed.join(", "));
        std::process::exit(1);
    }
}
