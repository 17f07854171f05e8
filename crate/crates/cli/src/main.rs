//! `otto`: command-line front end for the optomechanical Otto engine.
//!
//! Angular frequencies and rates are in rad/s unless a flag says otherwise;
//! detunings and couplings on the command line are ratios to `omega_m`.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use otto_core::constants::{hz_to_angular, ATOMIC_MASS_UNIT, LITHIUM_7_MASS};
use otto_core::heatmap::{render_heatmap, Field};
use otto_core::model::{polariton_frequencies, Branch, SystemParams};
use otto_core::protocol::{
    damping_from_quality, polariton_linewidths, recoil_temperature_limit, validate_timescales, StrokeDurations,
    DEFAULT_MARGIN,
};
use otto_core::report::report_point;
use otto_core::scenario::{parse_grid, Scenario};
use otto_core::sweep::{run_sweep, SweepTable};

#[derive(Parser)]
#[command(name = "otto", version, about = "Optomechanical quantum Otto engine toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Polariton frequencies and stability at one operating point.
    Spectrum(SpectrumArgs),
    /// Full single-cycle report.
    Cycle(CycleArgs),
    /// Sweep a scenario over (G/omega_m, delta_f/omega_m) and write CSV.
    Sweep(SweepArgs),
    /// Render a sweep CSV as a PNG heatmap.
    Heatmap(HeatmapArgs),
    /// Check the stroke timescale hierarchy.
    Validate(ValidateArgs),
    /// Recoil temperature limit for an atomic working medium.
    Recoil(RecoilArgs),
}

#[derive(Args)]
struct SpectrumArgs {
    /// Mechanical frequency in rad/s.
    #[arg(long)]
    omega_m: f64,
    /// Interpret --omega-m as Hz.
    #[arg(long)]
    hz: bool,
    /// Detuning as a multiple of omega_m (negative).
    #[arg(long, allow_hyphen_values = true)]
    delta: f64,
    /// Coupling G/omega_m.
    #[arg(long, default_value_t = 0.0)]
    g: f64,
}

#[derive(Args)]
struct CycleArgs {
    /// Preset name or scenario file providing omega_m, delta_i, baths and branch.
    #[arg(long, default_value = "optical")]
    scenario: String,
    /// Coupling G/omega_m.
    #[arg(long)]
    g: f64,
    /// Final detuning delta_f/omega_m.
    #[arg(long, allow_hyphen_values = true)]
    deltaf: f64,
    /// Initial detuning delta_i/omega_m; defaults to the scenario value.
    #[arg(long, allow_hyphen_values = true)]
    deltai: Option<f64>,
    #[arg(long)]
    branch: Option<Branch>,
    /// Stroke durations tau1..tau4 in seconds; enables the hierarchy check.
    #[arg(long, num_args = 4, value_names = ["T1", "T2", "T3", "T4"])]
    tau: Option<Vec<f64>>,
    /// Cavity and mechanical damping rates in rad/s, used with --tau.
    #[arg(long, num_args = 2, value_names = ["KAPPA", "GAMMA"])]
    damping: Option<Vec<f64>>,
    #[arg(long, default_value_t = DEFAULT_MARGIN)]
    margin: f64,
    /// Emit JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SweepArgs {
    /// Preset name (optical, microwave) or scenario file.
    #[arg(long, default_value = "optical")]
    scenario: String,
    #[arg(long)]
    out: PathBuf,
    /// Grid as ROWSxCOLS (G points x delta_f points).
    #[arg(long, value_parser = parse_grid)]
    grid: Option<(usize, usize)>,
    #[arg(long)]
    branch: Option<Branch>,
    /// Worker threads; defaults to one per core.
    #[arg(long)]
    workers: Option<usize>,
    /// Also render a heatmap of this field next to the CSV.
    #[arg(long)]
    heatmap: Option<Field>,
}

#[derive(Args)]
struct HeatmapArgs {
    /// Sweep CSV to render.
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value = "work")]
    field: Field,
}

#[derive(Args)]
struct ValidateArgs {
    /// Mechanical frequency in rad/s.
    #[arg(long, default_value_t = 2e8)]
    omega_m: f64,
    /// Mechanical quality factor; gamma = omega_m / Q.
    #[arg(long, default_value_t = 1e5)]
    quality: f64,
    /// Cavity damping in rad/s.
    #[arg(long, default_value_t = 1e6)]
    kappa: f64,
    /// Intracavity photon number |alpha|^2.
    #[arg(long, default_value_t = 1e10)]
    photons: f64,
    /// Single-photon coupling g in rad/s.
    #[arg(long, default_value_t = 1e2)]
    g0: f64,
    /// Stroke durations tau1..tau4 in seconds.
    #[arg(long, num_args = 4, value_names = ["T1", "T2", "T3", "T4"], default_values_t = [3e-7, 1e-5, 3e-7, 1e-3])]
    tau: Vec<f64>,
    /// Factor required for each "much less than" link.
    #[arg(long, default_value_t = DEFAULT_MARGIN)]
    margin: f64,
}

#[derive(Args)]
struct RecoilArgs {
    /// Photon frequency in Hz.
    #[arg(long, default_value_t = 300e9)]
    frequency_hz: f64,
    /// Atomic mass in unified atomic mass units; defaults to lithium-7.
    #[arg(long)]
    mass_u: Option<f64>,
}

fn spectrum(a: SpectrumArgs) -> Result<()> {
    let wm = if a.hz { hz_to_angular(a.omega_m) } else { a.omega_m };
    let p = SystemParams::new(wm, a.delta * wm, a.g * wm);
    let s = polariton_frequencies(&p)?;
    println!("omega_m [rad/s]  {:.9e}", wm);
    println!("omega_A [rad/s]  {:.9e}", s.omega_a);
    println!("omega_B [rad/s]  {:.9e}", s.omega_b);
    println!("splitting [rad/s] {:.9e}", s.splitting());
    println!("margin           {:.9}", s.margin);
    println!("stable           {}", s.stable);
    Ok(())
}

fn cycle(a: CycleArgs) -> Result<()> {
    let s = Scenario::resolve(&a.scenario)?;
    let wm = s.omega_m;
    let mut params = s.params(a.g);
    let durations = match &a.tau {
        Some(t) => {
            let Some(d) = &a.damping else {
                bail!("--tau needs --damping KAPPA GAMMA");
            };
            params = params.with_damping(d[0], d[1]);
            Some(StrokeDurations::new(t[0], t[1], t[2], t[3])?)
        }
        None => None,
    };
    let delta_i = a.deltai.map_or(s.delta_i, |d| d * wm);
    let branch = a.branch.unwrap_or(s.branch);
    let report = report_point(
        &params,
        delta_i,
        a.deltaf * wm,
        branch,
        durations.as_ref().map(|d| (d, a.margin)),
    )?;
    if a.json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        print!("{report}");
    }
    Ok(())
}

fn sweep(a: SweepArgs) -> Result<()> {
    let mut s = Scenario::resolve(&a.scenario)?;
    if let Some(g) = a.grid {
        s.grid = g;
    }
    if let Some(b) = a.branch {
        s.branch = b;
    }
    let table = run_sweep(&s, a.workers)?;
    table.save_csv(&a.out)?;
    for w in &table.warnings {
        eprintln!("warning: {w}");
    }
    let (rows, cols) = table.shape();
    println!(
        "{} ({}x{}, branch {}): {} of {} cells stable -> {}",
        s.name,
        rows,
        cols,
        s.branch,
        table.stable_count(),
        rows * cols,
        a.out.display()
    );
    if let Some(c) = table.max_work_cell() {
        let w = c.cycle.map_or(f64::NAN, |y| y.work);
        println!(
            "max work {:.6} hbar omega_m at G/omega_m = {:.6}, delta_f/omega_m = {:.6}",
            w, c.g_over_wm, c.deltaf_over_wm
        );
    }
    if let Some(field) = a.heatmap {
        let png = a.out.with_extension("png");
        render_heatmap(&table, field, &png)?;
        println!("heatmap -> {}", png.display());
    }
    Ok(())
}

fn heatmap(a: HeatmapArgs) -> Result<()> {
    let table = SweepTable::load_csv(&a.input)?;
    render_heatmap(&table, a.field, &a.out)?;
    println!("{} -> {}", a.input.display(), a.out.display());
    Ok(())
}

fn validate(a: ValidateArgs) -> Result<ExitCode> {
    let gamma = damping_from_quality(a.omega_m, a.quality)?;
    let params = SystemParams::new(a.omega_m, -3.0 * a.omega_m, 0.0)
        .with_mean_field(a.photons.sqrt(), a.g0)
        .with_damping(a.kappa, gamma);
    let d = StrokeDurations::new(a.tau[0], a.tau[1], a.tau[2], a.tau[3])?;
    let report = validate_timescales(&params, &d, a.margin)?;
    println!(
        "G = {:.6e} rad/s, gamma = {:.6e} rad/s, kappa = {:.6e} rad/s",
        params.coupling, gamma, a.kappa
    );
    if let Ok((la, lb)) = polariton_linewidths(&params) {
        println!("polariton linewidths [rad/s]  Gamma_A {la:.6e}, Gamma_B {lb:.6e}");
    }
    println!("{report}");
    Ok(if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

fn recoil(a: RecoilArgs) -> Result<()> {
    let mass = a.mass_u.map_or(LITHIUM_7_MASS, |m| m * ATOMIC_MASS_UNIT);
    let t = recoil_temperature_limit(hz_to_angular(a.frequency_hz), mass)?;
    println!("recoil temperature limit [K]  {t:.6e}");
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Spectrum(a) => spectrum(a).context("spectrum")?,
        Command::Cycle(a) => cycle(a).context("cycle")?,
        Command::Sweep(a) => sweep(a).context("sweep")?,
        Command::Heatmap(a) => heatmap(a).context("heatmap")?,
        Command::Validate(a) => return validate(a).context("validate"),
        Command::Recoil(a) => recoil(a).context("recoil")?,
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
