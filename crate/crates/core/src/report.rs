//! Single-point cycle report.

use serde::Serialize;

use crate::constants::HBAR;
use crate::cycle::{
    bath_occupations, efficiency_bounds, otto_cycle, perturbative_work, CycleConfig, CycleResult, Estimate,
};
use crate::error::Result;
use crate::model::{polariton_frequencies, Branch, PolaritonSpectrum, SystemParams};
use crate::protocol::{validate_timescales, HierarchyReport, StrokeDurations};

#[derive(Debug, Clone, Serialize)]
pub struct PointReport {
    pub params: SystemParams,
    pub delta_i: f64,
    pub delta_f: f64,
    pub branch: Branch,
    pub n_a: f64,
    pub n_b: f64,
    pub spectrum_initial: PolaritonSpectrum,
    pub spectrum_final: PolaritonSpectrum,
    pub stable: bool,
    pub cycle: Option<CycleResult>,
    /// Exact work in units of `ħω_m`.
    pub work_quanta: Option<f64>,
    /// Small-coupling work in units of `ħω_m`, when applicable.
    pub perturbative_work_quanta: Option<f64>,
    /// `(Curzon-Ahlborn, Carnot)`, when the phonon bath is warm.
    pub bounds: Option<(f64, f64)>,
    pub hierarchy: Option<HierarchyReport>,
    pub notes: Vec<String>,
}

/// Evaluates one cycle together with the spectrum, bounds and (optionally)
/// the timescale hierarchy.
pub fn report_point(
    params: &SystemParams,
    delta_i: f64,
    delta_f: f64,
    branch: Branch,
    durations: Option<(&StrokeDurations, f64)>,
) -> Result<PointReport> {
    let p_i = params.with_detuning(delta_i);
    let p_f = params.with_detuning(delta_f);
    let spectrum_initial = polariton_frequencies(&p_i)?;
    let spectrum_final = polariton_frequencies(&p_f)?;
    let (n_a, n_b) = bath_occupations(params)?;
    let stable = spectrum_initial.stable && spectrum_final.stable;
    let mut notes = Vec::new();
    let wm = params.omega_m;

    let (cycle, work_quanta) = if stable {
        let r = otto_cycle(&CycleConfig::new(*params, delta_i, delta_f, branch))?;
        if r.work <= 0.0 {
            notes.push("not an engine (W ≤ 0)".to_string());
        }
        if r.hybridization_warning {
            notes.push("working branch strongly hybridized at the final detuning".to_string());
        }
        (Some(r), Some(r.work_in_quanta(wm)))
    } else {
        notes.push(format!(
            "unstable: stability margin {:.6} at the final detuning; cycle not evaluated",
            spectrum_final.margin.min(spectrum_initial.margin)
        ));
        (None, None)
    };

    let perturbative_work_quanta = if stable && n_a == 0.0 && branch == Branch::LowerB {
        let Estimate { value, warning } = perturbative_work(wm, params.coupling, delta_f, n_a, n_b)?;
        if let Some(w) = warning {
            notes.push(w);
        }
        Some(value / (HBAR * wm))
    } else {
        None
    };

    let bounds = if params.t_phonon > 0.0 {
        Some(efficiency_bounds(delta_f, params.t_phonon)?)
    } else {
        None
    };

    let hierarchy = match durations {
        Some((d, margin)) => Some(validate_timescales(params, d, margin)?),
        None => None,
    };

    Ok(PointReport {
        params: *params,
        delta_i,
        delta_f,
        branch,
        n_a,
        n_b,
        spectrum_initial,
        spectrum_final,
        stable,
        cycle,
        work_quanta,
        perturbative_work_quanta,
        bounds,
        hierarchy,
        notes,
    })
}

impl std::fmt::Display for PointReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let wm = self.params.omega_m;
        writeln!(f, "operating point")?;
        writeln!(f, "  omega_m        {:.6e} rad/s", wm)?;
        writeln!(
            f,
            "  G              {:.6e} rad/s  (G/omega_m = {:.6})",
            self.params.coupling,
            self.params.coupling / wm
        )?;
        writeln!(
            f,
            "  delta_i        {:.6e} rad/s  ({:.6} omega_m)",
            self.delta_i,
            self.delta_i / wm
        )?;
        writeln!(
            f,
            "  delta_f        {:.6e} rad/s  ({:.6} omega_m)",
            self.delta_f,
            self.delta_f / wm
        )?;
        writeln!(f, "  bath occupations  n_a = {:.6}, n_b = {:.6}", self.n_a, self.n_b)?;
        writeln!(f, "spectrum")?;
        for (label, s) in [("initial", &self.spectrum_initial), ("final", &self.spectrum_final)] {
            writeln!(
                f,
                "  {label:<8} omega_A = {:.6e} rad/s, omega_B = {:.6e} rad/s, margin {:.6}{}",
                s.omega_a,
                s.omega_b,
                s.margin,
                if s.stable { "" } else { "  UNSTABLE" }
            )?;
        }
        if let Some(r) = &self.cycle {
            writeln!(f, "cycle on branch {}", self.branch)?;
            writeln!(
                f,
                "  omega_i = {:.6e} rad/s, omega_f = {:.6e} rad/s",
                r.omega_i, r.omega_f
            )?;
            writeln!(f, "  N_i = {:.6}, N_f = {:.6}", r.n_i, r.n_f)?;
            writeln!(f, "  E1..E4 = {:.6e}, {:.6e}, {:.6e}, {:.6e} J", r.e1, r.e2, r.e3, r.e4)?;
            writeln!(f, "  W = {:.6e} J ({:.6} hbar omega_m)", r.work, r.work_in_quanta(wm))?;
            writeln!(
                f,
                "  Q = {:.6e} J ({:.6} hbar omega_m)",
                r.heat_in,
                r.heat_in_quanta(wm)
            )?;
            writeln!(f, "  efficiency = {:.6}", r.efficiency)?;
        }
        if let Some(w) = self.perturbative_work_quanta {
            writeln!(f, "  small-coupling W = {w:.6} hbar omega_m")?;
        }
        if let Some((ca, carnot)) = self.bounds {
            writeln!(f, "bounds  Curzon-Ahlborn {ca:.6}, Carnot {carnot:.6}")?;
        }
        if let Some(h) = &self.hierarchy {
            writeln!(f, "timescale hierarchy")?;
            writeln!(f, "{h}")?;
        }
        for n in &self.notes {
            writeln!(f, "note: {n}")?;
        }
        Ok(())
    }
}
