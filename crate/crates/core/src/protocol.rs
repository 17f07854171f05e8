//! Operational constraints of a realizable cycle.

use serde::{Deserialize, Serialize};

use crate::constants::{HBAR, K_B, SPEED_OF_LIGHT};
use crate::error::{Error, Result};
use crate::gaussian::{quadratic_form, williamson_diagonalize};
use crate::model::{polariton_frequencies, stability_margin, Branch, SystemParams};

/// Default ratio demanded by a "much less than" link.
pub const DEFAULT_MARGIN: f64 = 3.0;

/// Mechanical damping rate `γ = ω_m / Q`.
pub fn damping_from_quality(omega_m: f64, quality: f64) -> Result<f64> {
    if !(quality > 0.0 && quality.is_finite()) {
        return Err(Error::invalid("quality", format!("must be > 0, got {quality}")));
    }
    Ok(omega_m / quality)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PumpSetting {
    pub alpha_in: f64,
    pub beta: f64,
}

/// Pump amplitude holding the intracavity amplitude at `alpha` for detuning
/// `delta`, with the mechanical displacement it implies:
/// `α_in = αΔ`, `β = −gα²/ω_m`.
pub fn pump_compensation(params: &SystemParams, alpha: f64, delta: f64) -> Result<PumpSetting> {
    if delta == 0.0 || !delta.is_finite() {
        return Err(Error::invalid(
            "delta",
            "pump compensation needs a finite, non-zero detuning",
        ));
    }
    if !(params.omega_m > 0.0) {
        return Err(Error::invalid("omega_m", "must be > 0"));
    }
    let g = params
        .single_photon_g
        .ok_or(Error::MissingParameter("single_photon_g"))?;
    Ok(PumpSetting {
        alpha_in: alpha * delta,
        beta: -g * alpha * alpha / params.omega_m,
    })
}

/// Progress profile `s(u)`, `u ∈ [0, 1]`, of a detuning ramp.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub enum RampShape {
    #[default]
    Linear,
    /// `3u² − 2u³`.
    Smoothstep,
    /// Piecewise-linear through `(u, s)` knots from `(0, 0)` to `(1, 1)`.
    Tabulated(Vec<(f64, f64)>),
}

impl RampShape {
    fn check(&self) -> Result<()> {
        if let RampShape::Tabulated(knots) = self {
            let first = knots.first().ok_or(Error::NonMonotoneShape)?;
            let last = knots.last().ok_or(Error::NonMonotoneShape)?;
            if *first != (0.0, 0.0) || *last != (1.0, 1.0) {
                return Err(Error::invalid("shape", "knots must run from (0, 0) to (1, 1)"));
            }
            if knots.windows(2).any(|w| !(w[1].0 > w[0].0) || w[1].1 < w[0].1) {
                return Err(Error::NonMonotoneShape);
            }
        }
        Ok(())
    }

    fn progress(&self, u: f64) -> f64 {
        match self {
            RampShape::Linear => u,
            RampShape::Smoothstep => u * u * (3.0 - 2.0 * u),
            RampShape::Tabulated(knots) => {
                let k = knots.partition_point(|&(x, _)| x <= u).clamp(1, knots.len() - 1);
                let (x0, y0) = knots[k - 1];
                let (x1, y1) = knots[k];
                y0 + (y1 - y0) * (u - x0) / (x1 - x0)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RampSample {
    pub time: f64,
    pub delta: f64,
    pub alpha_in: f64,
}

/// Detuning schedule from `delta_i` to `delta_f` over `duration`, sampled at
/// `steps + 1` evenly spaced times, with the pump following
/// `α_in(t) = α Δ(t)` so the intracavity amplitude stays at `alpha`.
pub fn detuning_ramp(
    delta_i: f64,
    delta_f: f64,
    duration: f64,
    shape: &RampShape,
    steps: usize,
    alpha: f64,
) -> Result<Vec<RampSample>> {
    if !(delta_i < 0.0 && delta_f < 0.0) {
        return Err(Error::NotRedDetuned(delta_i.max(delta_f)));
    }
    if !(duration > 0.0 && duration.is_finite()) {
        return Err(Error::invalid("duration", format!("must be > 0, got {duration}")));
    }
    if steps == 0 {
        return Err(Error::invalid("steps", "need at least one step"));
    }
    shape.check()?;
    Ok((0..=steps)
        .map(|k| {
            let u = k as f64 / steps as f64;
            let s = shape.progress(u);
            let delta = if k == steps {
                delta_f
            } else {
                delta_i + (delta_f - delta_i) * s
            };
            RampSample {
                time: duration * u,
                delta,
                alpha_in: alpha * delta,
            }
        })
        .collect())
}

/// Smallest stability margin met along a schedule at fixed `ω_m`, `G`.
pub fn ramp_min_margin(params: &SystemParams, ramp: &[RampSample]) -> f64 {
    ramp.iter()
        .map(|s| stability_margin(params.omega_m, s.delta, params.coupling))
        .fold(f64::INFINITY, f64::min)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrokeDurations {
    pub tau1: f64,
    pub tau2: f64,
    pub tau3: f64,
    pub tau4: f64,
}

impl StrokeDurations {
    pub fn new(tau1: f64, tau2: f64, tau3: f64, tau4: f64) -> Result<Self> {
        let d = StrokeDurations { tau1, tau2, tau3, tau4 };
        for (name, t) in [("tau1", tau1), ("tau2", tau2), ("tau3", tau3), ("tau4", tau4)] {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::invalid(name, format!("must be positive and finite, got {t}")));
            }
        }
        Ok(d)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    /// `<`: ratio must exceed 1.
    Less,
    /// `≪`: ratio must reach the margin.
    MuchLess,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HierarchyLink {
    pub smaller: String,
    pub larger: String,
    pub relation: Relation,
    /// `larger / smaller`.
    pub ratio: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HierarchyReport {
    pub links: Vec<HierarchyLink>,
    pub margin: f64,
    pub pass: bool,
}

impl std::fmt::Display for HierarchyReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for l in &self.links {
            let op = match l.relation {
                Relation::Less => "<",
                Relation::MuchLess => "<<",
            };
            writeln!(
                f,
                "  {:>6} {:<2} {:<6} ratio {:>10.4e}  {}",
                l.smaller,
                op,
                l.larger,
                l.ratio,
                if l.pass { "ok" } else { "FAIL" }
            )?;
        }
        write!(
            f,
            "  overall: {} (margin {})",
            if self.pass { "pass" } else { "fail" },
            self.margin
        )
    }
}

/// Checks `1/τ₄ < γ ≪ 1/τ₂ < κ < 1/τ₁,₃ ≪ G ≪ ω_m`.
///
/// Ratios involving a duration are formed as products (`γτ₄` rather than
/// `γ/(1/τ₄)`) so that exact decimal inputs land exactly on the margin.
pub fn validate_timescales(params: &SystemParams, durations: &StrokeDurations, margin: f64) -> Result<HierarchyReport> {
    if !(margin >= 1.0 && margin.is_finite()) {
        return Err(Error::invalid("margin", format!("must be ≥ 1, got {margin}")));
    }
    let StrokeDurations { tau1, tau2, tau3, tau4 } = *durations;
    let (gamma, kappa, g, wm) = (params.gamma, params.kappa, params.coupling, params.omega_m);
    let entries = [
        ("1/tau4", "gamma", Relation::Less, gamma * tau4),
        ("gamma", "1/tau2", Relation::MuchLess, 1.0 / (gamma * tau2)),
        ("1/tau2", "kappa", Relation::Less, kappa * tau2),
        ("kappa", "1/tau1", Relation::Less, 1.0 / (kappa * tau1)),
        ("kappa", "1/tau3", Relation::Less, 1.0 / (kappa * tau3)),
        ("1/tau1", "G", Relation::MuchLess, g * tau1),
        ("1/tau3", "G", Relation::MuchLess, g * tau3),
        ("G", "omega_m", Relation::MuchLess, wm / g),
    ];
    let links: Vec<HierarchyLink> = entries
        .into_iter()
        .map(|(smaller, larger, relation, ratio)| {
            let pass = match relation {
                Relation::Less => ratio > 1.0,
                Relation::MuchLess => ratio >= margin,
            };
            HierarchyLink {
                smaller: smaller.to_string(),
                larger: larger.to_string(),
                relation,
                ratio,
                pass,
            }
        })
        .collect();
    let pass = links.iter().all(|l| l.pass);
    Ok(HierarchyReport { links, margin, pass })
}

/// Linewidth estimates `Γ = f_photon κ + f_phonon γ` for `(A, B)`, weighted
/// by each normal mode's overlap with the bare modes.
pub fn polariton_linewidths(params: &SystemParams) -> Result<(f64, f64)> {
    let spectrum = polariton_frequencies(params)?;
    if !spectrum.stable {
        return Err(Error::Unstable {
            margin: spectrum.margin,
        });
    }
    let t = williamson_diagonalize(&quadratic_form(params)?)?;
    let width = |b: Branch| {
        let f = t.photon_fraction(b);
        f * params.kappa + (1.0 - f) * params.gamma
    };
    Ok((width(Branch::UpperA), width(Branch::LowerB)))
}

/// Highest atomic temperature, `(2ħk)²/(2 m k_B)` with `k = ω/c`, at which
/// the thermal momentum spread stays below the two-photon recoil.
pub fn recoil_temperature_limit(photon_frequency: f64, atom_mass: f64) -> Result<f64> {
    if !(photon_frequency > 0.0 && photon_frequency.is_finite()) {
        return Err(Error::invalid(
            "photon_frequency",
            format!("must be > 0, got {photon_frequency}"),
        ));
    }
    if !(atom_mass > 0.0 && atom_mass.is_finite()) {
        return Err(Error::invalid("atom_mass", format!("must be > 0, got {atom_mass}")));
    }
    let k = photon_frequency / SPEED_OF_LIGHT;
    let recoil = 2.0 * HBAR * k;
    Ok(recoil * recoil / (2.0 * atom_mass * K_B))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::{hz_to_angular, LITHIUM_7_MASS};
    use proptest::prelude::*;

    fn reference_params() -> SystemParams {
        let wm = 2e8;
        SystemParams::new(wm, -3.0 * wm, 0.0)
            .with_mean_field(1e5, 1e2)
            .with_damping(1e6, damping_from_quality(wm, 1e5).unwrap())
    }

    fn reference_durations() -> StrokeDurations {
        StrokeDurations::new(3e-7, 1e-5, 3e-7, 1e-3).unwrap()
    }

    #[test]
    fn pump_examples() {
        let p = SystemParams::new(1.0, -3.0, 0.0).with_mean_field(1e5, 1e-5);
        let s = pump_compensation(&p, 1e5, -3.0).unwrap();
        assert_eq!(s.alpha_in, -3e5);
        assert_eq!(s.alpha_in / -3.0, 1e5);
        assert!((s.beta - (-1e-5 * 1e10)).abs() < 1e-9);

        let s = pump_compensation(&p, 0.0, -3.0).unwrap();
        assert_eq!(s.alpha_in, 0.0);
        assert_eq!(s.beta, 0.0);

        let a = pump_compensation(&p, 1e5, -3.0).unwrap().alpha_in;
        let b = pump_compensation(&p, 1e5, -0.1).unwrap().alpha_in;
        assert!((b / a - 0.1 / 3.0).abs() < 1e-15);

        assert!(pump_compensation(&p, 1e5, 0.0).is_err());
        assert_eq!(
            pump_compensation(&SystemParams::new(1.0, -3.0, 0.1), 1.0, -3.0),
            Err(Error::MissingParameter("single_photon_g"))
        );
    }

    #[test]
    fn ramp_examples() {
        let r = detuning_ramp(-3.0, -0.1, 1e-6, &RampShape::Linear, 1, 2.0).unwrap();
        assert_eq!(r.len(), 2);
        assert_eq!(r[0].delta, -3.0);
        assert_eq!(r[1].delta, -0.1);
        assert_eq!(r[1].time, 1e-6);

        let r = detuning_ramp(-3.0, -0.1, 2.0, &RampShape::Linear, 10, 2.0).unwrap();
        assert_eq!(r[5].time, 1.0);
        assert!((r[5].delta - (-1.55)).abs() < 1e-15);

        let bad = RampShape::Tabulated(vec![(0.0, 0.0), (0.5, 0.8), (0.7, 0.6), (1.0, 1.0)]);
        assert_eq!(
            detuning_ramp(-3.0, -0.1, 1.0, &bad, 10, 1.0),
            Err(Error::NonMonotoneShape)
        );
        assert!(detuning_ramp(-3.0, 0.1, 1.0, &RampShape::Linear, 10, 1.0).is_err());
        assert!(detuning_ramp(-3.0, -0.1, 0.0, &RampShape::Linear, 10, 1.0).is_err());
    }

    #[test]
    fn ramp_stays_stable_between_stable_endpoints() {
        let params = SystemParams::new(1.0, -3.0, 0.15);
        assert!(stability_margin(1.0, -0.1, 0.15) > 0.0);
        for shape in [RampShape::Linear, RampShape::Smoothstep] {
            let r = detuning_ramp(-3.0, -0.1, 1.0, &shape, 500, 1.0).unwrap();
            let min = ramp_min_margin(&params, &r);
            assert!(min > 0.0);
            assert_eq!(min, stability_margin(1.0, -0.1, 0.15));
        }
    }

    #[test]
    fn reference_example_hierarchy() {
        let p = reference_params();
        assert_eq!(p.coupling, 1e7);
        assert_eq!(p.gamma, 2e3);
        let report = validate_timescales(&p, &reference_durations(), DEFAULT_MARGIN).unwrap();
        assert!(report.pass, "{report}");
        assert_eq!(report.links.len(), 8);
    }

    #[test]
    fn swapped_damping_fails() {
        let mut p = reference_params();
        std::mem::swap(&mut p.kappa, &mut p.gamma);
        let report = validate_timescales(&p, &reference_durations(), DEFAULT_MARGIN).unwrap();
        assert!(!report.pass);
        // γ ≥ κ breaks the middle chain for every τ₂
        for &tau2 in &[1e-9, 1e-7, 1e-5, 1e-3, 1e-1] {
            let d = StrokeDurations::new(3e-7, tau2, 3e-7, 1e-3).unwrap();
            let r = validate_timescales(&p, &d, DEFAULT_MARGIN).unwrap();
            assert!(!(r.links[1].pass && r.links[2].pass));
        }
    }

    #[test]
    fn unit_margin_is_strict_ordering() {
        let p = SystemParams::new(100.0, -300.0, 20.0).with_damping(2.0, 1.0);
        let d = StrokeDurations::new(1.0 / 5.0, 1.0 / 1.5, 1.0 / 5.0, 1.0 / 0.5).unwrap();
        assert!(validate_timescales(&p, &d, 1.0).unwrap().pass);
        assert!(!validate_timescales(&p, &d, 3.0).unwrap().pass);
        assert!(validate_timescales(&p, &d, 0.5).is_err());
    }

    #[test]
    fn linewidth_examples() {
        let p = SystemParams::new(1.0, -3.0, 0.0).with_damping(0.1, 1e-4);
        let (ga, gb) = polariton_linewidths(&p).unwrap();
        assert!((ga - 0.1).abs() < 1e-14);
        assert!((gb - 1e-4).abs() < 1e-14);

        let p = SystemParams::new(1.0, -1.0, 0.1).with_damping(0.1, 1e-4);
        let (ga, gb) = polariton_linewidths(&p).unwrap();
        let mid = 0.5 * (0.1 + 1e-4);
        assert!((ga - mid).abs() < 0.1 * mid);
        assert!((gb - mid).abs() < 0.1 * mid);

        let bad = SystemParams::new(1.0, -0.1, 0.2).with_damping(0.1, 1e-4);
        assert!(matches!(polariton_linewidths(&bad), Err(Error::Unstable { .. })));
    }

    #[test]
    fn linewidths_continuous_across_crossing() {
        let mut prev: Option<(f64, f64)> = None;
        let n = 2000;
        for i in 0..=n {
            let d = -2.0 + 1.8 * i as f64 / n as f64;
            let p = SystemParams::new(1.0, d, 0.05).with_damping(1.0, 0.0);
            let (ga, gb) = polariton_linewidths(&p).unwrap();
            if let Some((pa, pb)) = prev {
                // weight slope is at most ~1/(2G) per unit detuning
                let bound = 1.8 / n as f64 / 0.05;
                assert!((ga - pa).abs() < bound && (gb - pb).abs() < bound, "d={d}");
            }
            prev = Some((ga, gb));
        }
    }

    #[test]
    fn recoil_examples() {
        let w = hz_to_angular(3e11);
        let t = recoil_temperature_limit(w, 1.1526e-26).unwrap();
        assert!((t - 5.52e-12).abs() < 0.01e-12, "{t}");
        let t7 = recoil_temperature_limit(w, LITHIUM_7_MASS).unwrap();
        assert!((1e-12..1e-11).contains(&t7));
        assert!((recoil_temperature_limit(2.0 * w, 1.1526e-26).unwrap() / t - 4.0).abs() < 1e-12);
        assert!((recoil_temperature_limit(w, 2.0 * 1.1526e-26).unwrap() / t - 0.5).abs() < 1e-12);
        assert!(recoil_temperature_limit(0.0, 1.0).is_err());
        assert!(recoil_temperature_limit(1.0, -1.0).is_err());
    }

    proptest! {
        #[test]
        fn ramp_samples_monotone_and_compensated(
            di in -5.0f64..-1.0, df in -0.9f64..-0.01, alpha in 0.0f64..1e6, steps in 1usize..200,
            smooth in proptest::bool::ANY,
        ) {
            let shape = if smooth { RampShape::Smoothstep } else { RampShape::Linear };
            let r = detuning_ramp(di, df, 1.0, &shape, steps, alpha).unwrap();
            prop_assert_eq!(r.len(), steps + 1);
            for w in r.windows(2) {
                prop_assert!(w[1].delta >= w[0].delta);
                prop_assert!(w[1].time > w[0].time);
            }
            for s in &r {
                prop_assert_eq!(s.alpha_in, alpha * s.delta);
            }
        }

        #[test]
        fn report_pass_iff_all_links(
            k in 1e3f64..1e7, gm in 1e1f64..1e5, g in 1e5f64..1e8,
            t1 in 1e-8f64..1e-5, t2 in 1e-7f64..1e-3, t4 in 1e-5f64..1e-1, margin in 1.0f64..10.0,
        ) {
            let p = SystemParams::new(2e8, -6e8, g).with_damping(k, gm);
            let d = StrokeDurations::new(t1, t2, t1, t4).unwrap();
            let r = validate_timescales(&p, &d, margin).unwrap();
            prop_assert_eq!(r.pass, r.links.iter().all(|l| l.pass));
            for l in &r.links {
                let need = if l.relation == Relation::MuchLess { margin } else { 1.0 };
                prop_assert_eq!(l.pass, if l.relation == Relation::MuchLess { l.ratio >= need } else { l.ratio > need });
            }
        }
    }
}
