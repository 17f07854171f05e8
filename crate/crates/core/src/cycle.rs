//! Otto-cycle energetics on a single polariton branch.
//!
//! Stage energies are `E₁ = ħω_i N_i`, `E₂ = ħω_f N_i`, `E₃ = ħω_f N_f`,
//! `E₄ = ħω_i N_f`; the work per cycle is `E₁ − E₂ + E₃ − E₄` and the heat
//! drawn from the hot bath during the last stroke is `E₁ − E₄`.

use serde::{Deserialize, Serialize};

use crate::constants::{HBAR, K_B};
use crate::error::{Error, Result};
use crate::gaussian::{polariton_occupations, quadratic_form, thermal_covariance, williamson_diagonalize};
use crate::model::{polariton_frequencies, Branch, SystemParams};

/// Below this photon (or phonon) weight on the bare mode the working branch
/// should resemble at the final detuning, the cell is flagged as strongly
/// hybridized.
pub const HYBRIDIZATION_THRESHOLD: f64 = 0.9;

/// `ħω/(k_B T)` above which the high-temperature formulas are flagged.
pub const HIGH_TEMPERATURE_LIMIT: f64 = 0.2;

/// Bose-Einstein occupation `1/(exp(ħω/k_BT) − 1)`.
pub fn bose_occupation(omega: f64, temperature: f64) -> Result<f64> {
    if !(omega.is_finite() && omega > 0.0) {
        return Err(Error::invalid("omega", format!("must be > 0, got {omega}")));
    }
    if !(temperature >= 0.0) {
        return Err(Error::invalid("temperature", format!("must be ≥ 0, got {temperature}")));
    }
    if temperature == 0.0 {
        return Ok(0.0);
    }
    Ok(bose_from_ratio(HBAR * omega / (K_B * temperature)))
}

/// Occupation as a function of `x = ħω/k_BT`.
pub fn bose_from_ratio(x: f64) -> f64 {
    if x < 1e-6 {
        // Laurent series 1/x − 1/2 + x/12
        1.0 / x - 0.5 + x / 12.0
    } else {
        1.0 / x.exp_m1()
    }
}

/// Cycle endpoints: the same operating point at two detunings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CycleConfig {
    pub params_initial: SystemParams,
    pub params_final: SystemParams,
    pub branch: Branch,
}

impl CycleConfig {
    pub fn new(base: SystemParams, delta_i: f64, delta_f: f64, branch: Branch) -> Self {
        CycleConfig {
            params_initial: base.with_detuning(delta_i),
            params_final: base.with_detuning(delta_f),
            branch,
        }
    }

    fn validate(&self) -> Result<()> {
        let (a, b) = (&self.params_initial, &self.params_final);
        a.validate()?;
        b.validate()?;
        if a.with_detuning(b.delta) != *b {
            return Err(Error::MismatchedEndpoints("only the detuning may change"));
        }
        if !(a.delta < b.delta) {
            return Err(Error::DetuningOrder {
                delta_i: a.delta,
                delta_f: b.delta,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CycleResult {
    pub branch: Branch,
    pub omega_i: f64,
    pub omega_f: f64,
    pub n_i: f64,
    pub n_f: f64,
    pub e1: f64,
    pub e2: f64,
    pub e3: f64,
    pub e4: f64,
    pub work: f64,
    pub heat_in: f64,
    pub efficiency: f64,
    /// The working branch is far from pure character at the final detuning.
    pub hybridization_warning: bool,
}

impl CycleResult {
    /// Assembles the stage energies from endpoint frequencies and occupations.
    pub fn from_endpoints(branch: Branch, omega_i: f64, omega_f: f64, n_i: f64, n_f: f64) -> Self {
        let e1 = HBAR * omega_i * n_i;
        let e2 = HBAR * omega_f * n_i;
        let e3 = HBAR * omega_f * n_f;
        let e4 = HBAR * omega_i * n_f;
        CycleResult {
            branch,
            omega_i,
            omega_f,
            n_i,
            n_f,
            e1,
            e2,
            e3,
            e4,
            work: e1 - e2 + e3 - e4,
            heat_in: e1 - e4,
            efficiency: 1.0 - omega_f / omega_i,
            hybridization_warning: false,
        }
    }

    /// Heat released to the cold bath, `E₂ − E₃`.
    pub fn heat_out(&self) -> f64 {
        self.e2 - self.e3
    }

    /// Whether the cycle delivers heat-to-work conversion (`Q > 0`).
    pub fn is_engine(&self) -> bool {
        self.heat_in > 0.0
    }

    pub fn work_in_quanta(&self, omega_m: f64) -> f64 {
        self.work / (HBAR * omega_m)
    }

    pub fn heat_in_quanta(&self, omega_m: f64) -> f64 {
        self.heat_in / (HBAR * omega_m)
    }
}

/// Bath occupations `(n_a, n_b)`: the cavity bath at the bare cavity
/// frequency and the mechanical bath at `ω_m`.
pub fn bath_occupations(params: &SystemParams) -> Result<(f64, f64)> {
    let n_a = if params.t_photon > 0.0 {
        let wc = params
            .cavity_frequency
            .ok_or(Error::MissingParameter("cavity_frequency"))?;
        bose_occupation(wc, params.t_photon)?
    } else {
        0.0
    };
    let n_b = bose_occupation(params.omega_m, params.t_phonon)?;
    Ok((n_a, n_b))
}

/// Branch frequency, thermal occupation and hybridization weight at one
/// detuning, with both baths at their nominal temperatures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EndpointState {
    pub omega: f64,
    pub occupation: f64,
    pub photon_fraction: f64,
}

pub fn endpoint_state(params: &SystemParams, branch: Branch) -> Result<EndpointState> {
    let spectrum = polariton_frequencies(params)?;
    if !spectrum.stable {
        return Err(Error::Unstable {
            margin: spectrum.margin,
        });
    }
    let transform = williamson_diagonalize(&quadratic_form(params)?)?;
    let (n_a, n_b) = bath_occupations(params)?;
    let occ = polariton_occupations(&transform, &thermal_covariance(n_a, n_b)?)?;
    Ok(EndpointState {
        omega: spectrum.frequency(branch),
        occupation: match branch {
            Branch::UpperA => occ.0,
            Branch::LowerB => occ.1,
        },
        photon_fraction: transform.photon_fraction(branch),
    })
}

/// Whether `branch` turns into the bare cavity mode as `G → 0` at `params`.
fn connects_to_photon(params: &SystemParams, branch: Branch) -> bool {
    let upper_is_photon = params.delta.abs() >= params.omega_m;
    match branch {
        Branch::UpperA => upper_is_photon,
        Branch::LowerB => !upper_is_photon,
    }
}

/// Ideal Otto cycle along one branch, with full thermal equilibrium at
/// each endpoint.
pub fn otto_cycle(config: &CycleConfig) -> Result<CycleResult> {
    config.validate()?;
    let start = endpoint_state(&config.params_initial, config.branch)?;
    let end = endpoint_state(&config.params_final, config.branch)?;
    let mut result =
        CycleResult::from_endpoints(config.branch, start.omega, end.omega, start.occupation, end.occupation);
    let character = if connects_to_photon(&config.params_final, config.branch) {
        end.photon_fraction
    } else {
        1.0 - end.photon_fraction
    };
    result.hybridization_warning = character < HYBRIDIZATION_THRESHOLD;
    Ok(result)
}

/// Value from a formula with a validity regime, plus a note when the inputs
/// leave that regime.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub warning: Option<String>,
}

/// Small-coupling work per cycle in joules, for an empty photon bath:
///
/// `W/ħω_m = (Δ_f/ω_m + 2G²/ω_m² + 1)·[(1 − 2G²/ω_m²) n_b − G²/ω_m²]`.
pub fn perturbative_work(omega_m: f64, coupling: f64, delta_f: f64, n_a: f64, n_b: f64) -> Result<Estimate> {
    check_omega_m(omega_m)?;
    if delta_f >= 0.0 {
        return Err(Error::NotRedDetuned(delta_f));
    }
    if n_a != 0.0 {
        return Err(Error::NonzeroPhotonOccupation(n_a));
    }
    let g2 = (coupling / omega_m).powi(2);
    let d = delta_f / omega_m;
    let quanta = (d + 2.0 * g2 + 1.0) * ((1.0 - 2.0 * g2) * n_b - g2);
    let mut warning = None;
    if coupling / omega_m > 0.2 || -d > 0.5 {
        warning = Some(format!(
            "outside the small-parameter regime (G/ω_m = {:.3}, −Δ_f/ω_m = {:.3})",
            coupling / omega_m,
            -d
        ));
    }
    Ok(Estimate {
        value: quanta * HBAR * omega_m,
        warning,
    })
}

/// Small-coupling final frequency `−Δ_f − 2G²/ω_m`.
pub fn perturbative_final_frequency(omega_m: f64, coupling: f64, delta_f: f64) -> f64 {
    -delta_f - 2.0 * coupling * coupling / omega_m
}

/// Small-coupling occupations `(N_i, N_f)`:
/// `N_i = n_b`, `N_f = (1 + 4Δ_fG²/ω_m³) n_a + 2G² n_b/ω_m²`.
pub fn perturbative_occupations(omega_m: f64, coupling: f64, delta_f: f64, n_a: f64, n_b: f64) -> (f64, f64) {
    let g2 = (coupling / omega_m).powi(2);
    let n_f = (1.0 + 4.0 * delta_f / omega_m * g2) * n_a + 2.0 * g2 * n_b;
    (n_b, n_f)
}

fn check_omega_m(omega_m: f64) -> Result<()> {
    if omega_m.is_finite() && omega_m > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid("omega_m", format!("must be > 0, got {omega_m}")))
    }
}

fn high_temperature_ratio(omega_m: f64, delta_f: f64, t_phonon: f64) -> Result<f64> {
    check_omega_m(omega_m)?;
    if delta_f >= 0.0 {
        return Err(Error::NotRedDetuned(delta_f));
    }
    if !(t_phonon > 0.0) {
        return Err(Error::invalid("t_phonon", format!("must be > 0, got {t_phonon}")));
    }
    Ok(HBAR * omega_m / (K_B * t_phonon))
}

fn regime_warning(x: f64) -> Option<String> {
    (x > HIGH_TEMPERATURE_LIMIT)
        .then(|| format!("ħω_m/k_BT_b = {x:.3} exceeds the high-temperature limit {HIGH_TEMPERATURE_LIMIT}"))
}

/// Coupling maximizing the small-coupling work in the high-temperature limit,
/// `G* = ω_m √(−Δ_f/(4ω_m) − ħω_m/(8k_BT_b))`.
pub fn optimal_coupling(omega_m: f64, delta_f: f64, t_phonon: f64) -> Result<Estimate> {
    let x = high_temperature_ratio(omega_m, delta_f, t_phonon)?;
    let radicand = -delta_f / (4.0 * omega_m) - x / 8.0;
    if radicand <= 0.0 {
        return Err(Error::NoInteriorMaximum(radicand));
    }
    Ok(Estimate {
        value: omega_m * radicand.sqrt(),
        warning: regime_warning(x),
    })
}

/// Efficiency at maximum work, `1 − (−Δ_f/ω_m + ħω_m/(4k_BT_b))`.
pub fn efficiency_at_max_work(omega_m: f64, delta_f: f64, t_phonon: f64) -> Result<Estimate> {
    let x = high_temperature_ratio(omega_m, delta_f, t_phonon)?;
    Ok(Estimate {
        value: 1.0 - (-delta_f / omega_m + x / 4.0),
        warning: regime_warning(x),
    })
}

/// `1 − ω_f/ω_m` with the small-coupling `ω_f = −Δ_f − 2G²/ω_m` evaluated at
/// `G*`: `1 − (−Δ_f/(2ω_m) + ħω_m/(4k_BT_b))`. By the AM-GM inequality this
/// never exceeds the Curzon-Ahlborn bound and touches it when
/// `−Δ_f/ω_m = ħω_m/(2k_BT_b)`.
pub fn efficiency_at_optimal_coupling(omega_m: f64, delta_f: f64, t_phonon: f64) -> Result<Estimate> {
    let g = optimal_coupling(omega_m, delta_f, t_phonon)?;
    let wf = perturbative_final_frequency(omega_m, g.value, delta_f);
    Ok(Estimate {
        value: 1.0 - wf / omega_m,
        warning: g.warning,
    })
}

/// Upper bounds on the efficiency: `(1 − √z, 1 − z)` with
/// `z = ħ|Δ_f|/(2k_BT_b)`. The first is the quantum Curzon-Ahlborn form, the
/// second the Carnot value with the cold bath at the zero-point energy of
/// the final photonlike mode.
pub fn efficiency_bounds(delta_f: f64, t_phonon: f64) -> Result<(f64, f64)> {
    if delta_f >= 0.0 {
        return Err(Error::NotRedDetuned(delta_f));
    }
    if !(t_phonon > 0.0) {
        return Err(Error::invalid("t_phonon", format!("must be > 0, got {t_phonon}")));
    }
    let z = HBAR * delta_f.abs() / (2.0 * K_B * t_phonon);
    Ok((1.0 - z.sqrt(), 1.0 - z))
}
