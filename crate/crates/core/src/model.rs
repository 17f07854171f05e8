//! Physical operating point and the closed-form polariton spectrum.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Polariton branch label. `UpperA` is the higher-frequency normal mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    UpperA,
    LowerB,
}

impl Branch {
    /// Index of the branch in frequency-descending order.
    pub fn index(self) -> usize {
        match self {
            Branch::UpperA => 0,
            Branch::LowerB => 1,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Branch::UpperA => 'A',
            Branch::LowerB => 'B',
        }
    }
}

impl std::str::FromStr for Branch {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "A" | "a" | "upper" | "UpperA" => Ok(Branch::UpperA),
            "B" | "b" | "lower" | "LowerB" => Ok(Branch::LowerB),
            other => Err(Error::invalid("branch", format!("expected A or B, got `{other}`"))),
        }
    }
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// Linearized optomechanical operating point.
///
/// Frequencies and rates are angular (rad/s), temperatures in kelvin.
/// `delta` is the effective detuning including the radiation-pressure shift;
/// `coupling` is the mean-field enhanced coupling `G = α g`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    pub omega_m: f64,
    pub delta: f64,
    pub coupling: f64,
    pub kappa: f64,
    pub gamma: f64,
    pub t_photon: f64,
    pub t_phonon: f64,
    pub single_photon_g: Option<f64>,
    pub mean_field: Option<f64>,
    /// Bare cavity frequency; sets the photon-bath occupation when
    /// `t_photon > 0`.
    pub cavity_frequency: Option<f64>,
}

impl SystemParams {
    /// Lossless operating point with both baths at zero temperature.
    pub fn new(omega_m: f64, delta: f64, coupling: f64) -> Self {
        SystemParams {
            omega_m,
            delta,
            coupling,
            kappa: 0.0,
            gamma: 0.0,
            t_photon: 0.0,
            t_phonon: 0.0,
            single_photon_g: None,
            mean_field: None,
            cavity_frequency: None,
        }
    }

    pub fn with_damping(mut self, kappa: f64, gamma: f64) -> Self {
        self.kappa = kappa;
        self.gamma = gamma;
        self
    }

    pub fn with_baths(mut self, t_photon: f64, t_phonon: f64) -> Self {
        self.t_photon = t_photon;
        self.t_phonon = t_phonon;
        self
    }

    pub fn with_cavity_frequency(mut self, omega_c: f64) -> Self {
        self.cavity_frequency = Some(omega_c);
        self
    }

    /// Sets `α` and `g` and the derived coupling `G = α g`.
    pub fn with_mean_field(mut self, mean_field: f64, single_photon_g: f64) -> Self {
        self.mean_field = Some(mean_field);
        self.single_photon_g = Some(single_photon_g);
        self.coupling = mean_field * single_photon_g;
        self
    }

    pub fn with_detuning(mut self, delta: f64) -> Self {
        self.delta = delta;
        self
    }

    pub fn with_coupling(mut self, coupling: f64) -> Self {
        self.coupling = coupling;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega_m.is_finite() && self.omega_m > 0.0) {
            return Err(Error::invalid(
                "omega_m",
                format!("must be finite and > 0, got {}", self.omega_m),
            ));
        }
        if !self.delta.is_finite() {
            return Err(Error::invalid("delta", "must be finite"));
        }
        if self.delta >= 0.0 {
            return Err(Error::NotRedDetuned(self.delta));
        }
        let non_negative = [
            ("coupling", self.coupling),
            ("kappa", self.kappa),
            ("gamma", self.gamma),
            ("t_photon", self.t_photon),
            ("t_phonon", self.t_phonon),
        ];
        for (name, value) in non_negative {
            if !(value.is_finite() && value >= 0.0) {
                return Err(Error::invalid(name, format!("must be finite and ≥ 0, got {value}")));
            }
        }
        if let Some(wc) = self.cavity_frequency {
            if !(wc.is_finite() && wc > 0.0) {
                return Err(Error::invalid("cavity_frequency", format!("must be > 0, got {wc}")));
            }
        }
        if let (Some(g), Some(alpha)) = (self.single_photon_g, self.mean_field) {
            let expected = alpha * g;
            let scale = expected.abs().max(self.coupling.abs()).max(f64::MIN_POSITIVE);
            if (self.coupling - expected).abs() > 1e-12 * scale {
                return Err(Error::invalid(
                    "coupling",
                    format!("G = {} disagrees with α·g = {expected}", self.coupling),
                ));
            }
        }
        Ok(())
    }
}

/// Normal-mode frequencies of the coupled photon-phonon system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolaritonSpectrum {
    pub omega_a: f64,
    /// Zero when `stable` is false.
    pub omega_b: f64,
    pub stable: bool,
    /// `1 − 4G²/(|Δ| ω_m)`.
    pub margin: f64,
}

impl PolaritonSpectrum {
    pub fn frequency(&self, branch: Branch) -> f64 {
        match branch {
            Branch::UpperA => self.omega_a,
            Branch::LowerB => self.omega_b,
        }
    }

    pub fn splitting(&self) -> f64 {
        self.omega_a - self.omega_b
    }
}

/// Stability of the linearized dynamics and its margin `1 − 4G²/(|Δ|ω_m)`.
///
/// The lower branch frequency squared has the sign of `|Δ|ω_m − 4G²`, so the
/// margin is positive exactly when the system is stable. The boundary itself
/// (margin = 0) is classified unstable.
pub fn stability_classification(params: &SystemParams) -> Result<(bool, f64)> {
    params.validate()?;
    let margin = stability_margin(params.omega_m, params.delta, params.coupling);
    Ok((margin > 0.0, margin))
}

pub(crate) fn stability_margin(omega_m: f64, delta: f64, coupling: f64) -> f64 {
    1.0 - 4.0 * coupling * coupling / (delta.abs() * omega_m)
}

/// Polariton branch frequencies
///
/// `ω²_{A,B} = [Δ² + ω_m² ± √((Δ² − ω_m²)² − 16 G² Δ ω_m)] / 2`.
///
/// The upper root is evaluated directly. The lower root uses the product
/// `ω_A² ω_B² = Δ² ω_m² + 4G²Δω_m`, which is the same expression without the
/// cancellation that the difference form suffers near the stability boundary.
pub fn polariton_frequencies(params: &SystemParams) -> Result<PolaritonSpectrum> {
    let (stable, margin) = stability_classification(params)?;
    let (wm, d, g) = (params.omega_m, params.delta, params.coupling);
    if g == 0.0 {
        return Ok(PolaritonSpectrum {
            omega_a: d.abs().max(wm),
            omega_b: d.abs().min(wm),
            stable,
            margin,
        });
    }
    let d2 = d * d;
    let wm2 = wm * wm;
    let disc = (d2 - wm2).powi(2) - 16.0 * g * g * d * wm;
    let omega_a_sq = 0.5 * (d2 + wm2 + disc.sqrt());
    let omega_a = omega_a_sq.sqrt();
    let omega_b = if stable {
        let product = (d.abs() * wm).powi(2) * margin;
        (product / omega_a_sq).sqrt()
    } else {
        0.0
    };
    Ok(PolaritonSpectrum {
        omega_a,
        omega_b,
        stable,
        margin,
    })
}

/// Lower-branch frequency from the textbook difference form of the spectrum.
///
/// Kept as an independent route for cross-checks; it loses relative accuracy
/// close to the stability boundary. Returns the signed `ω_B²`.
pub fn lower_branch_squared_direct(omega_m: f64, delta: f64, coupling: f64) -> f64 {
    let d2 = delta * delta;
    let wm2 = omega_m * omega_m;
    let disc = (d2 - wm2).powi(2) - 16.0 * coupling * coupling * delta * omega_m;
    0.5 * (d2 + wm2 - disc.sqrt())
}
