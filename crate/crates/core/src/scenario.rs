//! Sweep scenarios and their plain-text file format.
//!
//! One `key = value unit` entry per line, `#` starts a comment. Every
//! dimensional quantity carries its unit:
//!
//! ```text
//! name = optical
//! omega_m = 200 MHz           # Hz-family units are multiplied by 2π; or rad/s
//! delta_i = -3 wm             # multiples of omega_m, or rad/s
//! t_photon = 0 K
//! t_phonon = 0.1 K            # K or mK
//! cavity_frequency = 100 GHz  # optional; needed when t_photon > 0
//! branch = B
//! g_range = 0.01 0.5 wm       # G/omega_m, cell-centred grid
//! deltaf_range = -1 -0.01 wm  # Delta_f/omega_m
//! grid = 200x200              # rows (G) x columns (Delta_f)
//! mask = unstable             # or unstable+non-engine
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::constants::hz_to_angular;
use crate::error::{Error, Result};
use crate::model::{Branch, SystemParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MaskPolicy {
    /// Mask cells where the linearized dynamics are unstable.
    Unstable,
    /// Additionally drop cycle values where the cycle draws no heat.
    UnstableOrNonEngine,
}

impl MaskPolicy {
    fn keyword(self) -> &'static str {
        match self {
            MaskPolicy::Unstable => "unstable",
            MaskPolicy::UnstableOrNonEngine => "unstable+non-engine",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub name: String,
    /// rad/s
    pub omega_m: f64,
    /// rad/s
    pub delta_i: f64,
    pub t_photon: f64,
    pub t_phonon: f64,
    pub cavity_frequency: Option<f64>,
    pub branch: Branch,
    /// `G/ω_m` range.
    pub g_range: (f64, f64),
    /// `Δ_f/ω_m` range.
    pub deltaf_range: (f64, f64),
    /// `(rows, columns)` = (G points, Δ_f points).
    pub grid: (usize, usize),
    pub mask: MaskPolicy,
}

impl Scenario {
    /// Optical cavity on a 200 MHz mechanical mode at 0.1 K, lower branch.
    pub fn optical() -> Self {
        let omega_m = hz_to_angular(200e6);
        Scenario {
            name: "optical".into(),
            omega_m,
            delta_i: -3.0 * omega_m,
            t_photon: 0.0,
            t_phonon: 0.1,
            cavity_frequency: None,
            branch: Branch::LowerB,
            g_range: (0.01, 0.5),
            deltaf_range: (-1.0, -0.01),
            grid: (200, 200),
            mask: MaskPolicy::Unstable,
        }
    }

    /// Microwave cavity in the 2.7 K background with an ultracold collective
    /// mechanical mode; roles of the baths swapped, upper branch.
    pub fn microwave() -> Self {
        let omega_m = hz_to_angular(10e3);
        Scenario {
            name: "microwave".into(),
            omega_m,
            delta_i: -3.0 * omega_m,
            t_photon: 2.7,
            t_phonon: 0.0,
            cavity_frequency: Some(hz_to_angular(100e9)),
            branch: Branch::UpperA,
            g_range: (0.01, 0.5),
            deltaf_range: (-1.0, -0.01),
            grid: (200, 200),
            mask: MaskPolicy::Unstable,
        }
    }

    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "optical" => Some(Self::optical()),
            "microwave" => Some(Self::microwave()),
            _ => None,
        }
    }

    /// A preset name or a path to a scenario file.
    pub fn resolve(spec: &str) -> Result<Self> {
        if let Some(s) = Self::preset(spec) {
            return Ok(s);
        }
        Self::from_path(Path::new(spec))
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut s = Scenario::optical();
        s.name = "custom".into();
        let mut seen_omega = false;
        // (value, is_ratio)
        let mut delta_i: Option<(f64, bool)> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let err = |reason: String| Error::Scenario { line: line_no, reason };
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err("expected `key = value`".into()))?;
            let key = key.trim();
            let tokens: Vec<&str> = value.split_whitespace().collect();
            if tokens.is_empty() {
                return Err(err(format!("`{key}` has no value")));
            }
            match key {
                "name" => s.name = tokens.join(" "),
                "omega_m" => {
                    s.omega_m = frequency(&tokens).map_err(err)?;
                    seen_omega = true;
                }
                "delta_i" => {
                    delta_i = Some(match tokens.as_slice() {
                        [v, "wm"] => (number(v).map_err(err)?, true),
                        _ => (frequency(&tokens).map_err(err)?, false),
                    })
                }
                "t_photon" => s.t_photon = temperature(&tokens).map_err(err)?,
                "t_phonon" => s.t_phonon = temperature(&tokens).map_err(err)?,
                "cavity_frequency" => s.cavity_frequency = Some(frequency(&tokens).map_err(err)?),
                "branch" => s.branch = tokens[0].parse().map_err(|e: Error| err(e.to_string()))?,
                "g_range" => s.g_range = ratio_range(&tokens).map_err(err)?,
                "deltaf_range" => s.deltaf_range = ratio_range(&tokens).map_err(err)?,
                "grid" => s.grid = parse_grid(tokens[0]).map_err(err)?,
                "mask" => {
                    s.mask = match tokens[0] {
                        "unstable" => MaskPolicy::Unstable,
                        "unstable+non-engine" => MaskPolicy::UnstableOrNonEngine,
                        other => return Err(err(format!("unknown mask policy `{other}`"))),
                    }
                }
                other => return Err(err(format!("unknown key `{other}`"))),
            }
        }
        if !seen_omega {
            return Err(Error::Scenario {
                line: 0,
                reason: "`omega_m` is required".into(),
            });
        }
        s.delta_i = match delta_i {
            Some((v, true)) => v * s.omega_m,
            Some((v, false)) => v,
            None => -3.0 * s.omega_m,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |reason: String| Error::Scenario { line: 0, reason };
        if !(self.omega_m > 0.0 && self.omega_m.is_finite()) {
            return Err(bad("omega_m must be > 0".into()));
        }
        if !(self.delta_i < 0.0) {
            return Err(bad("delta_i must be < 0".into()));
        }
        if !(self.t_photon >= 0.0 && self.t_phonon >= 0.0) {
            return Err(bad("temperatures must be ≥ 0".into()));
        }
        if self.t_photon > 0.0 && self.cavity_frequency.is_none() {
            return Err(bad("cavity_frequency is required when t_photon > 0".into()));
        }
        let (g0, g1) = self.g_range;
        if !(g0 >= 0.0 && g1 > g0) {
            return Err(bad(format!("g_range must satisfy 0 ≤ lo < hi, got {g0} {g1}")));
        }
        let (d0, d1) = self.deltaf_range;
        if !(d0 < d1 && d1 < 0.0) {
            return Err(bad(format!("deltaf_range must satisfy lo < hi < 0, got {d0} {d1}")));
        }
        if self.delta_i / self.omega_m >= d0 {
            return Err(bad("delta_i must lie below the whole deltaf_range".into()));
        }
        if self.grid.0 < 2 || self.grid.1 < 2 {
            return Err(bad(format!("grid resolutions must be ≥ 2, got {:?}", self.grid)));
        }
        Ok(())
    }

    /// Operating point at a given `G/ω_m`, detuned at `delta_i`.
    pub fn params(&self, g_over_wm: f64) -> SystemParams {
        let mut p = SystemParams::new(self.omega_m, self.delta_i, g_over_wm * self.omega_m)
            .with_baths(self.t_photon, self.t_phonon);
        p.cavity_frequency = self.cavity_frequency;
        p
    }

    /// Cell-centre coordinates `(G/ω_m, Δ_f/ω_m)`, ascending.
    pub fn axes(&self) -> (Vec<f64>, Vec<f64>) {
        (
            cell_centres(self.g_range, self.grid.0),
            cell_centres(self.deltaf_range, self.grid.1),
        )
    }

    /// Canonical text form; parses back to the same scenario.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "name = {}\nomega_m = {:e} rad/s\ndelta_i = {:e} rad/s\nt_photon = {:e} K\nt_phonon = {:e} K\n",
            self.name, self.omega_m, self.delta_i, self.t_photon, self.t_phonon
        );
        if let Some(wc) = self.cavity_frequency {
            out += &format!("cavity_frequency = {wc:e} rad/s\n");
        }
        out += &format!(
            "branch = {}\ng_range = {:e} {:e} wm\ndeltaf_range = {:e} {:e} wm\ngrid = {}x{}\nmask = {}\n",
            self.branch,
            self.g_range.0,
            self.g_range.1,
            self.deltaf_range.0,
            self.deltaf_range.1,
            self.grid.0,
            self.grid.1,
            self.mask.keyword()
        );
        out
    }
}

pub fn cell_centres((lo, hi): (f64, f64), n: usize) -> Vec<f64> {
    let step = (hi - lo) / n as f64;
    (0..n).map(|i| lo + (i as f64 + 0.5) * step).collect()
}

/// Parses `NxM`.
pub fn parse_grid(s: &str) -> std::result::Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("grid must look like NxM, got `{s}`"))?;
    let n = a.trim().parse().map_err(|_| format!("bad grid size `{a}`"))?;
    let m = b.trim().parse().map_err(|_| format!("bad grid size `{b}`"))?;
    Ok((n, m))
}

fn number(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

fn frequency(tokens: &[&str]) -> std::result::Result<f64, String> {
    let [v, unit] = tokens else {
        return Err("expected `<value> <unit>` with unit rad/s, Hz, kHz, MHz or GHz".into());
    };
    let v = number(v)?;
    match *unit {
        "rad/s" => Ok(v),
        "Hz" => Ok(hz_to_angular(v)),
        "kHz" => Ok(hz_to_angular(v * 1e3)),
        "MHz" => Ok(hz_to_angular(v * 1e6)),
        "GHz" => Ok(hz_to_angular(v * 1e9)),
        other => Err(format!("unknown frequency unit `{other}`")),
    }
}

fn temperature(tokens: &[&str]) -> std::result::Result<f64, String> {
    match tokens {
        [v, "K"] => number(v),
        [v, "mK"] => Ok(number(v)? * 1e-3),
        _ => Err("expected `<value> K` or `<value> mK`".into()),
    }
}

fn ratio_range(tokens: &[&str]) -> std::result::Result<(f64, f64), String> {
    match tokens {
        [a, b, "wm"] => Ok((number(a)?, number(b)?)),
        _ => Err("expected `<lo> <hi> wm`".into()),
    }
}
