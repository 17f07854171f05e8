//! Two-mode Gaussian machinery in quadrature space.
//!
//! Quadratures are ordered `r = (x_a, p_a, x_b, p_b)` with `[x, p] = i`, so
//! that `a = (x + i p)/√2`. The vacuum covariance is `I/2`. Index 0 of every
//! normal-mode quantity is the upper branch A, index 1 the lower branch B.

use nalgebra::{Matrix4, SymmetricEigen, Vector4};

use crate::error::{Error, Result};
use crate::model::{Branch, SystemParams};

/// Standard symplectic form `Ω = ⊕ [[0, 1], [−1, 0]]`.
pub fn symplectic_form() -> Matrix4<f64> {
    let mut om = Matrix4::zeros();
    om[(0, 1)] = 1.0;
    om[(1, 0)] = -1.0;
    om[(2, 3)] = 1.0;
    om[(3, 2)] = -1.0;
    om
}

/// Hamiltonian `H = (ħ/2) rᵀ M r` (constant terms dropped).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticForm {
    pub matrix: Matrix4<f64>,
}

impl QuadraticForm {
    pub fn new(matrix: Matrix4<f64>) -> Result<Self> {
        let scale = matrix.amax().max(f64::MIN_POSITIVE);
        if (matrix - matrix.transpose()).amax() > 1e-12 * scale {
            return Err(Error::invalid("matrix", "quadratic form must be symmetric"));
        }
        Ok(QuadraticForm { matrix })
    }

    pub fn is_positive_definite(&self) -> bool {
        self.matrix.cholesky().is_some()
    }
}

/// Symplectic transform to the normal modes, `r' = S r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BogoliubovTransform {
    pub symplectic: Matrix4<f64>,
    /// Symplectic eigenvalues `(ν_A, ν_B)`, descending.
    pub frequencies: (f64, f64),
}

/// Two-mode covariance matrix, `V_ij = ½⟨{Δr_i, Δr_j}⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianState {
    pub covariance: Matrix4<f64>,
}

impl GaussianState {
    /// Checks `V + iΩ/2 ≥ 0` via the symplectic spectrum of `V` (every
    /// symplectic eigenvalue must be at least ½).
    pub fn is_physical(&self, tol: f64) -> bool {
        let v = &self.covariance;
        if (v - v.transpose()).amax() > tol {
            return false;
        }
        match williamson(v) {
            Ok((_, nu)) => nu[1] >= 0.5 - tol,
            Err(_) => false,
        }
    }
}

/// Quadrature matrix of the linearized Hamiltonian.
///
/// `−Δ a†a` and `ω_m b†b` become `|Δ|(x_a² + p_a²)/2` and `ω_m(x_b² + p_b²)/2`;
/// `G(a + a†)(b + b†) = 2G x_a x_b`, so only the x-x off-diagonal is non-zero.
pub fn quadratic_form(params: &SystemParams) -> Result<QuadraticForm> {
    params.validate()?;
    let d = params.delta.abs();
    let wm = params.omega_m;
    let mut m = Matrix4::from_diagonal(&Vector4::new(d, d, wm, wm));
    m[(0, 2)] = 2.0 * params.coupling;
    m[(2, 0)] = 2.0 * params.coupling;
    Ok(QuadraticForm { matrix: m })
}

/// Williamson normal form: `S⁻ᵀ M S⁻¹ = diag(ν_A, ν_A, ν_B, ν_B)`.
///
/// Each normal-mode row pair is rotated within its own phase space so that
/// the mode's x quadrature carries no momentum of the bare mode it turns into
/// as `G → 0`, and has positive overlap with that bare mode's x quadrature.
/// The upper mode connects to whichever bare mode has the larger diagonal
/// frequency (the cavity on ties).
pub fn williamson_diagonalize(form: &QuadraticForm) -> Result<BogoliubovTransform> {
    let (mut s, nu) = williamson(&form.matrix)?;
    let m = &form.matrix;
    let photon_freq = 0.5 * (m[(0, 0)] + m[(1, 1)]);
    let phonon_freq = 0.5 * (m[(2, 2)] + m[(3, 3)]);
    let upper_bare = if photon_freq >= phonon_freq { 0 } else { 1 };
    for k in 0..2 {
        let bare = if k == 0 { upper_bare } else { 1 - upper_bare };
        fix_phase(&mut s, k, bare);
    }
    Ok(BogoliubovTransform {
        symplectic: s,
        frequencies: (nu[0], nu[1]),
    })
}

/// Unphased Williamson decomposition of a positive-definite matrix.
///
/// With `K = M^{1/2} Ω M^{1/2}` (antisymmetric), an orthogonal `O` bringing
/// `K` to `⊕ ν_k J` gives `S = D^{-1/2} Oᵀ M^{1/2}`. The columns of `O` come
/// in pairs `(o, −K o / ν)` where `o` is an eigenvector of `KᵀK` (eigenvalue
/// `ν²`, doubly degenerate).
fn williamson(m: &Matrix4<f64>) -> Result<(Matrix4<f64>, [f64; 2])> {
    let eig = SymmetricEigen::new(*m);
    let scale = eig.eigenvalues.amax();
    if !scale.is_finite() || eig.eigenvalues.iter().any(|&l| l <= 1e-14 * scale) {
        return Err(Error::NotPositiveDefinite);
    }
    let root =
        eig.eigenvectors * Matrix4::from_diagonal(&eig.eigenvalues.map(f64::sqrt)) * eig.eigenvectors.transpose();
    let k = root * symplectic_form() * root;
    let gram = SymmetricEigen::new(k.transpose() * k);

    let mut order: Vec<usize> = (0..4).collect();
    order.sort_by(|&i, &j| gram.eigenvalues[j].total_cmp(&gram.eigenvalues[i]));

    let mut basis: Vec<Vector4<f64>> = Vec::with_capacity(4);
    let mut nu = [0.0; 2];
    for (pair, slot) in nu.iter_mut().enumerate() {
        // upper pair from the top of the spectrum, lower pair from the bottom
        let candidates: Vec<usize> = if pair == 0 {
            order.clone()
        } else {
            order.iter().rev().copied().collect()
        };
        let mut chosen = None;
        for idx in candidates {
            let mut v: Vector4<f64> = gram.eigenvectors.column(idx).into_owned();
            for b in &basis {
                v -= *b * b.dot(&v);
            }
            let norm = v.norm();
            if norm > 0.5 {
                chosen = Some(v / norm);
                break;
            }
        }
        let o1 = chosen.ok_or(Error::NotPositiveDefinite)?;
        let ko = k * o1;
        let freq = ko.norm();
        let o2 = -ko / freq;
        basis.push(o1);
        basis.push(o2);
        *slot = freq;
    }

    let o = Matrix4::from_columns(&basis);
    let d_inv_sqrt = Vector4::new(nu[0], nu[0], nu[1], nu[1]).map(|v| 1.0 / v.sqrt());
    let s = Matrix4::from_diagonal(&d_inv_sqrt) * o.transpose() * root;
    Ok((s, nu))
}

fn fix_phase(s: &mut Matrix4<f64>, mode: usize, bare: usize) {
    let (rx, rp) = (2 * mode, 2 * mode + 1);
    let (cx, cp) = (2 * bare, 2 * bare + 1);
    let (mut c, mut sn) = (s[(rp, cp)], -s[(rx, cp)]);
    let norm = c.hypot(sn);
    if norm > 1e-300 {
        c /= norm;
        sn /= norm;
    } else {
        c = 1.0;
        sn = 0.0;
    }
    if c * s[(rx, cx)] + sn * s[(rp, cx)] < 0.0 {
        c = -c;
        sn = -sn;
    }
    for col in 0..4 {
        let x = s[(rx, col)];
        let p = s[(rp, col)];
        s[(rx, col)] = c * x + sn * p;
        s[(rp, col)] = -sn * x + c * p;
    }
    // the p row inherits any residual x_bare component; no further constraint
}

impl BogoliubovTransform {
    pub fn inverse(&self) -> Matrix4<f64> {
        let om = symplectic_form();
        -(om * self.symplectic.transpose() * om)
    }

    /// Entrywise deviation of `S Ω Sᵀ` from `Ω`.
    pub fn symplectic_error(&self) -> f64 {
        let om = symplectic_form();
        (self.symplectic * om * self.symplectic.transpose() - om).amax()
    }

    pub fn frequency(&self, branch: Branch) -> f64 {
        match branch {
            Branch::UpperA => self.frequencies.0,
            Branch::LowerB => self.frequencies.1,
        }
    }

    /// Photon fraction of a normal mode: squared overlaps of its columns of
    /// `S⁻¹` onto the cavity quadratures, normalized by the total.
    pub fn photon_fraction(&self, branch: Branch) -> f64 {
        let inv = self.inverse();
        let k = branch.index();
        let mut photon = 0.0;
        let mut total = 0.0;
        for col in [2 * k, 2 * k + 1] {
            for row in 0..4 {
                let w = inv[(row, col)].powi(2);
                total += w;
                if row < 2 {
                    photon += w;
                }
            }
        }
        photon / total
    }

    pub fn phonon_fraction(&self, branch: Branch) -> f64 {
        1.0 - self.photon_fraction(branch)
    }
}

/// Product thermal state `diag(n_a + ½, n_a + ½, n_b + ½, n_b + ½)`.
pub fn thermal_covariance(n_a: f64, n_b: f64) -> Result<GaussianState> {
    for (name, n) in [("n_a", n_a), ("n_b", n_b)] {
        if !(n.is_finite() && n >= 0.0) {
            return Err(Error::invalid(
                name,
                format!("occupation must be finite and ≥ 0, got {n}"),
            ));
        }
    }
    let diag = Vector4::new(n_a + 0.5, n_a + 0.5, n_b + 0.5, n_b + 0.5);
    Ok(GaussianState {
        covariance: Matrix4::from_diagonal(&diag),
    })
}

const OCCUPATION_FLOOR: f64 = -1e-12;

/// Mean polariton numbers `(N_A, N_B)` of a state, from the normal-mode
/// covariance `V' = S V Sᵀ` as `N = (V'_xx + V'_pp − 1)/2`.
pub fn polariton_occupations(transform: &BogoliubovTransform, state: &GaussianState) -> Result<(f64, f64)> {
    let s = &transform.symplectic;
    let v = s * state.covariance * s.transpose();
    let mut out = [0.0; 2];
    for (k, n) in out.iter_mut().enumerate() {
        let raw = 0.5 * (v[(2 * k, 2 * k)] + v[(2 * k + 1, 2 * k + 1)] - 1.0);
        if raw < OCCUPATION_FLOOR {
            return Err(Error::Unphysical(raw));
        }
        *n = raw.max(0.0);
    }
    Ok((out[0], out[1]))
}
