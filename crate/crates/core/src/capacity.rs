//! Gaussian entropies, coherent information and quantum-capacity reports.
//!
//! For a phase-insensitive channel `(τ, y)` with added noise
//! `K = (y − |1 − τ|)/2` and a thermal code of mean photon number `N`,
//! the coherent information is `g(N′) − g(x₊) − g(x₋)` where `g` is the
//! thermal-state entropy. Its `N → ∞` limit is available in closed form and
//! is the lower bound reported for the capacity.

use std::fmt;
use std::str::FromStr;

use nalgebra::SymmetricEigen;
use serde::{Deserialize, Serialize};

use crate::blackhole::output_covariance;
use crate::channel::{
    capacity_region, is_entanglement_breaking, on_degradable_boundary, CapacityStatus,
    CovarianceMatrix,
};
use crate::error::{Error, Result};
use crate::symplectic::{symplectic_form, BlackHoleParams, RealMatrix};

/// Photon numbers in `[−CLAMP, 0)` produced by cancellation are treated as 0.
const CLAMP: f64 = 1e-12;

/// Logarithm base of every entropic quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum LogBase {
    /// Bits.
    #[default]
    #[serde(rename = "2")]
    Two,
    /// Nats.
    #[serde(rename = "e")]
    E,
}

impl LogBase {
    pub fn value(self) -> f64 {
        match self {
            Self::Two => 2.0,
            Self::E => std::f64::consts::E,
        }
    }

    /// Converts a quantity in nats to this base.
    pub fn from_nats(self, x: f64) -> f64 {
        match self {
            Self::Two => x / std::f64::consts::LN_2,
            Self::E => x,
        }
    }

    pub fn log(self, x: f64) -> f64 {
        self.from_nats(x.ln())
    }
}

impl FromStr for LogBase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "2" => Ok(Self::Two),
            "e" | "E" => Ok(Self::E),
            other => Err(Error::InvalidArgument(format!(
                "unsupported log base {other:?} (expected 2 or e)"
            ))),
        }
    }
}

impl fmt::Display for LogBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Two => "2",
            Self::E => "e",
        })
    }
}

/// `(1 + x) ln(1 + x) − x ln x` in nats, written to stay accurate for large `x`.
fn g_nats(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x.ln_1p() + x * (1.0 / x).ln_1p()
    }
}

/// Entropy of a thermal state with mean photon number `x`.
pub fn g_entropy(x: f64, base: LogBase) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::InvalidArgument(format!("g(x) needs x >= 0, got {x}")));
    }
    Ok(base.from_nats(g_nats(x)))
}

/// Added classical noise `K = (y − |1 − τ|)/2`.
pub fn k_noise(tau: f64, y: f64) -> Result<f64> {
    let k = 0.5 * (y - (1.0 - tau).abs());
    if !k.is_finite() || k < -0.5 * crate::DEFAULT_TOL {
        return Err(Error::NotCompletelyPositive { tau, y });
    }
    Ok(k.max(0.0))
}

/// Intermediate quantities of the finite-power coherent information.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CohInfoTerms {
    pub k: f64,
    /// Output photon number `N′`.
    pub n_out: f64,
    pub d: f64,
    pub x_plus: f64,
    pub x_minus: f64,
    pub value: f64,
}

fn clamp_photons(x: f64, name: &str) -> Result<f64> {
    if x >= 0.0 {
        Ok(x)
    } else if x >= -CLAMP {
        Ok(0.0)
    } else {
        Err(Error::InternalInconsistency(format!("{name} = {x} is negative")))
    }
}

/// Coherent information of `(τ, y)` for a thermal code with `N` photons, with
/// its intermediate terms.
pub fn coherent_info_terms(tau: f64, y: f64, n: f64, base: LogBase) -> Result<CohInfoTerms> {
    if !(tau > 0.0) {
        return Err(Error::UnsupportedClass { tau });
    }
    if !(n >= 0.0) || !n.is_finite() {
        return Err(Error::InvalidArgument(format!("input photon number {n} must be >= 0")));
    }
    let k = k_noise(tau, y)?;
    // N′ = τN + Δ, with Δ = K (loss) or τ − 1 + K (amplifier).
    let delta = if tau < 1.0 { k } else { tau - 1.0 + k };
    let n_out = tau * n + delta;
    let m = n_out - n;
    let d2 = ((1.0 - tau) * n).powi(2)
        + 2.0 * n * ((1.0 + tau) * (delta + 1.0) - 2.0 * tau)
        + (delta + 1.0).powi(2);
    if !(d2 >= 0.0) {
        return Err(Error::InternalInconsistency(format!("D^2 = {d2} is negative")));
    }
    let d = d2.sqrt();
    // D² − (N′ − N)² without cancellation.
    let q = 2.0 * n * (1.0 - tau + 2.0 * delta) + 2.0 * delta + 1.0;
    let (big, small) = (0.5 * (d + m.abs() - 1.0), 0.5 * (q / (d + m.abs()) - 1.0));
    let (x_plus, x_minus) = if m >= 0.0 { (big, small) } else { (small, big) };
    let x_plus = clamp_photons(x_plus, "x+")?;
    let x_minus = clamp_photons(x_minus, "x-")?;
    let value = base.from_nats(g_nats(n_out) - g_nats(x_plus) - g_nats(x_minus));
    Ok(CohInfoTerms { k, n_out, d, x_plus, x_minus, value })
}

/// `g(N′) − g(x₊) − g(x₋)` for a thermal code with `N` photons.
pub fn coherent_info_at(tau: f64, y: f64, n: f64, base: LogBase) -> Result<f64> {
    coherent_info_terms(tau, y, n, base).map(|t| t.value)
}

/// Infinite-power limit of the coherent information.
///
/// For `τ ≠ 1`: `k log k − (1 + k) log(1 + k) + log(τ/|1 − τ|)` with
/// `k = K/|1 − τ|`. At `τ = 1` this becomes `−1/ln(base) − log K`, and
/// `+∞` for the identity channel (`K = 0`).
pub fn coherent_info_limit(tau: f64, y: f64, base: LogBase) -> Result<f64> {
    if !(tau > 0.0) {
        return Err(Error::UnsupportedClass { tau });
    }
    let k = k_noise(tau, y)?;
    let gap = (1.0 - tau).abs();
    if gap == 0.0 {
        if k == 0.0 {
            return Ok(f64::INFINITY);
        }
        return Ok(base.from_nats(-1.0 - k.ln()));
    }
    Ok(base.from_nats((tau / gap).ln() - g_nats(k / gap)))
}

/// Golden-section search of `sup_N` over `log10 N ∈ [−3, 8]`.
///
/// Diagnostic only; returns `(N*, value)`.
pub fn sup_coherent_info(tau: f64, y: f64, base: LogBase) -> Result<(f64, f64)> {
    let f = |t: f64| coherent_info_at(tau, y, 10f64.powf(t), base);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (-3.0f64, 8.0f64);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1)?, f(x2)?);
    while hi - lo > 1e-6 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2)?;
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1)?;
        }
    }
    let mid = 0.5 * (lo + hi);
    let mut best = (10f64.powf(mid), f(mid)?);
    for edge in [-3.0, 8.0] {
        let v = f(edge)?;
        if v > best.1 {
            best = (10f64.powf(edge), v);
        }
    }
    Ok(best)
}

/// Quantum-capacity summary of a channel point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapacityReport {
    pub tau: f64,
    pub y: f64,
    pub base: LogBase,
    pub status: CapacityStatus,
    /// Added classical noise `K`.
    pub k: f64,
    /// Infinite-power coherent information; `None` for `τ ≤ 0`, where the
    /// closed form does not apply.
    pub coh_info_limit: Option<f64>,
    pub lower_bound: f64,
    pub exact_value: Option<f64>,
    pub notes: Vec<String>,
}

pub fn capacity_report(tau: f64, y: f64, base: LogBase) -> Result<CapacityReport> {
    capacity_report_with_tol(tau, y, base, crate::DEFAULT_TOL)
}

pub fn capacity_report_with_tol(tau: f64, y: f64, base: LogBase, tol: f64) -> Result<CapacityReport> {
    let status = capacity_region(tau, y, tol)?;
    let k = k_noise(tau, y)?;
    let mut notes = Vec::new();
    let limit = if tau > 0.0 {
        let gap = (1.0 - tau).abs();
        notes.push(
            if gap == 0.0 {
                "tau = 1 branch: -1/ln(base) - log K"
            } else if k <= tol {
                "K = 0 reduction: log tau/|1 - tau|"
            } else {
                "infinite-power limit with K > 0"
            }
            .to_string(),
        );
        Some(coherent_info_limit(tau, y, base)?)
    } else {
        notes.push("tau <= 0: coherent-information limit not evaluated".into());
        None
    };

    let (lower_bound, exact_value) = match status {
        CapacityStatus::Infinite => {
            notes.push("noiseless identity channel".into());
            (f64::INFINITY, Some(f64::INFINITY))
        }
        CapacityStatus::Zero => {
            if is_entanglement_breaking(tau, y) {
                notes.push("entanglement breaking".into());
            }
            if on_degradable_boundary(tau, y, tol) {
                notes.push("degradable and antidegradable".into());
            } else if tau > 0.5 && (y - tau).abs() <= tol {
                notes.push("boundary y = tau reported as zero capacity".into());
            } else {
                notes.push("antidegradable composition region y >= tau".into());
            }
            (0.0, Some(0.0))
        }
        CapacityStatus::Exact => {
            notes.push("degradable: capacity equals the single-letter coherent information".into());
            let v = limit.expect("exact points have tau >= 1/2");
            (v.max(0.0), Some(v))
        }
        CapacityStatus::PositiveLowerBound => {
            (limit.expect("y < tau implies tau > 0"), None)
        }
        CapacityStatus::Unknown => {
            notes.push("coherent information vanishes; capacity unknown".into());
            (0.0, None)
        }
    };
    Ok(CapacityReport {
        tau,
        y,
        base,
        status,
        k,
        coh_info_limit: limit,
        lower_bound,
        exact_value,
        notes,
    })
}

/// Williamson spectrum `ν₁ ≥ … ≥ ν_m` of a positive definite `2m × 2m` matrix.
///
/// Computed as the singular values of `V^{1/2} Ω V^{1/2}`, which come in
/// equal pairs.
pub fn williamson_spectrum(v: &RealMatrix) -> Result<Vec<f64>> {
    let n = v.nrows();
    if n == 0 || n % 2 != 0 || n != v.ncols() {
        return Err(Error::InvalidArgument(format!(
            "Williamson spectrum needs a square even-dimensional matrix, got {}x{}",
            n,
            v.ncols()
        )));
    }
    let eig = SymmetricEigen::new(v.clone());
    if eig.eigenvalues.iter().any(|&l| !(l > 0.0)) {
        return Err(Error::InvalidArgument("covariance matrix is not positive definite".into()));
    }
    let sqrt_diag = RealMatrix::from_diagonal(&eig.eigenvalues.map(f64::sqrt));
    let root = &eig.eigenvectors * sqrt_diag * eig.eigenvectors.transpose();
    let a = &root * symplectic_form(n / 2)? * &root;
    let b = a.transpose() * &a;
    let mut squares: Vec<f64> = SymmetricEigen::new(b).eigenvalues.iter().copied().collect();
    squares.sort_by(|x, y| y.total_cmp(x));
    Ok(squares
        .chunks(2)
        .map(|pair| (0.5 * (pair[0] + pair[1])).max(0.0).sqrt())
        .collect())
}

/// Symplectic eigenvalues of a covariance matrix, sorted descending.
pub fn symplectic_eigenvalues(v: &CovarianceMatrix) -> Vec<f64> {
    williamson_spectrum(v.matrix()).expect("validated covariance matrices are positive definite")
}

/// Von Neumann entropy `Σ g((ν − 1)/2)` of a Gaussian state.
pub fn gaussian_entropy(v: &CovarianceMatrix, base: LogBase) -> f64 {
    let nats: f64 = symplectic_eigenvalues(v)
        .into_iter()
        .map(|nu| g_nats(((nu - 1.0) / 2.0).max(0.0)))
        .sum();
    base.from_nats(nats)
}

/// `(H(a) − H(bc), H(bc) − H(a))` for a thermal code with `N` photons sent
/// into mode `c`.
pub fn pair_coherent_info(p: &BlackHoleParams, n: f64, base: LogBase) -> Result<(f64, f64)> {
    let out = output_covariance(p, &CovarianceMatrix::thermal(n)?)?;
    let h_a = gaussian_entropy(&out.modes_block(0, 1)?, base);
    let h_bc = gaussian_entropy(&out.modes_block(1, 2)?, base);
    let ic_a = h_a - h_bc;
    Ok((ic_a, -ic_a))
}
