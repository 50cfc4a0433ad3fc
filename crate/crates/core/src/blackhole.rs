//! From black hole parameters `(r, s)` to the channels seen by each mode.
//!
//! Mode `a` carries the outgoing radiation, `b` the black hole interior and
//! `c` the radiation crossing the horizon. Modes `a` and `b` enter in the
//! vacuum and `c` carries the input state, so each output mode sees a
//! one-mode Gaussian channel obtained by tracing the vacuum ancillas.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::channel::{CovarianceMatrix, OneModeChannel};
use crate::error::{Error, Result};
use crate::symplectic::{
    black_hole_symplectic, sinc, symplectic_defect, versine_ratio, BlackHoleParams, RealMatrix,
};
use crate::DEFAULT_TOL;

/// Slack on the inclusive strip boundaries, absorbing rounding in `y − τ`.
const BOUNDARY_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModeTag {
    A,
    B,
    C,
}

impl ModeTag {
    pub fn index(self) -> usize {
        match self {
            Self::A => 0,
            Self::B => 1,
            Self::C => 2,
        }
    }
}

/// Branch `k ∈ {0, 1}` of `r = ½ acos(y − τ) + kπ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn k(self) -> f64 {
        match self {
            Self::Even => 0.0,
            Self::Odd => 1.0,
        }
    }
}

impl FromStr for Parity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "even" => Ok(Self::Even),
            "odd" => Ok(Self::Odd),
            other => Err(Error::InvalidArgument(format!("unknown parity {other:?}"))),
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Even => "even",
            Self::Odd => "odd",
        })
    }
}

/// A point `(τ_a, y_a)` of the black hole strip.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlackHolePoint {
    tau_a: f64,
    y_a: f64,
}

impl BlackHolePoint {
    pub fn new(tau_a: f64, y_a: f64) -> Result<Self> {
        if !tau_a.is_finite() || !y_a.is_finite() {
            return Err(Error::InvalidArgument(format!("non-finite point ({tau_a}, {y_a})")));
        }
        if y_a < (tau_a - 1.0).abs() - BOUNDARY_SLACK {
            return Err(Error::NotCompletelyPositive { tau: tau_a, y: y_a });
        }
        if !in_black_hole_region(tau_a, y_a) {
            return Err(Error::NotInBlackHoleRegion { tau: tau_a, y: y_a });
        }
        Ok(Self { tau_a, y_a })
    }

    pub fn tau_a(&self) -> f64 {
        self.tau_a
    }

    pub fn y_a(&self) -> f64 {
        self.y_a
    }

    /// `cos 2r = y_a − τ_a`, clipped to `[−1, 1]`.
    pub fn cos2r(&self) -> f64 {
        (self.y_a - self.tau_a).clamp(-1.0, 1.0)
    }
}

/// `τ ≥ 0`, `|y − τ| ≤ 1` and `y ≥ |τ − 1|`, all boundaries included.
pub fn in_black_hole_region(tau: f64, y: f64) -> bool {
    tau >= 0.0
        && (y - tau).abs() <= 1.0 + BOUNDARY_SLACK
        && y >= (tau - 1.0).abs() - BOUNDARY_SLACK
}

/// `(τ_a, y_a) = (s² sinc² r, cos 2r + τ_a)`.
pub fn a_params(p: &BlackHoleParams) -> (f64, f64) {
    let g = p.s() * sinc(p.r());
    let tau = g * g;
    (tau, (2.0 * p.r()).cos() + tau)
}

/// `(τ_c, y_c)` of the channel into the black hole.
pub fn c_params(p: &BlackHoleParams) -> (f64, f64) {
    let (r, s) = (p.r(), p.s());
    let h = versine_ratio(r);
    let sc = sinc(r);
    let l33 = 1.0 - s * s * h;
    let y = s * s * sc * sc + s * s * (s - r) * (s + r) * h * h;
    (l33 * l33, y)
}

/// Outgoing channel, already in canonical form `(√τ_a I, y_a I)`.
pub fn a_channel(p: &BlackHoleParams) -> OneModeChannel {
    let (tau, y) = a_params(p);
    let id = RealMatrix::identity(2, 2);
    OneModeChannel::new(&id * tau.sqrt(), &id * y, DEFAULT_TOL)
        .expect("s >= r gives a completely positive outgoing channel")
}

/// Channel across the horizon, `T = L₃₃ I`, `N = y_c I`.
pub fn c_channel(p: &BlackHoleParams) -> OneModeChannel {
    let (r, s) = (p.r(), p.s());
    let (_, y) = c_params(p);
    let l33 = 1.0 - s * s * versine_ratio(r);
    let id = RealMatrix::identity(2, 2);
    OneModeChannel::new(&id * l33, &id * y, DEFAULT_TOL)
        .expect("c output of a symplectic dilation is completely positive")
}

/// Channel into the interior mode; phase conjugating (`τ_b ≤ 0`).
pub fn b_channel(p: &BlackHoleParams) -> OneModeChannel {
    extract_mode_channel(&black_hole_symplectic(p), ModeTag::B)
        .expect("black hole symplectic matrix is valid")
}

/// Reduce the three-mode symplectic map to the channel `c ↦ mode`, with
/// modes `a` and `b` traced out in the vacuum.
pub fn extract_mode_channel(s: &RealMatrix, mode: ModeTag) -> Result<OneModeChannel> {
    if s.nrows() != 6 || s.ncols() != 6 {
        return Err(Error::InvalidArgument(format!(
            "expected a 6x6 symplectic matrix, got {}x{}",
            s.nrows(),
            s.ncols()
        )));
    }
    let scale = s.amax().max(1.0);
    let defect = symplectic_defect(s)?;
    if defect > 1e-9 * scale * scale {
        return Err(Error::InvalidArgument(format!(
            "matrix is not symplectic (defect {defect:e})"
        )));
    }
    let row = 2 * mode.index();
    let block = |col_mode: usize| s.view((row, 2 * col_mode), (2, 2)).into_owned();
    let t = block(ModeTag::C.index());
    let n = [ModeTag::A, ModeTag::B]
        .into_iter()
        .map(|m| {
            let x = block(m.index());
            &x * x.transpose()
        })
        .fold(RealMatrix::zeros(2, 2), |acc, x| acc + x);
    OneModeChannel::new(t, n, DEFAULT_TOL.max(1e-12 * scale * scale))
}

/// Full 6×6 output covariance for vacuum `a`, `b` and input `v_c` on `c`.
pub fn output_covariance(p: &BlackHoleParams, v_c: &CovarianceMatrix) -> Result<CovarianceMatrix> {
    if v_c.modes() != 1 {
        return Err(Error::InvalidArgument(format!(
            "input state must be one-mode, got {} modes",
            v_c.modes()
        )));
    }
    let s = black_hole_symplectic(p);
    let v_in = CovarianceMatrix::vacuum(2).direct_sum(v_c);
    Ok(CovarianceMatrix::from_evolution(&s * v_in.matrix() * s.transpose()))
}

/// Joint `(b, c)` output covariance: the complementary output of the outgoing channel.
pub fn bc_complement_covariance(p: &BlackHoleParams, v_c: &CovarianceMatrix) -> Result<CovarianceMatrix> {
    output_covariance(p, v_c)?.modes_block(1, 2)
}

/// Parameters `(r, s)` reproducing the outgoing point on branch `parity`.
///
/// `None` when the odd branch has no finite solution (`y_a − τ_a = 1`,
/// `τ_a > 0`, where `sin r = 0` at `r = π`).
pub fn inverse_map(pt: &BlackHolePoint, parity: Parity) -> Result<Option<BlackHoleParams>> {
    let r = 0.5 * pt.cos2r().acos() + parity.k() * PI;
    let sc = sinc(r).abs();
    let s = if sc < 1e-12 {
        if pt.tau_a() > 0.0 {
            return Ok(None);
        }
        r
    } else {
        pt.tau_a().sqrt() / sc
    };
    // CP points give s ≥ r analytically; absorb rounding at the boundary.
    let s = if s < r && s >= r - 1e-9 * r.max(1.0) { r } else { s };
    BlackHoleParams::new(r, s).map(Some)
}

/// `(τ_c, y_c)` in terms of the outgoing point on branch `parity`.
///
/// Uses `τ_a/sin² r · (cos r − 1) = −τ_a/(1 + cos r)`, which stays finite
/// at `r = 0`.
pub fn c_params_from_a(pt: &BlackHolePoint, parity: Parity) -> Result<Option<(f64, f64)>> {
    let c2 = pt.cos2r();
    let half = (0.5 * (1.0 + c2)).sqrt();
    let cos_r = match parity {
        Parity::Even => half,
        Parity::Odd => -half,
    };
    let sin2 = 0.5 * (1.0 - c2);
    let tau = pt.tau_a();
    let denom = 1.0 + cos_r;
    if denom < 1e-8 {
        // r ≈ π: only τ_a = 0 has a finite solution.
        return Ok(inverse_map(pt, parity)?.map(|p| c_params(&p)));
    }
    let ratio = tau / denom;
    let tau_c = (1.0 - ratio).powi(2);
    let y_c = ratio * (tau - sin2) / denom + tau;
    Ok(Some((tau_c, y_c)))
}

/// Sample grids of the strip near the origin used by the `map` tables.
///
/// Each row fixes `c = cos 2r = y − τ` and starts on the line `y = 1 − τ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MapPreset {
    /// 35 points: `c ∈ {1, ½, 0, −½, −1}`, 7 points per row, step ¼.
    Fig5,
    /// 25 points: `c ∈ {0.8, 0.4, 0, −0.4, −0.8}`, 5 points per row, step 0.3.
    Fig6,
}

impl MapPreset {
    pub fn points(self) -> Vec<(f64, f64)> {
        let (rows, per_row, step): (&[f64], usize, f64) = match self {
            Self::Fig5 => (&[1.0, 0.5, 0.0, -0.5, -1.0], 7, 0.25),
            Self::Fig6 => (&[0.8, 0.4, 0.0, -0.4, -0.8], 5, 0.3),
        };
        rows.iter()
            .flat_map(|&c| {
                (0..per_row).map(move |k| {
                    let tau = 0.5 * (1.0 - c) + k as f64 * step;
                    (tau, tau + c)
                })
            })
            .collect()
    }
}

impl FromStr for MapPreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig5" => Ok(Self::Fig5),
            "fig6" => Ok(Self::Fig6),
            other => Err(Error::InvalidArgument(format!("unknown preset {other:?}"))),
        }
    }
}
