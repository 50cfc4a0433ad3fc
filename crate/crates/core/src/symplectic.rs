//! The black hole isometry as a symplectic transformation.
//!
//! In the Heisenberg picture the isometry acts linearly on the operator list
//! `(a, b†, c)`:
//!
//! ```text
//! A  = α a − β b† + γ c
//! B† = …            (row 2 of L)
//! C  = …            (row 3 of L)
//! ```
//!
//! with `α = cos r`, `β = √(s²/r² − 1) sin r`, `γ = −(s/r) sin r`. The 3×3
//! coefficient matrix `L` is the closed form of `exp(M)` where `M` is the
//! adjoint action of the generator on `(a, b†, c)`; it is lifted to the six
//! ladder operators and then conjugated into the quadrature basis
//! `(q_a, p_a, q_b, p_b, q_c, p_c)`.
//!
//! Every formula is written through `sinc r = sin r / r` and `√(s² − r²)` so
//! that the reflecting limit `r → 0` is evaluated without a `0/0`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense row-major real matrix. Only 2×2 up to 6×6 instances occur here.
pub type RealMatrix = DMatrix<f64>;

/// Isometry parameters `(r, s)` of one black hole interaction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlackHoleParams {
    r: f64,
    s: f64,
}

impl BlackHoleParams {
    pub fn new(r: f64, s: f64) -> Result<Self> {
        if !r.is_finite() || !s.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "non-finite parameters r = {r}, s = {s}"
            )));
        }
        if r < 0.0 || s < r {
            return Err(Error::ParamsNotCompletelyPositive { r, s });
        }
        Ok(Self { r, s })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    /// `r κ = √(s² − r²)`, finite everywhere including `r = 0`.
    pub fn r_kappa(&self) -> f64 {
        ((self.s - self.r) * (self.s + self.r)).max(0.0).sqrt()
    }

    /// `κ = √(s²/r² − 1)`; `None` at `r = 0` where it diverges.
    pub fn kappa(&self) -> Option<f64> {
        (self.r > 0.0).then(|| self.r_kappa() / self.r)
    }
}

/// `sin x / x` with `sinc 0 = 1`.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// `(1 − cos x) / x²` with value `1/2` at `x = 0`.
pub(crate) fn versine_ratio(x: f64) -> f64 {
    let h = sinc(0.5 * x);
    0.5 * h * h
}

/// `Ω = ω ⊕ … ⊕ ω` with `ω = [[0, 1], [−1, 0]]`.
pub fn symplectic_form(n_modes: usize) -> Result<RealMatrix> {
    if n_modes == 0 {
        return Err(Error::InvalidArgument("symplectic form needs n_modes >= 1".into()));
    }
    let mut omega = RealMatrix::zeros(2 * n_modes, 2 * n_modes);
    for k in 0..n_modes {
        omega[(2 * k, 2 * k + 1)] = 1.0;
        omega[(2 * k + 1, 2 * k)] = -1.0;
    }
    Ok(omega)
}

/// Bogoliubov coefficients `(α, β, γ)` of the outgoing mode, with `β ≥ 0`.
///
/// They satisfy `α² − β² + γ² = 1`.
pub fn bogoliubov_coeffs(p: &BlackHoleParams) -> (f64, f64, f64) {
    let sc = sinc(p.r);
    (p.r.cos(), p.r_kappa() * sc, -p.s * sc)
}

/// The 3×3 map `(a, b†, c) ↦ (A, B†, C)`.
pub fn build_l(p: &BlackHoleParams) -> RealMatrix {
    let (r, s) = (p.r, p.s);
    let rk = p.r_kappa();
    let sc = sinc(r);
    let h = versine_ratio(r);
    #[rustfmt::skip]
    let l = RealMatrix::from_row_slice(3, 3, &[
        r.cos(),      -rk * sc,          -s * sc,
        -rk * sc,     1.0 + rk * rk * h, s * rk * h,
        s * sc,       -s * rk * h,       1.0 - s * s * h,
    ]);
    l
}

/// Whether entry `k` of the list `(a, b†, c)` is a creation operator.
const CREATION_SLOT: [bool; 3] = [false, true, false];

/// Lift `L` to the six ladder operators ordered `(a, a†, b, b†, c, c†)`.
///
/// Row `k` of `L` gives the image of list entry `k`; its hermitian conjugate
/// gives the image of the partner operator with the same real coefficients.
pub fn ladder_lift(l: &RealMatrix) -> RealMatrix {
    let idx = |mode: usize, dagger: bool| 2 * mode + usize::from(dagger);
    let mut m = RealMatrix::zeros(6, 6);
    for k in 0..3 {
        for j in 0..3 {
            let (dk, dj) = (CREATION_SLOT[k], CREATION_SLOT[j]);
            m[(idx(k, dk), idx(j, dj))] = l[(k, j)];
            m[(idx(k, !dk), idx(j, !dj))] = l[(k, j)];
        }
    }
    m
}

/// `S = Σ⁻¹ (L ⊕ L) Σ` acting on `(q_a, p_a, q_b, p_b, q_c, p_c)`.
///
/// `Σ = σ ⊕ σ ⊕ σ`, `σ = [[1, i], [1, −i]]` sends `(q, p)` to `2 (a, a†)`.
pub fn embed_and_quadrature(l: &RealMatrix) -> Result<RealMatrix> {
    if l.nrows() != 3 || l.ncols() != 3 {
        return Err(Error::InvalidArgument(format!(
            "expected a 3x3 mode matrix, got {}x{}",
            l.nrows(),
            l.ncols()
        )));
    }
    let i = Complex64::i();
    let one = Complex64::new(1.0, 0.0);
    let mut sigma = DMatrix::<Complex64>::zeros(6, 6);
    let mut sigma_inv = DMatrix::<Complex64>::zeros(6, 6);
    for k in 0..3 {
        let o = 2 * k;
        sigma[(o, o)] = one;
        sigma[(o, o + 1)] = i;
        sigma[(o + 1, o)] = one;
        sigma[(o + 1, o + 1)] = -i;
        sigma_inv[(o, o)] = 0.5 * one;
        sigma_inv[(o, o + 1)] = 0.5 * one;
        sigma_inv[(o + 1, o)] = -0.5 * i;
        sigma_inv[(o + 1, o + 1)] = 0.5 * i;
    }
    let lift = ladder_lift(l).map(|x| Complex64::new(x, 0.0));
    let s = sigma_inv * lift * sigma;
    let max_imag = s.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    if max_imag > 1e-12 {
        return Err(Error::InternalInconsistency(format!(
            "quadrature transform is not real (max |Im| = {max_imag:e})"
        )));
    }
    Ok(s.map(|z| z.re))
}

/// Quadrature-basis symplectic matrix of the black hole isometry.
pub fn black_hole_symplectic(p: &BlackHoleParams) -> RealMatrix {
    embed_and_quadrature(&build_l(p)).expect("3x3 input with real quadrature image")
}

/// `max |M Ω Mᵀ − Ω| ≤ tol`.
pub fn is_symplectic(m: &RealMatrix, tol: f64) -> Result<bool> {
    Ok(symplectic_defect(m)? <= tol)
}

/// `max |M Ω Mᵀ − Ω|`.
pub fn symplectic_defect(m: &RealMatrix) -> Result<f64> {
    let n = m.nrows();
    if n != m.ncols() || n % 2 != 0 || n == 0 {
        return Err(Error::InvalidArgument(format!(
            "symplectic test needs a square even-dimensional matrix, got {}x{}",
            n,
            m.ncols()
        )));
    }
    let omega = symplectic_form(n / 2)?;
    let d = m * &omega * m.transpose() - omega;
    Ok(d.amax())
}
