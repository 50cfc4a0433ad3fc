//! One-mode Gaussian (OMG) channels `V ↦ T V Tᵀ + N` and their classification.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::capacity::{coherent_info_limit, williamson_spectrum, LogBase};
use crate::error::{Error, Result};
use crate::symplectic::RealMatrix;

const PHYSICALITY_TOL: f64 = 1e-9;

/// Second-moment matrix of an `m`-mode Gaussian state (`ħ = 2`, vacuum = I).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CovarianceMatrix {
    modes: usize,
    matrix: RealMatrix,
}

impl CovarianceMatrix {
    /// Validates symmetry and the uncertainty relation `V + iΩ ≥ 0`.
    pub fn new(matrix: RealMatrix) -> Result<Self> {
        let n = matrix.nrows();
        if n == 0 || n % 2 != 0 || n != matrix.ncols() {
            return Err(Error::InvalidArgument(format!(
                "covariance matrix must be square with even dimension, got {}x{}",
                n,
                matrix.ncols()
            )));
        }
        let scale = matrix.amax().max(1.0);
        if (&matrix - matrix.transpose()).amax() > PHYSICALITY_TOL * scale {
            return Err(Error::InvalidArgument("covariance matrix is not symmetric".into()));
        }
        let sym = (&matrix + matrix.transpose()) * 0.5;
        let nu = williamson_spectrum(&sym)?;
        if let Some(&low) = nu.last() {
            if low < 1.0 - PHYSICALITY_TOL * scale {
                return Err(Error::InvalidArgument(format!(
                    "covariance matrix violates the uncertainty relation (symplectic eigenvalue {low})"
                )));
            }
        }
        Ok(Self { modes: n / 2, matrix: sym })
    }

    /// Wraps a matrix produced by a symplectic evolution of a valid state.
    pub(crate) fn from_evolution(matrix: RealMatrix) -> Self {
        let sym = (&matrix + matrix.transpose()) * 0.5;
        Self { modes: sym.nrows() / 2, matrix: sym }
    }

    pub fn vacuum(modes: usize) -> Self {
        Self { modes, matrix: RealMatrix::identity(2 * modes, 2 * modes) }
    }

    /// One-mode thermal state with mean photon number `n`: `(2n + 1) I`.
    pub fn thermal(n: f64) -> Result<Self> {
        if !(n >= 0.0) || !n.is_finite() {
            return Err(Error::InvalidArgument(format!("thermal photon number {n} must be >= 0")));
        }
        Ok(Self { modes: 1, matrix: RealMatrix::identity(2, 2) * (2.0 * n + 1.0) })
    }

    /// One-mode squeezed vacuum `diag(e^{2ζ}, e^{−2ζ})`.
    pub fn squeezed_vacuum(zeta: f64) -> Self {
        let e = (2.0 * zeta).exp();
        Self { modes: 1, matrix: diag2(e, 1.0 / e) }
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn matrix(&self) -> &RealMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> RealMatrix {
        self.matrix
    }

    /// Mean photon number `(tr V − 2m) / 4`.
    pub fn mean_photon_number(&self) -> f64 {
        (self.matrix.trace() - 2.0 * self.modes as f64) / 4.0
    }

    /// Block of modes `first .. first + count`.
    pub fn modes_block(&self, first: usize, count: usize) -> Result<Self> {
        if count == 0 || first + count > self.modes {
            return Err(Error::InvalidArgument(format!(
                "mode range {first}..{} out of bounds for {} modes",
                first + count,
                self.modes
            )));
        }
        let m = self.matrix.view((2 * first, 2 * first), (2 * count, 2 * count)).into_owned();
        Ok(Self { modes: count, matrix: m })
    }

    /// `V₁ ⊕ V₂`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let (n1, n2) = (self.matrix.nrows(), other.matrix.nrows());
        let mut m = RealMatrix::zeros(n1 + n2, n1 + n2);
        m.view_mut((0, 0), (n1, n1)).copy_from(&self.matrix);
        m.view_mut((n1, n1), (n2, n2)).copy_from(&other.matrix);
        Self { modes: self.modes + other.modes, matrix: m }
    }
}

/// Equivalence classes of one-mode Gaussian channels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ChannelClass {
    A1,
    A2,
    B1,
    B2,
    /// The noiseless identity channel `(I, 0)`.
    B2Identity,
    CLoss,
    CAmp,
    /// Phase-conjugating channels, `τ < 0`.
    D,
}

impl ChannelClass {
    pub const ALL: [ChannelClass; 8] = [
        Self::A1,
        Self::A2,
        Self::B1,
        Self::B2,
        Self::B2Identity,
        Self::CLoss,
        Self::CAmp,
        Self::D,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::A1 => "A1",
            Self::A2 => "A2",
            Self::B1 => "B1",
            Self::B2 => "B2",
            Self::B2Identity => "B2Identity",
            Self::CLoss => "CLoss",
            Self::CAmp => "CAmp",
            Self::D => "D",
        }
    }
}

impl fmt::Display for ChannelClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Quantum-capacity status of a point `(τ, y)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CapacityStatus {
    /// Antidegradable composition region `y ≥ τ`; includes the entanglement-breaking set.
    Zero,
    /// Degradable boundary; capacity equals the coherent information.
    Exact,
    /// Coherent information in the infinite-power limit is positive.
    PositiveLowerBound,
    /// Coherent information vanishes; capacity unknown.
    Unknown,
    /// Noiseless identity channel.
    Infinite,
}

impl CapacityStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Zero => "Zero",
            Self::Exact => "Exact",
            Self::PositiveLowerBound => "PositiveLowerBound",
            Self::Unknown => "Unknown",
            Self::Infinite => "Infinite",
        }
    }
}

impl fmt::Display for CapacityStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ChannelClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown channel class {s:?}")))
    }
}

/// A completely positive one-mode Gaussian channel `(T, N)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OneModeChannel {
    t: RealMatrix,
    n: RealMatrix,
    tol: f64,
}

impl OneModeChannel {
    /// Checks `y ≥ |τ − 1|` and `N ≥ 0` up to `tol`.
    pub fn new(t: RealMatrix, n: RealMatrix, tol: f64) -> Result<Self> {
        for (name, m) in [("T", &t), ("N", &n)] {
            if m.nrows() != 2 || m.ncols() != 2 {
                return Err(Error::InvalidArgument(format!("{name} must be 2x2")));
            }
            if m.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidArgument(format!("{name} has non-finite entries")));
            }
        }
        if (n[(0, 1)] - n[(1, 0)]).abs() > tol * n.amax().max(1.0) {
            return Err(Error::InvalidArgument("noise matrix N is not symmetric".into()));
        }
        let n = (&n + n.transpose()) * 0.5;
        let min_eig = n.symmetric_eigenvalues().min();
        if min_eig < -tol {
            return Err(Error::NoiseNotPositive { min_eig });
        }
        let tau = t.determinant();
        let y = n.determinant().max(0.0).sqrt();
        if y < (tau - 1.0).abs() - tol {
            return Err(Error::NotCompletelyPositive { tau, y });
        }
        Ok(Self { t, n, tol })
    }

    /// Canonical diagonal representative of a point `(τ, y)`:
    /// `T = √|τ| I` (times `σ_z` when `τ < 0`), `N = y I`.
    pub fn from_tau_y(tau: f64, y: f64, tol: f64) -> Result<Self> {
        if !tau.is_finite() || !y.is_finite() {
            return Err(Error::InvalidArgument(format!("non-finite point ({tau}, {y})")));
        }
        if y < 0.0 {
            return Err(Error::NotCompletelyPositive { tau, y });
        }
        let g = tau.abs().sqrt();
        let t = diag2(g, if tau < 0.0 { -g } else { g });
        Self::new(t, RealMatrix::identity(2, 2) * y, tol)
    }

    /// Canonical form of an equivalence class.
    ///
    /// `tau` is used by `CLoss` (`0 ≤ τ < 1`), `CAmp` (`τ > 1`) and `D`
    /// (`τ < 0`) and ignored otherwise; `mean_photons` is the thermal
    /// occupation of the environment (for `B2`, the added noise).
    pub fn canonical(class: ChannelClass, tau: f64, mean_photons: f64) -> Result<Self> {
        let id = RealMatrix::identity(2, 2);
        let thermal = 2.0 * mean_photons + 1.0;
        let (t, n) = match class {
            ChannelClass::A1 => (RealMatrix::zeros(2, 2), &id * thermal),
            ChannelClass::A2 => (diag2(1.0, 0.0), &id * thermal),
            ChannelClass::B1 => (id.clone(), diag2(0.0, 0.5)),
            ChannelClass::B2 => (id.clone(), &id * mean_photons),
            ChannelClass::B2Identity => (id.clone(), RealMatrix::zeros(2, 2)),
            ChannelClass::CLoss | ChannelClass::CAmp => {
                let ok = match class {
                    ChannelClass::CLoss => (0.0..1.0).contains(&tau),
                    _ => tau > 1.0,
                };
                if !ok {
                    return Err(Error::InvalidArgument(format!("tau = {tau} not valid for {class}")));
                }
                (&id * tau.sqrt(), &id * ((1.0 - tau).abs() * thermal))
            }
            ChannelClass::D => {
                if tau >= 0.0 {
                    return Err(Error::InvalidArgument(format!("tau = {tau} not valid for D")));
                }
                let g = (-tau).sqrt();
                (diag2(g, -g), &id * ((1.0 - tau) * thermal))
            }
        };
        Self::new(t, n, crate::DEFAULT_TOL)
    }

    pub fn t(&self) -> &RealMatrix {
        &self.t
    }

    pub fn n(&self) -> &RealMatrix {
        &self.n
    }

    /// `τ = det T`.
    pub fn tau(&self) -> f64 {
        self.t.determinant()
    }

    /// `y = √(det N)`.
    pub fn y(&self) -> f64 {
        self.n.determinant().max(0.0).sqrt()
    }

    pub fn rank_t(&self) -> usize {
        numerical_rank(&self.t, self.tol)
    }

    pub fn rank_n(&self) -> usize {
        numerical_rank(&self.n, self.tol)
    }

    /// `min(rank T, rank N)`.
    pub fn rank(&self) -> usize {
        self.rank_t().min(self.rank_n())
    }

    /// `T V Tᵀ + N`.
    pub fn apply(&self, v: &CovarianceMatrix) -> Result<CovarianceMatrix> {
        if v.modes() != 1 {
            return Err(Error::InvalidArgument(format!(
                "one-mode channel applied to a {}-mode state",
                v.modes()
            )));
        }
        let out = &self.t * v.matrix() * self.t.transpose() + &self.n;
        Ok(CovarianceMatrix { modes: 1, matrix: out })
    }

    pub fn classify(&self) -> ChannelClass {
        classify(self, self.tol)
    }

    /// Largest entry-wise difference of the induced maps, compared through
    /// `T ⊗ T` (insensitive to the overall sign of `T`) and `N`.
    pub fn action_distance(&self, other: &Self) -> f64 {
        let kron_a = self.t.kronecker(&self.t);
        let kron_b = other.t.kronecker(&other.t);
        (kron_a - kron_b).amax().max((&self.n - &other.n).amax())
    }
}

fn numerical_rank(m: &RealMatrix, tol: f64) -> usize {
    let sv = m.clone().svd(false, false).singular_values;
    let cutoff = tol * sv.max().max(1.0);
    sv.iter().filter(|&&x| x > cutoff).count()
}

fn diag2(a: f64, b: f64) -> RealMatrix {
    RealMatrix::from_row_slice(2, 2, &[a, 0.0, 0.0, b])
}

/// Validating constructor, equivalent to [`OneModeChannel::new`].
pub fn make_channel(t: RealMatrix, n: RealMatrix, tol: f64) -> Result<OneModeChannel> {
    OneModeChannel::new(t, n, tol)
}

/// Equivalence class of `ch`.
///
/// Points within `tol` of `τ = 1` are assigned to the `B` family first.
pub fn classify(ch: &OneModeChannel, tol: f64) -> ChannelClass {
    let tau = ch.tau();
    if (tau - 1.0).abs() <= tol {
        match numerical_rank(ch.n(), tol) {
            0 => ChannelClass::B2Identity,
            1 => ChannelClass::B1,
            _ => ChannelClass::B2,
        }
    } else if tau.abs() <= tol {
        if numerical_rank(ch.t(), tol) == 0 {
            ChannelClass::A1
        } else {
            ChannelClass::A2
        }
    } else if tau < 0.0 {
        ChannelClass::D
    } else if tau < 1.0 {
        ChannelClass::CLoss
    } else {
        ChannelClass::CAmp
    }
}

/// `y ≥ |τ| + 1`, boundary included.
pub fn is_entanglement_breaking(tau: f64, y: f64) -> bool {
    y >= tau.abs() + 1.0
}

/// Complete positivity of a point `(τ, y)`.
pub fn is_completely_positive(tau: f64, y: f64, tol: f64) -> bool {
    y >= 0.0 && y >= (tau - 1.0).abs() - tol
}

/// Whether `(τ, y)` lies on the known degradable boundary
/// (`y = τ − 1` for `τ ≥ 1`, or `y = 1 − τ` for `1/2 ≤ τ ≤ 1`).
pub fn on_degradable_boundary(tau: f64, y: f64, tol: f64) -> bool {
    (tau >= 1.0 - tol && (y - (tau - 1.0)).abs() <= tol)
        || ((0.5 - tol..=1.0 + tol).contains(&tau) && (y - (1.0 - tau)).abs() <= tol)
}

/// Capacity status of `(τ, y)`.
///
/// The line `y = τ` and the point `(1/2, 1/2)` (degradable and
/// antidegradable at once) report `Zero`.
pub fn capacity_region(tau: f64, y: f64, tol: f64) -> Result<CapacityStatus> {
    if !tau.is_finite() || !y.is_finite() {
        return Err(Error::InvalidArgument(format!("non-finite point ({tau}, {y})")));
    }
    if !is_completely_positive(tau, y, tol) {
        return Err(Error::NotCompletelyPositive { tau, y });
    }
    if (tau - 1.0).abs() <= tol && y <= tol {
        return Ok(CapacityStatus::Infinite);
    }
    if y >= tau - tol {
        return Ok(CapacityStatus::Zero);
    }
    if on_degradable_boundary(tau, y, tol) {
        return Ok(CapacityStatus::Exact);
    }
    // y < τ forces τ > 0 here.
    let limit = coherent_info_limit(tau, y, LogBase::Two)?;
    Ok(if limit > 0.0 { CapacityStatus::PositiveLowerBound } else { CapacityStatus::Unknown })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capacity::k_noise;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const TOL: f64 = 1e-10;

    fn id() -> RealMatrix {
        RealMatrix::identity(2, 2)
    }

    #[test]
    fn make_channel_examples() {
        let ch = make_channel(id(), RealMatrix::zeros(2, 2), TOL).unwrap();
        assert_eq!((ch.tau(), ch.y()), (1.0, 0.0));
        assert_eq!(ch.classify(), ChannelClass::B2Identity);

        let ch = make_channel(id(), id() * 0.5, TOL).unwrap();
        assert_abs_diff_eq!(ch.y(), 0.5, epsilon = 1e-15);
        assert_eq!(ch.classify(), ChannelClass::B2);

        let err = make_channel(id() * 0.5f64.sqrt(), id() * 0.2, TOL).unwrap_err();
        match err {
            Error::NotCompletelyPositive { tau, y } => {
                assert_abs_diff_eq!(tau, 0.5, epsilon = 1e-12);
                assert_abs_diff_eq!(y, 0.2, epsilon = 1e-12);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn make_channel_rejects_bad_noise() {
        let asym = RealMatrix::from_row_slice(2, 2, &[1.0, 0.3, 0.0, 1.0]);
        assert!(matches!(make_channel(id(), asym, TOL), Err(Error::InvalidArgument(_))));
        let indefinite = diag2(2.0, -1.0);
        assert!(matches!(
            make_channel(RealMatrix::zeros(2, 2), indefinite, TOL),
            Err(Error::NoiseNotPositive { .. })
        ));
    }

    #[test]
    fn apply_examples() {
        let v = CovarianceMatrix::squeezed_vacuum(0.4);
        let ident = OneModeChannel::canonical(ChannelClass::B2Identity, 1.0, 0.0).unwrap();
        assert_eq!(ident.apply(&v).unwrap(), v);

        let b2 = OneModeChannel::canonical(ChannelClass::B2, 1.0, 0.7).unwrap();
        let out = b2.apply(&CovarianceMatrix::vacuum(1)).unwrap();
        assert_abs_diff_eq!(*out.matrix(), id() * 1.7, epsilon = 1e-15);

        let loss = OneModeChannel::canonical(ChannelClass::CLoss, 0.25, 0.0).unwrap();
        let out = loss.apply(&CovarianceMatrix::vacuum(1)).unwrap();
        assert_abs_diff_eq!(*out.matrix(), id(), epsilon = 1e-15);

        assert!(loss.apply(&CovarianceMatrix::vacuum(2)).is_err());
    }

    #[test]
    fn classify_examples() {
        let at = |t: f64, y: f64| OneModeChannel::from_tau_y(t, y, TOL).unwrap().classify();
        assert_eq!(at(1.0, 0.0), ChannelClass::B2Identity);
        assert_eq!(at(4.0, 3.0), ChannelClass::CAmp);
        assert_eq!(at(-0.5, 2.0), ChannelClass::D);
        assert_eq!(at(0.3, 1.0), ChannelClass::CLoss);
        assert_eq!(at(0.0, 1.0), ChannelClass::A1);
        assert_eq!(at(1.0 + 1e-12, 0.3), ChannelClass::B2);
    }

    #[test]
    fn entanglement_breaking_examples() {
        assert!(is_entanglement_breaking(1.0, 2.0));
        assert!(!is_entanglement_breaking(1.0, 0.0));
        assert!(is_entanglement_breaking(0.5, 1.6));
        assert!(is_entanglement_breaking(-0.5, 1.5));
    }

    #[test]
    fn capacity_region_examples() {
        assert_eq!(capacity_region(0.5, 0.5, TOL).unwrap(), CapacityStatus::Zero);
        assert!(on_degradable_boundary(0.5, 0.5, TOL));
        assert_eq!(capacity_region(4.0, 3.0, TOL).unwrap(), CapacityStatus::Exact);
        assert_eq!(capacity_region(1.0, 0.0, TOL).unwrap(), CapacityStatus::Infinite);
        assert_eq!(capacity_region(1.0, 2.0, TOL).unwrap(), CapacityStatus::Zero);
        assert_eq!(capacity_region(0.75, 0.25, TOL).unwrap(), CapacityStatus::Exact);
        assert!(matches!(
            capacity_region(0.2, 0.1, TOL),
            Err(Error::NotCompletelyPositive { .. })
        ));
        // (0.75, 0.6): K = 0.175, K/|1 − τ| = 0.7, limit
        // 0.7 log2 0.7 − 1.7 log2 1.7 + log2 3 = −0.0766 bits.
        assert_eq!(capacity_region(0.75, 0.6, TOL).unwrap(), CapacityStatus::Unknown);
        // (0.75, 0.35): K/|1 − τ| = 0.2, limit = 0.8050 bits.
        assert_eq!(capacity_region(0.75, 0.35, TOL).unwrap(), CapacityStatus::PositiveLowerBound);
        // Deep amplifier noise: K = 0.45, limit < 0.
        assert_eq!(capacity_region(3.0, 2.9, TOL).unwrap(), CapacityStatus::Unknown);
    }

    #[test]
    fn canonical_forms_round_trip_through_classify() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let n: f64 = rng.gen_range(0.01..5.0);
            for class in ChannelClass::ALL {
                let tau = match class {
                    ChannelClass::CLoss => rng.gen_range(0.01..0.99),
                    ChannelClass::CAmp => rng.gen_range(1.01..10.0),
                    ChannelClass::D => rng.gen_range(-10.0..-0.01),
                    _ => 1.0,
                };
                let ch = OneModeChannel::canonical(class, tau, n).unwrap();
                assert_eq!(ch.classify(), class, "tau = {tau}, n = {n}");
            }
        }
    }

    #[test]
    fn exact_region_has_vanishing_k() {
        for (t, y) in [(4.0, 3.0), (0.75, 0.25), (0.5, 0.5), (1.7, 0.7)] {
            assert!(on_degradable_boundary(t, y, TOL));
            assert!(k_noise(t, y).unwrap().abs() <= TOL);
        }
    }

    #[test]
    fn covariance_validation() {
        assert!(CovarianceMatrix::new(id() * 0.5).is_err());
        assert!(CovarianceMatrix::new(RealMatrix::identity(3, 3)).is_err());
        let v = CovarianceMatrix::new(RealMatrix::from_row_slice(2, 2, &[2.0, 0.5, 0.5, 1.0])).unwrap();
        assert_abs_diff_eq!(v.mean_photon_number(), 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(CovarianceMatrix::thermal(1.5).unwrap().mean_photon_number(), 1.5);
        assert!(CovarianceMatrix::thermal(-1.0).is_err());
    }

    #[test]
    fn apply_preserves_uncertainty_relation() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut checked = 0;
        while checked < 10_000 {
            let tau: f64 = rng.gen_range(-3.0..4.0);
            let y = (tau - 1.0).abs() + rng.gen_range(0.0..2.0);
            let ch = OneModeChannel::from_tau_y(tau, y, TOL).unwrap();
            let zeta: f64 = rng.gen_range(-1.0..1.0);
            let n: f64 = rng.gen_range(0.0..3.0);
            let theta: f64 = rng.gen_range(0.0..std::f64::consts::PI);
            let rot = nalgebra::Rotation2::new(theta).into_inner();
            let v = &rot * CovarianceMatrix::squeezed_vacuum(zeta).matrix() * rot.transpose()
                * (2.0 * n + 1.0);
            let v = CovarianceMatrix::new(RealMatrix::from_iterator(2, 2, v.iter().copied())).unwrap();
            let out = ch.apply(&v).unwrap();
            assert!(out.matrix().determinant() >= 1.0 - 1e-9);
            checked += 1;
        }
    }

    proptest! {
        #[test]
        fn entanglement_breaking_points_have_zero_capacity(tau in 0.0..10.0f64, extra in 0.0..5.0f64) {
            let y = tau + 1.0 + extra;
            prop_assert!(is_entanglement_breaking(tau, y));
            prop_assert_eq!(capacity_region(tau, y, TOL).unwrap(), CapacityStatus::Zero);
        }
    }
}
