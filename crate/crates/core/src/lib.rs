//! One-mode bosonic Gaussian channels induced by a Schwarzschild black hole.
//!
//! The scattering of a late-time incoming mode `c` off a black hole whose
//! early-time horizon modes `a` and `b` start in the vacuum is modelled by
//! the three-mode isometry `exp(X)` with
//!
//! ```text
//! X = r κ (a†b† − ab) + s (a†c − ac†),     κ² = s²/r² − 1,
//! ```
//!
//! parametrised by [`BlackHoleParams`]. This crate builds the induced
//! symplectic map, reduces it to the one-mode channels seen by each output
//! mode, classifies those channels, bounds their quantum capacity through the
//! coherent information, and checks every closed form against a brute-force
//! truncated Fock-space simulation ([`fock`]).
//!
//! Quadratures use the `ħ = 2` convention throughout: the vacuum covariance
//! matrix is the identity.

pub mod blackhole;
pub mod capacity;
pub mod channel;
pub mod error;
pub mod fock;
pub mod symplectic;
pub mod verify;

pub use blackhole::{
    a_channel, a_params, c_params, b_channel, bc_complement_covariance, c_channel, c_params_from_a,
    extract_mode_channel, in_black_hole_region, inverse_map, output_covariance, BlackHolePoint, MapPreset,
    ModeTag, Parity,
};
pub use capacity::{
    capacity_report, capacity_report_with_tol, coherent_info_at, coherent_info_limit, g_entropy, gaussian_entropy,
    k_noise, pair_coherent_info, symplectic_eigenvalues, CapacityReport, CohInfoTerms, LogBase,
};
pub use channel::{
    capacity_region, is_entanglement_breaking, CapacityStatus, ChannelClass, CovarianceMatrix,
    OneModeChannel,
};
pub use error::{Error, Result};
pub use fock::{
    build_generator, exponentiate, fock_coherent_info, verify_bogoliubov, verify_channel_action,
    BogoliubovCheck, ChannelCheck, FockDensity, TruncatedOp,
};
pub use symplectic::{
    black_hole_symplectic, bogoliubov_coeffs, build_l, embed_and_quadrature, is_symplectic,
    symplectic_form, BlackHoleParams, RealMatrix,
};
pub use verify::{run_verification, Suite, VerifyConfig, VerifyReport};

/// Default absolute tolerance for symplectic, rank and region tests.
pub const DEFAULT_TOL: f64 = 1e-10;
