//! Seeded verification runs of the Fock oracle against the closed forms.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::blackhole::a_params;
use crate::capacity::{coherent_info_at, LogBase};
use crate::channel::CovarianceMatrix;
use crate::error::{Error, Result};
use crate::fock::{
    check_channel_with, fock_coherent_info_with, verify_bogoliubov, BlackHoleEvolution, CodeState,
};
use crate::symplectic::BlackHoleParams;

/// Largest `rκ` among random draws; keeps pair creation mild enough for cutoff 20.
pub const MAX_PAIR_STRENGTH: f64 = 0.4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Bogoliubov,
    Channel,
    Entropy,
    All,
}

impl Suite {
    fn includes(self, other: Suite) -> bool {
        self == Suite::All || self == other
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Bogoliubov => "bogoliubov",
            Self::Channel => "channel",
            Self::Entropy => "entropy",
            Self::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bogoliubov" => Ok(Self::Bogoliubov),
            "channel" => Ok(Self::Channel),
            "entropy" => Ok(Self::Entropy),
            "all" => Ok(Self::All),
            other => Err(Error::InvalidArgument(format!("unknown suite {other:?}"))),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub suite: Suite,
    pub cutoff: usize,
    pub seed: u64,
    /// Random parameter points per suite, on top of the fixed ones.
    pub draws: usize,
    pub covariance_tol: f64,
    pub coh_info_tol: f64,
    pub entropy_tol: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            suite: Suite::All,
            cutoff: 20,
            seed: 7,
            draws: 20,
            covariance_tol: 1e-6,
            coh_info_tol: 1e-3,
            entropy_tol: 1e-4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub suite: Suite,
    pub name: String,
    pub r: f64,
    pub s: f64,
    pub residual: f64,
    pub tol: f64,
    pub passed: bool,
}

impl fmt::Display for CheckRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:<10} {:<28} r={:.6} s={:.6} residual={:.3e} tol={:.0e}",
            if self.passed { "PASS" } else { "FAIL" },
            self.suite,
            self.name,
            self.r,
            self.s,
            self.residual,
            self.tol
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub config: VerifyConfig,
    pub checks: Vec<CheckRecord>,
    pub max_covariance_residual: f64,
    pub max_coh_info_residual: f64,
    pub elapsed_seconds: f64,
    pub passed: bool,
}

impl VerifyReport {
    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Reproducible draws with `r ∈ [0, π/2]` and `rκ² ∈ [0, MAX_PAIR_STRENGTH²]`.
pub fn draw_params(seed: u64, count: usize) -> Vec<BlackHoleParams> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let r: f64 = rng.gen_range(0.0..=std::f64::consts::FRAC_PI_2);
            let rk2: f64 = rng.gen_range(0.0..=MAX_PAIR_STRENGTH * MAX_PAIR_STRENGTH);
            BlackHoleParams::new(r, (r * r + rk2).sqrt()).expect("s >= r by construction")
        })
        .collect()
}

/// Parameters of the worked example `(τ, y) = (0.75, 0.25)`: `r = s = π/3`.
pub fn worked_point() -> BlackHoleParams {
    let third = std::f64::consts::FRAC_PI_3;
    BlackHoleParams::new(third, third).expect("valid")
}

pub fn run_verification(cfg: &VerifyConfig) -> Result<VerifyReport> {
    let start = Instant::now();
    let draws = draw_params(cfg.seed, cfg.draws);
    let mut checks = Vec::new();
    let mut max_cov = 0.0f64;
    let mut max_coh = 0.0f64;
    let mut record = |suite, name: String, p: &BlackHoleParams, residual: f64, tol: f64| {
        checks.push(CheckRecord {
            suite,
            name,
            r: p.r(),
            s: p.s(),
            residual,
            tol,
            passed: residual <= tol,
        });
    };

    if cfg.suite.includes(Suite::Bogoliubov) {
        let fixed = [
            BlackHoleParams::new(0.0, 0.0)?,
            BlackHoleParams::new(0.1, 0.12)?,
            worked_point(),
        ];
        for p in fixed.iter().chain(&draws) {
            let c = verify_bogoliubov(p, cfg.cutoff, cfg.covariance_tol)?;
            record(Suite::Bogoliubov, "bogoliubov L".into(), p, c.residual, cfg.covariance_tol);
        }
    }

    let mut evolutions: Vec<BlackHoleEvolution> = Vec::new();
    let needs_evolution = cfg.suite.includes(Suite::Channel) || cfg.suite.includes(Suite::Entropy);
    if needs_evolution {
        for p in std::iter::once(&worked_point()).chain(&draws) {
            evolutions.push(BlackHoleEvolution::new(p, cfg.cutoff)?);
        }
    }

    if cfg.suite.includes(Suite::Channel) {
        let thermal = (cfg.cutoff as f64 / 4.0).min(1.0);
        let inputs = [
            (CodeState::Thermal(0.0), CovarianceMatrix::vacuum(1)),
            (CodeState::Thermal(thermal), CovarianceMatrix::thermal(thermal)?),
            (CodeState::Squeezed(0.3), CovarianceMatrix::squeezed_vacuum(0.3)),
        ];
        for evo in &evolutions {
            for (state, v) in &inputs {
                let c = check_channel_with(evo, *state, v, cfg.covariance_tol)?;
                max_cov = max_cov.max(c.max_residual);
                record(
                    Suite::Channel,
                    format!("covariance {}", state.label()),
                    evo.params(),
                    c.max_residual,
                    cfg.covariance_tol,
                );
                if matches!(state, CodeState::Thermal(_)) {
                    record(
                        Suite::Channel,
                        format!("entropy(a) {}", state.label()),
                        evo.params(),
                        c.a_entropy_residual,
                        cfg.entropy_tol,
                    );
                }
            }
        }
    }

    if cfg.suite.includes(Suite::Entropy) {
        let cap = cfg.cutoff as f64 / 6.0;
        let photons: Vec<f64> = [0.5, 1.0].into_iter().map(|n: f64| n.min(cap)).collect();
        for evo in &evolutions {
            let p = evo.params();
            let (tau, y) = a_params(p);
            if !(tau > 0.0) {
                continue;
            }
            for &n in &photons {
                let fock = fock_coherent_info_with(evo, n, LogBase::Two)?;
                let closed = coherent_info_at(tau, y, n, LogBase::Two)?;
                let residual = (fock - closed).abs();
                max_coh = max_coh.max(residual);
                record(Suite::Entropy, format!("coherent info N={n}"), p, residual, cfg.coh_info_tol);
            }
        }
    }

    let passed = checks.iter().all(|c| c.passed);
    Ok(VerifyReport {
        config: cfg.clone(),
        checks,
        max_covariance_residual: max_cov,
        max_coh_info_residual: max_coh,
        elapsed_seconds: start.elapsed().as_secs_f64(),
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn draws_are_reproducible_and_valid() {
        let a = draw_params(7, 50);
        assert_eq!(a, draw_params(7, 50));
        assert_ne!(a, draw_params(8, 50));
        for p in a {
            assert!(p.s() >= p.r());
            assert!(p.r_kappa() <= MAX_PAIR_STRENGTH + 1e-12);
            assert!(p.r() <= std::f64::consts::FRAC_PI_2);
        }
    }

    #[test]
    fn suite_parsing() {
        for s in [Suite::Bogoliubov, Suite::Channel, Suite::Entropy, Suite::All] {
            assert_eq!(s.as_str().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn bogoliubov_suite_passes_at_cutoff_12() {
        let cfg = VerifyConfig { suite: Suite::Bogoliubov, cutoff: 12, draws: 5, ..Default::default() };
        let report = run_verification(&cfg).unwrap();
        assert!(report.passed, "{:#?}", report.failures().collect::<Vec<_>>());
        assert_eq!(report.checks.len(), 8);
    }

    #[test]
    fn tiny_cutoff_fails_with_truncation_residuals() {
        let cfg = VerifyConfig { cutoff: 2, draws: 3, ..Default::default() };
        let report = run_verification(&cfg).unwrap();
        assert!(!report.passed);
        assert!(report.max_covariance_residual > 1e-6);
    }
}
