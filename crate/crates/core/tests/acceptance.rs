//! Acceptance criteria, one PASS/FAIL line each. Run with
//! `cargo test -p omgbh-core --test acceptance -- --nocapture` or
//! `cargo test --test acceptance`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, PI};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use omgbh_core::blackhole::{a_params, b_channel, c_params_from_a};
use omgbh_core::capacity::coherent_info_terms;
use omgbh_core::channel::on_degradable_boundary;
use omgbh_core::symplectic::symplectic_defect;
use omgbh_core::{
    black_hole_symplectic, bogoliubov_coeffs, capacity_region, capacity_report, coherent_info_at,
    coherent_info_limit, fock_coherent_info, g_entropy, in_black_hole_region, inverse_map,
    is_entanglement_breaking, pair_coherent_info, run_verification, BlackHoleParams, BlackHolePoint,
    CapacityStatus, ChannelClass, LogBase, MapPreset, Parity, Suite, VerifyConfig,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn params(r: f64, s: f64) -> BlackHoleParams {
    BlackHoleParams::new(r, s).expect("valid parameters")
}

fn within_time(elapsed: Duration, limit: Duration, what: &str) -> Result<(), String> {
    if elapsed > limit {
        Err(format!("{what} took {elapsed:?}, limit {limit:?}"))
    } else {
        Ok(())
    }
}

fn symplectic_invariants() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut worst_omega, mut worst_norm) = (0.0f64, 0.0f64);
    for _ in 0..1000 {
        let r: f64 = rng.gen_range(0.0..PI);
        let p = params(r, r + rng.gen_range(0.0..3.0));
        worst_omega = worst_omega.max(symplectic_defect(&black_hole_symplectic(&p)).unwrap());
        let (a, b, g) = bogoliubov_coeffs(&p);
        worst_norm = worst_norm.max((a * a - b * b + g * g - 1.0).abs());
    }
    within_time(start.elapsed(), Duration::from_secs(5), "1000 draws")?;
    ensure!(worst_omega <= 1e-10, "max |SΩSᵀ − Ω| = {worst_omega:e}");
    ensure!(worst_norm <= 1e-10, "max |α² − β² + γ² − 1| = {worst_norm:e}");
    Ok(format!(
        "1000 draws, max |SΩSᵀ−Ω| = {worst_omega:.1e}, max normalization error = {worst_norm:.1e}, {:?}",
        start.elapsed()
    ))
}

fn strip_geometry() -> Outcome {
    let mut worst = 0.0f64;
    let mut count = 0;
    for r in [0.0, PI / 8.0, FRAC_PI_4, 3.0 * PI / 8.0, FRAC_PI_2] {
        for k in 0..=200 {
            let s = r + 0.025 * k as f64;
            let (tau, y) = a_params(&params(r, s));
            worst = worst.max((y - tau - (2.0 * r).cos()).abs());
            ensure!(in_black_hole_region(tau, y), "r={r}, s={s}: ({tau}, {y}) outside the strip");
            if r == 0.0 {
                ensure!(is_entanglement_breaking(tau, y), "r=0, s={s} is not entanglement breaking");
            } else if s > r {
                ensure!(!is_entanglement_breaking(tau, y), "r={r}, s={s} unexpectedly entanglement breaking");
            }
            count += 1;
        }
    }
    ensure!(worst <= 1e-12, "max |y − τ − cos 2r| = {worst:e}");
    Ok(format!("{count} points, max |y−τ−cos 2r| = {worst:.1e}, r=0 line entanglement breaking"))
}

fn limiting_cases() -> Outcome {
    let (tau, y) = a_params(&params(0.0, 1.0));
    ensure!((tau, y) == (1.0, 2.0), "r=0, s=1 gave ({tau}, {y})");
    ensure!(is_entanglement_breaking(tau, y), "(1, 2) not entanglement breaking");
    ensure!(
        capacity_region(tau, y, 1e-10).unwrap() == CapacityStatus::Zero,
        "(1, 2) not in the zero-capacity region"
    );

    let (tau, y) = a_params(&params(FRAC_PI_2, PI));
    ensure!((tau - 4.0).abs() <= 1e-12 && (y - 3.0).abs() <= 1e-12, "r=π/2, s=π gave ({tau}, {y})");
    ensure!(on_degradable_boundary(tau, y, 1e-10), "(4, 3) not degradable");
    let report = capacity_report(tau, y, LogBase::Two).unwrap();
    ensure!(report.status == CapacityStatus::Exact, "status {:?}", report.status);
    let exact = report.exact_value.ok_or("no exact value")?;
    let closed = (tau / (tau - 1.0)).log2();
    ensure!((exact - closed).abs() <= 1e-12, "exact {exact} vs log2 τ/(τ−1) = {closed}");
    ensure!((exact - (4.0f64 / 3.0).log2()).abs() <= 1e-12, "exact {exact} vs log2(4/3)");
    for s in [2.0, 2.5, 3.5] {
        let (t, y) = a_params(&params(FRAC_PI_2, s));
        let want = 4.0 * s * s / (PI * PI);
        ensure!((t - want).abs() <= 1e-12 && (y - (want - 1.0)).abs() <= 1e-12, "r=π/2, s={s}");
    }
    Ok(format!("(1,2) EB/Zero; (4,3) degradable, Q = {exact:.12} bits"))
}

fn coherent_info_limit_consistency() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut worst_k0 = 0.0f64;
    for i in 0..20 {
        let tau = 0.55 + 2.45 * (i + 1) as f64 / 20.0;
        let gap = (1.0 - tau).abs();
        for j in 0..20 {
            let y = gap + 0.1 * j as f64;
            let finite = coherent_info_at(tau, y, 1e6, LogBase::Two).unwrap();
            let limit = coherent_info_limit(tau, y, LogBase::Two).unwrap();
            worst = worst.max((finite - limit).abs());
        }
        let k0 = coherent_info_limit(tau, gap, LogBase::Two).unwrap();
        worst_k0 = worst_k0.max((k0 - (tau / gap).log2()).abs());
    }
    within_time(start.elapsed(), Duration::from_secs(10), "grid")?;
    ensure!(worst <= 1e-3, "max |I(N=1e6) − limit| = {worst:e}");
    ensure!(worst_k0 <= 1e-12, "max K=0 deviation {worst_k0:e}");
    Ok(format!("400 points, max |I(N=1e6)−limit| = {worst:.1e} bits, K=0 deviation {worst_k0:.1e}"))
}

fn unit_transmissivity_branch() -> Outcome {
    let mut worst = 0.0f64;
    for base in [LogBase::Two, LogBase::E] {
        for y in [0.25, 0.5, 1.0, 2.0, 4.0] {
            let k = y / 2.0;
            let at_one = coherent_info_limit(1.0, y, base).unwrap();
            let constant = -1.0 / base.value().ln() - base.log(k);
            ensure!((at_one - constant).abs() <= 1e-12, "τ=1 branch is not −1/ln b − log K");
            for eps in [1e-4, -1e-4] {
                let tau: f64 = 1.0 + eps;
                let finite = coherent_info_at(tau, (1.0 - tau).abs() + 2.0 * k, 1e7, base).unwrap();
                worst = worst.max((finite - at_one).abs());
            }
        }
    }
    ensure!(worst <= 1e-2, "max deviation {worst:e}");
    let nats = coherent_info_limit(1.0, 1.0, LogBase::E).unwrap();
    ensure!((nats - (-1.0 - 0.5f64.ln())).abs() <= 1e-12, "τ=1, y=1 in nats: {nats}");
    Ok(format!("max |I(1±1e-4, N=1e7) − limit(1)| = {worst:.1e}; nats constant −1 − ln K"))
}

fn two_to_one_inverse() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = 0.0f64;
    let mut n = 0;
    while n < 100 {
        let tau: f64 = rng.gen_range(0.0..4.0);
        let y = tau + rng.gen_range(-1.0..1.0);
        if !(y > (1.0 - tau).abs() + 1e-6 && (y - tau).abs() < 1.0 - 1e-6 && tau > 1e-6) {
            continue;
        }
        let pt = BlackHolePoint::new(tau, y).unwrap();
        for parity in [Parity::Even, Parity::Odd] {
            let p = inverse_map(&pt, parity).unwrap().ok_or(format!("no {parity} solution at ({tau}, {y})"))?;
            let (t, yy) = a_params(&p);
            worst = worst.max((t - tau).abs().max((yy - y).abs()));
        }
        n += 1;
    }
    ensure!(worst <= 1e-9, "max round-trip error {worst:e}");

    let mut line_points = 0;
    for preset in [MapPreset::Fig5, MapPreset::Fig6] {
        for (tau, y) in preset.points() {
            if (tau + y - 1.0).abs() > 1e-12 {
                continue;
            }
            let pt = BlackHolePoint::new(tau, y).unwrap();
            let (tc, yc) = c_params_from_a(&pt, Parity::Even).unwrap().ok_or("missing even image")?;
            ensure!(
                (tc - y).abs() <= 1e-9 && (yc - tau).abs() <= 1e-9,
                "({tau}, {y}) ↦ ({tc}, {yc}) is not the reversed line point"
            );
            line_points += 1;
        }
    }
    for ((tau, y), want) in [((1.0, 0.0), (0.0, 1.0)), ((0.0, 1.0), (1.0, 0.0))] {
        let (tc, yc) = c_params_from_a(&BlackHolePoint::new(tau, y).unwrap(), Parity::Even)
            .unwrap()
            .ok_or("missing endpoint image")?;
        ensure!(
            (tc - want.0).abs() <= 1e-9 && (yc - want.1).abs() <= 1e-9,
            "endpoint ({tau}, {y}) ↦ ({tc}, {yc})"
        );
    }
    Ok(format!(
        "100 points × 2 parities, max error {worst:.1e}; {line_points} preset points on y=1−τ map reversed"
    ))
}

fn interior_mode_conjugate() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut largest = f64::NEG_INFINITY;
    for _ in 0..500 {
        let r: f64 = rng.gen_range(0.0..1.5 * PI);
        let s = r + rng.gen_range(0.01..3.0);
        let ch = b_channel(&params(r, s));
        ensure!(ch.tau() < 0.0 && ch.classify() == ChannelClass::D, "r={r}, s={s}: τ_b = {}", ch.tau());
        largest = largest.max(ch.tau());
    }
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let r: f64 = rng.gen_range(0.0..1.5 * PI);
        worst = worst.max(b_channel(&params(r, r)).tau().abs());
    }
    ensure!(worst <= 1e-10, "s=r gives |τ_b| = {worst:e}");
    Ok(format!("500 draws class D (largest τ_b = {largest:.2e}); s=r max |τ_b| = {worst:.1e}"))
}

fn complementary_positivity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut total, mut interior, mut positive) = (0, 0, 0);
    let mut worst_a = f64::NEG_INFINITY;
    while total < 50 {
        let tau: f64 = rng.gen_range(0.0..3.0);
        let y = tau + rng.gen_range(0.0..1.0);
        if !(tau > 0.0 && y >= (1.0 - tau).abs() && in_black_hole_region(tau, y)) {
            continue;
        }
        let p = inverse_map(&BlackHolePoint::new(tau, y).unwrap(), Parity::Even)
            .unwrap()
            .ok_or("no parameters")?;
        let (ic_a, ic_bc) = pair_coherent_info(&p, 2.0, LogBase::Two).unwrap();
        ensure!(ic_a <= 1e-9, "({tau}, {y}): ic_a = {ic_a}");
        ensure!(ic_bc >= -1e-9 && (ic_bc + ic_a).abs() <= 1e-12, "({tau}, {y}): ic_bc = {ic_bc}");
        worst_a = worst_a.max(ic_a);
        let margin = (y - tau).min(1.0 - (y - tau)).min(y - (1.0 - tau).abs());
        if margin > 1e-3 {
            interior += 1;
            if ic_bc > 0.01 {
                positive += 1;
            }
        }
        total += 1;
    }
    let fraction = positive as f64 / interior.max(1) as f64;
    ensure!(fraction >= 0.9, "only {positive}/{interior} interior points have ic_bc > 0.01");
    Ok(format!("50 points, max ic_a = {worst_a:.1e}; ic_bc > 0.01 bits at {positive}/{interior} interior points"))
}

fn fock_oracle_equivalence() -> Outcome {
    let cfg = VerifyConfig { suite: Suite::All, cutoff: 20, seed: 7, ..Default::default() };
    let report = run_verification(&cfg).map_err(|e| e.to_string())?;
    within_time(Duration::from_secs_f64(report.elapsed_seconds), Duration::from_secs(120), "verify all")?;
    if let Some(bad) = report.failures().next() {
        return Err(format!("{} failing checks, first: {bad}", report.failures().count()));
    }
    ensure!(report.max_covariance_residual < 1e-6, "covariance residual {:e}", report.max_covariance_residual);
    ensure!(report.max_coh_info_residual < 1e-3, "coherent information residual {:e}", report.max_coh_info_residual);
    Ok(format!(
        "{} checks, max covariance residual {:.1e}, max coherent-information residual {:.1e}, {:.1}s",
        report.checks.len(),
        report.max_covariance_residual,
        report.max_coh_info_residual,
        report.elapsed_seconds
    ))
}

fn worked_point() -> Outcome {
    let t = coherent_info_terms(0.75, 0.25, 1.0, LogBase::Two).unwrap();
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-12;
    ensure!(close(t.n_out, 0.75), "N′ = {}", t.n_out);
    ensure!(close(t.d, 1.25), "D = {}", t.d);
    ensure!(close(t.x_plus, 0.0), "x₊ = {}", t.x_plus);
    ensure!(close(t.x_minus, 0.25), "x₋ = {}", t.x_minus);
    let expected = g_entropy(0.75, LogBase::Two).unwrap() - g_entropy(0.25, LogBase::Two).unwrap();
    ensure!(close(t.value, expected), "value {} vs g(0.75) − g(0.25) = {expected}", t.value);

    let p = inverse_map(&BlackHolePoint::new(0.75, 0.25).unwrap(), Parity::Even)
        .unwrap()
        .ok_or("no parameters")?;
    ensure!((p.r() - FRAC_PI_3).abs() <= 1e-12 && (p.s() - FRAC_PI_3).abs() <= 1e-12, "{p:?}");
    let fock = fock_coherent_info(&p, 1.0, 20, LogBase::Two).unwrap();
    ensure!((fock - t.value).abs() <= 1e-3, "Fock {fock} vs closed form {}", t.value);
    Ok(format!("I = {:.6} bits, Fock oracle {fock:.6} (|Δ| = {:.1e})", t.value, (fock - t.value).abs()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("symplectic invariants", symplectic_invariants),
        ("strip geometry", strip_geometry),
        ("limiting cases", limiting_cases),
        ("coherent-information limit", coherent_info_limit_consistency),
        ("tau = 1 branch", unit_transmissivity_branch),
        ("two-to-one inverse map", two_to_one_inverse),
        ("interior mode conjugating", interior_mode_conjugate),
        ("complementary positivity", complementary_positivity),
        ("Fock oracle equivalence", fock_oracle_equivalence),
        ("worked numeric point", worked_point),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|_| Err("panicked".to_string()));
        match outcome {
            Ok(detail) => println!("PASS [{:>2}] {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL [{:>2}] {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
