//! Acceptance suite. Runs with its own `main` so that each criterion prints a
//! single PASS/FAIL line in ordinary `cargo test` output.

#![allow(clippy::needless_range_loop)]

use std::f64::consts::FRAC_PI_4;
use std::process::Command;
use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;

use qsteer::harness::{
    run_falsification, run_family_sweep, with_workers, Family, GridSpec, Theorems,
};
use qsteer::linalg::{psd_sqrt, Qubit};
use qsteer::measures::{
    concurrence, concurrence_pure, correlation_singular_values, f_value, steerability,
};
use qsteer::qstate::{
    bell_like, random_state, random_unitary, werner_like, RankPolicy, SamplerConfig,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn c1_pure_equality() -> Outcome {
    let start = Instant::now();
    let cfg = SamplerConfig::haar_pure(11, 10_000);
    let worst = (0..cfg.count)
        .map(|i| {
            let rho = random_state(&cfg, i).unwrap();
            (steerability(&rho) - concurrence(&rho)).abs()
        })
        .fold(0.0f64, f64::max);
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst <= 1e-9 && secs < 5.0,
        format!("max |S - C| = {worst:.2e} in {secs:.2} s"),
    )
}

fn c2_c3_theorems() -> (Outcome, Outcome) {
    let start = Instant::now();
    let cfg = SamplerConfig::ginibre(RankPolicy::Uniform, 2024, 100_000);
    let s = with_workers(1, || run_falsification(&cfg, Theorems::BOTH)).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let c2 = outcome(
        s.checked == 100_000 && s.passed() && secs < 60.0,
        format!(
            "{} states, {} violations, worst margins lower {:.2e} upper {:.2e}, {secs:.1} s on one worker",
            s.checked,
            s.violations.len(),
            s.worst_margin_lower,
            s.worst_margin_upper
        ),
    );
    let c3 = outcome(
        s.worst_coherence_identity <= 1e-9 && s.worst_coherence_inequality >= -1e-9,
        format!(
            "identity residual {:.2e}, inequality slack {:.2e}",
            s.worst_coherence_identity, s.worst_coherence_inequality
        ),
    );
    (c2, c3)
}

fn channel_grid(family: Family) -> Vec<qsteer::harness::SweepRecord> {
    let mut records = Vec::new();
    for target in [Qubit::A, Qubit::B] {
        let grid = GridSpec::Channel {
            theta: None,
            theta_steps: 50,
            eta_steps: 50,
            target,
        };
        records.extend(run_family_sweep(family, grid).unwrap());
    }
    records
}

fn c4_amplitude_damping() -> Outcome {
    let records = channel_grid(Family::Bad);
    let worst = records
        .iter()
        .map(|r| r.max_abs_discrepancy)
        .fold(0.0, f64::max);
    // At η = 1 the state is separable and ρρ̃ vanishes entirely.
    let rank_ok = records.iter().all(|r| {
        let big = r.lambda.iter().filter(|&&l| l > 1e-9).count();
        if r.eta_or_p < 1.0 {
            big == 1
        } else {
            big == 0
        }
    });
    outcome(
        worst <= 1e-8 && rank_ok,
        format!(
            "{} grid points, worst discrepancy {worst:.2e}, rank-one spectrum {rank_ok}",
            records.len()
        ),
    )
}

fn c5_phase_damping() -> Outcome {
    let records = channel_grid(Family::Bpd);
    let mut worst_s = 0.0f64;
    let mut worst_p = 0.0f64;
    let mut worst_t = 0.0f64;
    let mut rank_ok = true;
    for r in &records {
        worst_s = worst_s.max((r.s_num - r.c_num).abs());
        let sin2 = (2.0 * r.theta).sin();
        worst_p = worst_p.max((r.purity_num - (1.0 - 0.5 * r.eta_or_p * sin2 * sin2)).abs());
        let diag = [r.c_num, -r.c_num, 1.0];
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { diag[i] } else { 0.0 };
                worst_t = worst_t.max((r.correlation[i][j] - want).abs());
            }
        }
        // At η = 0 the state is still pure and only one eigenvalue survives.
        let big = r.lambda.iter().filter(|&&l| l > 1e-9).count();
        rank_ok &= big == if r.eta_or_p > 0.0 { 2 } else { 1 };
    }
    outcome(
        worst_s <= 1e-9 && worst_p <= 1e-10 && worst_t <= 1e-9 && rank_ok,
        format!("|S - C| {worst_s:.2e}, purity {worst_p:.2e}, T {worst_t:.2e}, rank-two spectrum {rank_ok}"),
    )
}

fn c6_werner_unitary() -> Outcome {
    let records = run_family_sweep(
        Family::Wu,
        GridSpec::WernerRandom {
            count: 1000,
            seed: 99,
        },
    )
    .unwrap();
    let worst = records
        .iter()
        .map(|r| r.max_abs_discrepancy)
        .fold(0.0, f64::max);
    let mut worst_eig = 0.0f64;
    let mut worst_p = 0.0f64;
    for r in &records {
        let p = r.eta_or_p;
        let phi = bell_like(r.theta)
            .unwrap()
            .transformed(&random_unitary(r.unitary_seed.unwrap(), 0))
            .unwrap();
        let cp = concurrence_pure(&phi);
        let a = (1.0 + 3.0 * p) * (1.0 - p);
        let tail = (1.0 - p).powi(2) / 16.0;
        let l = r.lambda;
        worst_eig = worst_eig
            .max((l[0] + l[1] - (p * p * cp * cp + a / 8.0)).abs())
            .max((l[0] * l[1] - (a / 16.0).powi(2)).abs())
            .max((l[2] - tail).abs())
            .max((l[3] - tail).abs());
        worst_p = worst_p.max((r.purity_num - (1.0 + 3.0 * p * p) / 4.0).abs());
    }
    outcome(
        records.len() == 1000 && worst <= 1e-8 && worst_eig <= 1e-9 && worst_p <= 1e-10,
        format!(
            "closed forms {worst:.2e}, eigenvalue relations {worst_eig:.2e}, purity {worst_p:.2e}"
        ),
    )
}

fn c7_werner_thresholds() -> Outcome {
    let bell = bell_like(FRAC_PI_4).unwrap();
    let c_thr = 1.0 / 3.0;
    let s_thr = 1.0 / 3f64.sqrt();
    let n = 10_000;
    let mut bad = Vec::new();
    for i in 0..n {
        let p = i as f64 / (n - 1) as f64;
        let rho = werner_like(p, &bell).unwrap();
        let (c, s) = (concurrence(&rho), steerability(&rho));
        if (p > c_thr + 1e-9) != (c > 1e-9) {
            bad.push(format!("C at p={p}: {c:e}"));
        }
        if (p > s_thr + 1e-9) != (s > 1e-9) {
            bad.push(format!("S at p={p}: {s:e}"));
        }
    }
    outcome(
        bad.is_empty(),
        format!(
            "{n} grid points, {} mismatches {:?}",
            bad.len(),
            bad.first()
        ),
    )
}

fn c8_f_routes() -> Outcome {
    let cfg = SamplerConfig::ginibre(RankPolicy::Uniform, 2024, 100_000);
    let worst = (0..cfg.count)
        .into_par_iter()
        .map(|i| {
            let rho = random_state(&cfg, i).unwrap();
            let t = correlation_singular_values(&rho);
            let via_sv = (t[0] * t[0] + t[1] * t[1] + t[2] * t[2]).sqrt();
            (f_value(&rho) - via_sv).abs()
        })
        .reduce(|| 0.0, f64::max);
    outcome(
        worst <= 1e-10,
        format!("max |F_frob - F_sv| = {worst:.2e} over 1e5 states"),
    )
}

/// σy⊗σy as a real matrix: the antidiagonal (-1, 1, 1, -1).
fn yy_form(v: &[Complex64; 4]) -> f64 {
    (-v[0] * v[3] + v[1] * v[2] + v[2] * v[1] - v[3] * v[0]).norm()
}

fn c9_convex_roof() -> Outcome {
    let cfg = SamplerConfig::ginibre(RankPolicy::Uniform, 77, 100);
    let worst = (0..cfg.count)
        .into_par_iter()
        .map(|i| {
            let rho = random_state(&cfg, i).unwrap();
            let c = concurrence(&rho);
            let root = psd_sqrt(rho.matrix()).unwrap();
            let mut gap = f64::INFINITY;
            for k in 0..10_000 {
                let u = random_unitary(1000 + i, k);
                let w = &root * &u;
                // Column j of √ρ·U is √p_j |ψ_j⟩, so Σ_j |v_jᵀ YY v_j| = Σ_j p_j C(ψ_j).
                let avg: f64 = (0..4)
                    .map(|j| yy_form(&[w[(0, j)], w[(1, j)], w[(2, j)], w[(3, j)]]))
                    .sum();
                gap = gap.min(avg - c);
            }
            gap
        })
        .reduce(|| f64::INFINITY, f64::min);
    outcome(
        worst >= -1e-6,
        format!("min (average - C) = {worst:.2e} over 100 x 1e4 decompositions"),
    )
}

fn run_bin(args: &[&str]) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_qsteer"))
        .args(args)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out.stdout
}

fn c10_reproducibility() -> Outcome {
    let base = ["--count", "2000", "--seed", "5", "--ranks", "uniform"];
    let mut same = true;
    for cmd in ["sample", "verify"] {
        let runs: Vec<Vec<u8>> = ["1", "1", "4", "0"]
            .iter()
            .map(|t| {
                let mut args = vec![cmd];
                args.extend(base);
                args.extend(["--threads", t]);
                run_bin(&args)
            })
            .collect();
        same &= !runs[0].is_empty() && runs.iter().all(|r| r == &runs[0]);
    }
    outcome(
        same,
        format!("sample and verify byte-identical across runs and 1/4/all workers: {same}"),
    )
}

fn main() {
    let (c2, c3) = c2_c3_theorems();
    let results = [
        ("1 pure-state S = C", c1_pure_equality()),
        ("2 lower and upper bounds", c2),
        ("3 coherence identity and inequality", c3),
        ("4 amplitude-damping family", c4_amplitude_damping()),
        ("5 phase-damping family", c5_phase_damping()),
        ("6 Werner-unitary family", c6_werner_unitary()),
        ("7 Werner thresholds", c7_werner_thresholds()),
        ("8 F via Frobenius vs singular values", c8_f_routes()),
        ("9 convex-roof sanity", c9_convex_roof()),
        ("10 reproducibility", c10_reproducibility()),
    ];
    let mut failed = 0;
    for (name, o) in &results {
        println!(
            "criterion {name}: {} ({})",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        failed += usize::from(!o.pass);
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
