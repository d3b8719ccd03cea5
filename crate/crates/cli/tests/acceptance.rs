use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::Instant;

use boon_core::{
    best_of_m_curve, boon_nonparametric, boon_parametric_gaussian, fit_gaussian,
    gaussian_boon_valtest, monte_carlo_ci_gaussian, smoothed_bootstrap_ci, std_normal_expected_max,
    BestSingleModel, Boon, CurveOptions, Direction, EstimatorKind, GaussianParams,
    ResamplingConfig, ResultPool, RunRecord,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use serde_json::Value;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn draw_pool(params: &GaussianParams, m: usize, rng: &mut ChaCha20Rng) -> Vec<RunRecord> {
    let resid = (1.0 - params.rho() * params.rho()).sqrt();
    (0..m)
        .map(|_| {
            let z1: f64 = rng.sample(StandardNormal);
            let z2: f64 = rng.sample(StandardNormal);
            RunRecord::new(
                params.mu_val() + params.sigma_val() * z1,
                params.mu_test() + params.sigma_test() * (params.rho() * z1 + resid * z2),
            )
        })
        .collect()
}

fn scenario_params(rho: f64) -> GaussianParams {
    GaussianParams::new(0.65, 63.16, 0.8, 0.94, rho).unwrap()
}

fn constants() -> Outcome {
    let e5 = std_normal_expected_max(5).unwrap();
    let e10 = std_normal_expected_max(10).unwrap();
    let e2 = std_normal_expected_max(2).unwrap();
    let inv_sqrt_pi = 1.0 / std::f64::consts::PI.sqrt();
    let pass = (e5 - 1.163).abs() <= 1e-3
        && (e10 - 1.539).abs() <= 1e-3
        && (e2 - inv_sqrt_pi).abs() <= 1e-4;
    outcome(
        pass,
        format!("E5={e5:.10} E10={e10:.10} E2={e2:.10} (1/sqrt(pi)={inv_sqrt_pi:.10})"),
    )
}

// Averages, over all m^n draw tuples, the test score of the best-validation
// draw; a tie among the best draws is broken uniformly at random.
fn enumerate(records: &[RunRecord], n: u32) -> f64 {
    let m = records.len();
    let total = m.pow(n);
    let mut sum = 0.0;
    for code in 0..total {
        let mut c = code;
        let drawn: Vec<RunRecord> = (0..n)
            .map(|_| {
                let r = records[c % m];
                c /= m;
                r
            })
            .collect();
        let best = drawn
            .iter()
            .map(|r| r.validation)
            .fold(f64::NEG_INFINITY, f64::max);
        let winners: Vec<f64> = drawn
            .iter()
            .filter(|r| r.validation == best)
            .map(|r| r.test)
            .collect();
        sum += winners.iter().sum::<f64>() / winners.len() as f64;
    }
    sum / total as f64
}

fn brute_force() -> Outcome {
    let mut rng = ChaCha20Rng::seed_from_u64(0xb00);
    let mut worst: f64 = 0.0;
    let mut tied_pools = 0;
    for trial in 0..200 {
        let m = rng.random_range(1..=6usize);
        let n = rng.random_range(1..=4u32);
        let tied = trial % 3 == 0;
        let records: Vec<RunRecord> = (0..m)
            .map(|_| {
                let v = if tied {
                    rng.random_range(0..3) as f64 * 0.1
                } else {
                    rng.random::<f64>()
                };
                RunRecord::new(v, rng.random_range(-50.0..50.0))
            })
            .collect();
        let distinct = {
            let mut v: Vec<f64> = records.iter().map(|r| r.validation).collect();
            v.sort_by(f64::total_cmp);
            v.dedup();
            v.len()
        };
        if distinct < m {
            tied_pools += 1;
        }
        let pool = ResultPool::new(records.clone(), Direction::Maximize).unwrap();
        let got = boon_nonparametric(&pool, n).unwrap().value;
        worst = worst.max((got - enumerate(&records, n)).abs());
    }
    outcome(
        worst <= 1e-10,
        format!("200 pools ({tied_pools} with tied validation), max abs error {worst:.3e}"),
    )
}

fn parametric_consistency() -> Outcome {
    let params = scenario_params(0.18);
    let target = gaussian_boon_valtest(&params, 5).unwrap();
    let mut passes = 0;
    let mut worst: f64 = 0.0;
    for seed in 0..20 {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let pool =
            ResultPool::new(draw_pool(&params, 10_000, &mut rng), Direction::Maximize).unwrap();
        let value = boon_parametric_gaussian(&pool, 5).unwrap().value;
        let err = (value - 63.357).abs();
        worst = worst.max(err);
        if err <= 0.05 {
            passes += 1;
        }
    }
    outcome(
        passes >= 19,
        format!(
            "{passes}/20 seeds within 0.05 of 63.357 (closed form {target:.4}, worst {worst:.4})"
        ),
    )
}

fn coverage() -> Outcome {
    let params = scenario_params(0.18);
    let truth = gaussian_boon_valtest(&params, 5).unwrap();
    let mut hits = 0;
    for trial in 0..1000u64 {
        let mut rng = ChaCha20Rng::seed_from_u64(1_000 + trial);
        let fitted = fit_gaussian(&draw_pool(&params, 50, &mut rng)).unwrap();
        let config = ResamplingConfig {
            replicates: 1000,
            seed: trial,
            ..ResamplingConfig::default()
        };
        let ci = monte_carlo_ci_gaussian(
            &fitted,
            50,
            5,
            EstimatorKind::GaussianParametric,
            Direction::Maximize,
            &config,
        )
        .unwrap();
        if ci.contains(truth) {
            hits += 1;
        }
    }
    outcome(
        (920..=980).contains(&hits),
        format!("{hits}/1000 intervals contain {truth:.4} (target 950 +/- 30)"),
    )
}

fn curve_consistency() -> Outcome {
    let params = scenario_params(0.5);
    let mut rng = ChaCha20Rng::seed_from_u64(5);
    let pool = ResultPool::new(draw_pool(&params, 200, &mut rng), Direction::Maximize).unwrap();
    let ms: Vec<usize> = (1..=20).collect();
    let config = ResamplingConfig {
        seed: 5,
        ..ResamplingConfig::default()
    };
    let points = best_of_m_curve(&pool, &ms, &CurveOptions::default(), &config).unwrap();
    let mut worst_z: f64 = 0.0;
    for p in &points {
        let exact = boon_nonparametric(&pool, p.m as u32).unwrap().value;
        worst_z = worst_z.max((p.expected_best_test - exact).abs() / p.std_error);
    }
    outcome(
        worst_z <= 4.0,
        format!("m=1..20 at 100000 samples, worst deviation {worst_z:.2} SE"),
    )
}

fn regimes() -> Outcome {
    let sigma = 0.94;
    let mut detail = Vec::new();
    let mut pass = true;
    let mut rises = [0.0; 2];
    for (slot, rho) in [0.1, 0.83].into_iter().enumerate() {
        let params = scenario_params(rho);
        let mut rng = ChaCha20Rng::seed_from_u64(60 + slot as u64);
        let pool =
            ResultPool::new(draw_pool(&params, 1000, &mut rng), Direction::Maximize).unwrap();
        let curve_config = ResamplingConfig {
            seed: 6,
            ..ResamplingConfig::default()
        };
        let curve =
            best_of_m_curve(&pool, &[1, 20], &CurveOptions::default(), &curve_config).unwrap();
        rises[slot] = (curve[1].expected_best_test - curve[0].expected_best_test) / sigma;

        let boon5 = Boon::new(5, EstimatorKind::Nonparametric).unwrap();
        for m in [5, 10, 20, 50] {
            let config = ResamplingConfig {
                replicates: 2000,
                seed: 6,
                resample_size: Some(m),
                ..ResamplingConfig::default()
            };
            let single = smoothed_bootstrap_ci(&pool, &BestSingleModel, &config)
                .unwrap()
                .width();
            let reported = smoothed_bootstrap_ci(&pool, &boon5, &config)
                .unwrap()
                .width();
            if single <= reported {
                pass = false;
            }
            detail.push(format!("rho={rho} m={m}: {single:.3}>{reported:.3}"));
        }
    }
    pass &= rises[1] >= 1.0 && rises[0] < 0.5;
    outcome(
        pass,
        format!(
            "curve rise m=1..20: low rho {:.2} sd, high rho {:.2} sd; band widths {}",
            rises[0],
            rises[1],
            detail.join(", ")
        ),
    )
}

fn run_cli(args: &[String], out: &Path, threads: &str) -> Value {
    let status = Command::new(env!("CARGO_BIN_EXE_boon"))
        .env_remove("BOON_SEED")
        .env("RUST_LOG", "error")
        .args(args)
        .args(["--threads", threads, "--output"])
        .arg(out)
        .output()
        .unwrap();
    assert!(
        status.status.success(),
        "{}",
        String::from_utf8_lossy(&status.stderr)
    );
    serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap()
}

fn determinism() -> Outcome {
    let dir = tempfile::TempDir::new().unwrap();
    let mut rng = ChaCha20Rng::seed_from_u64(7);
    let write = |name: &str, records: &[RunRecord]| {
        let path = dir.path().join(name);
        let body: String = records
            .iter()
            .map(|r| format!("{},{}\n", r.validation, r.test))
            .collect();
        std::fs::write(&path, format!("validation,test\n{body}")).unwrap();
        path.to_string_lossy().into_owned()
    };
    let a = write("a.csv", &draw_pool(&scenario_params(0.3), 60, &mut rng));
    let b = write("b.csv", &draw_pool(&scenario_params(0.6), 40, &mut rng));
    let commands: Vec<Vec<String>> = [
        vec!["boon", &a, "--n", "1,5,10", "--bootstrap", "2000"],
        vec![
            "boon",
            &a,
            "--n",
            "5",
            "--bootstrap",
            "2000",
            "--bandwidth",
            "auto",
        ],
        vec![
            "boon",
            &a,
            "--n",
            "5",
            "--estimator",
            "gaussian",
            "--bootstrap",
            "2000",
        ],
        vec![
            "curve",
            &a,
            "--m-max",
            "8",
            "--samples-per-m",
            "20000",
            "--bootstrap",
            "500",
        ],
        vec!["compare", &a, &b, "--n", "5", "--bootstrap", "2000"],
    ]
    .iter()
    .map(|c| c.iter().map(|s| s.to_string()).collect())
    .collect();

    let mut mismatches = Vec::new();
    for (i, command) in commands.iter().enumerate() {
        let mut first_args = command.clone();
        first_args.extend(["--seed".to_string(), (9_000 + i).to_string()]);
        let first = run_cli(&first_args, &dir.path().join("first.json"), "0");
        let seed = first["settings"]["seed"].as_u64().unwrap().to_string();
        for threads in ["0", "1"] {
            let mut again = command.clone();
            again.extend(["--seed".to_string(), seed.clone()]);
            let rerun = run_cli(&again, &dir.path().join("again.json"), threads);
            // Compare serialized text: shortest round-trip formatting is bit-exact.
            let (expected, got) = (first["results"].to_string(), rerun["results"].to_string());
            if got != expected {
                mismatches.push(format!("{} (threads={threads})", command[0]));
            }
        }
    }
    outcome(
        mismatches.is_empty(),
        if mismatches.is_empty() {
            format!(
                "{} stochastic commands reproduced bit-exactly, parallel and serial",
                commands.len()
            )
        } else {
            format!("mismatch: {}", mismatches.join(", "))
        },
    )
}

fn main() -> ExitCode {
    type Check = fn() -> Outcome;
    let criteria: [(&str, Check); 7] = [
        ("closed-form constants", constants),
        ("brute-force equivalence", brute_force),
        ("parametric consistency", parametric_consistency),
        ("coverage calibration", coverage),
        ("curve consistency", curve_consistency),
        ("low/high correlation regimes", regimes),
        ("determinism", determinism),
    ];
    let filter: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let result = check();
        let verdict = if result.pass { "PASS" } else { "FAIL" };
        println!(
            "{verdict} [{}] {name} ({:.1}s): {}",
            i + 1,
            start.elapsed().as_secs_f64(),
            result.detail
        );
        if !result.pass {
            failed += 1;
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
