//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any criterion fails.

use std::path::Path;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use uavcov::channel::{fspl_db, mean_path_loss_db, p_los, p_nlos, slant_distance};
use uavcov::coverage::q_function;
use uavcov::scenario::generate_users;
use uavcov::{
    coverage_monte_carlo, coverage_probability, evaluate_scenario, max_coverage_radius,
    optimal_altitude, EnvironmentProfile, FormulationMode, LinkGeometry, RadioConfig, ScenarioSpec,
};

/// Fixed seed for the analytic-versus-Monte-Carlo grid.
const MC_GRID_SEED: u64 = 20_240_601;

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, Duration, Box<dyn Fn() -> Outcome>);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn std_mode() -> FormulationMode {
    FormulationMode::Standard
}

fn env_by(name: &str) -> EnvironmentProfile {
    EnvironmentProfile::by_name(name).unwrap()
}

/// LoS probability point values against 40-digit references computed
/// offline (mpmath, 40 significant digits) from 1 / (1 + a·exp(−b(θ − a))).
fn criterion_1() -> Outcome {
    let cases = [
        ("suburban", 20.0, 0.971_566_491_286_112_9, 0.971_574),
        ("urban", 45.0, 0.978_775_497_363_162, 0.978_774),
        ("dense-urban", 45.0, 0.895_319_587_904_439_1, 0.895_320),
        ("high-rise-urban", 45.0, 0.294_808_223_733_55, 0.294_836),
    ];
    let mut worst = 0.0f64;
    let mut quoted = Vec::new();
    for (name, theta, oracle, rounded) in cases {
        quoted.push(format!("{name} {rounded} ({:+.1e})", rounded - oracle));
        let got = p_los(theta, &env_by(name)).map_err(|e| e.to_string())?;
        let err = (got - oracle).abs();
        worst = worst.max(err);
        ensure(err <= 1e-9, || {
            format!("{name} P_LoS({theta}) = {got}, oracle {oracle}")
        })?;
    }
    let dense_quoted = 0.895_320;
    ensure((dense_quoted - cases[2].2).abs() <= 1e-5, || {
        "dense urban quoted value is not within 1e-5 of the oracle".into()
    })?;
    Ok(format!(
        "max |impl - oracle| = {worst:.1e}; quoted decimals vs oracle: {}",
        quoted.join(", ")
    ))
}

fn criterion_2() -> Outcome {
    let check = |name: &str, from: f64| -> Result<(), String> {
        let env = env_by(name);
        let first = (from / 0.5).round() as u32;
        for k in first..=180 {
            let theta = k as f64 * 0.5;
            let p = p_los(theta, &env).map_err(|e| e.to_string())?;
            ensure(p >= 0.97, || format!("{name}: P_LoS({theta}) = {p} < 0.97"))?;
        }
        Ok(())
    };
    check("suburban", 20.0)?;
    check("urban", 45.0)?;
    Ok("suburban >= 0.97 from 20 deg, urban >= 0.97 from 45 deg".into())
}

fn criterion_3() -> Outcome {
    let envs = EnvironmentProfile::builtins();
    for env in &envs {
        for k in 0..=1800 {
            let theta = k as f64 * 0.05;
            let s = p_los(theta, env).unwrap() + p_nlos(theta, env).unwrap();
            ensure((s - 1.0).abs() <= 1e-15, || {
                format!(
                    "{}: P_LoS + P_NLoS - 1 = {:e} at {theta}",
                    env.name,
                    s - 1.0
                )
            })?;
        }
    }
    let mut rng = StdRng::seed_from_u64(3);
    for _ in 0..1000 {
        let x: f64 = rng.random_range(-8.0..=8.0);
        let s = q_function(x) + q_function(-x);
        ensure((s - 1.0).abs() <= 1e-12, || {
            format!("Q({x}) + Q(-{x}) - 1 = {:e}", s - 1.0)
        })?;
    }
    let mut points = 0;
    for i in 0..100 {
        for j in 0..100 {
            let r0 = i as f64 * 20.0;
            let h = 10.0 + j as f64 * 20.0;
            let g = LinkGeometry::new(r0, h).unwrap();
            let fspl = fspl_db(2e9, slant_distance(&g)).unwrap();
            for env in &envs {
                let pl = mean_path_loss_db(&g, env, 2e9).unwrap();
                ensure(pl >= fspl + env.mu_los && pl <= fspl + env.mu_nlos, || {
                    format!("{}: PL {pl} outside bounds at r0 = {r0}, h = {h}", env.name)
                })?;
            }
            points += 1;
        }
    }
    Ok(format!(
        "identities hold; path-loss bounds on {points} geometries x 4 environments"
    ))
}

fn criterion_4() -> Outcome {
    let doubling = 20.0 * 2f64.log10();
    let mut worst = 0.0f64;
    for f_c in [7e8, 2e9, 5.8e9, 28e9] {
        for d in [1.0, 15.0, 100.0, 509.9, 12_345.0] {
            let step = fspl_db(f_c, 2.0 * d).unwrap() - fspl_db(f_c, d).unwrap();
            worst = worst.max((step - doubling).abs());
        }
    }
    ensure(worst <= 1e-9, || format!("doubling step off by {worst:e}"))?;
    // 40-digit reference for 20·log10(4π · 2e9 · 100 / 299792458)
    let oracle = 78.468_383_135_163;
    let got = fspl_db(2e9, 100.0).unwrap();
    ensure((got - oracle).abs() <= 5e-3, || {
        format!("FSPL(2 GHz, 100 m) = {got}")
    })?;
    ensure((78.468 - oracle).abs() <= 5e-3, || {
        "quoted 78.468 dB disagrees".into()
    })?;
    Ok(format!(
        "doubling = {doubling:.10} dB (max dev {worst:.1e}, quoted 6.0205999 is {:+.1e} off); \
         FSPL(2 GHz, 100 m) = {got:.6} dB",
        6.020_599_9 - doubling
    ))
}

fn criterion_5() -> Outcome {
    let geometries = [(50.0, 100.0), (200.0, 100.0), (500.0, 200.0)];
    // thresholds sit k dB below the LoS free-space received power
    let offsets = [3.0, 10.0];
    let n = 1_000_000;
    let base = RadioConfig::default();
    let mut worst_z = 0.0f64;
    let mut cells = 0;
    for (e, env) in EnvironmentProfile::builtins().iter().enumerate() {
        for (gi, &(r0, h)) in geometries.iter().enumerate() {
            let g = LinkGeometry::new(r0, h).unwrap();
            let fspl = fspl_db(base.f_c_hz, slant_distance(&g)).unwrap();
            for (ti, k) in offsets.iter().enumerate() {
                let radio = RadioConfig {
                    p_min_dbm: base.p_tx_dbm + base.g_db - fspl - k,
                    ..base
                };
                let analytic = coverage_probability(&g, env, &radio, std_mode())
                    .unwrap()
                    .p_cov;
                let seed = MC_GRID_SEED + (e * 100 + gi * 10 + ti) as u64;
                let mc = coverage_monte_carlo(&g, env, &radio, n, seed).unwrap();
                let se = (mc.estimate * (1.0 - mc.estimate) / n as f64).sqrt();
                let dev = (analytic - mc.estimate).abs();
                ensure(dev <= 3.0 * se, || {
                    format!(
                        "{} r0={r0} h={h} k={k}: analytic {analytic}, MC {} (3 SE = {})",
                        env.name,
                        mc.estimate,
                        3.0 * se
                    )
                })?;
                if se > 0.0 {
                    worst_z = worst_z.max(dev / se);
                }
                cells += 1;
            }
        }
    }
    Ok(format!(
        "{cells} cells within 3 SE (worst {worst_z:.2} SE), seed base {MC_GRID_SEED}"
    ))
}

fn criterion_6() -> Outcome {
    let geometries = [(0.0, 100.0), (150.0, 100.0), (600.0, 300.0)];
    for env in EnvironmentProfile::builtins() {
        for &(r0, h) in &geometries {
            let g = LinkGeometry::new(r0, h).unwrap();
            let mut prev = f64::INFINITY;
            for k in 0..50 {
                let radio = RadioConfig {
                    p_min_dbm: -130.0 + k as f64 * 2.2,
                    ..RadioConfig::default()
                };
                let p = coverage_probability(&g, &env, &radio, std_mode())
                    .unwrap()
                    .p_cov;
                ensure(p <= prev, || {
                    format!("{}: p_cov rose at p_min = {}", env.name, radio.p_min_dbm)
                })?;
                prev = p;
            }
        }
        let mut prev = -1.0;
        for k in 0..=180 {
            let theta = k as f64 * 0.5;
            let p = p_los(theta, &env).unwrap();
            ensure(p > prev, || {
                format!("{}: P_LoS not increasing at {theta}", env.name)
            })?;
            prev = p;
        }
    }
    Ok("p_cov non-increasing over 50 thresholds; P_LoS strictly increasing".into())
}

fn brute_altitude(r_edge: f64, env: &EnvironmentProfile, radio: &RadioConfig, grid: &[f64]) -> f64 {
    let mut best = (f64::NAN, f64::NEG_INFINITY);
    for &h in grid {
        let p = coverage_probability(
            &LinkGeometry::new(r_edge, h).unwrap(),
            env,
            radio,
            std_mode(),
        )
        .unwrap()
        .p_cov;
        if p > best.1 {
            best = (h, p);
        }
    }
    best.0
}

fn brute_radius(
    h: f64,
    env: &EnvironmentProfile,
    radio: &RadioConfig,
    target: f64,
    r_max: f64,
    res: f64,
) -> f64 {
    let mut found = 0.0;
    let mut i = 0u64;
    loop {
        let r0 = i as f64 * res;
        if r0 > r_max + 1e-9 * res {
            break;
        }
        let p = coverage_probability(&LinkGeometry::new(r0, h).unwrap(), env, radio, std_mode())
            .unwrap()
            .p_cov;
        if p >= target {
            found = r0;
        }
        i += 1;
    }
    found
}

fn criterion_7() -> Outcome {
    let mut rng = StdRng::seed_from_u64(7);
    let envs = EnvironmentProfile::builtins();
    for case in 0..10 {
        let env = envs[rng.random_range(0..envs.len())]
            .clone()
            .with_shadowing(rng.random_range(1.0..6.0), rng.random_range(4.0..12.0))
            .unwrap();
        let radio = RadioConfig {
            p_min_dbm: rng.random_range(-100.0..-60.0),
            ..RadioConfig::default()
        };
        let r_edge = rng.random_range(0.0..1500.0);
        let h_min = rng.random_range(10.0..200.0);
        let h_max = h_min + rng.random_range(50.0..2000.0);
        let steps = rng.random_range(2..800usize);
        let grid: Vec<f64> = (0..steps)
            .map(|i| {
                if i + 1 == steps {
                    h_max
                } else {
                    h_min + (h_max - h_min) * i as f64 / (steps - 1) as f64
                }
            })
            .collect();
        let opt = optimal_altitude(r_edge, &env, &radio, h_min, h_max, steps, std_mode()).unwrap();
        let brute = brute_altitude(r_edge, &env, &radio, &grid);
        ensure(opt.h_star == brute, || {
            format!(
                "case {case}: optimal_altitude {} vs brute force {brute}",
                opt.h_star
            )
        })?;

        let h = rng.random_range(30.0..600.0);
        let target = rng.random_range(0.3..0.99);
        let r_max = rng.random_range(100.0..2000.0);
        let res = rng.random_range(0.5..20.0);
        let r = max_coverage_radius(h, &env, &radio, target, r_max, res, std_mode()).unwrap();
        let brute = brute_radius(h, &env, &radio, target, r_max, res);
        ensure(r == brute, || {
            format!("case {case}: max_coverage_radius {r} vs brute force {brute}")
        })?;
    }
    Ok("10 randomized configurations agree exactly".into())
}

fn run_cli(args: &[&str]) -> Result<(), String> {
    let argv = std::iter::once("uavcov").chain(args.iter().copied());
    match uavcov_cli::main_with_args(argv) {
        0 => Ok(()),
        code => Err(format!("`{}` exited with {code}", args.join(" "))),
    }
}

fn read(path: &Path) -> Vec<u8> {
    std::fs::read(path).unwrap_or_default()
}

fn criterion_8(dir: &Path) -> Outcome {
    let runs: [(&str, &[&str]); 2] = [
        (
            "scenario",
            &[
                "scenario",
                "--n-users",
                "3000",
                "--n-draws",
                "40",
                "--seed",
                "42",
                "--env",
                "dense-urban",
            ],
        ),
        (
            "mc",
            &[
                "sweep-coverage",
                "--mc-samples",
                "100000",
                "--stop",
                "150",
                "--step",
                "15",
                "--p-min",
                "-52",
                "--seed",
                "42",
            ],
        ),
    ];
    for (tag, args) in runs {
        let mut outputs = Vec::new();
        for (i, workers) in ["1", "4", "4"].iter().enumerate() {
            let out = dir.join(format!("{tag}_{i}.csv"));
            let out_s = out.to_str().unwrap().to_string();
            let mut full: Vec<&str> = args.to_vec();
            full.extend(["--workers", workers, "--out", &out_s]);
            run_cli(&full)?;
            let summary = read(&uavcov_cli::summary_path(&out));
            outputs.push((read(&out), summary));
        }
        ensure(!outputs[0].0.is_empty(), || format!("{tag}: empty output"))?;
        ensure(outputs.iter().all(|o| *o == outputs[0]), || {
            format!("{tag}: outputs differ across runs/worker counts")
        })?;
    }
    Ok("scenario and Monte Carlo CSVs byte-identical for workers {1, 4} and reruns".into())
}

fn data_rows(csv: &[u8]) -> Vec<Vec<String>> {
    String::from_utf8_lossy(csv)
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(String::from).collect())
        .collect()
}

fn criterion_9(dir: &Path) -> Outcome {
    let expect = [
        ("sweep-plos", 180usize),
        ("sweep-pnlos", 180),
        ("sweep-pathloss", 98),
        ("sweep-coverage", 98),
    ];
    let mut plos_rows = Vec::new();
    for (cmd, rows) in expect {
        let out = dir.join(format!("{cmd}.csv"));
        run_cli(&[
            cmd,
            "--env",
            "all",
            "--h",
            "100",
            "--out",
            out.to_str().unwrap(),
        ])?;
        let data = data_rows(&read(&out));
        ensure(data.len() == rows, || {
            format!("{cmd}: {} rows, expected {rows}", data.len())
        })?;
        ensure(data.iter().all(|r| r.len() == 5), || {
            format!("{cmd}: expected 5 columns")
        })?;
        if cmd == "sweep-plos" {
            plos_rows = data;
        }
    }
    let at45 = plos_rows
        .iter()
        .find(|r| r[0] == "45")
        .ok_or("no 45 degree row")?;
    let vals: Vec<f64> = at45[1..].iter().map(|v| v.parse().unwrap()).collect();
    ensure(vals.windows(2).all(|w| w[0] > w[1]), || {
        format!("45 degree ordering violated: {vals:?}")
    })?;
    Ok(format!("row counts 180/180/98/98; P_LoS(45) = {vals:?}"))
}

fn criterion_10() -> Outcome {
    let spec = ScenarioSpec {
        n_users: 10_000,
        n_draws: 100,
        seed: 10,
        env: EnvironmentProfile::dense_urban(),
        ..ScenarioSpec::default()
    };
    let out = evaluate_scenario(&spec).map_err(|e| e.to_string())?;
    let s = &out.summary;
    let mean_draws =
        s.covered_fraction_draws.iter().sum::<f64>() / s.covered_fraction_draws.len() as f64;
    let m = s.mean_p_cov;
    let se = (m * (1.0 - m) / (spec.n_users * spec.n_draws) as f64).sqrt();
    ensure((mean_draws - m).abs() <= 3.0 * se, || {
        format!(
            "draw mean {mean_draws} vs analytic {m} (3 SE = {})",
            3.0 * se
        )
    })?;

    let users = generate_users(10_000, 1000.0, 10).map_err(|e| e.to_string())?;
    let mean_x = users.iter().map(|p| p.x).sum::<f64>() / users.len() as f64;
    let bound = 1000.0 * 3.0 * (1.0 / 12f64.sqrt()) / 100.0;
    ensure((mean_x - 500.0).abs() <= bound, || {
        format!("mean x = {mean_x}, allowed 500 ± {bound}")
    })?;
    Ok(format!(
        "draw mean {mean_draws:.6} vs analytic {m:.6} ({:.2} SE); mean x = {mean_x:.2}",
        (mean_draws - m).abs() / se
    ))
}

fn main() {
    let dir = tempfile::tempdir().expect("temp dir");
    let d = dir.path().to_path_buf();
    let d9 = d.clone();
    let criteria: Vec<Criterion> = vec![
        (
            1,
            "LoS probability point values",
            Duration::from_secs(1),
            Box::new(criterion_1),
        ),
        (
            2,
            "LoS plateau angles",
            Duration::from_secs(1),
            Box::new(criterion_2),
        ),
        (
            3,
            "identity suite",
            Duration::from_secs(5),
            Box::new(criterion_3),
        ),
        (
            4,
            "free-space path loss laws",
            Duration::from_secs(1),
            Box::new(criterion_4),
        ),
        (
            5,
            "analytic vs Monte Carlo coverage",
            Duration::from_secs(60),
            Box::new(criterion_5),
        ),
        (
            6,
            "monotonicity",
            Duration::from_secs(2),
            Box::new(criterion_6),
        ),
        (
            7,
            "optimizer equivalence",
            Duration::from_secs(10),
            Box::new(criterion_7),
        ),
        (
            8,
            "determinism",
            Duration::from_secs(30),
            Box::new(move || criterion_8(&d)),
        ),
        (
            9,
            "figure sweeps smoke",
            Duration::from_secs(5),
            Box::new(move || criterion_9(&d9)),
        ),
        (
            10,
            "scenario statistics",
            Duration::from_secs(30),
            Box::new(criterion_10),
        ),
    ];
    let mut failed = 0;
    for (id, name, limit, check) in criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let result = match result {
            Ok(detail) if elapsed > limit => Err(format!(
                "{detail}; took {:.2} s, limit {:.0} s",
                elapsed.as_secs_f64(),
                limit.as_secs_f64()
            )),
            other => other,
        };
        match result {
            Ok(detail) => println!(
                "PASS criterion {id:>2} ({name}) [{:.3} s]: {detail}",
                elapsed.as_secs_f64()
            ),
            Err(why) => {
                failed += 1;
                println!(
                    "FAIL criterion {id:>2} ({name}) [{:.3} s]: {why}",
                    elapsed.as_secs_f64()
                );
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}
