//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any fails.

use std::collections::BTreeSet;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spdc_mux::cli::run_command;
use spdc_mux::oracle::{optimized_power, rates_at};
use spdc_mux::scheduler::{plan_cycle, StorageState};
use spdc_mux::simulator::{run_simulation, SimConfig, Simulator};
use spdc_mux::topology::{verify_monotone_assignment, BoundaryMode, RegisterTopology};
use spdc_mux::HeraldReport;

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn reference_config() -> SimConfig {
    SimConfig::new(100, 4, 0.049)
}

fn optimized_point_reproduction() -> Outcome {
    let start = Instant::now();
    let m = run_simulation(&reference_config()).map_err(|e| e.to_string())?;
    let secs = start.elapsed().as_secs_f64();
    let (lack, multi) = (m.lack_rate().unwrap(), m.multi_rate().unwrap());
    let band = 0.019..=0.029;
    check(
        band.contains(&lack) && band.contains(&multi) && secs < 60.0,
        format!("lack_rate={lack:.5} multi_rate={multi:.5} (band [0.019, 0.029]) runtime={secs:.2}s (< 60s)"),
    )
}

fn optimizer_reproduction() -> Outcome {
    let point = optimized_power(100, 4, 3, 1e-6).map_err(|e| e.to_string())?;
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run_command(
        ["spdc-mux", "optimize", "--sources", "100", "--multiple", "4", "--register-steps", "3"],
        &mut out,
        &mut err,
    );
    let text = String::from_utf8(out).unwrap();
    let cli_n: f64 = text
        .lines()
        .nth(1)
        .and_then(|l| l.split(',').next())
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| format!("unparseable optimize output: {text:?}"))?;
    let band = 0.044..=0.056;
    check(
        code == 0 && band.contains(&point.mean_pairs) && band.contains(&cli_n),
        format!(
            "N*={:.5} (cli {cli_n}) in [0.044, 0.056]; lack={:.5} multi={:.5}",
            point.mean_pairs, point.rates.lack_rate, point.rates.multi_rate
        ),
    )
}

fn boundary_table_equivalence() -> Outcome {
    let t = RegisterTopology::new(11, 3).map_err(|e| e.to_string())?;
    // (source, inaccessible delays) for the six boundary rows.
    let rows: [(usize, &[u32]); 6] = [
        (1, &[1, 2, 3, 4, 5, 6, 7]),
        (2, &[3, 5, 6, 7]),
        (3, &[7]),
        (9, &[0]),
        (10, &[0, 1, 2, 4]),
        (11, &[0, 1, 2, 3, 4, 5, 6]),
    ];
    let mut mismatches = Vec::new();
    for (source, expected) in rows {
        let got = t.inaccessible_delays(source).unwrap();
        if got != expected.iter().copied().collect::<BTreeSet<u32>>() {
            mismatches.push(format!("source {source}: {got:?}"));
        }
    }
    for source in 4..=8 {
        if t.accessible_delays(source).unwrap().accessible != (0..8).collect() {
            mismatches.push(format!("source {source} lacks full access"));
        }
    }
    check(mismatches.is_empty(), format!("6 boundary rows + sources 4-8 full access; mismatches: {mismatches:?}"))
}

/// `(steps, multiple)` pairs with `multiple <= 8` and capacity `<= 4`.
fn small_register_shapes() -> Vec<(u32, u32)> {
    let mut v = Vec::new();
    for k in 1..=3u32 {
        for m in 1..=(1u32 << k).min(8) {
            if (1 << k) - m <= 4 {
                v.push((k, m));
            }
        }
    }
    v
}

fn oracle_equivalence() -> Outcome {
    let shapes = small_register_shapes();
    let mut rng = ChaCha8Rng::seed_from_u64(2012);
    let mut worst: f64 = 0.0;
    let mut failures = Vec::new();
    let configs = 24;
    for i in 0..configs {
        let (k, m) = shapes[rng.random_range(0..shapes.len())];
        let s = rng.random_range(1..=20usize);
        let n = rng.random_range(0.01..=0.3f64);
        let mut cfg = SimConfig::new(s, m, n);
        cfg.step_count = k;
        cfg.boundary = BoundaryMode::Unconstrained;
        cfg.seed = 1000 + i;
        let mc = run_simulation(&cfg).map_err(|e| e.to_string())?;
        let exact = rates_at(s, m, k, n).map_err(|e| e.to_string())?;
        let slots = mc.total_slots as f64;
        for (name, sim, se, truth) in [
            ("lack", mc.lack_rate().unwrap(), mc.lack_std_error.unwrap(), exact.lack_rate),
            ("multi", mc.multi_rate().unwrap(), mc.multi_std_error.unwrap(), exact.multi_rate),
        ] {
            // Batch-means error, floored by the independent-slot binomial error.
            let se = se.max((truth * (1.0 - truth) / slots).sqrt());
            let z = (sim - truth).abs() / se;
            worst = worst.max(z);
            if z > 4.0 {
                failures.push(format!("S={s} K={k} m={m} N={n:.3} {name}: mc={sim:.5} exact={truth:.5} z={z:.2}"));
            }
        }
    }
    check(failures.is_empty(), format!("{configs} configs, worst |z|={worst:.2} (limit 4); failures: {failures:?}"))
}

fn capacity_law() -> Outcome {
    let t = RegisterTopology::new(11, 3).map_err(|e| e.to_string())?;
    let capacities: Vec<u32> = (1..=8).map(|m| t.storage_capacity(m).unwrap()).collect();
    let law = capacities.iter().zip(1..=8u32).all(|(&c, m)| c == 8 - m);
    // Eight heralds at multiple 6 leave exactly two photons stored.
    let report = HeraldReport::single_pairs_at(11, &[2, 3, 4, 5, 6, 7, 8, 9]);
    let plan = plan_cycle(&t, &report, &StorageState::empty(2), 6).map_err(|e| e.to_string())?;
    // Storage never exceeds two in a saturated run at multiple 6.
    let mut cfg = SimConfig::new(11, 6, 1.0);
    cfg.cycles = 10_000;
    let mut max_level = 0;
    Simulator::new(cfg)
        .and_then(|sim| sim.run_with(0, |tr| max_level = max_level.max(tr.plan.storage_out.level())))
        .map_err(|e| e.to_string())?;
    check(
        law && plan.storage_out.level() == 2 && max_level == 2 && t.train_length() == 8 && t.storage_capacity(9).is_err(),
        format!(
            "capacities m=1..8: {capacities:?}; stored at m=6: {}; max stored in saturated run: {max_level}; train length {}",
            plan.storage_out.level(),
            t.train_length()
        ),
    )
}

fn conservation() -> Outcome {
    let mut cfg = SimConfig::new(100, 4, 0.1);
    cfg.seed = 6;
    let mut violations = 0u64;
    let mut cycles = 0u64;
    let metrics = Simulator::new(cfg)
        .and_then(|sim| {
            sim.run_with(0, |tr| {
                cycles += 1;
                if !tr.conserves() {
                    violations += 1;
                }
            })
        })
        .map_err(|e| e.to_string())?;
    let aggregate = metrics.herald_count == metrics.filled_count + metrics.final_storage + metrics.discarded_count;
    check(
        violations == 0 && metrics.conservation_violations == 0 && cycles == 100_000 && aggregate,
        format!("{cycles} cycles, {violations} per-cycle violations, aggregate balance {aggregate}"),
    )
}

fn trend_checks() -> Outcome {
    let mut lacks = Vec::new();
    for (i, s) in [25usize, 50, 100, 200].into_iter().enumerate() {
        let mut cfg = SimConfig::new(s, 4, 0.05);
        cfg.seed = 70 + i as u64;
        lacks.push(run_simulation(&cfg).map_err(|e| e.to_string())?.lack_rate().unwrap());
    }
    let decreasing = lacks.windows(2).all(|w| w[1] < w[0]);
    let multi = |n: f64, seed: u64| -> Result<f64, String> {
        let mut cfg = SimConfig::new(100, 4, n);
        cfg.seed = seed;
        Ok(run_simulation(&cfg).map_err(|e| e.to_string())?.multi_rate().unwrap())
    };
    let ratio = multi(0.10, 77)? / multi(0.05, 78)?;
    check(
        decreasing && (1.8..=2.2).contains(&ratio),
        format!("lack over S=25,50,100,200: {lacks:.5?}; multi(0.10)/multi(0.05)={ratio:.3} (2.0 +- 0.2)"),
    )
}

fn switching_property() -> Outcome {
    let mut checked = 0u64;
    let mut failures = 0u64;
    for (i, m) in [4u32, 6, 8].into_iter().enumerate() {
        let mut cfg = SimConfig::new(11, m, 0.4);
        cfg.cycles = 10_000;
        cfg.seed = 80 + i as u64;
        Simulator::new(cfg)
            .and_then(|sim| {
                sim.run_with(0, |tr| {
                    checked += 1;
                    if !verify_monotone_assignment(&tr.plan.new_photon_assignments()).unwrap_or(false) {
                        failures += 1;
                    }
                })
            })
            .map_err(|e| e.to_string())?;
    }
    check(failures == 0, format!("{checked} cycles over m in {{4,6,8}}, {failures} non-monotone plans"))
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut docs = Vec::new();
    for run in 0..2 {
        let path = dir.path().join(format!("run{run}.csv"));
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_command(
            [
                "spdc-mux", "simulate", "--sources", "100", "--multiple", "4", "--mean-pairs", "0.049",
                "--cycles", "100000", "--seed", "1", "--out", path.to_str().unwrap(),
            ],
            &mut out,
            &mut err,
        );
        if code != 0 {
            return Err(format!("simulate exited {code}: {}", String::from_utf8_lossy(&err)));
        }
        docs.push(std::fs::read(&path).map_err(|e| e.to_string())?);
    }
    check(docs[0] == docs[1], format!("two runs, {} bytes each, identical={}", docs[0].len(), docs[0] == docs[1]))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 9] = [
        ("1 optimized-point reproduction", optimized_point_reproduction),
        ("2 optimizer reproduction", optimizer_reproduction),
        ("3 boundary table equivalence", boundary_table_equivalence),
        ("4 oracle equivalence", oracle_equivalence),
        ("5 capacity law", capacity_law),
        ("6 conservation", conservation),
        ("7 trend checks", trend_checks),
        ("8 switching property", switching_property),
        ("9 determinism", determinism),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("[PASS] {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {name}: {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
