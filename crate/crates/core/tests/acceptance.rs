//! Acceptance gate: one test per release criterion, each printing a
//! PASS/FAIL line (visible with `cargo test --test acceptance -- --nocapture`).

use std::time::Instant;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use uav_noma::experiment::{
    compare_schemes, run_single, run_sweep, SweepSpec, SweptParameter,
};
use uav_noma::output::result_rows_csv;
use uav_noma::placement::{
    brute_force_su_position, optimal_su_position, placement_objective,
};
use uav_noma::power::{
    grid_oracle_sector_slot, solve_sector_slot, SolverParams,
};
use uav_noma::rate::{sector_slot_rate, sector_slot_rate_per_device};
use uav_noma::{Scheme, ScenarioConfig};

fn verdict(criterion: &str, pass: bool, detail: &str) {
    let tag = if pass { "PASS" } else { "FAIL" };
    println!("{tag} {criterion}: {detail}");
    assert!(pass, "{criterion}: {detail}");
}

fn default_solver() -> SolverParams {
    SolverParams::from_config(&ScenarioConfig::with_defaults(60, 1))
}

/// Criterion 1: per-device SIC rates sum to the aggregate log form within
/// 1e-9 relative over 1e4 fuzzed instances, in under 5 s.
#[test]
fn criterion_1_telescoping_identity() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1001);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let nd = 1 + rng.random_range(0..8usize);
        let mut gains: Vec<f64> = (0..nd)
            .map(|_| 1e-9 * (0.001 + rng.random::<f64>()))
            .collect();
        gains.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let powers: Vec<f64> = (0..nd).map(|_| 0.5 * rng.random::<f64>()).collect();
        let per_device = sector_slot_rate_per_device(&powers, &gains, 0.9, 1e-12);
        let aggregate = sector_slot_rate(&powers, &gains, 0.9, 1e-12);
        let rel = (per_device - aggregate).abs() / aggregate.abs().max(1e-300);
        worst = worst.max(rel);
    }
    let elapsed = start.elapsed();
    verdict(
        "criterion 1 (telescoping identity)",
        worst < 1e-9 && elapsed.as_secs_f64() < 5.0,
        &format!("worst relative gap {worst:.3e}, {elapsed:.2?}"),
    );
}

/// Criterion 2: the centroid matches a 0.5 m grid oracle within the grid
/// step and beats 1000 random candidates on every one of 200 random
/// sectors, in under 30 s.
#[test]
fn criterion_2_placement_oracle() {
    let start = Instant::now();
    let outcomes: Vec<(f64, bool)> = (0..200u64)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(2000 + trial);
            let nd = 1 + rng.random_range(0..30usize);
            let devices: Vec<[f64; 2]> = (0..nd)
                .map(|_| {
                    [
                        100.0 + 400.0 * rng.random::<f64>(),
                        -200.0 + 400.0 * rng.random::<f64>(),
                    ]
                })
                .collect();
            let centroid = optimal_su_position(&devices).unwrap();
            let lo = [
                devices.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min),
                devices.iter().map(|p| p[1]).fold(f64::INFINITY, f64::min),
            ];
            let hi = [
                devices.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max),
                devices.iter().map(|p| p[1]).fold(f64::NEG_INFINITY, f64::max),
            ];
            let grid_best = brute_force_su_position(&devices, (lo, hi), 0.5).unwrap();
            let dist = ((centroid[0] - grid_best[0]).powi(2)
                + (centroid[1] - grid_best[1]).powi(2))
            .sqrt();
            let centroid_obj = placement_objective(centroid, &devices);
            let beats_all = (0..1000).all(|_| {
                let cand = [
                    lo[0] + (hi[0] - lo[0]) * rng.random::<f64>(),
                    lo[1] + (hi[1] - lo[1]) * rng.random::<f64>(),
                ];
                centroid_obj <= placement_objective(cand, &devices)
            });
            (dist, beats_all)
        })
        .collect();
    let worst_dist = outcomes.iter().map(|o| o.0).fold(0.0, f64::max);
    let all_beat = outcomes.iter().all(|o| o.1);
    let elapsed = start.elapsed();
    verdict(
        "criterion 2 (placement oracle)",
        worst_dist <= 0.5 && all_beat && elapsed.as_secs_f64() < 30.0,
        &format!("worst centroid-grid distance {worst_dist:.3} m, beats 1000 random candidates on all 200 sectors: {all_beat}, {elapsed:.2?}"),
    );
}

/// Criterion 3: solver objective within 1% of the 64-point grid oracle on
/// 100 random instances (N_j in 1..=3), SIC within 1e-6 relative, box
/// constraints exact, in under 2 min.
#[test]
fn criterion_3_power_oracle() {
    let start = Instant::now();
    let params = default_solver();
    let mut rng = ChaCha8Rng::seed_from_u64(3000);
    let mut worst_gap = 0.0f64;
    let mut all_ok = true;
    for trial in 0..100usize {
        let nd = 1 + trial % 3;
        let mut gains: Vec<f64> = (0..nd)
            .map(|_| 1e-3 / (1e4 + 6.25e4 * rng.random::<f64>()))
            .collect();
        gains.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let sol = solve_sector_slot(&gains, &params);
        let oracle = grid_oracle_sector_slot(&gains, &params, 64).unwrap();
        let obj = |p: &[f64]| {
            let s: f64 = p
                .iter()
                .zip(&gains)
                .map(|(&pw, &g)| pw * g / params.noise_power)
                .sum();
            params.m_prelog * (1.0 + s).log2()
        };
        let gap = (obj(&oracle) - obj(&sol.powers)) / obj(&oracle).max(1e-300);
        worst_gap = worst_gap.max(gap);
        // Box constraints: exact.
        all_ok &= sol
            .powers
            .iter()
            .all(|&p| (0.0..=params.p_max).contains(&p));
        // SIC within 1e-6 relative.
        for i in 0..nd.saturating_sub(1) {
            let tail: f64 = (i + 1..nd)
                .map(|l| sol.powers[l] * gains[l] / params.noise_power)
                .sum();
            let own = sol.powers[i] * gains[i] / params.noise_power;
            all_ok &= tail <= 0.0 || own >= params.eta_lin * tail * (1.0 - 1e-6);
        }
    }
    let elapsed = start.elapsed();
    verdict(
        "criterion 3 (power-control oracle)",
        worst_gap <= 0.01 && all_ok && elapsed.as_secs_f64() < 120.0,
        &format!("worst objective gap {:.4}%, feasibility ok: {all_ok}, {elapsed:.2?}", worst_gap * 100.0),
    );
}

/// Criterion 4: at (M, N) = (10, 60), the outer objective trace is within
/// 0.1% of its final value by iteration 10 on at least 95% of 50 seeds, in
/// under 5 min.
#[test]
fn criterion_4_convergence_speed() {
    let start = Instant::now();
    let hits: usize = (0..50u64)
        .into_par_iter()
        .map(|seed| {
            let cfg = ScenarioConfig::with_defaults(60, 1000 + seed);
            let solver = SolverParams::from_config(&cfg);
            let run = run_single(&cfg, Scheme::NomaOptimalPlacement, &solver).unwrap();
            let tr = &run.convergence_trace;
            let last = *tr.last().unwrap();
            let reached = tr
                .iter()
                .position(|&v| (last - v).abs() <= 1e-3 * last)
                .map(|i| i + 1)
                .unwrap_or(usize::MAX);
            usize::from(reached <= 10)
        })
        .sum();
    let elapsed = start.elapsed();
    verdict(
        "criterion 4 (convergence within 10 iterations)",
        hits >= 48 && elapsed.as_secs_f64() < 300.0,
        &format!("{hits}/50 seeds within 0.1% by iteration 10, {elapsed:.2?}"),
    );
}

/// Criterion 5: monotone trends in N, M, and P_u,max, and optimal beating
/// random placement at every swept N, 100 paired trials each, under 30 min
/// total.
#[test]
fn criterion_5_trend_reproduction() {
    let start = Instant::now();
    let base = ScenarioConfig::with_defaults(60, 1);
    let solver = SolverParams::from_config(&base);

    // Sweep in N with both placements.
    let spec_n = SweepSpec {
        parameter: SweptParameter::NumDevices,
        values: vec![40.0, 60.0, 80.0, 100.0, 120.0, 140.0],
        trials: 100,
        schemes: vec![Scheme::NomaOptimalPlacement, Scheme::NomaRandomPlacement],
        base: base.clone(),
    };
    let rows_n = run_sweep(&spec_n, &solver).unwrap();
    let opt_n: Vec<_> = rows_n
        .iter()
        .filter(|r| r.scheme == "noma_optimal")
        .collect();
    let rand_n: Vec<_> = rows_n
        .iter()
        .filter(|r| r.scheme == "noma_random")
        .collect();
    let mut n_monotone = true;
    for w in opt_n.windows(2) {
        n_monotone &= w[1].mean_sum_rate > w[0].mean_sum_rate - (w[0].ci95_halfwidth + w[1].ci95_halfwidth);
    }
    n_monotone &= opt_n.last().unwrap().mean_sum_rate > opt_n[0].mean_sum_rate;
    let opt_beats_random = opt_n
        .iter()
        .zip(&rand_n)
        .all(|(o, r)| o.mean_sum_rate > r.mean_sum_rate);

    // M = 5 vs 10.
    let spec_m = SweepSpec {
        parameter: SweptParameter::NumSectors,
        values: vec![5.0, 10.0],
        trials: 100,
        schemes: vec![Scheme::NomaOptimalPlacement],
        base: base.clone(),
    };
    let rows_m = run_sweep(&spec_m, &solver).unwrap();
    let m_monotone = rows_m[1].mean_sum_rate > rows_m[0].mean_sum_rate;

    // P_u,max 100 mW -> 500 mW.
    let spec_p = SweepSpec {
        parameter: SweptParameter::PUMax,
        values: vec![0.1, 0.2, 0.3, 0.4, 0.5],
        trials: 100,
        schemes: vec![Scheme::NomaOptimalPlacement],
        base: base.clone(),
    };
    let rows_p = run_sweep(&spec_p, &solver).unwrap();
    let mut p_monotone = true;
    for w in rows_p.windows(2) {
        p_monotone &= w[1].mean_sum_rate > w[0].mean_sum_rate - (w[0].ci95_halfwidth + w[1].ci95_halfwidth);
    }
    p_monotone &= rows_p.last().unwrap().mean_sum_rate > rows_p[0].mean_sum_rate;

    let elapsed = start.elapsed();
    verdict(
        "criterion 5 (trend reproduction)",
        n_monotone && m_monotone && p_monotone && opt_beats_random && elapsed.as_secs_f64() < 1800.0,
        &format!(
            "N-monotone: {n_monotone}, M-monotone: {m_monotone}, P-monotone: {p_monotone}, optimal>random at every N: {opt_beats_random}, {elapsed:.2?}"
        ),
    );
}

/// Criterion 6: at (M, N) = (10, 100), NOMA-optimal beats the cyclical
/// TDMA-OMA baseline over 100 paired trials, either by 15-35% mean gain or
/// with non-overlapping 95% CIs (discrepancy logged).
#[test]
fn criterion_6_scheme_gain() {
    let cfg = ScenarioConfig::with_defaults(100, 1);
    let solver = SolverParams::from_config(&cfg);
    let rows = compare_schemes(
        &cfg,
        &[Scheme::NomaOptimalPlacement, Scheme::OmaTdma],
        100,
        &solver,
    )
    .unwrap();
    let noma = rows.iter().find(|r| r.scheme == "noma_optimal").unwrap();
    let oma = rows.iter().find(|r| r.scheme == "oma_tdma").unwrap();
    let gain = (noma.mean_sum_rate - oma.mean_sum_rate) / oma.mean_sum_rate;
    let in_band = (0.15..=0.35).contains(&gain);
    let ci_separated = noma.mean_sum_rate - noma.ci95_halfwidth
        > oma.mean_sum_rate + oma.ci95_halfwidth;
    if !in_band {
        println!(
            "note criterion 6: measured NOMA-vs-OMA gain {:.1}% falls outside the 15-35% band; \
             passing via the strict-superiority clause (non-overlapping 95% CIs). The band \
             assumes baseline scheduling details that are not fully specified; this round-robin \
             full-power OMA baseline is stronger than that assumption.",
            gain * 100.0
        );
    }
    verdict(
        "criterion 6 (scheme gain)",
        in_band || (gain > 0.0 && ci_separated),
        &format!(
            "gain {:.1}% (NOMA {:.3} +/- {:.3}, OMA {:.3} +/- {:.3}), in band: {in_band}, CIs separated: {ci_separated}",
            gain * 100.0,
            noma.mean_sum_rate,
            noma.ci95_halfwidth,
            oma.mean_sum_rate,
            oma.ci95_halfwidth
        ),
    );
}

/// Criterion 7: the solver reports exactly 3 N_j - 1 parameter updates per
/// iteration, asserted on 20 random instances.
#[test]
fn criterion_7_complexity_accounting() {
    let params = default_solver();
    let mut rng = ChaCha8Rng::seed_from_u64(7000);
    let mut all_ok = true;
    for trial in 0..20 {
        let nd = 1 + trial % 6;
        let mut gains: Vec<f64> = (0..nd)
            .map(|_| 1e-3 / (1e4 + 6.25e4 * rng.random::<f64>()))
            .collect();
        gains.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let sol = solve_sector_slot(&gains, &params);
        all_ok &= !sol.trace.updates_per_iteration.is_empty()
            && sol
                .trace
                .updates_per_iteration
                .iter()
                .all(|&u| u == 3 * nd - 1);
    }
    verdict(
        "criterion 7 (complexity accounting)",
        all_ok,
        "3*N_j - 1 updates per iteration on 20 instances",
    );
}

/// Criterion 8: identical seeds and configs produce byte-identical CSV
/// under 1-thread and multi-thread execution.
#[test]
fn criterion_8_determinism_across_threads() {
    let mut base = ScenarioConfig::with_defaults(40, 99);
    base.num_sectors = 6;
    base.slots_per_frame = 4;
    let solver = SolverParams::from_config(&base);
    let spec = SweepSpec {
        parameter: SweptParameter::NumDevices,
        values: vec![24.0, 40.0],
        trials: 4,
        schemes: vec![Scheme::NomaOptimalPlacement, Scheme::OmaTdma],
        base,
    };
    let run_with = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        pool.install(|| result_rows_csv(&run_sweep(&spec, &solver).unwrap()))
    };
    let single = run_with(1);
    let multi = run_with(4);
    verdict(
        "criterion 8 (thread-count determinism)",
        single.as_bytes() == multi.as_bytes(),
        &format!("{} CSV bytes identical across 1 and 4 threads", single.len()),
    );
}
