//! Sector-UAV horizontal placement: the closed-form centroid optimum, a
//! random baseline, and a brute-force grid oracle.
//!
//! The placement objective is the sum of squared horizontal distances from
//! the SU to its sector's devices; its unique minimizer is the coordinate
//! mean.

use rand::Rng;

use crate::config::ScenarioConfig;
use crate::error::Error;
use crate::Result;

/// Coordinate mean of the sector's devices; minimizes the sum of squared
/// horizontal distances.
pub fn optimal_su_position(sector_devices: &[[f64; 2]]) -> Result<[f64; 2]> {
    if sector_devices.is_empty() {
        return Err(Error::InvalidInput(
            "optimal_su_position needs a non-empty device list".into(),
        ));
    }
    let n = sector_devices.len() as f64;
    let (sx, sy) = sector_devices
        .iter()
        .fold((0.0, 0.0), |(sx, sy), p| (sx + p[0], sy + p[1]));
    Ok([sx / n, sy / n])
}

/// Uniform draw inside sector `j`'s annular wedge, for the random-placement
/// baseline. Deterministic per generator state.
pub fn random_su_position(
    sector: usize,
    config: &ScenarioConfig,
    rng: &mut impl Rng,
) -> [f64; 2] {
    let wedge = std::f64::consts::TAU / config.num_sectors as f64;
    let rated_inner = config.tbs_coverage_radius;
    let inner_sq = rated_inner * rated_inner;
    let outer_sq = config.region_radius * config.region_radius;
    let r = (rng.random::<f64>() * (outer_sq - inner_sq) + inner_sq).sqrt();
    let theta = (sector as f64 + rng.random::<f64>()) * wedge;
    [r * theta.cos(), r * theta.sin()]
}

/// Exhaustive grid scan over `bounding_box = (min, max)`, returning the
/// grid point with the smallest sum of squared distances. Ties break toward
/// the smallest `(x, y)` in lexicographic order.
pub fn brute_force_su_position(
    sector_devices: &[[f64; 2]],
    bounding_box: ([f64; 2], [f64; 2]),
    grid_step: f64,
) -> Result<[f64; 2]> {
    if sector_devices.is_empty() {
        return Err(Error::InvalidInput(
            "brute_force_su_position needs a non-empty device list".into(),
        ));
    }
    if grid_step <= 0.0 || grid_step.is_nan() {
        return Err(Error::InvalidInput(format!(
            "grid_step must be > 0, got {grid_step}"
        )));
    }
    let (lo, hi) = bounding_box;
    let nx = ((hi[0] - lo[0]) / grid_step).floor() as usize + 1;
    let ny = ((hi[1] - lo[1]) / grid_step).floor() as usize + 1;
    let mut best = [lo[0], lo[1]];
    let mut best_cost = f64::INFINITY;
    for ix in 0..nx {
        let x = lo[0] + ix as f64 * grid_step;
        for iy in 0..ny {
            let y = lo[1] + iy as f64 * grid_step;
            let cost: f64 = sector_devices
                .iter()
                .map(|p| {
                    let dx = x - p[0];
                    let dy = y - p[1];
                    dx * dx + dy * dy
                })
                .sum();
            // Strict improvement + ascending scan order = lexicographic ties.
            if cost < best_cost {
                best_cost = cost;
                best = [x, y];
            }
        }
    }
    Ok(best)
}

/// Sum of squared horizontal distances, the placement objective.
pub fn placement_objective(su: [f64; 2], sector_devices: &[[f64; 2]]) -> f64 {
    sector_devices
        .iter()
        .map(|p| {
            let dx = su[0] - p[0];
            let dy = su[1] - p[1];
            dx * dx + dy * dy
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{scenario_rng, STREAM_PLACEMENT};

    #[test]
    fn centroid_of_pair_is_midpoint() {
        let c = optimal_su_position(&[[0.0, 0.0], [2.0, 0.0]]).unwrap();
        assert_eq!(c, [1.0, 0.0]);
    }

    #[test]
    fn centroid_of_single_device_is_itself() {
        let c = optimal_su_position(&[[123.4, -56.7]]).unwrap();
        assert_eq!(c, [123.4, -56.7]);
    }

    #[test]
    fn centroid_of_triangle() {
        let c = optimal_su_position(&[[0.0, 0.0], [3.0, 0.0], [0.0, 3.0]]).unwrap();
        assert!((c[0] - 1.0).abs() < 1e-15 && (c[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn empty_sector_is_an_error() {
        assert!(optimal_su_position(&[]).is_err());
    }

    #[test]
    fn grid_scan_finds_midpoint() {
        let pts = [[0.0, 0.0], [2.0, 0.0]];
        let p = brute_force_su_position(&pts, ([-1.0, -1.0], [3.0, 1.0]), 0.5).unwrap();
        assert_eq!(p, [1.0, 0.0]);
    }

    #[test]
    fn grid_scan_single_device_on_node() {
        let pts = [[1.0, 1.0]];
        let p = brute_force_su_position(&pts, ([0.0, 0.0], [2.0, 2.0]), 0.5).unwrap();
        assert_eq!(p, [1.0, 1.0]);
    }

    #[test]
    fn random_position_stays_in_wedge() {
        let cfg = ScenarioConfig::with_defaults(10, 77);
        let mut rng = scenario_rng(cfg.seed, STREAM_PLACEMENT);
        for j in 0..cfg.num_sectors {
            let p = random_su_position(j, &cfg, &mut rng);
            let r = (p[0] * p[0] + p[1] * p[1]).sqrt();
            assert!(r >= cfg.tbs_coverage_radius && r <= cfg.region_radius);
            let mut th = p[1].atan2(p[0]);
            if th < 0.0 {
                th += std::f64::consts::TAU;
            }
            let wedge = std::f64::consts::TAU / cfg.num_sectors as f64;
            assert!(th >= j as f64 * wedge && th < (j + 1) as f64 * wedge);
        }
    }

    #[test]
    fn random_position_deterministic_per_seed() {
        let cfg = ScenarioConfig::with_defaults(10, 123);
        let a = random_su_position(3, &cfg, &mut scenario_rng(cfg.seed, STREAM_PLACEMENT));
        let b = random_su_position(3, &cfg, &mut scenario_rng(cfg.seed, STREAM_PLACEMENT));
        assert_eq!(a, b);
    }

    #[test]
    fn translation_equivariance() {
        let pts = [[10.0, 20.0], [30.0, -5.0], [0.0, 0.0], [7.5, 7.5]];
        let c = optimal_su_position(&pts).unwrap();
        let v = [13.0, -4.5];
        let shifted: Vec<[f64; 2]> = pts.iter().map(|p| [p[0] + v[0], p[1] + v[1]]).collect();
        let cs = optimal_su_position(&shifted).unwrap();
        assert!((cs[0] - c[0] - v[0]).abs() < 1e-12 && (cs[1] - c[1] - v[1]).abs() < 1e-12);
    }
}
