//! AU trajectory samples and line-of-sight channel gains for the three link
//! classes: IoT -> SU, SU -> AU, AU -> TBS.
//!
//! Fading magnitudes default to 1 (pure LoS). A [`Fading`] hook exists for
//! extensions; everything in the acceptance path uses [`UnitFading`].

use crate::config::ScenarioConfig;
use crate::error::Error;
use crate::scenario::{Deployment, TimeGrid};
use crate::Result;

/// Distance floor, meters, guarding the AU-SU coincidence singularity when
/// an SU sits exactly on the AU orbit. Matches the 1 m gain reference
/// distance.
pub const D_MIN_AU_SU: f64 = 1.0;

/// Supplies fading magnitudes per link per slot. Magnitudes, not powers:
/// the gain formulas square them.
pub trait Fading {
    fn iot_su(&self, _device: usize, _sector: usize, _k: usize) -> f64 {
        1.0
    }
    fn au_su(&self, _sector: usize, _k: usize) -> f64 {
        1.0
    }
    fn au_tbs(&self, _k: usize) -> f64 {
        1.0
    }
}

/// The default LoS assumption: every magnitude is exactly 1.
#[derive(Debug, Clone, Copy, Default)]
pub struct UnitFading;

impl Fading for UnitFading {}

/// AU position at slot `k` (1-based): the AU advances by 2*pi/K per slot on
/// the circle of radius r0 at height h, starting from the positive x-axis.
pub fn au_position(k: usize, num_slots: usize, r0: f64, h: f64) -> Result<[f64; 3]> {
    if k < 1 || k > num_slots {
        return Err(Error::SlotOutOfRange { k, max: num_slots });
    }
    let ang = std::f64::consts::TAU * (k - 1) as f64 / num_slots as f64;
    Ok([r0 * ang.cos(), r0 * ang.sin(), h])
}

/// IoT -> SU channel gain: beta0 * |h_fade|^2 / (dx^2 + dy^2 + h^2).
pub fn gain_iot_su(
    device: [f64; 2],
    su: [f64; 2],
    height: f64,
    beta0: f64,
    fading_mag: f64,
) -> f64 {
    let dx = su[0] - device[0];
    let dy = su[1] - device[1];
    beta0 * fading_mag * fading_mag / (dx * dx + dy * dy + height * height)
}

/// SU -> AU channel gain at slot `k`. Both UAVs fly at the same height, so
/// only the horizontal distance enters; a floor of [`D_MIN_AU_SU`] guards
/// the case where the SU sits on the AU orbit.
pub fn gain_au_su(su: [f64; 2], k: usize, config: &ScenarioConfig, fading_mag: f64) -> Result<f64> {
    let grid = config.time_grid();
    let au = au_position(k, grid.num_slots, config.tbs_coverage_radius, config.uav_height)?;
    let dx = au[0] - su[0];
    let dy = au[1] - su[1];
    let d = (dx * dx + dy * dy).sqrt().max(D_MIN_AU_SU);
    Ok(config.beta0 * fading_mag * fading_mag / (d * d))
}

/// AU -> TBS channel gain: the AU keeps constant distance sqrt(r0^2 + h^2)
/// from the TBS, so under unit fading the gain does not depend on `k`.
pub fn gain_au_tbs(k: usize, config: &ScenarioConfig, fading_mag: f64) -> Result<f64> {
    let grid = config.time_grid();
    if k < 1 || k > grid.num_slots {
        return Err(Error::SlotOutOfRange { k, max: grid.num_slots });
    }
    let d_sq = config.tbs_coverage_radius * config.tbs_coverage_radius
        + config.uav_height * config.uav_height;
    Ok(config.beta0 * fading_mag * fading_mag / d_sq)
}

/// All channel gains of one deployment.
#[derive(Debug, Clone)]
pub struct ChannelGains {
    /// `g_iot_su[j][i][k-1]`: gain from the i-th device of sector j (in
    /// sector list order) to SU_j during slot k.
    pub g_iot_su: Vec<Vec<Vec<f64>>>,
    /// `g_au_su[j][l]`: SU_j -> AU gain over the L slots of frame T_j.
    pub g_au_su: Vec<Vec<f64>>,
    /// `g_au_tbs[k-1]`: AU -> TBS gain per slot.
    pub g_au_tbs: Vec<f64>,
}

impl ChannelGains {
    pub fn compute(
        deployment: &Deployment,
        config: &ScenarioConfig,
        grid: &TimeGrid,
        fading: &impl Fading,
    ) -> Result<Self> {
        let k_all = grid.num_slots;
        let mut g_iot_su = Vec::with_capacity(config.num_sectors);
        let mut g_au_su = Vec::with_capacity(config.num_sectors);
        for j in 0..config.num_sectors {
            let su = deployment.su_positions[j];
            let members = &deployment.assignment.devices_of_sector[j];
            let per_device: Vec<Vec<f64>> = members
                .iter()
                .map(|&dev| {
                    (1..=k_all)
                        .map(|k| {
                            gain_iot_su(
                                deployment.device_positions[dev],
                                su,
                                deployment.height,
                                config.beta0,
                                fading.iot_su(dev, j, k),
                            )
                        })
                        .collect()
                })
                .collect();
            g_iot_su.push(per_device);
            let frame: Vec<f64> = grid
                .frame_slots(j)
                .map(|k| gain_au_su(su, k, config, fading.au_su(j, k)))
                .collect::<Result<_>>()?;
            g_au_su.push(frame);
        }
        let g_au_tbs = (1..=k_all)
            .map(|k| gain_au_tbs(k, config, fading.au_tbs(k)))
            .collect::<Result<_>>()?;
        Ok(ChannelGains {
            g_iot_su,
            g_au_su,
            g_au_tbs,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::SuPlacement;

    #[test]
    fn au_start_quarter_and_half_turns() {
        let p = au_position(1, 80, 300.0, 100.0).unwrap();
        assert!((p[0] - 300.0).abs() < 1e-9 && p[1].abs() < 1e-9 && p[2] == 100.0);
        let q = au_position(21, 80, 300.0, 100.0).unwrap();
        assert!(q[0].abs() < 1e-7 && (q[1] - 300.0).abs() < 1e-7);
        let r = au_position(41, 80, 300.0, 100.0).unwrap();
        assert!((r[0] + 300.0).abs() < 1e-7 && r[1].abs() < 1e-7);
    }

    #[test]
    fn au_slot_out_of_range() {
        assert!(au_position(0, 80, 300.0, 100.0).is_err());
        assert!(au_position(81, 80, 300.0, 100.0).is_err());
    }

    #[test]
    fn iot_gain_directly_below() {
        let g = gain_iot_su([0.0, 0.0], [0.0, 0.0], 100.0, 1e-3, 1.0);
        assert!((g - 1e-7).abs() < 1e-20);
    }

    #[test]
    fn iot_gain_rotation_invariant() {
        let g1 = gain_iot_su([50.0, 0.0], [0.0, 0.0], 100.0, 1e-3, 1.0);
        let g2 = gain_iot_su([0.0, 50.0], [0.0, 0.0], 100.0, 1e-3, 1.0);
        let g3 = gain_iot_su([50.0 / 2f64.sqrt(), 50.0 / 2f64.sqrt()], [0.0, 0.0], 100.0, 1e-3, 1.0);
        assert!((g1 - g2).abs() < 1e-22 && (g1 - g3).abs() < 1e-20);
    }

    #[test]
    fn iot_gain_inverse_square() {
        // Doubling the full 3-D distance quarters the gain.
        let g1 = gain_iot_su([0.0, 0.0], [0.0, 0.0], 100.0, 1e-3, 1.0);
        let g2 = gain_iot_su([0.0, 0.0], [0.0, 0.0], 200.0, 1e-3, 1.0);
        assert!((g1 / g2 - 4.0).abs() < 1e-12);
    }

    #[test]
    fn au_su_gain_cases() {
        let cfg = ScenarioConfig::with_defaults(10, 1);
        // SU exactly on the orbit start point: distance floor engages.
        let g = gain_au_su([300.0, 0.0], 1, &cfg, 1.0).unwrap();
        assert!((g - cfg.beta0 / (D_MIN_AU_SU * D_MIN_AU_SU)).abs() < 1e-15);
        // SU at the origin: d = r0 for every slot.
        let g0 = gain_au_su([0.0, 0.0], 17, &cfg, 1.0).unwrap();
        assert!((g0 - cfg.beta0 / (300.0 * 300.0)).abs() < 1e-15);
        // SU at (2 r0, 0), slot 1: d = r0.
        let g2 = gain_au_su([600.0, 0.0], 1, &cfg, 1.0).unwrap();
        assert!((g2 - cfg.beta0 / (300.0 * 300.0)).abs() < 1e-15);
    }

    #[test]
    fn au_tbs_gain_constant() {
        let cfg = ScenarioConfig::with_defaults(10, 1);
        let g1 = gain_au_tbs(1, &cfg, 1.0).unwrap();
        let gk = gain_au_tbs(80, &cfg, 1.0).unwrap();
        assert!((g1 - 1e-8).abs() < 1e-20, "1e-3 / (300^2 + 100^2) = 1e-8");
        assert_eq!(g1, gk);
    }

    #[test]
    fn au_tbs_degenerate_height() {
        let mut cfg = ScenarioConfig::with_defaults(10, 1);
        cfg.uav_height = 1e-9;
        let g = gain_au_tbs(1, &cfg, 1.0).unwrap();
        assert!((g - cfg.beta0 / (300.0 * 300.0)).abs() / g < 1e-12);
    }

    #[test]
    fn gains_bounded_by_nadir() {
        let cfg = ScenarioConfig::with_defaults(80, 4);
        let dep = Deployment::generate(&cfg, SuPlacement::Optimal);
        let grid = cfg.time_grid();
        let gains = ChannelGains::compute(&dep, &cfg, &grid, &UnitFading).unwrap();
        let cap = cfg.beta0 / (cfg.uav_height * cfg.uav_height);
        for per_sector in &gains.g_iot_su {
            for per_dev in per_sector {
                for &g in per_dev {
                    assert!(g > 0.0 && g <= cap);
                    // Unit fading: constant across slots.
                    assert_eq!(g, per_dev[0]);
                }
            }
        }
    }
}
