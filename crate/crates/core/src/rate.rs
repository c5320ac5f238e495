//! Achievable-rate computations: per-device SIC rates, per-slot aggregate
//! rates via the telescoping identity, per-sector relay rates over the
//! cycle, relay-link capacities, and the end-to-end system sum rate.

use crate::channel::ChannelGains;
use crate::config::ScenarioConfig;
use crate::power::{decode_order, PowerAllocation};
use crate::scenario::TimeGrid;

/// Rate of the device at `rank` in the decode order for one slot:
/// `m log2(1 + P g / (I + N0))` where `I` sums the received powers of the
/// devices decoded after it.
pub fn device_rate(
    rank: usize,
    powers: &[f64],
    gains: &[f64],
    m_prelog: f64,
    noise_power: f64,
) -> f64 {
    let interference: f64 = (rank + 1..powers.len())
        .map(|l| powers[l] * gains[l])
        .sum();
    let snr = powers[rank] * gains[rank] / (interference + noise_power);
    m_prelog * (1.0 + snr).log2()
}

/// Aggregate uplink rate of one sector in one slot. By the telescoping
/// identity this equals `m log2(1 + sum_i P_i g_i / N0)` independent of the
/// decode order.
pub fn sector_slot_rate(powers: &[f64], gains: &[f64], m_prelog: f64, noise_power: f64) -> f64 {
    let s: f64 = powers
        .iter()
        .zip(gains)
        .map(|(&p, &g)| p * g / noise_power)
        .sum();
    m_prelog * (1.0 + s).log2()
}

/// Same aggregate, computed as the sum of per-device SIC rates. Kept
/// separate so the telescoping identity can be asserted.
pub fn sector_slot_rate_per_device(
    powers: &[f64],
    gains: &[f64],
    m_prelog: f64,
    noise_power: f64,
) -> f64 {
    (0..powers.len())
        .map(|i| device_rate(i, powers, gains, m_prelog, noise_power))
        .sum()
}

/// Capacity of the relay link for sector j's frame: `(1 / 2M) log2(1 + P
/// g / N0)` per slot of the frame, summed over the frame. `gain` is the
/// AU-to-SU (or AU-to-TBS) channel gain during the relevant slot.
pub fn relay_slot_capacity(p_tx: f64, gain: f64, noise_power: f64, num_sectors: usize) -> f64 {
    (1.0 / (2.0 * num_sectors as f64)) * (1.0 + p_tx * gain / noise_power).log2()
}

/// Per-sector feasibility of the two relay hops against the collected
/// uplink rate. Infeasibility is reported, not repaired: the system rate is
/// then capped by the weaker hop.
#[derive(Debug, Clone)]
pub struct RelayCheck {
    /// Collected uplink rate R_j of the sector, bits/s/Hz.
    pub uplink_rate: f64,
    /// SU-to-AU hop capacity over the sector's frame.
    pub su_au_capacity: f64,
    /// AU-to-TBS hop capacity over the sector's frame.
    pub au_tbs_capacity: f64,
    pub su_au_ok: bool,
    pub au_tbs_ok: bool,
}

impl RelayCheck {
    pub fn delivered_rate(&self) -> f64 {
        self.uplink_rate
            .min(self.su_au_capacity)
            .min(self.au_tbs_capacity)
    }
}

/// Full rate accounting for one deployment and allocation.
#[derive(Debug, Clone)]
pub struct RateReport {
    /// Per-sector collected uplink rates R_j.
    pub sector_rates: Vec<f64>,
    /// Uplink sum rate (sum of `sector_rates`).
    pub sum_rate: f64,
    /// Per-sector relay feasibility.
    pub relay_checks: Vec<RelayCheck>,
    /// Fraction of devices with nonzero transmit energy over the cycle.
    pub served_fraction: f64,
    /// True when any sector's relay hop is the bottleneck.
    pub relay_bottleneck: bool,
}

/// Gains of one sector's devices toward its SU during slot `k`, in the
/// sector's device list order.
fn sector_gains_at(channels: &ChannelGains, sector: usize, k: usize) -> Vec<f64> {
    channels.g_iot_su[sector]
        .iter()
        .map(|per_slot| per_slot[k - 1])
        .collect()
}

/// Computes the full rate report.
///
/// For every (sector, slot) the powers are taken from the allocation in
/// device list order, re-sorted into decode order, and aggregated with the
/// `1 / 2L` frame-sharing factor. A slot-major recomputation cross-checks
/// the sector-major pass to within 1e-9 relative.
pub fn rate_report(
    allocation: &PowerAllocation,
    channels: &ChannelGains,
    grid: &TimeGrid,
    config: &ScenarioConfig,
) -> RateReport {
    let m = grid.m_prelog;
    let n0 = config.noise_power;
    let num_sectors = grid.num_sectors;
    let l = grid.slots_per_frame;

    let mut sector_rates = vec![0.0; num_sectors];
    for (j, matrix) in allocation.per_sector.iter().enumerate() {
        debug_assert_eq!(channels.g_iot_su[j].len(), matrix.powers.len());
        let mut total = 0.0;
        for k in 1..=grid.num_slots {
            if grid.is_relay_slot(j, k) {
                continue;
            }
            let gains = sector_gains_at(channels, j, k);
            let order = decode_order(&gains);
            let sorted_gains: Vec<f64> = order.iter().map(|&i| gains[i]).collect();
            let sorted_powers: Vec<f64> =
                order.iter().map(|&i| matrix.powers[i][k - 1]).collect();
            total += sector_slot_rate(&sorted_powers, &sorted_gains, m, n0);
        }
        sector_rates[j] = total / (2.0 * l as f64);
    }

    // Slot-major cross-check of the same accounting.
    let mut check = vec![0.0; num_sectors];
    for k in 1..=grid.num_slots {
        for (j, matrix) in allocation.per_sector.iter().enumerate() {
            if grid.is_relay_slot(j, k) {
                continue;
            }
            let gains = sector_gains_at(channels, j, k);
            let s: f64 = matrix
                .powers
                .iter()
                .zip(&gains)
                .map(|(row, &g)| row[k - 1] * g / n0)
                .sum();
            check[j] += m * (1.0 + s).log2() / (2.0 * l as f64);
        }
    }
    for (j, (&a, &b)) in sector_rates.iter().zip(&check).enumerate() {
        let scale = a.abs().max(b.abs()).max(1e-300);
        assert!(
            (a - b).abs() / scale < 1e-9,
            "slot-major recomputation diverged for sector {j}: {a} vs {b}"
        );
    }

    // Relay hop capacities over each sector's frame.
    let mut relay_checks = Vec::with_capacity(num_sectors);
    let mut relay_bottleneck = false;
    for (j, &uplink) in sector_rates.iter().enumerate() {
        let mut su_au = 0.0;
        let mut au_tbs = 0.0;
        for k in grid.frame_slots(j) {
            // g_au_su[j] is indexed by position within the frame.
            let l_idx = k - 1 - j * grid.slots_per_frame;
            su_au += relay_slot_capacity(config.p_su, channels.g_au_su[j][l_idx], n0, num_sectors);
            au_tbs += relay_slot_capacity(config.p_au, channels.g_au_tbs[k - 1], n0, num_sectors);
        }
        let check = RelayCheck {
            uplink_rate: uplink,
            su_au_capacity: su_au,
            au_tbs_capacity: au_tbs,
            su_au_ok: su_au >= uplink,
            au_tbs_ok: au_tbs >= uplink,
        };
        relay_bottleneck |= !check.su_au_ok || !check.au_tbs_ok;
        relay_checks.push(check);
    }

    // Served fraction: devices with any transmit energy over the cycle.
    let mut total_devices = 0usize;
    let mut served = 0usize;
    for matrix in &allocation.per_sector {
        for row in &matrix.powers {
            total_devices += 1;
            if row.iter().any(|&p| p > 0.0) {
                served += 1;
            }
        }
    }
    let served_fraction = if total_devices == 0 {
        0.0
    } else {
        served as f64 / total_devices as f64
    };

    let sum_rate = sector_rates.iter().sum();
    RateReport {
        sector_rates,
        sum_rate,
        relay_checks,
        served_fraction,
        relay_bottleneck,
    }
}
