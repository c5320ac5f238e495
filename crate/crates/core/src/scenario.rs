//! Seeded deployment generation, sectorization of the annulus, and the
//! cyclical TDMA time grid.
//!
//! All randomness is drawn from a caller-provided generator; the experiment
//! drivers use ChaCha8 with fixed stream ids so that deployments are
//! identical across schemes and platforms for a given seed.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::{PlacementRegion, ScenarioConfig};
use crate::placement;

/// ChaCha8 stream carrying device position draws.
pub const STREAM_DEVICES: u64 = 0;
/// ChaCha8 stream carrying random-SU-placement draws.
pub const STREAM_PLACEMENT: u64 = 1;

/// Seeded generator for one scenario stream.
pub fn scenario_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// The cyclical TDMA time grid: K = M * L slots of duration tau, grouped
/// into M frames of L slots. Slot numbers are 1-based (`1..=K`); frame `j`
/// (0-based sector index) owns slots `j*L + 1 ..= (j+1)*L`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    pub num_slots: usize,
    pub tau: f64,
    pub num_sectors: usize,
    pub slots_per_frame: usize,
    pub m_prelog: f64,
}

impl TimeGrid {
    /// Slot numbers of frame T_j for sector `j` (0-based).
    pub fn frame_slots(&self, sector: usize) -> std::ops::RangeInclusive<usize> {
        let l = self.slots_per_frame;
        sector * l + 1..=(sector + 1) * l
    }

    /// True when slot `k` (1-based) falls into sector `j`'s own relay frame,
    /// during which its devices stay silent.
    pub fn is_relay_slot(&self, sector: usize, k: usize) -> bool {
        self.frame_slots(sector).contains(&k)
    }

    /// Sector whose relay frame contains slot `k` (1-based).
    pub fn frame_of_slot(&self, k: usize) -> usize {
        debug_assert!(k >= 1 && k <= self.num_slots);
        (k - 1) / self.slots_per_frame
    }

    /// Non-silent slot count per sector over one cycle, K - L.
    pub fn active_slots_per_sector(&self) -> usize {
        self.num_slots - self.slots_per_frame
    }
}

/// Builds the time grid: K = M * L, tau = T / K, m = (M - 1) / M.
pub fn build_time_grid(config: &ScenarioConfig) -> TimeGrid {
    let num_slots = config.num_sectors * config.slots_per_frame;
    TimeGrid {
        num_slots,
        tau: config.revolution_period / num_slots as f64,
        num_sectors: config.num_sectors,
        slots_per_frame: config.slots_per_frame,
        m_prelog: config.m_prelog(),
    }
}

/// Draws N device positions uniformly over the annulus
/// `[r0, region_radius]` (or the full disk in `Disk` mode) via inverse-CDF
/// radius sampling. Deterministic for a fixed generator state.
pub fn generate_devices(config: &ScenarioConfig, rng: &mut impl Rng) -> Vec<[f64; 2]> {
    let r_outer = config.region_radius;
    let r_inner = match config.placement_region {
        PlacementRegion::Annulus => config.tbs_coverage_radius,
        PlacementRegion::Disk => 0.0,
    };
    let inner_sq = r_inner * r_inner;
    let outer_sq = r_outer * r_outer;
    (0..config.num_devices)
        .map(|_| {
            let u: f64 = rng.random();
            let r = (u * (outer_sq - inner_sq) + inner_sq).sqrt();
            let theta: f64 = rng.random::<f64>() * std::f64::consts::TAU;
            [r * theta.cos(), r * theta.sin()]
        })
        .collect()
}

/// Device-to-sector assignment. Devices inside the TBS coverage circle
/// (possible only in `Disk` mode) land in the TBS-direct bucket and are
/// excluded from all NOMA computations.
#[derive(Debug, Clone)]
pub struct SectorAssignment {
    /// `Some(j)` for the sector of each device, `None` for TBS-direct.
    pub sector_of_device: Vec<Option<usize>>,
    /// Ordered device index lists S_j, one per sector.
    pub devices_of_sector: Vec<Vec<usize>>,
    /// Devices served directly by the TBS.
    pub tbs_direct: Vec<usize>,
}

/// Polar angle in [0, 2*pi).
fn polar_angle(p: [f64; 2]) -> f64 {
    let th = p[1].atan2(p[0]);
    if th < 0.0 {
        th + std::f64::consts::TAU
    } else {
        th
    }
}

/// Assigns each device to the angular wedge containing its polar angle.
/// Wedge `j` covers `[2*pi*j/M, 2*pi*(j+1)/M)`, half-open, so a point on a
/// boundary belongs to the higher sector.
pub fn sectorize(devices: &[[f64; 2]], num_sectors: usize, r0: f64) -> SectorAssignment {
    assert!(num_sectors >= 2, "need at least two sectors");
    let wedge = std::f64::consts::TAU / num_sectors as f64;
    let mut sector_of_device = Vec::with_capacity(devices.len());
    let mut devices_of_sector = vec![Vec::new(); num_sectors];
    let mut tbs_direct = Vec::new();
    for (i, &p) in devices.iter().enumerate() {
        let r = (p[0] * p[0] + p[1] * p[1]).sqrt();
        if r <= r0 {
            sector_of_device.push(None);
            tbs_direct.push(i);
            continue;
        }
        let j = ((polar_angle(p) / wedge) as usize).min(num_sectors - 1);
        sector_of_device.push(Some(j));
        devices_of_sector[j].push(i);
    }
    SectorAssignment {
        sector_of_device,
        devices_of_sector,
        tbs_direct,
    }
}

/// How SU horizontal positions are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuPlacement {
    /// Per-sector centroid of the served devices.
    Optimal,
    /// Uniform draw inside the sector's annular wedge.
    Random,
}

/// A fully realized scenario: device positions, sector membership, SU
/// positions and the AU trajectory samples.
#[derive(Debug, Clone)]
pub struct Deployment {
    pub device_positions: Vec<[f64; 2]>,
    pub assignment: SectorAssignment,
    /// SU horizontal coordinates, one per sector (all at height h).
    pub su_positions: Vec<[f64; 2]>,
    /// AU coordinates per slot k = 1..=K.
    pub au_positions: Vec<[f64; 3]>,
    pub height: f64,
}

impl Deployment {
    /// Generates the deployment for `config`: devices from the device
    /// stream, sectorization, SU placement per `placement`, and the AU
    /// trajectory over the time grid.
    ///
    /// An empty sector gets its SU parked on the sector's angular bisector
    /// at radius (r0 + R) / 2; it contributes zero rate.
    pub fn generate(config: &ScenarioConfig, placement_policy: SuPlacement) -> Self {
        let grid = config.time_grid();
        let mut dev_rng = scenario_rng(config.seed, STREAM_DEVICES);
        let device_positions = generate_devices(config, &mut dev_rng);
        let assignment = sectorize(
            &device_positions,
            config.num_sectors,
            config.tbs_coverage_radius,
        );

        let mut place_rng = scenario_rng(config.seed, STREAM_PLACEMENT);
        let su_positions = (0..config.num_sectors)
            .map(|j| {
                let members = &assignment.devices_of_sector[j];
                match placement_policy {
                    SuPlacement::Random => {
                        placement::random_su_position(j, config, &mut place_rng)
                    }
                    SuPlacement::Optimal if members.is_empty() => {
                        empty_sector_fallback(j, config)
                    }
                    SuPlacement::Optimal => {
                        let pts: Vec<[f64; 2]> =
                            members.iter().map(|&i| device_positions[i]).collect();
                        placement::optimal_su_position(&pts)
                            .expect("non-empty sector")
                    }
                }
            })
            .collect();

        let au_positions = (1..=grid.num_slots)
            .map(|k| {
                crate::channel::au_position(
                    k,
                    grid.num_slots,
                    config.tbs_coverage_radius,
                    config.uav_height,
                )
                .expect("k in range by construction")
            })
            .collect();

        Deployment {
            device_positions,
            assignment,
            su_positions,
            au_positions,
            height: config.uav_height,
        }
    }

    /// Number of devices in sector `j`.
    pub fn sector_size(&self, j: usize) -> usize {
        self.assignment.devices_of_sector[j].len()
    }
}

/// SU fallback position for a sector with no devices.
pub fn empty_sector_fallback(sector: usize, config: &ScenarioConfig) -> [f64; 2] {
    let wedge = std::f64::consts::TAU / config.num_sectors as f64;
    let ang = (sector as f64 + 0.5) * wedge;
    let r = (config.tbs_coverage_radius + config.region_radius) / 2.0;
    [r * ang.cos(), r * ang.sin()]
}
