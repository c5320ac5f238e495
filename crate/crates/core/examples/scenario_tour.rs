//! Generates a deployment and prints its structure: device counts per
//! sector, SU positions, and the AU trajectory sampling.

use uav_noma::scenario::SuPlacement;
use uav_noma::{Deployment, ScenarioConfig};

fn main() {
    let cfg = ScenarioConfig::with_defaults(60, 42);
    let grid = cfg.time_grid();
    println!(
        "scenario: M={} sectors, L={} slots/frame, K={} slots, tau={:.2} s, m={:.2}",
        grid.num_sectors, grid.slots_per_frame, grid.num_slots, grid.tau, grid.m_prelog
    );

    let dep = Deployment::generate(&cfg, SuPlacement::Optimal);
    for j in 0..grid.num_sectors {
        let su = dep.su_positions[j];
        println!(
            "sector {j}: {:2} devices, SU at ({:8.2}, {:8.2}), relay frame slots {:?}",
            dep.sector_size(j),
            su[0],
            su[1],
            grid.frame_slots(j)
        );
    }

    let au_first = dep.au_positions[0];
    let au_mid = dep.au_positions[grid.num_slots / 2];
    println!(
        "AU orbit: slot 1 at ({:.1}, {:.1}, {:.1}), slot {} at ({:.1}, {:.1}, {:.1})",
        au_first[0],
        au_first[1],
        au_first[2],
        grid.num_slots / 2 + 1,
        au_mid[0],
        au_mid[1],
        au_mid[2]
    );
}
