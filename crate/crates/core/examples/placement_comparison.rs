//! Compares centroid SU placement against random placement on the
//! mean-squared-distance objective, sector by sector.

use uav_noma::placement::{placement_objective, random_su_position};
use uav_noma::scenario::{scenario_rng, SuPlacement, STREAM_PLACEMENT};
use uav_noma::{Deployment, ScenarioConfig};

fn main() {
    let cfg = ScenarioConfig::with_defaults(80, 7);
    let dep = Deployment::generate(&cfg, SuPlacement::Optimal);
    let mut rng = scenario_rng(cfg.seed, STREAM_PLACEMENT);

    println!("sector  devices  centroid-obj  random-obj  ratio");
    for j in 0..cfg.num_sectors {
        let members: Vec<[f64; 2]> = dep.assignment.devices_of_sector[j]
            .iter()
            .map(|&i| dep.device_positions[i])
            .collect();
        if members.is_empty() {
            println!("{j:6}        0             -           -      -");
            continue;
        }
        let centroid_obj = placement_objective(dep.su_positions[j], &members);
        let random_obj = placement_objective(random_su_position(j, &cfg, &mut rng), &members);
        println!(
            "{j:6} {:8} {centroid_obj:13.1} {random_obj:11.1} {:6.2}",
            members.len(),
            random_obj / centroid_obj
        );
    }
}
