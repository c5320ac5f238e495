//! Compares NOMA (optimal and random SU placement) against the cyclical
//! TDMA-OMA baseline with paired seeds at one operating point.

use uav_noma::experiment::compare_schemes;
use uav_noma::power::SolverParams;
use uav_noma::{Scheme, ScenarioConfig};

fn main() {
    let cfg = ScenarioConfig::with_defaults(100, 1);
    let solver = SolverParams::from_config(&cfg);
    let rows = compare_schemes(&cfg, &Scheme::all(), 20, &solver).unwrap();

    println!("scheme         mean_sum_rate  ci95      served");
    for r in &rows {
        println!(
            "{:14} {:13.3} +/- {:5.3}  {:.3}",
            r.scheme, r.mean_sum_rate, r.ci95_halfwidth, r.mean_served_fraction
        );
    }
    let noma = rows.iter().find(|r| r.scheme == "noma_optimal").unwrap();
    let oma = rows.iter().find(|r| r.scheme == "oma_tdma").unwrap();
    println!(
        "NOMA-optimal over OMA: {:+.1}%",
        100.0 * (noma.mean_sum_rate / oma.mean_sum_rate - 1.0)
    );
}
