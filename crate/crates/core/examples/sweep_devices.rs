//! Sweeps the device count and prints mean sum rates with confidence
//! intervals for NOMA with optimal and random SU placement.

use uav_noma::experiment::{run_sweep, SweptParameter};
use uav_noma::output::result_rows_csv;
use uav_noma::power::SolverParams;
use uav_noma::{Scheme, ScenarioConfig, SweepSpec};

fn main() {
    let base = ScenarioConfig::with_defaults(60, 1);
    let solver = SolverParams::from_config(&base);
    let spec = SweepSpec {
        parameter: SweptParameter::NumDevices,
        values: vec![40.0, 60.0, 80.0, 100.0],
        trials: 20,
        schemes: vec![Scheme::NomaOptimalPlacement, Scheme::NomaRandomPlacement],
        base,
    };
    let rows = run_sweep(&spec, &solver).unwrap();
    print!("{}", result_rows_csv(&rows));
}
