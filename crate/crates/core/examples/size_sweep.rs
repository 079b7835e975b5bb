//! Lack rate against array size at fixed pump power: the multiplexing gain.

use spdc_mux::{run_sweep, Engine, Grid, SimConfig, SweepParameter, SweepSpec};

fn main() -> spdc_mux::Result<()> {
    let mut base = SimConfig::new(100, 4, 0.049);
    base.cycles = 50_000;
    let spec = SweepSpec {
        parameter: SweepParameter::Size,
        grid: Grid::Values(vec![10.0, 25.0, 50.0, 75.0, 100.0, 150.0, 200.0]),
        base,
        engine: Engine::MonteCarlo,
    };
    println!("{:>7} {:>10} {:>10} {:>8}", "sources", "lack", "multi", "storage");
    for row in run_sweep(&spec)? {
        println!(
            "{:>7} {:>10.3e} {:>10.3e} {:>8.3}",
            row.param,
            row.lack_rate.unwrap_or(f64::NAN),
            row.multi_rate.unwrap_or(f64::NAN),
            row.mean_storage.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
