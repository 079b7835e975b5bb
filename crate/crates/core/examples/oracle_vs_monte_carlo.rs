//! The simulator against the exact stationary chain on an array without
//! register boundaries, where the two must agree.

use spdc_mux::oracle::rates_at;
use spdc_mux::{run_simulation, BoundaryMode, SimConfig};

fn main() -> spdc_mux::Result<()> {
    for (sources, multiple, steps, n) in [(6, 2, 2, 0.2), (20, 3, 3, 0.15), (100, 4, 3, 0.049)] {
        let exact = rates_at(sources, multiple, steps, n)?;
        let cfg = SimConfig {
            step_count: steps,
            boundary: BoundaryMode::Unconstrained,
            ..SimConfig::new(sources, multiple, n)
        };
        let m = run_simulation(&cfg)?;
        let z = |sim: f64, truth: f64, se: f64| (sim - truth) / se;
        println!("S={sources} m={multiple} K={steps} N={n}");
        println!(
            "  lack  exact {:.5}  mc {:.5}  z {:+.2}",
            exact.lack_rate,
            m.lack_rate().unwrap(),
            z(m.lack_rate().unwrap(), exact.lack_rate, m.lack_std_error.unwrap())
        );
        println!(
            "  multi exact {:.5}  mc {:.5}  z {:+.2}",
            exact.multi_rate,
            m.multi_rate().unwrap(),
            z(m.multi_rate().unwrap(), exact.multi_rate, m.multi_std_error.unwrap())
        );
    }
    Ok(())
}
