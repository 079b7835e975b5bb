//! Nine- and eleven-source arrays where the register boundary bites: the
//! exact rates ignore it, the simulation does not.

use spdc_mux::oracle::rates_at;
use spdc_mux::{optimized_power, run_simulation, SimConfig};

fn main() -> spdc_mux::Result<()> {
    println!("{:>7} {:>8} {:>9} {:>11} {:>11} {:>11}", "sources", "multiple", "N*", "lack exact", "lack mc", "multi mc");
    for sources in [9usize, 11] {
        for multiple in [3u32, 4] {
            let n = optimized_power(sources, multiple, 3, 1e-9)?.mean_pairs;
            let exact = rates_at(sources, multiple, 3, n)?;
            let mut cfg = SimConfig::new(sources, multiple, n);
            cfg.cycles = 200_000;
            let m = run_simulation(&cfg)?;
            println!(
                "{:>7} {:>8} {:>9.4} {:>11.4} {:>11.4} {:>11.4}",
                sources,
                multiple,
                n,
                exact.lack_rate,
                m.lack_rate().unwrap(),
                m.multi_rate().unwrap()
            );
        }
    }
    Ok(())
}
