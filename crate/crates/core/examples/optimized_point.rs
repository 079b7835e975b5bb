//! Pump power that balances lack against multi-photon emission for the
//! 100-source, multiple-4 array, checked by Monte Carlo.

use spdc_mux::{optimized_power, run_simulation, SimConfig};

fn main() -> spdc_mux::Result<()> {
    let point = optimized_power(100, 4, 3, 1e-8)?;
    println!("optimal mean pairs per source: {:.5}", point.mean_pairs);
    println!("exact lack rate:  {:.5}", point.rates.lack_rate);
    println!("exact multi rate: {:.5}", point.rates.multi_rate);
    println!("mean storage:     {:.3}", point.rates.mean_storage);

    let m = run_simulation(&SimConfig::new(100, 4, point.mean_pairs))?;
    println!(
        "monte carlo ({} cycles, crossed register): lack {:.5} +- {:.5}, multi {:.5} +- {:.5}",
        m.cycles,
        m.lack_rate().unwrap(),
        m.lack_std_error.unwrap(),
        m.multi_rate().unwrap(),
        m.multi_std_error.unwrap()
    );
    Ok(())
}
