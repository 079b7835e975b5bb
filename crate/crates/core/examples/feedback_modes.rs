//! Raising the pump while storage has room: off, boost and turbo boost.

use spdc_mux::{run_simulation, FeedbackPolicy, SimConfig};

fn main() -> spdc_mux::Result<()> {
    let base = SimConfig::new(60, 4, 0.05);
    let policies = [
        FeedbackPolicy::OFF,
        FeedbackPolicy::boost(0.25),
        FeedbackPolicy::boost(0.5),
        FeedbackPolicy::turbo_boost(0.5),
        FeedbackPolicy::turbo_boost(1.0),
    ];
    println!("{:>12} {:>8} {:>10} {:>10} {:>8}", "mode", "strength", "lack", "multi", "storage");
    for feedback in policies {
        let m = run_simulation(&SimConfig { feedback, ..base.clone() })?;
        println!(
            "{:>12} {:>8} {:>10.3e} {:>10.3e} {:>8.3}",
            feedback.mode.as_str(),
            feedback.strength,
            m.lack_rate().unwrap(),
            m.multi_rate().unwrap(),
            m.mean_storage_level().unwrap()
        );
    }
    Ok(())
}
