//! Watching individual cycles of a run through the observer hook.

use spdc_mux::{SimConfig, Simulator};

fn main() -> spdc_mux::Result<()> {
    let mut cfg = SimConfig::new(100, 4, 0.049);
    cfg.cycles = 12;
    let sim = Simulator::new(cfg)?;
    let metrics = sim.run_with(0, |tr| {
        println!(
            "cycle {:>2}: stored in {}, heralds {:>2}, filled {}, stored out {}, discarded {:>2}{}",
            tr.cycle_index,
            tr.stored_in,
            tr.heralds_in(),
            tr.plan.filled(),
            tr.plan.storage_out.level(),
            tr.plan.discarded,
            if tr.plan.multi_count > 0 { "  (multi-photon)" } else { "" }
        );
    })?;
    println!("lack {} of {} slots", metrics.lack_count, metrics.total_slots);
    Ok(())
}
