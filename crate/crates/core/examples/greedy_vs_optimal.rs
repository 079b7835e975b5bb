//! One cycle through the scheduler, then how often the in-order greedy rule
//! fills fewer slots than an unordered maximum matching.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spdc_mux::{plan_cycle, plan_cycle_optimal, HeraldReport, RegisterTopology, StorageState};

fn main() -> spdc_mux::Result<()> {
    let t = RegisterTopology::new(11, 3)?;
    let report = HeraldReport::from_counts(&[0, 1, 0, 2, 0, 0, 1, 1, 0, 1, 1]);
    let plan = plan_cycle(&t, &report, &StorageState::with_singles(1, 4, 4), 4)?;
    println!("slots: {:?}", plan.slot_fill.iter().map(|s| s.as_ref().map(|p| p.origin)).collect::<Vec<_>>());
    println!("stored: {:?}", plan.storage_out.stored);
    println!("discarded: {}", plan.discarded);

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut trials, mut behind) = (0, 0);
    for _ in 0..50_000 {
        let s = rng.random_range(4..=12);
        let m = rng.random_range(1..=8);
        let t = RegisterTopology::new(s, 3)?;
        let p = rng.random_range(0.1..0.7);
        let heralds: Vec<u32> = (0..s).map(|_| u32::from(rng.random_bool(p))).collect();
        let report = HeraldReport::from_counts(&heralds);
        let storage = StorageState::with_singles(rng.random_range(0..=8 - m), 8 - m, m);
        let greedy = plan_cycle(&t, &report, &storage, m)?.filled();
        let best = plan_cycle_optimal(&t, &report, &storage, m)?.filled();
        trials += 1;
        behind += u32::from(greedy < best);
    }
    println!("greedy behind optimum in {behind} of {trials} random boundary cycles");
    Ok(())
}
