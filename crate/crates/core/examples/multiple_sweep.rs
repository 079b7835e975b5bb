//! How the lack rate climbs as more photons are demanded per cycle while the
//! register depth stays fixed, so storage shrinks as the multiple grows.

use spdc_mux::sweep::EngineTag;
use spdc_mux::{run_sweep, Engine, Grid, SimConfig, SweepParameter, SweepSpec};

fn main() -> spdc_mux::Result<()> {
    let mut base = SimConfig::new(100, 4, 0.049);
    base.cycles = 50_000;
    let spec = SweepSpec {
        parameter: SweepParameter::Multiple,
        grid: Grid::Values((1..=8).map(f64::from).collect()),
        base,
        engine: Engine::Both,
    };
    println!("{:>8} {:>8} {:>12} {:>12}", "multiple", "capacity", "lack (exact)", "lack (mc)");
    let rows = run_sweep(&spec)?;
    for pair in rows.chunks(2) {
        let m = pair[0].param as u32;
        let lack = |tag: EngineTag| {
            let row = pair.iter().find(|r| r.engine == tag).unwrap();
            row.lack_rate.map_or("NA".into(), |x| format!("{x:.3e}"))
        };
        println!("{:>8} {:>8} {:>12} {:>12}", m, 8 - m, lack(EngineTag::Oracle), lack(EngineTag::MonteCarlo));
    }
    Ok(())
}
