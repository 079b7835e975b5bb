//! Lack and multi-photon rates against pump power, from both engines.
//! Pass `gnuplot` as the first argument for plot-ready blocks.

use spdc_mux::sweep::emit_gnuplot;
use spdc_mux::{emit_csv, run_sweep, Engine, Grid, SimConfig, SweepParameter, SweepSpec};

fn main() -> spdc_mux::Result<()> {
    let mut base = SimConfig::new(100, 4, 0.049);
    base.cycles = 20_000;
    let spec = SweepSpec {
        parameter: SweepParameter::Power,
        grid: Grid::Range { from: 0.01, to: 0.3, steps: 30 },
        base,
        engine: Engine::Both,
    };
    let rows = run_sweep(&spec)?;
    if std::env::args().nth(1).as_deref() == Some("gnuplot") {
        print!("{}", emit_gnuplot(&rows));
    } else {
        print!("{}", emit_csv(&rows));
    }
    Ok(())
}
