//! Which delays each source of an eleven-source, three-layer array can
//! reach, and the step choices behind one of them.

use spdc_mux::RegisterTopology;

fn main() -> spdc_mux::Result<()> {
    let t = RegisterTopology::new(11, 3)?;
    println!("step delays {:?}, train length {}", t.step_delays(), t.train_length());
    print!("{}", t.accessibility_csv());

    let source = 2;
    println!("\npaths for source {source}:");
    for p in t.enumerate_delay_paths(source)? {
        println!("  delay {} = {:?}", p.delay, p.steps);
    }
    Ok(())
}
