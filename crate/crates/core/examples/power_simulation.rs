//! Power and type I error of forward selection for each bundled design as
//! the number of active position effects grows.
//!
//! ```text
//! cargo run --release --example power_simulation -- 200
//! ```

use oofa::simulate::{simulate, SimConfig};
use oofa::{fixtures, BlockOofaDesign};

fn main() -> oofa::Result<()> {
    let reps: usize = std::env::args().nth(1).map_or(1000, |a| a.parse().expect("reps must be an integer"));
    let mut designs = vec![("full k=3".to_string(), BlockOofaDesign::full(5, 3))];
    for name in ["tb20", "tb15", "tb12"] {
        designs.push((name.to_string(), fixtures::load(name)?.design.to_blocked()));
    }
    designs.push(("full k=2".to_string(), BlockOofaDesign::full(5, 2)));
    for name in ["tb40", "tb27", "tb25"] {
        designs.push((name.to_string(), fixtures::load(name)?.design.to_blocked()));
    }

    println!("{reps} reps per cell, alpha = 0.05\n");
    println!("{:<9} {:>4}  {}", "design", "", (1..=6).map(|p| format!("p={p:<4}")).collect::<Vec<_>>().join(" "));
    for (name, d) in designs {
        let mut pw = Vec::new();
        let mut ty1 = Vec::new();
        for p in 1..=6 {
            let report = simulate(&SimConfig { reps, ..SimConfig::new(d.clone(), p) })?;
            pw.push(format!("{:.3} ", report.pw));
            ty1.push(format!("{:.3} ", report.ty1));
        }
        println!("{name:<9} {:>4}  {}", "PW", pw.join(" "));
        println!("{:<9} {:>4}  {}", "", "TY1", ty1.join(" "));
    }
    Ok(())
}
