//! Word length patterns of the bundled designs, ranked by aberration.

use oofa::{fixtures, wlp, BlockOofaDesign};

fn main() -> oofa::Result<()> {
    let mut rows = Vec::new();
    for k in [3, 2] {
        rows.push((format!("full k={k}"), wlp::wlp(&BlockOofaDesign::full(5, k))?));
    }
    for name in ["tb20", "tb15", "tb12", "tb40", "tb27", "tb25"] {
        let d = fixtures::load(name)?.design.to_blocked();
        rows.push((format!("{name} k={}", d.k()), wlp::wlp(&d)?));
    }

    println!(
        "{:<12} {:>7} {:>7} {:>7} {:>7} {:>7} {:>7} {:>7} {:>7}",
        "design", "w1P", "w1B", "w2P", "w2B", "w3P", "w3B", "w4P", "w4B"
    );
    for (name, w) in &rows {
        let cells: Vec<String> = w.interleaved()[..8].iter().map(|v| format!("{v:>7.3}")).collect();
        println!("{name:<12} {}", cells.join(" "));
    }

    let tb15 = &rows[3].1;
    let tb12 = &rows[4].1;
    println!("\ntb15 vs tb12: {:?}", tb15.compare(tb12)?);
    Ok(())
}
