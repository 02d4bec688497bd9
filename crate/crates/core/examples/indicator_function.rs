//! Indicator-function coefficients of a small blocked design, and the
//! replicate counts they reproduce.

use oofa::indicator::IndicatorSpectrum;
use oofa::{fixtures, OofaDesign};

fn main() -> oofa::Result<()> {
    let design = fixtures::load("d1_blocked")?.design.to_blocked();
    let spec = IndicatorSpectrum::of_design(&design)?;
    println!("m = {}, k = {}, n = {}, a0 = {:.4}", spec.m(), spec.k(), spec.n_runs(), spec.a0());

    println!("\n{:>8} {:>3} {:>9} {:>9}", "t", "s", "a", "(a/a0)^2");
    for w in spec.words() {
        let t: String = w.t.iter().map(|d| d.to_string()).collect();
        println!("{t:>8} {:>3} {:>9.4} {:>9.4}", w.s, w.coefficient, w.ratio_sq);
    }

    println!("\nF(z, b) over the candidate set:");
    for z in OofaDesign::full(3).runs() {
        let counts: Vec<String> =
            (1..=design.k()).map(|b| format!("{:.0}", spec.evaluate(z, b).unwrap().abs())).collect();
        println!("  {z:?}  blocks: {}", counts.join(" "));
    }
    Ok(())
}
