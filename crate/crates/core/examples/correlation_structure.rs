//! Largest correlations between groups of model terms for each design.

use oofa::stats::{correlation_matrix, model_matrix, ModelOrder};
use oofa::{fixtures, BlockOofaDesign};

fn group(label: &str) -> &'static str {
    if label.starts_with("B^") {
        "block"
    } else if label[1..].contains('Z') {
        "interaction"
    } else if label.ends_with("^q") {
        "quadratic"
    } else {
        "linear"
    }
}

fn main() -> oofa::Result<()> {
    let groups = ["block", "linear", "quadratic", "interaction"];
    let mut designs = vec![("full k=3".to_string(), BlockOofaDesign::full(5, 3))];
    for name in ["tb20", "tb15", "tb12", "tb40", "tb27", "tb25"] {
        designs.push((name.to_string(), fixtures::load(name)?.design.to_blocked()));
    }

    for (name, d) in &designs {
        let c = correlation_matrix(&model_matrix(d, ModelOrder::SecondOrder)?)?;
        println!("{name}: max |r| between groups");
        for (i, a) in groups.iter().enumerate() {
            for b in &groups[i..] {
                let mut worst: f64 = 0.0;
                for x in c.labels.iter().filter(|l| group(l) == *a) {
                    for y in c.labels.iter().filter(|l| group(l) == *b && *l != x) {
                        worst = worst.max(c.get(x, y).unwrap().abs());
                    }
                }
                println!("  {a:>11} vs {b:<11} {worst:.3}");
            }
        }
    }
    Ok(())
}
