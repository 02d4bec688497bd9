//! The five-drug experiment: fit the unblocked and blocked data by forward
//! selection, then find the best drug sequences under each model.

use oofa::fixtures;
use oofa::simulate::{argmax_sequences, component_order, CASE_STUDY_MODEL};
use oofa::stats::{forward_select, model_matrix, ModelOrder};

fn main() -> oofa::Result<()> {
    let mut models =
        vec![("true model".to_string(), CASE_STUDY_MODEL.iter().map(|(l, b)| (l.to_string(), *b)).collect())];
    for name in ["tb_unblocked", "tb12"] {
        let data = fixtures::load(name)?;
        let x = model_matrix(&data.design.to_blocked(), ModelOrder::SecondOrder)?;
        let fit = forward_select(&x, data.response.as_ref().expect("fixture has y"), 0.05)?;

        println!("{name}: {} runs, df {}", x.n_rows(), fit.fit.df);
        println!("  {:<12} {:>9} {:>8} {:>9} {:>10}", "term", "estimate", "se", "t", "p");
        let f = &fit.fit;
        for i in 0..f.labels.len() {
            println!(
                "  {:<12} {:>9.4} {:>8.4} {:>9.3} {:>10.3e}",
                f.labels[i], f.estimates[i], f.std_errors[i], f.t_values[i], f.p_values[i]
            );
        }
        println!();
        models.push((format!("fit to {name}"), fit.effects()));
    }

    for (name, effects) in &models {
        println!("best sequences, {name}:");
        for z in argmax_sequences(effects, 5)? {
            let order: Vec<String> = component_order(&z).iter().map(|c| format!("drug {c}")).collect();
            println!("  positions {z:?}  order {}", order.join(" -> "));
        }
    }
    Ok(())
}
