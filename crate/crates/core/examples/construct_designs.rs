//! Builds blocked designs for m = 5: COA stacking when the block size allows
//! it, randomized Latin-square and row exchange otherwise.
//!
//! ```text
//! cargo run --release --example construct_designs -- 3 12 42
//! ```

use oofa::construct::{construct, SearchBudget};
use oofa::design::DesignFile;
use oofa::DEFAULT_SEED;

fn main() -> oofa::Result<()> {
    let args: Vec<usize> = std::env::args().skip(1).map(|a| a.parse().expect("integer argument")).collect();
    let (k, block_size) = match args[..] {
        [k, n, ..] => (k, n),
        _ => (3, 15),
    };
    let seed = args.get(2).map_or(DEFAULT_SEED, |&s| s as u64);

    let result = construct(5, k, block_size, &SearchBudget::with_seed(seed))?;
    let s = &result.shape;
    println!("m=5 k={k} n_B={block_size}: λ={} γ={} δ={}", s.lambda, s.gamma, s.delta);
    match result.best_restart {
        Some(r) => println!("best of {} restarts: #{r} (seed {seed})", result.restarts),
        None => println!("deterministic COA stacking"),
    }
    for (b, p) in result.provenance.iter().enumerate() {
        println!("block {}: COAs {:?}, squares {:?}, rows {:?}", b + 1, p.coas, p.squares, p.rows);
    }
    let w: Vec<String> = result.wlp.interleaved()[..8].iter().map(|v| format!("{v:.3}")).collect();
    println!("W' = ({}, ...)\n", w.join(", "));
    print!("{}", DesignFile::blocked(result.design).to_csv());
    Ok(())
}
