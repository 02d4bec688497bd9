//! Finite-field Latin squares and the component orthogonal arrays they stack
//! into.
//!
//! ```text
//! cargo run --example latin_squares -- 7
//! ```

use oofa::latin::CandidateSet;
use oofa::GaloisField;

fn main() -> oofa::Result<()> {
    let m: usize = std::env::args().nth(1).map_or(5, |a| a.parse().expect("order must be an integer"));

    let field = GaloisField::new(m)?;
    println!("GF({m}): characteristic {}, degree {}", field.characteristic(), field.degree());

    let set = CandidateSet::new(m)?;
    println!("{} Latin squares, {} COAs", set.squares.len(), set.coas.len());

    for sq in set.squares.iter().take(m - 1) {
        println!("\nL{}", sq.index());
        for row in sq.rows() {
            println!("  {row:?}");
        }
    }

    let base = &set.squares[..m - 1];
    let orthogonal = base.iter().enumerate().all(|(i, a)| base[i + 1..].iter().all(|b| a.is_orthogonal_to(b)));
    println!("\nfirst {} squares mutually orthogonal: {orthogonal}", m - 1);
    println!("C1 is a COA with {} rows: {}", set.coa(1).n_rows(), set.coa(1).is_coa());
    Ok(())
}
