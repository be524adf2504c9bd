//! Breaks a survival probability into its signed reflection terms.
//!
//! ```text
//! cargo run --example survival_terms
//! ```

use multistep_barrier::domain::{default_icicles, Direction, TimeGrid};
use multistep_barrier::reflection::{pa_u, Diffusion, EngineOptions};

fn main() -> multistep_barrier::Result<()> {
    let grid = TimeGrid::uniform(3, 1.0)?;
    let levels = vec![Some(0.1), Some(0.15), Some(0.2)];
    let limits = default_icicles(Direction::Up, &levels);
    let process = Diffusion::new(0.01, 0.2, &grid);

    let result = pa_u(&process, &limits, &levels, &EngineOptions::default())?;
    println!("{:<10} {:>5} {:>12} {:>12} {:>14}", "subset", "sign", "weight", "orthant", "signed term");
    for term in &result.terms {
        println!(
            "{:<10} {:>5} {:>12.6} {:>12.6e} {:>14.6e}",
            term.subset.to_string(),
            if term.sign() > 0.0 { "+" } else { "-" },
            term.weight,
            term.orthant.value,
            term.sign() * term.value()
        );
    }
    println!("survival probability {:.10} (error bound {:.1e})", result.probability, result.error_bound);
    Ok(())
}
