//! Analytic prices next to a Brownian-bridge Monte Carlo estimate.
//!
//! ```text
//! cargo run --release --example monte_carlo_check
//! ```

use multistep_barrier::domain::{BarrierSpec, Direction, MarketParams, OptionType, TimeGrid};
use multistep_barrier::montecarlo::{rms_relative_error, simulate_book, McConfig};
use multistep_barrier::pricing::Pricer;
use multistep_barrier::reflection::EngineOptions;

fn main() -> multistep_barrier::Result<()> {
    let market = MarketParams::new(100.0, 0.05, 0.3);
    let grid = TimeGrid::uniform(5, 1.0)?;
    let barrier = BarrierSpec::full(Direction::Down, &[90.0, 88.0, 86.0, 84.0, 82.0]);
    let products: Vec<(OptionType, f64)> = [OptionType::DownOutCall, OptionType::DownInCall, OptionType::DownOutPut, OptionType::DownInPut]
        .into_iter()
        .flat_map(|t| [95.0, 105.0].map(|k| (t, k)))
        .collect();

    let pricer = Pricer::new(market, grid.clone(), barrier.clone(), EngineOptions::default())?;
    let config = McConfig { paths: 500_000, ..McConfig::default() };
    let book = simulate_book(&market, &grid, &barrier, &products, &config)?;

    let mut pairs = Vec::new();
    println!("{:<5} {:>7} {:>10} {:>10} {:>8}", "type", "strike", "analytic", "mc", "se");
    for (&(t, k), est) in products.iter().zip(&book.prices) {
        let analytic = pricer.price(t, k)?.price;
        pairs.push((analytic, est.price));
        println!("{:<5} {:>7.1} {:>10.4} {:>10.4} {:>8.4}", t.code(), k, analytic, est.price, est.std_error);
    }
    println!("RMS relative error {:.4}", rms_relative_error(&pairs)?);
    Ok(())
}
