//! All eight knock-in/knock-out prices for an up and a down barrier.
//!
//! ```text
//! cargo run --example price_table
//! ```

use multistep_barrier::domain::{BarrierSpec, Direction, MarketParams, OptionType, TimeGrid};
use multistep_barrier::pricing::Pricer;
use multistep_barrier::reflection::EngineOptions;

fn main() -> multistep_barrier::Result<()> {
    let market = MarketParams::new(100.0, 0.03, 0.2);
    let grid = TimeGrid::uniform(6, 0.5)?;
    let barriers = [
        BarrierSpec::full(Direction::Up, &[105.0, 108.0, 110.0, 113.0, 115.0, 118.0]),
        BarrierSpec::full(Direction::Down, &[95.0, 92.0, 90.0, 87.0, 85.0, 82.0]),
    ];

    println!("{:<5} {:>7} {:>10} {:>10} {:>9}", "type", "strike", "price", "vanilla", "subsets");
    for barrier in barriers {
        let direction = barrier.direction;
        let pricer = Pricer::new(market, grid.clone(), barrier, EngineOptions::default())?;
        for t in OptionType::ALL.into_iter().filter(|t| t.direction() == direction) {
            for strike in [90.0, 100.0, 110.0] {
                let r = pricer.price(t, strike)?;
                println!("{:<5} {:>7.1} {:>10.4} {:>10.4} {:>9}", t.code(), strike, r.price, r.vanilla, r.subsets_evaluated);
            }
        }
    }
    Ok(())
}
