//! Barriers that are switched off on some steps, and end-of-step caps
//! ("icicles") that constrain the price without knocking it out.
//!
//! ```text
//! cargo run --example partial_monitoring
//! ```

use multistep_barrier::domain::{BarrierSpec, Direction, MarketParams, OptionType, TimeGrid};
use multistep_barrier::pricing::Pricer;
use multistep_barrier::reflection::EngineOptions;

fn main() -> multistep_barrier::Result<()> {
    let market = MarketParams::new(100.0, 0.03, 0.25);
    let grid = TimeGrid::uniform(4, 1.0)?;
    let opts = EngineOptions::default();

    let cases = [
        ("every step", BarrierSpec::full(Direction::Up, &[120.0, 120.0, 120.0, 120.0])),
        ("steps 2 and 4", BarrierSpec::new(Direction::Up, vec![None, Some(120.0), None, Some(120.0)])),
        ("last step only", BarrierSpec::new(Direction::Up, vec![None, None, None, Some(120.0)])),
        ("last step, capped at 110 after step 1", BarrierSpec::new(Direction::Up, vec![None, None, None, Some(120.0)]).with_icicle(0, 110.0)),
    ];
    for (label, barrier) in cases {
        let pricer = Pricer::new(market, grid.clone(), barrier, opts)?;
        let r = pricer.price(OptionType::UpOutCall, 100.0)?;
        println!("{label:<40} UOC {:.4}  (vanilla {:.4})", r.price, r.vanilla);
    }
    Ok(())
}
