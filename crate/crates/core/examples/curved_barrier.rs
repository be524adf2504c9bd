//! An exponential barrier approximated by flat steps under each
//! discretisation rule, with the approximation tightening as steps are added.
//!
//! ```text
//! cargo run --example curved_barrier
//! ```

use multistep_barrier::curved::{price_curved, survival_prob, CurvedBarrier, DiscretizationRule};
use multistep_barrier::domain::{Direction, MarketParams, OptionType, TimeGrid};
use multistep_barrier::reflection::EngineOptions;

fn main() -> multistep_barrier::Result<()> {
    let market = MarketParams::new(100.0, 0.03, 0.2);
    let curve = CurvedBarrier::Exponential { a: 110.0, delta: 0.2 };
    let opts = EngineOptions::default();
    let rules = ["left", "midlog", "midprice", "right"];

    println!("{:>5} {}", "steps", rules.map(|r| format!("{r:>10}")).join(""));
    for steps in [2, 4, 8, 12] {
        let grid = TimeGrid::uniform(steps, 0.5)?;
        let row: Vec<String> = rules
            .iter()
            .map(|r| {
                let rule: DiscretizationRule = r.parse().unwrap();
                let p = price_curved(OptionType::UpOutCall, 100.0, &curve, &grid, rule, &market, &opts).unwrap();
                format!("{:>10.4}", p.price)
            })
            .collect();
        println!("{steps:>5} {}", row.join(""));
    }

    let quantile = CurvedBarrier::quantile(0.95)?;
    let grid = TimeGrid::uniform(10, 1.0)?;
    let p = survival_prob(&quantile, &grid, DiscretizationRule::MidpointLog, &market, Direction::Up, &opts)?;
    println!("never crossing the 95% quantile curve: {:.4}", p.probability);
    Ok(())
}
