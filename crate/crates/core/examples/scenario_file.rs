//! Loads a TOML scenario and prices its contracts, writing CSV to stdout.
//!
//! ```text
//! cargo run --example scenario_file -- crates/core/examples/scenarios/down_partial.toml
//! ```

use multistep_barrier::pricing::Pricer;
use multistep_barrier::report::{emit_csv, CsvTable, Field};
use multistep_barrier::scenario::Scenario;
use std::path::PathBuf;

fn main() -> multistep_barrier::Result<()> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/scenarios/type1_up.toml"));
    let s = Scenario::load(&path)?;
    let pricer = Pricer::new(s.market, s.grid.clone(), s.pricing_barrier()?, s.engine)?;

    let mut table = CsvTable::new(["option", "strike", "price", "error_bound"]);
    for &(t, k) in &s.contracts {
        let r = pricer.price(t, k)?;
        table.push(vec![Field::text(t.code()), Field::Num(k), Field::Fixed(r.price, 6), Field::Num(r.error_bound)])?;
    }
    emit_csv(&table, None)
}
