use multistep_barrier::domain::{default_icicles, BarrierSpec, Direction, MarketParams, OptionType, TimeGrid};
use multistep_barrier::pricing::Pricer;
use multistep_barrier::reflection::{pa_d, pa_u, Diffusion, EngineOptions};
use multistep_barrier::report::format_sig;
use proptest::prelude::*;

fn levels_strategy(max_steps: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.02f64..0.4, 1..=max_steps)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn knock_in_plus_knock_out_is_vanilla(
        levels in levels_strategy(4),
        up in any::<bool>(),
        strike in 60.0f64..140.0,
        rate in 0.0f64..0.08,
        vol in 0.1f64..0.5,
        maturity in 0.1f64..2.0,
    ) {
        let direction = if up { Direction::Up } else { Direction::Down };
        let prices: Vec<f64> = levels.iter().map(|d| if up { 100.0 * (1.0 + d) } else { 100.0 * (1.0 - d) }).collect();
        let grid = TimeGrid::uniform(prices.len(), maturity).unwrap();
        let pricer = Pricer::new(MarketParams::new(100.0, rate, vol), grid, BarrierSpec::full(direction, &prices), EngineOptions::default()).unwrap();
        let of = |t| pricer.price(t, strike).unwrap();
        let pairs: [(OptionType, OptionType); 2] = if up {
            [(OptionType::UpOutCall, OptionType::UpInCall), (OptionType::UpOutPut, OptionType::UpInPut)]
        } else {
            [(OptionType::DownOutCall, OptionType::DownInCall), (OptionType::DownOutPut, OptionType::DownInPut)]
        };
        for (out, inn) in pairs {
            let (o, i) = (of(out), of(inn));
            prop_assert!((o.price + i.price - o.vanilla).abs() < 1e-6 * o.vanilla.max(1.0));
            prop_assert!(o.price >= -1e-7 && o.price <= o.vanilla + 1e-7);
        }
    }

    #[test]
    fn mirrored_survival_is_identical(levels in levels_strategy(5), drift in -0.2f64..0.2, vol in 0.1f64..0.5) {
        let grid = TimeGrid::uniform(levels.len(), 1.0).unwrap();
        let up: Vec<Option<f64>> = levels.iter().map(|&m| Some(m)).collect();
        let down: Vec<Option<f64>> = levels.iter().map(|&m| Some(-m)).collect();
        let opts = EngineOptions::default();
        let a = pa_u(&Diffusion::new(drift, vol, &grid), &default_icicles(Direction::Up, &up), &up, &opts).unwrap();
        let b = pa_d(&Diffusion::new(-drift, vol, &grid), &default_icicles(Direction::Down, &down), &down, &opts).unwrap();
        prop_assert_eq!(a.probability.to_bits(), b.probability.to_bits());
    }

    #[test]
    fn raising_a_level_never_lowers_survival(levels in levels_strategy(4), bump in 0.0f64..0.2, pick in 0usize..4) {
        let grid = TimeGrid::uniform(levels.len(), 0.75).unwrap();
        let process = Diffusion::new(0.02, 0.25, &grid);
        let opts = EngineOptions::default();
        let base: Vec<Option<f64>> = levels.iter().map(|&m| Some(m)).collect();
        let mut raised = base.clone();
        let j = pick % levels.len();
        raised[j] = raised[j].map(|m| m + bump);
        let p = |l: &[Option<f64>]| pa_u(&process, &default_icicles(Direction::Up, l), l, &opts).unwrap();
        let (lo, hi) = (p(&base), p(&raised));
        prop_assert!(hi.probability >= lo.probability - lo.error_bound - hi.error_bound - 1e-12);
    }

    #[test]
    fn pruned_sum_stays_within_its_bound(levels in levels_strategy(6), eps in 1e-9f64..1e-5) {
        let grid = TimeGrid::uniform(levels.len(), 1.0).unwrap();
        let process = Diffusion::new(0.0, 0.3, &grid);
        let up: Vec<Option<f64>> = levels.iter().map(|&m| Some(m)).collect();
        let limits = default_icicles(Direction::Up, &up);
        let full = pa_u(&process, &limits, &up, &EngineOptions::default()).unwrap();
        let pruned = pa_u(&process, &limits, &up, &EngineOptions { prune_eps: eps, ..EngineOptions::default() }).unwrap();
        prop_assert!(pruned.subsets_evaluated + pruned.subsets_pruned == full.subsets_evaluated);
        prop_assert!((pruned.raw_sum - full.raw_sum).abs() <= pruned.error_bound + full.error_bound);
    }

    #[test]
    fn six_significant_digits_round_trip(mantissa in 1.0f64..10.0, exponent in -12i32..12) {
        let v = mantissa * 10f64.powi(exponent);
        let parsed: f64 = format_sig(v, 6).parse().unwrap();
        prop_assert!((parsed - v).abs() <= 5e-6 * v.abs());
        let neg: f64 = format_sig(-v, 6).parse().unwrap();
        prop_assert_eq!(neg, -parsed);
    }

    #[test]
    fn option_codes_round_trip(i in 0usize..8) {
        let t = OptionType::ALL[i];
        prop_assert_eq!(t.code().parse::<OptionType>().unwrap(), t);
    }
}
