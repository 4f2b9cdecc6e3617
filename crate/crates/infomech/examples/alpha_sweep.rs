//! Comparative statics in the competition intensity: first-best and
//! second-best welfare fall as competition toughens, while the optimal
//! mechanism's revenue rises.
//!
//! ```bash
//! cargo run --example alpha_sweep
//! ```

use infomech::mechanism::RuleKind;
use infomech::payments::optimal_payment_schedule;
use infomech::{
    expected_revenue, expected_welfare, first_best_welfare_rule, revenue_rule, welfare_rule,
    GameSpec, TypeDistribution,
};

fn main() -> infomech::Result<()> {
    let dist = TypeDistribution::exponential(1.0)?;
    println!("{:>6} {:>12} {:>12} {:>12}", "alpha", "first best", "second best", "revenue");
    for k in 1..=15 {
        let alpha = 0.1 * k as f64;
        let g = GameSpec::new(alpha, 0.5, dist.clone())?;
        let first = expected_welfare(&g, &first_best_welfare_rule(&g))?;
        let second = expected_welfare(&g, &welfare_rule(&g))?;
        let schedule = optimal_payment_schedule(RuleKind::Revenue, &g)?;
        let revenue = expected_revenue(&g, &revenue_rule(&g)?, &schedule)?.value();
        println!("{alpha:>6.1} {first:>12.6} {second:>12.6} {revenue:>12.6}");
    }
    Ok(())
}
