//! Certify the closed-form rules against the discretized-grid optimizer.
//!
//! The continuum problem is projected onto equal-probability grids of
//! increasing resolution; the exact grid optimum must approach the
//! closed-form rule's objective on the same grid.
//!
//! ```bash
//! cargo run --example grid_oracle
//! ```

use infomech::mechanism::RuleKind;
use infomech::{grid_optimize, revenue_rule, welfare_rule, DiscreteInstance, GameSpec,
    TypeDistribution, WeightSpec};

fn main() -> infomech::Result<()> {
    let dist = TypeDistribution::exponential(1.0)?;
    for (kind, alpha) in [
        (RuleKind::Welfare, 2.0 / 3.0),
        (RuleKind::Welfare, 1.5),
        (RuleKind::Revenue, 0.5),
        (RuleKind::Revenue, 2.0),
    ] {
        let g = GameSpec::new(alpha, 0.5, dist.clone())?;
        let (weights, rule) = match kind {
            RuleKind::Welfare => (WeightSpec::welfare(alpha), welfare_rule(&g)),
            RuleKind::Revenue => (WeightSpec::virtual_surplus(&g)?, revenue_rule(&g)?),
        };
        println!("{kind:?} objective, alpha = {alpha:.3}:");
        println!("{:>6} {:>16} {:>16} {:>12}", "grid", "grid optimum", "closed form", "rel gap");
        for m in [21, 51, 101] {
            let inst = DiscreteInstance::from_rule_cell_averaged(&g, m, &rule)?;
            let optimum = grid_optimize(&inst, &weights)?.objective(&weights);
            let closed = inst.objective(&weights);
            let gap = (optimum - closed).abs() / optimum.abs().max(closed.abs());
            println!("{m:>6} {optimum:>16.9} {closed:>16.9} {gap:>12.2e}");
        }
        println!();
    }
    Ok(())
}
