//! Exhaustive incentive audit: every misreport paired with every
//! recommendation remapping, for the optimal mechanisms and for two
//! deliberately broken ones.
//!
//! ```bash
//! cargo run --example deviation_audit
//! ```

use infomech::mechanism::RuleKind;
use infomech::payments::PaymentSchedule;
use infomech::verify::search_double_deviations_closed_form;
use infomech::{revenue_rule, search_double_deviations, DiscreteInstance, GameSpec, MarginalRule,
    TypeDistribution};

fn main() -> infomech::Result<()> {
    let g = GameSpec::new(0.5, 0.5, TypeDistribution::exponential(1.0)?)?;

    for kind in [RuleKind::Welfare, RuleKind::Revenue] {
        let report = search_double_deviations_closed_form(&g, kind, 41)?;
        println!(
            "{kind:?} mechanism, 41-point audit: max regret {:.2e} (incentive compatible: {})",
            report.max_regret,
            report.max_regret <= 1e-8
        );
    }
    println!();

    // Fault 1: sell the revenue mechanism's information for free. Buyers
    // now misreport to grab better allocations; the audit must flag it.
    let rule = revenue_rule(&g)?;
    let inst = DiscreteInstance::from_rule_nodes(&g, 41, &rule)?;
    let report = search_double_deviations(&inst, &PaymentSchedule::zero());
    println!(
        "zeroed payments: max regret {:.4} via true type {:.3} reporting {:.3} ({:?})",
        report.max_regret, report.true_type, report.reported_type, report.map
    );

    // Fault 2: always recommend the wrong action. Swapping the advice is
    // then the profitable remapping.
    let wrong = MarginalRule::custom(|_, _| 0.0, |_, _| 0.0, g.dist());
    let inst = DiscreteInstance::from_rule_nodes(&g, 41, &wrong)?;
    let report = search_double_deviations(&inst, &PaymentSchedule::zero());
    println!(
        "always-wrong rule: max regret {:.4} via {:?} at type {:.3}",
        report.max_regret, report.map, report.true_type
    );
    Ok(())
}
