//! The revenue-optimal mechanism: cutoffs in virtual-value space, interim
//! shares and payments, and the two-route revenue identity.
//!
//! ```bash
//! cargo run --example revenue_mechanism
//! ```

use infomech::game::Player;
use infomech::mechanism::RuleKind;
use infomech::payments::optimal_payment_schedule;
use infomech::{
    closed_form_interim_share, expected_revenue, revenue_optimal_payment, revenue_rule, GameSpec,
    TypeDistribution,
};

fn main() -> infomech::Result<()> {
    let dist = TypeDistribution::exponential(1.0)?;
    let g = GameSpec::new(0.5, 0.5, dist.clone())?;
    let rule = revenue_rule(&g)?;
    let vstar = g.obedience_threshold();
    let vtilde = dist.inverse_virtual_value(g.alpha() * dist.virtual_value(vstar)?)?;

    println!("alpha = {}, v* = {vstar:.4}, vt = {vtilde:.4}", g.alpha());
    println!("opponent cutoff, interim share, and payment by own type:");
    println!("{:>8} {:>10} {:>10} {:>10}", "type", "cutoff", "share", "payment");
    for q in [0.05, 0.3, 0.5, 0.55, 0.65, 0.8, 0.95] {
        let v = dist.quantile(q)?;
        let cutoff = rule.cutoff(Player::One, v).unwrap();
        let share = closed_form_interim_share(RuleKind::Revenue, &g, v)?;
        let pay = revenue_optimal_payment(&g, v)?;
        println!("{v:>8.4} {cutoff:>10.4} {share:>10.4} {pay:>10.4}");
    }

    // Types below v* pay nothing; types in (v*, vt] pay strictly positive
    // prices even though their own recommendation carries no net value:
    // they buy scarcity of the opponent's information.
    let schedule = optimal_payment_schedule(RuleKind::Revenue, &g)?;
    let breakdown = expected_revenue(&g, &rule, &schedule)?;
    println!();
    println!("expected revenue (direct payments)  = {:.9}", breakdown.direct);
    println!("expected revenue (virtual surplus)  = {:.9}", breakdown.virtual_surplus);
    Ok(())
}
