//! The welfare-optimal (second best) mechanism: recommendation regions,
//! obedience check, and the efficiency cost of the obedience floor.
//!
//! ```bash
//! cargo run --example welfare_mechanism
//! ```

use infomech::game::Player;
use infomech::optimal::distorted_type_mass;
use infomech::{
    expected_welfare, first_best_welfare_rule, is_obedient, welfare_rule, GameSpec,
    TypeDistribution,
};

fn main() -> infomech::Result<()> {
    let dist = TypeDistribution::exponential(1.0)?;
    for alpha in [2.0 / 3.0, 1.5] {
        let g = GameSpec::new(alpha, 0.5, dist.clone())?;
        let second_best = welfare_rule(&g);
        let first_best = first_best_welfare_rule(&g);
        println!("alpha = {alpha:.3}, v* = {:.4}", g.obedience_threshold());

        println!("  recommendations (R = matching action) at sample type profiles:");
        for (v1, v2) in [(0.2, 0.3), (2.0, 0.5), (1.0, 1.2)] {
            let pair = |rule: &infomech::MarginalRule| {
                let r1 = if rule.h(Player::One, v1, v2) > 0.5 { 'R' } else { 'W' };
                let r2 = if rule.h(Player::Two, v1, v2) > 0.5 { 'R' } else { 'W' };
                format!("{r1}{r2}")
            };
            println!(
                "    (v1={v1}, v2={v2}): second best {}, first best {}",
                pair(&second_best),
                pair(&first_best)
            );
        }

        let ob_second = is_obedient(&second_best, &g, 400)?;
        let ob_first = is_obedient(&first_best, &g, 400)?;
        println!(
            "  obedient? second best: {} (worst margin {:.1e}); first best: {} (worst margin {:.3})",
            ob_second.obedient, ob_second.worst_margin, ob_first.obedient, ob_first.worst_margin
        );

        let w_second = expected_welfare(&g, &second_best)?;
        let w_first = expected_welfare(&g, &first_best)?;
        println!("  welfare: second best {w_second:.6} <= first best {w_first:.6}");
        println!(
            "  type mass distorted by the obedience floor: {:.6} (= 2F(alpha v*))",
            distorted_type_mass(&g)
        );
        println!();
    }
    Ok(())
}
