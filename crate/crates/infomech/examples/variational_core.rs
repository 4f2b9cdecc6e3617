//! The optimizer's core pieces, exposed directly: the variational threshold
//! solver and the generic constrained optimizer for custom weights.
//!
//! ```bash
//! cargo run --example variational_core
//! ```

use infomech::game::Player;
use infomech::{master_solve, variational_solve, GameSpec, TypeDistribution, WeightSpec};

fn main() -> infomech::Result<()> {
    // One-dimensional core: maximize ∫ h g f subject to ∫ h f >= c.
    let u = TypeDistribution::uniform(0.0, 1.0)?;
    for (c, label) in [(0.25, "weight sign change decides"), (0.8, "mass constraint binds")] {
        let v = variational_solve(&u, |t| 1.0 - 2.0 * t, c)?;
        println!("unit uniform, weight 1 - 2t, c = {c}: threshold = {v:.6} ({label})");
    }
    println!();

    // Two-player problem with custom non-increasing weights: the optimizer
    // returns opponent-type cutoffs floored at the obedience threshold v*.
    let g = GameSpec::new(0.8, 0.5, TypeDistribution::exponential(1.0)?)?;
    let weights = WeightSpec::from_weights(
        |v1: f64, v2: f64| v1.sqrt() - 0.8 * v2,
        |v1: f64, v2: f64| v2.sqrt() - 0.8 * v1,
        g.dist(),
    );
    let rule = master_solve(&weights, &g)?;
    println!(
        "custom weights sqrt(own) - alpha * opponent, v* = {:.4}:",
        g.obedience_threshold()
    );
    println!("{:>8} {:>10}", "type", "cutoff");
    for q in [0.1, 0.3, 0.5, 0.7, 0.9] {
        let v = g.dist().quantile(q)?;
        println!("{v:>8.4} {:>10.4}", rule.cutoff(Player::One, v));
    }
    Ok(())
}
