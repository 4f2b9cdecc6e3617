//! Realizing a full joint recommendation distribution from marginals.
//!
//! Any pair of marginal functions can be realized by drawing the two
//! recommendations independently; this prints the resulting four-profile
//! distribution and checks it reproduces the marginals.
//!
//! ```bash
//! cargo run --example joint_realization
//! ```

use infomech::game::{ActionProfile, Player, State};
use infomech::{joint_from_marginals, MarginalRule, TypeDistribution};

fn main() -> infomech::Result<()> {
    let dist = TypeDistribution::exponential(1.0)?;
    let rule = MarginalRule::custom(|_, _| 0.9, |_, _| 0.2, &dist);
    let joint = joint_from_marginals(&rule);

    let (v1, v2) = (1.0, 1.0);
    for theta in [false, true] {
        let s = State(theta);
        println!("state = {}:", theta as u8);
        let mut total = 0.0;
        for a in ActionProfile::all() {
            let p = joint.prob(a, s, v1, v2);
            total += p;
            println!("  P[a = ({}, {})] = {p:.4}", a.a1 as u8, a.a2 as u8);
        }
        let m1: f64 = ActionProfile::all()
            .iter()
            .filter(|a| a.a1 == theta)
            .map(|&a| joint.prob(a, s, v1, v2))
            .sum();
        let m2: f64 = ActionProfile::all()
            .iter()
            .filter(|a| a.a2 == theta)
            .map(|&a| joint.prob(a, s, v1, v2))
            .sum();
        println!("  total {total:.12}; marginals ({m1:.4}, {m2:.4}) vs h = ({}, {})",
            rule.h(Player::One, v1, v2),
            rule.h(Player::Two, v1, v2),
        );
    }
    Ok(())
}
