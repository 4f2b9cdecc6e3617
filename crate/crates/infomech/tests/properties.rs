//! Property-based invariants over randomized market configurations.

use infomech::dist::TypeDistribution;
use infomech::game::{ActionProfile, GameSpec, Player, State};
use infomech::mechanism::{
    closed_form_interim_share, joint_from_marginals, ActionProfileProbe, MarginalRule, RuleKind,
};
use infomech::optimal::variational_solve;

use proptest::prelude::*;

fn expo_spec(alpha: f64, prior: f64) -> GameSpec {
    GameSpec::new(alpha, prior, TypeDistribution::exponential(1.0).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn quantile_cdf_round_trip(rate in 0.2..3.0f64, q in 0.001..0.999f64, lo in -2.0..1.0f64, width in 0.1..4.0f64) {
        let e = TypeDistribution::exponential(rate).unwrap();
        prop_assert!((e.cdf(e.quantile(q).unwrap()) - q).abs() < 1e-10);
        let u = TypeDistribution::uniform(lo, lo + width).unwrap();
        prop_assert!((u.cdf(u.quantile(q).unwrap()) - q).abs() < 1e-12);
    }

    #[test]
    fn virtual_value_round_trip(rate in 0.2..3.0f64, q in 0.001..0.999f64) {
        let d = TypeDistribution::exponential(rate).unwrap();
        let v = d.quantile(q).unwrap();
        let phi = d.virtual_value(v).unwrap();
        prop_assert!((d.inverse_virtual_value(phi).unwrap() - v).abs() < 1e-9);
    }

    #[test]
    fn joint_probabilities_form_a_distribution(
        h1 in 0.0..=1.0f64,
        h2 in 0.0..=1.0f64,
        theta in any::<bool>(),
        q1 in 0.01..0.99f64,
        q2 in 0.01..0.99f64,
    ) {
        let d = TypeDistribution::exponential(1.0).unwrap();
        let rule = MarginalRule::custom(move |_, _| h1, move |_, _| h2, &d);
        let joint = joint_from_marginals(&rule);
        let v1 = d.quantile(q1).unwrap();
        let v2 = d.quantile(q2).unwrap();
        let probe = ActionProfileProbe::evaluate(&joint, &rule, v1, v2, theta);
        prop_assert!(probe.worst_defect <= 1e-12);
        // Every profile probability is a valid probability.
        for a in ActionProfile::all() {
            let p = joint.prob(a, State(theta), v1, v2);
            prop_assert!((0.0..=1.0).contains(&p));
        }
    }

    #[test]
    fn closed_form_shares_monotone_across_configs(
        alpha in 0.0..2.0f64,
        prior in 0.05..0.95f64,
        qa in 0.01..0.98f64,
        gap in 0.001..0.5f64,
    ) {
        let g = expo_spec(alpha, prior);
        let qb = (qa + gap).min(0.995);
        let va = g.dist().quantile(qa).unwrap();
        let vb = g.dist().quantile(qb).unwrap();
        for kind in [RuleKind::Welfare, RuleKind::Revenue] {
            let sa = closed_form_interim_share(kind, &g, va).unwrap();
            let sb = closed_form_interim_share(kind, &g, vb).unwrap();
            prop_assert!(sb >= sa - 1e-12, "{kind:?}: share({vb}) = {sb} < share({va}) = {sa}");
        }
    }

    #[test]
    fn matching_gain_is_always_one(
        alpha in 0.0..3.0f64,
        prior in 0.05..0.95f64,
        theta in any::<bool>(),
        opp in any::<bool>(),
    ) {
        let g = expo_spec(alpha, prior);
        let s = State(theta);
        for player in Player::BOTH {
            let right = match player {
                Player::One => ActionProfile::new(theta, opp),
                Player::Two => ActionProfile::new(opp, theta),
            };
            let wrong = match player {
                Player::One => ActionProfile::new(!theta, opp),
                Player::Two => ActionProfile::new(opp, !theta),
            };
            let gain = g.market_share(player, right, s) - g.market_share(player, wrong, s);
            prop_assert!((gain - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn outside_option_equals_cdf_at_threshold_minus_alpha(
        alpha in 0.0..2.0f64,
        prior in 0.05..0.95f64,
    ) {
        let g = expo_spec(alpha, prior);
        let k = g.dist().cdf(g.obedience_threshold()) - g.alpha();
        prop_assert!((g.outside_option_share() - k).abs() < 1e-10);
    }

    #[test]
    fn variational_threshold_is_feasible_and_covers_the_weight(
        c in 0.0..1.0f64,
        intercept in -2.0..2.0f64,
        slope in 0.01..4.0f64,
    ) {
        let u = TypeDistribution::uniform(0.0, 1.0).unwrap();
        let weight = move |t: f64| intercept - slope * t;
        let vstar = variational_solve(&u, weight, c).unwrap();
        // Feasibility of the step at the returned threshold.
        prop_assert!(u.cdf(vstar) >= c - 1e-9);
        // No positive-weight mass is left out above the threshold.
        prop_assert!(weight(vstar + 1e-9) <= 1e-9 || vstar >= u.support_hi() - 1e-12);
    }
}
