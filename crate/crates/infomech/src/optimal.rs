//! The solver stack: variational core, generic master optimizer, and the
//! four named rules (first-best / constrained, welfare / revenue).
//!
//! The master optimizer maximizes any objective of the form
//! `E[w1(V) h1(V) + w2(V) h2(V)]` subject to obedience, for weights that are
//! non-increasing in the opponent's type. Its solution is a threshold rule:
//! recommend the matching action to a player exactly when the opponent's
//! type is below `max{v*, cutoff(own type)}`, where the cutoff is the
//! largest opponent type at which the weight is still non-negative.

use std::sync::Arc;

use crate::dist::TypeDistribution;
use crate::error::{Error, Result};
use crate::game::{GameSpec, Player};
use crate::mechanism::{
    saturating_div, share_breakpoints, MarginalRule, Provenance, RuleKind, ThresholdRule,
};
use crate::quad;

type Surface = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
type CutoffMap = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Objective weights for the master optimizer, together with the
/// sign-change cutoffs `sup{t : w_i(own, t) >= 0}` (−∞ when empty).
#[derive(Clone)]
pub struct WeightSpec {
    w1: Surface,
    w2: Surface,
    cutoff_v2_star: CutoffMap,
    cutoff_v1_star: CutoffMap,
}

impl WeightSpec {
    pub fn new<W1, W2, C1, C2>(w1: W1, w2: W2, cutoff_v2_star: C1, cutoff_v1_star: C2) -> Self
    where
        W1: Fn(f64, f64) -> f64 + Send + Sync + 'static,
        W2: Fn(f64, f64) -> f64 + Send + Sync + 'static,
        C1: Fn(f64) -> f64 + Send + Sync + 'static,
        C2: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        WeightSpec {
            w1: Arc::new(w1),
            w2: Arc::new(w2),
            cutoff_v2_star: Arc::new(cutoff_v2_star),
            cutoff_v1_star: Arc::new(cutoff_v1_star),
        }
    }

    /// Derive the sign-change cutoffs from the raw weights by scanning and
    /// bisecting over the (truncated) support.
    pub fn from_weights<W1, W2>(w1: W1, w2: W2, dist: &TypeDistribution) -> Self
    where
        W1: Fn(f64, f64) -> f64 + Send + Sync + 'static,
        W2: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        let w1 = Arc::new(w1) as Surface;
        let w2 = Arc::new(w2) as Surface;
        let (lo, hi) = (dist.support_lo(), dist.upper_bound());
        let c1 = {
            let w1 = w1.clone();
            move |v1: f64| last_non_negative(&|t| w1(v1, t), lo, hi)
        };
        let c2 = {
            let w2 = w2.clone();
            move |v2: f64| last_non_negative(&|t| w2(t, v2), lo, hi)
        };
        WeightSpec {
            w1,
            w2,
            cutoff_v2_star: Arc::new(c1),
            cutoff_v1_star: Arc::new(c2),
        }
    }

    /// Social-welfare weights `w_i = v_i - alpha * v_j`.
    pub fn welfare(alpha: f64) -> Self {
        WeightSpec::new(
            move |v1: f64, v2: f64| v1 - alpha * v2,
            move |v1: f64, v2: f64| v2 - alpha * v1,
            move |v1: f64| saturating_div(v1, alpha),
            move |v2: f64| saturating_div(v2, alpha),
        )
    }

    /// Virtual-surplus weights `w_i = φ(v_i) - alpha * φ(v_j)`; requires a
    /// regular distribution.
    pub fn virtual_surplus(g: &GameSpec) -> Result<Self> {
        let d = g.dist().clone();
        if !d.is_regular() {
            return Err(Error::NotRegular { at: f64::NAN });
        }
        let alpha = g.alpha();
        let phi = move |d: &TypeDistribution, v: f64| {
            d.virtual_value(v).expect("support interior per construction")
        };
        let (d1, d2, d3, d4) = (d.clone(), d.clone(), d.clone(), d);
        Ok(WeightSpec::new(
            move |v1: f64, v2: f64| phi(&d1, v1) - alpha * phi(&d1, v2),
            move |v1: f64, v2: f64| phi(&d2, v2) - alpha * phi(&d2, v1),
            move |v1: f64| inverse_virtual_saturating(&d3, saturating_div(phi(&d3, v1), alpha)),
            move |v2: f64| inverse_virtual_saturating(&d4, saturating_div(phi(&d4, v2), alpha)),
        ))
    }

    /// Weight on `player`'s correct-recommendation probability at a profile.
    pub fn weight(&self, player: Player, v1: f64, v2: f64) -> f64 {
        match player {
            Player::One => (self.w1)(v1, v2),
            Player::Two => (self.w2)(v1, v2),
        }
    }

    /// `sup{t : w_i(own, t) >= 0}` — the unconstrained opponent cutoff.
    pub fn opponent_cutoff(&self, player: Player, own_type: f64) -> f64 {
        match player {
            Player::One => (self.cutoff_v2_star)(own_type),
            Player::Two => (self.cutoff_v1_star)(own_type),
        }
    }

    /// Grid check of the master hypothesis: each weight non-increasing in
    /// the opponent's coordinate.
    pub(crate) fn validate(&self, dist: &TypeDistribution) -> Result<()> {
        let (lo, hi) = (dist.support_lo(), dist.upper_bound());
        let slices = 12;
        for s in 0..slices {
            let own = lo + (hi - lo) * (s as f64 + 0.5) / slices as f64;
            check_non_increasing("w1 in the opponent type", |t| (self.w1)(own, t), lo, hi)?;
            check_non_increasing("w2 in the opponent type", |t| (self.w2)(t, own), lo, hi)?;
        }
        Ok(())
    }
}

fn check_non_increasing(
    name: &'static str,
    f: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
) -> Result<()> {
    let steps = 64;
    let mut prev = f(lo);
    for k in 1..=steps {
        let t = lo + (hi - lo) * k as f64 / steps as f64;
        let cur = f(t);
        if cur - prev > 1e-9 {
            return Err(Error::NotMonotone {
                what: name,
                at: t,
                violation: cur - prev,
            });
        }
        prev = cur;
    }
    Ok(())
}

fn inverse_virtual_saturating(d: &TypeDistribution, target: f64) -> f64 {
    if target == f64::INFINITY {
        d.upper_bound()
    } else if target == f64::NEG_INFINITY {
        f64::NEG_INFINITY
    } else {
        d.inverse_virtual_value(target)
            .expect("regularity checked at construction")
    }
}

/// `sup{t in [lo, hi] : g(t) >= 0}` for non-increasing `g`, by bisection;
/// −∞ when `g < 0` everywhere, `hi` when `g >= 0` everywhere.
fn last_non_negative(g: &dyn Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    if g(lo) < 0.0 {
        return f64::NEG_INFINITY;
    }
    if g(hi) >= 0.0 {
        return hi;
    }
    let (mut a, mut b) = (lo, hi);
    for _ in 0..80 {
        let m = 0.5 * (a + b);
        if g(m) >= 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Maximize `∫ h g f` over `h : R -> [0, 1]` subject to `∫ h f >= c`, for a
/// non-increasing weight `g`. The maximizer is the downward step at
/// `max{F⁻¹(c), t_g}` with `t_g = sup{t : g(t) >= 0}`; this returns that
/// threshold.
pub fn variational_solve<G>(dist: &TypeDistribution, weight: G, c: f64) -> Result<f64>
where
    G: Fn(f64) -> f64,
{
    if !(0.0..=1.0).contains(&c) {
        return Err(Error::ProbabilityOutOfRange(c));
    }
    let (lo, hi) = (dist.support_lo(), dist.upper_bound());
    // Assert monotonicity of the weight on a grid.
    let steps = 400;
    let mut prev = weight(lo);
    for k in 1..=steps {
        let t = lo + (hi - lo) * k as f64 / steps as f64;
        let cur = weight(t);
        if cur - prev > 1e-9 {
            return Err(Error::NotMonotone {
                what: "variational weight",
                at: t,
                violation: cur - prev,
            });
        }
        prev = cur;
    }
    let t_g = last_non_negative(&|t| weight(t), lo, hi);
    Ok(dist.quantile(c)?.max(t_g))
}

/// Solve the obedience-constrained problem for the given weights:
/// `cutoff_i(v) = max{v*, sup{t : w_i(v, t) >= 0}}`, clamped at the
/// truncated support top.
pub fn master_solve(w: &WeightSpec, g: &GameSpec) -> Result<ThresholdRule> {
    w.validate(g.dist())?;
    let vstar = g.obedience_threshold();
    let hi = g.dist().upper_bound();
    let (c1, c2) = (w.cutoff_v2_star.clone(), w.cutoff_v1_star.clone());
    Ok(ThresholdRule::new(
        move |v1| c1(v1).max(vstar).min(hi),
        move |v2| c2(v2).max(vstar).min(hi),
        g.dist(),
    ))
}

/// [`master_solve`] packaged as a marginal rule, with interim breakpoints
/// located where each raw cutoff crosses the obedience floor.
pub fn master_rule(w: &WeightSpec, g: &GameSpec) -> Result<MarginalRule> {
    let threshold = master_solve(w, g)?;
    let vstar = g.obedience_threshold();
    let (lo, hi) = (g.dist().support_lo(), g.dist().upper_bound());
    let mut breaks = vec![vstar];
    for player in Player::BOTH {
        breaks.extend(quad::sign_changes(
            &|v| w.opponent_cutoff(player, v) - vstar,
            lo,
            hi,
            128,
        ));
    }
    Ok(threshold.into_marginal_rule(Provenance::Custom, breaks))
}

/// The welfare-optimal (second best) rule:
/// `h_i(V) = 1{V_j <= max{v*, V_i / alpha}}`. For `alpha = 0` the cutoff
/// saturates at the support top: everyone is recommended the matching
/// action.
pub fn welfare_rule(g: &GameSpec) -> MarginalRule {
    let vstar = g.obedience_threshold();
    let alpha = g.alpha();
    let hi = g.dist().upper_bound();
    let cutoff = move |v: f64| saturating_div(v, alpha).max(vstar).min(hi);
    let breaks = share_breakpoints(RuleKind::Welfare, g).expect("welfare breakpoints are total");
    ThresholdRule::symmetric(cutoff, g.dist()).into_marginal_rule(Provenance::WelfareOptimal, breaks)
}

/// The revenue-optimal rule:
/// `h_i(V) = 1{V_j <= max{v*, φ⁻¹(φ(V_i) / alpha)}}`. Requires a regular
/// distribution.
pub fn revenue_rule(g: &GameSpec) -> Result<MarginalRule> {
    let d = g.dist().clone();
    if !d.is_regular() {
        return Err(Error::NotRegular { at: f64::NAN });
    }
    let vstar = g.obedience_threshold();
    let alpha = g.alpha();
    let hi = d.upper_bound();
    let breaks = share_breakpoints(RuleKind::Revenue, g)?;
    let cutoff = move |v: f64| {
        let target = saturating_div(d.virtual_value(v).expect("support interior"), alpha);
        inverse_virtual_saturating(&d, target).max(vstar).min(hi)
    };
    Ok(ThresholdRule::symmetric(cutoff, g.dist())
        .into_marginal_rule(Provenance::RevenueOptimal, breaks))
}

/// The unconstrained welfare-maximizing rule `h_i(V) = 1{V_j <= V_i / alpha}`:
/// a player gets the matching recommendation iff her value exceeds the
/// externality she imposes.
pub fn first_best_welfare_rule(g: &GameSpec) -> MarginalRule {
    let alpha = g.alpha();
    let (lo, hi) = (g.dist().support_lo(), g.dist().upper_bound());
    let cutoff = move |v: f64| saturating_div(v, alpha).min(hi);
    let mut breaks = vec![alpha * lo, alpha * hi];
    if alpha > 0.0 {
        breaks.push(lo / alpha);
        breaks.push(hi / alpha);
    }
    breaks.retain(|b| b.is_finite() && *b > lo && *b < hi);
    ThresholdRule::symmetric(cutoff, g.dist()).into_marginal_rule(Provenance::FirstBestWelfare, breaks)
}

/// The unconstrained virtual-surplus rule
/// `h_i(V) = 1{φ(V_j) <= φ(V_i) / alpha}`. Requires a regular distribution.
pub fn first_best_revenue_rule(g: &GameSpec) -> Result<MarginalRule> {
    let d = g.dist().clone();
    if !d.is_regular() {
        return Err(Error::NotRegular { at: f64::NAN });
    }
    let alpha = g.alpha();
    let (lo, hi) = (d.support_lo(), d.upper_bound());
    let mut breaks = vec![d.inverse_virtual_value(0.0)?];
    if alpha > 0.0 {
        for target in [
            alpha * d.virtual_value(lo)?,
            alpha * d.virtual_value(hi)?,
            d.virtual_value(lo)? / alpha,
            d.virtual_value(hi)? / alpha,
        ] {
            breaks.push(d.inverse_virtual_value(target)?);
        }
    }
    breaks.retain(|b| b.is_finite() && *b > lo && *b < hi);
    let dc = d.clone();
    let cutoff = move |v: f64| {
        let target = saturating_div(dc.virtual_value(v).expect("support interior"), alpha);
        inverse_virtual_saturating(&dc, target).min(hi)
    };
    Ok(ThresholdRule::symmetric(cutoff, g.dist())
        .into_marginal_rule(Provenance::FirstBestRevenue, breaks))
}

/// Mass of own types whose recommendation region is distorted away from the
/// first best by the obedience floor, summed over both players. Equals
/// `2 F(alpha * v*)` in closed form; computed here by integrating the
/// indicator that the constrained and unconstrained cutoffs differ.
pub fn distorted_type_mass(g: &GameSpec) -> f64 {
    let d = g.dist();
    let vstar = g.obedience_threshold();
    let alpha = g.alpha();
    let (lo, hi) = (d.support_lo(), d.upper_bound());
    // The cutoffs differ exactly where the raw map sits below the floor.
    let raw = |v: f64| saturating_div(v, alpha);
    let boundary = quad::sign_changes(&|v| raw(v) - vstar, lo, hi, 128);
    let mass = quad::integrate(
        &|v| if raw(v) < vstar { d.pdf(v) } else { 0.0 },
        lo,
        hi,
        &boundary,
    );
    2.0 * mass
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::Player;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn expo_spec(alpha: f64, prior: f64) -> GameSpec {
        GameSpec::new(alpha, prior, TypeDistribution::exponential(1.0).unwrap()).unwrap()
    }

    #[test]
    fn variational_reference_points() {
        let u = TypeDistribution::uniform(0.0, 1.0).unwrap();
        let v = variational_solve(&u, |t| 1.0 - 2.0 * t, 0.25).unwrap();
        assert!((v - 0.5).abs() < 1e-10);
        let v = variational_solve(&u, |t| 1.0 - 2.0 * t, 0.8).unwrap();
        assert!((v - 0.8).abs() < 1e-12);
        let v = variational_solve(&u, |_| 1.0, 0.3).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
        assert!(variational_solve(&u, |t| t, 0.5).is_err());
        assert!(variational_solve(&u, |t| -t, 1.5).is_err());
    }

    /// Enumeration oracle over downward step functions: scan all thresholds
    /// on a fine grid, keep the best feasible objective.
    fn step_oracle(dist: &TypeDistribution, weight: &dyn Fn(f64) -> f64, c: f64) -> (f64, f64) {
        let (lo, hi) = (dist.support_lo(), dist.upper_bound());
        let n = 20_000;
        let dx = (hi - lo) / n as f64;
        let mut best = (lo, f64::NEG_INFINITY);
        let mut objective = 0.0;
        for k in 0..=n {
            let t = lo + k as f64 * dx;
            if k > 0 {
                let mid = t - 0.5 * dx;
                objective += weight(mid) * dist.pdf(mid) * dx;
            }
            if dist.cdf(t) >= c - 1e-9 && objective > best.1 {
                best = (t, objective);
            }
        }
        best
    }

    #[test]
    fn variational_matches_step_oracle_on_random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let u = TypeDistribution::uniform(0.0, 1.0).unwrap();
        for _ in 0..20 {
            let a: f64 = rng.gen_range(-1.0..1.0);
            let b: f64 = rng.gen_range(0.0..3.0);
            let q: f64 = rng.gen_range(0.0..2.0);
            let c: f64 = rng.gen_range(0.0..1.0);
            let weight = move |t: f64| a - b * t - q * t * t;
            let vstar = variational_solve(&u, weight, c).unwrap();
            let (_, oracle_obj) = step_oracle(&u, &weight, c);
            // Evaluate our threshold on the oracle's discretization.
            let n = 20_000;
            let mut ours = 0.0;
            for k in 0..n {
                let mid = (k as f64 + 0.5) / n as f64;
                if mid <= vstar {
                    ours += weight(mid) * u.pdf(mid) / n as f64;
                }
            }
            assert!(
                ours >= oracle_obj - 1e-6 * oracle_obj.abs().max(1.0),
                "ours {ours} vs oracle {oracle_obj} (a={a}, b={b}, q={q}, c={c})"
            );
        }
    }

    #[test]
    fn master_cutoffs_match_closed_forms() {
        let g = expo_spec(2.0 / 3.0, 0.5);
        let vstar = g.obedience_threshold();
        let w = WeightSpec::from_weights(
            move |v1: f64, v2: f64| v1 - 2.0 / 3.0 * v2,
            move |v1: f64, v2: f64| v2 - 2.0 / 3.0 * v1,
            g.dist(),
        );
        let rule = master_solve(&w, &g).unwrap();
        for v in [0.1_f64, 0.4, 1.0, 2.5] {
            let expected = (v / (2.0 / 3.0)).max(vstar).min(g.dist().upper_bound());
            assert!((rule.cutoff(Player::One, v) - expected).abs() < 1e-8);
        }

        let g = expo_spec(0.5, 0.5);
        let w = WeightSpec::virtual_surplus(&g).unwrap();
        let rule = master_solve(&w, &g).unwrap();
        for v in [0.2_f64, 0.9, 1.4, 3.0] {
            let expected = (2.0 * v - 1.0).max(g.obedience_threshold()).min(g.dist().upper_bound());
            let expected = expected.max(0.0); // φ⁻¹ saturates at the support bottom
            assert!(
                (rule.cutoff(Player::Two, v) - expected).abs() < 1e-8,
                "at {v}: {} vs {expected}",
                rule.cutoff(Player::Two, v)
            );
        }

        // Never-profitable weights leave only the obedience floor.
        let w = WeightSpec::from_weights(|_, _| -1.0, |_, _| -1.0, g.dist());
        let rule = master_solve(&w, &g).unwrap();
        for v in [0.0, 1.0, 5.0] {
            assert!((rule.cutoff(Player::One, v) - g.obedience_threshold()).abs() < 1e-12);
        }
    }

    #[test]
    fn master_reproduces_named_rules_pointwise() {
        let g = expo_spec(2.0 / 3.0, 0.5);
        let generic = master_rule(
            &WeightSpec::from_weights(
                move |v1: f64, v2: f64| v1 - 2.0 / 3.0 * v2,
                move |v1: f64, v2: f64| v2 - 2.0 / 3.0 * v1,
                g.dist(),
            ),
            &g,
        )
        .unwrap();
        let named = welfare_rule(&g);
        let mut disagreements = 0;
        for i in 0..200 {
            for j in 0..200 {
                let v1 = g.dist().quantile((i as f64 + 0.5) / 200.0).unwrap();
                let v2 = g.dist().quantile((j as f64 + 0.5) / 200.0).unwrap();
                for p in Player::BOTH {
                    if (generic.h(p, v1, v2) - named.h(p, v1, v2)).abs() > 0.5 {
                        disagreements += 1;
                    }
                }
            }
        }
        assert_eq!(disagreements, 0);

        let g = expo_spec(0.5, 0.5);
        let generic = master_rule(&WeightSpec::virtual_surplus(&g).unwrap(), &g).unwrap();
        let named = revenue_rule(&g).unwrap();
        let mut disagreements = 0;
        for i in 0..200 {
            for j in 0..200 {
                let v1 = g.dist().quantile((i as f64 + 0.5) / 200.0).unwrap();
                let v2 = g.dist().quantile((j as f64 + 0.5) / 200.0).unwrap();
                for p in Player::BOTH {
                    if (generic.h(p, v1, v2) - named.h(p, v1, v2)).abs() > 0.5 {
                        disagreements += 1;
                    }
                }
            }
        }
        assert_eq!(disagreements, 0);
    }

    #[test]
    fn welfare_rule_region_examples() {
        let g = expo_spec(2.0 / 3.0, 0.5);
        let rule = welfare_rule(&g);
        assert_eq!(rule.provenance(), crate::mechanism::Provenance::WelfareOptimal);
        // High type one, low type two: exclusive correct recommendation.
        assert_eq!(rule.h(Player::One, 2.0, 0.5), 1.0);
        assert_eq!(rule.h(Player::Two, 2.0, 0.5), 0.0);
        // Both below v*: both matched.
        assert_eq!(rule.h(Player::One, 0.2, 0.3), 1.0);
        assert_eq!(rule.h(Player::Two, 0.2, 0.3), 1.0);
        // Prisoners'-dilemma coordination region at alpha > 1.
        let g = expo_spec(1.5, 0.5);
        let rule = welfare_rule(&g);
        assert_eq!(rule.h(Player::One, 1.0, 1.2), 0.0);
        assert_eq!(rule.h(Player::Two, 1.0, 1.2), 0.0);
    }

    #[test]
    fn revenue_rule_region_examples() {
        let g = expo_spec(0.5, 0.5);
        let rule = revenue_rule(&g).unwrap();
        let vstar = g.obedience_threshold();
        // Cutoff for type 1.5 is max{v*, 2*1.5 - 1} = 2.
        assert_eq!(rule.cutoff(Player::One, 1.5).unwrap(), 2.0);
        assert_eq!(rule.h(Player::One, 1.5, 1.99), 1.0);
        assert_eq!(rule.h(Player::One, 1.5, 2.01), 0.0);
        // Low type: only the obedience floor.
        assert!((rule.cutoff(Player::One, 0.3).unwrap() - vstar).abs() < 1e-12);
        // Obedience binds exactly up to ṽ = φ⁻¹(α φ(v*)).
        let vtilde = 1.0 + 0.5 * (vstar - 1.0);
        assert!((rule.cutoff(Player::One, vtilde).unwrap() - vstar).abs() < 1e-9);
        assert!(rule.cutoff(Player::One, vtilde + 1e-6).unwrap() > vstar);
    }

    #[test]
    fn revenue_rule_both_wrong_pocket() {
        // At alpha = 1/2 the rule distorts both players on a quadrilateral
        // with corners (v*, v*), (vt, v*), (v0, v0), (v*, vt): above both
        // obedience floors, between the scaled virtual-value lines.
        let g = expo_spec(0.5, 0.5);
        let rule = revenue_rule(&g).unwrap();
        let both_wrong = |v1: f64, v2: f64| {
            rule.h(Player::One, v1, v2) == 0.0 && rule.h(Player::Two, v1, v2) == 0.0
        };
        assert!(both_wrong(0.8, 0.72));
        // Below the obedience floor of player one's recommendation.
        assert!(!both_wrong(0.8, 0.68));
        // Above the line where player two starts receiving the match.
        assert!(!both_wrong(0.9, 0.96));
        // Beyond the zero-virtual-value corner both are matched.
        assert!(!both_wrong(1.05, 1.04));
        // Edge checks: the pocket's slanted sides are 2*v1 - 1 and (v1+1)/2.
        for v1 in [0.85_f64, 0.9, 0.95] {
            let lowest = (2.0 * v1 - 1.0).max(g.obedience_threshold());
            let highest = 0.5 * (v1 + 1.0);
            assert!(both_wrong(v1, lowest + 1e-6));
            assert!(both_wrong(v1, highest - 1e-6));
            assert!(!both_wrong(v1, lowest - 1e-6));
            assert!(!both_wrong(v1, highest + 1e-6));
        }
    }

    #[test]
    fn first_best_welfare_region_examples() {
        let g = expo_spec(2.0 / 3.0, 0.5);
        let rule = first_best_welfare_rule(&g);
        assert_eq!(rule.h(Player::One, 2.0, 0.5), 1.0);
        assert_eq!(rule.h(Player::Two, 2.0, 0.5), 0.0);
        let g = expo_spec(1.5, 0.5);
        let rule = first_best_welfare_rule(&g);
        assert_eq!(rule.h(Player::One, 1.0, 1.1), 0.0);
        assert_eq!(rule.h(Player::Two, 1.0, 1.1), 0.0);
        // Ties at alpha = 1 resolve to both matched.
        let g = expo_spec(1.0, 0.5);
        let rule = first_best_welfare_rule(&g);
        assert_eq!(rule.h(Player::One, 0.8, 0.8), 1.0);
        assert_eq!(rule.h(Player::Two, 0.8, 0.8), 1.0);
    }

    #[test]
    fn first_best_revenue_region_examples() {
        let g = expo_spec(0.5, 0.5);
        let rule = first_best_revenue_rule(&g).unwrap();
        // Both virtual values negative and similar: both wrong.
        assert_eq!(rule.h(Player::One, 0.5, 0.4), 0.0);
        assert_eq!(rule.h(Player::Two, 0.5, 0.4), 0.0);
        // One positive, the gap decides.
        assert_eq!(rule.h(Player::One, 1.5, 1.2), 1.0);
        assert_eq!(rule.h(Player::Two, 1.5, 1.2), 0.0);
        // Strong competition: both defect to the wrong action.
        let g = expo_spec(2.0, 0.5);
        let rule = first_best_revenue_rule(&g).unwrap();
        assert_eq!(rule.h(Player::One, 1.5, 1.4), 0.0);
        assert_eq!(rule.h(Player::Two, 1.5, 1.4), 0.0);
    }

    #[test]
    fn named_rule_cutoffs_floor_at_vstar_and_are_non_decreasing() {
        for (alpha, prior) in [(0.5, 0.5), (1.5, 0.5), (1.0, 0.75)] {
            let g = expo_spec(alpha, prior);
            let vstar = g.obedience_threshold();
            for rule in [welfare_rule(&g), revenue_rule(&g).unwrap()] {
                let mut prev = f64::NEG_INFINITY;
                for k in 0..500 {
                    let v = g.dist().quantile((k as f64 + 0.5) / 500.0).unwrap();
                    let c = rule.cutoff(Player::One, v).unwrap();
                    assert!(c >= vstar - 1e-12, "cutoff {c} below v* at {v}");
                    assert!(c >= prev - 1e-12, "cutoff decreased at {v}");
                    prev = c;
                }
            }
        }
    }

    #[test]
    fn distorted_mass_matches_closed_form_and_grows() {
        let mut prev = -1.0;
        for k in 1..=6 {
            let alpha = 0.25 * k as f64;
            let g = expo_spec(alpha, 0.5);
            let mass = distorted_type_mass(&g);
            let closed = 2.0 * g.dist().cdf(alpha * g.obedience_threshold());
            assert!((mass - closed).abs() < 1e-9, "alpha {alpha}: {mass} vs {closed}");
            assert!(mass >= prev - 1e-12);
            prev = mass;
        }
    }

    #[test]
    fn random_monotone_weights_solve_cleanly() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let g = expo_spec(0.8, 0.6);
        for _ in 0..5 {
            let a: f64 = rng.gen_range(0.2..2.0);
            let b: f64 = rng.gen_range(0.2..2.0);
            let w = WeightSpec::from_weights(
                move |v1: f64, v2: f64| a * v1 - b * v2,
                move |v1: f64, v2: f64| a * v2 - b * v1,
                g.dist(),
            );
            let rule = master_solve(&w, &g).unwrap();
            for v in [0.1, 1.0, 3.0] {
                assert!(rule.cutoff(Player::One, v) >= g.obedience_threshold() - 1e-12);
            }
        }
    }
}
