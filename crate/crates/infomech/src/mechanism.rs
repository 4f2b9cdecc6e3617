//! Recommendation rules and their interim analysis.
//!
//! A rule is represented canonically by its marginals `h_i(v1, v2)`: the
//! probability that player `i` is recommended the state-matching action at
//! a given type profile. This module realizes a full joint recommendation
//! distribution from marginals, checks obedience, and computes interim
//! market shares both by quadrature and from the closed forms of the two
//! optimal rules.

use std::sync::Arc;

use crate::dist::TypeDistribution;
use crate::error::{Error, Result};
use crate::game::{ActionProfile, GameSpec, Player, State};
use crate::quad;

type Surface = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
type Cutoff = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Which construction produced a rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    WelfareOptimal,
    RevenueOptimal,
    FirstBestWelfare,
    FirstBestRevenue,
    Custom,
}

/// The two closed-form optimal rule families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RuleKind {
    Welfare,
    Revenue,
}

/// A recommendation rule given by per-player marginals
/// `h_i(v1, v2) = P[A_i = θ | V = (v1, v2)]`.
#[derive(Clone)]
pub struct MarginalRule {
    h1: Surface,
    h2: Surface,
    /// Threshold structure when the rule is of the form
    /// `h_i(V) = 1{V_j <= cutoff_i(V_i)}`.
    cutoffs: Option<(Cutoff, Cutoff)>,
    support: (f64, f64),
    /// Own-type abscissae where interim curves jump or kink.
    type_breaks: Vec<f64>,
    provenance: Provenance,
}

impl MarginalRule {
    /// Wrap arbitrary marginal functions. Quadrature assumes the surfaces
    /// are smooth; use a threshold construction for discontinuous rules.
    pub fn custom<F1, F2>(h1: F1, h2: F2, dist: &TypeDistribution) -> Self
    where
        F1: Fn(f64, f64) -> f64 + Send + Sync + 'static,
        F2: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        MarginalRule {
            h1: Arc::new(h1),
            h2: Arc::new(h2),
            cutoffs: None,
            support: (dist.support_lo(), dist.upper_bound()),
            type_breaks: Vec::new(),
            provenance: Provenance::Custom,
        }
    }

    pub(crate) fn from_threshold(
        rule: &ThresholdRule,
        provenance: Provenance,
        type_breaks: Vec<f64>,
    ) -> Self {
        let c1 = rule.cutoff1.clone();
        let c2 = rule.cutoff2.clone();
        let (c1h, c2h) = (c1.clone(), c2.clone());
        MarginalRule {
            h1: Arc::new(move |v1, v2| if v2 <= c1h(v1) { 1.0 } else { 0.0 }),
            h2: Arc::new(move |v1, v2| if v1 <= c2h(v2) { 1.0 } else { 0.0 }),
            cutoffs: Some((c1, c2)),
            support: rule.support,
            type_breaks,
            provenance,
        }
    }

    /// Marginal probability that `player` is recommended the matching action.
    pub fn h(&self, player: Player, v1: f64, v2: f64) -> f64 {
        match player {
            Player::One => (self.h1)(v1, v2),
            Player::Two => (self.h2)(v1, v2),
        }
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// Opponent-type cutoff for threshold rules: `h_i = 1{V_j <= cutoff}`.
    pub fn cutoff(&self, player: Player, own_type: f64) -> Option<f64> {
        self.cutoffs.as_ref().map(|(c1, c2)| match player {
            Player::One => c1(own_type),
            Player::Two => c2(own_type),
        })
    }

    /// Own-type abscissae where the interim curves jump or kink.
    pub fn type_breakpoints(&self) -> &[f64] {
        &self.type_breaks
    }

    /// Jump abscissae, along the opponent's type axis, of both marginals
    /// when `fixed` has type `v`. Quadrature splits panels here.
    pub(crate) fn opponent_breakpoints(&self, fixed: Player, v: f64) -> Vec<f64> {
        let Some((c1, c2)) = &self.cutoffs else {
            return Vec::new();
        };
        let (own_cut, opp_cut): (&Cutoff, &Cutoff) = match fixed {
            Player::One => (c1, c2),
            Player::Two => (c2, c1),
        };
        let (lo, hi) = self.support;
        let mut breaks = vec![own_cut(v)];
        // h of the *other* player, seen as a function of the integration
        // variable t, flips where its cutoff crosses v.
        // The other player's marginal, seen along the integration axis,
        // flips only if its cutoff crosses v inside the support.
        if opp_cut(lo) < v && opp_cut(hi) >= v {
            breaks.extend(quad::sign_changes(&|t| opp_cut(t) - v, lo, hi, 128));
        }
        breaks
    }
}

/// Threshold representation `h_i(V) = 1{V_j <= cutoff_i(V_i)}` of a rule.
#[derive(Clone)]
pub struct ThresholdRule {
    cutoff1: Cutoff,
    cutoff2: Cutoff,
    support: (f64, f64),
}

impl ThresholdRule {
    pub fn new<F1, F2>(cutoff1: F1, cutoff2: F2, dist: &TypeDistribution) -> Self
    where
        F1: Fn(f64) -> f64 + Send + Sync + 'static,
        F2: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        ThresholdRule {
            cutoff1: Arc::new(cutoff1),
            cutoff2: Arc::new(cutoff2),
            support: (dist.support_lo(), dist.upper_bound()),
        }
    }

    /// Same cutoff map for both players.
    pub fn symmetric<F>(cutoff: F, dist: &TypeDistribution) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + Clone + 'static,
    {
        let c2 = cutoff.clone();
        Self::new(cutoff, c2, dist)
    }

    /// The opponent-type cutoff applied for `player` at her own type.
    pub fn cutoff(&self, player: Player, own_type: f64) -> f64 {
        match player {
            Player::One => (self.cutoff1)(own_type),
            Player::Two => (self.cutoff2)(own_type),
        }
    }

    pub fn into_marginal_rule(self, provenance: Provenance, type_breaks: Vec<f64>) -> MarginalRule {
        MarginalRule::from_threshold(&self, provenance, type_breaks)
    }
}

/// A joint recommendation distribution over action profiles.
#[derive(Clone)]
pub struct JointRecommendation {
    h1: Surface,
    h2: Surface,
}

impl JointRecommendation {
    /// Probability of profile `a` given state `s` and reported types.
    pub fn prob(&self, a: ActionProfile, s: State, v1: f64, v2: f64) -> f64 {
        let h1 = (self.h1)(v1, v2);
        let h2 = (self.h2)(v1, v2);
        let p1 = if a.a1 == s.0 { h1 } else { 1.0 - h1 };
        let p2 = if a.a2 == s.0 { h2 } else { 1.0 - h2 };
        p1 * p2
    }
}

/// Realize a joint recommendation distribution with the rule's marginals:
/// the two coordinates are drawn independently, so e.g. the profile in which
/// both players match the state has probability `h1 * h2`.
pub fn joint_from_marginals(rule: &MarginalRule) -> JointRecommendation {
    JointRecommendation {
        h1: rule.h1.clone(),
        h2: rule.h2.clone(),
    }
}

/// Defects of a joint realization at one evaluation point: distance of the
/// four profile probabilities from summing to one, and of their marginals
/// from the rule's `h` values.
#[derive(Clone, Copy, Debug)]
pub struct ActionProfileProbe {
    pub worst_defect: f64,
}

impl ActionProfileProbe {
    pub fn evaluate(
        joint: &JointRecommendation,
        rule: &MarginalRule,
        v1: f64,
        v2: f64,
        theta: bool,
    ) -> Self {
        let s = State(theta);
        let mut total = 0.0;
        let mut marginal1 = 0.0;
        let mut marginal2 = 0.0;
        for a in ActionProfile::all() {
            let p = joint.prob(a, s, v1, v2);
            total += p;
            if a.a1 == theta {
                marginal1 += p;
            }
            if a.a2 == theta {
                marginal2 += p;
            }
        }
        let worst_defect = (total - 1.0)
            .abs()
            .max((marginal1 - rule.h(Player::One, v1, v2)).abs())
            .max((marginal2 - rule.h(Player::Two, v1, v2)).abs());
        ActionProfileProbe { worst_defect }
    }
}

fn interim_expectation(
    rule: &MarginalRule,
    g: &GameSpec,
    player: Player,
    v: f64,
    weigh_own: f64,
    weigh_opp: f64,
) -> Result<f64> {
    let d = g.dist();
    let breaks = rule.opponent_breakpoints(player, v);
    let integrand = |t: f64| {
        let (h_own, h_opp) = match player {
            Player::One => (rule.h(Player::One, v, t), rule.h(Player::Two, v, t)),
            Player::Two => (rule.h(Player::Two, t, v), rule.h(Player::One, t, v)),
        };
        (weigh_own * h_own + weigh_opp * h_opp) * d.pdf(t)
    };
    quad::integrate_checked(&integrand, d.support_lo(), d.upper_bound(), &breaks)
}

/// `P[A_i = θ | V_i = v]` for `player = i`, by quadrature over the
/// opponent's type.
pub fn own_correct_prob(rule: &MarginalRule, g: &GameSpec, player: Player, v: f64) -> Result<f64> {
    interim_expectation(rule, g, player, v, 1.0, 0.0)
}

/// `P[A_j = θ | V_i = v]`: how often the opponent is recommended the
/// matching action when `player = i` has type `v`.
pub fn opponent_correct_prob(
    rule: &MarginalRule,
    g: &GameSpec,
    player: Player,
    v: f64,
) -> Result<f64> {
    interim_expectation(rule, g, player, v, 0.0, 1.0)
}

/// Obedience slack at a type: `P[A_i = θ | V_i = v] - p_max`. The rule is
/// obedient at `v` iff this is non-negative.
pub fn obedience_margin(rule: &MarginalRule, g: &GameSpec, player: Player, v: f64) -> Result<f64> {
    Ok(own_correct_prob(rule, g, player, v)? - g.p_max())
}

/// Worst obedience margin over a quantile-spaced type grid.
#[derive(Clone, Copy, Debug)]
pub struct ObedienceReport {
    pub obedient: bool,
    pub worst_margin: f64,
    pub worst_player: Player,
    pub worst_type: f64,
}

/// Check obedience for both players across `grid` quantile-spaced types.
pub fn is_obedient(rule: &MarginalRule, g: &GameSpec, grid: usize) -> Result<ObedienceReport> {
    assert!(grid >= 2, "obedience grid needs at least two types");
    let d = g.dist();
    let mut report = ObedienceReport {
        obedient: true,
        worst_margin: f64::INFINITY,
        worst_player: Player::One,
        worst_type: d.support_lo(),
    };
    for player in Player::BOTH {
        for k in 0..grid {
            let v = d.quantile((k as f64 + 0.5) / grid as f64)?;
            let margin = obedience_margin(rule, g, player, v)?;
            if margin < report.worst_margin {
                report.worst_margin = margin;
                report.worst_player = player;
                report.worst_type = v;
            }
        }
    }
    report.obedient = report.worst_margin >= -1e-9;
    Ok(report)
}

/// Interim market share `E[π_i(A, θ) | V_i = v]` by quadrature.
pub fn interim_share(rule: &MarginalRule, g: &GameSpec, player: Player, v: f64) -> Result<f64> {
    interim_expectation(rule, g, player, v, 1.0, -g.alpha())
}

/// An interim curve (share or recommendation probability) together with the
/// own-type abscissae where it jumps or kinks.
#[derive(Clone)]
pub struct InterimShare {
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    breakpoints: Vec<f64>,
}

impl InterimShare {
    pub fn new<F>(f: F, breakpoints: Vec<f64>) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        InterimShare { f: Arc::new(f), breakpoints }
    }

    pub fn eval(&self, v: f64) -> f64 {
        (self.f)(v)
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }
}

/// Quadrature-backed interim share curve of an arbitrary rule.
pub fn interim_share_fn(rule: &MarginalRule, g: &GameSpec, player: Player) -> InterimShare {
    let rule = rule.clone();
    let g = g.clone();
    let breaks = rule.type_breakpoints().to_vec();
    InterimShare::new(
        move |v| {
            let d = g.dist();
            let splits = rule.opponent_breakpoints(player, v);
            let integrand = |t: f64| {
                let (h_own, h_opp) = match player {
                    Player::One => (rule.h(Player::One, v, t), rule.h(Player::Two, v, t)),
                    Player::Two => (rule.h(Player::Two, t, v), rule.h(Player::One, t, v)),
                };
                (h_own - g.alpha() * h_opp) * d.pdf(t)
            };
            quad::integrate(&integrand, d.support_lo(), d.upper_bound(), &splits)
        },
        breaks,
    )
}

/// Division with the α → 0 saturation convention: a positive (or zero)
/// numerator saturates to +∞, a negative one to −∞.
pub(crate) fn saturating_div(numerator: f64, alpha: f64) -> f64 {
    if alpha > 0.0 {
        numerator / alpha
    } else if numerator >= 0.0 {
        f64::INFINITY
    } else {
        f64::NEG_INFINITY
    }
}

/// `P[A_i = θ | V_i = v]` of the named rule, in closed form.
pub fn closed_form_own_correct(kind: RuleKind, g: &GameSpec, v: f64) -> Result<f64> {
    let d = g.dist();
    let vstar = g.obedience_threshold();
    let raw_cutoff = match kind {
        RuleKind::Welfare => saturating_div(v, g.alpha()),
        RuleKind::Revenue => {
            ensure_regular(d)?;
            let target = saturating_div(d.virtual_value(v)?, g.alpha());
            inverse_virtual_saturating(d, target)?
        }
    };
    Ok(d.cdf(vstar).max(d.cdf(raw_cutoff)))
}

/// `P[A_j = θ | V_i = v]` of the named rule, in closed form.
pub fn closed_form_opponent_correct(kind: RuleKind, g: &GameSpec, v: f64) -> Result<f64> {
    let d = g.dist();
    let vstar = g.obedience_threshold();
    if v <= vstar {
        if kind == RuleKind::Revenue {
            ensure_regular(d)?;
        }
        return Ok(1.0);
    }
    let reach = match kind {
        RuleKind::Welfare => g.alpha() * v,
        RuleKind::Revenue => {
            ensure_regular(d)?;
            let target = g.alpha() * d.virtual_value(v)?;
            inverse_virtual_saturating(d, target)?
        }
    };
    Ok(1.0 - d.cdf(reach))
}

/// Closed-form interim market share of the named rule:
/// `max{F(v*), F(cutoff(v))} + α·1{v > v*}·F(reach(v)) − α`, where `cutoff`
/// and `reach` are the type- or virtual-value-scaled maps of the rule.
pub fn closed_form_interim_share(kind: RuleKind, g: &GameSpec, v: f64) -> Result<f64> {
    let own = closed_form_own_correct(kind, g, v)?;
    let opp = closed_form_opponent_correct(kind, g, v)?;
    Ok(own - g.alpha() * opp)
}

/// Closed-form interim share curve with its jump/kink abscissae.
pub fn closed_form_share_fn(kind: RuleKind, g: &GameSpec) -> Result<InterimShare> {
    if kind == RuleKind::Revenue {
        ensure_regular(g.dist())?;
    }
    let breaks = share_breakpoints(kind, g)?;
    let g = g.clone();
    Ok(InterimShare::new(
        move |v| closed_form_interim_share(kind, &g, v).expect("regularity checked at construction"),
        breaks,
    ))
}

/// Own-type abscissae where the named rule's interim curves jump or kink.
pub(crate) fn share_breakpoints(kind: RuleKind, g: &GameSpec) -> Result<Vec<f64>> {
    let d = g.dist();
    let vstar = g.obedience_threshold();
    let alpha = g.alpha();
    let (lo, hi) = (d.support_lo(), d.upper_bound());
    let mut breaks = vec![vstar];
    match kind {
        RuleKind::Welfare => {
            breaks.push(alpha * vstar);
            // Saturation of the two scaled-type maps at the support ends.
            breaks.push(alpha * lo);
            breaks.push(alpha * hi);
            if alpha > 0.0 {
                breaks.push(lo / alpha);
                breaks.push(hi / alpha);
            }
        }
        RuleKind::Revenue => {
            ensure_regular(d)?;
            let phi_star = d.virtual_value(vstar)?;
            // Largest type whose obedience constraint binds.
            breaks.push(d.inverse_virtual_value(alpha * phi_star)?);
            if alpha > 0.0 {
                // Saturation of the two virtual-value maps at the support ends.
                let (phi_lo, phi_hi) = (d.virtual_value(lo)?, d.virtual_value(hi)?);
                for target in [alpha * phi_lo, alpha * phi_hi, phi_lo / alpha, phi_hi / alpha] {
                    breaks.push(d.inverse_virtual_value(target)?);
                }
            } else {
                breaks.push(d.inverse_virtual_value(0.0)?);
            }
        }
    }
    breaks.retain(|b| b.is_finite() && *b > lo && *b < hi);
    breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
    breaks.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    Ok(breaks)
}

fn ensure_regular(d: &TypeDistribution) -> Result<()> {
    if d.is_regular() {
        Ok(())
    } else {
        Err(Error::NotRegular { at: f64::NAN })
    }
}

/// φ⁻¹ extended to ±∞ arguments via support saturation.
fn inverse_virtual_saturating(d: &TypeDistribution, target: f64) -> Result<f64> {
    if target == f64::INFINITY {
        Ok(d.upper_bound())
    } else if target == f64::NEG_INFINITY {
        Ok(d.support_lo())
    } else {
        d.inverse_virtual_value(target)
    }
}
