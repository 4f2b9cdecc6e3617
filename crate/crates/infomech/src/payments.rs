//! Payment construction and the aggregate welfare/revenue functionals.
//!
//! Interim payments follow the envelope identity: a type pays her value
//! times her interim share, minus the accumulated share of all lower types,
//! anchored at the lowest type. The seller's revenue can be computed two
//! ways, summing expected payments directly or through virtual values, and
//! the two routes are required to agree.

use std::sync::Arc;

use crate::dist::TypeDistribution;
use crate::error::{Error, Result};
use crate::game::{GameSpec, Player};
use crate::mechanism::{
    closed_form_share_fn, interim_share_fn, InterimShare, MarginalRule, RuleKind,
};
use crate::quad;

/// Which rule a payment schedule implements.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PaymentKind {
    Welfare,
    Revenue,
    Custom,
}

/// An interim payment schedule for one (symmetric) player.
#[derive(Clone)]
pub struct PaymentSchedule {
    pay: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    breakpoints: Vec<f64>,
    base_type_payment: f64,
    rule_kind: PaymentKind,
}

impl PaymentSchedule {
    /// Envelope payments for a non-decreasing interim share, anchored at
    /// `base_payment` for the lowest type. Rejects non-monotone shares.
    pub fn myerson(
        share: &InterimShare,
        dist: &TypeDistribution,
        base_payment: f64,
        rule_kind: PaymentKind,
    ) -> Result<Self> {
        assert_share_monotone(share, dist)?;
        let share = share.clone();
        let dist = dist.clone();
        let breakpoints = share.breakpoints().to_vec();
        Ok(PaymentSchedule {
            pay: Arc::new(move |v| envelope_payment(&share, &dist, base_payment, v)),
            breakpoints,
            base_type_payment: base_payment,
            rule_kind,
        })
    }

    /// Wrap an explicit payment function (tampered or experimental inputs).
    pub fn from_fn<F>(pay: F, base_type_payment: f64, rule_kind: PaymentKind) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        PaymentSchedule {
            pay: Arc::new(pay),
            breakpoints: Vec::new(),
            base_type_payment,
            rule_kind,
        }
    }

    pub fn zero() -> Self {
        PaymentSchedule::from_fn(|_| 0.0, 0.0, PaymentKind::Custom)
    }

    pub fn interim_payment(&self, v: f64) -> f64 {
        (self.pay)(v)
    }

    pub fn base_type_payment(&self) -> f64 {
        self.base_type_payment
    }

    pub fn rule_kind(&self) -> PaymentKind {
        self.rule_kind
    }

    /// Own-type abscissae where the payment curve jumps or kinks.
    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }
}

fn assert_share_monotone(share: &InterimShare, dist: &TypeDistribution) -> Result<()> {
    let (lo, hi) = (dist.support_lo(), dist.upper_bound());
    let steps = 240;
    let mut prev = share.eval(lo);
    for k in 1..=steps {
        let v = lo + (hi - lo) * k as f64 / steps as f64;
        let cur = share.eval(v);
        if prev - cur > 1e-9 {
            return Err(Error::NotMonotone {
                what: "interim share",
                at: v,
                violation: prev - cur,
            });
        }
        prev = cur;
    }
    Ok(())
}

fn envelope_payment(share: &InterimShare, dist: &TypeDistribution, base: f64, v: f64) -> f64 {
    let lo = dist.support_lo();
    let accumulated = quad::integrate(&|s| share.eval(s), lo, v, share.breakpoints());
    v * share.eval(v) - lo * share.eval(lo) + base - accumulated
}

/// The envelope payment of a single type under an arbitrary non-decreasing
/// interim share, anchored at `base_payment` for the lowest type.
pub fn myerson_payment(
    share: &InterimShare,
    dist: &TypeDistribution,
    base_payment: f64,
    v: f64,
) -> Result<f64> {
    assert_share_monotone(share, dist)?;
    Ok(envelope_payment(share, dist, base_payment, v))
}

/// Interim payment of the revenue-optimal mechanism at a type:
/// `v·π̃(v) − v̲·K − ∫ π̃`, with the closed-form revenue share and
/// `K = F(v*) − alpha`.
pub fn revenue_optimal_payment(g: &GameSpec, v: f64) -> Result<f64> {
    let share = closed_form_share_fn(RuleKind::Revenue, g)?;
    let d = g.dist();
    let lo = d.support_lo();
    let accumulated = quad::integrate(&|s| share.eval(s), lo, v, share.breakpoints());
    Ok(v * share.eval(v) - lo * g.outside_option_share() - accumulated)
}

/// The payment schedule shipped with each named mechanism: the revenue
/// mechanism binds the lowest type's participation constraint; the welfare
/// mechanism uses envelope payments anchored at zero purely to witness
/// implementability.
pub fn optimal_payment_schedule(kind: RuleKind, g: &GameSpec) -> Result<PaymentSchedule> {
    let share = closed_form_share_fn(kind, g)?;
    match kind {
        RuleKind::Welfare => PaymentSchedule::myerson(&share, g.dist(), 0.0, PaymentKind::Welfare),
        RuleKind::Revenue => {
            let lo = g.dist().support_lo();
            let base = lo * (share.eval(lo) - g.outside_option_share());
            PaymentSchedule::myerson(&share, g.dist(), base, PaymentKind::Revenue)
        }
    }
}

/// The seller's expected revenue computed by both accounting routes.
#[derive(Clone, Copy, Debug)]
pub struct RevenueBreakdown {
    /// Sum of expected interim payments over both players.
    pub direct: f64,
    /// Virtual-surplus route: `Σ_i E[φ(V_i) π̃_i(V_i)] − 2 v̲ K`.
    pub virtual_surplus: f64,
}

impl RevenueBreakdown {
    pub fn value(&self) -> f64 {
        self.direct
    }
}

/// Expected revenue of a rule/payment pair. The direct route integrates the
/// payment schedule; the virtual-surplus route integrates the rule's
/// quadrature interim share against virtual values. Errors if the two
/// disagree beyond 1e−6 relative.
pub fn expected_revenue(
    g: &GameSpec,
    rule: &MarginalRule,
    payments: &PaymentSchedule,
) -> Result<RevenueBreakdown> {
    let d = g.dist();
    let (lo, hi) = (d.support_lo(), d.upper_bound());

    let mut splits = payments.breakpoints().to_vec();
    splits.extend_from_slice(rule.type_breakpoints());
    let direct =
        2.0 * quad::integrate_checked(&|v| payments.interim_payment(v) * d.pdf(v), lo, hi, &splits)?;

    let share = interim_share_fn(rule, g, Player::One);
    let virtual_integrand = |v: f64| {
        let phi = d.virtual_value(v).expect("support interior");
        phi * share.eval(v) * d.pdf(v)
    };
    let virtual_surplus = 2.0
        * quad::integrate_checked(&virtual_integrand, lo, hi, rule.type_breakpoints())?
        - 2.0 * lo * g.outside_option_share();

    let breakdown = RevenueBreakdown { direct, virtual_surplus };
    let scale = direct.abs().max(virtual_surplus.abs()).max(1e-9);
    if (direct - virtual_surplus).abs() > 1e-6 * scale {
        return Err(Error::RevenueMismatch { direct, virtual_surplus });
    }
    Ok(breakdown)
}

/// Expected social welfare
/// `E[(V1 − α V2) h1(V) + (V2 − α V1) h2(V)]` by two-dimensional quadrature.
pub fn expected_welfare(g: &GameSpec, rule: &MarginalRule) -> Result<f64> {
    let d = g.dist();
    let alpha = g.alpha();
    let (lo, hi) = (d.support_lo(), d.upper_bound());
    let outer = |v1: f64| {
        let inner_splits = rule.opponent_breakpoints(Player::One, v1);
        let inner = |v2: f64| {
            let h1 = rule.h(Player::One, v1, v2);
            let h2 = rule.h(Player::Two, v1, v2);
            ((v1 - alpha * v2) * h1 + (v2 - alpha * v1) * h2) * d.pdf(v2)
        };
        quad::integrate(&inner, lo, hi, &inner_splits) * d.pdf(v1)
    };
    quad::integrate_checked(&outer, lo, hi, rule.type_breakpoints())
}

/// Individual rationality against the worst-case outside option `K`:
/// the lowest type's constraint `p̃(v̲) <= v̲ (π̃(v̲) − K)`, plus a grid
/// check of the full inequality `v·π̃(v) − p̃(v) >= v·K`.
pub fn check_individual_rationality(
    g: &GameSpec,
    share: &InterimShare,
    payments: &PaymentSchedule,
) -> bool {
    let d = g.dist();
    let k = g.outside_option_share();
    let lo = d.support_lo();
    let tol = 1e-9;
    if payments.interim_payment(lo) > lo * (share.eval(lo) - k) + tol {
        return false;
    }
    let grid = 200;
    for i in 0..grid {
        let v = match d.quantile((i as f64 + 0.5) / grid as f64) {
            Ok(v) => v,
            Err(_) => return false,
        };
        if v * share.eval(v) - payments.interim_payment(v) < v * k - tol {
            return false;
        }
    }
    true
}
