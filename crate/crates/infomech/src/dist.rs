//! Buyer type distributions.
//!
//! Exposes the analytic objects every mechanism formula consumes: CDF,
//! density, quantile, virtual value and its inverse, and a regularity check.
//! The built-in families use closed forms throughout; a tabulated
//! piecewise-linear CDF variant supports oracle constructions in tests.
//!
//! Unbounded supports are truncated at the `1 - 1e-10` quantile for
//! quadrature and grid construction. All mechanism quantities are
//! expectations with integrable tails, so the truncation error sits far
//! below every tolerance used in this crate.

use crate::error::{Error, Result};

/// Mass left in the truncated upper tail of an unbounded support.
pub const TAIL_MASS: f64 = 1e-10;

/// A buyer's value distribution on a real interval.
#[derive(Clone, Debug, PartialEq)]
pub enum TypeDistribution {
    /// Exponential with the given rate, supported on `[0, ∞)`.
    Exponential { rate: f64 },
    /// Uniform on `[lo, hi]`.
    Uniform { lo: f64, hi: f64 },
    /// Piecewise-linear CDF through the points `(xs[k], ps[k])`.
    ///
    /// The density is piecewise constant. Intended for synthetic oracle
    /// distributions (e.g. a bimodal density with a decreasing virtual
    /// value); not reachable from the CLI.
    Tabulated { xs: Vec<f64>, ps: Vec<f64> },
}

impl TypeDistribution {
    pub fn exponential(rate: f64) -> Result<Self> {
        if !rate.is_finite() || rate <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "exponential rate must be positive and finite, got {rate}"
            )));
        }
        Ok(TypeDistribution::Exponential { rate })
    }

    pub fn uniform(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() || lo >= hi {
            return Err(Error::InvalidParameter(format!(
                "uniform requires lo < hi, got lo={lo}, hi={hi}"
            )));
        }
        Ok(TypeDistribution::Uniform { lo, hi })
    }

    /// Piecewise-linear CDF through `(xs[k], ps[k])`.
    ///
    /// `xs` must be strictly increasing; `ps` must be non-decreasing with
    /// `ps[0] = 0` and `ps[last] = 1`.
    pub fn tabulated(xs: Vec<f64>, ps: Vec<f64>) -> Result<Self> {
        if xs.len() < 2 || xs.len() != ps.len() {
            return Err(Error::InvalidParameter(
                "tabulated CDF needs matching xs/ps with at least two knots".into(),
            ));
        }
        if !xs.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidParameter("tabulated xs must be strictly increasing".into()));
        }
        if !ps.windows(2).all(|w| w[0] <= w[1]) {
            return Err(Error::InvalidParameter("tabulated ps must be non-decreasing".into()));
        }
        if ps[0] != 0.0 || (ps[ps.len() - 1] - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter("tabulated ps must run from 0 to 1".into()));
        }
        Ok(TypeDistribution::Tabulated { xs, ps })
    }

    /// Lower end of the support (the lowest buyer type).
    pub fn support_lo(&self) -> f64 {
        match self {
            TypeDistribution::Exponential { .. } => 0.0,
            TypeDistribution::Uniform { lo, .. } => *lo,
            TypeDistribution::Tabulated { xs, .. } => xs[0],
        }
    }

    /// Upper end of the support; `+∞` for the exponential.
    pub fn support_hi(&self) -> f64 {
        match self {
            TypeDistribution::Exponential { .. } => f64::INFINITY,
            TypeDistribution::Uniform { hi, .. } => *hi,
            TypeDistribution::Tabulated { xs, .. } => xs[xs.len() - 1],
        }
    }

    /// Truncation point used for quadrature and grids: the support top for
    /// bounded distributions, the `1 - TAIL_MASS` quantile otherwise.
    pub fn upper_bound(&self) -> f64 {
        match self {
            TypeDistribution::Exponential { rate } => -TAIL_MASS.ln() / rate,
            _ => self.support_hi(),
        }
    }

    /// F(v), clamped to 0 below the support and 1 above it.
    pub fn cdf(&self, v: f64) -> f64 {
        match self {
            TypeDistribution::Exponential { rate } => {
                if v <= 0.0 {
                    0.0
                } else {
                    -(-rate * v).exp_m1()
                }
            }
            TypeDistribution::Uniform { lo, hi } => ((v - lo) / (hi - lo)).clamp(0.0, 1.0),
            TypeDistribution::Tabulated { xs, ps } => {
                if v <= xs[0] {
                    return 0.0;
                }
                if v >= xs[xs.len() - 1] {
                    return 1.0;
                }
                let k = xs.partition_point(|&x| x <= v) - 1;
                let t = (v - xs[k]) / (xs[k + 1] - xs[k]);
                ps[k] + t * (ps[k + 1] - ps[k])
            }
        }
    }

    /// Density f(v); zero outside the support.
    pub fn pdf(&self, v: f64) -> f64 {
        match self {
            TypeDistribution::Exponential { rate } => {
                if v < 0.0 {
                    0.0
                } else {
                    rate * (-rate * v).exp()
                }
            }
            TypeDistribution::Uniform { lo, hi } => {
                if v < *lo || v > *hi {
                    0.0
                } else {
                    1.0 / (hi - lo)
                }
            }
            TypeDistribution::Tabulated { xs, ps } => {
                if v < xs[0] || v > xs[xs.len() - 1] {
                    return 0.0;
                }
                let k = xs.partition_point(|&x| x <= v).clamp(1, xs.len() - 1) - 1;
                (ps[k + 1] - ps[k]) / (xs[k + 1] - xs[k])
            }
        }
    }

    /// F⁻¹(q). For `q → 1` with unbounded support this saturates at
    /// [`upper_bound`](Self::upper_bound). Rejects `q` outside `[0, 1]`.
    pub fn quantile(&self, q: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::ProbabilityOutOfRange(q));
        }
        Ok(match self {
            TypeDistribution::Exponential { rate } => {
                if q >= 1.0 - TAIL_MASS {
                    self.upper_bound()
                } else {
                    -(-q).ln_1p() / rate
                }
            }
            TypeDistribution::Uniform { lo, hi } => lo + q * (hi - lo),
            TypeDistribution::Tabulated { xs, ps } => {
                if q <= 0.0 {
                    return Ok(xs[0]);
                }
                if q >= 1.0 {
                    return Ok(xs[xs.len() - 1]);
                }
                let k = ps.partition_point(|&p| p <= q).clamp(1, ps.len() - 1) - 1;
                if ps[k + 1] == ps[k] {
                    xs[k]
                } else {
                    xs[k] + (q - ps[k]) / (ps[k + 1] - ps[k]) * (xs[k + 1] - xs[k])
                }
            }
        })
    }

    /// Virtual value φ(v) = v − (1 − F(v)) / f(v). Rejects points where the
    /// density vanishes.
    pub fn virtual_value(&self, v: f64) -> Result<f64> {
        match self {
            TypeDistribution::Exponential { rate } => {
                if v < 0.0 {
                    return Err(Error::ZeroDensity(v));
                }
                Ok(v - 1.0 / rate)
            }
            TypeDistribution::Uniform { lo, hi } => {
                if v < *lo || v > *hi {
                    return Err(Error::ZeroDensity(v));
                }
                Ok(2.0 * v - hi)
            }
            _ => {
                let f = self.pdf(v);
                if f <= 0.0 {
                    return Err(Error::ZeroDensity(v));
                }
                Ok(v - (1.0 - self.cdf(v)) / f)
            }
        }
    }

    /// φ⁻¹(x) for regular distributions, saturating at the (truncated)
    /// support ends: values above φ(upper_bound) map to the upper bound,
    /// values below φ(support_lo) map to the support bottom.
    pub fn inverse_virtual_value(&self, x: f64) -> Result<f64> {
        match self {
            TypeDistribution::Exponential { rate } => {
                Ok((x + 1.0 / rate).clamp(0.0, self.upper_bound()))
            }
            TypeDistribution::Uniform { lo, hi } => Ok((0.5 * (x + hi)).clamp(*lo, *hi)),
            TypeDistribution::Tabulated { .. } => {
                if let Some(at) = self.regularity_violation(1000) {
                    return Err(Error::NotRegular { at });
                }
                self.invert_virtual_by_bisection(x)
            }
        }
    }

    /// True iff the virtual value is non-decreasing across an evaluation
    /// grid of the given size (tolerance −1e−12).
    pub fn check_regularity(&self, grid_points: usize) -> bool {
        self.regularity_violation(grid_points.max(2)).is_none()
    }

    /// True for families known to be regular analytically; grid-checked
    /// otherwise.
    pub fn is_regular(&self) -> bool {
        match self {
            TypeDistribution::Exponential { .. } | TypeDistribution::Uniform { .. } => true,
            TypeDistribution::Tabulated { .. } => self.check_regularity(1000),
        }
    }

    /// First grid abscissa where the virtual value decreases, if any.
    fn regularity_violation(&self, grid_points: usize) -> Option<f64> {
        let lo = self.support_lo();
        let hi = self.upper_bound();
        let n = grid_points.max(2);
        let mut prev: Option<f64> = None;
        for k in 0..n {
            let v = lo + (hi - lo) * k as f64 / (n - 1) as f64;
            if self.pdf(v) <= 0.0 {
                continue;
            }
            let phi = match self.virtual_value(v) {
                Ok(p) => p,
                Err(_) => continue,
            };
            if let Some(p) = prev {
                if phi - p < -1e-12 {
                    return Some(v);
                }
            }
            prev = Some(phi);
        }
        None
    }

    fn invert_virtual_by_bisection(&self, x: f64) -> Result<f64> {
        let lo = self.support_lo();
        let hi = self.upper_bound();
        // Saturate outside the attained range of φ.
        let phi_at = |v: f64| self.virtual_value(v);
        let scan = 512;
        let mut lo_pt = None;
        let mut hi_pt = None;
        for k in 0..=scan {
            let v = lo + (hi - lo) * k as f64 / scan as f64;
            if self.pdf(v) > 0.0 {
                if lo_pt.is_none() {
                    lo_pt = Some(v);
                }
                hi_pt = Some(v);
            }
        }
        let (a0, b0) = match (lo_pt, hi_pt) {
            (Some(a), Some(b)) if a < b => (a, b),
            _ => return Err(Error::ZeroDensity(lo)),
        };
        if phi_at(a0)? >= x {
            return Ok(lo);
        }
        if phi_at(b0)? <= x {
            return Ok(hi);
        }
        let (mut a, mut b) = (a0, b0);
        for _ in 0..100 {
            let m = 0.5 * (a + b);
            if phi_at(m).map(|p| p < x).unwrap_or(true) {
                a = m;
            } else {
                b = m;
            }
            if b - a < 1e-12 {
                break;
            }
        }
        Ok(0.5 * (a + b))
    }
}

impl std::fmt::Display for TypeDistribution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TypeDistribution::Exponential { rate } => write!(f, "exp(rate={rate})"),
            TypeDistribution::Uniform { lo, hi } => write!(f, "uniform[{lo}, {hi}]"),
            TypeDistribution::Tabulated { xs, .. } => {
                write!(f, "tabulated[{} knots on [{}, {}]]", xs.len(), xs[0], xs[xs.len() - 1])
            }
        }
    }
}
