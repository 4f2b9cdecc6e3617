//! Composite Gauss–Legendre quadrature with panel splits at integrand
//! discontinuities.
//!
//! Threshold mechanisms produce piecewise-smooth integrands whose jump and
//! kink locations are known (in closed form or by bisection). Splitting
//! panels there keeps a fixed-order Gauss rule at full accuracy; panels are
//! additionally chopped to a maximum length so entire-function tails
//! converge too.

use crate::error::{Error, Result};
use std::sync::LazyLock;

const GL_ORDER: usize = 20;
const MAX_PANEL: f64 = 1.5;

static GL_RULE: LazyLock<(Vec<f64>, Vec<f64>)> = LazyLock::new(|| legendre_rule(GL_ORDER));

/// Nodes and weights of the n-point Gauss–Legendre rule on [-1, 1].
fn legendre_rule(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        // Chebyshev initial guess refined by Newton iteration.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut deriv = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_eval(n, x);
            deriv = d;
            let step = p / d;
            x -= step;
            if step.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * deriv * deriv);
    }
    (nodes, weights)
}

/// Value and derivative of the Legendre polynomial `P_n` at `x`.
fn legendre_eval(n: usize, x: f64) -> (f64, f64) {
    let mut prev = 1.0;
    let mut cur = x;
    for k in 2..=n {
        let kf = k as f64;
        let next = ((2.0 * kf - 1.0) * x * cur - (kf - 1.0) * prev) / kf;
        prev = cur;
        cur = next;
    }
    let deriv = n as f64 * (x * cur - prev) / (x * x - 1.0);
    (cur, deriv)
}

/// Integrate `f` over `[a, b]`, splitting panels at `splits`.
pub(crate) fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, splits: &[f64]) -> f64 {
    integrate_with(f, a, b, splits, MAX_PANEL)
}

fn integrate_with(f: &dyn Fn(f64) -> f64, a: f64, b: f64, splits: &[f64], max_panel: f64) -> f64 {
    if b.partial_cmp(&a) != Some(std::cmp::Ordering::Greater) {
        return 0.0;
    }
    let mut cuts: Vec<f64> = splits
        .iter()
        .copied()
        .filter(|s| s.is_finite() && *s > a && *s < b)
        .collect();
    cuts.push(a);
    cuts.push(b);
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    cuts.dedup_by(|x, y| (*x - *y).abs() < 1e-13 * (1.0 + x.abs()));

    let (nodes, weights) = &*GL_RULE;
    let mut total = 0.0;
    for pair in cuts.windows(2) {
        let (lo, hi) = (pair[0], pair[1]);
        let chunks = ((hi - lo) / max_panel).ceil().max(1.0) as usize;
        let width = (hi - lo) / chunks as f64;
        for c in 0..chunks {
            let left = lo + c as f64 * width;
            let mid = left + 0.5 * width;
            let half = 0.5 * width;
            let mut acc = 0.0;
            for (x, w) in nodes.iter().zip(weights) {
                acc += w * f(mid + half * x);
            }
            total += acc * half;
        }
    }
    total
}

/// Integrate with an internal refinement check; errors if two panel
/// resolutions disagree beyond an absolute-plus-relative tolerance.
pub(crate) fn integrate_checked(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    splits: &[f64],
) -> Result<f64> {
    let coarse = integrate_with(f, a, b, splits, MAX_PANEL);
    let fine = integrate_with(f, a, b, splits, 0.5 * MAX_PANEL);
    let disagreement = (coarse - fine).abs();
    if disagreement > 1e-9 + 1e-11 * fine.abs() {
        return Err(Error::QuadratureNonConvergence {
            estimate: fine,
            disagreement,
        });
    }
    Ok(fine)
}

/// Abscissae in `(lo, hi)` where `g` changes sign, found by a cell scan
/// followed by bisection of each bracketing cell.
pub(crate) fn sign_changes(g: &dyn Fn(f64) -> f64, lo: f64, hi: f64, cells: usize) -> Vec<f64> {
    let mut out = Vec::new();
    if hi.partial_cmp(&lo) != Some(std::cmp::Ordering::Greater) {
        return out;
    }
    let width = (hi - lo) / cells as f64;
    let mut left = lo;
    let mut g_left = g(left);
    for c in 1..=cells {
        let right = if c == cells { hi } else { lo + c as f64 * width };
        let g_right = g(right);
        if (g_left >= 0.0) != (g_right >= 0.0) {
            let (mut a, mut b) = (left, right);
            let mut ga = g_left;
            for _ in 0..64 {
                let m = 0.5 * (a + b);
                let gm = g(m);
                if (ga >= 0.0) == (gm >= 0.0) {
                    a = m;
                    ga = gm;
                } else {
                    b = m;
                }
            }
            out.push(0.5 * (a + b));
        }
        left = right;
        g_left = g_right;
    }
    out
}
