//! Per-agent demand: the unique maximizer of the expected utility over the
//! budget set `{x >= 0 : ⟨p, x⟩ <= ⟨p, w⟩}`.

use serde::{Deserialize, Serialize};

use super::{FuzzyQuadraticUtility, PriceVector};
use crate::error::{Error, Result};
use crate::simplex::project_budget;

pub const DEFAULT_DEMAND_MAX_ITER: usize = 100_000;

/// Which branch of the two-good case analysis produced a demand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DemandRegime {
    /// The satiation point is affordable; the budget does not bind.
    Satiated,
    /// `p₁ = 0`: good 1 is free and consumed up to satiation.
    FreeFirstGood,
    /// `p₂ = 0`: good 2 is free and consumed up to satiation.
    FreeSecondGood,
    /// Both coordinates positive on the budget line.
    Interior,
    /// Budget line optimum clipped at `x₁ = 0`.
    FirstGoodZero,
    /// Budget line optimum clipped at `x₂ = 0`.
    SecondGoodZero,
}

/// Demand of one agent. Two goods use the closed-form case analysis, more
/// goods use projected gradient ascent started at the endowment.
pub fn demand(u: &FuzzyQuadraticUtility, w: &[f64], p: &PriceVector, tol: f64) -> Result<Vec<f64>> {
    check_shapes(u, w, p)?;
    if u.goods() == 2 {
        Ok(demand_two_goods(u, w, p)?.0)
    } else {
        demand_projected(u, w, p, None, tol, DEFAULT_DEMAND_MAX_ITER)
    }
}

fn check_shapes(u: &FuzzyQuadraticUtility, w: &[f64], p: &PriceVector) -> Result<()> {
    if w.len() != u.goods() || p.len() != u.goods() {
        return Err(Error::DimensionMismatch(format!(
            "utility has {} goods, endowment {}, price {}",
            u.goods(),
            w.len(),
            p.len()
        )));
    }
    Ok(())
}

/// Closed-form two-good demand.
///
/// Substituting `y_h = √(2E(q_h))·x_h` turns the expected utility into
/// `−½|y|² − Σ b'_h y_h`, the unit-curvature case, whose budget-line optimum
/// is explicit. With `r = p'₁/p'₂` the line optimum is
/// `y₁ = p'₂²/(p'₁²+p'₂²)·[w'₁r² + (w'₂+b'₂)r − b'₁]` and symmetrically for
/// `y₂`; a negative bracket clips that coordinate to zero.
pub fn demand_two_goods(u: &FuzzyQuadraticUtility, w: &[f64], p: &PriceVector) -> Result<(Vec<f64>, DemandRegime)> {
    check_shapes(u, w, p)?;
    if u.goods() != 2 {
        return Err(Error::UnsupportedShape(format!("two-good demand called with {} goods", u.goods())));
    }
    let q = u.quad_expected();
    let b = u.lin_expected();
    let sat = u.satiation_point();
    let income = p.dot(w);
    let (p1, p2) = (p.as_slice()[0], p.as_slice()[1]);

    if p.dot(&sat) <= income {
        return Ok((sat, DemandRegime::Satiated));
    }
    if p1 == 0.0 {
        return Ok((vec![sat[0], income / p2], DemandRegime::FreeFirstGood));
    }
    if p2 == 0.0 {
        return Ok((vec![income / p1, sat[1]], DemandRegime::FreeSecondGood));
    }

    let s = [(2.0 * q[0]).sqrt(), (2.0 * q[1]).sqrt()];
    let bs = [b[0] / s[0], b[1] / s[1]];
    let ws = [w[0] * s[0], w[1] * s[1]];
    let ps = [p1 / s[0], p2 / s[1]];
    let r = ps[0] / ps[1];
    let first = ws[0] * r * r + (ws[1] + bs[1]) * r - bs[0];
    let second = ws[1] / (r * r) + (ws[0] + bs[0]) / r - bs[1];
    let norm = ps[0] * ps[0] + ps[1] * ps[1];

    let (y, regime) = if first >= 0.0 && second >= 0.0 {
        ([ps[1] * ps[1] / norm * first, ps[0] * ps[0] / norm * second], DemandRegime::Interior)
    } else if first < 0.0 {
        ([0.0, ws[1] + ws[0] * r], DemandRegime::FirstGoodZero)
    } else {
        ([ws[0] + ws[1] / r, 0.0], DemandRegime::SecondGoodZero)
    };
    Ok((vec![(y[0] / s[0]).max(0.0), (y[1] / s[1]).max(0.0)], regime))
}

/// Projected gradient ascent on `u_E` with step `1/(2 max E(q))`, projecting
/// onto the budget set each step. Stops when the projected-gradient residual
/// `‖x⁺ − x‖∞ / step` falls to `tol`.
pub fn demand_projected(
    u: &FuzzyQuadraticUtility,
    w: &[f64],
    p: &PriceVector,
    start: Option<&[f64]>,
    tol: f64,
    max_iter: usize,
) -> Result<Vec<f64>> {
    check_shapes(u, w, p)?;
    let q = u.quad_expected();
    let lipschitz = 2.0 * q.iter().cloned().fold(f64::MIN, f64::max);
    let step = 1.0 / lipschitz;
    let income = p.dot(w);
    let prices = p.as_slice();

    let mut x = project_budget(start.unwrap_or(w), prices, income);
    let mut residual = f64::INFINITY;
    for _ in 0..max_iter {
        let g = u.gradient(&x);
        let trial: Vec<f64> = x.iter().zip(&g).map(|(xh, gh)| xh + step * gh).collect();
        let next = project_budget(&trial, prices, income);
        residual = next.iter().zip(&x).fold(0.0_f64, |m, (a, b)| m.max((a - b).abs())) / step;
        x = next;
        if residual <= tol {
            return Ok(x);
        }
    }
    Err(Error::NoConvergence { iterations: max_iter, residual })
}
