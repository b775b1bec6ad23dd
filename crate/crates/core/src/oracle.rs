//! Brute-force checks for demand and equilibrium prices.

use serde::{Deserialize, Serialize};

use crate::economy::{demand_two_goods, Economy, FuzzyQuadraticUtility, PriceVector};
use crate::error::{Error, Result};

pub const MAX_GRID_POINTS: f64 = 1e7;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub resolution: f64,
    /// Per-good upper bounds. When omitted each good is bounded by what the
    /// budget buys, which needs every price positive.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<Vec<f64>>,
}

impl GridSpec {
    pub fn new(resolution: f64) -> Result<Self> {
        if !(resolution > 0.0) || !resolution.is_finite() {
            return Err(Error::InvalidGrid(format!("resolution must be positive, got {resolution}")));
        }
        Ok(GridSpec { resolution, bounds: None })
    }

    pub fn with_bounds(mut self, bounds: Vec<f64>) -> Result<Self> {
        if bounds.iter().any(|&b| !(b >= 0.0) || !b.is_finite()) {
            return Err(Error::InvalidGrid(format!("bounds must be finite and non-negative: {bounds:?}")));
        }
        self.bounds = Some(bounds);
        Ok(self)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridDemand {
    pub point: Vec<f64>,
    pub value: f64,
    pub evaluated: usize,
    /// Whether the last free coordinate was set to exhaust the budget.
    pub budget_reduced: bool,
}

/// Points `0, r, 2r, …` up to `bound`, with `bound` itself appended.
fn axis(bound: f64, r: f64) -> Vec<f64> {
    let steps = (bound / r).floor() as usize;
    let mut v: Vec<f64> = (0..=steps).map(|k| k as f64 * r).filter(|&x| x <= bound).collect();
    if !matches!(v.last(), Some(&x) if x >= bound) {
        v.push(bound);
    }
    v
}

fn check_size(axes: &[Vec<f64>]) -> Result<()> {
    let n: f64 = axes.iter().map(|a| a.len() as f64).product();
    if n > MAX_GRID_POINTS {
        return Err(Error::InvalidGrid(format!("grid has {n:.0} points, limit is {MAX_GRID_POINTS:.0}")));
    }
    Ok(())
}

/// Visits the cartesian product of `axes` in lexicographic order.
fn for_each_point(axes: &[Vec<f64>], mut f: impl FnMut(&[f64])) {
    if axes.iter().any(|a| a.is_empty()) {
        return;
    }
    let mut idx = vec![0usize; axes.len()];
    let mut point: Vec<f64> = axes.iter().map(|a| a[0]).collect();
    loop {
        f(&point);
        let mut d = axes.len();
        loop {
            if d == 0 {
                return;
            }
            d -= 1;
            idx[d] += 1;
            if idx[d] < axes[d].len() {
                point[d] = axes[d][idx[d]];
                break;
            }
            idx[d] = 0;
            point[d] = axes[d][0];
        }
    }
}

/// Maximizes `u_E` over grid points of the budget set.
///
/// When the satiation point is unaffordable the budget binds at the optimum,
/// so the most expensive good is eliminated and set to exhaust the budget.
/// Otherwise the whole box is gridded and infeasible points are skipped. Ties
/// go to the lexicographically smallest point.
pub fn grid_demand(u: &FuzzyQuadraticUtility, w: &[f64], p: &PriceVector, grid: &GridSpec) -> Result<GridDemand> {
    let l = u.goods();
    if w.len() != l || p.len() != l {
        return Err(Error::DimensionMismatch(format!("utility has {l} goods, endowment {}, price {}", w.len(), p.len())));
    }
    let r = grid.resolution;
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::InvalidGrid(format!("resolution must be positive, got {r}")));
    }
    let prices = p.as_slice();
    let income = p.dot(w);
    let mut bounds = Vec::with_capacity(l);
    for h in 0..l {
        let implied = if prices[h] > 0.0 { Some(income / prices[h]) } else { None };
        let given = grid.bounds.as_ref().map(|b| b.get(h).copied());
        let b = match (implied, given) {
            (_, Some(None)) => {
                return Err(Error::InvalidGrid(format!("bounds must have {l} entries")));
            }
            (Some(i), Some(Some(g))) => i.min(g),
            (Some(i), None) => i,
            (None, Some(Some(g))) => g,
            (None, None) => {
                return Err(Error::InvalidGrid(format!("good {h} is free; an explicit bound is required")));
            }
        };
        bounds.push(b);
    }

    let budget_binds = p.dot(&u.satiation_point()) > income;
    let mut best: Option<(Vec<f64>, f64)> = None;
    let mut evaluated = 0;
    let mut consider = |x: &[f64]| {
        evaluated += 1;
        let v = u.expected_utility_unchecked(x);
        let better = match &best {
            None => true,
            Some((_, bv)) => v > *bv,
        };
        if better {
            best = Some((x.to_vec(), v));
        }
    };

    if budget_binds && l > 1 {
        // Largest price, lowest index among ties.
        let j = (0..l).fold(0, |m, h| if prices[h] > prices[m] { h } else { m });
        let axes: Vec<Vec<f64>> = (0..l).filter(|&h| h != j).map(|h| axis(bounds[h], r)).collect();
        check_size(&axes)?;
        let mut x = vec![0.0; l];
        for_each_point(&axes, |free| {
            let mut spent = 0.0;
            for (k, h) in (0..l).filter(|&h| h != j).enumerate() {
                x[h] = free[k];
                spent += prices[h] * free[k];
            }
            let rest = (income - spent) / prices[j];
            if rest < -1e-12 * (1.0 + income.abs()) {
                return;
            }
            x[j] = rest.max(0.0);
            consider(&x);
        });
    } else {
        let axes: Vec<Vec<f64>> = bounds.iter().map(|&b| axis(b, r)).collect();
        check_size(&axes)?;
        let slack = 1e-12 * (1.0 + income.abs());
        for_each_point(&axes, |x| {
            if p.dot(x) <= income + slack {
                consider(x);
            }
        });
    }

    let (point, value) = best.ok_or_else(|| Error::InvalidGrid("grid has no feasible point".into()))?;
    Ok(GridDemand { point, value, evaluated, budget_reduced: budget_binds && l > 1 })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridEquilibrium {
    pub price: Vec<f64>,
    /// `|⟨p, z⟩| + Σ max(z_h, 0)` at `price`.
    pub score: f64,
    pub index: usize,
    /// Scores at the neighbouring grid prices, when they exist.
    pub neighbor_scores: (Option<f64>, Option<f64>),
    /// `[p₂ − r, p₂ + r] ∩ [0, 1]`.
    pub bracket: (f64, f64),
    pub evaluated: usize,
}

/// Violation score of the equilibrium conditions at `p = (1 − t, t)`.
pub fn violation_score(econ: &Economy, t: f64) -> Result<f64> {
    if econ.goods() != 2 {
        return Err(Error::UnsupportedShape(format!("price scan needs 2 goods, got {}", econ.goods())));
    }
    let p = PriceVector::new(vec![1.0 - t, t]).or_else(|_| PriceVector::normalized(&[1.0 - t, t]))?;
    let mut z = econ.total_endowment().iter().map(|v| -v).collect::<Vec<_>>();
    for i in 0..econ.agents() {
        let (x, _) = demand_two_goods(econ.utility(i), econ.endowment(i), &p)?;
        z[0] += x[0];
        z[1] += x[1];
    }
    Ok(p.dot(&z).abs() + z.iter().map(|v| v.max(0.0)).sum::<f64>())
}

/// Scans `p₂` over `[0, 1]` and returns the price with the lowest violation
/// score, the lowest `p₂` among ties.
pub fn grid_equilibrium(econ: &Economy, resolution: f64) -> Result<GridEquilibrium> {
    if econ.goods() != 2 {
        return Err(Error::UnsupportedShape(format!("price scan needs 2 goods, got {}", econ.goods())));
    }
    if !(resolution > 0.0) || !resolution.is_finite() {
        return Err(Error::InvalidGrid(format!("resolution must be positive, got {resolution}")));
    }
    let ts = axis(1.0, resolution);
    check_size(std::slice::from_ref(&ts))?;
    let scores = ts.iter().map(|&t| violation_score(econ, t)).collect::<Result<Vec<_>>>()?;
    let index = (0..scores.len()).fold(0, |m, k| if scores[k] < scores[m] { k } else { m });
    let t = ts[index];
    Ok(GridEquilibrium {
        price: vec![1.0 - t, t],
        score: scores[index],
        index,
        neighbor_scores: (index.checked_sub(1).map(|k| scores[k]), scores.get(index + 1).copied()),
        bracket: ((t - resolution).max(0.0), (t + resolution).min(1.0)),
        evaluated: ts.len(),
    })
}
