use serde::{Deserialize, Serialize};

use super::{demand, Economy, PriceVector};
use crate::error::{Error, Result};

/// Residuals of the three equilibrium conditions at a candidate `(p, x)`.
///
/// * Condition (1): every agent's bundle is affordable and optimal,
///   `u_E(demand_i(p)) − u_E(x_i) <= tol` and `⟨p, x_i − w_i⟩ <= tol`.
/// * Condition (2): `p` lies on the unit simplex.
/// * Condition (3): `z <= tol` elementwise and `|⟨p, z⟩| <= tol`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verification {
    pub tolerance: f64,
    pub excess_demand: Vec<f64>,
    /// `u_E(demand_i(p)) − u_E(x_i)` per agent.
    pub optimality_gaps: Vec<f64>,
    /// `⟨p, x_i − w_i⟩` per agent.
    pub budget_balance: Vec<f64>,
    /// Most negative consumption entry (0 when the allocation is non-negative).
    pub min_consumption: f64,
    /// `|Σp − 1|` plus the magnitude of any negative price.
    pub simplex_residual: f64,
    pub max_excess: f64,
    /// `max_h |z_h|`.
    pub clearing: f64,
    /// `⟨p, z⟩`.
    pub complementarity: f64,
    pub condition1: bool,
    pub condition2: bool,
    pub condition3: bool,
}

impl Verification {
    pub fn passed(&self) -> bool {
        self.condition1 && self.condition2 && self.condition3
    }
}

/// Checks a candidate equilibrium against the three conditions.
pub fn verify_equilibrium(econ: &Economy, p: &[f64], x: &[Vec<f64>], tol: f64) -> Result<Verification> {
    let (l, m) = (econ.goods(), econ.agents());
    if p.len() != l {
        return Err(Error::DimensionMismatch(format!("price has {} entries, expected {l}", p.len())));
    }
    if x.len() != m || x.iter().any(|xi| xi.len() != l) {
        return Err(Error::DimensionMismatch(format!("allocation must be {m}x{l}")));
    }
    let sum: f64 = p.iter().sum();
    let negative: f64 = p.iter().map(|&v| (-v).max(0.0)).sum();
    let simplex_residual = (sum - 1.0).abs() + negative;
    let condition2 = simplex_residual <= tol;

    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(u, v)| u * v).sum::<f64>();
    let min_consumption = x.iter().flatten().fold(0.0_f64, |m, &v| m.min(v));

    // Optimality is measured against demand at the normalized price so that a
    // slightly off-simplex candidate is still judged on Condition (1).
    let demand_price = if p.iter().all(|&v| v >= 0.0) && sum > 0.0 {
        Some(PriceVector::normalized(p)?)
    } else {
        None
    };
    let mut optimality_gaps = Vec::with_capacity(m);
    let mut budget_balance = Vec::with_capacity(m);
    for i in 0..m {
        let u = econ.utility(i);
        let w = econ.endowment(i);
        let gap = match &demand_price {
            Some(dp) => {
                let best = demand(u, w, dp, super::equilibrium::DEMAND_TOL)?;
                u.expected_utility_unchecked(&best) - u.expected_utility_unchecked(&x[i])
            }
            None => f64::INFINITY,
        };
        optimality_gaps.push(gap);
        let diff: Vec<f64> = x[i].iter().zip(w).map(|(a, b)| a - b).collect();
        budget_balance.push(dot(p, &diff));
    }
    let condition1 = min_consumption >= -tol
        && optimality_gaps.iter().all(|&g| g <= tol)
        && budget_balance.iter().all(|&b| b <= tol);

    let total = econ.total_endowment();
    let excess_demand: Vec<f64> = (0..l).map(|h| x.iter().map(|xi| xi[h]).sum::<f64>() - total[h]).collect();
    let max_excess = excess_demand.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let clearing = excess_demand.iter().fold(0.0_f64, |m, z| m.max(z.abs()));
    let complementarity = dot(p, &excess_demand);
    let condition3 = max_excess <= tol && complementarity.abs() <= tol;

    Ok(Verification {
        tolerance: tol,
        excess_demand,
        optimality_gaps,
        budget_balance,
        min_consumption,
        simplex_residual,
        max_excess,
        clearing,
        complementarity,
        condition1,
        condition2,
        condition3,
    })
}
