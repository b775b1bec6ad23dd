//! Explicit equilibrium of two-good economies in the example family
//! (`u_E = −½x₁² − ½x₂² − b₁x₁ − b₂x₂ ± c`).
//!
//! With `A = Σ_i (w_i1 + b_i1)` and `B = Σ_i (w_i2 + b_i2)` the price is
//! `(A/(A+B), B/(A+B))` and agent `i` receives
//!
//! ```text
//! x_i1 = [w_i1 A² + (w_i2 + b_i2) AB − b_i1 B²] / (A² + B²)
//! x_i2 = [w_i2 B² + (w_i1 + b_i1) AB − b_i2 A²] / (A² + B²)
//! ```
//!
//! provided every agent's interior-demand brackets stay non-negative at that
//! price.

use serde::{Deserialize, Serialize};

use super::{Economy, PriceVector};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormEquilibrium {
    pub price: PriceVector,
    pub allocation: Vec<Vec<f64>>,
    /// `Σ_i (w_i1 + b_i1)`.
    pub a: f64,
    /// `Σ_i (w_i2 + b_i2)`.
    pub b: f64,
}

const HALF_TOL: f64 = 1e-12;

fn check_family(econ: &Economy) -> Result<()> {
    let unsupported = |m: String| Err(Error::UnsupportedShape(m));
    if econ.goods() != 2 {
        return unsupported(format!("closed form needs 2 goods, got {}", econ.goods()));
    }
    for (i, u) in econ.utilities().iter().enumerate() {
        if u.quad_expected().iter().any(|q| (q - 0.5).abs() > HALF_TOL) {
            return unsupported(format!("agent {i}: closed form needs E(quad) = 1/2 for both goods"));
        }
    }
    if let Some(&(i, h)) = econ.nonsatiation_violations().first() {
        return unsupported(format!("agent {i}, good {h}: closed form needs -b_ih > w_ih"));
    }
    Ok(())
}

fn aggregates(econ: &Economy) -> (f64, f64) {
    let mut a = 0.0;
    let mut b = 0.0;
    for (w, u) in econ.endowments().iter().zip(econ.utilities()) {
        let lin = u.lin_expected();
        a += w[0] + lin[0];
        b += w[1] + lin[1];
    }
    (a, b)
}

pub fn closed_form_equilibrium(econ: &Economy) -> Result<ClosedFormEquilibrium> {
    check_family(econ)?;
    let (a, b) = aggregates(econ);
    // Nonsatiation makes A and B strictly negative.
    if !(a < 0.0 && b < 0.0) {
        return Err(Error::UnsupportedShape(format!("expected A < 0 and B < 0, got A = {a}, B = {b}")));
    }
    let price = PriceVector::normalized(&[a, b].map(|v| -v))?;
    let ratio = a / b;
    let norm = a * a + b * b;
    let mut allocation = Vec::with_capacity(econ.agents());
    for (i, (w, u)) in econ.endowments().iter().zip(econ.utilities()).enumerate() {
        let lin = u.lin_expected();
        let first = w[0] * ratio * ratio + (w[1] + lin[1]) * ratio - lin[0];
        let second = w[1] / (ratio * ratio) + (w[0] + lin[0]) / ratio - lin[1];
        if first < 0.0 || second < 0.0 {
            return Err(Error::UnsupportedShape(format!(
                "agent {i}: demand at the closed-form price is not interior"
            )));
        }
        allocation.push(vec![
            (w[0] * a * a + (w[1] + lin[1]) * a * b - lin[0] * b * b) / norm,
            (w[1] * b * b + (w[0] + lin[0]) * a * b - lin[1] * a * a) / norm,
        ]);
    }
    Ok(ClosedFormEquilibrium { price, allocation, a, b })
}

/// `E(ũ_i(x̄_i)) − E(ũ_i(w_i)) = [(w_i1 + b_i1)B − (w_i2 + b_i2)A]² / (2(A² + B²))`
/// for two-agent, two-good example-family economies.
pub fn utility_gain_closed_form(econ: &Economy, agent: usize) -> Result<f64> {
    if econ.agents() != 2 {
        return Err(Error::UnsupportedShape(format!("closed-form gain needs 2 agents, got {}", econ.agents())));
    }
    if agent >= econ.agents() {
        return Err(Error::IndexOutOfRange { index: agent, len: econ.agents() });
    }
    // Also checks the interior conditions.
    let eq = closed_form_equilibrium(econ)?;
    let w = econ.endowment(agent);
    let lin = econ.utility(agent).lin_expected();
    let num = (w[0] + lin[0]) * eq.b - (w[1] + lin[1]) * eq.a;
    Ok(num * num / (2.0 * (eq.a * eq.a + eq.b * eq.b)))
}
