//! Price determination.
//!
//! An equilibrium solves the quasi-variational inequality
//!
//! ```text
//! Σ_i ⟨−∇u_E^i(x̄_i), x_i − x̄_i⟩ − ⟨Σ_i (x̄_i − w_i), p − p̄⟩ >= 0
//! ```
//!
//! for all `p` on the simplex and `x_i` in the budget sets at `p̄`. It splits
//! into one inner problem per agent (solved by [`demand`]) and a price problem
//! `⟨−z(p̄), p − p̄⟩ >= 0`, i.e. `p̄` maximizes `⟨p, z(p̄)⟩` on the simplex.
//! Three solvers are offered: projected excess-demand ascent, bisection on
//! `z₁ − z₂` for two goods, and the explicit formula for the example family.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::closed_form::closed_form_equilibrium;
use super::verify::{verify_equilibrium, Verification};
use super::{demand, demand_two_goods, DemandRegime, Economy, PriceVector};
use crate::error::{Error, Result};
use crate::simplex::project_simplex;

pub(crate) const DEMAND_TOL: f64 = 1e-10;
const ASCENT_MARGIN: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Ascent,
    Bisect,
    ClosedForm,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Ascent => "ascent",
            Method::Bisect => "bisect",
            Method::ClosedForm => "closed-form",
        })
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ascent" => Ok(Method::Ascent),
            "bisect" => Ok(Method::Bisect),
            "closed-form" => Ok(Method::ClosedForm),
            other => Err(Error::UnsupportedShape(format!("unknown method {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub method: Method,
    /// Stationarity tolerance of the iterative demand solver.
    pub demand_tol: f64,
    /// Bound on `|⟨p, z⟩|`.
    pub complementarity_tol: f64,
    /// Bound on `max z`, the price-VI residual and per-agent optimality gaps.
    pub clearing_tol: f64,
    pub max_iter: usize,
    /// First ascent step `τ`; halved whenever the residual regresses.
    pub initial_step: f64,
    /// Seeds the random feasible points used for the QVI spot check.
    pub seed: u64,
    pub qvi_samples: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            method: Method::Ascent,
            demand_tol: DEMAND_TOL,
            complementarity_tol: 1e-8,
            clearing_tol: 1e-8,
            max_iter: 100_000,
            initial_step: 1.0,
            seed: 0x5eed,
            qvi_samples: 256,
        }
    }
}

/// Demand and excess demand at one of the two corner prices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CornerEval {
    pub price: Vec<f64>,
    pub demands: Vec<Vec<f64>>,
    pub excess_demand: Vec<f64>,
    pub z1_minus_z2: f64,
    /// Whether this corner satisfies `(z₁ − z₂)(p₂ − p̄₂) >= 0` for all `p₂`.
    pub solves_price_inequality: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CornerAnalysis {
    /// `p = (0, 1)`: an equilibrium only if `z₁ − z₂ <= 0`.
    pub free_first: CornerEval,
    /// `p = (1, 0)`: an equilibrium only if `z₁ − z₂ >= 0`.
    pub free_second: CornerEval,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumReport {
    pub method: Method,
    pub price: Vec<f64>,
    pub allocation: Vec<Vec<f64>>,
    pub excess_demand: Vec<f64>,
    pub residuals: Verification,
    /// `‖p − Π_P(p + z)‖∞`, zero exactly when `p` solves the price inequality.
    pub price_vi_residual: f64,
    /// Smallest QVI left-hand side over random feasible `(p, x)`.
    pub qvi_min_lhs: f64,
    pub iterations: usize,
    pub converged: bool,
    pub corners: Option<CornerAnalysis>,
    #[serde(default)]
    pub warnings: Vec<String>,
}

/// Demand of every agent at `p`.
pub fn market_demands(econ: &Economy, p: &PriceVector, tol: f64) -> Result<Vec<Vec<f64>>> {
    (0..econ.agents()).map(|i| demand(econ.utility(i), econ.endowment(i), p, tol)).collect()
}

/// `z_h = Σ_i (demand_i(p)_h − w_ih)`.
pub fn excess_demand(econ: &Economy, p: &PriceVector, tol: f64) -> Result<Vec<f64>> {
    let x = market_demands(econ, p, tol)?;
    Ok(aggregate_excess(econ, &x))
}

fn aggregate_excess(econ: &Economy, x: &[Vec<f64>]) -> Vec<f64> {
    let total = econ.total_endowment();
    (0..econ.goods()).map(|h| x.iter().map(|xi| xi[h]).sum::<f64>() - total[h]).collect()
}

fn vi_residual(p: &[f64], z: &[f64]) -> f64 {
    let step: Vec<f64> = p.iter().zip(z).map(|(a, b)| a + b).collect();
    project_simplex(&step).iter().zip(p).fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()))
}

/// Evaluates both corner prices of a two-good economy.
pub fn corner_analysis(econ: &Economy, tol: f64) -> Result<CornerAnalysis> {
    if econ.goods() != 2 {
        return Err(Error::UnsupportedShape("corner analysis needs 2 goods".into()));
    }
    let eval = |p: [f64; 2], want_nonpositive: bool| -> Result<CornerEval> {
        let price = PriceVector::new(p.to_vec())?;
        let demands = market_demands(econ, &price, tol)?;
        let z = aggregate_excess(econ, &demands);
        let diff = z[0] - z[1];
        let ok = if want_nonpositive { diff <= 0.0 } else { diff >= 0.0 };
        Ok(CornerEval { price: p.to_vec(), demands, excess_demand: z, z1_minus_z2: diff, solves_price_inequality: ok })
    };
    Ok(CornerAnalysis { free_first: eval([0.0, 1.0], true)?, free_second: eval([1.0, 0.0], false)? })
}

struct Iterate {
    price: Vec<f64>,
    allocation: Vec<Vec<f64>>,
    iterations: usize,
}

pub fn solve_equilibrium(econ: &Economy, cfg: &SolverConfig) -> Result<EquilibriumReport> {
    let it = match cfg.method {
        Method::Ascent => ascent(econ, cfg)?,
        Method::Bisect => bisect(econ, cfg)?,
        Method::ClosedForm => {
            let eq = closed_form_equilibrium(econ)?;
            Iterate { price: eq.price.into(), allocation: eq.allocation, iterations: 0 }
        }
    };
    let tol = cfg.clearing_tol;
    let mut residuals = verify_equilibrium(econ, &it.price, &it.allocation, tol)?;
    residuals.condition3 = residuals.max_excess <= cfg.clearing_tol
        && residuals.complementarity.abs() <= cfg.complementarity_tol;
    let price_vi_residual = vi_residual(&it.price, &residuals.excess_demand);
    let qvi_min_lhs = qvi_spot_check(econ, &it.price, &it.allocation, &residuals.excess_demand, cfg);
    let corners = if econ.goods() == 2 { Some(corner_analysis(econ, cfg.demand_tol)?) } else { None };
    let converged = residuals.passed() && price_vi_residual <= tol;
    let warnings = econ
        .nonsatiation_violations()
        .into_iter()
        .map(|(i, h)| format!("agent {i}, good {h}: satiation level does not exceed the endowment"))
        .collect();
    Ok(EquilibriumReport {
        method: cfg.method,
        excess_demand: residuals.excess_demand.clone(),
        price: it.price,
        allocation: it.allocation,
        residuals,
        price_vi_residual,
        qvi_min_lhs,
        iterations: it.iterations,
        converged,
        corners,
        warnings,
    })
}

/// Projected ascent `p ← Π_P(p + τ z(p))`, halving `τ` when the price-VI
/// residual does not decrease.
fn ascent(econ: &Economy, cfg: &SolverConfig) -> Result<Iterate> {
    let l = econ.goods();
    let mut p = PriceVector::uniform(l);
    let mut x = market_demands(econ, &p, cfg.demand_tol)?;
    let mut z = aggregate_excess(econ, &x);
    let mut merit = vi_residual(p.as_slice(), &z);
    let mut tau = cfg.initial_step;
    let mut iterations = 0;
    while iterations < cfg.max_iter {
        // Aim below the reported tolerances so every residual clears them.
        let done = merit <= ASCENT_MARGIN * cfg.clearing_tol
            && z.iter().all(|&v| v <= ASCENT_MARGIN * cfg.clearing_tol)
            && p.dot(&z).abs() <= ASCENT_MARGIN * cfg.complementarity_tol;
        if done || tau < 1e-300 {
            break;
        }
        iterations += 1;
        let raw: Vec<f64> = p.as_slice().iter().zip(&z).map(|(a, b)| a + tau * b).collect();
        let cand = PriceVector::normalized(&project_simplex(&raw))?;
        let cx = market_demands(econ, &cand, cfg.demand_tol)?;
        let cz = aggregate_excess(econ, &cx);
        let cm = vi_residual(cand.as_slice(), &cz);
        if cm > merit {
            tau *= 0.5;
            continue;
        }
        p = cand;
        x = cx;
        z = cz;
        merit = cm;
    }
    Ok(Iterate { price: p.into(), allocation: x, iterations })
}

/// Bisection on `t = p₂` for `z₁ − z₂ = 0` with `p = (1 − t, t)`.
fn bisect(econ: &Economy, cfg: &SolverConfig) -> Result<Iterate> {
    if econ.goods() != 2 {
        return Err(Error::UnsupportedShape(format!("bisection needs 2 goods, got {}", econ.goods())));
    }
    let gap = |t: f64| -> Result<(f64, Vec<Vec<f64>>)> {
        let p = PriceVector::new(vec![1.0 - t, t]).or_else(|_| PriceVector::normalized(&[1.0 - t, t]))?;
        let x = (0..econ.agents())
            .map(|i| demand_two_goods(econ.utility(i), econ.endowment(i), &p).map(|(d, _): (Vec<f64>, DemandRegime)| d))
            .collect::<Result<Vec<_>>>()?;
        let z = aggregate_excess(econ, &x);
        Ok((z[0] - z[1], x))
    };
    let (g_lo, x_lo) = gap(0.0)?;
    if g_lo >= 0.0 {
        return Ok(Iterate { price: vec![1.0, 0.0], allocation: x_lo, iterations: 0 });
    }
    let (g_hi, x_hi) = gap(1.0)?;
    if g_hi <= 0.0 {
        return Ok(Iterate { price: vec![0.0, 1.0], allocation: x_hi, iterations: 0 });
    }
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    let mut iterations = 0;
    let mut best = (f64::INFINITY, 0.5, x_lo);
    while iterations < cfg.max_iter.min(200) {
        iterations += 1;
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let (g, x) = gap(mid)?;
        if g.abs() < best.0 {
            best = (g.abs(), mid, x);
        }
        if g == 0.0 {
            break;
        }
        if g < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (_, t, x) = best;
    let price = PriceVector::normalized(&[1.0 - t, t])?;
    Ok(Iterate { price: price.into(), allocation: x, iterations })
}

/// Draws random `(p, x)` with `p` on the simplex and each `x_i` in the budget
/// set at `p̄`, and returns the smallest QVI left-hand side.
fn qvi_spot_check(econ: &Economy, p: &[f64], x: &[Vec<f64>], z: &[f64], cfg: &SolverConfig) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let l = econ.goods();
    let mut worst = f64::INFINITY;
    for _ in 0..cfg.qvi_samples {
        let raw: Vec<f64> = (0..l).map(|_| -rng.gen::<f64>().max(f64::MIN_POSITIVE).ln()).collect();
        let total: f64 = raw.iter().sum();
        let q: Vec<f64> = raw.iter().map(|v| v / total).collect();
        let mut lhs = -z.iter().zip(q.iter().zip(p)).map(|(zh, (qh, ph))| zh * (qh - ph)).sum::<f64>();
        for (i, xi) in x.iter().enumerate() {
            let w = econ.endowment(i);
            let income: f64 = p.iter().zip(w).map(|(a, b)| a * b).sum();
            // Uniform direction scaled to a random fraction of the budget.
            let dir: Vec<f64> = (0..l).map(|_| rng.gen::<f64>()).collect();
            let cost: f64 = dir.iter().zip(p).map(|(a, b)| a * b).sum();
            let frac: f64 = rng.gen();
            let cand: Vec<f64> = if cost > 0.0 {
                dir.iter().map(|d| d * frac * income / cost).collect()
            } else {
                dir
            };
            let grad = econ.utility(i).gradient(xi);
            lhs += grad.iter().zip(cand.iter().zip(xi)).map(|(g, (c, xb))| -g * (c - xb)).sum::<f64>();
        }
        worst = worst.min(lhs);
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(method: Method) -> SolverConfig {
        SolverConfig { method, ..SolverConfig::default() }
    }

    #[test]
    fn all_methods_find_reference_price() {
        for method in [Method::Ascent, Method::Bisect, Method::ClosedForm] {
            let report = solve_equilibrium(&Economy::reference(), &cfg(method)).unwrap();
            assert!(report.converged, "{method}: {report:?}");
            assert!((report.price[0] - 7.0 / 11.0).abs() < 1e-9, "{method}: {:?}", report.price);
        }
    }

    #[test]
    fn symmetric_instance_has_equal_prices() {
        let econ = Economy::example_form(vec![[1.0, 2.0], [2.0, 1.0]], vec![[-5.0, -5.0], [-5.0, -5.0]], vec![0.0, 0.0]).unwrap();
        for method in [Method::Ascent, Method::Bisect, Method::ClosedForm] {
            let report = solve_equilibrium(&econ, &cfg(method)).unwrap();
            assert!((report.price[0] - 0.5).abs() < 1e-9, "{method}");
        }
    }

    #[test]
    fn corners_are_rejected_on_reference() {
        let c = corner_analysis(&Economy::reference(), DEMAND_TOL).unwrap();
        assert_eq!(c.free_first.z1_minus_z2, 7.0);
        assert!(!c.free_first.solves_price_inequality);
        assert_eq!(c.free_second.z1_minus_z2, -4.0);
        assert!(!c.free_second.solves_price_inequality);
    }

    #[test]
    fn single_agent_satisfies_walras_inequality() {
        let econ = Economy::example_form(vec![[2.0, 1.0]], vec![[-1.0, -6.0]], vec![0.0]).unwrap();
        for p in [[0.2, 0.8], [0.5, 0.5], [0.9, 0.1]] {
            let p = PriceVector::new(p.to_vec()).unwrap();
            let z = excess_demand(&econ, &p, DEMAND_TOL).unwrap();
            assert!(p.dot(&z) <= 1e-12);
        }
    }

    #[test]
    fn ascent_reports_non_convergence() {
        let c = SolverConfig { max_iter: 2, ..cfg(Method::Ascent) };
        let report = solve_equilibrium(&Economy::reference(), &c).unwrap();
        assert!(!report.converged);
        assert_eq!(report.iterations, 2);
    }

    #[test]
    fn satiated_agent_warns() {
        let econ = Economy::example_form(vec![[6.0, 1.0], [1.0, 1.0]], vec![[-5.0, -4.0], [-6.0, -3.0]], vec![0.0, 0.0]).unwrap();
        let report = solve_equilibrium(&econ, &cfg(Method::Bisect)).unwrap();
        assert_eq!(report.warnings.len(), 1);
        assert!(solve_equilibrium(&econ, &cfg(Method::ClosedForm)).is_err());
    }

    #[test]
    fn method_parsing() {
        assert_eq!("closed-form".parse::<Method>().unwrap(), Method::ClosedForm);
        assert!("newton".parse::<Method>().is_err());
    }
}
