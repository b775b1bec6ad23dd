//! Pure exchange economies whose agents rank bundles with fuzzy utilities.
//!
//! Every agent owns an endowment and a fuzzy quadratic utility
//! `ũ(x) = −Σ q_h x_h² − Σ β_h x_h ± c` with fuzzy coefficients. Comparing
//! fuzzy utilities by expected value reduces each agent's choice to maximizing
//! the crisp concave function `u_E(x) = −Σ E(q_h) x_h² − Σ E(β_h) x_h ± E(c)`
//! over the budget set. An equilibrium is a price on the unit simplex together
//! with an allocation where every agent demands their bundle and no good is
//! over-demanded.

mod closed_form;
mod demand;
mod equilibrium;
mod verify;

pub use closed_form::{closed_form_equilibrium, utility_gain_closed_form, ClosedFormEquilibrium};
pub use demand::{demand, demand_projected, demand_two_goods, DemandRegime, DEFAULT_DEMAND_MAX_ITER};
pub use equilibrium::{
    corner_analysis, excess_demand, market_demands, solve_equilibrium, CornerAnalysis, CornerEval,
    EquilibriumReport, Method, SolverConfig,
};
pub use verify::{verify_equilibrium, Verification};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fuzzy::{FuzzyNumber, Trapezoid};

/// Sign applied to the constant term of a fuzzy quadratic utility.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum ConstSign {
    #[default]
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl ConstSign {
    fn factor(self) -> f64 {
        match self {
            ConstSign::Plus => 1.0,
            ConstSign::Minus => -1.0,
        }
    }
}

/// Fuzzy utility `−̃ Σ quad_h·x_h² −̃ Σ lin_h·x_h ±̃ const`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FuzzyQuadraticUtility {
    pub quad: Vec<FuzzyNumber>,
    pub lin: Vec<FuzzyNumber>,
    #[serde(rename = "const")]
    pub constant: FuzzyNumber,
    #[serde(default)]
    pub const_sign: ConstSign,
}

impl FuzzyQuadraticUtility {
    /// Requires matching lengths and `E(quad_h) > 0` (strict concavity of the
    /// expected utility).
    pub fn new(quad: Vec<FuzzyNumber>, lin: Vec<FuzzyNumber>, constant: FuzzyNumber, const_sign: ConstSign) -> Result<Self> {
        let u = FuzzyQuadraticUtility { quad, lin, constant, const_sign };
        u.validate()?;
        Ok(u)
    }

    /// Skips validation; used to build deliberately non-concave instances.
    pub fn new_unchecked(quad: Vec<FuzzyNumber>, lin: Vec<FuzzyNumber>, constant: FuzzyNumber, const_sign: ConstSign) -> Self {
        FuzzyQuadraticUtility { quad, lin, constant, const_sign }
    }

    /// The two-good family with quadratic coefficients `⌊0,½,½,1⌋` and
    /// `⌊0,⅓,⅔,1⌋`, linear coefficients `⌊2b₁,b₁,b₁,0⌋` and
    /// `⌊2b₂,3b₂/2,b₂/2,0⌋` (`b_h <= 0`), and constant `⌊2c,c,c,0⌋`
    /// (reflected to `⌊0,c,c,2c⌋` when `c > 0`). Its expected utility is
    /// `−½x₁² − ½x₂² − b₁x₁ − b₂x₂ ± c`.
    pub fn example_form(b: [f64; 2], c: f64, sign: ConstSign) -> Result<Self> {
        if b.iter().any(|&v| v > 0.0) {
            return Err(Error::InvalidEconomy(format!("linear coefficients must be <= 0, got {b:?}")));
        }
        let [b1, b2] = b;
        let constant = Trapezoid::new((2.0 * c).min(0.0), c, c, (2.0 * c).max(0.0))?;
        Self::new(
            vec![
                FuzzyNumber::trapezoid(0.0, 0.5, 0.5, 1.0)?,
                FuzzyNumber::trapezoid(0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0)?,
            ],
            vec![
                FuzzyNumber::trapezoid(2.0 * b1, b1, b1, 0.0)?,
                FuzzyNumber::trapezoid(2.0 * b2, 1.5 * b2, 0.5 * b2, 0.0)?,
            ],
            FuzzyNumber::from_trapezoid(constant)?,
            sign,
        )
    }

    pub fn validate(&self) -> Result<()> {
        if self.quad.len() != self.lin.len() {
            return Err(Error::InvalidEconomy(format!(
                "utility has {} quadratic and {} linear coefficients",
                self.quad.len(),
                self.lin.len()
            )));
        }
        for (h, q) in self.quad.iter().enumerate() {
            let e = q.expected_value();
            if !(e > 0.0) {
                return Err(Error::InvalidEconomy(format!(
                    "E(quad[{h}]) = {e} must be positive for strict concavity"
                )));
            }
        }
        Ok(())
    }

    pub fn goods(&self) -> usize {
        self.quad.len()
    }

    /// `E(quad_h)` per good.
    pub fn quad_expected(&self) -> Vec<f64> {
        self.quad.iter().map(FuzzyNumber::expected_value).collect()
    }

    /// `E(lin_h)` per good (the `b_h` of the expected utility).
    pub fn lin_expected(&self) -> Vec<f64> {
        self.lin.iter().map(FuzzyNumber::expected_value).collect()
    }

    /// `±E(c)`.
    pub fn const_expected(&self) -> f64 {
        self.const_sign.factor() * self.constant.expected_value()
    }

    /// Unconstrained maximizer of `u_E` on the non-negative orthant.
    pub fn satiation_point(&self) -> Vec<f64> {
        self.quad_expected()
            .iter()
            .zip(self.lin_expected())
            .map(|(q, b)| (-b / (2.0 * q)).max(0.0))
            .collect()
    }

    fn check_bundle(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.goods() {
            return Err(Error::DimensionMismatch(format!("bundle has {} goods, expected {}", x.len(), self.goods())));
        }
        match x.iter().position(|&v| v < 0.0 || v.is_nan()) {
            Some(good) => Err(Error::NegativeConsumption { good, value: x[good] }),
            None => Ok(()),
        }
    }

    pub fn expected_utility(&self, x: &[f64]) -> Result<f64> {
        self.check_bundle(x)?;
        Ok(self.expected_utility_unchecked(x))
    }

    pub(crate) fn expected_utility_unchecked(&self, x: &[f64]) -> f64 {
        let q = self.quad_expected();
        let b = self.lin_expected();
        let mut u = self.const_expected();
        for h in 0..x.len() {
            u -= q[h] * x[h] * x[h] + b[h] * x[h];
        }
        u
    }

    /// `∇u_E(x) = −2E(q)·x − E(β)`.
    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        self.quad_expected()
            .iter()
            .zip(self.lin_expected())
            .zip(x)
            .map(|((q, b), xh)| -2.0 * q * xh - b)
            .collect()
    }

    /// The fuzzy polynomial itself, assembled with fuzzy arithmetic.
    pub fn fuzzy_utility(&self, x: &[f64]) -> Result<FuzzyNumber> {
        self.check_bundle(x)?;
        let mut acc = FuzzyNumber::crisp(0.0);
        for (q, &xh) in self.quad.iter().zip(x) {
            acc = acc.subtract(&q.scale(xh * xh));
        }
        for (b, &xh) in self.lin.iter().zip(x) {
            acc = acc.subtract(&b.scale(xh));
        }
        Ok(match self.const_sign {
            ConstSign::Plus => acc.add(&self.constant),
            ConstSign::Minus => acc.subtract(&self.constant),
        })
    }
}

/// Samples `λ = k/(samples−1)` and checks
/// `u_E(λx + (1−λ)y) >= min(u_E(x), u_E(y))` up to a relative `1e-12`.
pub fn is_quasi_concave_on_segment(u: &FuzzyQuadraticUtility, x: &[f64], y: &[f64], samples: usize) -> bool {
    let samples = samples.max(3);
    let ux = u.expected_utility_unchecked(x);
    let uy = u.expected_utility_unchecked(y);
    let floor = ux.min(uy);
    let tol = 1e-12 * (1.0 + floor.abs());
    (0..samples).all(|k| {
        let lambda = k as f64 / (samples - 1) as f64;
        let z: Vec<f64> = x.iter().zip(y).map(|(a, b)| lambda * a + (1.0 - lambda) * b).collect();
        u.expected_utility_unchecked(&z) >= floor - tol
    })
}

/// Normalized price vector on the unit simplex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct PriceVector(Vec<f64>);

impl PriceVector {
    /// Requires non-negative entries summing to one within `1e-12`.
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::InvalidPrice("empty price vector".into()));
        }
        if p.iter().any(|&v| !(v >= 0.0) || !v.is_finite()) {
            return Err(Error::InvalidPrice(format!("prices must be finite and non-negative: {p:?}")));
        }
        let total: f64 = p.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidPrice(format!("prices sum to {total}, expected 1")));
        }
        Ok(PriceVector(p))
    }

    /// Rescales a non-negative, non-zero vector onto the simplex.
    pub fn normalized(p: &[f64]) -> Result<Self> {
        let total: f64 = p.iter().sum();
        if p.iter().any(|&v| !(v >= 0.0)) || !(total > 0.0) || !total.is_finite() {
            return Err(Error::InvalidPrice(format!("cannot normalize {p:?}")));
        }
        let mut v: Vec<f64> = p.iter().map(|x| x / total).collect();
        // Put the rounding slack on the largest coordinate.
        let slack = 1.0 - v.iter().sum::<f64>();
        if let Some(m) = v.iter_mut().max_by(|a, b| a.total_cmp(b)) {
            *m += slack;
        }
        Ok(PriceVector(v))
    }

    pub fn uniform(l: usize) -> Self {
        PriceVector(vec![1.0 / l as f64; l])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn dot(&self, x: &[f64]) -> f64 {
        self.0.iter().zip(x).map(|(a, b)| a * b).sum()
    }
}

impl TryFrom<Vec<f64>> for PriceVector {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        PriceVector::new(v)
    }
}

impl From<PriceVector> for Vec<f64> {
    fn from(p: PriceVector) -> Self {
        p.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "EconomyRepr", into = "EconomyRepr")]
pub struct Economy {
    endowments: Vec<Vec<f64>>,
    utilities: Vec<FuzzyQuadraticUtility>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EconomyRepr {
    goods: usize,
    agents: usize,
    endowments: Vec<Vec<f64>>,
    utilities: Vec<FuzzyQuadraticUtility>,
}

impl TryFrom<EconomyRepr> for Economy {
    type Error = Error;
    fn try_from(r: EconomyRepr) -> Result<Self> {
        let econ = Economy::new(r.endowments, r.utilities)?;
        if econ.goods() != r.goods || econ.agents() != r.agents {
            return Err(Error::InvalidEconomy(format!(
                "declared {} goods and {} agents but data has {} and {}",
                r.goods,
                r.agents,
                econ.goods(),
                econ.agents()
            )));
        }
        Ok(econ)
    }
}

impl From<Economy> for EconomyRepr {
    fn from(e: Economy) -> Self {
        EconomyRepr { goods: e.goods(), agents: e.agents(), endowments: e.endowments, utilities: e.utilities }
    }
}

impl Economy {
    /// Validates shapes, `l >= 2`, `m >= 1`, non-negative endowments with at
    /// least one positive entry per agent, and strictly concave utilities.
    pub fn new(endowments: Vec<Vec<f64>>, utilities: Vec<FuzzyQuadraticUtility>) -> Result<Self> {
        let invalid = |m: String| Err(Error::InvalidEconomy(m));
        let m = endowments.len();
        if m == 0 {
            return invalid("at least one agent is required".into());
        }
        let l = endowments[0].len();
        if l < 2 {
            return invalid(format!("at least two goods are required, got {l}"));
        }
        if utilities.len() != m {
            return invalid(format!("{} utilities for {m} agents", utilities.len()));
        }
        for (i, (w, u)) in endowments.iter().zip(&utilities).enumerate() {
            if w.len() != l {
                return invalid(format!("agent {i} endowment has {} goods, expected {l}", w.len()));
            }
            if w.iter().any(|&v| !(v >= 0.0) || !v.is_finite()) {
                return invalid(format!("agent {i} endowment must be finite and non-negative"));
            }
            if !w.iter().any(|&v| v > 0.0) {
                return invalid(format!("agent {i} must be endowed with a positive quantity of some good"));
            }
            if u.goods() != l {
                return invalid(format!("agent {i} utility covers {} goods, expected {l}", u.goods()));
            }
            u.validate().map_err(|e| Error::InvalidEconomy(format!("agent {i}: {e}")))?;
        }
        Ok(Economy { endowments, utilities })
    }

    /// Two-good economy whose agents all use [`FuzzyQuadraticUtility::example_form`].
    pub fn example_form(endowments: Vec<[f64; 2]>, b: Vec<[f64; 2]>, c: Vec<f64>) -> Result<Self> {
        if b.len() != endowments.len() || c.len() != endowments.len() {
            return Err(Error::InvalidEconomy("coefficient lists must have one entry per agent".into()));
        }
        let utilities = b
            .iter()
            .zip(&c)
            .map(|(&bi, &ci)| FuzzyQuadraticUtility::example_form(bi, ci, ConstSign::Plus))
            .collect::<Result<Vec<_>>>()?;
        Economy::new(endowments.into_iter().map(|w| w.to_vec()).collect(), utilities)
    }

    /// The two-agent, two-good reference instance: endowments `(1,2)`, `(3,1)`
    /// and linear coefficients `(−5,−4)`, `(−6,−3)`.
    pub fn reference() -> Self {
        Economy::example_form(vec![[1.0, 2.0], [3.0, 1.0]], vec![[-5.0, -4.0], [-6.0, -3.0]], vec![0.0, 0.0])
            .expect("reference instance is valid")
    }

    pub fn goods(&self) -> usize {
        self.endowments[0].len()
    }

    pub fn agents(&self) -> usize {
        self.endowments.len()
    }

    pub fn endowments(&self) -> &[Vec<f64>] {
        &self.endowments
    }

    pub fn endowment(&self, agent: usize) -> &[f64] {
        &self.endowments[agent]
    }

    pub fn utilities(&self) -> &[FuzzyQuadraticUtility] {
        &self.utilities
    }

    pub fn utility(&self, agent: usize) -> &FuzzyQuadraticUtility {
        &self.utilities[agent]
    }

    pub fn total_endowment(&self) -> Vec<f64> {
        let mut total = vec![0.0; self.goods()];
        for w in &self.endowments {
            for (t, v) in total.iter_mut().zip(w) {
                *t += v;
            }
        }
        total
    }

    /// `(agent, good)` pairs where the satiation level does not exceed the
    /// endowment, i.e. the boundary-gradient assumption `−b_ih > w_ih` (for
    /// the example family) fails. Empty when the assumption holds.
    pub fn nonsatiation_violations(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, (u, w)) in self.utilities.iter().zip(&self.endowments).enumerate() {
            for (h, (s, wh)) in u.satiation_point().iter().zip(w).enumerate() {
                if !(s > wh) {
                    out.push((i, h));
                }
            }
        }
        out
    }

    /// Returns a copy with every agent's constant sign replaced.
    pub fn with_const_sign(&self, sign: ConstSign) -> Economy {
        let mut e = self.clone();
        for u in &mut e.utilities {
            u.const_sign = sign;
        }
        e
    }
}
