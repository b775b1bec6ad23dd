use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use fuzzyeq_core::economy::demand;
use fuzzyeq_core::oracle::{grid_demand, grid_equilibrium, GridEquilibrium, GridSpec};
use fuzzyeq_core::{
    fuzzy_max, solve_equilibrium, verify_equilibrium, Economy, EquilibriumReport, FuzzyGame, FuzzyNumber,
    FuzzyRelation, MixedNashSolution, MixedProfile, NashReport, PriceVector, Verification,
};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::args::Matrix;
use crate::defaults;
use crate::render::{condition_lines, num, vector, vector_with_hint};

/// Rendered result of one command.
pub struct Output {
    pub text: String,
    pub json: String,
    pub exit: u8,
}

/// Everything that ends a run with an invalid-input exit.
#[derive(Debug)]
pub struct InputError(pub String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

type Result<T> = std::result::Result<T, InputError>;

/// Machine-readable record: run metadata plus the command's result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record<T> {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub input: String,
    pub settings: Settings,
    pub result: T,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Settings {
    pub tol: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iter: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolution: Option<f64>,
}

fn record<T: Serialize>(command: &str, input: &Path, settings: Settings, result: T) -> Result<String> {
    let r = Record {
        tool: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        command: command.to_string(),
        input: input.display().to_string(),
        settings,
        result,
    };
    Ok(serde_json::to_string_pretty(&r)? + "\n")
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

pub fn load<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = read(path)?;
    serde_json::from_str(&text).map_err(|e| InputError(format!("{}:{}:{}: {e}", path.display(), e.line(), e.column())))
}

fn check_tol(tol: f64) -> Result<f64> {
    if tol > 0.0 && tol.is_finite() {
        Ok(tol)
    } else {
        Err(InputError(format!("tolerance must be positive, got {tol}")))
    }
}

// ---- fuzzy ----

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NumberSummary {
    pub name: String,
    pub number: FuzzyNumber,
    pub expected_value: f64,
    pub support: (f64, f64),
    pub core: (f64, f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InspectResult {
    pub numbers: Vec<NumberSummary>,
    /// Indices from largest to smallest expected value, ties by index.
    pub ranking: Vec<usize>,
    pub maximum: usize,
    pub sum: FuzzyNumber,
}

pub fn fuzzy_inspect(file: &Path, tol: Option<f64>) -> Result<Output> {
    let tol = check_tol(tol.unwrap_or(defaults::COMPARE_TOL))?;
    // A list is named by position; an object by its keys.
    let named: Vec<(String, FuzzyNumber)> = if read(file)?.trim_start().starts_with('[') {
        let list: Vec<FuzzyNumber> = load(file)?;
        list.into_iter().enumerate().map(|(i, f)| (i.to_string(), f)).collect()
    } else {
        load::<BTreeMap<String, FuzzyNumber>>(file)?.into_iter().collect()
    };
    let values: Vec<FuzzyNumber> = named.iter().map(|(_, f)| f.clone()).collect();
    let (maximum, _) = fuzzy_max(&values)?;
    let mut ranking: Vec<usize> = (0..values.len()).collect();
    ranking.sort_by(|&a, &b| values[b].expected_value().total_cmp(&values[a].expected_value()).then(a.cmp(&b)));
    let numbers: Vec<NumberSummary> = named
        .into_iter()
        .map(|(name, number)| NumberSummary {
            expected_value: number.expected_value(),
            support: number.support(),
            core: number.core(),
            name,
            number,
        })
        .collect();
    let result = InspectResult { ranking, maximum, sum: fuzzyeq_core::fuzzy_sum(&values), numbers };

    let mut text = String::new();
    for n in &result.numbers {
        writeln!(
            text,
            "{:<12} E = {:<14} support [{}, {}]  core [{}, {}]  {}",
            n.name,
            num(n.expected_value),
            num(n.support.0),
            num(n.support.1),
            num(n.core.0),
            num(n.core.1),
            n.number
        )?;
    }
    let order: Vec<&str> = result.ranking.iter().map(|&i| result.numbers[i].name.as_str()).collect();
    writeln!(text, "ranking      {}", order.join(" ≽ "))?;
    writeln!(text, "maximum      {}", result.numbers[result.maximum].name)?;
    writeln!(text, "sum          {}  (E = {})", result.sum, num(result.sum.expected_value()))?;
    let json = record("fuzzy inspect", file, Settings { tol, ..Settings::default() }, &result)?;
    Ok(Output { text, json, exit: 0 })
}

// ---- preference ----

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreferenceResult {
    pub consistent: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<[usize; 3]>,
    /// Labels per indifference class, least preferred first.
    pub classes: Vec<Vec<String>>,
    pub utility: Vec<(String, FuzzyNumber)>,
}

pub fn preference_check(file: &Path, tol: Option<f64>) -> Result<Output> {
    let tol = check_tol(tol.unwrap_or(defaults::COMPARE_TOL))?;
    let rel: FuzzyRelation = load(file)?;
    let label = |i: usize| rel.elements()[i].to_string();
    let witness = rel.consistency_witness(tol);
    let mut text = String::new();
    let result = match witness {
        Some((x, y, z)) => {
            writeln!(text, "verdict      inconsistent")?;
            writeln!(
                text,
                "witness      {} ≿ {} and {} ≿ {} but not {} ≿ {}  (indices {x}, {y}, {z})",
                label(x),
                label(y),
                label(y),
                label(z),
                label(x),
                label(z)
            )?;
            PreferenceResult { consistent: false, witness: Some([x, y, z]), classes: vec![], utility: vec![] }
        }
        None => {
            let q = rel.quotient(tol)?;
            let u = rel.build_utility(tol)?;
            let classes: Vec<Vec<String>> = q.classes.iter().map(|c| c.iter().map(|&i| label(i)).collect()).collect();
            writeln!(text, "verdict      consistent")?;
            let shown: Vec<String> = classes.iter().map(|c| format!("{{{}}}", c.join(", "))).collect();
            writeln!(text, "classes      {}", shown.join(" ≺ "))?;
            for (i, v) in u.iter().enumerate() {
                writeln!(text, "utility      {:<10} {}", label(i), v)?;
            }
            let utility = u.into_iter().enumerate().map(|(i, v)| (label(i), v)).collect();
            PreferenceResult { consistent: true, witness: None, classes, utility }
        }
    };
    let json = record("preference check", file, Settings { tol, ..Settings::default() }, &result)?;
    Ok(Output { text, json, exit: 0 })
}

// ---- game ----

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameResult {
    pub pure: Vec<Vec<usize>>,
    pub pure_reports: Vec<NashReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mixed: Option<MixedNashSolution>,
    #[serde(default)]
    pub mixed_reports: Vec<NashReport>,
}

pub fn game_solve(file: &Path, tol: Option<f64>) -> Result<Output> {
    let tol = check_tol(tol.unwrap_or(defaults::COMPARE_TOL))?;
    let game: FuzzyGame = load(file)?;
    let pure = game.find_pure_nash(tol);
    let pure_reports = pure
        .iter()
        .map(|p| game.verify_nash(&MixedProfile::pure(p, game.strategy_counts())?, tol))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let mixed = if game.players() == 2 { Some(game.find_mixed_nash_2p(tol)?) } else { None };
    let mixed_reports = match &mixed {
        Some(sol) => sol.equilibria.iter().map(|e| game.verify_nash(e, tol)).collect::<std::result::Result<_, _>>()?,
        None => vec![],
    };

    let mut text = String::new();
    writeln!(text, "players      {}  strategies {:?}", game.players(), game.strategy_counts())?;
    if pure.is_empty() {
        writeln!(text, "pure         none")?;
    }
    for (p, r) in pure.iter().zip(&pure_reports) {
        writeln!(text, "pure         {p:?}  payoffs {}  {}", vector(&r.payoffs), verdict(r))?;
    }
    match &mixed {
        Some(sol) => {
            for (e, r) in sol.equilibria.iter().zip(&mixed_reports) {
                let shown: Vec<String> = e.strategies().iter().map(|s| vector_with_hint(s)).collect();
                writeln!(text, "mixed        ({})  payoffs {}  {}", shown.join(", "), vector(&r.payoffs), verdict(r))?;
            }
            writeln!(text, "equilibria   {}{}", sol.equilibria.len(), if sol.degenerate { "  (degenerate game)" } else { "" })?;
        }
        None => writeln!(text, "mixed        not computed for {} players", game.players())?,
    }
    let result = GameResult { pure, pure_reports, mixed, mixed_reports };
    let json = record("game solve", file, Settings { tol, ..Settings::default() }, &result)?;
    Ok(Output { text, json, exit: 0 })
}

fn verdict(r: &NashReport) -> String {
    let gain = r.gains.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    format!("{}  max deviation gain {:.3e}", if r.is_equilibrium { "verified" } else { "NOT verified" }, gain)
}

// ---- economy ----

pub fn economy_solve(
    file: &Path,
    tol: Option<f64>,
    method: fuzzyeq_core::Method,
    max_iter: Option<usize>,
    seed: Option<u64>,
) -> Result<Output> {
    let econ: Economy = load(file)?;
    let mut cfg = defaults::solver();
    cfg.method = method;
    let tol = check_tol(tol.unwrap_or(defaults::RESIDUAL_TOL))?;
    cfg.clearing_tol = tol;
    cfg.complementarity_tol = tol;
    if let Some(n) = max_iter {
        cfg.max_iter = n;
    }
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let report = solve_equilibrium(&econ, &cfg)?;

    let mut text = String::new();
    writeln!(text, "method        {}", report.method)?;
    writeln!(text, "iterations    {}", report.iterations)?;
    writeln!(text, "converged     {}", if report.converged { "yes" } else { "no" })?;
    writeln!(text, "price         {}", vector_with_hint(&report.price))?;
    for (i, x) in report.allocation.iter().enumerate() {
        writeln!(text, "agent {i:<7} {}", vector_with_hint(x))?;
    }
    writeln!(text, "excess demand {}", vector(&report.excess_demand))?;
    text.push_str(&condition_lines(&report.residuals));
    writeln!(text, "price VI      residual {:.3e}", report.price_vi_residual)?;
    writeln!(text, "QVI sample    min left-hand side {:.3e} over {} draws", report.qvi_min_lhs, cfg.qvi_samples)?;
    if let Some(c) = &report.corners {
        for e in [&c.free_first, &c.free_second] {
            writeln!(
                text,
                "corner {}  z1 - z2 = {}  {}",
                vector(&e.price),
                num(e.z1_minus_z2),
                if e.solves_price_inequality { "not excluded" } else { "rejected" }
            )?;
        }
    }
    for w in &report.warnings {
        writeln!(text, "warning: {w}")?;
    }
    let settings = Settings {
        tol,
        method: Some(report.method.to_string()),
        max_iter: Some(cfg.max_iter),
        seed: Some(cfg.seed),
        resolution: None,
    };
    let exit = if report.converged { 0 } else { 2 };
    let json = record::<&EquilibriumReport>("economy solve", file, settings, &report)?;
    Ok(Output { text, json, exit })
}

pub fn economy_verify(file: &Path, tol: Option<f64>, price: &[f64], alloc: &Matrix) -> Result<Output> {
    let econ: Economy = load(file)?;
    let tol = check_tol(tol.unwrap_or(defaults::RESIDUAL_TOL))?;
    if price.iter().any(|&p| !(p >= 0.0) || !p.is_finite()) || !(price.iter().sum::<f64>() > 0.0) {
        return Err(InputError(format!("prices must be non-negative with a positive sum: {price:?}")));
    }
    let v: Verification = verify_equilibrium(&econ, price, &alloc.0, tol)?;
    let mut text = String::new();
    writeln!(text, "price         {}", vector(price))?;
    writeln!(text, "excess demand {}", vector(&v.excess_demand))?;
    text.push_str(&condition_lines(&v));
    writeln!(text, "verdict       {}", if v.passed() { "equilibrium" } else { "not an equilibrium" })?;
    let exit = if v.passed() { 0 } else { 2 };
    let json = record("economy verify", file, Settings { tol, ..Settings::default() }, &v)?;
    Ok(Output { text, json, exit })
}

// ---- oracle ----

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentGridDemand {
    pub agent: usize,
    pub grid_point: Vec<f64>,
    pub grid_value: f64,
    pub analytic_point: Vec<f64>,
    pub analytic_value: f64,
    /// `‖grid − analytic‖∞`.
    pub distance: f64,
    pub evaluated: usize,
}

fn check_resolution(r: Option<f64>) -> Result<f64> {
    let r = r.unwrap_or(defaults::RESOLUTION);
    if r > 0.0 && r.is_finite() {
        Ok(r)
    } else {
        Err(InputError(format!("resolution must be positive, got {r}")))
    }
}

pub fn oracle_demand(
    file: &Path,
    resolution: Option<f64>,
    price: &[f64],
    bounds: Option<Vec<f64>>,
) -> Result<Output> {
    let econ: Economy = load(file)?;
    let res = check_resolution(resolution)?;
    let p = PriceVector::normalized(price)?;
    let mut spec = GridSpec::new(res)?;
    if let Some(b) = bounds {
        spec = spec.with_bounds(b)?;
    }
    let mut rows = Vec::new();
    let mut text = String::new();
    writeln!(text, "price         {}", vector_with_hint(p.as_slice()))?;
    for i in 0..econ.agents() {
        let u = econ.utility(i);
        let g = grid_demand(u, econ.endowment(i), &p, &spec)?;
        let exact = demand(u, econ.endowment(i), &p, 1e-12)?;
        let distance = g.point.iter().zip(&exact).fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
        writeln!(
            text,
            "agent {i:<7} grid {}  analytic {}  distance {:.3e}",
            vector(&g.point),
            vector(&exact),
            distance
        )?;
        rows.push(AgentGridDemand {
            agent: i,
            analytic_value: u.expected_utility(&exact)?,
            grid_point: g.point,
            grid_value: g.value,
            analytic_point: exact,
            distance,
            evaluated: g.evaluated,
        });
    }
    let settings = Settings { tol: 0.0, resolution: Some(res), ..Settings::default() };
    let json = record("oracle demand", file, settings, &rows)?;
    Ok(Output { text, json, exit: 0 })
}

pub fn oracle_equilibrium(file: &Path, resolution: Option<f64>) -> Result<Output> {
    let econ: Economy = load(file)?;
    let res = check_resolution(resolution)?;
    let g: GridEquilibrium = grid_equilibrium(&econ, res)?;
    let mut text = String::new();
    writeln!(text, "price         {}", vector_with_hint(&g.price))?;
    writeln!(text, "score         {:.3e}", g.score)?;
    writeln!(text, "bracket       p2 in [{}, {}]", num(g.bracket.0), num(g.bracket.1))?;
    writeln!(text, "grid points   {}", g.evaluated)?;
    let settings = Settings { tol: 0.0, resolution: Some(res), ..Settings::default() };
    let json = record("oracle equilibrium", file, settings, &g)?;
    Ok(Output { text, json, exit: 0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn record_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("reference.econ.json");
        fs::write(&path, serde_json::to_string(&Economy::reference()).unwrap()).unwrap();
        let out = economy_solve(&path, None, fuzzyeq_core::Method::Bisect, None, None).unwrap();
        let back: Record<EquilibriumReport> = serde_json::from_str(&out.json).unwrap();
        assert_eq!(serde_json::to_string_pretty(&back).unwrap() + "\n", out.json);
        assert_eq!(out.exit, 0);
    }
}
