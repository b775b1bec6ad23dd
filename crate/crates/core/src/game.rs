//! Non-cooperative games with fuzzy payoffs.
//!
//! Because the expected-value order is total, a profile is a fuzzy Nash
//! equilibrium exactly when it is a Nash equilibrium of the crisp game obtained
//! by taking the expected value of every payoff. Pure equilibria are found by
//! exhaustive deviation checks; mixed equilibria of two-player games by support
//! enumeration on the expected bimatrix.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fuzzy::{FuzzyNumber, OrderOutcome};
use crate::linalg;

/// Largest strategy count accepted by [`FuzzyGame::find_mixed_nash_2p`].
pub const MAX_MIXED_STRATEGIES: usize = 12;

/// Payoffs are stored per player as a flat tensor in row-major profile order:
/// the last player's strategy index varies fastest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GameRepr", into = "GameRepr")]
pub struct FuzzyGame {
    strategy_counts: Vec<usize>,
    payoffs: Vec<Vec<FuzzyNumber>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GameRepr {
    strategy_counts: Vec<usize>,
    payoffs: BTreeMap<String, Vec<FuzzyNumber>>,
}

impl TryFrom<GameRepr> for FuzzyGame {
    type Error = Error;
    fn try_from(r: GameRepr) -> Result<Self> {
        let n = r.strategy_counts.len();
        let mut payoffs: Vec<Option<Vec<FuzzyNumber>>> = vec![None; n];
        for (key, table) in r.payoffs {
            let player: usize = key
                .trim()
                .parse()
                .map_err(|_| Error::InvalidGame(format!("payoff key {key:?} is not a player index")))?;
            let slot = payoffs
                .get_mut(player)
                .ok_or_else(|| Error::InvalidGame(format!("player {player} out of range for {n} players")))?;
            *slot = Some(table);
        }
        let payoffs = payoffs
            .into_iter()
            .enumerate()
            .map(|(i, t)| t.ok_or_else(|| Error::InvalidGame(format!("missing payoffs for player {i}"))))
            .collect::<Result<Vec<_>>>()?;
        FuzzyGame::new(r.strategy_counts, payoffs)
    }
}

impl From<FuzzyGame> for GameRepr {
    fn from(g: FuzzyGame) -> Self {
        GameRepr {
            strategy_counts: g.strategy_counts,
            payoffs: g.payoffs.into_iter().enumerate().map(|(i, t)| (i.to_string(), t)).collect(),
        }
    }
}

/// Crisp game of expected payoffs, same layout as [`FuzzyGame`].
#[derive(Debug, Clone, PartialEq)]
pub struct ExpectedGame {
    pub strategy_counts: Vec<usize>,
    pub payoffs: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixedProfile {
    strategies: Vec<Vec<f64>>,
}

impl MixedProfile {
    /// Each vector must be non-negative and sum to one within `1e-9`.
    pub fn new(strategies: Vec<Vec<f64>>) -> Result<Self> {
        for (i, s) in strategies.iter().enumerate() {
            if s.is_empty() || s.iter().any(|&v| !(v >= 0.0) || !v.is_finite()) {
                return Err(Error::DimensionMismatch(format!("player {i}: probabilities must be non-negative")));
            }
            let total: f64 = s.iter().sum();
            if (total - 1.0).abs() > 1e-9 {
                return Err(Error::DimensionMismatch(format!("player {i}: probabilities sum to {total}")));
            }
        }
        Ok(MixedProfile { strategies })
    }

    pub fn pure(choice: &[usize], strategy_counts: &[usize]) -> Result<Self> {
        if choice.len() != strategy_counts.len() {
            return Err(Error::DimensionMismatch("profile length differs from player count".into()));
        }
        let strategies = choice
            .iter()
            .zip(strategy_counts)
            .map(|(&c, &k)| {
                if c >= k {
                    return Err(Error::IndexOutOfRange { index: c, len: k });
                }
                let mut v = vec![0.0; k];
                v[c] = 1.0;
                Ok(v)
            })
            .collect::<Result<_>>()?;
        Ok(MixedProfile { strategies })
    }

    pub fn strategies(&self) -> &[Vec<f64>] {
        &self.strategies
    }

    pub fn player(&self, i: usize) -> &[f64] {
        &self.strategies[i]
    }

    fn max_distance(&self, other: &MixedProfile) -> f64 {
        self.strategies
            .iter()
            .flatten()
            .zip(other.strategies.iter().flatten())
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }
}

/// Result of a two-player support enumeration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixedNashSolution {
    pub equilibria: Vec<MixedProfile>,
    /// Set when some indifference system was singular or a solution put zero
    /// weight on a support strategy; the game may then have continua of
    /// equilibria of which only vertex solutions are listed.
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NashReport {
    /// Expected payoff of each player under the profile.
    pub payoffs: Vec<f64>,
    /// Best pure-deviation payoff minus current payoff, per player.
    pub gains: Vec<f64>,
    pub is_equilibrium: bool,
}

impl FuzzyGame {
    pub fn new(strategy_counts: Vec<usize>, payoffs: Vec<Vec<FuzzyNumber>>) -> Result<Self> {
        if strategy_counts.is_empty() {
            return Err(Error::InvalidGame("at least one player is required".into()));
        }
        if strategy_counts.contains(&0) {
            return Err(Error::InvalidGame("every player needs at least one strategy".into()));
        }
        if payoffs.len() != strategy_counts.len() {
            return Err(Error::InvalidGame(format!(
                "{} payoff tables for {} players",
                payoffs.len(),
                strategy_counts.len()
            )));
        }
        let size = strategy_counts
            .iter()
            .try_fold(1usize, |acc, &k| acc.checked_mul(k))
            .ok_or_else(|| Error::InvalidGame("profile space too large".into()))?;
        for (i, table) in payoffs.iter().enumerate() {
            if table.len() != size {
                return Err(Error::InvalidGame(format!(
                    "player {i} has {} payoffs, expected {size}",
                    table.len()
                )));
            }
        }
        Ok(FuzzyGame { strategy_counts, payoffs })
    }

    /// Two-player game from row-major matrices of fuzzy payoffs.
    pub fn bimatrix(row: Vec<Vec<FuzzyNumber>>, col: Vec<Vec<FuzzyNumber>>) -> Result<Self> {
        let m = row.len();
        let n = row.first().map_or(0, Vec::len);
        if col.len() != m || row.iter().chain(&col).any(|r| r.len() != n) {
            return Err(Error::InvalidGame("bimatrix payoffs must share one rectangular shape".into()));
        }
        FuzzyGame::new(vec![m, n], vec![row.into_iter().flatten().collect(), col.into_iter().flatten().collect()])
    }

    /// Two-player game with crisp payoffs.
    pub fn crisp_bimatrix(row: &[Vec<f64>], col: &[Vec<f64>]) -> Result<Self> {
        let lift = |m: &[Vec<f64>]| -> Vec<Vec<FuzzyNumber>> {
            m.iter().map(|r| r.iter().map(|&v| FuzzyNumber::crisp(v)).collect()).collect()
        };
        Self::bimatrix(lift(row), lift(col))
    }

    pub fn players(&self) -> usize {
        self.strategy_counts.len()
    }

    pub fn strategy_counts(&self) -> &[usize] {
        &self.strategy_counts
    }

    pub fn payoff(&self, player: usize, profile: &[usize]) -> &FuzzyNumber {
        &self.payoffs[player][flat_index(&self.strategy_counts, profile)]
    }

    pub fn payoff_tables(&self) -> &[Vec<FuzzyNumber>] {
        &self.payoffs
    }

    /// Adds `crisp(k)` to every payoff of `player`.
    pub fn shift_player(&self, player: usize, k: f64) -> FuzzyGame {
        let mut g = self.clone();
        for p in &mut g.payoffs[player] {
            *p = p.shift(k);
        }
        g
    }

    pub fn expected_game(&self) -> ExpectedGame {
        ExpectedGame {
            strategy_counts: self.strategy_counts.clone(),
            payoffs: self
                .payoffs
                .iter()
                .map(|t| t.iter().map(FuzzyNumber::expected_value).collect())
                .collect(),
        }
    }

    /// All pure profiles where no player has a strictly superior unilateral
    /// deviation, in lexicographic profile order.
    pub fn find_pure_nash(&self, tol: f64) -> Vec<Vec<usize>> {
        let exp = self.expected_game();
        let mut out = Vec::new();
        for profile in profiles(&self.strategy_counts) {
            let stable = (0..self.players()).all(|i| {
                let current = exp.payoff(i, &profile);
                let mut dev = profile.clone();
                (0..self.strategy_counts[i]).all(|s| {
                    dev[i] = s;
                    crate::fuzzy::compare_values(exp.payoff(i, &dev), current, tol) != OrderOutcome::Superior
                })
            });
            if stable {
                out.push(profile);
            }
        }
        out
    }

    /// Support enumeration over equal-size support pairs of the expected
    /// bimatrix. Results are deduplicated and listed in support order.
    pub fn find_mixed_nash_2p(&self, tol: f64) -> Result<MixedNashSolution> {
        if self.players() != 2 {
            return Err(Error::UnsupportedPlayerCount(self.players()));
        }
        let (m, n) = (self.strategy_counts[0], self.strategy_counts[1]);
        let largest = m.max(n);
        if largest > MAX_MIXED_STRATEGIES {
            return Err(Error::GameTooLarge(largest, MAX_MIXED_STRATEGIES));
        }
        let exp = self.expected_game();
        let a = |i: usize, j: usize| exp.payoffs[0][i * n + j];
        let b = |i: usize, j: usize| exp.payoffs[1][i * n + j];

        let mut equilibria: Vec<MixedProfile> = Vec::new();
        let mut degenerate = false;
        for k in 1..=m.min(n) {
            for rows in combinations(m, k) {
                for cols in combinations(n, k) {
                    // Column mix y on `cols` makes the row player indifferent on `rows`.
                    let y = indifference(k, |r, c| a(rows[r], cols[c]));
                    // Row mix x on `rows` makes the column player indifferent on `cols`.
                    let x = indifference(k, |c, r| b(rows[r], cols[c]));
                    let (Some((y, v)), Some((x, u))) = (y, x) else {
                        degenerate = true;
                        continue;
                    };
                    if x.iter().chain(&y).any(|&p| p < -tol) {
                        continue;
                    }
                    let mut row_mix = vec![0.0; m];
                    let mut col_mix = vec![0.0; n];
                    for (r, &i) in rows.iter().enumerate() {
                        row_mix[i] = x[r].max(0.0);
                    }
                    for (c, &j) in cols.iter().enumerate() {
                        col_mix[j] = y[c].max(0.0);
                    }
                    normalize(&mut row_mix);
                    normalize(&mut col_mix);
                    let row_ok = (0..m).all(|i| (0..n).map(|j| a(i, j) * col_mix[j]).sum::<f64>() <= v + tol);
                    let col_ok = (0..n).all(|j| (0..m).map(|i| b(i, j) * row_mix[i]).sum::<f64>() <= u + tol);
                    if !(row_ok && col_ok) {
                        continue;
                    }
                    if x.iter().chain(&y).any(|&p| p <= tol) {
                        degenerate = true;
                    }
                    let profile = MixedProfile { strategies: vec![row_mix, col_mix] };
                    if equilibria.iter().any(|e| e.max_distance(&profile) <= 1e-9) {
                        degenerate = true;
                    } else {
                        equilibria.push(profile);
                    }
                }
            }
        }
        Ok(MixedNashSolution { equilibria, degenerate })
    }

    /// Per-player gain from the best pure deviation; pure deviations suffice
    /// because expected payoff is linear in a player's own mix.
    pub fn verify_nash(&self, profile: &MixedProfile, tol: f64) -> Result<NashReport> {
        if profile.strategies.len() != self.players()
            || profile.strategies.iter().zip(&self.strategy_counts).any(|(s, &k)| s.len() != k)
        {
            return Err(Error::DimensionMismatch("profile shape does not match the game".into()));
        }
        let exp = self.expected_game();
        let mut payoffs = Vec::with_capacity(self.players());
        let mut gains = Vec::with_capacity(self.players());
        for i in 0..self.players() {
            let current = exp.mixed_payoff(i, &profile.strategies);
            let best = (0..self.strategy_counts[i])
                .map(|s| {
                    let mut dev = profile.strategies.clone();
                    dev[i] = vec![0.0; self.strategy_counts[i]];
                    dev[i][s] = 1.0;
                    exp.mixed_payoff(i, &dev)
                })
                .fold(f64::NEG_INFINITY, f64::max);
            payoffs.push(current);
            gains.push(best - current);
        }
        let is_equilibrium = gains.iter().all(|&g| g <= tol);
        Ok(NashReport { payoffs, gains, is_equilibrium })
    }
}

impl ExpectedGame {
    pub fn payoff(&self, player: usize, profile: &[usize]) -> f64 {
        self.payoffs[player][flat_index(&self.strategy_counts, profile)]
    }

    /// Expected payoff of `player` when everyone plays the given mixes.
    pub fn mixed_payoff(&self, player: usize, mixes: &[Vec<f64>]) -> f64 {
        profiles(&self.strategy_counts)
            .map(|p| {
                let prob: f64 = p.iter().enumerate().map(|(j, &s)| mixes[j][s]).product();
                if prob == 0.0 {
                    0.0
                } else {
                    prob * self.payoff(player, &p)
                }
            })
            .sum()
    }
}

fn flat_index(counts: &[usize], profile: &[usize]) -> usize {
    profile.iter().zip(counts).fold(0, |acc, (&s, &k)| acc * k + s)
}

/// All profiles in lexicographic order.
pub fn profiles(counts: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    let total: usize = counts.iter().product();
    (0..total).map(move |mut idx| {
        let mut p = vec![0; counts.len()];
        for (slot, &k) in p.iter_mut().zip(counts).rev() {
            *slot = idx % k;
            idx /= k;
        }
        p
    })
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Solves `Σ_c coef(r, c)·w_c = v` for all `r < k` with `Σ w = 1`.
fn indifference(k: usize, coef: impl Fn(usize, usize) -> f64) -> Option<(Vec<f64>, f64)> {
    let mut a = vec![vec![0.0; k + 1]; k + 1];
    let mut rhs = vec![0.0; k + 1];
    for (r, row) in a.iter_mut().enumerate().take(k) {
        for (c, cell) in row.iter_mut().enumerate().take(k) {
            *cell = coef(r, c);
        }
        row[k] = -1.0;
    }
    for cell in a[k].iter_mut().take(k) {
        *cell = 1.0;
    }
    rhs[k] = 1.0;
    let mut sol = linalg::solve(a, rhs)?;
    let v = sol.pop()?;
    Some((sol, v))
}

fn normalize(v: &mut [f64]) {
    let total: f64 = v.iter().sum();
    if total > 0.0 {
        v.iter_mut().for_each(|p| *p /= total);
    }
}
