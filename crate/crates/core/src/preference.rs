//! Fuzzy preference relations on finite reference sets.
//!
//! `x` is weakly preferred to `y` when `μ(x, y) ≽ μ(y, x)` under the
//! expected-value order. For a consistent (transitive) relation the elements
//! fall into indifference classes that are totally ordered, and ranking those
//! classes gives an order-preserving fuzzy utility.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fuzzy::{FuzzyNumber, OrderOutcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PreferenceOutcome {
    FuzzilyPreferred,
    FuzzilyIndifferent,
    FuzzilyDispreferred,
}

impl PreferenceOutcome {
    pub fn is_weak(self) -> bool {
        !matches!(self, PreferenceOutcome::FuzzilyDispreferred)
    }
}

impl From<OrderOutcome> for PreferenceOutcome {
    fn from(o: OrderOutcome) -> Self {
        match o {
            OrderOutcome::Superior => PreferenceOutcome::FuzzilyPreferred,
            OrderOutcome::Indifferent => PreferenceOutcome::FuzzilyIndifferent,
            OrderOutcome::Inferior => PreferenceOutcome::FuzzilyDispreferred,
        }
    }
}

/// A labelled point of the reference set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Element {
    Label(String),
    Point(Vec<f64>),
}

impl std::fmt::Display for Element {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Element::Label(s) => write!(f, "{s}"),
            Element::Point(v) => write!(f, "{v:?}"),
        }
    }
}

/// Fuzzy binary relation: `mu[x][y]` is the membership `μ(x, y)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RelationRepr", into = "RelationRepr")]
pub struct FuzzyRelation {
    elements: Vec<Element>,
    mu: Vec<Vec<FuzzyNumber>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RelationRepr {
    elements: Vec<Element>,
    mu: Vec<Vec<FuzzyNumber>>,
}

impl TryFrom<RelationRepr> for FuzzyRelation {
    type Error = Error;
    fn try_from(r: RelationRepr) -> Result<Self> {
        FuzzyRelation::new(r.elements, r.mu)
    }
}

impl From<FuzzyRelation> for RelationRepr {
    fn from(r: FuzzyRelation) -> Self {
        RelationRepr { elements: r.elements, mu: r.mu }
    }
}

impl FuzzyRelation {
    pub fn new(elements: Vec<Element>, mu: Vec<Vec<FuzzyNumber>>) -> Result<Self> {
        let n = elements.len();
        if n == 0 {
            return Err(Error::EmptyInput("a relation needs at least one element"));
        }
        if mu.len() != n || mu.iter().any(|row| row.len() != n) {
            return Err(Error::DimensionMismatch(format!("membership matrix must be {n}x{n}")));
        }
        Ok(FuzzyRelation { elements, mu })
    }

    /// Relation with `μ(x, y) = crisp(scores[x])`, labelled `e0, e1, …`.
    pub fn from_scores(scores: &[f64]) -> Result<Self> {
        let elements = (0..scores.len()).map(|i| Element::Label(format!("e{i}"))).collect();
        let mu = scores
            .iter()
            .map(|&s| vec![FuzzyNumber::crisp(s); scores.len()])
            .collect();
        Self::new(elements, mu)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn membership(&self, x: usize, y: usize) -> Result<&FuzzyNumber> {
        self.check(x)?;
        self.check(y)?;
        Ok(&self.mu[x][y])
    }

    fn check(&self, i: usize) -> Result<()> {
        if i < self.len() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index: i, len: self.len() })
        }
    }

    pub fn prefers(&self, x: usize, y: usize, tol: f64) -> Result<PreferenceOutcome> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.outcome(x, y, tol))
    }

    fn outcome(&self, x: usize, y: usize, tol: f64) -> PreferenceOutcome {
        self.mu[x][y].compare(&self.mu[y][x], tol).into()
    }

    /// Transitivity check of weak preference. Returns the lexicographically
    /// first violating triple `(x, y, z)` with `x ≿ y`, `y ≿ z` and not `x ≿ z`.
    pub fn consistency_witness(&self, tol: f64) -> Option<(usize, usize, usize)> {
        let n = self.len();
        let weak: Vec<Vec<bool>> = (0..n)
            .map(|x| (0..n).map(|y| self.outcome(x, y, tol).is_weak()).collect())
            .collect();
        for x in 0..n {
            for y in 0..n {
                if !weak[x][y] {
                    continue;
                }
                for z in 0..n {
                    if weak[y][z] && !weak[x][z] {
                        return Some((x, y, z));
                    }
                }
            }
        }
        None
    }

    pub fn is_consistent(&self, tol: f64) -> bool {
        self.consistency_witness(tol).is_none()
    }

    /// Indifference classes ordered from least to most preferred.
    pub fn quotient(&self, tol: f64) -> Result<Quotient> {
        if let Some((x, y, z)) = self.consistency_witness(tol) {
            return Err(Error::Inconsistent { x, y, z });
        }
        let n = self.len();
        // In a total preorder the number of strictly worse elements identifies
        // the class, and sorting by it orders the classes.
        let mut below: Vec<(usize, usize)> = (0..n)
            .map(|x| {
                let count = (0..n)
                    .filter(|&y| self.outcome(x, y, tol) == PreferenceOutcome::FuzzilyPreferred)
                    .count();
                (count, x)
            })
            .collect();
        below.sort_unstable();
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut last = None;
        for (count, x) in below {
            if last == Some(count) {
                classes.last_mut().expect("class exists").push(x);
            } else {
                classes.push(vec![x]);
                last = Some(count);
            }
        }
        Ok(Quotient { classes })
    }

    /// Crisp class ranks `0, 1, 2, …` as fuzzy utilities, one per element.
    pub fn build_utility(&self, tol: f64) -> Result<Vec<FuzzyNumber>> {
        let q = self.quotient(tol)?;
        let mut utility = vec![FuzzyNumber::crisp(0.0); self.len()];
        for (rank, class) in q.classes.iter().enumerate() {
            for &x in class {
                utility[x] = FuzzyNumber::crisp(rank as f64);
            }
        }
        Ok(utility)
    }
}

/// Partition of the reference set into indifference classes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quotient {
    pub classes: Vec<Vec<usize>>,
}

impl Quotient {
    pub fn class_of(&self, x: usize) -> Option<usize> {
        self.classes.iter().position(|c| c.contains(&x))
    }
}
