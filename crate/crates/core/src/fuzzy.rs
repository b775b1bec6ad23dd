//! Piecewise-linear fuzzy numbers stored as a ladder of α-cuts.
//!
//! A [`FuzzyNumber`] keeps the endpoint functions `lower(α)` and `upper(α)` at a
//! finite set of α values and interpolates linearly in between. Trapezoids are
//! the two-level case. Addition and real scaling act level-wise, so results are
//! exact for piecewise-linear inputs once the two α grids are merged.
//!
//! Fuzzy numbers are ranked by their expected value
//! `E(A) = ½ ∫₀¹ (lower(α) + upper(α)) dα`, which gives a total preorder.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance used for comparisons when the caller does not supply one.
pub const DEFAULT_TOL: f64 = 1e-9;

/// One rung of the α-cut ladder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Level {
    pub alpha: f64,
    pub lower: f64,
    pub upper: f64,
}

/// Trapezoidal shape `⌊a, b, c, d⌋`: support `[a, d]`, core `[b, c]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Trapezoid {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Trapezoid {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let t = Trapezoid { a, b, c, d };
        t.validate()?;
        Ok(t)
    }

    /// Triangular shape `⌊a, b, b, c⌋`.
    pub fn triangular(a: f64, b: f64, c: f64) -> Result<Self> {
        Self::new(a, b, b, c)
    }

    fn validate(&self) -> Result<()> {
        let ordered = self.a <= self.b && self.b <= self.c && self.c <= self.d;
        let finite = [self.a, self.b, self.c, self.d].iter().all(|v| v.is_finite());
        if ordered && finite {
            Ok(())
        } else {
            Err(Error::InvalidTrapezoid(self.a, self.b, self.c, self.d))
        }
    }
}

/// Outcome of the expected-value order between two fuzzy numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OrderOutcome {
    Superior,
    Indifferent,
    Inferior,
}

impl OrderOutcome {
    /// `true` for `Superior` and `Indifferent`, i.e. weak superiority.
    pub fn is_weakly_superior(self) -> bool {
        !matches!(self, OrderOutcome::Inferior)
    }

    pub fn reverse(self) -> Self {
        match self {
            OrderOutcome::Superior => OrderOutcome::Inferior,
            OrderOutcome::Indifferent => OrderOutcome::Indifferent,
            OrderOutcome::Inferior => OrderOutcome::Superior,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyNumber {
    levels: Vec<Level>,
}

impl FuzzyNumber {
    /// Builds a fuzzy number from an explicit ladder, checking every invariant:
    /// α strictly increasing from 0 to 1, `lower <= upper` on each level, and
    /// cuts nested (lower non-decreasing, upper non-increasing in α).
    pub fn from_levels(levels: Vec<Level>) -> Result<Self> {
        let invalid = |msg: String| Err(Error::InvalidFuzzyNumber(msg));
        if levels.len() < 2 {
            return invalid(format!("need at least two levels (α=0 and α=1), got {}", levels.len()));
        }
        for (i, lv) in levels.iter().enumerate() {
            if !(lv.alpha.is_finite() && lv.lower.is_finite() && lv.upper.is_finite()) {
                return invalid(format!("level {i} has a non-finite value"));
            }
            if lv.lower > lv.upper {
                return invalid(format!("level {i}: lower {} > upper {}", lv.lower, lv.upper));
            }
        }
        if levels[0].alpha != 0.0 {
            return invalid(format!("first level must have α=0, got {}", levels[0].alpha));
        }
        if levels[levels.len() - 1].alpha != 1.0 {
            return invalid(format!("last level must have α=1, got {}", levels[levels.len() - 1].alpha));
        }
        for (i, pair) in levels.windows(2).enumerate() {
            let (lo, hi) = (pair[0], pair[1]);
            if hi.alpha <= lo.alpha {
                return invalid(format!("α not strictly increasing at level {}", i + 1));
            }
            if hi.lower < lo.lower || hi.upper > lo.upper {
                return invalid(format!("α-cut at level {} is not nested in level {}", i + 1, i));
            }
        }
        Ok(FuzzyNumber { levels })
    }

    pub fn from_trapezoid(t: Trapezoid) -> Result<Self> {
        t.validate()?;
        Ok(FuzzyNumber {
            levels: vec![
                Level { alpha: 0.0, lower: t.a, upper: t.d },
                Level { alpha: 1.0, lower: t.b, upper: t.c },
            ],
        })
    }

    /// Shorthand for `from_trapezoid(Trapezoid::new(a, b, c, d)?)`.
    pub fn trapezoid(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        Self::from_trapezoid(Trapezoid::new(a, b, c, d)?)
    }

    /// Degenerate fuzzy number whose every α-cut is `[v, v]`.
    pub fn crisp(v: f64) -> Self {
        FuzzyNumber {
            levels: vec![
                Level { alpha: 0.0, lower: v, upper: v },
                Level { alpha: 1.0, lower: v, upper: v },
            ],
        }
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    /// The α=0 cut.
    pub fn support(&self) -> (f64, f64) {
        let l = self.levels[0];
        (l.lower, l.upper)
    }

    /// The α=1 cut.
    pub fn core(&self) -> (f64, f64) {
        let l = self.levels[self.levels.len() - 1];
        (l.lower, l.upper)
    }

    pub fn is_crisp(&self) -> bool {
        let v = self.levels[0].lower;
        self.levels.iter().all(|l| l.lower == v && l.upper == v)
    }

    /// Returns the trapezoid when the ladder has exactly two levels.
    pub fn as_trapezoid(&self) -> Option<Trapezoid> {
        match self.levels.as_slice() {
            [base, top] => Some(Trapezoid { a: base.lower, b: top.lower, c: top.upper, d: base.upper }),
            _ => None,
        }
    }

    /// The α-level set `[lower(α), upper(α)]`.
    pub fn alpha_cut(&self, alpha: f64) -> Result<(f64, f64)> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::AlphaOutOfRange(alpha));
        }
        Ok(self.cut_unchecked(alpha))
    }

    fn cut_unchecked(&self, alpha: f64) -> (f64, f64) {
        // First index whose α is >= the query.
        let idx = self.levels.partition_point(|l| l.alpha < alpha);
        let hi = self.levels[idx.min(self.levels.len() - 1)];
        if hi.alpha == alpha || idx == 0 {
            return (hi.lower, hi.upper);
        }
        let lo = self.levels[idx - 1];
        let t = (alpha - lo.alpha) / (hi.alpha - lo.alpha);
        let lower = lo.lower + t * (hi.lower - lo.lower);
        let upper = lo.upper + t * (hi.upper - lo.upper);
        // Rounding can nudge an interpolated cut outside its neighbours.
        let lower = lower.clamp(lo.lower, hi.lower);
        let upper = upper.clamp(hi.upper, lo.upper);
        (lower, upper.max(lower))
    }

    /// `½ ∫₀¹ (lower(α) + upper(α)) dα`; trapezoidal quadrature is exact on the
    /// piecewise-linear ladder.
    pub fn expected_value(&self) -> f64 {
        self.levels
            .windows(2)
            .map(|w| (w[1].alpha - w[0].alpha) * (w[0].lower + w[1].lower + w[0].upper + w[1].upper))
            .sum::<f64>()
            / 4.0
    }

    /// Expected-value order with tolerance `tol`.
    pub fn compare(&self, other: &FuzzyNumber, tol: f64) -> OrderOutcome {
        compare_values(self.expected_value(), other.expected_value(), tol)
    }

    pub fn add(&self, other: &FuzzyNumber) -> FuzzyNumber {
        let grid = merge_alpha_grids(&self.levels, &other.levels);
        let levels = grid
            .into_iter()
            .map(|alpha| {
                let (a_lo, a_hi) = self.cut_unchecked(alpha);
                let (b_lo, b_hi) = other.cut_unchecked(alpha);
                Level { alpha, lower: a_lo + b_lo, upper: a_hi + b_hi }
            })
            .collect();
        FuzzyNumber { levels: enforce_nesting(levels) }
    }

    pub fn subtract(&self, other: &FuzzyNumber) -> FuzzyNumber {
        self.add(&other.scale(-1.0))
    }

    /// `λ·A`. Negative factors swap the endpoints; `0·A` is `crisp(0)`.
    pub fn scale(&self, lambda: f64) -> FuzzyNumber {
        if lambda == 0.0 {
            return FuzzyNumber::crisp(0.0);
        }
        let levels = self
            .levels
            .iter()
            .map(|l| {
                let (x, y) = (lambda * l.lower, lambda * l.upper);
                if lambda > 0.0 {
                    Level { alpha: l.alpha, lower: x, upper: y }
                } else {
                    Level { alpha: l.alpha, lower: y, upper: x }
                }
            })
            .collect();
        FuzzyNumber { levels }
    }

    /// Adds the crisp amount `shift` to every cut.
    pub fn shift(&self, shift: f64) -> FuzzyNumber {
        let levels = self
            .levels
            .iter()
            .map(|l| Level { alpha: l.alpha, lower: l.lower + shift, upper: l.upper + shift })
            .collect();
        FuzzyNumber { levels }
    }
}

pub fn compare_values(a: f64, b: f64, tol: f64) -> OrderOutcome {
    if (a - b).abs() <= tol {
        OrderOutcome::Indifferent
    } else if a > b {
        OrderOutcome::Superior
    } else {
        OrderOutcome::Inferior
    }
}

/// Maximum of a set under the expected-value order. Ties go to the lowest index.
pub fn fuzzy_max(set: &[FuzzyNumber]) -> Result<(usize, &FuzzyNumber)> {
    let mut best: Option<(usize, f64)> = None;
    for (i, f) in set.iter().enumerate() {
        let e = f.expected_value();
        match best {
            Some((_, b)) if e <= b => {}
            _ => best = Some((i, e)),
        }
    }
    best.map(|(i, _)| (i, &set[i])).ok_or(Error::EmptyInput("fuzzy_max needs at least one element"))
}

/// Sum of a slice of fuzzy numbers; `crisp(0)` for an empty slice.
pub fn fuzzy_sum<'a, I: IntoIterator<Item = &'a FuzzyNumber>>(items: I) -> FuzzyNumber {
    items.into_iter().fold(FuzzyNumber::crisp(0.0), |acc, f| acc.add(f))
}

fn merge_alpha_grids(a: &[Level], b: &[Level]) -> Vec<f64> {
    let mut grid: Vec<f64> = a.iter().chain(b).map(|l| l.alpha).collect();
    grid.sort_by(|x, y| x.partial_cmp(y).unwrap_or(Ordering::Equal));
    grid.dedup();
    grid
}

// Sums of two nested ladders are nested in exact arithmetic; this removes
// sub-ulp violations introduced by interpolation.
fn enforce_nesting(mut levels: Vec<Level>) -> Vec<Level> {
    for i in 1..levels.len() {
        let prev = levels[i - 1];
        let cur = &mut levels[i];
        cur.lower = cur.lower.max(prev.lower);
        cur.upper = cur.upper.min(prev.upper);
        if cur.lower > cur.upper {
            let mid = 0.5 * (cur.lower + cur.upper);
            cur.lower = mid;
            cur.upper = mid;
        }
    }
    levels
}

impl fmt::Display for FuzzyNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_crisp() {
            return write!(f, "{}", self.levels[0].lower);
        }
        if let Some(t) = self.as_trapezoid() {
            return write!(f, "⌊{}, {}, {}, {}⌋", t.a, t.b, t.c, t.d);
        }
        write!(f, "{{")?;
        for (i, l) in self.levels.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}: [{}, {}]", l.alpha, l.lower, l.upper)?;
        }
        write!(f, "}}")
    }
}

impl Add for &FuzzyNumber {
    type Output = FuzzyNumber;
    fn add(self, rhs: &FuzzyNumber) -> FuzzyNumber {
        FuzzyNumber::add(self, rhs)
    }
}

impl Sub for &FuzzyNumber {
    type Output = FuzzyNumber;
    fn sub(self, rhs: &FuzzyNumber) -> FuzzyNumber {
        self.subtract(rhs)
    }
}

impl Neg for &FuzzyNumber {
    type Output = FuzzyNumber;
    fn neg(self) -> FuzzyNumber {
        self.scale(-1.0)
    }
}

impl Mul<&FuzzyNumber> for f64 {
    type Output = FuzzyNumber;
    fn mul(self, rhs: &FuzzyNumber) -> FuzzyNumber {
        rhs.scale(self)
    }
}

/// On-disk encodings: `{"trapezoid":[a,b,c,d]}`, `{"crisp":v}` or
/// `{"levels":[[alpha,lo,hi],...]}`.
#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
enum FuzzyRepr {
    Crisp(f64),
    Trapezoid([f64; 4]),
    Levels(Vec<[f64; 3]>),
}

impl TryFrom<FuzzyRepr> for FuzzyNumber {
    type Error = Error;

    fn try_from(repr: FuzzyRepr) -> Result<Self> {
        match repr {
            FuzzyRepr::Crisp(v) if v.is_finite() => Ok(FuzzyNumber::crisp(v)),
            FuzzyRepr::Crisp(v) => Err(Error::InvalidFuzzyNumber(format!("crisp value {v} is not finite"))),
            FuzzyRepr::Trapezoid([a, b, c, d]) => FuzzyNumber::trapezoid(a, b, c, d),
            FuzzyRepr::Levels(rows) => FuzzyNumber::from_levels(
                rows.into_iter().map(|[alpha, lower, upper]| Level { alpha, lower, upper }).collect(),
            ),
        }
    }
}

impl From<&FuzzyNumber> for FuzzyRepr {
    fn from(f: &FuzzyNumber) -> Self {
        if f.is_crisp() {
            FuzzyRepr::Crisp(f.levels[0].lower)
        } else if let Some(t) = f.as_trapezoid() {
            FuzzyRepr::Trapezoid([t.a, t.b, t.c, t.d])
        } else {
            FuzzyRepr::Levels(f.levels.iter().map(|l| [l.alpha, l.lower, l.upper]).collect())
        }
    }
}

impl Serialize for FuzzyNumber {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        FuzzyRepr::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FuzzyNumber {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = FuzzyRepr::deserialize(deserializer)?;
        FuzzyNumber::try_from(repr).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tri() -> FuzzyNumber {
        FuzzyNumber::trapezoid(0.0, 1.0, 1.0, 2.0).unwrap()
    }

    #[test]
    fn trapezoid_levels() {
        let f = tri();
        assert_eq!(
            f.levels(),
            &[Level { alpha: 0.0, lower: 0.0, upper: 2.0 }, Level { alpha: 1.0, lower: 1.0, upper: 1.0 }]
        );
        let g = FuzzyNumber::trapezoid(0.0, 0.5, 0.5, 1.0).unwrap();
        assert_eq!(g.alpha_cut(0.0).unwrap(), (0.0, 1.0));
        assert_eq!(g.alpha_cut(1.0).unwrap(), (0.5, 0.5));
    }

    #[test]
    fn trapezoid_rejects_disorder() {
        assert_eq!(
            FuzzyNumber::trapezoid(1.0, 0.0, 2.0, 3.0),
            Err(Error::InvalidTrapezoid(1.0, 0.0, 2.0, 3.0))
        );
        assert!(FuzzyNumber::trapezoid(0.0, f64::NAN, 1.0, 2.0).is_err());
    }

    #[test]
    fn crisp_values() {
        assert_eq!(FuzzyNumber::crisp(0.0).expected_value(), 0.0);
        let c = FuzzyNumber::crisp(3.5);
        for a in [0.0, 0.25, 0.7, 1.0] {
            assert_eq!(c.alpha_cut(a).unwrap(), (3.5, 3.5));
        }
        assert_eq!(FuzzyNumber::crisp(1.0).compare(&tri(), 0.0), OrderOutcome::Indifferent);
    }

    #[test]
    fn alpha_cut_interpolates() {
        assert_eq!(tri().alpha_cut(0.5).unwrap(), (0.5, 1.5));
        assert_eq!(FuzzyNumber::crisp(2.0).alpha_cut(0.3).unwrap(), (2.0, 2.0));
        assert_eq!(tri().alpha_cut(1.5), Err(Error::AlphaOutOfRange(1.5)));
        assert!(tri().alpha_cut(-0.1).is_err());
    }

    #[test]
    fn addition() {
        let sum = tri().add(&FuzzyNumber::trapezoid(1.0, 2.0, 2.0, 3.0).unwrap());
        assert_eq!(sum, FuzzyNumber::trapezoid(1.0, 3.0, 3.0, 5.0).unwrap());

        let shifted = tri().add(&FuzzyNumber::crisp(2.5));
        assert_eq!(shifted, tri().shift(2.5));
        assert_eq!(tri().add(&FuzzyNumber::crisp(0.0)), tri());
    }

    #[test]
    fn addition_merges_grids() {
        let three = FuzzyNumber::from_levels(vec![
            Level { alpha: 0.0, lower: 0.0, upper: 4.0 },
            Level { alpha: 0.5, lower: 1.0, upper: 2.0 },
            Level { alpha: 1.0, lower: 1.5, upper: 1.5 },
        ])
        .unwrap();
        let sum = three.add(&tri());
        let alphas: Vec<f64> = sum.levels().iter().map(|l| l.alpha).collect();
        assert_eq!(alphas, vec![0.0, 0.5, 1.0]);
        assert_eq!(sum.alpha_cut(0.5).unwrap(), (1.5, 3.5));
    }

    #[test]
    fn scaling() {
        assert_eq!(tri().scale(-1.0), FuzzyNumber::trapezoid(-2.0, -1.0, -1.0, 0.0).unwrap());
        assert_eq!(FuzzyNumber::crisp(3.0).scale(2.0), FuzzyNumber::crisp(6.0));
        assert_eq!(tri().scale(0.0), FuzzyNumber::crisp(0.0));
    }

    #[test]
    fn subtraction() {
        let d = tri().subtract(&tri());
        assert_eq!(d.expected_value(), 0.0);
        assert!(!d.is_crisp());
        let e = FuzzyNumber::trapezoid(1.0, 3.0, 3.0, 5.0).unwrap().subtract(&tri());
        assert_eq!(e.expected_value(), 2.0);
        assert_eq!(FuzzyNumber::crisp(5.0).subtract(&FuzzyNumber::crisp(2.0)), FuzzyNumber::crisp(3.0));
    }

    #[test]
    fn expected_values_of_reduction_coefficients() {
        assert_eq!(FuzzyNumber::trapezoid(0.0, 0.5, 0.5, 1.0).unwrap().expected_value(), 0.5);
        assert_eq!(FuzzyNumber::trapezoid(0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0).unwrap().expected_value(), 0.5);
        for b in [-5.0, -4.0, -0.75, 0.0] {
            let lin = FuzzyNumber::trapezoid(2.0 * b, b, b, 0.0).unwrap();
            assert_eq!(lin.expected_value(), b);
        }
        assert_eq!(FuzzyNumber::crisp(-7.25).expected_value(), -7.25);
    }

    #[test]
    fn ordering() {
        assert_eq!(tri().compare(&FuzzyNumber::crisp(1.0), 1e-12), OrderOutcome::Indifferent);
        assert_eq!(FuzzyNumber::crisp(2.0).compare(&FuzzyNumber::crisp(1.0), 0.0), OrderOutcome::Superior);
        assert_eq!(FuzzyNumber::crisp(1.0).compare(&FuzzyNumber::crisp(2.0), 0.0), OrderOutcome::Inferior);
        assert_eq!(tri().compare(&tri(), 0.0), OrderOutcome::Indifferent);
    }

    #[test]
    fn maximum() {
        let c = FuzzyNumber::crisp;
        assert_eq!(fuzzy_max(&[c(1.0), c(3.0), c(2.0)]).unwrap().0, 1);
        assert_eq!(fuzzy_max(&[tri(), c(1.0)]).unwrap().0, 0);
        assert_eq!(fuzzy_max(&[c(-1.0)]).unwrap().0, 0);
        assert!(matches!(fuzzy_max(&[]), Err(Error::EmptyInput(_))));
    }

    #[test]
    fn ladder_validation() {
        let lv = |alpha, lower, upper| Level { alpha, lower, upper };
        assert!(FuzzyNumber::from_levels(vec![lv(0.0, 0.0, 1.0)]).is_err());
        assert!(FuzzyNumber::from_levels(vec![lv(0.1, 0.0, 1.0), lv(1.0, 0.5, 0.5)]).is_err());
        assert!(FuzzyNumber::from_levels(vec![lv(0.0, 0.0, 1.0), lv(0.9, 0.5, 0.5)]).is_err());
        assert!(FuzzyNumber::from_levels(vec![lv(0.0, 0.6, 1.0), lv(1.0, 0.5, 0.5)]).is_err());
        assert!(FuzzyNumber::from_levels(vec![lv(0.0, 0.0, 1.0), lv(0.5, 0.2, 0.9), lv(0.5, 0.3, 0.8), lv(1.0, 0.5, 0.5)]).is_err());
        assert!(FuzzyNumber::from_levels(vec![lv(0.0, 0.0, 1.0), lv(1.0, 0.7, 0.6)]).is_err());
    }

    #[test]
    fn serde_encodings() {
        let f: FuzzyNumber = serde_json::from_str(r#"{"trapezoid":[0,1,1,2]}"#).unwrap();
        assert_eq!(f, tri());
        let c: FuzzyNumber = serde_json::from_str(r#"{"crisp":2.5}"#).unwrap();
        assert_eq!(c, FuzzyNumber::crisp(2.5));
        let l: FuzzyNumber = serde_json::from_str(r#"{"levels":[[0,0,4],[0.5,1,2],[1,1.5,1.5]]}"#).unwrap();
        assert_eq!(l.levels().len(), 3);
        assert_eq!(serde_json::to_string(&tri()).unwrap(), r#"{"trapezoid":[0.0,1.0,1.0,2.0]}"#);
        assert_eq!(serde_json::to_string(&c).unwrap(), r#"{"crisp":2.5}"#);
        let back: FuzzyNumber = serde_json::from_str(&serde_json::to_string(&l).unwrap()).unwrap();
        assert_eq!(back, l);
    }

    #[test]
    fn serde_reports_line_of_bad_value() {
        let text = "[\n  {\"crisp\": 1},\n  {\"trapezoid\": [3, 1, 2, 4]}]\n";
        let err = serde_json::from_str::<Vec<FuzzyNumber>>(text).unwrap_err();
        assert_eq!(err.line(), 3);
        assert!(err.to_string().contains("invalid trapezoid"));
    }
}
