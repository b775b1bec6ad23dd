//! Euclidean projections onto the price simplex and onto budget sets.

/// Projection onto `{p >= 0, Σ p = 1}` by sort-and-threshold.
pub fn project_simplex(v: &[f64]) -> Vec<f64> {
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut theta = 0.0;
    for (k, &s) in sorted.iter().enumerate() {
        cumulative += s;
        let t = (cumulative - 1.0) / (k + 1) as f64;
        if s - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|&x| (x - theta).max(0.0)).collect()
}

/// Projection onto `{x >= 0, ⟨p, x⟩ <= budget}` for `p >= 0`, `budget >= 0`.
///
/// When the clipped point is unaffordable the result is `max(y - θp, 0)` with
/// `θ > 0` chosen so the budget binds. Goods with zero price are only clipped.
pub fn project_budget(y: &[f64], p: &[f64], budget: f64) -> Vec<f64> {
    let clipped: Vec<f64> = y.iter().map(|&v| v.max(0.0)).collect();
    let spend: f64 = clipped.iter().zip(p).map(|(x, q)| x * q).sum();
    if spend <= budget {
        return clipped;
    }
    // spend(θ) = Σ p_h max(y_h - θ p_h, 0) is piecewise linear and decreasing;
    // walk its breakpoints y_h / p_h from the top.
    let mut active: Vec<(f64, f64, f64)> = y
        .iter()
        .zip(p)
        .filter(|&(&v, &q)| q > 0.0 && v > 0.0)
        .map(|(&v, &q)| (v / q, v, q))
        .collect();
    active.sort_by(|a, b| b.0.total_cmp(&a.0));
    let (mut sum_py, mut sum_pp) = (0.0, 0.0);
    let mut theta = 0.0;
    for (k, &(brk, v, q)) in active.iter().enumerate() {
        sum_py += q * v;
        sum_pp += q * q;
        let t = (sum_py - budget) / sum_pp;
        let next = active.get(k + 1).map_or(0.0, |a| a.0);
        if t >= next && t <= brk {
            theta = t;
            break;
        }
        theta = t;
    }
    y.iter()
        .zip(p)
        .map(|(&v, &q)| if q > 0.0 { (v - theta * q).max(0.0) } else { v.max(0.0) })
        .collect()
}
