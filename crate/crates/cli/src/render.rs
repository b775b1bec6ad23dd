use fuzzyeq_core::Verification;

use crate::rational::hint;

/// Up to 12 significant decimals, trailing zeros trimmed.
pub fn num(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if x.abs() >= 1e6 || x.abs() < 1e-6 {
        return format!("{x:.6e}");
    }
    let s = format!("{x:.12}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

pub fn vector(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|&x| num(x)).collect();
    format!("({})", parts.join(", "))
}

/// Vector followed by an exact-fraction reading when every entry has one.
pub fn vector_with_hint(v: &[f64]) -> String {
    let hints: Option<Vec<String>> = v.iter().map(|&x| hint(x)).collect();
    match hints {
        Some(h) if v.iter().any(|x| x.fract() != 0.0) => format!("{}  ≈ ({})", vector(v), h.join(", ")),
        _ => vector(v),
    }
}

fn mark(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn max_of(v: &[f64]) -> f64 {
    v.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
}

/// The three equilibrium conditions with their residuals.
pub fn condition_lines(v: &Verification) -> String {
    format!(
        "Condition (1) {}  utility maximization: max optimality gap {:.3e}, max budget excess {:.3e}, min consumption {:.3e}\n\
         Condition (2) {}  price normalization: simplex residual {:.3e}\n\
         Condition (3) {}  market clearing: max excess demand {:.3e}, |<p, z>| {:.3e}\n",
        mark(v.condition1),
        max_of(&v.optimality_gaps),
        max_of(&v.budget_balance),
        v.min_consumption,
        mark(v.condition2),
        v.simplex_residual,
        mark(v.condition3),
        v.max_excess,
        v.complementarity.abs(),
    )
}
