/// Smallest-denominator fraction within `tol` of `x`, found by walking the
/// continued-fraction convergents.
pub fn approximate(x: f64, max_den: i64, tol: f64) -> Option<(i64, i64)> {
    if !x.is_finite() {
        return None;
    }
    let (mut p0, mut q0, mut p1, mut q1) = (0i64, 1i64, 1i64, 0i64);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a.abs() > 1e12 {
            return None;
        }
        let a = a as i64;
        let (p2, q2) = (a * p1 + p0, a * q1 + q0);
        if q2 > max_den {
            return None;
        }
        if (x - p2 as f64 / q2 as f64).abs() <= tol {
            return Some((p2, q2));
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = r - a as f64;
        if frac == 0.0 {
            return None;
        }
        r = 1.0 / frac;
    }
    None
}

pub fn hint(x: f64) -> Option<String> {
    let tol = 1e-8 * x.abs().max(1.0);
    approximate(x, 1000, tol).map(|(p, q)| if q == 1 { p.to_string() } else { format!("{p}/{q}") })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_small_fractions() {
        assert_eq!(hint(7.0 / 11.0).as_deref(), Some("7/11"));
        assert_eq!(hint(116.0 / 65.0).as_deref(), Some("116/65"));
        assert_eq!(hint(-0.5).as_deref(), Some("-1/2"));
        assert_eq!(hint(3.0).as_deref(), Some("3"));
        assert_eq!(hint(std::f64::consts::PI), None);
        assert_eq!(hint(0.6364), None);
    }
}
