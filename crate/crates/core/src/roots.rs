//! Polynomial roots by Aberth-Ehrlich iteration and zero counting by the
//! argument principle.

use num_complex::Complex;

use crate::error::{FalloutError, Result};

type C = Complex<f64>;

/// Horner value and derivative; coefficients lowest degree first.
fn eval_with_derivative(c: &[C], z: C) -> (C, C) {
    let mut p = C::new(0.0, 0.0);
    let mut dp = C::new(0.0, 0.0);
    for a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

pub fn eval(c: &[C], z: C) -> C {
    c.iter().rev().fold(C::new(0.0, 0.0), |acc, a| acc * z + a)
}

fn trim(c: &[C]) -> &[C] {
    let mut n = c.len();
    while n > 0 && c[n - 1] == C::new(0.0, 0.0) {
        n -= 1;
    }
    &c[..n]
}

/// All roots of the polynomial with coefficients `c` (lowest degree first),
/// with multiplicity.
pub fn aberth(c: &[C]) -> Result<Vec<C>> {
    let c = trim(c);
    if c.is_empty() {
        return Err(FalloutError::Degenerate("zero polynomial has no isolated roots".into()));
    }
    // exact zero roots first
    let v = c.iter().take_while(|a| **a == C::new(0.0, 0.0)).count();
    let c = &c[v..];
    let n = c.len() - 1;
    let mut roots = vec![C::new(0.0, 0.0); v];
    if n == 0 {
        return Ok(roots);
    }
    let lead = c[n].norm();
    // Cauchy-type radius for the initial circle
    let rad = c[..n].iter().map(|a| a.norm() / lead).fold(0.0f64, |m, x| m.max(x));
    let r0 = (1.0 + rad).min(1e6).max(1e-6);
    let mut z: Vec<C> =
        (0..n).map(|k| C::from_polar(r0, std::f64::consts::TAU * (k as f64 + 0.25) / n as f64 + 0.4)).collect();
    let scale: f64 = c.iter().map(|a| a.norm()).sum();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (p, dp) = eval_with_derivative(c, z[i]);
            if p.norm() <= 1e-15 * scale * (1.0 + z[i].norm()).powi(n as i32) {
                continue;
            }
            let ratio = p / dp;
            let mut s = C::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    s += C::new(1.0, 0.0) / (z[i] - z[j]);
                }
            }
            let w = ratio / (C::new(1.0, 0.0) - ratio * s);
            if w.is_finite() {
                z[i] -= w;
                moved = moved.max(w.norm() / (1.0 + z[i].norm()));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    if z.iter().any(|r| !r.is_finite()) {
        return Err(FalloutError::Convergence("Aberth iteration produced non-finite roots".into()));
    }
    roots.extend(z);
    Ok(roots)
}

/// Number of zeros of `c` in `|z - center| < radius` by the winding of the
/// polynomial along the circle, refined until every step turns less than
/// a quarter turn.
pub fn winding_count(c: &[C], center: C, radius: f64) -> Result<i64> {
    let c = trim(c);
    let mut n = 64usize.max(16 * c.len());
    for _ in 0..12 {
        let mut total = 0.0;
        let mut ok = true;
        let vals: Vec<C> = (0..n).map(|k| eval(c, center + C::from_polar(radius, std::f64::consts::TAU * k as f64 / n as f64))).collect();
        let scale = vals.iter().map(|v| v.norm()).fold(0.0, f64::max);
        for k in 0..n {
            let (a, b) = (vals[k], vals[(k + 1) % n]);
            if a.norm() < 1e-14 * scale {
                return Err(FalloutError::Precondition("zero on the counting circle".into()));
            }
            let d = (b / a).arg();
            if d.abs() > std::f64::consts::FRAC_PI_2 {
                ok = false;
                break;
            }
            total += d;
        }
        if ok {
            return Ok((total / std::f64::consts::TAU).round() as i64);
        }
        n *= 2;
    }
    Err(FalloutError::Resolution("winding count did not resolve".into()))
}
