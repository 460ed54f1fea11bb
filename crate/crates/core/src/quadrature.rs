//! Gauss-Legendre panels, graded break points and two-point extrapolation.

use num_complex::Complex;
use serde::Serialize;

use crate::error::Result;

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n {
        let mut t = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, t);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * t * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (t * p1 - p0) / (t * t - 1.0);
            let dt = p1 / dp;
            t -= dt;
            if dt.abs() < 1e-16 {
                break;
            }
        }
        x[i] = t;
        w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
    (x, w)
}

/// Fixed rule mapped onto panels.
#[derive(Clone, Debug)]
pub struct PanelRule {
    x: Vec<f64>,
    w: Vec<f64>,
}

impl PanelRule {
    pub fn new(order: usize) -> Self {
        let (x, w) = gauss_legendre(order);
        PanelRule { x, w }
    }

    /// `(node, weight)` pairs over the panels between consecutive breaks.
    pub fn nodes(&self, breaks: &[f64]) -> Vec<(f64, f64)> {
        let mut out = Vec::with_capacity(breaks.len() * self.x.len());
        for p in breaks.windows(2) {
            let (a, b) = (p[0], p[1]);
            let h = 0.5 * (b - a);
            let m = 0.5 * (a + b);
            for (x, w) in self.x.iter().zip(&self.w) {
                out.push((m + h * x, h * w));
            }
        }
        out
    }
}

/// Break points on `[a, b]`: `base` uniform panels refined geometrically
/// (ratio 1/2) toward each point of `hot` down to width `min_width`.
pub fn graded_breaks(a: f64, b: f64, base: usize, hot: &[f64], min_width: f64) -> Vec<f64> {
    let mut pts: Vec<f64> = (0..=base).map(|i| a + (b - a) * i as f64 / base as f64).collect();
    let top = (b - a) / base as f64;
    for &h in hot {
        if !(h >= a && h <= b) {
            continue;
        }
        pts.push(h);
        let mut w = top;
        while w > min_width {
            w *= 0.5;
            for p in [h - w, h + w] {
                if p > a && p < b {
                    pts.push(p);
                }
            }
        }
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup_by(|x, y| (*x - *y).abs() <= 1e-15 * (b - a).abs().max(1e-300));
    pts
}

/// Periodic version on `[0, 2 pi)`, hot angles taken modulo `2 pi`.
pub fn graded_breaks_periodic(base: usize, hot: &[f64], min_width: f64) -> Vec<f64> {
    let tau = std::f64::consts::TAU;
    let mut shifted = Vec::new();
    for &h in hot {
        let h = h.rem_euclid(tau);
        shifted.extend([h - tau, h, h + tau]);
    }
    graded_breaks(0.0, tau, base, &shifted, min_width)
}

#[derive(Clone, Debug)]
pub struct QuadratureOptions {
    pub order: usize,
    pub angular_panels: usize,
    pub radial_panels: usize,
    /// Smallest radial panel, relative to the boundary radius.
    pub radial_depth: f64,
    /// Smallest angular panel near a hot spot, in radians.
    pub angular_depth: f64,
    pub hot_spots: bool,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        QuadratureOptions { order: 8, angular_panels: 32, radial_panels: 8, radial_depth: 1e-10, angular_depth: 1e-8, hot_spots: true }
    }
}

/// Smooth cutoff: 1 on `[0, 1/2]`, 0 on `[1, inf)`.
pub fn bump(s: f64) -> f64 {
    if s <= 0.5 {
        return 1.0;
    }
    if s >= 1.0 {
        return 0.0;
    }
    let x = 2.0 * (1.0 - s);
    let psi = |u: f64| if u > 0.0 { (-1.0 / u).exp() } else { 0.0 };
    psi(x) / (psi(x) + psi(1.0 - x))
}

/// Disk of the partition of unity around a hot spot.
#[derive(Clone, Copy, Debug)]
pub struct Spot {
    pub center: Complex<f64>,
    pub rho: f64,
}

/// Disjoint disks around `centers` inside the star-shaped region
/// `r <= rmax(theta)`, clear of the origin disk of radius `r_excl`.
pub fn place_spots<R: Fn(f64) -> Result<f64>>(centers: &[Complex<f64>], rmax: &R, r_excl: f64) -> Result<Vec<Spot>> {
    let mut out: Vec<Spot> = Vec::new();
    for c in centers {
        let mut rho = 0.5 * (rmax(c.arg())? - c.norm());
        rho = rho.min(0.5 * (c.norm() - r_excl));
        for s in &out {
            rho = rho.min(0.5 * ((c - s.center).norm() - s.rho));
        }
        if rho > 0.0 {
            out.push(Spot { center: *c, rho });
        }
    }
    Ok(out)
}

/// Integrates over `{r_excl <= |z| <= rmax(arg z)}` by calling
/// `visit(z, weight)` per node. Each spot gets its own polar grid weighted by
/// a smooth bump; the global polar grid carries the complementary weight, so
/// point features away from the origin are resolved. Returns the node count.
pub fn star_integrate<R, V>(rmax: &R, r_excl: f64, spots: &[Spot], opts: &QuadratureOptions, mut visit: V) -> Result<usize>
where
    R: Fn(f64) -> Result<f64>,
    V: FnMut(Complex<f64>, f64) -> Result<()>,
{
    let cover = |z: Complex<f64>| -> f64 { spots.iter().map(|s| bump((z - s.center).norm() / s.rho)).sum() };
    let hot_angles: Vec<f64> = spots.iter().map(|s| s.center.arg()).collect();
    let ang_depth = spots.iter().map(|s| s.rho / s.center.norm() / 16.0).fold(opts.angular_depth, f64::max);
    let rule = PanelRule::new(opts.order);
    let mut nodes = 0usize;
    for (th, wt) in rule.nodes(&graded_breaks_periodic(opts.angular_panels, &hot_angles, ang_depth)) {
        let rm = rmax(th)?;
        let mut breaks = graded_breaks(r_excl, rm, opts.radial_panels, &[r_excl], opts.radial_depth * rm);
        for s in spots {
            if s.center.norm() < rm {
                breaks.extend(graded_breaks(r_excl, rm, 1, &[s.center.norm()], s.rho / 16.0));
            }
        }
        breaks.sort_by(f64::total_cmp);
        breaks.dedup_by(|x, y| (*x - *y).abs() <= 1e-15 * rm);
        let (c, s) = (th.cos(), th.sin());
        for (r, wr) in rule.nodes(&breaks) {
            let z = Complex::new(r * c, r * s);
            let w = 1.0 - cover(z);
            if w > 0.0 {
                visit(z, wt * wr * r * w)?;
                nodes += 1;
            }
        }
    }
    for sp in spots {
        let ang = rule.nodes(&graded_breaks_periodic(opts.angular_panels, &[], 1.0));
        let radial = rule.nodes(&graded_breaks(0.0, sp.rho, opts.radial_panels, &[0.0], opts.radial_depth * sp.rho));
        for &(th, wt) in &ang {
            let u = Complex::new(th.cos(), th.sin());
            for &(r, wr) in &radial {
                let w = bump(r / sp.rho);
                if w > 0.0 {
                    visit(sp.center + u * r, wt * wr * r * w)?;
                    nodes += 1;
                }
            }
        }
    }
    Ok(nodes)
}

/// Limit of `y(x)` as `x -> 0` from a line through the two smallest `x`.
#[derive(Clone, Copy, Debug, Serialize, PartialEq)]
pub struct Extrapolation {
    pub value: f64,
    /// `|fit - value at the smallest x|`
    pub residual: f64,
}

pub fn extrapolate_to_zero(points: &[(f64, f64)]) -> Extrapolation {
    let mut p: Vec<(f64, f64)> = points.to_vec();
    p.sort_by(|a, b| a.0.abs().total_cmp(&b.0.abs()));
    match p.len() {
        0 => Extrapolation { value: f64::NAN, residual: f64::INFINITY },
        1 => Extrapolation { value: p[0].1, residual: f64::INFINITY },
        _ => {
            let (x0, y0) = p[0];
            let (x1, y1) = p[1];
            if x0 == x1 {
                return Extrapolation { value: y0, residual: (y0 - y1).abs() };
            }
            let b = (y1 - y0) / (x1 - x0);
            let a = y0 - b * x0;
            Extrapolation { value: a, residual: (a - y0).abs() }
        }
    }
}

/// Kahan-compensated accumulator; fixed summation order keeps results
/// reproducible.
#[derive(Clone, Copy, Debug, Default)]
pub struct Kahan {
    sum: f64,
    c: f64,
}

impl Kahan {
    pub fn add(&mut self, x: f64) {
        let y = x - self.c;
        let t = self.sum + y;
        self.c = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_rule_integrates_polynomials() {
        let r = PanelRule::new(8);
        let nodes = r.nodes(&[0.0, 0.5, 2.0]);
        let s: f64 = nodes.iter().map(|(x, w)| w * x.powi(15)).sum();
        assert!((s - 2f64.powi(16) / 16.0).abs() < 1e-9);
        let (_, w) = gauss_legendre(16);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn grading_reaches_min_width() {
        let b = graded_breaks(0.0, 1.0, 4, &[0.0, 0.3], 1e-6);
        assert_eq!(b[0], 0.0);
        assert!(b[1] <= 1e-6 * 2.0);
        assert!(b.windows(2).all(|w| w[1] > w[0]));
        let near = b.iter().filter(|&&x| (x - 0.3).abs() < 1e-5).count();
        assert!(near >= 4);
    }

    #[test]
    fn linear_extrapolation() {
        let e = extrapolate_to_zero(&[(0.02, 1.2), (0.01, 1.1), (0.04, 5.0)]);
        assert!((e.value - 1.0).abs() < 1e-12);
        assert!((e.residual - 0.1).abs() < 1e-12);
    }
}
