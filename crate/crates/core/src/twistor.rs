//! Oriented 2-planes of R^4 as points of S^2 x S^2, Gauss-lift areas and
//! the vertical degree defects of Gauss-map families.

use num_complex::Complex;
use num_rational::BigRational;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::curvature::{RegionIntegral, integrate_region};
use crate::error::{FalloutError, Result};
use crate::exact::{RationalFamily, RationalFunction};
use crate::linalg::{Vec3, Vec4};
use crate::quadrature::{Kahan, QuadratureOptions, extrapolate_to_zero, place_spots, star_integrate};
use crate::roots::{aberth, winding_count};
use crate::scalar::Real;
use crate::surface::DiskSpec;

type C = Complex<f64>;

/// 2-vector `sum p_ij e_i ^ e_j`, components `(p12, p13, p14, p23, p24, p34)`.
pub type Bivector = [f64; 6];

pub fn wedge(u: &Vec4<f64>, v: &Vec4<f64>) -> Bivector {
    let m = |i: usize, j: usize| u[i] * v[j] - u[j] * v[i];
    [m(0, 1), m(0, 2), m(0, 3), m(1, 2), m(1, 3), m(2, 3)]
}

/// `P ^ P` as a multiple of the volume form (zero iff `P` is simple).
pub fn self_wedge(p: &Bivector) -> f64 {
    p[0] * p[5] - p[1] * p[4] + p[2] * p[3]
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpherePair {
    pub jplus: Vec3<f64>,
    pub jminus: Vec3<f64>,
}

/// Self-dual and anti-self-dual parts of a unit simple 2-vector, each
/// scaled to a unit vector of R^3. Bases: `e12 + e34, e14 + e23, e13 + e42`
/// and `e12 - e34, e13 + e24, e14 - e23`.
pub fn plane_to_spheres(p: &Bivector) -> Result<SpherePair> {
    let w = self_wedge(p);
    if w.abs() > 1e-9 {
        return Err(FalloutError::Input(format!("2-vector is not simple: P ^ P = {w}")));
    }
    let n: f64 = p.iter().map(|x| x * x).sum::<f64>().sqrt();
    if (n - 1.0).abs() > 1e-9 {
        return Err(FalloutError::Input(format!("2-vector is not unit: |P| = {n}")));
    }
    let [p12, p13, p14, p23, p24, p34] = *p;
    Ok(SpherePair { jplus: [p12 + p34, p14 + p23, p13 - p24], jminus: [p12 - p34, p13 + p24, p14 - p23] })
}

/// Inverse of [`plane_to_spheres`].
pub fn spheres_to_plane(s: &SpherePair) -> Bivector {
    let (a, b) = (s.jplus, s.jminus);
    [
        0.5 * (a[0] + b[0]),
        0.5 * (a[2] + b[1]),
        0.5 * (a[1] + b[2]),
        0.5 * (a[1] - b[2]),
        0.5 * (b[1] - a[2]),
        0.5 * (a[0] - b[0]),
    ]
}

#[derive(Clone, Debug, Serialize)]
pub struct LiftArea {
    pub lift_area: f64,
    pub surface_area: f64,
    pub b_l2: f64,
    /// `(1/2) int |B|^2`, which dominates the lift area pointwise.
    pub bound: f64,
}

/// Area of the Gauss lift of `{|F| <= eps}` in the Grassmannian.
pub fn lift_area(spec: &DiskSpec, eps: f64, opts: &QuadratureOptions) -> Result<LiftArea> {
    let ri: RegionIntegral = integrate_region(&spec.numeric::<f64>(), eps, opts)?;
    Ok(LiftArea { lift_area: ri.lift_area, surface_area: ri.area, b_l2: ri.b_l2, bound: 0.5 * ri.b_l2 })
}

fn num_coeffs(r: &RationalFunction) -> (Vec<C>, Vec<C>) {
    (r.num.to_num::<f64>(), r.den.to_num::<f64>())
}

/// Zeros of `num - w den` in `|z| < delta`, by root finding and by winding.
fn preimages_in_disk(r: &RationalFunction, w: C, delta: f64) -> Result<i64> {
    let (p, q) = num_coeffs(r);
    let n = p.len().max(q.len());
    let c: Vec<C> = (0..n).map(|k| p.get(k).copied().unwrap_or_default() - w * q.get(k).copied().unwrap_or_default()).collect();
    if c.iter().all(|a| a.norm() == 0.0) {
        return Err(FalloutError::Degenerate("generic value hit a constant map".into()));
    }
    if c.iter().skip(1).all(|a| a.norm() == 0.0) {
        return Ok(0);
    }
    let roots = aberth(&c)?;
    for z in &roots {
        if (z.norm() - delta).abs() < 1e-9 * delta {
            return Err(FalloutError::Precondition("preimage on the counting circle".into()));
        }
    }
    let by_roots = roots.iter().filter(|z| z.norm() < delta).count() as i64;
    let by_winding = winding_count(&c, C::new(0.0, 0.0), delta)?;
    if by_roots != by_winding {
        return Err(FalloutError::Resolution(format!("root count {by_roots} disagrees with winding count {by_winding}")));
    }
    Ok(by_roots)
}

/// `(1/4 pi) int_{|z| < delta} gamma^* (area form)`.
pub fn map_area(r: &RationalFunction, delta: f64, opts: &QuadratureOptions) -> Result<f64> {
    if r.is_infinity() || r.is_constant() {
        return Ok(0.0);
    }
    let (p, q) = num_coeffs(r);
    let dp: Vec<C> = r.num.derivative().to_num::<f64>();
    let dq: Vec<C> = r.den.derivative().to_num::<f64>();
    let ev = |c: &[C], z: C| crate::roots::eval(c, z);
    let mut centers = Vec::new();
    for poly in [&p, &q] {
        if poly.len() > 1 {
            for z in aberth(poly)? {
                if z.norm() < delta && z.norm() > 1e-6 * delta {
                    centers.push(z);
                }
            }
        }
    }
    let rmax = |_: f64| Ok(delta);
    let spots: Vec<_> = place_spots(&centers, &rmax, 0.0)?.into_iter().filter(|s| s.rho > 1e-12 * delta).collect();
    let mut acc = Kahan::default();
    star_integrate(&rmax, 0.0, &spots, opts, |z, w| {
        let (a, b) = (ev(&p, z), ev(&q, z));
        let j = ev(&dp, z) * b - a * ev(&dq, z);
        let s = a.norm_sqr() + b.norm_sqr();
        acc.add(w * 4.0 * j.norm_sqr() / (s * s));
        Ok(())
    })?;
    Ok(acc.value() / (4.0 * std::f64::consts::PI))
}

#[derive(Clone, Debug, Serialize)]
pub struct DefectRow {
    pub t: f64,
    pub delta: f64,
    /// Most frequent preimage-count difference over the sampled values.
    pub count: i64,
    /// Number of sampled values that disagreed with `count`.
    pub spread: usize,
    pub area_t: f64,
    pub area_0: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DefectReport {
    pub defect: f64,
    pub exact: i64,
    pub quadrature: f64,
    pub residual: f64,
    pub unconverged: bool,
    pub table: Vec<DefectRow>,
}

#[derive(Clone, Debug)]
pub struct DefectOptions {
    pub generic_values: usize,
    pub seed: u64,
    pub quadrature: bool,
    pub quad: QuadratureOptions,
}

impl Default for DefectOptions {
    fn default() -> Self {
        DefectOptions { generic_values: 7, seed: 17, quadrature: true, quad: QuadratureOptions::default() }
    }
}

/// Uniform point of the Riemann sphere in the affine chart.
fn generic_value(rng: &mut ChaCha8Rng) -> C {
    let u: f64 = rng.random_range(-0.999..0.999);
    let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    C::from_polar(((1.0 + u) / (1.0 - u)).sqrt(), phi)
}

/// `lim_{delta -> 0} lim_{t -> 0} [A(t, delta) - A(0, delta)]` for a family of
/// rational maps, where `A` is the normalized area of the image of `|z| < delta`.
pub fn vertical_defect(gamma: &RationalFamily, params: &[BigRational], deltas: &[f64], opts: &DefectOptions) -> Result<DefectReport> {
    if params.is_empty() || deltas.is_empty() {
        return Err(FalloutError::Input("vertical_defect needs non-empty t and delta grids".into()));
    }
    let g0 = gamma.limit().ok_or_else(|| FalloutError::Degenerate("limit Gauss map is 0/0".into()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut table = Vec::new();
    let mut per_delta_exact = Vec::new();
    let mut per_delta_quad = Vec::new();
    let mut residual_t: f64 = 0.0;
    for &delta in deltas {
        let area_0 = if opts.quadrature { map_area(&g0, delta, &opts.quad)? } else { f64::NAN };
        let mut col_exact = Vec::new();
        let mut col_quad = Vec::new();
        for t in params {
            let gt = gamma.at(t).ok_or_else(|| FalloutError::Degenerate("Gauss map is 0/0 at a family member".into()))?;
            let mut counts = Vec::new();
            let mut attempts = 0;
            while counts.len() < opts.generic_values && attempts < 10 * opts.generic_values {
                attempts += 1;
                let w = generic_value(&mut rng);
                match (preimages_in_disk(&gt, w, delta), preimages_in_disk(&g0, w, delta)) {
                    (Ok(a), Ok(b)) => counts.push(a - b),
                    (Err(FalloutError::Precondition(_)), _) | (_, Err(FalloutError::Precondition(_))) => continue,
                    (Err(e), _) | (_, Err(e)) => return Err(e),
                }
            }
            if counts.is_empty() {
                return Err(FalloutError::Resolution("no generic value gave a clean preimage count".into()));
            }
            let mut best = (0usize, 0i64);
            for &c in &counts {
                let k = counts.iter().filter(|&&x| x == c).count();
                if k > best.0 || (k == best.0 && c < best.1) {
                    best = (k, c);
                }
            }
            let area_t = if opts.quadrature { map_area(&gt, delta, &opts.quad)? } else { f64::NAN };
            let tf = <f64 as Real>::from_rational(t);
            table.push(DefectRow { t: tf, delta, count: best.1, spread: counts.len() - best.0, area_t, area_0 });
            col_exact.push((tf, best.1 as f64));
            col_quad.push((tf, area_t - area_0));
        }
        let e = extrapolate_to_zero(&col_exact);
        let q = extrapolate_to_zero(&col_quad);
        residual_t = residual_t.max(e.residual);
        per_delta_exact.push((delta, e.value));
        per_delta_quad.push((delta, q.value));
    }
    let e = extrapolate_to_zero(&per_delta_exact);
    let q = extrapolate_to_zero(&per_delta_quad);
    let exact = e.value.round() as i64;
    let residual = e.residual.max(residual_t);
    let spread = table.iter().any(|r| r.spread > 0);
    let quad_ok = !opts.quadrature || (q.value - exact as f64).abs() <= 0.1;
    Ok(DefectReport {
        defect: e.value,
        exact,
        quadrature: q.value,
        residual,
        unconverged: residual > crate::curvature::UNCONVERGED_RESIDUAL || spread || !quad_ok,
        table,
    })
}

/// Integral class of the bubbled current and the fallouts it determines.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct CurrentClass {
    pub a_plus: f64,
    pub a_minus: f64,
    pub n_plus: i64,
    pub n_minus: i64,
    pub rounding_error: f64,
    pub k_t: i64,
    pub k_n: i64,
}

/// Largest distance to an integer allowed for a defect.
pub const DEFECT_ROUNDING_TOL: f64 = 0.05;

/// `k^T + k^N = -2 a_+` and `k^T - k^N = -2 a_-`.
pub fn current_class(a_plus: f64, a_minus: f64) -> Result<CurrentClass> {
    let (np, nm) = (a_plus.round(), a_minus.round());
    let err = (a_plus - np).abs().max((a_minus - nm).abs());
    if !(err < DEFECT_ROUNDING_TOL) {
        return Err(FalloutError::Resolution(format!("defects ({a_plus}, {a_minus}) are not integral (error {err})")));
    }
    let (np, nm) = (np as i64, nm as i64);
    Ok(CurrentClass { a_plus, a_minus, n_plus: np, n_minus: nm, rounding_error: err, k_t: -(np + nm), k_n: nm - np })
}
