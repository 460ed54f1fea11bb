//! Links cut out by small spheres, stereographic projection, linking and
//! self-linking numbers, and double points of immersed family members.

use std::collections::HashMap;

use num_complex::Complex;
use num_rational::BigRational;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{FalloutError, Result};
use crate::linalg::{Vec3, Vec4, axpy, cross, det4, dist, dot, norm, normalize, scale, solve, sub};
use crate::scalar::Real;
use crate::surface::{DiskSpec, FamilySpec, NumDisk, branching_data};

/// Closed polyline sampled at increasing domain angles.
#[derive(Clone, Debug)]
pub struct SpaceCurveSample<T> {
    pub points: Vec<Vec4<T>>,
    pub theta: Vec<T>,
    /// Smallest distance between consecutive samples.
    pub min_step: T,
}

/// Link on `S^3(eps)` with a transverse framing vector per point.
#[derive(Clone, Debug)]
pub struct FramedLink<T> {
    pub components: Vec<SpaceCurveSample<T>>,
    pub framing: Vec<Vec<Vec4<T>>>,
    pub epsilon: T,
    /// Total number of strands (sum of branching orders of the sliced disks).
    pub strands: u32,
    /// Stereographic pole and braid axis direction, unit vectors.
    pub pole: Vec4<T>,
    pub axis: Vec4<T>,
}

pub const FRAMING_TOL: f64 = 1e-8;

/// Cuts `spec` with the sphere of radius `eps` at `m` uniformly spaced
/// angles. The framing is the constant transverse vector of the branching
/// frame.
pub fn slice_sphere<T: Real>(spec: &DiskSpec, eps: T, m: usize) -> Result<FramedLink<T>> {
    let bd = branching_data::<T>(spec)?;
    let n = bd.n as usize;
    if m < 64 * n {
        return Err(FalloutError::Input(format!("need at least 64 N = {} samples, got {m}", 64 * n)));
    }
    let d = spec.numeric::<T>();
    let mut points = Vec::with_capacity(m);
    let mut theta = Vec::with_capacity(m);
    for i in 0..m {
        let th = T::tau() * T::from_usize_lossy(i) / T::from_usize_lossy(m);
        let r = match d.boundary_radius(th, eps) {
            Ok(r) => r,
            Err(FalloutError::Precondition(msg)) => {
                let best = largest_admissible_epsilon(&d, eps, m.min(512));
                return Err(FalloutError::Precondition(format!("{msg}; largest admissible eps found: {best}")));
            }
            Err(e) => return Err(e),
        };
        points.push(d.eval(Complex::new(r * th.cos(), r * th.sin())));
        theta.push(th);
    }
    let x = bd.frame.e[2];
    let framing = vec![x; m];
    let mut min_step = T::infinity();
    for i in 0..m {
        min_step = min_step.min(dist(&points[i], &points[(i + 1) % m]));
    }
    if !(min_step > T::zero()) {
        return Err(FalloutError::Resolution("repeated sample points on the link".into()));
    }
    let link = FramedLink {
        components: vec![SpaceCurveSample { points, theta, min_step }],
        framing: vec![framing],
        epsilon: eps,
        strands: bd.n,
        pole: bd.frame.e[3],
        axis: bd.frame.e[2],
    };
    link.check_framing()?;
    Ok(link)
}

/// Largest eps below `eps` on a 0.7 ratio ladder passing the graph-regime test.
fn largest_admissible_epsilon<T: Real>(d: &NumDisk<T>, eps: T, m: usize) -> f64 {
    let mut e = eps;
    for _ in 0..60 {
        e *= T::lit(0.7);
        let ok = (0..m).all(|i| d.boundary_radius(T::tau() * T::from_usize_lossy(i) / T::from_usize_lossy(m), e).is_ok());
        if ok {
            return e.to_f64_lossy();
        }
    }
    0.0
}

impl<T: Real> FramedLink<T> {
    /// Joins links cut from several disks; each keeps its own framing.
    pub fn union(parts: Vec<FramedLink<T>>) -> Result<FramedLink<T>> {
        let mut it = parts.into_iter();
        let mut out = it.next().ok_or_else(|| FalloutError::Input("empty link union".into()))?;
        for p in it {
            out.components.extend(p.components);
            out.framing.extend(p.framing);
            out.strands += p.strands;
        }
        Ok(out)
    }

    /// Framing is neither radial nor tangent (relative to `FRAMING_TOL`).
    pub fn check_framing(&self) -> Result<()> {
        let tol = T::lit(FRAMING_TOL);
        for (c, fr) in self.components.iter().zip(&self.framing) {
            let m = c.points.len();
            for i in 0..m {
                let p = &c.points[i];
                let tan = sub(&c.points[(i + 1) % m], &c.points[(i + m - 1) % m]);
                let x = &fr[i];
                let s = transverse_part(x, p, &tan);
                if !(norm(&s) > tol * norm(x)) {
                    return Err(FalloutError::Precondition(format!("framing vector radial or tangent at sample {i}")));
                }
            }
        }
        Ok(())
    }
}

/// Component of `x` orthogonal to the radial direction `p` and the tangent `tan`.
pub fn transverse_part<T: Real>(x: &Vec4<T>, p: &Vec4<T>, tan: &Vec4<T>) -> Vec4<T> {
    let mut s = *x;
    if let Some(u) = normalize(p) {
        s = axpy(&s, -dot(&s, &u), &u);
    }
    let t = axpy(tan, -dot(tan, p) / dot(p, p), p);
    if let Some(u) = normalize(&t) {
        s = axpy(&s, -dot(&s, &u), &u);
    }
    s
}

/// Projected polylines in R^3 with their framing directions.
#[derive(Clone, Debug)]
pub struct ProjectedLink<T> {
    pub curves: Vec<Vec<Vec3<T>>>,
    pub framing: Vec<Vec<Vec3<T>>>,
}

/// Orthonormal basis with `pole` last, chosen to keep the link's own
/// frame when the pole is its default.
fn basis_with_pole<T: Real>(pole: &Vec4<T>, hint: &Vec4<T>) -> [Vec4<T>; 4] {
    let mut cands: Vec<Vec4<T>> = vec![*hint];
    for l in 0..4 {
        cands.push(std::array::from_fn(|i| if i == l { T::one() } else { T::zero() }));
    }
    let mut basis: Vec<Vec4<T>> = vec![*pole];
    for c in cands {
        let mut v = c;
        for b in &basis {
            v = axpy(&v, -dot(&v, b), b);
        }
        if norm(&v) > T::lit(1e-6) {
            basis.push(normalize(&v).unwrap());
        }
        if basis.len() == 4 {
            break;
        }
    }
    let e3 = basis[1];
    let e1 = basis[2];
    let e2 = basis[3];
    // orientation: (e1, e2, e3, pole) positive
    let e2 = if det4([&e1, &e2, &e3, pole]) < T::zero() { scale(&e2, -T::one()) } else { e2 };
    [e1, e2, e3, *pole]
}

/// Stereographic projection of the unit-sphere rescaling of the link from
/// `pole`, in coordinates `y_k = <x, b_k> / (1 - <x, pole>)`. The third
/// basis vector is the link's axis direction made orthogonal to the pole.
pub fn stereographic<T: Real>(link: &FramedLink<T>, pole: &Vec4<T>) -> Result<ProjectedLink<T>> {
    let pole = normalize(pole).ok_or_else(|| FalloutError::Input("zero pole vector".into()))?;
    let b = basis_with_pole(&pole, &link.axis);
    let lim = T::lit(0.05);
    let mut curves = Vec::new();
    let mut framing = Vec::new();
    for (c, fr) in link.components.iter().zip(&link.framing) {
        let mut pts = Vec::with_capacity(c.points.len());
        let mut frs = Vec::with_capacity(c.points.len());
        for (p, x) in c.points.iter().zip(fr) {
            let u = scale(p, T::one() / norm(p));
            if dist(&u, &pole) < lim {
                return Err(FalloutError::Precondition(format!(
                    "pole within 0.05 of the link (distance {}); retry with a perturbed pole",
                    dist(&u, &pole)
                )));
            }
            let den = T::one() - dot(&u, &pole);
            let y: Vec3<T> = std::array::from_fn(|k| dot(&u, &b[k]) / den);
            // differential of the projection applied to x
            let dx = dot(x, &pole);
            let v: Vec3<T> = std::array::from_fn(|k| (dot(x, &b[k]) + y[k] * dx) / den);
            pts.push(y);
            frs.push(v);
        }
        curves.push(pts);
        framing.push(frs);
    }
    Ok(ProjectedLink { curves, framing })
}

/// Oriented line `point + s * direction`.
#[derive(Clone, Copy, Debug)]
pub struct Axis<T> {
    pub point: Vec3<T>,
    pub direction: Vec3<T>,
}

impl<T: Real> Axis<T> {
    /// The third coordinate axis of [`stereographic`].
    pub fn standard() -> Self {
        Axis { point: [T::zero(); 3], direction: [T::zero(), T::zero(), T::one()] }
    }
}

fn polyline_max_segment(c: &[Vec3<f64>]) -> f64 {
    let m = c.len();
    (0..m).map(|i| dist(&c[i], &c[(i + 1) % m])).fold(0.0, f64::max)
}

fn cell_of(p: &Vec3<f64>, h: f64) -> [i64; 3] {
    std::array::from_fn(|k| (p[k] / h).floor() as i64)
}

/// Smallest vertex distance between two polylines, if below `h`.
fn clearance_below(c1: &[Vec3<f64>], c2: &[Vec3<f64>], h: f64) -> Option<f64> {
    let mut grid: HashMap<[i64; 3], Vec<usize>> = HashMap::new();
    for (i, p) in c2.iter().enumerate() {
        grid.entry(cell_of(p, h)).or_default().push(i);
    }
    let mut best = f64::INFINITY;
    for p in c1 {
        let c = cell_of(p, h);
        for dx in -1..=1 {
            for dy in -1..=1 {
                for dz in -1..=1 {
                    if let Some(v) = grid.get(&[c[0] + dx, c[1] + dy, c[2] + dz]) {
                        for &j in v {
                            best = best.min(dist(p, &c2[j]));
                        }
                    }
                }
            }
        }
    }
    (best < h).then_some(best)
}

/// Solid angle of segment pair `(a0 a1, b0 b1)` over `4 pi`.
fn segment_pair_linking(a0: &Vec3<f64>, a1: &Vec3<f64>, b0: &Vec3<f64>, b1: &Vec3<f64>) -> f64 {
    let r13 = sub(b0, a0);
    let r14 = sub(b1, a0);
    let r23 = sub(b0, a1);
    let r24 = sub(b1, a1);
    let ns = [cross(&r13, &r14), cross(&r14, &r24), cross(&r24, &r23), cross(&r23, &r13)];
    let mut n = [[0.0; 3]; 4];
    for (k, v) in ns.iter().enumerate() {
        match normalize(v) {
            Some(u) => n[k] = u,
            None => return 0.0,
        }
    }
    let mut omega = 0.0;
    for k in 0..4 {
        omega += dot(&n[k], &n[(k + 1) % 4]).clamp(-1.0, 1.0).asin();
    }
    let s = dot(&cross(&sub(b1, b0), &sub(a1, a0)), &r13);
    omega * s.signum() / (4.0 * std::f64::consts::PI)
}

/// Midpoints and edge vectors of a closed polyline.
fn segments(c: &[Vec3<f64>]) -> Vec<(Vec3<f64>, Vec3<f64>)> {
    let m = c.len();
    (0..m)
        .map(|i| {
            let (a, b) = (&c[i], &c[(i + 1) % m]);
            (std::array::from_fn(|k| 0.5 * (a[k] + b[k])), sub(b, a))
        })
        .collect()
}

fn midpoint_kernel(ma: &Vec3<f64>, da: &Vec3<f64>, mb: &Vec3<f64>, db: &Vec3<f64>) -> (f64, f64) {
    let r = [ma[0] - mb[0], ma[1] - mb[1], ma[2] - mb[2]];
    let r2 = r[0] * r[0] + r[1] * r[1] + r[2] * r[2];
    let cx = [da[1] * db[2] - da[2] * db[1], da[2] * db[0] - da[0] * db[2], da[0] * db[1] - da[1] * db[0]];
    (r2, (cx[0] * r[0] + cx[1] * r[1] + cx[2] * r[2]) / (r2 * r2.sqrt()))
}

/// Fine segments per coarse segment in [`gauss_linking_sum`].
const COARSE: usize = 8;

/// Gauss double sum: exact segment-pair solid angles for pairs closer than
/// eight segment lengths, the midpoint kernel for the rest. Far apart runs
/// of `COARSE` segments are lumped into their chords first, with the same
/// eight-lengths rule at the coarse scale.
pub fn gauss_linking_sum(c1: &[Vec3<f64>], c2: &[Vec3<f64>]) -> f64 {
    let (m1, m2) = (c1.len(), c2.len());
    let s1 = segments(c1);
    let s2 = segments(c2);
    let len = s1.iter().chain(&s2).map(|(_, d)| norm(d)).fold(0.0, f64::max);
    let near2 = (8.0 * len) * (8.0 * len);
    let coarse = |c: &[Vec3<f64>]| -> (Vec<usize>, Vec<Vec3<f64>>) {
        let starts: Vec<usize> = (0..c.len()).step_by(COARSE).collect();
        let pts = starts.iter().map(|&i| c[i]).collect();
        (starts, pts)
    };
    let (b1, p1) = coarse(c1);
    let (b2, p2) = coarse(c2);
    let g1 = segments(&p1);
    let g2 = segments(&p2);
    let big = g1.iter().chain(&g2).map(|(_, d)| norm(d)).fold(0.0, f64::max);
    let far2 = (8.0 * big) * (8.0 * big);
    let inv4pi = 1.0 / (4.0 * std::f64::consts::PI);
    let range = |b: &[usize], k: usize, m: usize| b[k]..b.get(k + 1).copied().unwrap_or(m);
    let mut total = crate::quadrature::Kahan::default();
    for (bi, (ga, da)) in g1.iter().enumerate() {
        let mut row = 0.0;
        for (bj, (gb, db)) in g2.iter().enumerate() {
            let (r2, k) = midpoint_kernel(ga, da, gb, db);
            if r2 >= far2 {
                row += inv4pi * k;
                continue;
            }
            for i in range(&b1, bi, m1) {
                let (ma, da) = &s1[i];
                for j in range(&b2, bj, m2) {
                    let (mb, db) = &s2[j];
                    let (r2, k) = midpoint_kernel(ma, da, mb, db);
                    if r2 < near2 {
                        row += segment_pair_linking(&c1[i], &c1[(i + 1) % m1], &c2[j], &c2[(j + 1) % m2]);
                    } else {
                        row += inv4pi * k;
                    }
                }
            }
        }
        total.add(row);
    }
    total.value()
}

/// Signed crossings of `c1` over/under `c2` in the projection along `dir`, halved.
pub fn crossing_linking(c1: &[Vec3<f64>], c2: &[Vec3<f64>], dir: &Vec3<f64>) -> Result<f64> {
    let d = normalize(dir).ok_or_else(|| FalloutError::Input("zero projection direction".into()))?;
    let mut u = cross(&d, &[1.0, 0.0, 0.0]);
    if norm(&u) < 0.5 {
        u = cross(&d, &[0.0, 1.0, 0.0]);
    }
    let u = normalize(&u).unwrap();
    let v = cross(&d, &u);
    let proj = |p: &Vec3<f64>| [dot(p, &u), dot(p, &v), dot(p, &d)];
    let p1: Vec<Vec3<f64>> = c1.iter().map(proj).collect();
    let p2: Vec<Vec3<f64>> = c2.iter().map(proj).collect();
    let h = polyline_max_segment(&p1).max(polyline_max_segment(&p2)).max(1e-300);
    let cell = |p: &Vec3<f64>| [(p[0] / h).floor() as i64, (p[1] / h).floor() as i64];
    let mut grid: HashMap<[i64; 2], Vec<usize>> = HashMap::new();
    let m2 = p2.len();
    for j in 0..m2 {
        let (a, b) = (&p2[j], &p2[(j + 1) % m2]);
        let ca = cell(a);
        let cb = cell(b);
        for x in ca[0].min(cb[0])..=ca[0].max(cb[0]) {
            for y in ca[1].min(cb[1])..=ca[1].max(cb[1]) {
                grid.entry([x, y]).or_default().push(j);
            }
        }
    }
    let m1 = p1.len();
    let mut seen = std::collections::HashSet::new();
    let mut total = 0i64;
    for i in 0..m1 {
        let (a, b) = (&p1[i], &p1[(i + 1) % m1]);
        let ca = cell(a);
        let cb = cell(b);
        for x in ca[0].min(cb[0])..=ca[0].max(cb[0]) {
            for y in ca[1].min(cb[1])..=ca[1].max(cb[1]) {
                let Some(list) = grid.get(&[x, y]) else { continue };
                for &j in list {
                    if !seen.insert((i, j)) {
                        continue;
                    }
                    let (c, e) = (&p2[j], &p2[(j + 1) % m2]);
                    let r = [b[0] - a[0], b[1] - a[1]];
                    let s = [e[0] - c[0], e[1] - c[1]];
                    let den = r[0] * s[1] - r[1] * s[0];
                    if den == 0.0 {
                        continue;
                    }
                    let q = [c[0] - a[0], c[1] - a[1]];
                    let t1 = (q[0] * s[1] - q[1] * s[0]) / den;
                    let t2 = (q[0] * r[1] - q[1] * r[0]) / den;
                    if !(0.0..1.0).contains(&t1) || !(0.0..1.0).contains(&t2) {
                        continue;
                    }
                    let z1 = a[2] + t1 * (b[2] - a[2]);
                    let z2 = c[2] + t2 * (e[2] - c[2]);
                    if (z1 - z2).abs() < 1e-12 * h {
                        return Err(FalloutError::Resolution("curves meet in the projection direction".into()));
                    }
                    // over strand direction x under strand direction, against the view direction
                    let cr = r[0] * s[1] - r[1] * s[0];
                    let sign = if z1 > z2 { cr.signum() } else { -cr.signum() };
                    total += sign as i64;
                }
            }
        }
    }
    Ok(total as f64 / 2.0)
}

#[derive(Clone, Debug, Serialize)]
pub struct LinkingReport {
    pub value: i64,
    pub gauss_sum: f64,
    pub crossing_count: f64,
    pub clearance: f64,
}

/// Linking number of two disjoint closed polylines, two ways.
pub fn linking_number(c1: &[Vec3<f64>], c2: &[Vec3<f64>], seed: u64) -> Result<LinkingReport> {
    if c1.len() < 3 || c2.len() < 3 {
        return Err(FalloutError::Input("curves need at least 3 points".into()));
    }
    let h = 10.0 * polyline_max_segment(c1).max(polyline_max_segment(c2));
    if let Some(c) = clearance_below(c1, c2, h) {
        return Err(FalloutError::Precondition(format!(
            "curve clearance {c} below 10x the longest segment ({h}); resample more densely"
        )));
    }
    let g = gauss_linking_sum(c1, c2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut crossing = None;
    for _ in 0..8 {
        let dir: Vec3<f64> = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
        if norm(&dir) < 0.1 {
            continue;
        }
        match crossing_linking(c1, c2, &dir) {
            Ok(v) => {
                crossing = Some(v);
                break;
            }
            Err(FalloutError::Resolution(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    let x = crossing.ok_or_else(|| FalloutError::Resolution("no generic projection direction found".into()))?;
    let v = g.round();
    if (g - v).abs() > 0.1 || (x - v).abs() > 1e-9 {
        return Err(FalloutError::Resolution(format!("linking estimates disagree: Gauss sum {g}, crossings {x}")));
    }
    Ok(LinkingReport { value: v as i64, gauss_sum: g, crossing_count: x, clearance: h / 10.0 })
}

/// Arc-length resampling to segments of length at most `h`, carrying a
/// per-point vector along by linear interpolation.
pub fn resample(c: &[Vec3<f64>], f: &[Vec3<f64>], h: f64) -> (Vec<Vec3<f64>>, Vec<Vec3<f64>>) {
    let m = c.len();
    let mut pts = Vec::new();
    let mut frs = Vec::new();
    for i in 0..m {
        let (a, b) = (&c[i], &c[(i + 1) % m]);
        let (fa, fb) = (&f[i], &f[(i + 1) % m]);
        let k = ((dist(a, b) / h).ceil() as usize).max(1);
        for s in 0..k {
            let t = s as f64 / k as f64;
            pts.push(std::array::from_fn(|q| a[q] + t * (b[q] - a[q])));
            frs.push(std::array::from_fn(|q| fa[q] + t * (fb[q] - fa[q])));
        }
    }
    (pts, frs)
}

/// Smallest distance between points of the link that are not arc-length
/// neighbours (arc separation above 4x their distance), capped at `cap`.
pub fn thickness(curves: &[Vec<Vec3<f64>>], cap: f64) -> f64 {
    let mut arcs: Vec<Vec<f64>> = Vec::new();
    let mut total = Vec::new();
    for c in curves {
        let mut s = vec![0.0];
        for i in 1..=c.len() {
            s.push(s[i - 1] + dist(&c[i - 1], &c[i % c.len()]));
        }
        total.push(*s.last().unwrap());
        s.pop();
        arcs.push(s);
    }
    let mut grid: HashMap<[i64; 3], Vec<(usize, usize)>> = HashMap::new();
    for (ci, c) in curves.iter().enumerate() {
        for (i, p) in c.iter().enumerate() {
            grid.entry(cell_of(p, cap)).or_default().push((ci, i));
        }
    }
    let mut best = cap;
    for (ci, c) in curves.iter().enumerate() {
        for (i, p) in c.iter().enumerate() {
            let cc = cell_of(p, cap);
            for dx in -1..=1 {
                for dy in -1..=1 {
                    for dz in -1..=1 {
                        let Some(list) = grid.get(&[cc[0] + dx, cc[1] + dy, cc[2] + dz]) else { continue };
                        for &(cj, j) in list {
                            let dd = dist(p, &curves[cj][j]);
                            if dd >= best {
                                continue;
                            }
                            let sep = if ci != cj {
                                f64::INFINITY
                            } else {
                                let a = (arcs[ci][i] - arcs[ci][j]).abs();
                                a.min(total[ci] - a)
                            };
                            if sep > 4.0 * dd {
                                best = dd;
                            }
                        }
                    }
                }
            }
        }
    }
    best
}

#[derive(Clone, Debug, Serialize)]
pub struct SelfLinkingReport {
    pub value: i64,
    pub deltas: Vec<f64>,
    pub values: Vec<i64>,
}

/// Total linking of the link with its push-off along the transverse part
/// of the framing, summed over all component pairs.
pub fn self_linking(link: &FramedLink<f64>, seed: u64) -> Result<SelfLinkingReport> {
    link.check_framing()?;
    // push-off directions in R^4, then projected
    let mut pushed = link.clone();
    for (c, fr) in pushed.components.iter().zip(pushed.framing.iter_mut()) {
        let m = c.points.len();
        for i in 0..m {
            let tan = sub(&c.points[(i + 1) % m], &c.points[(i + m - 1) % m]);
            let s = transverse_part(&fr[i], &c.points[i], &tan);
            fr[i] = scale(&s, 1.0 / norm(&s));
        }
    }
    let proj = stereographic(&pushed, &link.pole)?;
    let scale0 = proj.curves.iter().flatten().map(norm).fold(0.0, f64::max).max(1.0);
    let th = thickness(&proj.curves, 0.5 * scale0);
    let mut delta = 0.25 * th;
    let mut deltas = Vec::new();
    let mut values = Vec::new();
    for _ in 0..8 {
        let mut total = 0i64;
        let resampled: Vec<(Vec<Vec3<f64>>, Vec<Vec3<f64>>)> =
            proj.curves.iter().zip(&proj.framing).map(|(c, f)| resample(c, f, delta / 12.0)).collect();
        let shifted: Vec<Vec<Vec3<f64>>> = resampled
            .iter()
            .map(|(c, f)| c.iter().zip(f).map(|(p, v)| axpy(p, delta / norm(v), v)).collect())
            .collect();
        for (a, _) in &resampled {
            for b in &shifted {
                total += linking_number(a, b, seed)?.value;
            }
        }
        deltas.push(delta);
        values.push(total);
        let k = values.len();
        if k >= 2 && values[k - 1] == values[k - 2] {
            return Ok(SelfLinkingReport { value: total, deltas, values });
        }
        delta *= 0.5;
    }
    Err(FalloutError::Convergence(format!("self-linking did not stabilize: {values:?}")))
}

#[derive(Clone, Debug, Serialize)]
pub struct DoublePoint {
    pub z: [f64; 2],
    pub w: [f64; 2],
    pub sign: i8,
}

#[derive(Clone, Debug, Serialize)]
pub struct DoublePointReport {
    pub count: i64,
    pub points: Vec<DoublePoint>,
    pub unresolved: usize,
    pub reliable: bool,
}

enum PairSolve {
    Converged(Complex<f64>, Complex<f64>),
    /// Damped Newton stalled at a positive minimum of `|F(z) - F(w)|`.
    NearMiss,
    Unresolved,
}

fn newton_pair(d: &NumDisk<f64>, z0: Complex<f64>, w0: Complex<f64>) -> PairSolve {
    let (mut z, mut w) = (z0, w0);
    let scale = norm(&d.eval(z)).max(1e-300);
    let mut g = sub(&d.eval(z), &d.eval(w));
    for _ in 0..100 {
        if norm(&g) < 1e-14 * scale {
            return PairSolve::Converged(z, w);
        }
        let jz = d.jet(z);
        let jw = d.jet(w);
        let mut a = [[0.0; 4]; 4];
        for i in 0..4 {
            a[i] = [jz.fx[i], jz.fy[i], -jw.fx[i], -jw.fy[i]];
        }
        let Some(step) = solve(a, scale_neg(g)) else { return PairSolve::NearMiss };
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..30 {
            let zn = z + Complex::new(lambda * step[0], lambda * step[1]);
            let wn = w + Complex::new(lambda * step[2], lambda * step[3]);
            if zn.norm() <= d.radius && wn.norm() <= d.radius {
                let gn = sub(&d.eval(zn), &d.eval(wn));
                if norm(&gn) < norm(&g) {
                    z = zn;
                    w = wn;
                    g = gn;
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !accepted {
            return if norm(&g) < 1e-11 * scale { PairSolve::Converged(z, w) } else { PairSolve::NearMiss };
        }
    }
    if norm(&g) < 1e-11 * scale { PairSolve::Converged(z, w) } else { PairSolve::Unresolved }
}

fn scale_neg(v: Vec4<f64>) -> Vec4<f64> {
    scale(&v, -1.0)
}

/// Signed count of double points of the member at `t` inside `{|F| < eps}`.
pub fn double_points(family: &FamilySpec, t: &BigRational, eps: f64) -> Result<DoublePointReport> {
    let member = family.at(t)?;
    let d = member.numeric::<f64>();
    let r_box = crate::curvature::region_extent(&d, eps)?;
    family.immersion_check(t, r_box, crate::curvature::CONDITIONING_TOL)?;
    double_points_of(&d, eps, r_box)
}

/// Double points of a fixed disk inside `{|F| < eps}`, `r_box` bounding the region.
pub fn double_points_of(d: &NumDisk<f64>, eps: f64, r_box: f64) -> Result<DoublePointReport> {
    let nt = 384usize;
    let dtheta = std::f64::consts::TAU / nt as f64;
    let nr = ((1e5f64).ln() / dtheta).ceil() as usize + 1;
    let q = (1e-5f64).powf(1.0 / (nr - 1) as f64);
    struct S {
        block: (usize, usize),
        z: Complex<f64>,
        p: Vec4<f64>,
        s: f64,
        lo: f64,
    }
    let mut samples = Vec::new();
    for i in 0..nr {
        let r = r_box * q.powi(i as i32);
        for k in 0..nt {
            let th = std::f64::consts::TAU * (k as f64 + 0.5 * (i % 2) as f64) / nt as f64;
            let z = Complex::from_polar(r, th);
            let j = d.jet(z);
            if norm(&j.p) > eps * 1.05 {
                continue;
            }
            let (lo, hi) = crate::linalg::singular_values_2(&j.fx, &j.fy);
            let spacing = r * dtheta.max(1.0 - q);
            samples.push(S { block: (i / 4, k / 4), z, p: j.p, s: hi * spacing, lo });
        }
    }
    let c_max = samples.iter().map(|s| s.s).fold(0.0, f64::max).max(1e-300);
    let level = |s: f64| -> u32 { ((c_max / s).log2().floor().max(0.0) as u32).min(60) };
    let cell = |p: &Vec4<f64>, h: f64| -> [i64; 4] { std::array::from_fn(|k| (p[k] / h).floor() as i64) };
    let mut grids: Vec<HashMap<[i64; 4], Vec<usize>>> = Vec::new();
    for (idx, s) in samples.iter().enumerate() {
        let l = level(s.s) as usize;
        if grids.len() <= l {
            grids.resize_with(l + 1, HashMap::new);
        }
        let h = c_max * 0.5f64.powi(l as i32);
        grids[l].entry(cell(&s.p, h)).or_default().push(idx);
    }
    let mut candidates = Vec::new();
    for (i, s) in samples.iter().enumerate() {
        let li = level(s.s) as usize;
        for (l, g) in grids.iter().enumerate().take(li + 1) {
            let h = c_max * 0.5f64.powi(l as i32);
            let base: [i64; 4] = std::array::from_fn(|k| (s.p[k] / h - 0.5).floor() as i64);
            for mask in 0..16 {
                let key: [i64; 4] = std::array::from_fn(|k| base[k] + ((mask >> k) & 1) as i64);
                let Some(list) = g.get(&key) else { continue };
                for &j in list {
                    if j == i || (l == li && j < i) {
                        continue;
                    }
                    let o = &samples[j];
                    let dz = (s.z - o.z).norm();
                    let df = dist(&s.p, &o.p);
                    if df < s.s.max(o.s) && df < 0.5 * s.lo.min(o.lo) * dz {
                        candidates.push((i, j));
                    }
                }
            }
        }
    }
    // Seeds are grouped by coarse blocks of the sample grid; each unordered
    // block pair gets at most two Newton attempts.
    let mut tried: HashMap<((usize, usize), (usize, usize)), u8> = HashMap::new();
    let mut found: Vec<(Complex<f64>, Complex<f64>)> = Vec::new();
    let mut unresolved = 0;
    for (i, j) in candidates {
        let (bi, bj) = (samples[i].block, samples[j].block);
        let key = if bi <= bj { (bi, bj) } else { (bj, bi) };
        let n = tried.entry(key).or_insert(0);
        if *n >= 2 {
            continue;
        }
        let (z0, w0) = (samples[i].z, samples[j].z);
        match newton_pair(d, z0, w0) {
            PairSolve::Converged(z, w) => {
                *n = 2;
                let sep = (z - w).norm();
                if sep < 1e-8 * r_box || norm(&d.eval(z)) >= eps {
                    continue;
                }
                if !found.iter().any(|(a, b)| near_pair(a, b, &z, &w, 1e-9 * r_box)) {
                    found.push((z, w));
                }
            }
            PairSolve::NearMiss => *n += 1,
            PairSolve::Unresolved => {
                *n += 1;
                if *n == 2 {
                    unresolved += 1;
                }
            }
        }
    }
    let mut points = Vec::new();
    let mut count = 0i64;
    for (z, w) in found {
        let jz = d.jet(z);
        let jw = d.jet(w);
        let det = det4([&jz.fx, &jz.fy, &jw.fx, &jw.fy]);
        let sign: i8 = if det > 0.0 { 1 } else { -1 };
        count += sign as i64;
        points.push(DoublePoint { z: [z.re, z.im], w: [w.re, w.im], sign });
    }
    points.sort_by(|a, b| a.z[0].total_cmp(&b.z[0]).then(a.z[1].total_cmp(&b.z[1])));
    Ok(DoublePointReport { count, points, unresolved, reliable: unresolved == 0 })
}

fn near_pair(a: &Complex<f64>, b: &Complex<f64>, z: &Complex<f64>, w: &Complex<f64>, tol: f64) -> bool {
    ((a - z).norm() < tol && (b - w).norm() < tol) || ((a - w).norm() < tol && (b - z).norm() < tol)
}
