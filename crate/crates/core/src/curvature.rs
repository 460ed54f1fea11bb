//! Second fundamental form, curvature densities, quadrature over the
//! preimage of an eps-ball, fallout extrapolation and the boundary checks.

use num_complex::Complex;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{FalloutError, Result};
use crate::linalg::{Vec4, axpy, det4, dot, norm, normalize, scale, singular_values_2};
pub use crate::quadrature::QuadratureOptions;
use crate::quadrature::{Extrapolation, Kahan, extrapolate_to_zero, place_spots, star_integrate};
use crate::scalar::Real;
use crate::scan;
use crate::surface::{DiskSpec, FamilySpec, Frame, Jet, NumDisk};

/// `B(e_a, e_b)` in normal coordinates `(e3, e4)` of `frame`.
#[derive(Clone, Copy, Debug)]
pub struct SecondFundamentalForm<T> {
    pub frame: Frame<T>,
    pub b11: [T; 2],
    pub b12: [T; 2],
    pub b22: [T; 2],
    /// `|F_x ^ F_y|`, the area element per unit parameter area.
    pub area_element: T,
}

/// Unit vector completing `(a, b, c)` to a positively oriented frame.
pub fn complete_frame<T: Real>(a: &Vec4<T>, b: &Vec4<T>, c: &Vec4<T>) -> Vec4<T> {
    let basis = |l: usize| -> Vec4<T> { std::array::from_fn(|i| if i == l { T::one() } else { T::zero() }) };
    let v: Vec4<T> = std::array::from_fn(|l| det4([a, b, c, &basis(l)]));
    normalize(&v).unwrap_or(v)
}

/// Orthonormal normal pair for the tangent pair `(e1, e2)`, oriented.
pub fn normal_completion<T: Real>(e1: &Vec4<T>, e2: &Vec4<T>) -> (Vec4<T>, Vec4<T>) {
    let mut best: Option<(T, Vec4<T>)> = None;
    for l in 0..4 {
        let mut v: Vec4<T> = std::array::from_fn(|i| if i == l { T::one() } else { T::zero() });
        v = axpy(&v, -dot(&v, e1), e1);
        v = axpy(&v, -dot(&v, e2), e2);
        let n = norm(&v);
        if best.as_ref().is_none_or(|(m, _)| n > *m) {
            best = Some((n, v));
        }
    }
    let (n, v) = best.unwrap();
    let e3 = scale(&v, T::one() / n);
    let e4 = complete_frame(e1, e2, &e3);
    (e3, e4)
}

/// Tangent frame from the jet by Gram-Schmidt, with the inverse of the
/// triangular factor: `e1 = F(a1)`, `e2 = F(a2)` for parameter vectors `a1, a2`.
fn tangent_frame<T: Real>(j: &Jet<T>) -> Option<(Vec4<T>, Vec4<T>, [[T; 2]; 2], T)> {
    let r11 = norm(&j.fx);
    let e1 = normalize(&j.fx)?;
    let r12 = dot(&j.fy, &e1);
    let v = axpy(&j.fy, -r12, &e1);
    let r22 = norm(&v);
    let e2 = normalize(&v)?;
    let a1 = [T::one() / r11, T::zero()];
    let a2 = [-r12 / (r11 * r22), T::one() / r22];
    Some((e1, e2, [a1, a2], r11 * r22))
}

pub fn sff_from_jet<T: Real>(d: &NumDisk<T>, z: Complex<T>, j: &Jet<T>, tol: T) -> Result<SecondFundamentalForm<T>> {
    let (lo, _) = singular_values_2(&j.fx, &j.fy);
    let sc = d.derivative_scale(z.norm());
    if !(lo > tol * sc) {
        return Err(FalloutError::Conditioning(format!(
            "sigma_min(dF) = {lo} below {tol} x scale {sc} at z = {}",
            z
        )));
    }
    let (e1, e2, a, area) =
        tangent_frame(j).ok_or_else(|| FalloutError::Conditioning(format!("degenerate tangent frame at z = {z}")))?;
    let (e3, e4) = normal_completion(&e1, &e2);
    let hess = |p: &[T; 2], q: &[T; 2]| -> Vec4<T> {
        std::array::from_fn(|i| {
            j.fxx[i] * p[0] * q[0] + j.fxy[i] * (p[0] * q[1] + p[1] * q[0]) + j.fyy[i] * p[1] * q[1]
        })
    };
    let proj = |h: Vec4<T>| [dot(&h, &e3), dot(&h, &e4)];
    Ok(SecondFundamentalForm {
        frame: Frame { e: [e1, e2, e3, e4], orientation: 1 },
        b11: proj(hess(&a[0], &a[0])),
        b12: proj(hess(&a[0], &a[1])),
        b22: proj(hess(&a[1], &a[1])),
        area_element: area,
    })
}

pub const CONDITIONING_TOL: f64 = 1e-10;

pub fn second_fundamental_form<T: Real>(spec: &DiskSpec, z: Complex<T>) -> Result<SecondFundamentalForm<T>> {
    let d = spec.numeric::<T>();
    d.check_domain(z)?;
    let j = d.jet(z);
    sff_from_jet(&d, z, &j, T::lit(CONDITIONING_TOL))
}

impl<T: Real> SecondFundamentalForm<T> {
    /// `-|B12|^2 + <B11, B22>`
    pub fn omega_t(&self) -> T {
        -(self.b12[0] * self.b12[0] + self.b12[1] * self.b12[1]) + self.b11[0] * self.b22[0] + self.b11[1] * self.b22[1]
    }

    /// `(B11 - B22) ^ B12` in the oriented normal frame.
    pub fn omega_n(&self) -> T {
        let a = [self.b11[0] - self.b22[0], self.b11[1] - self.b22[1]];
        a[0] * self.b12[1] - a[1] * self.b12[0]
    }

    pub fn trace(&self) -> [T; 2] {
        [self.b11[0] + self.b22[0], self.b11[1] + self.b22[1]]
    }

    /// `|B|^2 = sum_ab |B(e_a, e_b)|^2`
    pub fn norm_sq(&self) -> T {
        let n = |v: &[T; 2]| v[0] * v[0] + v[1] * v[1];
        n(&self.b11) + T::two() * n(&self.b12) + n(&self.b22)
    }

    /// Area density of the Gauss lift in the Grassmannian (metric induced
    /// from the unit 2-vectors), per unit surface area.
    pub fn lift_density(&self) -> T {
        let ip = |u: &[T; 2], v: &[T; 2]| u[0] * v[0] + u[1] * v[1];
        let g11 = ip(&self.b11, &self.b11) + ip(&self.b12, &self.b12);
        let g22 = ip(&self.b12, &self.b12) + ip(&self.b22, &self.b22);
        let g12 = ip(&self.b11, &self.b12) + ip(&self.b12, &self.b22);
        (g11 * g22 - g12 * g12).max(T::zero()).sqrt()
    }

    /// Signed Jacobians `(J+, J-)` of the two sphere factors of the Gauss
    /// lift, per unit surface area.
    pub fn sphere_jacobians(&self) -> (T, T) {
        let (x11, y11) = (self.b11[0], self.b11[1]);
        let (x12, y12) = (self.b12[0], self.b12[1]);
        let (x22, y22) = (self.b22[0], self.b22[1]);
        let jp = (y12 - x11) * (x22 + y12) - (x12 + y11) * (y22 - x12);
        let jm = (x12 - y11) * (y22 + x12) - (y12 + x11) * (x22 - y12);
        (jp, jm)
    }
}

/// `(Omega^T, Omega^N)` per unit area at `z`.
pub fn curvature_densities<T: Real>(spec: &DiskSpec, z: Complex<T>) -> Result<(T, T)> {
    let b = second_fundamental_form(spec, z)?;
    Ok((b.omega_t(), b.omega_n()))
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct CurvatureSample {
    pub z: [f64; 2],
    pub area_weight: f64,
    pub omega_t: f64,
    pub omega_n: f64,
}

/// Integrals over `{z : |F(z)| <= eps}` in parameter space.
#[derive(Clone, Debug, Default, Serialize)]
pub struct RegionIntegral {
    pub omega_t: f64,
    pub omega_n: f64,
    pub area: f64,
    pub b_l2: f64,
    pub lift_area: f64,
    pub j_plus: f64,
    pub j_minus: f64,
    pub nodes: usize,
    /// Bound on the curvature mass of the excluded disk around a branch
    /// point, in units of `2 pi`.
    pub excluded_bound: f64,
    pub exclusion_radius: f64,
}

/// Largest boundary radius over a ring of rays.
pub fn region_extent(d: &NumDisk<f64>, eps: f64) -> Result<f64> {
    let mut m: f64 = 0.0;
    for k in 0..64 {
        m = m.max(d.boundary_radius(std::f64::consts::TAU * k as f64 / 64.0, eps)?);
    }
    Ok(m)
}

/// True when `dF(0)` is degenerate, i.e. the disk is branched at 0.
pub fn branched_at_origin(d: &NumDisk<f64>, r_ref: f64) -> bool {
    let (lo, _) = d.singular_values(Complex::new(0.0, 0.0));
    lo <= CONDITIONING_TOL * d.derivative_scale(r_ref)
}

pub fn integrate_region(d: &NumDisk<f64>, eps: f64, opts: &QuadratureOptions) -> Result<RegionIntegral> {
    let r_box = region_extent(d, eps)?;
    let branched = branched_at_origin(d, r_box);
    let r_excl = if branched {
        let lead = d.leading_norm();
        1e-4 * (eps / lead).powf(1.0 / d.n_min as f64)
    } else {
        0.0
    };
    let spots: Vec<scan::HotSpot> = if opts.hot_spots {
        scan::hot_spots(d, r_box * 1.05).into_iter().filter(|s| s.ratio < 0.2 && s.z.norm() > 2.0 * r_excl).take(6).collect()
    } else {
        Vec::new()
    };
    let centers: Vec<Complex<f64>> = spots.iter().map(|s| s.z).collect();
    let rmax = |th: f64| d.boundary_radius(th, eps);
    let disks = place_spots(&centers, &rmax, r_excl)?;
    let tol = CONDITIONING_TOL;
    let mut acc: [Kahan; 7] = Default::default();
    let nodes = star_integrate(&rmax, r_excl, &disks, opts, |z, w| {
        let j = d.jet(z);
        let b = sff_from_jet(d, z, &j, tol)?;
        let w = w * b.area_element;
        let (jp, jm) = b.sphere_jacobians();
        let vals = [b.omega_t(), b.omega_n(), 1.0, b.norm_sq(), b.lift_density(), jp, jm];
        for (a, v) in acc.iter_mut().zip(vals) {
            a.add(w * v);
        }
        Ok(())
    })?;
    let mut excluded = 0.0;
    if r_excl > 0.0 {
        let mut peak: f64 = 0.0;
        for k in 0..64 {
            let z = Complex::from_polar(r_excl, std::f64::consts::TAU * (k as f64 + 0.5) / 64.0);
            if let Ok(b) = sff_from_jet(d, z, &d.jet(z), 0.0) {
                peak = peak.max(b.omega_t().abs().max(b.omega_n().abs()) * b.area_element);
            }
        }
        excluded = peak * r_excl * r_excl / 2.0;
    }
    Ok(RegionIntegral {
        omega_t: acc[0].value(),
        omega_n: acc[1].value(),
        area: acc[2].value(),
        b_l2: acc[3].value(),
        lift_area: acc[4].value(),
        j_plus: acc[5].value(),
        j_minus: acc[6].value(),
        nodes,
        excluded_bound: excluded,
        exclusion_radius: r_excl,
    })
}

/// One `(eps, t)` cell of the fallout table.
#[derive(Clone, Debug, Serialize)]
pub struct GridValue {
    pub epsilon: f64,
    pub t: f64,
    pub k_t: f64,
    pub k_n: f64,
    pub nodes: usize,
    pub excluded_bound: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct FalloutEstimate {
    pub k_t: f64,
    pub k_n: f64,
    pub epsilon_grid: Vec<f64>,
    pub parameter_grid: Vec<f64>,
    pub residual: f64,
    pub unconverged: bool,
    pub table: Vec<GridValue>,
}

/// Residual above which an extrapolated estimate is flagged.
pub const UNCONVERGED_RESIDUAL: f64 = 0.05;

pub fn integrate_fallout(
    family: &FamilySpec,
    eps_list: &[f64],
    t_list: &[BigRational],
    opts: &QuadratureOptions,
) -> Result<FalloutEstimate> {
    if eps_list.is_empty() || t_list.is_empty() {
        return Err(FalloutError::Input("integrate_fallout needs non-empty eps and t grids".into()));
    }
    let tau = std::f64::consts::TAU;
    let mut table = Vec::new();
    let mut per_eps_t = Vec::new();
    let mut per_eps_n = Vec::new();
    let mut residual_t: f64 = 0.0;
    let mut excluded: f64 = 0.0;
    for &eps in eps_list {
        let mut col_t = Vec::new();
        let mut col_n = Vec::new();
        for t in t_list {
            let member = family.at(t)?;
            let d = member.numeric::<f64>();
            let tf = crate::scalar::Real::from_rational(t);
            if tf != 0.0 {
                let r_box = region_extent(&d, eps)?;
                family.immersion_check(t, r_box, CONDITIONING_TOL)?;
            }
            let ri = integrate_region(&d, eps, opts)?;
            let (kt, kn) = (ri.omega_t / tau, ri.omega_n / tau);
            excluded = excluded.max(ri.excluded_bound / tau);
            table.push(GridValue { epsilon: eps, t: tf, k_t: kt, k_n: kn, nodes: ri.nodes, excluded_bound: ri.excluded_bound / tau });
            col_t.push((tf, kt));
            col_n.push((tf, kn));
        }
        let et = extrapolate_to_zero(&col_t);
        let en = extrapolate_to_zero(&col_n);
        residual_t = residual_t.max(et.residual).max(en.residual);
        per_eps_t.push((eps, et.value));
        per_eps_n.push((eps, en.value));
    }
    let Extrapolation { value: kt, residual: rt } = extrapolate_to_zero(&per_eps_t);
    let Extrapolation { value: kn, residual: rn } = extrapolate_to_zero(&per_eps_n);
    let residual = rt.max(rn) + residual_t + excluded;
    Ok(FalloutEstimate {
        k_t: kt,
        k_n: kn,
        epsilon_grid: eps_list.to_vec(),
        parameter_grid: t_list.iter().map(crate::scalar::Real::from_rational).collect(),
        residual,
        unconverged: !(residual <= UNCONVERGED_RESIDUAL),
        table,
    })
}

/// Boundary curve data at `m` uniformly spaced angles.
struct BoundaryPoint {
    jet: Jet<f64>,
    tangent: Vec4<f64>,
}

fn boundary(d: &NumDisk<f64>, eps: f64, m: usize) -> Result<Vec<BoundaryPoint>> {
    let mut out = Vec::with_capacity(m);
    for i in 0..m {
        let th = std::f64::consts::TAU * i as f64 / m as f64;
        let r = d.boundary_radius(th, eps)?;
        let (c, s) = (th.cos(), th.sin());
        let z = Complex::new(r * c, r * s);
        let jet = d.jet(z);
        let fr: Vec4<f64> = std::array::from_fn(|k| c * jet.fx[k] + s * jet.fy[k]);
        let ft: Vec4<f64> = std::array::from_fn(|k| r * (-s * jet.fx[k] + c * jet.fy[k]));
        let rp = -dot(&jet.p, &ft) / dot(&jet.p, &fr);
        let tangent = axpy(&ft, rp, &fr);
        out.push(BoundaryPoint { jet, tangent });
    }
    Ok(out)
}

fn wrap(a: f64) -> f64 {
    let tau = std::f64::consts::TAU;
    let mut x = a.rem_euclid(tau);
    if x > std::f64::consts::PI {
        x -= tau;
    }
    x
}

#[derive(Clone, Debug, Serialize)]
pub struct GaussBonnetReport {
    pub curvature_term: f64,
    pub boundary_term: f64,
    pub euler_characteristic: i64,
    /// Branch-point correction `N - 1` counted when the region contains one.
    pub branch_correction: i64,
    pub residual: f64,
}

/// `(1/2pi) int Omega^T + (1/2pi) oint k_g - chi`, with `chi = 1` for the
/// disk preimage, plus the branching order when the disk is branched at 0.
pub fn gauss_bonnet_check(spec: &DiskSpec, eps: f64, m: usize, opts: &QuadratureOptions) -> Result<GaussBonnetReport> {
    let d = spec.numeric::<f64>();
    let ri = integrate_region(&d, eps, opts)?;
    let pts = boundary(&d, eps, m)?;
    let frames: Vec<(Vec4<f64>, Vec4<f64>)> = pts
        .iter()
        .map(|p| tangent_frame(&p.jet).map(|(e1, e2, _, _)| (e1, e2)))
        .collect::<Option<_>>()
        .ok_or_else(|| FalloutError::Conditioning("degenerate frame on the boundary".into()))?;
    let phi: Vec<f64> = pts.iter().zip(&frames).map(|(p, (e1, e2))| dot(&p.tangent, e2).atan2(dot(&p.tangent, e1))).collect();
    let mut total = Kahan::default();
    for i in 0..m {
        let k = (i + 1) % m;
        total.add(wrap(phi[k] - phi[i]));
        let (a1, a2) = &frames[i];
        let (b1, b2) = &frames[k];
        total.add(0.5 * (dot(b1, a2) - dot(a1, b2)));
    }
    let tau = std::f64::consts::TAU;
    let branch = if ri.exclusion_radius > 0.0 { d.n_min as i64 - 1 } else { 0 };
    let curvature_term = ri.omega_t / tau;
    let boundary_term = total.value() / tau;
    Ok(GaussBonnetReport {
        curvature_term,
        boundary_term,
        euler_characteristic: 1,
        branch_correction: branch,
        residual: curvature_term + boundary_term - 1.0 - branch as f64,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct NormalStokesReport {
    pub curvature_term: f64,
    pub boundary_term: f64,
    pub zero_indices: Vec<(f64, f64, i64)>,
    pub residual: f64,
}

fn normal_part(x: &Vec4<f64>, e1: &Vec4<f64>, e2: &Vec4<f64>) -> Vec4<f64> {
    let v = axpy(x, -dot(x, e1), e1);
    axpy(&v, -dot(&v, e2), e2)
}

/// Sum of `wrap(d alpha) + A^N` around a closed loop of jets, with the
/// normal frame carried by projection from step to step.
fn normal_winding(jets: &[Jet<f64>], x: &Vec4<f64>) -> Result<f64> {
    let m = jets.len();
    let frame0 = tangent_frame(&jets[0]).ok_or_else(|| FalloutError::Conditioning("degenerate frame".into()))?;
    let (mut n3, mut n4) = normal_completion(&frame0.0, &frame0.1);
    let (mut e1, mut e2) = (frame0.0, frame0.1);
    let angle = |s: &Vec4<f64>, n3: &Vec4<f64>, n4: &Vec4<f64>| dot(s, n4).atan2(dot(s, n3));
    let s0 = normal_part(x, &e1, &e2);
    if norm(&s0) < 1e-12 * norm(x) {
        return Err(FalloutError::Precondition("projected section vanishes on the loop".into()));
    }
    let mut alpha = angle(&s0, &n3, &n4);
    let mut total = Kahan::default();
    for i in 1..=m {
        let j = &jets[i % m];
        let (f1, f2, _, _) = tangent_frame(j).ok_or_else(|| FalloutError::Conditioning("degenerate frame".into()))?;
        let p3 = normal_part(&n3, &f1, &f2);
        let m3 = normalize(&p3).ok_or_else(|| FalloutError::Resolution("normal frame transport failed".into()))?;
        let m4 = complete_frame(&f1, &f2, &m3);
        total.add(0.5 * (dot(&m3, &n4) - dot(&n3, &m4)));
        let s = normal_part(x, &f1, &f2);
        if norm(&s) < 1e-12 * norm(x) {
            return Err(FalloutError::Precondition("projected section vanishes on the loop".into()));
        }
        let a = angle(&s, &m3, &m4);
        total.add(wrap(a - alpha));
        alpha = a;
        n3 = m3;
        n4 = m4;
        e1 = f1;
        e2 = f2;
    }
    let _ = (e1, e2);
    Ok(total.value())
}

/// Zeros of the normal projection of `x` inside `{|F| <= eps}`.
fn section_zeros(d: &NumDisk<f64>, eps: f64, x: &Vec4<f64>) -> Result<Vec<Complex<f64>>> {
    let r_box = region_extent(d, eps)?;
    let size = |z: Complex<f64>| -> f64 {
        let j = d.jet(z);
        match tangent_frame(&j) {
            Some((e1, e2, _, _)) => norm(&normal_part(x, &e1, &e2)),
            None => f64::INFINITY,
        }
    };
    let nr = 60;
    let nt = 96;
    let q = (1e-7f64).powf(1.0 / (nr - 1) as f64);
    let radii: Vec<f64> = (0..nr).map(|i| r_box * q.powi(i as i32)).collect();
    let mut zeros: Vec<Complex<f64>> = Vec::new();
    let grid: Vec<Vec<f64>> = radii
        .iter()
        .map(|&r| (0..nt).map(|k| size(Complex::from_polar(r, std::f64::consts::TAU * (k as f64 + 0.5) / nt as f64))).collect())
        .collect();
    let xn = norm(x);
    for i in 0..nr {
        for k in 0..nt {
            let v = grid[i][k];
            let mut is_min = true;
            for di in [-1i32, 0, 1] {
                for dk in [-1i32, 0, 1] {
                    let ii = i as i32 + di;
                    if ii < 0 || ii >= nr as i32 || (di == 0 && dk == 0) {
                        continue;
                    }
                    let kk = (k as i32 + dk).rem_euclid(nt as i32) as usize;
                    if grid[ii as usize][kk] < v {
                        is_min = false;
                    }
                }
            }
            if !is_min || v > 0.5 * xn {
                continue;
            }
            let mut z = Complex::from_polar(radii[i], std::f64::consts::TAU * (k as f64 + 0.5) / nt as f64);
            let mut h = radii[i] * 0.1;
            let mut fz = size(z);
            for _ in 0..2000 {
                if h < 1e-15 * r_box {
                    break;
                }
                let mut moved = false;
                for dz in [Complex::new(h, 0.0), Complex::new(-h, 0.0), Complex::new(0.0, h), Complex::new(0.0, -h)] {
                    let w = z + dz;
                    let fw = size(w);
                    if fw < fz {
                        z = w;
                        fz = fw;
                        moved = true;
                        break;
                    }
                }
                if !moved {
                    h *= 0.5;
                }
            }
            let inside = d.boundary_radius(z.arg(), eps).is_ok_and(|rb| z.norm() < rb);
            if fz < 1e-7 * xn && inside && !zeros.iter().any(|w| (w - z).norm() < 1e-6 * r_box) {
                zeros.push(z);
            }
        }
    }
    Ok(zeros)
}

/// `(1/2pi) int Omega^N - (1/2pi) oint omega - sum of zero indices` for the
/// normal projection `s` of the constant vector `x`. Indices are windings of
/// `s` in the oriented normal frame; `omega = -(d alpha + A^N)` where `alpha`
/// is the angle of `s` and `A^N` the normal connection.
pub fn normal_stokes_check(spec: &DiskSpec, eps: f64, x: &Vec4<f64>, m: usize, opts: &QuadratureOptions) -> Result<NormalStokesReport> {
    let d = spec.numeric::<f64>();
    let ri = integrate_region(&d, eps, opts)?;
    if ri.exclusion_radius > 0.0 {
        return Err(FalloutError::Precondition("normal_stokes_check needs an immersed region".into()));
    }
    let pts = boundary(&d, eps, m)?;
    let jets: Vec<Jet<f64>> = pts.iter().map(|p| p.jet).collect();
    let tau = std::f64::consts::TAU;
    let boundary_term = -normal_winding(&jets, x)? / tau;
    let zeros = section_zeros(&d, eps, x)?;
    let mut indices = Vec::new();
    for z in &zeros {
        let others = zeros.iter().filter(|w| *w != z).map(|w| (w - z).norm()).fold(f64::INFINITY, f64::min);
        let rho = (0.25 * others).min(1e-3 * z.norm().max(1e-6)).min(1e-4);
        let loop_jets: Vec<Jet<f64>> =
            (0..256).map(|k| d.jet(z + Complex::from_polar(rho, tau * k as f64 / 256.0))).collect();
        let w = normal_winding(&loop_jets, x)? / tau;
        indices.push((z.re, z.im, w.round() as i64));
    }
    let curvature_term = ri.omega_n / tau;
    let index_sum: i64 = indices.iter().map(|v| v.2).sum();
    Ok(NormalStokesReport {
        curvature_term,
        boundary_term,
        zero_indices: indices,
        residual: curvature_term - boundary_term - index_sum as f64,
    })
}

/// Unit tangent-space conditioning ratio helper for callers outside.
pub fn conditioning_ratio(d: &NumDisk<f64>, z: Complex<f64>) -> f64 {
    let (lo, _) = d.singular_values(z);
    lo / d.derivative_scale(z.norm()).max(1e-300)
}

