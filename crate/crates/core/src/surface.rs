//! Branched disks in C^2 given by finite monomial series, families of them,
//! and Weierstrass data for minimal disks.

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};

use serde::Serialize;

use crate::error::{FalloutError, Result};
use crate::exact::{BiPoly, Poly, QI, RationalFamily, RationalFunction, fmt_qi, qi_int, qi_real, qi_to};
use crate::linalg::{Vec4, det4, dot, singular_values_2};
use crate::scalar::Real;

/// `coeff * e^{i phase} * z^j * conj(z)^k`
#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub coeff: QI,
    pub phase: Option<BigRational>,
    pub j: u32,
    pub k: u32,
}

impl Term {
    pub fn new(coeff: QI, j: u32, k: u32) -> Self {
        Term { coeff, phase: None, j, k }
    }

    pub fn int(c: i64, j: u32, k: u32) -> Self {
        Term::new(qi_int(c), j, k)
    }

    pub fn degree(&self) -> u32 {
        self.j + self.k
    }

    pub fn numeric<T: Real>(&self) -> Complex<T> {
        let c = qi_to::<T>(&self.coeff);
        match &self.phase {
            Some(p) => {
                let a = T::from_rational(p);
                c * Complex::new(a.cos(), a.sin())
            }
            None => c,
        }
    }

    /// Term of the complex conjugate series.
    pub fn conj(&self) -> Term {
        Term { coeff: self.coeff.conj(), phase: self.phase.as_ref().map(|p| -p.clone()), j: self.k, k: self.j }
    }
}

/// A branched disk `z -> (w1(z), w2(z))` on `|z| <= domain_radius`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiskSpec {
    pub w: [Vec<Term>; 2],
    pub domain_radius: f64,
}

fn validate_terms(terms: &[Term], coord: usize) -> Result<()> {
    let mut seen = std::collections::BTreeSet::new();
    for t in terms {
        if t.coeff.is_zero() {
            return Err(FalloutError::Input(format!("w{}: zero coefficient stored for z^{} zbar^{}", coord + 1, t.j, t.k)));
        }
        if t.j + t.k == 0 {
            return Err(FalloutError::Input(format!("w{}: constant term not allowed, disks pass through 0", coord + 1)));
        }
        if !seen.insert((t.j, t.k)) {
            return Err(FalloutError::Input(format!("w{}: repeated monomial z^{} zbar^{}", coord + 1, t.j, t.k)));
        }
    }
    Ok(())
}

impl DiskSpec {
    pub fn new(w1: Vec<Term>, w2: Vec<Term>, domain_radius: f64) -> Result<Self> {
        validate_terms(&w1, 0)?;
        validate_terms(&w2, 1)?;
        if w1.is_empty() && w2.is_empty() {
            return Err(FalloutError::Input("empty disk spec".into()));
        }
        if !(domain_radius > 0.0 && domain_radius.is_finite()) {
            return Err(FalloutError::Input(format!("domain_radius must be positive, got {domain_radius}")));
        }
        Ok(DiskSpec { w: [w1, w2], domain_radius })
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &Term)> {
        self.w[0].iter().map(|t| (0, t)).chain(self.w[1].iter().map(|t| (1, t)))
    }

    pub fn min_degree(&self) -> u32 {
        self.terms().map(|(_, t)| t.degree()).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> u32 {
        self.terms().map(|(_, t)| t.degree()).max().unwrap_or(0)
    }

    /// Every term is z^j or conj(z)^k, so the map is harmonic.
    pub fn is_harmonic(&self) -> bool {
        self.terms().all(|(_, t)| t.j == 0 || t.k == 0)
    }

    pub fn is_holomorphic(&self) -> bool {
        self.terms().all(|(_, t)| t.k == 0)
    }

    pub fn numeric<T: Real>(&self) -> NumDisk<T> {
        NumDisk::new(self)
    }

    /// Mirror image under the orientation-reversing map `w2 -> conj(w2)`.
    pub fn reflect(&self) -> DiskSpec {
        DiskSpec { w: [self.w[0].clone(), self.w[1].iter().map(Term::conj).collect()], domain_radius: self.domain_radius }
    }

    /// Weierstrass data when the disk is harmonic, phase-free and conformal.
    pub fn weierstrass(&self) -> Option<WeierstrassData> {
        if !self.is_harmonic() || self.terms().any(|(_, t)| t.phase.is_some()) {
            return None;
        }
        let mut f: [Poly; 4] = Default::default();
        for (c, coord) in self.w.iter().enumerate() {
            for t in coord {
                // holomorphic part -> f_{2c+1}, antiholomorphic part -> conj of f_{2c+2}
                let (idx, m, a) = if t.k == 0 { (2 * c, t.j, t.coeff.clone()) } else { (2 * c + 1, t.k, t.coeff.conj()) };
                let d = Poly::monomial(a * qi_int(m as i64), (m - 1) as usize);
                f[idx] = f[idx].add(&d);
            }
        }
        let data = WeierstrassData { fp: f };
        data.check_conformal().ok()?;
        Some(data)
    }
}

/// Evaluates `z^j conj(z)^k` parts as `r^d u^m` with `u = z/|z|`.
fn cpowi<T: Real>(u: Complex<T>, m: i32) -> Complex<T> {
    let mut base = if m < 0 { u.conj() } else { u };
    let mut e = m.unsigned_abs();
    let mut acc = Complex::new(T::one(), T::zero());
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base;
        }
        base = base * base;
        e >>= 1;
    }
    acc
}

fn polar<T: Real>(z: Complex<T>) -> (T, Complex<T>) {
    let r = z.norm();
    if r > T::zero() { (r, z / r) } else { (T::zero(), Complex::new(T::one(), T::zero())) }
}

fn to_r4<T: Real>(w: [Complex<T>; 2]) -> Vec4<T> {
    [w[0].re, w[0].im, w[1].re, w[1].im]
}

#[derive(Clone, Copy, Debug)]
struct NumTerm<T> {
    coord: usize,
    c: Complex<T>,
    j: i32,
    k: i32,
    d: i32,
}

/// Value, first and second partials of a disk at one point.
#[derive(Clone, Copy, Debug)]
pub struct Jet<T> {
    pub p: Vec4<T>,
    pub fx: Vec4<T>,
    pub fy: Vec4<T>,
    pub fxx: Vec4<T>,
    pub fxy: Vec4<T>,
    pub fyy: Vec4<T>,
}

/// Float projection of a [`DiskSpec`] used by every numeric pipeline.
#[derive(Clone, Debug)]
pub struct NumDisk<T> {
    terms: Vec<NumTerm<T>>,
    pub n_min: u32,
    pub radius: T,
}

impl<T: Real> NumDisk<T> {
    pub fn new(spec: &DiskSpec) -> Self {
        let terms = spec
            .terms()
            .map(|(coord, t)| NumTerm { coord, c: t.numeric::<T>(), j: t.j as i32, k: t.k as i32, d: (t.j + t.k) as i32 })
            .collect();
        NumDisk { terms, n_min: spec.min_degree(), radius: T::lit(spec.domain_radius) }
    }

    pub fn check_domain(&self, z: Complex<T>) -> Result<()> {
        let tol = T::one() + T::lit(1e-12);
        if z.norm() > self.radius * tol || !z.norm().is_finite() {
            return Err(FalloutError::Input(format!("|z| = {} outside domain radius {}", z.norm(), self.radius)));
        }
        Ok(())
    }

    pub fn eval(&self, z: Complex<T>) -> Vec4<T> {
        let (r, u) = polar(z);
        let mut w = [Complex::new(T::zero(), T::zero()); 2];
        for t in &self.terms {
            w[t.coord] = w[t.coord] + t.c * cpowi(u, t.j - t.k) * r.ipow(t.d);
        }
        to_r4(w)
    }

    /// `F(z) = mantissa * exp(log_scale)` with the leading power factored out,
    /// so high exponents do not underflow.
    pub fn eval_scaled(&self, z: Complex<T>) -> (Vec4<T>, T) {
        let (r, u) = polar(z);
        if r == T::zero() {
            return ([T::zero(); 4], T::zero());
        }
        let n = self.n_min as i32;
        let mut w = [Complex::new(T::zero(), T::zero()); 2];
        for t in &self.terms {
            w[t.coord] = w[t.coord] + t.c * cpowi(u, t.j - t.k) * r.ipow(t.d - n);
        }
        (to_r4(w), T::from_i64_lossy(n as i64) * r.ln())
    }

    pub fn jet(&self, z: Complex<T>) -> Jet<T> {
        let zero = Complex::new(T::zero(), T::zero());
        let (r, u) = polar(z);
        let mut w = [zero; 2];
        let mut wz = [zero; 2];
        let mut wb = [zero; 2];
        let mut wzz = [zero; 2];
        let mut wzb = [zero; 2];
        let mut wbb = [zero; 2];
        for t in &self.terms {
            let m = t.j - t.k;
            let i = t.coord;
            w[i] = w[i] + t.c * cpowi(u, m) * r.ipow(t.d);
            let r1 = r.ipow(t.d - 1);
            if t.j > 0 {
                wz[i] = wz[i] + t.c * cpowi(u, m - 1) * (r1 * T::from_i64_lossy(t.j as i64));
            }
            if t.k > 0 {
                wb[i] = wb[i] + t.c * cpowi(u, m + 1) * (r1 * T::from_i64_lossy(t.k as i64));
            }
            if t.d >= 2 {
                let r2 = r.ipow(t.d - 2);
                if t.j > 1 {
                    wzz[i] = wzz[i] + t.c * cpowi(u, m - 2) * (r2 * T::from_i64_lossy((t.j * (t.j - 1)) as i64));
                }
                if t.j > 0 && t.k > 0 {
                    wzb[i] = wzb[i] + t.c * cpowi(u, m) * (r2 * T::from_i64_lossy((t.j * t.k) as i64));
                }
                if t.k > 1 {
                    wbb[i] = wbb[i] + t.c * cpowi(u, m + 2) * (r2 * T::from_i64_lossy((t.k * (t.k - 1)) as i64));
                }
            }
        }
        let iu = Complex::new(T::zero(), T::one());
        let two = T::two();
        let fx = [wz[0] + wb[0], wz[1] + wb[1]];
        let fy = [iu * (wz[0] - wb[0]), iu * (wz[1] - wb[1])];
        let fxx = [wzz[0] + wzb[0] * two + wbb[0], wzz[1] + wzb[1] * two + wbb[1]];
        let fyy = [-(wzz[0] - wzb[0] * two + wbb[0]), -(wzz[1] - wzb[1] * two + wbb[1])];
        let fxy = [iu * (wzz[0] - wbb[0]), iu * (wzz[1] - wbb[1])];
        Jet { p: to_r4(w), fx: to_r4(fx), fy: to_r4(fy), fxx: to_r4(fxx), fxy: to_r4(fxy), fyy: to_r4(fyy) }
    }

    /// Upper bound for `|dF|` at radius `r`, used to scale conditioning tests.
    pub fn derivative_scale(&self, r: T) -> T {
        let mut s = T::zero();
        for t in &self.terms {
            s += t.c.norm() * T::from_i64_lossy(t.d as i64) * r.ipow(t.d - 1);
        }
        s
    }

    /// Per-ray evaluator: fixes the angle so only powers of `r` remain.
    pub fn ray(&self, theta: T) -> RayEval<T> {
        let u = Complex::new(theta.cos(), theta.sin());
        let parts = self.terms.iter().map(|t| (t.coord, t.c * cpowi(u, t.j - t.k), t.d)).collect();
        RayEval { parts }
    }

    /// `(sigma_min, sigma_max)` of `dF` at `z`.
    pub fn singular_values(&self, z: Complex<T>) -> (T, T) {
        let j = self.jet(z);
        singular_values_2(&j.fx, &j.fy)
    }

    /// Immersion test at one point against the local derivative scale.
    pub fn is_immersed_at(&self, z: Complex<T>, tol: T) -> bool {
        let (lo, _) = self.singular_values(z);
        lo > tol * self.derivative_scale(z.norm())
    }
}

/// `F(r e^{i theta})` as a function of `r` alone.
#[derive(Clone, Debug)]
pub struct RayEval<T> {
    parts: Vec<(usize, Complex<T>, i32)>,
}

impl<T: Real> RayEval<T> {
    pub fn at(&self, r: T) -> Vec4<T> {
        let mut w = [Complex::new(T::zero(), T::zero()); 2];
        for (i, a, d) in &self.parts {
            w[*i] = w[*i] + *a * r.ipow(*d);
        }
        to_r4(w)
    }

    /// Value and radial derivative.
    pub fn with_dr(&self, r: T) -> (Vec4<T>, Vec4<T>) {
        let zero = Complex::new(T::zero(), T::zero());
        let mut w = [zero; 2];
        let mut dw = [zero; 2];
        for (i, a, d) in &self.parts {
            let rd1 = r.ipow(*d - 1);
            w[*i] = w[*i] + *a * (rd1 * r);
            dw[*i] = dw[*i] + *a * (rd1 * T::from_i64_lossy(*d as i64));
        }
        (to_r4(w), to_r4(dw))
    }
}

/// Checked evaluation of a disk at `z`.
pub fn eval_disk<T: Real>(spec: &DiskSpec, z: Complex<T>) -> Result<Vec4<T>> {
    let d = spec.numeric::<T>();
    d.check_domain(z)?;
    Ok(d.eval(z))
}

/// Checked jet of a disk at `z`.
pub fn eval_derivatives<T: Real>(spec: &DiskSpec, z: Complex<T>) -> Result<Jet<T>> {
    let d = spec.numeric::<T>();
    d.check_domain(z)?;
    Ok(d.jet(z))
}

/// Orthonormal frame `(e1, e2 | e3, e4)`: tangent then normal.
#[derive(Clone, Copy, Debug)]
pub struct Frame<T> {
    pub e: [Vec4<T>; 4],
    pub orientation: i8,
}

impl<T: Real> Frame<T> {
    pub fn orthonormality_error(&self) -> T {
        let mut err = T::zero();
        for a in 0..4 {
            for b in 0..4 {
                let target = if a == b { T::one() } else { T::zero() };
                err = err.max((dot(&self.e[a], &self.e[b]) - target).abs());
            }
        }
        err
    }

    pub fn det(&self) -> T {
        det4([&self.e[0], &self.e[1], &self.e[2], &self.e[3]])
    }
}

#[derive(Clone, Debug)]
pub struct BranchingData<T> {
    /// Leading degree; the branching order is `n - 1`.
    pub n: u32,
    /// `e1, e2` span the limit tangent plane with its complex orientation;
    /// `e3` is the transverse framing vector.
    pub frame: Frame<T>,
}

pub fn branching_data<T: Real>(spec: &DiskSpec) -> Result<BranchingData<T>> {
    let n = spec.min_degree();
    if n == 0 {
        return Err(FalloutError::Input("empty disk spec".into()));
    }
    let mut a = [Complex::new(T::zero(), T::zero()); 2];
    for (coord, t) in spec.terms() {
        if t.degree() != n {
            continue;
        }
        if t.k != 0 {
            return Err(FalloutError::NotPositivelyBranched(format!(
                "leading degree-{n} part contains z^{} zbar^{} in w{}",
                t.j,
                t.k,
                coord + 1
            )));
        }
        a[coord] = t.numeric::<T>();
    }
    let len = (a[0].norm_sqr() + a[1].norm_sqr()).sqrt();
    if len == T::zero() {
        return Err(FalloutError::NotPositivelyBranched(format!("no pure z^{n} leading term")));
    }
    let v = [a[0] / len, a[1] / len];
    let iu = Complex::new(T::zero(), T::one());
    let vp = [-v[1].conj(), v[0].conj()];
    let e = [to_r4(v), to_r4([iu * v[0], iu * v[1]]), to_r4(vp), to_r4([iu * vp[0], iu * vp[1]])];
    Ok(BranchingData { n, frame: Frame { e, orientation: 1 } })
}

/// Family of disks whose coefficients are polynomials in a parameter `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct FamilyTerm {
    pub coeff: Poly,
    pub phase: Option<BigRational>,
    pub j: u32,
    pub k: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FamilySpec {
    pub w: [Vec<FamilyTerm>; 2],
    pub domain_radius: f64,
    pub parameter_values: Vec<BigRational>,
}

impl FamilySpec {
    pub fn new(w1: Vec<FamilyTerm>, w2: Vec<FamilyTerm>, domain_radius: f64, parameter_values: Vec<BigRational>) -> Result<Self> {
        for (c, terms) in [&w1, &w2].into_iter().enumerate() {
            let mut seen = std::collections::BTreeSet::new();
            for t in terms {
                if t.j + t.k == 0 {
                    return Err(FalloutError::Input(format!("w{}: constant term not allowed", c + 1)));
                }
                if !seen.insert((t.j, t.k)) {
                    return Err(FalloutError::Input(format!("w{}: repeated monomial z^{} zbar^{}", c + 1, t.j, t.k)));
                }
            }
        }
        let f = FamilySpec { w: [w1, w2], domain_radius, parameter_values };
        f.limit()?;
        Ok(f)
    }

    /// Family constant in `t`.
    pub fn constant(spec: &DiskSpec, parameter_values: Vec<BigRational>) -> Self {
        let lift = |ts: &Vec<Term>| {
            ts.iter().map(|t| FamilyTerm { coeff: Poly::constant(t.coeff.clone()), phase: t.phase.clone(), j: t.j, k: t.k }).collect()
        };
        FamilySpec { w: [lift(&spec.w[0]), lift(&spec.w[1])], domain_radius: spec.domain_radius, parameter_values }
    }

    pub fn at(&self, t: &BigRational) -> Result<DiskSpec> {
        let tq = qi_real(t.clone());
        let member = |ts: &Vec<FamilyTerm>| -> Vec<Term> {
            ts.iter()
                .filter_map(|ft| {
                    let c = ft.coeff.eval(&tq);
                    (!c.is_zero()).then(|| Term { coeff: c, phase: ft.phase.clone(), j: ft.j, k: ft.k })
                })
                .collect()
        };
        DiskSpec::new(member(&self.w[0]), member(&self.w[1]), self.domain_radius)
    }

    pub fn limit(&self) -> Result<DiskSpec> {
        self.at(&BigRational::zero())
    }

    pub fn reflect(&self) -> FamilySpec {
        let conj = |t: &FamilyTerm| FamilyTerm { coeff: t.coeff.conj(), phase: t.phase.as_ref().map(|p| -p.clone()), j: t.k, k: t.j };
        FamilySpec {
            w: [self.w[0].clone(), self.w[1].iter().map(conj).collect()],
            domain_radius: self.domain_radius,
            parameter_values: self.parameter_values.clone(),
        }
    }

    pub fn is_holomorphic(&self) -> bool {
        self.w.iter().flatten().all(|t| t.k == 0)
    }

    /// Weierstrass family when every member is harmonic, phase-free and the
    /// conformality identity holds identically in `t`.
    pub fn weierstrass(&self) -> Option<WeierstrassFamily> {
        let terms = || self.w.iter().flatten();
        if terms().any(|t| (t.j != 0 && t.k != 0) || t.phase.is_some()) {
            return None;
        }
        let mut f: [BiPoly; 4] = Default::default();
        for (c, coord) in self.w.iter().enumerate() {
            for t in coord {
                let (idx, m, a) = if t.k == 0 { (2 * c, t.j, t.coeff.clone()) } else { (2 * c + 1, t.k, t.coeff.conj()) };
                let mut cs = vec![Poly::zero(); m as usize];
                cs[m as usize - 1] = a.scale(&qi_int(m as i64));
                f[idx] = f[idx].add(&BiPoly::from_coeffs(cs));
            }
        }
        let fam = WeierstrassFamily { fp: f };
        fam.check_conformal().ok()?;
        Some(fam)
    }

    /// Immersion check of member `t` at the scan points and at refined local
    /// minima of `sigma_min(dF)` inside radius `r_max`.
    pub fn immersion_check(&self, t: &BigRational, r_max: f64, tol: f64) -> Result<()> {
        let spec = self.at(t)?;
        let d = spec.numeric::<f64>();
        let worst = crate::scan::weakest_point(&d, r_max);
        let (lo, _) = d.singular_values(worst);
        let scale = d.derivative_scale(worst.norm());
        if lo > tol * scale {
            Ok(())
        } else {
            Err(FalloutError::Conditioning(format!(
                "member t = {t} not immersed near z = {:.3e}{:+.3e}i: sigma_min = {lo:.3e}, scale {scale:.3e}",
                worst.re, worst.im
            )))
        }
    }
}

/// Derivatives `f'_1..f'_4` of holomorphic Weierstrass data:
/// `w1 = f1 + conj(f2)`, `w2 = f3 + conj(f4)`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeierstrassData {
    pub fp: [Poly; 4],
}

impl WeierstrassData {
    pub fn new(fp: [Poly; 4]) -> Result<Self> {
        let d = WeierstrassData { fp };
        d.check_conformal()?;
        Ok(d)
    }

    pub fn check_conformal(&self) -> Result<()> {
        let s = self.fp[0].mul(&self.fp[1]).add(&self.fp[2].mul(&self.fp[3]));
        match s.valuation() {
            None => Ok(()),
            Some(n) => Err(FalloutError::Input(format!(
                "f1'f2' + f3'f4' != 0: coefficient of z^{n} is {}",
                fmt_qi(&s.coeff(n))
            ))),
        }
    }

    pub fn to_disk(&self, domain_radius: f64) -> Result<DiskSpec> {
        self.check_conformal()?;
        let mut w: [Vec<Term>; 2] = Default::default();
        for (i, f) in self.fp.iter().enumerate() {
            for (m, a) in f.coeffs().iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let c = a / qi_int(m as i64 + 1);
                let e = m as u32 + 1;
                let term = if i % 2 == 0 { Term::new(c, e, 0) } else { Term::new(c.conj(), 0, e) };
                w[i / 2].push(term);
            }
        }
        let [w1, w2] = w;
        DiskSpec::new(w1, w2, domain_radius)
    }

    /// `(gamma_+, gamma_-)` in lowest terms.
    pub fn gauss_maps(&self) -> Result<(RationalFunction, RationalFunction)> {
        let [f1, f2, f3, f4] = &self.fp;
        let plus = projective(&[(f3.clone(), f2.clone()), (f1.neg(), f4.clone())], "gamma_+")?;
        let minus = projective(&[(f4.neg(), f2.clone()), (f1.clone(), f3.clone())], "gamma_-")?;
        Ok((plus, minus))
    }

    pub fn reflect(&self) -> WeierstrassData {
        // w2 -> conj(w2) swaps the roles of f3 and f4.
        let [f1, f2, f3, f4] = self.fp.clone();
        WeierstrassData { fp: [f1, f2, f4, f3] }
    }
}

/// First pair that is not `0/0`; a zero denominator alone means the
/// constant map to infinity.
fn projective(forms: &[(Poly, Poly)], name: &str) -> Result<RationalFunction> {
    for (n, d) in forms {
        if let Some(r) = RationalFunction::new(n.clone(), d.clone()) {
            return Ok(r);
        }
    }
    Err(FalloutError::Degenerate(format!("{name}: every form is 0/0")))
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeierstrassFamily {
    pub fp: [BiPoly; 4],
}

impl WeierstrassFamily {
    pub fn check_conformal(&self) -> Result<()> {
        let s = self.fp[0].mul(&self.fp[1]).add(&self.fp[2].mul(&self.fp[3]));
        if s.is_zero() { Ok(()) } else { Err(FalloutError::Input("f1'f2' + f3'f4' does not vanish identically in (z, t)".into())) }
    }

    pub fn at(&self, t: &BigRational) -> WeierstrassData {
        let tq = qi_real(t.clone());
        WeierstrassData { fp: std::array::from_fn(|i| self.fp[i].at(&tq)) }
    }

    pub fn to_family(&self, domain_radius: f64, parameter_values: Vec<BigRational>) -> Result<FamilySpec> {
        self.check_conformal()?;
        let mut w: [Vec<FamilyTerm>; 2] = Default::default();
        for (i, f) in self.fp.iter().enumerate() {
            for (m, a) in f.c.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let c = a.scale(&(QI::one() / qi_int(m as i64 + 1)));
                let e = m as u32 + 1;
                let term = if i % 2 == 0 {
                    FamilyTerm { coeff: c, phase: None, j: e, k: 0 }
                } else {
                    FamilyTerm { coeff: c.conj(), phase: None, j: 0, k: e }
                };
                w[i / 2].push(term);
            }
        }
        let [w1, w2] = w;
        FamilySpec::new(w1, w2, domain_radius, parameter_values)
    }

    /// Gauss map families `(gamma_+, gamma_-)`, each reduced per parameter value.
    pub fn gauss_maps(&self) -> Result<(RationalFamily, RationalFamily)> {
        let [f1, f2, f3, f4] = &self.fp;
        let pick = |forms: [(BiPoly, BiPoly); 2], name: &str| -> Result<RationalFamily> {
            for (n, d) in forms {
                if !(n.is_zero() && d.is_zero()) {
                    return Ok(RationalFamily { num: n, den: d });
                }
            }
            Err(FalloutError::Degenerate(format!("{name}: every form is 0/0")))
        };
        let plus = pick([(f3.clone(), f2.clone()), (f1.neg(), f4.clone())], "gamma_+")?;
        let minus = pick([(f4.neg(), f2.clone()), (f1.clone(), f3.clone())], "gamma_-")?;
        Ok((plus, minus))
    }

    pub fn reflect(&self) -> WeierstrassFamily {
        let [f1, f2, f3, f4] = self.fp.clone();
        WeierstrassFamily { fp: [f1, f2, f4, f3] }
    }
}

/// Kind of surface family, used to attach the expected inequality verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    Complex,
    RightSuperminimal,
    LeftSuperminimal,
    SymplecticPlus,
    SymplecticMinus,
    Minimal,
    Generic,
}

impl FamilyKind {
    pub fn detect(f: &FamilySpec) -> FamilyKind {
        if f.is_holomorphic() {
            FamilyKind::Complex
        } else if f.weierstrass().is_some() {
            FamilyKind::Minimal
        } else {
            FamilyKind::Generic
        }
    }
}

impl<T: Real> NumDisk<T> {
    /// Radius `r` with `|F(r e^{i theta})| = eps`, after checking that `|F|`
    /// increases strictly along the ray up to that radius.
    pub fn boundary_radius(&self, theta: T, eps: T) -> Result<T> {
        let ray = self.ray(theta);
        let g = |r: T| -> (T, T) {
            let (p, dp) = ray.with_dr(r);
            (dot(&p, &p) - eps * eps, T::two() * dot(&p, &dp))
        };
        // Bracket from the leading-order guess outward.
        let lead = self.leading_norm();
        let mut hi = if lead > T::zero() { (eps / lead).powf(T::one() / T::from_i64_lossy(self.n_min as i64)) } else { eps };
        hi = hi.min(self.radius);
        let mut lo = T::zero();
        let mut tries = 0;
        while g(hi).0 <= T::zero() {
            lo = hi;
            if hi >= self.radius {
                return Err(FalloutError::Input(format!("|F| stays below eps = {eps} on the ray at angle {theta} inside the domain")));
            }
            hi = (hi * T::two()).min(self.radius);
            tries += 1;
            if tries > 200 {
                return Err(FalloutError::Input("radial bracket not found".into()));
            }
        }
        let mut r = (lo + hi) * T::half();
        let tol = T::lit(1e-12).min(T::unit_roundoff() * T::lit(64.0));
        for _ in 0..300 {
            let (v, dv) = g(r);
            if v > T::zero() { hi = r } else { lo = r }
            let newton = if dv > T::zero() { r - v / dv } else { T::nan() };
            let next = if newton > lo && newton < hi { newton } else { (lo + hi) * T::half() };
            let step = (next - r).abs();
            r = next;
            if step <= tol * r || hi - lo <= tol * r {
                break;
            }
        }
        // Graph regime: the ray crosses the eps-sphere once, increasing.
        let k = 24;
        let (_, dpr) = g(r);
        let mut bad = !(dpr > T::zero());
        for i in 1..k {
            let s = r * T::from_usize_lossy(i) / T::from_usize_lossy(k);
            if !(g(s).0 < T::zero()) {
                bad = true;
            }
        }
        if bad {
            return Err(FalloutError::Precondition(format!(
                "eps = {eps} outside graph regime: |F| not increasing through eps along the ray at angle {theta}"
            )));
        }
        Ok(r)
    }

    /// Norm of the degree-`n_min` part on the unit circle (angle independent
    /// for positively branched disks).
    pub fn leading_norm(&self) -> T {
        let mut s = T::zero();
        for t in &self.terms {
            if t.d == self.n_min as i32 {
                s += t.c.norm_sqr();
            }
        }
        s.sqrt()
    }
}
