//! Exact polynomial algebra over the Gaussian rationals Q(i).

use std::fmt;

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::scalar::{Real, rat_int};

/// Gaussian rational `a + b i` with `a, b` in Q.
pub type QI = Complex<BigRational>;

pub fn qi(re: BigRational, im: BigRational) -> QI {
    Complex::new(re, im)
}

pub fn qi_int(n: i64) -> QI {
    Complex::new(rat_int(n), BigRational::zero())
}

pub fn qi_real(r: BigRational) -> QI {
    Complex::new(r, BigRational::zero())
}

pub fn qi_to<T: Real>(c: &QI) -> Complex<T> {
    Complex::new(T::from_rational(&c.re), T::from_rational(&c.im))
}

pub fn fmt_qi(a: &QI) -> String {
    if a.im.is_zero() {
        format!("{}", a.re)
    } else if a.re.is_zero() {
        format!("{}i", a.im)
    } else {
        format!("({} + {}i)", a.re, a.im)
    }
}

/// Dense univariate polynomial, lowest degree first, never with a zero
/// leading coefficient.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Poly {
    c: Vec<QI>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { c: Vec::new() }
    }

    pub fn constant(a: QI) -> Self {
        Poly::from_coeffs(vec![a])
    }

    pub fn one() -> Self {
        Poly::constant(qi_int(1))
    }

    /// `a x^n`
    pub fn monomial(a: QI, n: usize) -> Self {
        let mut c = vec![QI::zero(); n + 1];
        c[n] = a;
        Poly::from_coeffs(c)
    }

    pub fn x() -> Self {
        Poly::monomial(qi_int(1), 1)
    }

    pub fn from_coeffs(mut c: Vec<QI>) -> Self {
        while c.last().is_some_and(|a| a.is_zero()) {
            c.pop();
        }
        Poly { c }
    }

    pub fn coeffs(&self) -> &[QI] {
        &self.c
    }

    pub fn coeff(&self, n: usize) -> QI {
        self.c.get(n).cloned().unwrap_or_else(QI::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    /// Lowest power with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.c.iter().position(|a| !a.is_zero())
    }

    pub fn lead(&self) -> Option<&QI> {
        self.c.last()
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        Poly::from_coeffs((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        Poly::from_coeffs((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn neg(&self) -> Poly {
        Poly::from_coeffs(self.c.iter().map(|a| -a.clone()).collect())
    }

    pub fn scale(&self, s: &QI) -> Poly {
        Poly::from_coeffs(self.c.iter().map(|a| a * s).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![QI::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] = &c[i + j] + a * b;
            }
        }
        Poly::from_coeffs(c)
    }

    pub fn derivative(&self) -> Poly {
        Poly::from_coeffs(self.c.iter().enumerate().skip(1).map(|(i, a)| a * qi_int(i as i64)).collect())
    }

    /// Coefficient-wise complex conjugate.
    pub fn conj(&self) -> Poly {
        Poly::from_coeffs(self.c.iter().map(|a| a.conj()).collect())
    }

    pub fn eval(&self, x: &QI) -> QI {
        let mut acc = QI::zero();
        for a in self.c.iter().rev() {
            acc = acc * x + a;
        }
        acc
    }

    pub fn eval_num<T: Real>(&self, x: Complex<T>) -> Complex<T> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for a in self.c.iter().rev() {
            acc = acc * x + qi_to::<T>(a);
        }
        acc
    }

    pub fn to_num<T: Real>(&self) -> Vec<Complex<T>> {
        self.c.iter().map(qi_to::<T>).collect()
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dl = d.lead().expect("division by zero polynomial").clone();
        let dd = d.c.len() - 1;
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut q = vec![QI::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let f = &r[i + dd] / &dl;
            if !f.is_zero() {
                for (j, b) in d.c.iter().enumerate() {
                    r[i + j] = &r[i + j] - &f * b;
                }
            }
            q[i] = f;
        }
        r.truncate(dd);
        (Poly::from_coeffs(q), Poly::from_coeffs(r))
    }

    pub fn monic(&self) -> Poly {
        match self.lead() {
            Some(l) => {
                let inv = QI::one() / l;
                self.scale(&inv)
            }
            None => Poly::zero(),
        }
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Substitutes a polynomial for the variable: `self(p(x))`.
    pub fn compose(&self, p: &Poly) -> Poly {
        let mut acc = Poly::zero();
        for a in self.c.iter().rev() {
            acc = acc.mul(p).add(&Poly::constant(a.clone()));
        }
        acc
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, a) in self.c.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let coef = fmt_qi(a);
            match i {
                0 => write!(f, "{coef}")?,
                1 => write!(f, "{coef}*z")?,
                _ => write!(f, "{coef}*z^{i}")?,
            }
        }
        Ok(())
    }
}

/// Quotient of polynomials kept in lowest terms with a monic denominator.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalFunction {
    pub num: Poly,
    pub den: Poly,
}

impl RationalFunction {
    /// Reduces `num/den`. A zero denominator gives the constant map to
    /// infinity `1/0`; `None` only for `0/0`.
    pub fn new(num: Poly, den: Poly) -> Option<Self> {
        if den.is_zero() {
            return (!num.is_zero()).then(|| RationalFunction { num: Poly::one(), den });
        }
        if num.is_zero() {
            return Some(RationalFunction { num, den: Poly::one() });
        }
        let g = num.gcd(&den);
        let (n, _) = num.div_rem(&g);
        let (d, _) = den.div_rem(&g);
        let l = d.lead().unwrap().clone();
        let inv = QI::one() / &l;
        Some(RationalFunction { num: n.scale(&inv), den: d.scale(&inv) })
    }

    pub fn is_constant(&self) -> bool {
        self.num.degree().unwrap_or(0) == 0 && self.den.degree().unwrap_or(0) == 0
    }

    pub fn is_infinity(&self) -> bool {
        self.den.is_zero()
    }

    /// Equality as functions, by cross multiplication.
    pub fn same_as(&self, o: &RationalFunction) -> bool {
        self.num.mul(&o.den) == o.num.mul(&self.den)
    }

    /// Degree of the map to the Riemann sphere.
    pub fn map_degree(&self) -> usize {
        self.num.degree().unwrap_or(0).max(self.den.degree().unwrap_or(0))
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

/// Polynomial in `z` whose coefficients are polynomials in a parameter `t`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct BiPoly {
    /// `c[n]` is the `t`-polynomial multiplying `z^n`.
    pub c: Vec<Poly>,
}

impl BiPoly {
    pub fn from_coeffs(mut c: Vec<Poly>) -> Self {
        while c.last().is_some_and(|a| a.is_zero()) {
            c.pop();
        }
        BiPoly { c }
    }

    /// Lifts a `t`-independent polynomial.
    pub fn constant_in_t(p: &Poly) -> Self {
        BiPoly::from_coeffs(p.coeffs().iter().map(|a| Poly::constant(a.clone())).collect())
    }

    pub fn coeff(&self, n: usize) -> Poly {
        self.c.get(n).cloned().unwrap_or_else(Poly::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn at(&self, t: &QI) -> Poly {
        Poly::from_coeffs(self.c.iter().map(|p| p.eval(t)).collect())
    }

    pub fn add(&self, o: &BiPoly) -> BiPoly {
        let n = self.c.len().max(o.c.len());
        BiPoly::from_coeffs((0..n).map(|i| self.coeff(i).add(&o.coeff(i))).collect())
    }

    pub fn neg(&self) -> BiPoly {
        BiPoly::from_coeffs(self.c.iter().map(|p| p.neg()).collect())
    }

    pub fn mul(&self, o: &BiPoly) -> BiPoly {
        if self.is_zero() || o.is_zero() {
            return BiPoly::default();
        }
        let mut c = vec![Poly::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] = c[i + j].add(&a.mul(b));
            }
        }
        BiPoly::from_coeffs(c)
    }

    /// Derivative in `z`.
    pub fn dz(&self) -> BiPoly {
        BiPoly::from_coeffs(self.c.iter().enumerate().skip(1).map(|(i, a)| a.scale(&qi_int(i as i64))).collect())
    }
}

/// Rational function in `z` depending polynomially on `t`; reduced afresh
/// at each parameter value.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalFamily {
    pub num: BiPoly,
    pub den: BiPoly,
}

impl RationalFamily {
    pub fn at(&self, t: &BigRational) -> Option<RationalFunction> {
        let tq = qi_real(t.clone());
        RationalFunction::new(self.num.at(&tq), self.den.at(&tq))
    }

    pub fn limit(&self) -> Option<RationalFunction> {
        self.at(&BigRational::zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn p(c: &[i64]) -> Poly {
        Poly::from_coeffs(c.iter().map(|&a| qi_int(a)).collect())
    }

    #[test]
    fn gcd_of_shared_root() {
        // (z-1)(z+2) and (z-1)(z-3)
        let a = p(&[-2, 1, 1]);
        let b = p(&[3, -4, 1]);
        assert_eq!(a.gcd(&b), p(&[-1, 1]));
        assert_eq!(p(&[1, 1]).gcd(&p(&[2, 1])), Poly::one());
    }

    #[test]
    fn reduction_to_lowest_terms() {
        let r = RationalFunction::new(Poly::monomial(qi_int(1), 3), Poly::monomial(qi_int(1), 5)).unwrap();
        assert_eq!(r.num, Poly::one());
        assert_eq!(r.den, Poly::monomial(qi_int(1), 2));
        let r = RationalFunction::new(p(&[0, 2]), p(&[0, 0, 4])).unwrap();
        assert_eq!(r.num, Poly::constant(qi_real(rat(1, 2))));
        assert_eq!(r.den, p(&[0, 1]));
        assert!(RationalFunction::new(Poly::zero(), Poly::zero()).is_none());
        assert!(RationalFunction::new(p(&[0, 3]), Poly::zero()).unwrap().is_infinity());
    }

    #[test]
    fn division_identity() {
        let a = p(&[5, 0, -3, 2, 7]);
        let b = p(&[1, 2, 1]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree().unwrap_or(0) < 2);
    }

    #[test]
    fn gaussian_coefficients() {
        let i = qi(rat(0, 1), rat(1, 1));
        // (z - i)(z + i) = z^2 + 1
        let a = Poly::from_coeffs(vec![-i.clone(), qi_int(1)]).mul(&Poly::from_coeffs(vec![i.clone(), qi_int(1)]));
        assert_eq!(a, p(&[1, 0, 1]));
        assert_eq!(a.gcd(&Poly::from_coeffs(vec![-i, qi_int(1)])), Poly::from_coeffs(vec![-qi(rat(0, 1), rat(1, 1)), qi_int(1)]));
    }
}
