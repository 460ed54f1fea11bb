//! Named surfaces and families used by tests, scenarios and the CLI.

use num_rational::BigRational;

use crate::exact::{BiPoly, Poly, QI, qi, qi_int, qi_real};
use crate::scalar::{rat, rat_int};
use crate::surface::{DiskSpec, FamilySpec, FamilyTerm, Term, WeierstrassData, WeierstrassFamily};

fn p_int(c: &[i64]) -> Poly {
    Poly::from_coeffs(c.iter().map(|&a| qi_int(a)).collect())
}

fn t_poly(c: &[i64]) -> Poly {
    p_int(c)
}

/// `{w1: z}`
pub fn plane() -> DiskSpec {
    DiskSpec::new(vec![Term::int(1, 1, 0)], vec![], 1.0).unwrap()
}

/// `{w1: z, w2: z^2}`
pub fn holomorphic_graph() -> DiskSpec {
    DiskSpec::new(vec![Term::int(1, 1, 0)], vec![Term::int(1, 2, 0)], 1.0).unwrap()
}

/// `{w1: z^2, w2: z^3}`
pub fn cusp() -> DiskSpec {
    DiskSpec::new(vec![Term::int(1, 2, 0)], vec![Term::int(1, 3, 0)], 1.0).unwrap()
}

/// `{w1: z^p, w2: z^q}`, the complex curve `x^q = y^p`.
pub fn torus_curve(p: u32, q: u32) -> DiskSpec {
    DiskSpec::new(vec![Term::int(1, p, 0)], vec![Term::int(1, q, 0)], 1.0).unwrap()
}

pub fn cusp_parameters() -> Vec<BigRational> {
    vec![rat(1, 25000), rat(1, 50000)]
}

/// `(z^2, z^3 + t z)`, immersed with one double point for `t != 0`.
pub fn cusp_family() -> FamilySpec {
    FamilySpec::new(
        vec![FamilyTerm { coeff: t_poly(&[1]), phase: None, j: 2, k: 0 }],
        vec![
            FamilyTerm { coeff: t_poly(&[1]), phase: None, j: 3, k: 0 },
            FamilyTerm { coeff: t_poly(&[0, 1]), phase: None, j: 1, k: 0 },
        ],
        1.0,
        cusp_parameters(),
    )
    .unwrap()
}

/// Minimal disk data `f' = (z^2, z^5, z^3, -z^4)`.
pub fn torus_knot_weierstrass() -> WeierstrassData {
    WeierstrassData::new([
        Poly::monomial(qi_int(1), 2),
        Poly::monomial(qi_int(1), 5),
        Poly::monomial(qi_int(1), 3),
        Poly::monomial(qi_int(-1), 4),
    ])
    .unwrap()
}

/// `(z^3/3 + conj(z)^6/6, z^4/4 - conj(z)^5/5)`, boundary a (3,4) torus knot.
pub fn torus_knot_minimal_disk() -> DiskSpec {
    torus_knot_weierstrass().to_disk(1.0).unwrap()
}

pub fn minimal_family_parameters() -> Vec<BigRational> {
    vec![rat(1, 100), rat(1, 200)]
}

/// Minimal immersed family degenerating to the torus-knot disk:
/// `f' = (z^2 - t^2, z^5, z^3 - t z^2, -z^4 - t z^3)`.
pub fn minimal_immersed_weierstrass() -> WeierstrassFamily {
    let bz = |cs: Vec<Poly>| BiPoly::from_coeffs(cs);
    let z = Poly::zero;
    WeierstrassFamily {
        fp: [
            bz(vec![t_poly(&[0, 0, -1]), z(), t_poly(&[1])]),
            bz(vec![z(), z(), z(), z(), z(), t_poly(&[1])]),
            bz(vec![z(), z(), t_poly(&[0, -1]), t_poly(&[1])]),
            bz(vec![z(), z(), z(), t_poly(&[0, -1]), t_poly(&[-1])]),
        ],
    }
}

pub fn minimal_immersed_family() -> FamilySpec {
    minimal_immersed_weierstrass().to_family(1.0, minimal_family_parameters()).unwrap()
}

/// Default generic phase for [`writhe_twenty_disk`].
pub fn default_alpha() -> BigRational {
    rat(7071, 10000)
}

/// `(z^3, Im(z^50) + i Re(z^110 e^{i alpha}))`, boundary braid of writhe 20.
pub fn writhe_twenty_disk(alpha: &BigRational) -> DiskSpec {
    let half_i: QI = qi(rat_int(0), rat(1, 2));
    let w2 = vec![
        Term::new(-half_i.clone(), 50, 0),
        Term::new(half_i.clone(), 0, 50),
        Term { coeff: half_i.clone(), phase: Some(alpha.clone()), j: 110, k: 0 },
        Term { coeff: half_i, phase: Some(-alpha.clone()), j: 0, k: 110 },
    ];
    DiskSpec::new(vec![Term::int(1, 3, 0)], w2, 1.0).unwrap()
}

/// Holomorphic family `(z^p, z^q + t z)` used for the complex corpus.
pub fn complex_family(p: u32, q: u32, params: Vec<BigRational>) -> FamilySpec {
    FamilySpec::new(
        vec![FamilyTerm { coeff: t_poly(&[1]), phase: None, j: p, k: 0 }],
        vec![
            FamilyTerm { coeff: t_poly(&[1]), phase: None, j: q, k: 0 },
            FamilyTerm { coeff: t_poly(&[0, 1]), phase: None, j: 1, k: 0 },
        ],
        1.0,
        params,
    )
    .unwrap()
}

/// Rational constant as a `QI`.
pub fn q(n: i64, d: i64) -> QI {
    qi_real(rat(n, d))
}
