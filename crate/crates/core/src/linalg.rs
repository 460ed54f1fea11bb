//! Small fixed-size vector helpers over [`Real`].

use crate::scalar::Real;

pub type Vec3<T> = [T; 3];
pub type Vec4<T> = [T; 4];

pub fn dot<T: Real, const N: usize>(a: &[T; N], b: &[T; N]) -> T {
    let mut s = T::zero();
    for i in 0..N {
        s += a[i] * b[i];
    }
    s
}

pub fn add<T: Real, const N: usize>(a: &[T; N], b: &[T; N]) -> [T; N] {
    std::array::from_fn(|i| a[i] + b[i])
}

pub fn sub<T: Real, const N: usize>(a: &[T; N], b: &[T; N]) -> [T; N] {
    std::array::from_fn(|i| a[i] - b[i])
}

pub fn scale<T: Real, const N: usize>(a: &[T; N], s: T) -> [T; N] {
    std::array::from_fn(|i| a[i] * s)
}

/// `a + s*b`
pub fn axpy<T: Real, const N: usize>(a: &[T; N], s: T, b: &[T; N]) -> [T; N] {
    std::array::from_fn(|i| a[i] + s * b[i])
}

pub fn norm<T: Real, const N: usize>(a: &[T; N]) -> T {
    dot(a, a).sqrt()
}

pub fn dist<T: Real, const N: usize>(a: &[T; N], b: &[T; N]) -> T {
    norm(&sub(a, b))
}

pub fn normalize<T: Real, const N: usize>(a: &[T; N]) -> Option<[T; N]> {
    let n = norm(a);
    if n > T::zero() && n.is_finite() {
        Some(scale(a, T::one() / n))
    } else {
        None
    }
}

pub fn cross<T: Real>(a: &Vec3<T>, b: &Vec3<T>) -> Vec3<T> {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn cast<T: Real, U: Real, const N: usize>(a: &[T; N]) -> [U; N] {
    std::array::from_fn(|i| U::lit(a[i].to_f64_lossy()))
}

/// Determinant of the 4x4 matrix with the given columns.
pub fn det4<T: Real>(c: [&Vec4<T>; 4]) -> T {
    let m: [[T; 4]; 4] = std::array::from_fn(|r| std::array::from_fn(|k| c[k][r]));
    let minor = |r0: usize, r1: usize, k0: usize, k1: usize| m[r0][k0] * m[r1][k1] - m[r0][k1] * m[r1][k0];
    // Laplace expansion along the first two rows.
    minor(0, 1, 0, 1) * minor(2, 3, 2, 3) - minor(0, 1, 0, 2) * minor(2, 3, 1, 3)
        + minor(0, 1, 0, 3) * minor(2, 3, 1, 2)
        + minor(0, 1, 1, 2) * minor(2, 3, 0, 3)
        - minor(0, 1, 1, 3) * minor(2, 3, 0, 2)
        + minor(0, 1, 2, 3) * minor(2, 3, 0, 1)
}

/// Solves `A x = b` for a small dense system by partial pivoting.
pub fn solve<T: Real, const N: usize>(mut a: [[T; N]; N], mut b: [T; N]) -> Option<[T; N]> {
    for col in 0..N {
        let mut piv = col;
        for r in col + 1..N {
            if a[r][col].abs() > a[piv][col].abs() {
                piv = r;
            }
        }
        if a[piv][col] == T::zero() || !a[piv][col].is_finite() {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..N {
            let f = a[r][col] / a[col][col];
            for k in col..N {
                let v = a[col][k];
                a[r][k] -= f * v;
            }
            let v = b[col];
            b[r] -= f * v;
        }
    }
    let mut x = [T::zero(); N];
    for r in (0..N).rev() {
        let mut s = b[r];
        for k in r + 1..N {
            s -= a[r][k] * x[k];
        }
        x[r] = s / a[r][r];
    }
    Some(x)
}

/// Singular values `(s_min, s_max)` of the 4x2 matrix with columns `u`, `v`.
pub fn singular_values_2<T: Real>(u: &Vec4<T>, v: &Vec4<T>) -> (T, T) {
    let a = dot(u, u);
    let b = dot(u, v);
    let c = dot(v, v);
    let tr = a + c;
    let disc = ((a - c) * (a - c) + T::lit(4.0) * b * b).sqrt();
    let hi = (tr + disc) * T::half();
    // det / hi avoids cancellation in the small eigenvalue.
    let lo = if hi > T::zero() { ((a * c - b * b) / hi).max(T::zero()) } else { T::zero() };
    (lo.sqrt(), hi.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_of_identity_and_swap() {
        let e: [Vec4<f64>; 4] = std::array::from_fn(|i| std::array::from_fn(|j| if i == j { 1.0 } else { 0.0 }));
        assert_eq!(det4([&e[0], &e[1], &e[2], &e[3]]), 1.0);
        assert_eq!(det4([&e[1], &e[0], &e[2], &e[3]]), -1.0);
        let m = [[2.0, 1.0, 0.0, 3.0], [0.5, -1.0, 4.0, 1.0], [1.0, 1.0, 1.0, 1.0], [0.0, 2.0, -3.0, 5.0]];
        // Reference value from an independent LU evaluation.
        let d = det4([&m[0], &m[1], &m[2], &m[3]]);
        let x = solve(std::array::from_fn(|r| std::array::from_fn(|c| m[c][r])), [1.0, 2.0, 3.0, 4.0]).unwrap();
        let back: Vec4<f64> = std::array::from_fn(|r| (0..4).map(|c| m[c][r] * x[c]).sum());
        assert!(dist(&back, &[1.0, 2.0, 3.0, 4.0]) < 1e-12);
        assert!((d - (-38.5)).abs() < 1e-12, "{d}");
    }

    #[test]
    fn singular_values_of_conformal_pair() {
        let (lo, hi): (f64, f64) = singular_values_2(&[3.0, 0.0, 0.0, 0.0], &[0.0, 3.0, 0.0, 0.0]);
        assert!((lo - 3.0).abs() < 1e-14 && (hi - 3.0).abs() < 1e-14);
        let (lo, _): (f64, f64) = singular_values_2(&[1.0, 1.0, 0.0, 0.0], &[2.0, 2.0, 0.0, 0.0]);
        assert!(lo < 1e-14);
    }
}
