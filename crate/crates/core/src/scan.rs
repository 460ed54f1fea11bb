//! Coarse polar scans of `sigma_min(dF)` used to locate near-singular spots.

use num_complex::Complex;

use crate::surface::NumDisk;

#[derive(Clone, Copy, Debug)]
pub struct HotSpot {
    pub z: Complex<f64>,
    pub sigma_min: f64,
    /// `sigma_min` over the derivative scale at `|z|`.
    pub ratio: f64,
}

fn ratio(d: &NumDisk<f64>, z: Complex<f64>) -> (f64, f64) {
    let (lo, _) = d.singular_values(z);
    let s = d.derivative_scale(z.norm());
    (lo, if s > 0.0 { lo / s } else { 0.0 })
}

/// Pattern search for a local minimum of `sigma_min` starting at `z`.
pub fn refine_minimum(d: &NumDisk<f64>, mut z: Complex<f64>, mut h: f64, r_max: f64) -> Complex<f64> {
    let f = |w: Complex<f64>| if w.norm() > r_max { f64::INFINITY } else { d.singular_values(w).0 };
    let mut fz = f(z);
    let floor = 1e-15 * r_max;
    for _ in 0..400 {
        if h < floor.max(1e-13 * z.norm()) {
            break;
        }
        let mut moved = false;
        for dz in [Complex::new(h, 0.0), Complex::new(-h, 0.0), Complex::new(0.0, h), Complex::new(0.0, -h)] {
            let w = z + dz;
            let fw = f(w);
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
    z
}

/// Local minima of `sigma_min(dF)` on a geometric polar grid inside `r_max`,
/// refined, with the origin excluded. Sorted by increasing ratio.
pub fn hot_spots(d: &NumDisk<f64>, r_max: f64) -> Vec<HotSpot> {
    let nr = 60usize;
    let nt = 96usize;
    let r_min = r_max * 1e-6;
    let q = (r_min / r_max).powf(1.0 / (nr - 1) as f64);
    let radii: Vec<f64> = (0..nr).map(|i| r_max * 0.98 * q.powi(i as i32)).collect();
    let angles: Vec<f64> = (0..nt).map(|j| std::f64::consts::TAU * (j as f64 + 0.5) / nt as f64).collect();
    let grid: Vec<Vec<f64>> = radii
        .iter()
        .map(|&r| angles.iter().map(|&a| d.singular_values(Complex::from_polar(r, a)).0).collect())
        .collect();
    let mut out: Vec<HotSpot> = Vec::new();
    for i in 1..nr - 1 {
        for j in 0..nt {
            let v = grid[i][j];
            let mut is_min = true;
            'nb: for di in [-1i32, 0, 1] {
                for dj in [-1i32, 0, 1] {
                    if di == 0 && dj == 0 {
                        continue;
                    }
                    let ii = (i as i32 + di) as usize;
                    let jj = ((j as i32 + dj).rem_euclid(nt as i32)) as usize;
                    if grid[ii][jj] < v {
                        is_min = false;
                        break 'nb;
                    }
                }
            }
            if !is_min {
                continue;
            }
            let z0 = Complex::from_polar(radii[i], angles[j]);
            let h = radii[i] * (std::f64::consts::TAU / nt as f64);
            let z = refine_minimum(d, z0, h, r_max);
            let (lo, ratio) = ratio(d, z);
            if z.norm() < 1e-4 * r_max {
                continue;
            }
            if out.iter().any(|s| (s.z - z).norm() < 1e-6 * r_max.max(z.norm())) {
                continue;
            }
            out.push(HotSpot { z, sigma_min: lo, ratio });
        }
    }
    out.sort_by(|a, b| a.ratio.total_cmp(&b.ratio));
    out
}

/// Point of the scan with the smallest conditioning ratio.
pub fn weakest_point(d: &NumDisk<f64>, r_max: f64) -> Complex<f64> {
    let mut best = (Complex::new(r_max * 0.5, 0.0), f64::INFINITY);
    for s in hot_spots(d, r_max) {
        if s.ratio < best.1 {
            best = (s.z, s.ratio);
        }
    }
    for i in 0..=40 {
        let r = r_max * (i as f64 / 40.0).max(1e-6);
        for j in 0..64 {
            let z = Complex::from_polar(r, std::f64::consts::TAU * j as f64 / 64.0);
            let (_, q) = ratio(d, z);
            if q < best.1 {
                best = (z, q);
            }
        }
    }
    best.0
}
