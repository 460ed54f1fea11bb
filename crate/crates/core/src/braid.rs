//! Braid words: parsing, exponent sums, closure permutations, torus and
//! quasipositive braids, slice-Bennequin bound, and extraction of a braid
//! from closed curves winding around an axis.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{FalloutError, Result};
use crate::link::Axis;
use crate::linalg::{Vec3, cross, dot, normalize, sub};
use crate::scalar::Real;

/// Word in the generators `s_i` of the braid group on `strands` strands.
/// A letter `i > 0` is `s_i`, `-i` is its inverse.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BraidWord {
    pub strands: u32,
    pub letters: Vec<i32>,
}

impl BraidWord {
    pub fn new(strands: u32, letters: Vec<i32>) -> Result<Self> {
        if strands == 0 {
            return Err(FalloutError::Input("braid needs at least one strand".into()));
        }
        for &l in &letters {
            if l == 0 || l.unsigned_abs() >= strands {
                return Err(FalloutError::Input(format!("generator index {l} invalid on {strands} strands")));
            }
        }
        Ok(BraidWord { strands, letters })
    }

    pub fn empty(strands: u32) -> Self {
        BraidWord { strands, letters: Vec::new() }
    }

    /// Parses `"s1 s2^-1 s1^3"`; exponents expand into repeated letters.
    pub fn parse(strands: u32, text: &str) -> Result<Self> {
        let mut letters = Vec::new();
        for tok in text.split_whitespace() {
            let body = tok
                .strip_prefix('s')
                .or_else(|| tok.strip_prefix('σ'))
                .ok_or_else(|| FalloutError::Input(format!("bad braid letter '{tok}'")))?;
            let (idx, exp) = match body.split_once('^') {
                Some((i, e)) => (i, e.parse::<i32>().map_err(|_| FalloutError::Input(format!("bad exponent in '{tok}'")))?),
                None => (body, 1),
            };
            let i: i32 = idx.parse().map_err(|_| FalloutError::Input(format!("bad generator index in '{tok}'")))?;
            if i <= 0 {
                return Err(FalloutError::Input(format!("bad generator index in '{tok}'")));
            }
            for _ in 0..exp.unsigned_abs() {
                letters.push(if exp > 0 { i } else { -i });
            }
        }
        BraidWord::new(strands, letters)
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn exponent_sum(&self) -> i64 {
        self.letters.iter().map(|l| l.signum() as i64).sum()
    }

    /// Underlying permutation (image of each strand position, 0-based) and
    /// the number of closure components.
    pub fn permutation_and_components(&self) -> (Vec<usize>, usize) {
        let n = self.strands as usize;
        // pos[s] = current position of the strand that started at s
        let mut at: Vec<usize> = (0..n).collect();
        for &l in &self.letters {
            let i = l.unsigned_abs() as usize - 1;
            at.swap(i, i + 1);
        }
        // at[p] = starting strand now at position p; permutation s -> p
        let mut perm = vec![0; n];
        for (p, &s) in at.iter().enumerate() {
            perm[s] = p;
        }
        let mut seen = vec![false; n];
        let mut cycles = 0;
        for s in 0..n {
            if !seen[s] {
                cycles += 1;
                let mut x = s;
                while !seen[x] {
                    seen[x] = true;
                    x = perm[x];
                }
            }
        }
        (perm, cycles)
    }

    pub fn components(&self) -> usize {
        self.permutation_and_components().1
    }

    /// Cancels adjacent inverse pairs until none remain.
    pub fn free_reduce(&self) -> BraidWord {
        let mut out: Vec<i32> = Vec::new();
        for &l in &self.letters {
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        BraidWord { strands: self.strands, letters: out }
    }

    pub fn inverse(&self) -> BraidWord {
        BraidWord { strands: self.strands, letters: self.letters.iter().rev().map(|l| -l).collect() }
    }

    pub fn concat(&self, other: &BraidWord) -> Result<BraidWord> {
        if self.strands != other.strands {
            return Err(FalloutError::Input(format!("strand counts differ: {} vs {}", self.strands, other.strands)));
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(BraidWord { strands: self.strands, letters })
    }

    pub fn conjugate(&self, by: &BraidWord) -> Result<BraidWord> {
        by.concat(self)?.concat(&by.inverse())
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.letters.iter().map(|&l| if l > 0 { format!("s{l}") } else { format!("s{}^-1", -l) }).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// `(s_1 ... s_{p-1})^q` on `p` strands.
pub fn torus_braid(p: u32, q: u32) -> Result<BraidWord> {
    if p < 2 || q < 1 {
        return Err(FalloutError::Input(format!("torus braid needs p >= 2, q >= 1, got ({p}, {q})")));
    }
    let mut letters = Vec::with_capacity(((p - 1) * q) as usize);
    for _ in 0..q {
        letters.extend(1..p as i32);
    }
    BraidWord::new(p, letters)
}

/// One band `gamma s_i gamma^-1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Band {
    pub conjugator: BraidWord,
    pub generator: u32,
}

/// Product of the bands in order.
pub fn qp_compose(strands: u32, bands: &[Band]) -> Result<BraidWord> {
    let mut out = BraidWord::empty(strands);
    for b in bands {
        if b.conjugator.strands != strands {
            return Err(FalloutError::Input(format!(
                "band conjugator on {} strands, expected {strands}",
                b.conjugator.strands
            )));
        }
        let g = BraidWord::new(strands, vec![b.generator as i32])?;
        out = out.concat(&g.conjugate(&b.conjugator)?)?;
    }
    Ok(out)
}

/// Upper bound `n - e(w)` for the slice Euler characteristic of the closure.
pub fn slice_bennequin(w: &BraidWord) -> i64 {
    w.strands as i64 - w.exponent_sum()
}

/// Splits the word into segments of the form `gamma s_i gamma^-1` when
/// possible (exact letter match, no group relations). Returns the bands.
pub fn syntactic_qp_bands(w: &BraidWord) -> Option<Vec<Band>> {
    let l = &w.letters;
    let n = l.len();
    // ok[i] = Some(j): l[j..i] is one band and l[..j] decomposes
    let mut prev: Vec<Option<usize>> = vec![None; n + 1];
    let mut reach = vec![false; n + 1];
    reach[0] = true;
    for start in 0..n {
        if !reach[start] {
            continue;
        }
        let mut len = 1;
        while start + len <= n {
            let seg = &l[start..start + len];
            let h = len / 2;
            if seg[h] > 0 && (0..h).all(|k| seg[k] == -seg[len - 1 - k]) && !reach[start + len] {
                reach[start + len] = true;
                prev[start + len] = Some(start);
            }
            len += 2;
        }
    }
    if !reach[n] {
        return None;
    }
    let mut bands = Vec::new();
    let mut end = n;
    while end > 0 {
        let start = prev[end]?;
        let seg = &l[start..end];
        let h = seg.len() / 2;
        bands.push(Band { conjugator: BraidWord { strands: w.strands, letters: seg[..h].to_vec() }, generator: seg[h] as u32 });
        end = start;
    }
    bands.reverse();
    Some(bands)
}

/// Options for [`extract_braid`].
#[derive(Clone, Copy, Debug)]
pub struct ExtractOptions {
    /// Grid points per curve sample (at least 8).
    pub oversample: usize,
    /// Strands closer than this in both height and depth are ambiguous.
    pub ambiguity: f64,
}

impl Default for ExtractOptions {
    fn default() -> Self {
        ExtractOptions { oversample: 8, ambiguity: 1e-9 }
    }
}

/// Cylindrical coordinates of one curve about the axis, with `theta`
/// unwrapped.
struct Strandset<T> {
    theta: Vec<T>,
    rho: Vec<T>,
    h: Vec<T>,
    span: T,
    degree: usize,
}

impl<T: Real> Strandset<T> {
    /// `(rho, h)` at unwrapped angle `phi` (taken modulo the total span).
    fn at(&self, phi: T) -> (T, T) {
        let t0 = self.theta[0];
        let mut x = (phi - t0) % self.span;
        if x < T::zero() {
            x += self.span;
        }
        let x = x + t0;
        let m = self.theta.len();
        // last index with theta <= x
        let mut lo = 0usize;
        let mut hi = m;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.theta[mid] <= x { lo = mid } else { hi = mid }
        }
        let (ta, tb, ib) = if lo + 1 < m { (self.theta[lo], self.theta[lo + 1], lo + 1) } else { (self.theta[lo], t0 + self.span, 0) };
        let s = (x - ta) / (tb - ta);
        (self.rho[lo] + s * (self.rho[ib] - self.rho[lo]), self.h[lo] + s * (self.h[ib] - self.h[lo]))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BraidExtraction {
    pub word: BraidWord,
    pub grid: usize,
    pub min_rho: f64,
}

/// Braid read off closed curves that wind monotonically around `axis`.
/// Strands are ordered by height along the axis; a crossing is positive
/// when the strand moving up passes closer to the axis.
pub fn extract_braid<T: Real>(curves: &[Vec<Vec3<T>>], axis: &Axis<T>, opts: &ExtractOptions) -> Result<BraidExtraction> {
    let a = normalize(&axis.direction).ok_or_else(|| FalloutError::Input("zero axis direction".into()))?;
    let mut u = cross(&a, &[T::one(), T::zero(), T::zero()]);
    if crate::linalg::norm(&u) < T::half() {
        u = cross(&a, &[T::zero(), T::one(), T::zero()]);
    }
    let u = normalize(&u).unwrap();
    let v = cross(&a, &u);
    let rho_min = T::lit(1e-6);
    let mut sets = Vec::new();
    let mut total = 0usize;
    let mut samples = 0usize;
    let mut min_rho = f64::INFINITY;
    for c in curves {
        let m = c.len();
        if m < 3 {
            return Err(FalloutError::Input("curve with fewer than 3 points".into()));
        }
        samples += m;
        let mut theta = Vec::with_capacity(m);
        let mut rho = Vec::with_capacity(m);
        let mut h = Vec::with_capacity(m);
        let mut prev = T::zero();
        for (i, p) in c.iter().enumerate() {
            let q = sub(p, &axis.point);
            let (x, y) = (dot(&q, &u), dot(&q, &v));
            let r = (x * x + y * y).sqrt();
            if !(r >= rho_min) {
                return Err(FalloutError::Precondition(format!("not a braid about this axis: point {i} at distance {r} from the axis")));
            }
            min_rho = min_rho.min(r.to_f64_lossy());
            let mut t = y.atan2(x);
            if i > 0 {
                while t <= prev - T::PI() {
                    t += T::tau();
                }
                while t > prev + T::PI() {
                    t -= T::tau();
                }
                if !(t > prev) {
                    return Err(FalloutError::Precondition(format!("not a braid about this axis: angle decreases at point {i}")));
                }
            }
            prev = t;
            theta.push(t);
            rho.push(r);
            h.push(dot(&q, &a));
        }
        // closing segment
        let q = sub(&c[0], &axis.point);
        let mut t = dot(&q, &v).atan2(dot(&q, &u));
        while t <= prev - T::PI() {
            t += T::tau();
        }
        while t > prev + T::PI() {
            t -= T::tau();
        }
        if !(t > prev) {
            return Err(FalloutError::Precondition("not a braid about this axis: angle decreases on the closing segment".into()));
        }
        let span = t - theta[0];
        let deg = (span / T::tau()).round().to_f64_lossy() as usize;
        if deg == 0 || (span - T::tau() * T::from_usize_lossy(deg)).abs() > T::lit(1e-6) {
            return Err(FalloutError::Precondition("not a braid about this axis: curve does not close around it".into()));
        }
        total += deg;
        sets.push(Strandset { theta, rho, h, span, degree: deg });
    }
    let grid = (opts.oversample.max(8) * samples).max(64);
    let tol = T::lit(opts.ambiguity);
    // strand k of set c sits at phi + 2 pi k
    let eval = |phi: T| -> Vec<(T, T)> {
        let mut out = Vec::with_capacity(total);
        for s in &sets {
            for k in 0..s.degree {
                out.push(s.at(phi + T::tau() * T::from_usize_lossy(k)));
            }
        }
        out
    };
    let order_of = |pos: &[(T, T)]| -> Vec<usize> {
        let mut idx: Vec<usize> = (0..pos.len()).collect();
        idx.sort_by(|&i, &j| pos[i].1.partial_cmp(&pos[j].1).unwrap_or(std::cmp::Ordering::Equal));
        idx
    };
    let mut letters = Vec::new();
    let phi0 = T::zero();
    let mut pos = eval(phi0);
    let mut order = order_of(&pos);
    for g in 1..=grid {
        let phi = phi0 + T::tau() * T::from_usize_lossy(g) / T::from_usize_lossy(grid);
        let new_pos = eval(phi);
        emit_crossings(&pos, &new_pos, &mut order, T::tau() * T::from_usize_lossy(g - 1) / T::from_usize_lossy(grid), phi, &eval, tol, &mut letters, 0)?;
        pos = new_pos;
    }
    Ok(BraidExtraction { word: BraidWord::new(total as u32, letters)?, grid, min_rho })
}

/// Adjacent transpositions between two grid steps, refined by bisection
/// when several overlapping swaps occur in one step.
#[allow(clippy::too_many_arguments)]
fn emit_crossings<T: Real, F: Fn(T) -> Vec<(T, T)>>(
    before: &[(T, T)],
    after: &[(T, T)],
    order: &mut Vec<usize>,
    phi_a: T,
    phi_b: T,
    eval: &F,
    tol: T,
    letters: &mut Vec<i32>,
    depth: usize,
) -> Result<()> {
    let mut target: Vec<usize> = order.clone();
    target.sort_by(|&i, &j| after[i].1.partial_cmp(&after[j].1).unwrap_or(std::cmp::Ordering::Equal));
    if target == *order {
        return Ok(());
    }
    // count inversions between order and target
    let rank: Vec<usize> = {
        let mut r = vec![0; order.len()];
        for (p, &s) in target.iter().enumerate() {
            r[s] = p;
        }
        r
    };
    let swaps: Vec<usize> = (0..order.len() - 1).filter(|&p| rank[order[p]] > rank[order[p + 1]]).collect();
    let inversions = {
        let mut c = 0;
        for i in 0..order.len() {
            for j in i + 1..order.len() {
                if rank[order[i]] > rank[order[j]] {
                    c += 1;
                }
            }
        }
        c
    };
    let disjoint = swaps.windows(2).all(|w| w[1] > w[0] + 1);
    if inversions == swaps.len() && disjoint {
        for &p in &swaps {
            let (lo, hi) = (order[p], order[p + 1]);
            // strand `lo` moves up past `hi`
            let mid = (phi_a + phi_b) * T::half();
            let pm = eval(mid);
            let dr = pm[lo].0 - pm[hi].0;
            let dh = pm[lo].1 - pm[hi].1;
            if dr.abs() < tol && dh.abs() < tol {
                return Err(FalloutError::Resolution("ambiguous crossing; sample more densely".into()));
            }
            let rl = (before[lo].0 + after[lo].0) * T::half();
            let rh = (before[hi].0 + after[hi].0) * T::half();
            let sign = if rl < rh { 1 } else { -1 };
            letters.push(sign * (p as i32 + 1));
            order.swap(p, p + 1);
        }
        return Ok(());
    }
    if depth > 40 {
        return Err(FalloutError::Resolution("ambiguous crossing; sample more densely".into()));
    }
    let mid = (phi_a + phi_b) * T::half();
    let pm = eval(mid);
    emit_crossings(before, &pm, order, phi_a, mid, eval, tol, letters, depth + 1)?;
    emit_crossings(&pm, after, order, mid, phi_b, eval, tol, letters, depth + 1)
}
