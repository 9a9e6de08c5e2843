//! All roots of a univariate complex polynomial by simultaneous (Aberth-Ehrlich)
//! iteration, and root counting inside a disk.

use std::f64::consts::TAU;

use num_complex::Complex64;
use thiserror::Error;

use crate::poly::SLICE_ZERO_REL;

/// Residual bound relative to `max|b_j| * max(1, |r|)^d`.
pub const RESIDUAL_TOL: f64 = 1e-10;
/// Default half-width of the "on the circle" band, as a multiple of `1 + r`.
pub const DEFAULT_THICKNESS: f64 = 1e-6;

const MAX_ITERATIONS: usize = 400;
const CLUSTER_TOL: f64 = 1e-7;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RootError {
    #[error("all coefficients are zero")]
    AllZero,
    #[error("a root of modulus {modulus} lies within the tolerance band of the circle of radius {radius}")]
    RootNearCircle { modulus: f64, radius: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RootSet {
    /// Roots with multiplicity; zero roots of the input appear as exact zeros.
    pub roots: Vec<Complex64>,
    /// `max_k |q(r_k)| / (max_j |b_j| * max(1, |r_k|)^d)`.
    pub residual: f64,
    pub converged: bool,
}

impl RootSet {
    fn empty() -> Self {
        RootSet { roots: Vec::new(), residual: 0.0, converged: true }
    }
}

/// Find every root of `b_0 + b_1 w + ... + b_d w^d`.
///
/// Coefficients below `1e-300 * max|b|` are treated as zero. A polynomial of
/// degree zero has an empty root set.
pub fn all_roots(coeffs: &[Complex64]) -> Result<RootSet, RootError> {
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if !(scale > 0.0) {
        return Err(RootError::AllZero);
    }
    let floor = SLICE_ZERO_REL * scale;
    let hi = coeffs.iter().rposition(|c| c.norm() > floor).unwrap();
    let lo = coeffs.iter().position(|c| c.norm() > floor).unwrap();
    let core = &coeffs[lo..=hi];
    let mut roots = vec![Complex64::new(0.0, 0.0); lo];
    if core.len() == 1 {
        if roots.is_empty() {
            return Ok(RootSet::empty());
        }
        let residual = residual(&coeffs[..=hi], &roots, scale);
        return Ok(RootSet { roots, residual, converged: residual <= RESIDUAL_TOL });
    }
    let found = aberth(core);
    roots.extend(found);
    let residual = residual(&coeffs[..=hi], &roots, scale);
    Ok(RootSet { converged: residual <= RESIDUAL_TOL && residual.is_finite(), roots, residual })
}

fn residual(coeffs: &[Complex64], roots: &[Complex64], scale: f64) -> f64 {
    roots
        .iter()
        .map(|&r| {
            if r.norm() <= 1.0 {
                horner(coeffs, r).norm() / scale
            } else {
                // |q(r)| / |r|^d via the reversed polynomial at 1/r
                reversed_horner(coeffs, r.inv()).norm() / scale
            }
        })
        .fold(0.0, f64::max)
}

fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
}

fn reversed_horner(coeffs: &[Complex64], y: Complex64) -> Complex64 {
    coeffs.iter().fold(Complex64::new(0.0, 0.0), |acc, c| acc * y + c)
}

/// Newton correction `p(z)/p'(z)` and whether `|p(z)|` is already at the
/// rounding-error level.
fn newton_correction(coeffs: &[Complex64], z: Complex64) -> (Complex64, bool) {
    let d = coeffs.len() - 1;
    let modulus = z.norm();
    if modulus <= 1.0 {
        let mut p = coeffs[d];
        let mut dp = Complex64::new(0.0, 0.0);
        let mut bound = coeffs[d].norm();
        for c in coeffs[..d].iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
            bound = bound * modulus + c.norm();
        }
        let small = p.norm() <= 8.0 * f64::EPSILON * bound;
        (p / dp, small)
    } else {
        // p(z) = z^d r(y), y = 1/z, r has the coefficients reversed.
        let y = z.inv();
        let ym = y.norm();
        let mut r = coeffs[0];
        let mut dr = Complex64::new(0.0, 0.0);
        let mut bound = coeffs[0].norm();
        for c in coeffs[1..].iter() {
            dr = dr * y + r;
            r = r * y + c;
            bound = bound * ym + c.norm();
        }
        let small = r.norm() <= 8.0 * f64::EPSILON * bound;
        let denom = Complex64::new(d as f64, 0.0) - y * dr / r;
        (z / denom, small)
    }
}

/// Initial approximations on circles whose radii come from the upper convex
/// hull of `(k, ln|b_k|)`.
fn initial_guesses(coeffs: &[Complex64]) -> Vec<Complex64> {
    let d = coeffs.len() - 1;
    let pts: Vec<(usize, f64)> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| c.norm() > 0.0)
        .map(|(k, c)| (k, c.norm().ln()))
        .collect();
    let mut hull: Vec<(usize, f64)> = Vec::with_capacity(pts.len());
    for &p in &pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 as f64 - a.0 as f64) * (p.1 - a.1) - (b.1 - a.1) * (p.0 as f64 - a.0 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let mut out = Vec::with_capacity(d);
    let sigma = 0.7;
    for w in hull.windows(2) {
        let (k0, l0) = w[0];
        let (k1, l1) = w[1];
        let count = k1 - k0;
        let radius = ((l0 - l1) / count as f64).exp();
        for i in 0..count {
            let angle = TAU * i as f64 / count as f64 + TAU * k0 as f64 / d as f64 + sigma;
            out.push(Complex64::from_polar(radius, angle));
        }
    }
    out
}

fn aberth(coeffs: &[Complex64]) -> Vec<Complex64> {
    let d = coeffs.len() - 1;
    if d == 1 {
        return vec![-coeffs[0] / coeffs[1]];
    }
    let mut z = initial_guesses(coeffs);
    let mut done = vec![false; d];
    for _ in 0..MAX_ITERATIONS {
        let mut active = false;
        for k in 0..d {
            if done[k] {
                continue;
            }
            let (ratio, small) = newton_correction(coeffs, z[k]);
            if small || !ratio.is_finite() {
                done[k] = true;
                continue;
            }
            let mut s = Complex64::new(0.0, 0.0);
            for (j, zj) in z.iter().enumerate() {
                if j != k {
                    s += (z[k] - zj).inv();
                }
            }
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if !w.is_finite() {
                done[k] = true;
                continue;
            }
            z[k] -= w;
            if w.norm() <= 4.0 * f64::EPSILON * z[k].norm() {
                done[k] = true;
            } else {
                active = true;
            }
        }
        if !active {
            break;
        }
    }
    merge_clusters(&mut z);
    z
}

/// Replace tight clusters by their centroid; repeated roots converge only
/// linearly and spread by about the square root of machine precision.
fn merge_clusters(z: &mut [Complex64]) {
    let n = z.len();
    let mut assigned = vec![false; n];
    for i in 0..n {
        if assigned[i] {
            continue;
        }
        let tol = CLUSTER_TOL * z[i].norm().max(1.0);
        let members: Vec<usize> = (i..n).filter(|&j| !assigned[j] && (z[j] - z[i]).norm() < tol).collect();
        if members.len() > 1 {
            let mean = members.iter().map(|&j| z[j]).sum::<Complex64>() / members.len() as f64;
            for &j in &members {
                z[j] = mean;
                assigned[j] = true;
            }
        }
    }
}

/// How a polynomial's roots sit relative to one circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleProfile {
    /// Roots strictly inside the circle, counted with multiplicity.
    pub inside: i64,
    /// Smallest `| ln|r_k| - ln R |` over all roots (infinite when there are none).
    pub min_log_gap: f64,
    /// Some root lies in the band `| |r_k| - R | <= thickness * (1 + R)`.
    pub near: bool,
    /// Modulus of the root closest to the circle.
    pub closest_modulus: f64,
    pub converged: bool,
}

/// Locate the roots of `sum b_k w^k` relative to the circle `|w| = exp(log_radius)`.
///
/// The polynomial is rescaled to `w = R u` before solving so that the circle
/// becomes the unit circle. Returns `None` when every coefficient is zero.
pub fn circle_profile(coeffs: &[Complex64], log_radius: f64, thickness: f64) -> Option<CircleProfile> {
    let logs: Vec<f64> = coeffs.iter().map(|c| c.norm().ln()).collect();
    let shift = logs
        .iter()
        .enumerate()
        .map(|(k, l)| l + k as f64 * log_radius)
        .fold(f64::NEG_INFINITY, f64::max);
    if !shift.is_finite() {
        return None;
    }
    let scaled: Vec<Complex64> = coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| {
            if c.norm() == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                c * (k as f64 * log_radius - shift).exp()
            }
        })
        .collect();
    let set = all_roots(&scaled).ok()?;
    let radius = log_radius.exp();
    let band = thickness * (1.0 + radius) / radius;
    let mut inside = 0;
    let mut min_gap = f64::INFINITY;
    let mut near = false;
    let mut closest = f64::NAN;
    for r in &set.roots {
        let m = r.norm();
        if m < 1.0 {
            inside += 1;
        }
        if (m - 1.0).abs() <= band {
            near = true;
        }
        let gap = if m == 0.0 { f64::INFINITY } else { m.ln().abs() };
        if gap < min_gap || closest.is_nan() {
            min_gap = min_gap.min(gap);
            closest = m * radius;
        }
    }
    Some(CircleProfile { inside, min_log_gap: min_gap, near, closest_modulus: closest, converged: set.converged })
}

/// Number of zeros minus the pole order at the origin of the Laurent
/// polynomial `w^m * sum_k b_k w^k` inside `|w| < r`, with the default
/// thickness band.
pub fn count_roots_in_disk(coeffs: &[Complex64], m: i32, r: f64) -> Result<i64, RootError> {
    count_roots_in_disk_with(coeffs, m, r, DEFAULT_THICKNESS)
}

pub fn count_roots_in_disk_with(coeffs: &[Complex64], m: i32, r: f64, thickness: f64) -> Result<i64, RootError> {
    let profile = circle_profile(coeffs, r.ln(), thickness).ok_or(RootError::AllZero)?;
    if profile.near {
        return Err(RootError::RootNearCircle { modulus: profile.closest_modulus, radius: r });
    }
    Ok(profile.inside + m as i64)
}
