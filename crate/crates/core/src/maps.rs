//! Images of the zero locus: coamoeba, compactified amoeba and contour.

use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::Serialize;

use crate::newton::newton_polytope;
use crate::poly::{reduce_angle, ComplexPoint, Exponent, LaurentPolynomial, LogPoint};
use crate::render::{DomainBox, RasterImage, RenderError, INK};
use crate::roots::all_roots;
use crate::Complex64;

/// Relative residual bound for accepted zero samples.
pub const ZERO_RESIDUAL: f64 = 1e-8;

/// Slice fiber a sample came from: the root is in variable `role`, the other
/// variable sits at `exp(x + i theta)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Fiber {
    pub role: usize,
    pub x: f64,
    pub theta: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZeroSample {
    pub points: Vec<ComplexPoint>,
    pub residuals: Vec<f64>,
    pub fibers: Vec<Fiber>,
    pub skipped_slices: usize,
    /// Roots dropped by the residual check.
    pub rejected: usize,
}

impl ZeroSample {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

fn require_two(p: &LaurentPolynomial) -> Result<(), RenderError> {
    if p.arity() != 2 {
        return Err(RenderError::Arity { supported: "2", got: p.arity() });
    }
    Ok(())
}

/// Residual bound `1e-8 * scale * max(1, |z|)^deg` for a point of `p`.
pub fn residual_bound(p: &LaurentPolynomial, z: &[Complex64]) -> f64 {
    let deg = p.terms().map(|(e, _)| e.0.iter().map(|a| a.unsigned_abs()).sum::<u32>()).max().unwrap_or(0);
    let norm = z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let inv = z.iter().map(|c| 1.0 / c.norm()).fold(1.0, f64::max);
    ZERO_RESIDUAL * p.coefficient_scale() * norm.max(inv).max(1.0).powi(deg as i32)
}

/// Roots of the slices over a `density x density` grid of (log-modulus,
/// argument) of one variable, for both variable roles.
pub fn sample_zero_locus(p: &LaurentPolynomial, domain: &DomainBox, density: usize) -> Result<ZeroSample, RenderError> {
    require_two(p)?;
    let fibers: Vec<Fiber> = (0..2)
        .flat_map(|role| {
            let other = 1 - role;
            (0..density).flat_map(move |a| {
                let t = if density > 1 { a as f64 / (density - 1) as f64 } else { 0.5 };
                let x = domain.lo[other] + t * domain.width(other);
                (0..density).map(move |b| Fiber { role, x, theta: TAU * b as f64 / density as f64 })
            })
        })
        .collect();
    let per: Vec<Option<Vec<(ComplexPoint, f64, bool)>>> = fibers.par_iter().map(|f| fiber_zeros(p, f)).collect();
    let mut out = ZeroSample { points: Vec::new(), residuals: Vec::new(), fibers: Vec::new(), skipped_slices: 0, rejected: 0 };
    for (f, r) in fibers.iter().zip(per) {
        let Some(list) = r else {
            out.skipped_slices += 1;
            continue;
        };
        for (z, res, ok) in list {
            if ok {
                out.points.push(z);
                out.residuals.push(res);
                out.fibers.push(*f);
            } else {
                out.rejected += 1;
            }
        }
    }
    Ok(out)
}

fn fiber_zeros(p: &LaurentPolynomial, f: &Fiber) -> Option<Vec<(ComplexPoint, f64, bool)>> {
    let other = 1 - f.role;
    let mut xs = [0.0; 2];
    let mut th = [0.0; 2];
    xs[other] = f.x;
    th[other] = f.theta;
    let slice = p.restrict_log_polar(f.role, &xs, &th);
    if slice.degenerate {
        return None;
    }
    let roots = all_roots(&slice.coeffs).ok()?;
    let fixed = Complex64::from_polar(f.x.exp(), f.theta);
    Some(
        roots
            .roots
            .iter()
            .filter(|w| w.norm() > 0.0 && w.is_finite())
            .map(|w| {
                let mut z = [fixed; 2];
                z[f.role] = *w;
                let res = p.eval_unchecked(&z).norm();
                let ok = res <= residual_bound(p, &z);
                (ComplexPoint::new(z.to_vec()).expect("nonzero coordinates"), res, ok)
            })
            .collect(),
    )
}

/// Componentwise arguments in `[0, 2 pi)`.
pub fn coamoeba_points(sample: &ZeroSample) -> Vec<Vec<f64>> {
    sample.points.iter().map(|z| z.arg()).collect()
}

/// Raster of argument pairs over the torus square `[0, 2 pi)^2`.
pub fn coamoeba_raster(points: &[Vec<f64>], width: usize, height: usize) -> RasterImage {
    let mut img = RasterImage::new(width, height, DomainBox { lo: vec![0.0, 0.0], hi: vec![TAU, TAU] });
    for q in points {
        let u = reduce_angle(q[0]) / TAU;
        let v = reduce_angle(q[1]) / TAU;
        let i = ((u * width as f64) as usize).min(width - 1);
        let j = (((1.0 - v) * height as f64) as usize).min(height - 1);
        img.set(i, j, INK);
    }
    img
}

/// `sum |z^a| a / sum |z^a|` over the support of `p`.
pub fn moment_map(p: &LaurentPolynomial, z: &ComplexPoint) -> Vec<f64> {
    let (point, _) = moment_with_weights(p, &z.log().0);
    point
}

/// Moment map from log-moduli, with the normalised barycentric weights.
pub fn moment_with_weights(p: &LaurentPolynomial, x: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let logs: Vec<f64> = p.terms().map(|(e, _)| e.dot(x)).collect();
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = logs.iter().map(|l| (l - top).exp()).collect();
    let total: f64 = w.iter().sum();
    let w: Vec<f64> = w.into_iter().map(|v| v / total).collect();
    let mut point = vec![0.0; p.arity()];
    for ((e, _), wi) in p.terms().zip(&w) {
        for (j, a) in e.0.iter().enumerate() {
            point[j] += wi * *a as f64;
        }
    }
    (point, w)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompactifiedAmoeba {
    pub points: Vec<Vec<f64>>,
    /// Newton polytope vertices (counterclockwise in the plane).
    pub outline: Vec<Exponent>,
}

impl CompactifiedAmoeba {
    /// Raster over the bounding box of the outline, with a half-unit margin.
    pub fn raster(&self, width: usize, height: usize) -> RasterImage {
        let lo = (0..2).map(|j| self.outline.iter().map(|v| v.0[j]).min().unwrap() as f64 - 0.5).collect();
        let hi = (0..2).map(|j| self.outline.iter().map(|v| v.0[j]).max().unwrap() as f64 + 0.5).collect();
        let mut img = RasterImage::new(width, height, DomainBox { lo, hi });
        for q in &self.points {
            if let Some((i, j)) = img.pixel_of([q[0], q[1]]) {
                img.set(i, j, INK);
            }
        }
        img
    }
}

pub fn compactified_amoeba(p: &LaurentPolynomial, sample: &ZeroSample) -> CompactifiedAmoeba {
    CompactifiedAmoeba {
        points: sample.points.iter().map(|z| moment_map(p, z)).collect(),
        outline: newton_polytope(p).vertices().to_vec(),
    }
}

/// `Im(g1 conj(g2)) / (|g1| |g2|)` with `g_j = z_j d_j p`; zero exactly where
/// the logarithmic Gauss map is real. A missing derivative is identically zero.
pub fn contour_indicator(dp: &[Option<LaurentPolynomial>; 2], z: &[Complex64]) -> f64 {
    let g = |d: &Option<LaurentPolynomial>| d.as_ref().map_or(Complex64::new(0.0, 0.0), |d| d.eval_unchecked(z));
    let (g1, g2) = (g(&dp[0]), g(&dp[1]));
    let den = g1.norm() * g2.norm();
    if den == 0.0 {
        return 0.0;
    }
    (g1 * g2.conj()).im / den
}

const CONTOUR_TOL: f64 = 1e-10;

/// Points of the contour found by following slice roots around each fiber
/// circle and bisecting sign changes of [`contour_indicator`].
pub fn contour_points(p: &LaurentPolynomial, domain: &DomainBox, density: usize) -> Result<Vec<LogPoint>, RenderError> {
    require_two(p)?;
    let dp = [p.log_derivative(0), p.log_derivative(1)];
    let lines: Vec<(usize, f64)> = (0..2)
        .flat_map(|role| {
            let other = 1 - role;
            (0..density).map(move |a| {
                let t = if density > 1 { a as f64 / (density - 1) as f64 } else { 0.5 };
                (role, domain.lo[other] + t * domain.width(other))
            })
        })
        .collect();
    let steps = density.max(8) * 2;
    let found: Vec<Vec<LogPoint>> =
        lines.par_iter().map(|&(role, x)| follow_fiber(p, &dp, role, x, steps)).collect();
    let mut out: Vec<LogPoint> = found.into_iter().flatten().filter(|q| domain.contains(&q.0)).collect();
    out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    Ok(out)
}

fn slice_roots(p: &LaurentPolynomial, role: usize, x: f64, theta: f64) -> Option<Vec<Complex64>> {
    let other = 1 - role;
    let mut xs = [0.0; 2];
    let mut th = [0.0; 2];
    xs[other] = x;
    th[other] = theta;
    let slice = p.restrict_log_polar(role, &xs, &th);
    if slice.degenerate {
        return None;
    }
    let set = all_roots(&slice.coeffs).ok()?;
    Some(set.roots.into_iter().filter(|w| w.norm() > 0.0).collect())
}

fn point(role: usize, x: f64, theta: f64, w: Complex64) -> [Complex64; 2] {
    let mut z = [Complex64::from_polar(x.exp(), theta); 2];
    z[role] = w;
    z
}

fn nearest(roots: &[Complex64], w: Complex64) -> Option<Complex64> {
    roots.iter().copied().min_by(|a, b| (a - w).norm().total_cmp(&(b - w).norm()))
}

fn follow_fiber(p: &LaurentPolynomial, dp: &[Option<LaurentPolynomial>; 2], role: usize, x: f64, steps: usize) -> Vec<LogPoint> {
    let h = TAU / steps as f64;
    let mut out = Vec::new();
    let Some(mut prev) = slice_roots(p, role, x, 0.0) else { return out };
    for k in 0..steps {
        let (t0, t1) = (k as f64 * h, (k + 1) as f64 * h);
        let Some(next) = slice_roots(p, role, x, t1) else { return out };
        if next.len() != prev.len() {
            prev = next;
            continue;
        }
        // greedy nearest-neighbour matching between consecutive fibers
        let mut used = vec![false; next.len()];
        for w0 in &prev {
            let Some((m, _)) = next
                .iter()
                .enumerate()
                .filter(|(i, _)| !used[*i])
                .min_by(|a, b| (a.1 - w0).norm().total_cmp(&(b.1 - w0).norm()))
            else {
                break;
            };
            used[m] = true;
            let w1 = next[m];
            let g0 = contour_indicator(dp, &point(role, x, t0, *w0));
            let g1 = contour_indicator(dp, &point(role, x, t1, w1));
            if g0 == 0.0 {
                let z = point(role, x, t0, *w0);
                out.push(LogPoint(vec![z[0].norm().ln(), z[1].norm().ln()]));
            } else if g1 != 0.0 && g0.signum() != g1.signum() {
                if let Some(q) = bisect(p, dp, role, x, (t0, *w0, g0), (t1, w1)) {
                    out.push(q);
                }
            }
        }
        prev = next;
    }
    out
}

fn bisect(
    p: &LaurentPolynomial,
    dp: &[Option<LaurentPolynomial>; 2],
    role: usize,
    x: f64,
    a: (f64, Complex64, f64),
    b: (f64, Complex64),
) -> Option<LogPoint> {
    let (mut ta, mut wa, ga) = a;
    let (mut tb, mut wb) = b;
    for _ in 0..60 {
        let tm = 0.5 * (ta + tb);
        let roots = slice_roots(p, role, x, tm)?;
        let wm = nearest(&roots, 0.5 * (wa + wb))?;
        let gm = contour_indicator(dp, &point(role, x, tm, wm));
        if gm.abs() < CONTOUR_TOL || tb - ta < 1e-14 {
            let z = point(role, x, tm, wm);
            return Some(LogPoint(vec![z[0].norm().ln(), z[1].norm().ln()]));
        }
        if gm.signum() == ga.signum() {
            ta = tm;
            wa = wm;
        } else {
            tb = tm;
            wb = wm;
        }
    }
    None
}
