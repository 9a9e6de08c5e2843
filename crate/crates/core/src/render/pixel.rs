//! Pixel-based pictures: root slicing, per-pixel membership, greedy flood.

use std::f64::consts::TAU;

use rayon::prelude::*;

use crate::membership::{Classifier, MembershipConfig};
use crate::poly::LaurentPolynomial;
use crate::roots::all_roots;
use crate::tropical::{archimedean_tropicalization, tropical_hypersurface};

use super::{DomainBox, RasterImage, RenderError, INK};

#[derive(Debug, Clone, PartialEq)]
pub struct NaiveRender {
    pub image: RasterImage,
    /// Roots that landed inside the domain.
    pub plotted: usize,
    pub skipped_slices: usize,
}

fn require_two(p: &LaurentPolynomial, domain: &DomainBox) -> Result<(), RenderError> {
    if p.arity() != 2 || domain.dimension() != 2 {
        return Err(RenderError::Arity { supported: "2", got: p.arity() });
    }
    Ok(())
}

/// Plot `(x, ln|w|)` for every root `w` of `p(e^{x + i theta}, w)` over a grid
/// of `(x, theta)`, and the same with the variable roles swapped.
pub fn naive_render(
    p: &LaurentPolynomial,
    domain: &DomainBox,
    modulus_steps: usize,
    arg_steps: usize,
    width: usize,
    height: usize,
) -> Result<NaiveRender, RenderError> {
    require_two(p, domain)?;
    let mut image = RasterImage::new(width, height, domain.clone());
    let mut plotted = 0;
    let mut skipped = 0;
    for role in 0..2 {
        let other = 1 - role;
        let jobs: Vec<(usize, usize)> =
            (0..modulus_steps).flat_map(|a| (0..arg_steps).map(move |b| (a, b))).collect();
        let results: Vec<Option<Vec<[f64; 2]>>> = jobs
            .par_iter()
            .map(|&(a, b)| {
                let t = if modulus_steps > 1 { a as f64 / (modulus_steps - 1) as f64 } else { 0.5 };
                let x = domain.lo[other] + t * domain.width(other);
                let theta = TAU * b as f64 / arg_steps as f64;
                let mut xs = [0.0; 2];
                let mut th = [0.0; 2];
                xs[other] = x;
                th[other] = theta;
                let slice = p.restrict_log_polar(role, &xs, &th);
                if slice.degenerate {
                    return None;
                }
                let roots = all_roots(&slice.coeffs).ok()?;
                Some(
                    roots
                        .roots
                        .iter()
                        .filter(|r| r.norm() > 0.0)
                        .map(|r| {
                            let mut pt = [0.0; 2];
                            pt[other] = x;
                            pt[role] = r.norm().ln();
                            pt
                        })
                        .collect(),
                )
            })
            .collect();
        for r in results {
            match r {
                None => skipped += 1,
                Some(pts) => {
                    for pt in pts {
                        if let Some((i, j)) = image.pixel_of(pt) {
                            image.set(i, j, INK);
                            plotted += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(NaiveRender { image, plotted, skipped_slices: skipped })
}

/// Classify every pixel center; amoeba and undecided pixels are painted.
pub fn pixel_membership_render(
    p: &LaurentPolynomial,
    domain: &DomainBox,
    width: usize,
    height: usize,
    samples: usize,
) -> Result<RasterImage, RenderError> {
    require_two(p, domain)?;
    let cls = Classifier::with_config(p, MembershipConfig::with_samples(samples));
    let mut image = RasterImage::new(width, height, domain.clone());
    let painted: Vec<bool> = (0..width * height)
        .into_par_iter()
        .map(|k| cls.classify(&image.pixel_center(k % width, k / width)).status.is_amoeba_like())
        .collect();
    for (k, paint) in painted.into_iter().enumerate() {
        if paint {
            image.set(k % width, k / width, INK);
        }
    }
    Ok(image)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GreedyRender {
    pub image: RasterImage,
    /// Distinct pixels classified.
    pub tested: usize,
    pub warnings: Vec<String>,
}

/// Points along the Archimedean tropical curve, one per pixel diagonal.
pub fn tropical_seeds(p: &LaurentPolynomial, domain: &DomainBox, width: usize, height: usize) -> Vec<[f64; 2]> {
    if p.len() < 2 || p.arity() != 2 {
        return Vec::new();
    }
    let curve = tropical_hypersurface(&archimedean_tropicalization(p));
    let step = (domain.width(0) / width as f64).min(domain.width(1) / height as f64);
    let reach = domain.width(0).hypot(domain.width(1))
        + domain.lo.iter().chain(&domain.hi).map(|v| v.abs()).fold(0.0, f64::max) * 2.0;
    curve.sample_points(step, reach).into_iter().filter(|q| domain.contains(q)).collect()
}

const VERIFY_STRIDE: usize = 16;

/// Breadth-first flood over 8-connected pixels from amoeba-classified seeds.
/// A sparse verification grid catches amoeba pieces the seeds missed; they
/// are reported and then flooded as well.
pub fn greedy_render(
    p: &LaurentPolynomial,
    domain: &DomainBox,
    width: usize,
    height: usize,
    samples: usize,
    seeds: Option<Vec<[f64; 2]>>,
) -> Result<GreedyRender, RenderError> {
    require_two(p, domain)?;
    let cls = Classifier::with_config(p, MembershipConfig::with_samples(samples));
    let mut image = RasterImage::new(width, height, domain.clone());
    let seeds = seeds.unwrap_or_else(|| tropical_seeds(p, domain, width, height));
    // 0 untested, 1 complement, 2 amoeba-like
    let mut state = vec![0u8; width * height];
    let mut tested = 0;
    let mut warnings = Vec::new();

    let mut classify = |keys: &mut Vec<usize>, state: &mut Vec<u8>, image: &RasterImage| -> Vec<usize> {
        keys.sort_unstable();
        keys.dedup();
        keys.retain(|&k| state[k] == 0);
        let res: Vec<bool> = keys
            .par_iter()
            .map(|&k| cls.classify(&image.pixel_center(k % width, k / width)).status.is_amoeba_like())
            .collect();
        tested += keys.len();
        let mut hits = Vec::new();
        for (&k, amoeba) in keys.iter().zip(res) {
            state[k] = if amoeba { 2 } else { 1 };
            if amoeba {
                hits.push(k);
            }
        }
        hits
    };
    let flood = |mut frontier: Vec<usize>,
                 state: &mut Vec<u8>,
                 image: &RasterImage,
                 classify: &mut dyn FnMut(&mut Vec<usize>, &mut Vec<u8>, &RasterImage) -> Vec<usize>| {
        while !frontier.is_empty() {
            let mut next: Vec<usize> = Vec::new();
            for &k in &frontier {
                let (i, j) = ((k % width) as i64, (k / width) as i64);
                for dj in -1..=1 {
                    for di in -1..=1 {
                        let (a, b) = (i + di, j + dj);
                        if (di, dj) != (0, 0) && a >= 0 && b >= 0 && a < width as i64 && b < height as i64 {
                            let q = b as usize * width + a as usize;
                            if state[q] == 0 {
                                next.push(q);
                            }
                        }
                    }
                }
            }
            frontier = classify(&mut next, state, image);
        }
    };

    let mut seed_keys: Vec<usize> =
        seeds.iter().filter_map(|s| image.pixel_of(*s)).map(|(i, j)| j * width + i).collect();
    let hits = classify(&mut seed_keys, &mut state, &image);
    flood(hits, &mut state, &image, &mut classify);

    let mut verify: Vec<usize> = (VERIFY_STRIDE / 2..height)
        .step_by(VERIFY_STRIDE)
        .flat_map(|j| (VERIFY_STRIDE / 2..width).step_by(VERIFY_STRIDE).map(move |i| j * width + i))
        .collect();
    let missed = classify(&mut verify, &mut state, &image);
    if !missed.is_empty() {
        warnings.push(format!(
            "seeds missed {} amoeba pixels of the verification grid; flooding from them",
            missed.len()
        ));
        flood(missed, &mut state, &image, &mut classify);
    }
    for (k, s) in state.iter().enumerate() {
        if *s == 2 {
            image.set(k % width, k / width, INK);
        }
    }
    Ok(GreedyRender { image, tested, warnings })
}
