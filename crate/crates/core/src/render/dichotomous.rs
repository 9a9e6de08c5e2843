//! Adaptive 2^n-ary subdivision of the domain by component order.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use crate::membership::{Classifier, MembershipConfig, OrderVector, Status};
use crate::newton::PointClass;
use crate::poly::{LaurentPolynomial, LogPoint};

use super::{
    AmoebaReport, Bounds, CellBox, ComplementComponent, DomainBox, Flags, RenderError, ReportCounts, ReportParams,
    Resolution,
};

pub const DEFAULT_BUDGET: usize = 1 << 22;
pub const MAX_DEPTH: u32 = 14;

/// `AMOEBA_BUDGET` if set to a positive integer, else 2^22 cells.
pub fn default_budget() -> usize {
    std::env::var("AMOEBA_BUDGET")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&v| v > 0)
        .unwrap_or(DEFAULT_BUDGET)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DichotomousParams {
    pub max_depth: u32,
    /// Boxes are always split down to this depth, so that features smaller
    /// than the root box are not skipped by a homogeneous probe set.
    pub min_depth: u32,
    pub samples: usize,
    pub seed: u64,
    /// Maximum number of boxes examined.
    pub budget: usize,
}

impl Default for DichotomousParams {
    fn default() -> Self {
        DichotomousParams { max_depth: 8, min_depth: 4, samples: 8, seed: 0, budget: default_budget() }
    }
}

impl DichotomousParams {
    pub fn new(max_depth: u32, samples: usize) -> Self {
        DichotomousParams { max_depth, min_depth: 4.min(max_depth), samples, ..Default::default() }
    }
}

pub fn dichotomous_components(
    p: &LaurentPolynomial,
    domain: &DomainBox,
    max_depth: u32,
    samples: usize,
) -> Result<AmoebaReport, RenderError> {
    dichotomous_with(p, domain, &DichotomousParams::new(max_depth, samples))
}

#[derive(Clone, Copy)]
struct Node {
    depth: u32,
    origin: [u32; 3],
}

enum Verdict {
    Component(OrderVector),
    Partial(OrderVector),
    Amoeba,
    Undecided,
    Split,
}

pub fn dichotomous_with(
    p: &LaurentPolynomial,
    domain: &DomainBox,
    params: &DichotomousParams,
) -> Result<AmoebaReport, RenderError> {
    let n = p.arity();
    if !(2..=3).contains(&n) {
        return Err(RenderError::Arity { supported: "2 or 3", got: n });
    }
    if domain.dimension() != n {
        return Err(RenderError::Domain(format!("domain has {} axes, polynomial {}", domain.dimension(), n)));
    }
    if params.max_depth > MAX_DEPTH {
        return Err(RenderError::Depth(params.max_depth));
    }
    let dmax = params.max_depth;
    let min_depth = params.min_depth.min(dmax);
    let unit: u32 = 1 << (dmax + 1);
    let cfg = MembershipConfig { samples: params.samples.max(1), seed: params.seed, ..Default::default() };
    let classifier = Classifier::with_config(p, cfg);

    let coord = |key: &[u32; 3]| -> Vec<f64> {
        (0..n).map(|j| domain.lo[j] + domain.width(j) * (key[j] as f64 / unit as f64)).collect()
    };
    let pack = |k: &[u32; 3]| -> u64 { k[0] as u64 | (k[1] as u64) << 20 | (k[2] as u64) << 40 };
    let probes = |node: &Node| -> Vec<[u32; 3]> {
        let s = unit >> node.depth;
        let mut out = Vec::with_capacity((1 << n) + 1);
        let mut c = node.origin;
        for j in 0..n {
            c[j] += s / 2;
        }
        out.push(c);
        for mask in 0..(1u32 << n) {
            let mut k = node.origin;
            for j in 0..n {
                if mask >> j & 1 == 1 {
                    k[j] += s;
                }
            }
            out.push(k);
        }
        out
    };

    let mut cache: HashMap<u64, Status> = HashMap::new();
    let mut level = vec![Node { depth: 0, origin: [0; 3] }];
    let mut examined = 0usize;
    let mut comps: BTreeMap<OrderVector, Vec<(Node, bool)>> = BTreeMap::new();
    let mut amoeba_nodes: Vec<Node> = Vec::new();
    let mut undecided_cells = 0usize;

    while !level.is_empty() {
        examined += level.len();
        if examined > params.budget {
            return Err(RenderError::BudgetExceeded { cells: examined, budget: params.budget });
        }
        let mut missing: Vec<[u32; 3]> =
            level.iter().flat_map(|nd| probes(nd)).filter(|k| !cache.contains_key(&pack(k))).collect();
        missing.sort_unstable();
        missing.dedup();
        let statuses: Vec<Status> = missing.par_iter().map(|k| classifier.classify(&coord(k)).status).collect();
        for (k, s) in missing.iter().zip(statuses) {
            cache.insert(pack(k), s);
        }
        let mut next = Vec::new();
        for node in &level {
            let st: Vec<&Status> = probes(node).iter().map(|k| &cache[&pack(k)]).collect();
            match verdict(&st, node.depth, min_depth, dmax) {
                Verdict::Component(nu) => comps.entry(nu).or_default().push((*node, true)),
                Verdict::Partial(nu) => comps.entry(nu).or_default().push((*node, false)),
                Verdict::Amoeba => amoeba_nodes.push(*node),
                Verdict::Undecided => {
                    undecided_cells += 1;
                    amoeba_nodes.push(*node);
                }
                Verdict::Split => {
                    let half = (unit >> node.depth) / 2;
                    for mask in 0..(1u32 << n) {
                        let mut o = node.origin;
                        for j in 0..n {
                            if mask >> j & 1 == 1 {
                                o[j] += half;
                            }
                        }
                        next.push(Node { depth: node.depth + 1, origin: o });
                    }
                }
            }
        }
        level = next;
    }

    let to_cell = |node: &Node| -> CellBox {
        let s = unit >> node.depth;
        let mut hi_key = node.origin;
        for j in 0..n {
            hi_key[j] += s;
        }
        let touches = (0..n).any(|j| node.origin[j] == 0 || hi_key[j] == unit);
        CellBox { lo: coord(&node.origin), hi: coord(&hi_key), depth: node.depth, touches_boundary: touches }
    };

    let polytope = classifier.polytope();
    let mut warnings = Vec::new();
    let mut components = Vec::new();
    let mut complement_cells = 0;
    for (order, mut nodes) in comps {
        nodes.sort_by_key(|(nd, _)| (nd.origin, nd.depth));
        let cells: Vec<CellBox> = nodes.iter().map(|(nd, _)| to_cell(nd)).collect();
        let full: Vec<&CellBox> = nodes.iter().zip(&cells).filter(|((_, f), _)| *f).map(|(_, c)| c).collect();
        complement_cells += cells.len();
        let bounded = !cells.iter().any(|c| c.touches_boundary);
        let exponent = order.as_exponent();
        let lattice_class = polytope.classify(&exponent);
        let in_support = p.coefficient(&exponent).is_some();
        if full.is_empty() {
            warnings.push(format!("component {order} was only seen in boundary cells at the finest depth"));
        }
        if bounded && !in_support {
            warnings.push(format!("bounded component {order} does not correspond to any monomial of the polynomial"));
        }
        if bounded && lattice_class == PointClass::Vertex {
            warnings.push(format!("vertex component {order} is bounded inside the domain; enlarge the domain"));
        }
        let rep_pool: Vec<&CellBox> = if full.is_empty() { cells.iter().collect() } else { full };
        let representative = LogPoint(representative(&rep_pool));
        let diameter_lb = component_diameter_of(&cells);
        components.push(ComplementComponent {
            order,
            representative,
            bounded,
            diameter_lb,
            cell_count: cells.len(),
            in_support,
            lattice_class,
            cells,
        });
    }

    let (vmin, vmax) = polytope.component_bounds();
    let count = components.len();
    let bounded = components.iter().filter(|c| c.bounded).count();
    if count < vmin || count > vmax {
        warnings.push(format!("detected {count} components, outside the Newton bounds [{vmin}, {vmax}]"));
    }
    if undecided_cells > 0 {
        warnings.push(format!("{undecided_cells} cells could not be decided and are drawn as amoeba"));
    }
    let min_cell_size = (0..n).map(|j| domain.width(j) / (1u64 << dmax) as f64).collect();
    let min_bounded_diameter =
        components.iter().filter(|c| c.bounded).map(|c| c.diameter_lb).reduce(f64::min);
    let mut amoeba_cells: Vec<CellBox> = amoeba_nodes.iter().map(to_cell).collect();
    amoeba_cells.sort_by(|a, b| a.lo.partial_cmp(&b.lo).unwrap().then(a.depth.cmp(&b.depth)));

    Ok(AmoebaReport {
        polynomial: p.to_string(),
        domain: domain.clone(),
        algorithm: "dichotomous".into(),
        params: ReportParams {
            max_depth: dmax,
            min_depth,
            samples: params.samples,
            seed: params.seed,
            budget: params.budget,
        },
        counts: ReportCounts {
            components: count,
            bounded,
            unbounded: count - bounded,
            complement_cells,
            amoeba_cells: amoeba_cells.len() - undecided_cells,
            undecided_cells,
            probes: cache.len(),
        },
        bounds: Bounds { min: vmin, max: vmax },
        flags: Flags { solid: count == vmin && bounded == 0, optimal: count == vmax },
        resolution: Resolution { min_cell_size, min_bounded_diameter },
        warnings,
        components,
        amoeba_cells,
    })
}

fn verdict(st: &[&Status], depth: u32, min_depth: u32, max_depth: u32) -> Verdict {
    let first = st[0].order();
    let homogeneous = first.is_some() && st.iter().all(|s| s.order() == first);
    if homogeneous {
        return if depth >= min_depth { Verdict::Component(first.unwrap().clone()) } else { Verdict::Split };
    }
    let all_amoeba = st.iter().all(|s| s.is_amoeba_like());
    if depth < max_depth && !(all_amoeba && depth >= min_depth) {
        return Verdict::Split;
    }
    match st[0] {
        Status::Complement(nu) => Verdict::Partial(nu.clone()),
        Status::Undecided => Verdict::Undecided,
        Status::Amoeba => Verdict::Amoeba,
    }
}

/// Center of the largest cell, ties broken by distance to the centroid of
/// all cell centers, then by position.
fn representative(cells: &[&CellBox]) -> Vec<f64> {
    let n = cells[0].lo.len();
    let centers: Vec<Vec<f64>> = cells.iter().map(|c| c.center()).collect();
    let mut centroid = vec![0.0; n];
    for c in &centers {
        for j in 0..n {
            centroid[j] += c[j];
        }
    }
    for v in centroid.iter_mut() {
        *v /= centers.len() as f64;
    }
    let min_depth = cells.iter().map(|c| c.depth).min().unwrap();
    let dist = |c: &[f64]| c.iter().zip(&centroid).map(|(a, b)| (a - b).powi(2)).sum::<f64>();
    centers
        .iter()
        .zip(cells)
        .filter(|(_, c)| c.depth == min_depth)
        .map(|(c, _)| c)
        .min_by(|a, b| dist(a).total_cmp(&dist(b)).then(a.partial_cmp(b).unwrap()))
        .unwrap()
        .clone()
}

/// Largest distance between cell centers of a component.
pub fn component_diameter(component: &ComplementComponent) -> f64 {
    component_diameter_of(&component.cells)
}

fn component_diameter_of(cells: &[CellBox]) -> f64 {
    let centers: Vec<Vec<f64>> = cells.iter().map(|c| c.center()).collect();
    if centers.len() < 2 {
        return 0.0;
    }
    let candidates = if centers[0].len() == 2 { hull_2d(&centers) } else { extremes_3d(&centers) };
    let mut best = 0.0f64;
    for a in 0..candidates.len() {
        for b in a + 1..candidates.len() {
            let d: f64 = candidates[a].iter().zip(&candidates[b]).map(|(u, v)| (u - v).powi(2)).sum();
            best = best.max(d);
        }
    }
    best.sqrt()
}

fn hull_2d(pts: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut p: Vec<&Vec<f64>> = pts.iter().collect();
    p.sort_by(|a, b| a.partial_cmp(b).unwrap());
    p.dedup();
    if p.len() < 3 {
        return p.into_iter().cloned().collect();
    }
    let cross = |o: &[f64], a: &[f64], b: &[f64]| (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    let mut hull: Vec<&Vec<f64>> = Vec::new();
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &&Vec<f64>>> = if pass == 0 { Box::new(p.iter()) } else { Box::new(p.iter().rev()) };
        for q in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], q) <= 0.0 {
                hull.pop();
            }
            hull.push(q);
        }
        hull.pop();
    }
    hull.into_iter().cloned().collect()
}

/// Points extreme along a spread of directions; the diameter over them is a
/// lower bound for the diameter of the full set.
fn extremes_3d(pts: &[Vec<f64>]) -> Vec<Vec<f64>> {
    if pts.len() <= 2000 {
        return pts.to_vec();
    }
    let k = 256;
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    let mut idx: Vec<usize> = Vec::new();
    for i in 0..k {
        let z = 1.0 - 2.0 * (i as f64 + 0.5) / k as f64;
        let r = (1.0 - z * z).sqrt();
        let d = [r * (golden * i as f64).cos(), r * (golden * i as f64).sin(), z];
        let score = |p: &Vec<f64>| p[0] * d[0] + p[1] * d[1] + p[2] * d[2];
        let (mut lo, mut hi) = (0, 0);
        for (m, p) in pts.iter().enumerate() {
            if score(p) < score(&pts[lo]) {
                lo = m;
            }
            if score(p) > score(&pts[hi]) {
                hi = m;
            }
        }
        idx.push(lo);
        idx.push(hi);
    }
    idx.sort_unstable();
    idx.dedup();
    idx.into_iter().map(|i| pts[i].clone()).collect()
}
