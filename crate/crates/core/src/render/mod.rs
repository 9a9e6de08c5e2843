//! Amoeba depiction: viewing domains, component decomposition, raster output.

mod dichotomous;
mod pixel;
mod raster;

use serde::Serialize;
use thiserror::Error;

use crate::membership::OrderVector;
use crate::newton::{newton_polytope, PointClass};
use crate::poly::{LaurentPolynomial, LogPoint};
use crate::tropical::{archimedean_tropicalization, tropical_hypersurface, tropical_vertices};

pub use dichotomous::{component_diameter, default_budget, dichotomous_components, dichotomous_with, DichotomousParams, MAX_DEPTH};
pub use pixel::{greedy_render, naive_render, pixel_membership_render, tropical_seeds, GreedyRender, NaiveRender};
pub use raster::{order_color, write_image, ImageFormat, Overlay, RasterImage, BACKGROUND, INK};

#[derive(Debug, Error)]
pub enum RenderError {
    #[error("cell budget of {budget} exceeded after {cells} cells")]
    BudgetExceeded { cells: usize, budget: usize },
    #[error("this operation supports {supported}, got {got} variables")]
    Arity { supported: &'static str, got: usize },
    #[error("depth {0} exceeds the maximum of 14")]
    Depth(u32),
    #[error("invalid domain: {0}")]
    Domain(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Axis-aligned box in log space.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DomainBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl DomainBox {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self, RenderError> {
        if lo.len() != hi.len() || lo.is_empty() {
            return Err(RenderError::Domain("bounds of different lengths".into()));
        }
        if lo.iter().zip(&hi).any(|(a, b)| !(a < b) || !a.is_finite() || !b.is_finite()) {
            return Err(RenderError::Domain("every axis needs lo < hi".into()));
        }
        Ok(DomainBox { lo, hi })
    }

    /// `[-r, r]^n`.
    pub fn cube(n: usize, r: f64) -> Self {
        DomainBox { lo: vec![-r; n], hi: vec![r; n] }
    }

    pub fn dimension(&self) -> usize {
        self.lo.len()
    }

    pub fn width(&self, j: usize) -> f64 {
        self.hi[j] - self.lo[j]
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter().enumerate().all(|(j, v)| *v >= self.lo[j] && *v <= self.hi[j])
    }
}

/// Padding used when no domain is given. One unit is too tight for
/// vertex components whose tentacles leave the box only near its corners.
pub const DEFAULT_PADDING: f64 = 2.0;

/// Bounding box of the Archimedean tropical vertices, padded on every side.
/// Falls back to `[-5, 5]^n` when the tropicalization has no vertices.
pub fn auto_domain(p: &LaurentPolynomial, padding: f64) -> DomainBox {
    let n = p.arity();
    let t = archimedean_tropicalization(p);
    let mut pts = tropical_vertices(&t);
    if pts.is_empty() && n == 2 && t.terms().len() >= 2 {
        pts = tropical_hypersurface(&t).rays.iter().map(|r| r.origin.to_vec()).collect();
    }
    if pts.is_empty() {
        return DomainBox::cube(n, 5.0);
    }
    let pad = if padding > 0.0 { padding } else { 1.0 };
    let lo = (0..n).map(|j| pts.iter().map(|p| p[j]).fold(f64::INFINITY, f64::min) - pad).collect();
    let hi = (0..n).map(|j| pts.iter().map(|p| p[j]).fold(f64::NEG_INFINITY, f64::max) + pad).collect();
    DomainBox { lo, hi }
}

/// [`auto_domain`] enlarged so that every vertex component of the complement
/// is certified inside it: for each Newton vertex a point where its term is
/// lopsided by a margin of 2 is added before padding. Vertices with narrow
/// normal cones otherwise open up only far outside the tropical vertices.
pub fn covering_domain(p: &LaurentPolynomial, padding: f64) -> DomainBox {
    let base = auto_domain(p, padding);
    let n = p.arity();
    if p.len() < 2 {
        return base;
    }
    let pad = if padding > 0.0 { padding } else { 1.0 };
    let center: Vec<f64> = (0..n).map(|j| 0.5 * (base.lo[j] + base.hi[j])).collect();
    let terms: Vec<(Vec<f64>, f64)> =
        p.terms().map(|(e, c)| (e.0.iter().map(|a| *a as f64).collect(), c.norm().ln())).collect();
    let need = ((p.len() - 1) as f64).ln() + 2.0;
    let mut out = base;
    for alpha in newton_polytope(p).vertices() {
        let a: Vec<f64> = alpha.0.iter().map(|v| *v as f64).collect();
        let ca = p.coefficient(alpha).map_or(0.0, |c| c.norm().ln());
        let Some(d) = cone_direction(&a, &terms) else { continue };
        // smallest t with <a - b, x> + c_a - c_b >= need for every other term
        let mut t: f64 = 0.0;
        for (b, cb) in &terms {
            if *b == a {
                continue;
            }
            let diff: Vec<f64> = a.iter().zip(b).map(|(u, v)| u - v).collect();
            let slope: f64 = diff.iter().zip(&d).map(|(u, v)| u * v).sum();
            let at0: f64 = diff.iter().zip(&center).map(|(u, v)| u * v).sum::<f64>() + ca - cb;
            t = t.max((need - at0) / slope);
        }
        for j in 0..n {
            let w = center[j] + t * d[j];
            out.lo[j] = out.lo[j].min(w - pad);
            out.hi[j] = out.hi[j].max(w + pad);
        }
    }
    out
}

/// Unit direction `d` maximising `min <a - b, d>` over the other exponents,
/// searched over a fine sphere of directions.
fn cone_direction(a: &[f64], terms: &[(Vec<f64>, f64)]) -> Option<Vec<f64>> {
    let n = a.len();
    let score = |d: &[f64]| {
        terms
            .iter()
            .filter(|(b, _)| b.as_slice() != a)
            .map(|(b, _)| a.iter().zip(b).zip(d).map(|((u, v), w)| (u - v) * w).sum::<f64>())
            .fold(f64::INFINITY, f64::min)
    };
    let dirs: Vec<Vec<f64>> = match n {
        1 => vec![vec![1.0], vec![-1.0]],
        2 => (0..4096).map(|k| std::f64::consts::TAU * k as f64 / 4096.0).map(|t| vec![t.cos(), t.sin()]).collect(),
        _ => {
            let m = 20000;
            let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
            (0..m)
                .map(|k| {
                    let z = 1.0 - 2.0 * (k as f64 + 0.5) / m as f64;
                    let r = (1.0 - z * z).sqrt();
                    let phi = golden * k as f64;
                    vec![r * phi.cos(), r * phi.sin(), z]
                })
                .collect()
        }
    };
    let (best, s) = dirs.into_iter().map(|d| {
        let s = score(&d);
        (d, s)
    }).fold((Vec::new(), f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc });
    (s > 0.0).then_some(best)
}

/// One accepted box of the subdivision.
#[derive(Debug, Clone, PartialEq)]
pub struct CellBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub depth: u32,
    pub touches_boundary: bool,
}

impl CellBox {
    pub fn center(&self) -> Vec<f64> {
        self.lo.iter().zip(&self.hi).map(|(a, b)| 0.5 * (a + b)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComplementComponent {
    pub order: OrderVector,
    pub representative: LogPoint,
    pub bounded: bool,
    pub diameter_lb: f64,
    pub cell_count: usize,
    /// The order is an exponent of the polynomial.
    pub in_support: bool,
    pub lattice_class: PointClass,
    #[serde(skip)]
    pub cells: Vec<CellBox>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportParams {
    pub max_depth: u32,
    pub min_depth: u32,
    pub samples: usize,
    pub seed: u64,
    pub budget: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportCounts {
    pub components: usize,
    pub bounded: usize,
    pub unbounded: usize,
    pub complement_cells: usize,
    pub amoeba_cells: usize,
    pub undecided_cells: usize,
    pub probes: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Bounds {
    pub min: usize,
    pub max: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Flags {
    pub solid: bool,
    pub optimal: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Resolution {
    /// Edge lengths of a cell at the maximal depth.
    pub min_cell_size: Vec<f64>,
    pub min_bounded_diameter: Option<f64>,
}

/// Outcome of a component decomposition over a domain.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AmoebaReport {
    pub polynomial: String,
    pub domain: DomainBox,
    pub algorithm: String,
    pub params: ReportParams,
    pub components: Vec<ComplementComponent>,
    pub counts: ReportCounts,
    pub bounds: Bounds,
    pub flags: Flags,
    pub resolution: Resolution,
    pub warnings: Vec<String>,
    #[serde(skip)]
    pub amoeba_cells: Vec<CellBox>,
}

impl AmoebaReport {
    pub fn component(&self, order: &[i32]) -> Option<&ComplementComponent> {
        self.components.iter().find(|c| c.order.0 == order)
    }

    pub fn bounded_orders(&self) -> Vec<OrderVector> {
        self.components.iter().filter(|c| c.bounded).map(|c| c.order.clone()).collect()
    }

    /// Deterministic pretty JSON.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Paint components by order and amoeba cells in ink (two variables only).
    pub fn to_image(&self, width: usize, height: usize) -> Result<RasterImage, RenderError> {
        if self.domain.dimension() != 2 {
            return Err(RenderError::Arity { supported: "2", got: self.domain.dimension() });
        }
        let mut img = RasterImage::new(width, height, self.domain.clone());
        let mut paint = |cell: &CellBox, color: [u8; 3]| {
            let (i0, i1) = img.column_range(cell.lo[0], cell.hi[0]);
            let (j0, j1) = img.row_range(cell.lo[1], cell.hi[1]);
            for j in j0..j1 {
                for i in i0..i1 {
                    img.set(i, j, color);
                }
            }
        };
        for cell in &self.amoeba_cells {
            paint(cell, INK);
        }
        for c in &self.components {
            let color = order_color(&c.order);
            for cell in &c.cells {
                paint(cell, color);
            }
        }
        Ok(img)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;

    #[test]
    fn auto_domain_examples() {
        let d = auto_domain(&parse_polynomial("z1 + z2 + 1").unwrap(), 2.0);
        for j in 0..2 {
            assert!((d.lo[j] + 2.0).abs() < 1e-12 && (d.hi[j] - 2.0).abs() < 1e-12);
        }
        let e10 = 10f64.exp();
        let d = auto_domain(&parse_polynomial(&format!("z1 + z2 + {e10}")).unwrap(), 2.0);
        assert!(d.contains(&[10.0, 10.0]));
        assert_eq!(auto_domain(&parse_polynomial("z1*z2").unwrap(), 2.0), DomainBox::cube(2, 5.0));
        let d = auto_domain(&parse_polynomial("z1 + z2").unwrap(), 2.0);
        assert!(d.contains(&[0.0, 0.0]));
    }

    #[test]
    fn covering_domain_reaches_every_vertex_component() {
        use crate::membership::lopsided_at;
        // (2,1) has a normal cone of about 11 degrees
        let p = parse_polynomial("z2^4 + 0.25*z1^2*z2 + 7*z1^3 + 0.1*z1^5 + 3*z1^5*z2 + z1^3*z2^3 + 0.3*z2^5").unwrap();
        let d = covering_domain(&p, 2.0);
        let base = auto_domain(&p, 2.0);
        assert!((0..2).all(|j| d.lo[j] <= base.lo[j] && d.hi[j] >= base.hi[j]));
        let n = 400;
        for v in newton_polytope(&p).vertices() {
            let found = (0..n * n).any(|k| {
                let x = [
                    d.lo[0] + d.width(0) * ((k % n) as f64 + 0.5) / n as f64,
                    d.lo[1] + d.width(1) * ((k / n) as f64 + 0.5) / n as f64,
                ];
                lopsided_at(&p, &LogPoint(x.to_vec())).as_ref() == Some(v)
            });
            assert!(found, "{v:?}");
        }
    }

    #[test]
    fn domain_validation() {
        assert!(DomainBox::new(vec![0.0], vec![0.0]).is_err());
        assert!(DomainBox::new(vec![0.0, 1.0], vec![1.0]).is_err());
        assert!(DomainBox::new(vec![-1.0, -1.0], vec![1.0, 2.0]).is_ok());
    }
}
