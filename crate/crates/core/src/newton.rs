//! Newton polytopes with exact integer arithmetic: vertices, lattice points
//! and point classification for supports in dimension one to three.
//!
//! Lower-dimensional hulls (a point, a segment, a planar polygon in space) are
//! represented by affine equalities plus facet inequalities relative to their
//! affine hull. "Interior" always means the relative interior.

use serde::{Deserialize, Serialize};

use crate::poly::{Exponent, LaurentPolynomial};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PointClass {
    Vertex,
    Boundary,
    Interior,
    Outside,
}

/// `normal . p <= offset` (or `==` for equalities).
#[derive(Debug, Clone, PartialEq, Eq)]
struct HalfSpace {
    normal: Vec<i64>,
    offset: i64,
}

impl HalfSpace {
    fn eval(&self, p: &[i64]) -> i64 {
        dot(&self.normal, p) - self.offset
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NewtonPolytope {
    dimension: usize,
    affine_dimension: usize,
    vertices: Vec<Exponent>,
    lattice_points: Vec<Exponent>,
    classes: Vec<PointClass>,
    equalities: Vec<HalfSpace>,
    facets: Vec<HalfSpace>,
}

impl NewtonPolytope {
    /// Hull of an arbitrary nonempty point set.
    pub fn from_points(points: &[Exponent]) -> Self {
        assert!(!points.is_empty(), "Newton polytope of an empty support");
        let n = points[0].arity();
        let pts: Vec<Vec<i64>> = dedup(points.iter().map(|e| e.0.iter().map(|&a| a as i64).collect()).collect());
        let (affine_dimension, equalities, facets, mut vertices) = hull(n, &pts);
        if !(n == 2 && affine_dimension == 2) {
            vertices.sort_by(|a, b| to_exponent(a).cmp(&to_exponent(b)));
        }
        let mut poly = NewtonPolytope {
            dimension: n,
            affine_dimension,
            vertices: vertices.iter().map(|v| to_exponent(v)).collect(),
            lattice_points: Vec::new(),
            classes: Vec::new(),
            equalities,
            facets,
        };
        poly.enumerate_lattice();
        poly
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Dimension of the affine hull of the support.
    pub fn affine_dimension(&self) -> usize {
        self.affine_dimension
    }

    /// Vertices; counterclockwise for a full-dimensional polygon, otherwise in
    /// graded lexicographic order.
    pub fn vertices(&self) -> &[Exponent] {
        &self.vertices
    }

    pub fn lattice_points(&self) -> &[Exponent] {
        &self.lattice_points
    }

    /// Lattice points paired with their classification.
    pub fn classified_points(&self) -> impl Iterator<Item = (&Exponent, PointClass)> {
        self.lattice_points.iter().zip(self.classes.iter().copied())
    }

    pub fn interior_points(&self) -> Vec<Exponent> {
        self.classified_points()
            .filter(|(_, c)| *c == PointClass::Interior)
            .map(|(e, _)| e.clone())
            .collect()
    }

    pub fn contains(&self, alpha: &[i64]) -> bool {
        self.equalities.iter().all(|h| h.eval(alpha) == 0) && self.facets.iter().all(|h| h.eval(alpha) <= 0)
    }

    pub fn classify(&self, alpha: &Exponent) -> PointClass {
        let p: Vec<i64> = alpha.0.iter().map(|&a| a as i64).collect();
        if p.len() != self.dimension || !self.contains(&p) {
            return PointClass::Outside;
        }
        if self.vertices.contains(alpha) {
            PointClass::Vertex
        } else if self.facets.iter().any(|h| h.eval(&p) == 0) {
            PointClass::Boundary
        } else {
            PointClass::Interior
        }
    }

    /// Theorem-style component bounds: (vertex count, lattice point count).
    pub fn component_bounds(&self) -> (usize, usize) {
        (self.vertices.len(), self.lattice_points.len())
    }

    fn enumerate_lattice(&mut self) {
        let n = self.dimension;
        let mut lo = vec![i64::MAX; n];
        let mut hi = vec![i64::MIN; n];
        for v in &self.vertices {
            for j in 0..n {
                lo[j] = lo[j].min(v.0[j] as i64);
                hi[j] = hi[j].max(v.0[j] as i64);
            }
        }
        let mut out = Vec::new();
        let mut cur = lo.clone();
        loop {
            if self.contains(&cur) {
                out.push(to_exponent(&cur));
            }
            let mut j = 0;
            loop {
                if j == n {
                    out.sort();
                    self.classes = out.iter().map(|e| self.classify(e)).collect();
                    self.lattice_points = out;
                    return;
                }
                cur[j] += 1;
                if cur[j] <= hi[j] {
                    break;
                }
                cur[j] = lo[j];
                j += 1;
            }
        }
    }
}

pub fn newton_polytope(p: &LaurentPolynomial) -> NewtonPolytope {
    NewtonPolytope::from_points(&p.support())
}

pub fn lattice_points(polytope: &NewtonPolytope) -> Vec<Exponent> {
    polytope.lattice_points().to_vec()
}

pub fn component_count_bounds(p: &LaurentPolynomial) -> (usize, usize) {
    newton_polytope(p).component_bounds()
}

/// True iff the support of `p` is exactly the vertex set of its Newton polytope.
pub fn is_maximally_sparse(p: &LaurentPolynomial) -> bool {
    let poly = newton_polytope(p);
    poly.vertices().len() == p.len() && poly.vertices().iter().all(|v| p.coefficient(v).is_some())
}

pub fn classify_lattice_point(polytope: &NewtonPolytope, alpha: &Exponent) -> PointClass {
    polytope.classify(alpha)
}

fn to_exponent(v: &[i64]) -> Exponent {
    Exponent(v.iter().map(|&a| a as i32).collect())
}

fn dedup(mut pts: Vec<Vec<i64>>) -> Vec<Vec<i64>> {
    pts.sort();
    pts.dedup();
    pts
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn primitive(v: Vec<i64>) -> Vec<i64> {
    let g = v.iter().fold(0, |g, &x| gcd(g, x));
    if g <= 1 {
        v
    } else {
        v.into_iter().map(|x| x / g).collect()
    }
}

fn cross3(a: &[i64], b: &[i64]) -> Vec<i64> {
    vec![a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn cross2(o: &[i64], a: &[i64], b: &[i64]) -> i64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

fn is_zero(v: &[i64]) -> bool {
    v.iter().all(|&x| x == 0)
}

/// Strictly convex counterclockwise hull of planar points (monotone chain).
fn monotone_chain(pts: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut p = pts.to_vec();
    p.sort();
    p.dedup();
    if p.len() < 3 {
        return p;
    }
    let mut lower: Vec<Vec<i64>> = Vec::new();
    for q in &p {
        while lower.len() >= 2 && cross2(&lower[lower.len() - 2], &lower[lower.len() - 1], q) <= 0 {
            lower.pop();
        }
        lower.push(q.clone());
    }
    let mut upper: Vec<Vec<i64>> = Vec::new();
    for q in p.iter().rev() {
        while upper.len() >= 2 && cross2(&upper[upper.len() - 2], &upper[upper.len() - 1], q) <= 0 {
            upper.pop();
        }
        upper.push(q.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Integer basis of the orthogonal complement of a nonzero vector in R^n.
fn orthogonal_complement(d: &[i64]) -> Vec<Vec<i64>> {
    let n = d.len();
    match n {
        1 => vec![],
        2 => vec![primitive(vec![-d[1], d[0]])],
        _ => {
            let axes = [vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
            let mut out: Vec<Vec<i64>> = Vec::new();
            for a in &axes {
                let c = cross3(d, a);
                if is_zero(&c) {
                    continue;
                }
                if out.iter().all(|o| !is_zero(&cross3(o, &c))) {
                    out.push(primitive(c));
                }
                if out.len() == 2 {
                    break;
                }
            }
            out
        }
    }
}

type Hull = (usize, Vec<HalfSpace>, Vec<HalfSpace>, Vec<Vec<i64>>);

fn hull(n: usize, pts: &[Vec<i64>]) -> Hull {
    let p0 = &pts[0];
    let diffs: Vec<Vec<i64>> = pts[1..].iter().map(|p| sub(p, p0)).collect();
    // dimension 0
    let Some(d1) = diffs.iter().find(|d| !is_zero(d)).cloned() else {
        let eqs = (0..n)
            .map(|j| {
                let mut e = vec![0; n];
                e[j] = 1;
                HalfSpace { normal: e, offset: p0[j] }
            })
            .collect();
        return (0, eqs, vec![], vec![p0.clone()]);
    };
    let second = if n == 1 {
        None
    } else {
        diffs.iter().find_map(|d| {
            let independent = match n {
                2 => d1[0] * d[1] - d1[1] * d[0] != 0,
                _ => !is_zero(&cross3(&d1, d)),
            };
            independent.then(|| d.clone())
        })
    };
    let Some(d2) = second else {
        return segment_hull(pts, &primitive(d1));
    };
    if n == 2 {
        let ring = monotone_chain(pts);
        let facets = ring
            .iter()
            .enumerate()
            .map(|(i, u)| {
                let v = &ring[(i + 1) % ring.len()];
                let normal = primitive(vec![v[1] - u[1], -(v[0] - u[0])]);
                let offset = dot(&normal, u);
                HalfSpace { normal, offset }
            })
            .collect();
        return (2, vec![], facets, ring);
    }
    let plane = primitive(cross3(&d1, &d2));
    let coplanar = diffs.iter().all(|d| dot(&plane, d) == 0);
    if coplanar {
        let (facets, ring) = planar_polygon(pts, &plane);
        let eq = HalfSpace { offset: dot(&plane, p0), normal: plane };
        return (2, vec![eq], facets, ring);
    }
    solid_hull(pts)
}

fn segment_hull(pts: &[Vec<i64>], dir: &[i64]) -> Hull {
    let lo = pts.iter().min_by_key(|p| dot(dir, p)).unwrap().clone();
    let hi = pts.iter().max_by_key(|p| dot(dir, p)).unwrap().clone();
    let eqs = orthogonal_complement(dir)
        .into_iter()
        .map(|normal| HalfSpace { offset: dot(&normal, &lo), normal })
        .collect();
    let facets = vec![
        HalfSpace { normal: dir.to_vec(), offset: dot(dir, &hi) },
        HalfSpace { normal: dir.iter().map(|x| -x).collect(), offset: -dot(dir, &lo) },
    ];
    (1, eqs, facets, vec![lo, hi])
}

/// Polygon lying in the plane `plane . p = const` of R^3: returns in-plane
/// facet inequalities and the vertex ring.
fn planar_polygon(pts: &[Vec<i64>], plane: &[i64]) -> (Vec<HalfSpace>, Vec<Vec<i64>>) {
    // drop the coordinate with a nonzero normal component: injective projection
    let drop = (0..3).max_by_key(|&j| plane[j].abs()).unwrap();
    let keep: Vec<usize> = (0..3).filter(|&j| j != drop).collect();
    let proj: Vec<Vec<i64>> = pts.iter().map(|p| vec![p[keep[0]], p[keep[1]]]).collect();
    let ring2 = monotone_chain(&proj);
    let ring: Vec<Vec<i64>> = ring2
        .iter()
        .map(|q| pts[proj.iter().position(|p| p == q).unwrap()].clone())
        .collect();
    let centroid_hint = &ring[(ring.len() / 2).max(1) % ring.len()];
    let mut facets = Vec::new();
    for i in 0..ring.len() {
        let u = &ring[i];
        let v = &ring[(i + 1) % ring.len()];
        let mut normal = primitive(cross3(&sub(v, u), plane));
        // orient away from the other ring vertices
        let probe = ring
            .iter()
            .find(|w| dot(&normal, &sub(w, u)) != 0)
            .unwrap_or(centroid_hint);
        if dot(&normal, &sub(probe, u)) > 0 {
            normal = normal.into_iter().map(|x| -x).collect();
        }
        facets.push(HalfSpace { offset: dot(&normal, u), normal });
    }
    (facets, ring)
}

/// Full-dimensional hull in R^3 by enumerating supporting planes through
/// triples of support points.
fn solid_hull(pts: &[Vec<i64>]) -> Hull {
    let k = pts.len();
    let mut facets: Vec<HalfSpace> = Vec::new();
    for a in 0..k {
        for b in a + 1..k {
            for c in b + 1..k {
                let normal = cross3(&sub(&pts[b], &pts[a]), &sub(&pts[c], &pts[a]));
                if is_zero(&normal) {
                    continue;
                }
                let normal = primitive(normal);
                let offset = dot(&normal, &pts[a]);
                let (mut above, mut below) = (false, false);
                for p in pts {
                    let s = dot(&normal, p) - offset;
                    above |= s > 0;
                    below |= s < 0;
                    if above && below {
                        break;
                    }
                }
                let h = match (above, below) {
                    (false, _) => HalfSpace { normal, offset },
                    (true, false) => HalfSpace { normal: normal.iter().map(|x| -x).collect(), offset: -offset },
                    (true, true) => continue,
                };
                if !facets.contains(&h) {
                    facets.push(h);
                }
            }
        }
    }
    let mut vertices: Vec<Vec<i64>> = Vec::new();
    for f in &facets {
        let on: Vec<Vec<i64>> = pts.iter().filter(|p| f.eval(p) == 0).cloned().collect();
        let (_, ring) = planar_polygon(&on, &f.normal);
        for v in ring {
            if !vertices.contains(&v) {
                vertices.push(v);
            }
        }
    }
    (3, vec![], facets, vertices)
}
