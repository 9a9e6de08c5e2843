//! Fixture polynomials, random families and the solid-amoeba scan.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::newton::{is_maximally_sparse, newton_polytope};
use crate::poly::{parse_polynomial, Exponent, LaurentPolynomial};
use crate::render::{auto_domain, dichotomous_with, DichotomousParams};
use crate::Complex64;

pub const FIXTURES: [&str; 4] = ["p1", "p1_sparse", "p2", "p3"];

const P1: &str = "5*z1 + 15*z1^2 + 8*z1^3*z2 + 10*z2^2 + 10*z1^3*z2^2 + 8*z2^3 + 15*z1*z2^4 + 5*z1^2*z2^4 \
                  + 50*z1*z2^3 + 50*z1^2*z2";
const P1_SPARSE: &str =
    "5*z1 + 15*z1^2 + 8*z1^3*z2 + 10*z2^2 + 10*z1^3*z2^2 + 8*z2^3 + 15*z1*z2^4 + 5*z1^2*z2^4";
const P2: &str = "z1^2 + 50*z2^3 + 100i*z1*z2^3 + 100*z1^3*z2^3 - 50*z1^4*z2^3 + z1^2*z2^6";
const P3: &str = "5*z1 + 15*z1^2 + 240*z1*z2 + 400*z1^2*z2 + 8*z1^3*z2 + 10*z2^2 + 900*z1*z2^2 \
                  + 900*z1^2*z2^2 + 10*z1^3*z2^2 + 8*z2^3 + 400*z1*z2^3 + 240*z1^2*z2^3 + 15*z1*z2^4 \
                  + 5*z1^2*z2^4";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CorpusError {
    #[error("unknown fixture {0:?}; expected one of p1, p1_sparse, p2, p3")]
    UnknownFixture(String),
    #[error("invalid family: {0}")]
    InvalidSpec(String),
    #[error("polynomial {0} is not maximally sparse")]
    NotMaximallySparse(String),
}

pub fn fixture(name: &str) -> Result<LaurentPolynomial, CorpusError> {
    let text = match name {
        "p1" => P1,
        "p1_sparse" => P1_SPARSE,
        "p2" => P2,
        "p3" => P3,
        other => return Err(CorpusError::UnknownFixture(other.to_string())),
    };
    Ok(parse_polynomial(text).expect("fixture text parses"))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SupportRule {
    /// Lattice points of the simplex of the given degree.
    FullSimplex,
    /// Hull vertices of a random subset of the simplex.
    VerticesOnly,
    Explicit(Vec<Exponent>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    /// Real coefficients with random sign.
    Real,
    Uniform,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilySpec {
    pub arity: usize,
    pub degree: u32,
    pub support: SupportRule,
    /// Magnitudes are log-uniform in this range.
    pub magnitude: (f64, f64),
    pub phase: Phase,
    pub count: usize,
    pub seed: u64,
    /// Probability that a simplex lattice point is drawn before the support
    /// rule is applied.
    pub fill: f64,
}

impl FamilySpec {
    pub fn maximally_sparse(arity: usize, degree: u32, count: usize, seed: u64) -> Self {
        FamilySpec {
            arity,
            degree,
            support: SupportRule::VerticesOnly,
            magnitude: (0.1, 10.0),
            phase: Phase::Uniform,
            count,
            seed,
            fill: 0.3,
        }
    }

    pub fn validate(&self) -> Result<(), CorpusError> {
        let bad = |m: &str| Err(CorpusError::InvalidSpec(m.to_string()));
        if self.degree < 1 {
            return bad("degree must be at least 1");
        }
        if self.count < 1 {
            return bad("count must be at least 1");
        }
        if !(self.magnitude.0 > 0.0 && self.magnitude.0 <= self.magnitude.1) {
            return bad("magnitude range must be positive and ordered");
        }
        if !(1..=3).contains(&self.arity) {
            return bad("arity must be 1, 2 or 3");
        }
        if !(self.fill > 0.0 && self.fill <= 1.0) {
            return bad("fill must lie in (0, 1]");
        }
        if let SupportRule::Explicit(s) = &self.support {
            if s.is_empty() || s.iter().any(|e| e.arity() != self.arity) {
                return bad("explicit support must be nonempty with matching arity");
            }
        }
        Ok(())
    }
}

fn simplex_points(arity: usize, degree: u32) -> Vec<Exponent> {
    let d = degree as i32;
    let mut out = Vec::new();
    match arity {
        1 => (0..=d).for_each(|a| out.push(Exponent(vec![a]))),
        2 => (0..=d).for_each(|a| (0..=d - a).for_each(|b| out.push(Exponent(vec![a, b])))),
        _ => (0..=d).for_each(|a| {
            (0..=d - a).for_each(|b| (0..=d - a - b).for_each(|c| out.push(Exponent(vec![a, b, c]))))
        }),
    }
    out
}

/// Member `index` of the family. Deterministic in `(seed, index)`.
pub fn random_polynomial(spec: &FamilySpec, index: u64) -> Result<LaurentPolynomial, CorpusError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(index);
    let simplex = simplex_points(spec.arity, spec.degree);
    let support: Vec<Exponent> = match &spec.support {
        SupportRule::Explicit(s) => s.clone(),
        rule => loop {
            let pick: Vec<Exponent> = simplex.iter().filter(|_| rng.gen_bool(spec.fill)).cloned().collect();
            if pick.len() < 2 {
                continue;
            }
            if *rule == SupportRule::FullSimplex {
                break pick;
            }
            let hull = crate::newton::NewtonPolytope::from_points(&pick);
            if hull.affine_dimension() == spec.arity {
                break hull.vertices().to_vec();
            }
        },
    };
    let (lo, hi) = (spec.magnitude.0.ln(), spec.magnitude.1.ln());
    let terms: Vec<(Exponent, Complex64)> = support
        .into_iter()
        .map(|e| {
            let m = if hi > lo { rng.gen_range(lo..hi).exp() } else { lo.exp() };
            let c = match spec.phase {
                Phase::Real => Complex64::new(if rng.gen_bool(0.5) { m } else { -m }, 0.0),
                Phase::Uniform => Complex64::from_polar(m, rng.gen_range(0.0..TAU)),
            };
            (e, c)
        })
        .collect();
    Ok(LaurentPolynomial::new(spec.arity, terms).expect("support is nonempty"))
}

/// Keep exactly the monomials at vertices of the Newton polytope.
pub fn sparsify(p: &LaurentPolynomial) -> LaurentPolynomial {
    let poly = newton_polytope(p);
    let verts = poly.vertices();
    p.filter_terms(|e| verts.contains(e)).expect("vertices are support points")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanEntry {
    pub index: usize,
    pub polynomial: String,
    pub vertices: usize,
    pub detected_components: usize,
    pub bounded_orders: Vec<Vec<i32>>,
    pub min_diameter_lb: Option<f64>,
    /// Bounded components survived the re-check at higher depth and samples.
    pub confirmed: bool,
    pub error: Option<String>,
}

/// Run the component decomposition on every polynomial and flag bounded
/// components. Every input must be maximally sparse.
pub fn scan_polynomials(polys: &[LaurentPolynomial], params: &DichotomousParams) -> Result<Vec<ScanEntry>, CorpusError> {
    if let Some(bad) = polys.iter().find(|p| !is_maximally_sparse(p)) {
        return Err(CorpusError::NotMaximallySparse(bad.to_string()));
    }
    Ok(polys.par_iter().enumerate().map(|(i, p)| scan_one(i, p, params)).collect())
}

pub fn passare_scan(spec: &FamilySpec, params: &DichotomousParams) -> Result<Vec<ScanEntry>, CorpusError> {
    if spec.support != SupportRule::VerticesOnly {
        return Err(CorpusError::InvalidSpec("the scan needs the vertices-only support rule".into()));
    }
    let polys = (0..spec.count as u64).map(|i| random_polynomial(spec, i)).collect::<Result<Vec<_>, _>>()?;
    scan_polynomials(&polys, params)
}

fn scan_one(index: usize, p: &LaurentPolynomial, params: &DichotomousParams) -> ScanEntry {
    let vertices = p.len();
    let mut entry = ScanEntry {
        index,
        polynomial: p.to_string(),
        vertices,
        detected_components: 0,
        bounded_orders: Vec::new(),
        min_diameter_lb: None,
        confirmed: false,
        error: None,
    };
    let domain = auto_domain(p, 2.0);
    let report = match dichotomous_with(p, &domain, params) {
        Ok(r) => r,
        Err(e) => {
            entry.error = Some(e.to_string());
            return entry;
        }
    };
    entry.detected_components = report.components.len();
    entry.bounded_orders = report.bounded_orders().into_iter().map(|o| o.0).collect();
    entry.min_diameter_lb = report.resolution.min_bounded_diameter;
    if !entry.bounded_orders.is_empty() {
        let deeper = DichotomousParams {
            max_depth: (params.max_depth + 2).min(crate::render::MAX_DEPTH),
            samples: params.samples * 2,
            ..params.clone()
        };
        match dichotomous_with(p, &domain, &deeper) {
            Ok(r) => entry.confirmed = !r.bounded_orders().is_empty(),
            Err(e) => entry.error = Some(format!("re-check failed: {e}")),
        }
    }
    entry
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_term_counts() {
        let counts: Vec<usize> = FIXTURES.iter().map(|n| fixture(n).unwrap().len()).collect();
        assert_eq!(counts, vec![10, 8, 6, 14]);
        assert!(fixture("p4").is_err());
    }

    #[test]
    fn fixture_coefficients() {
        let c = |p: &LaurentPolynomial, e: &[i32]| p.coefficient(&Exponent(e.to_vec())).unwrap();
        let p1 = fixture("p1").unwrap();
        assert_eq!(c(&p1, &[1, 3]), Complex64::new(50.0, 0.0));
        assert_eq!(c(&p1, &[2, 1]), Complex64::new(50.0, 0.0));
        assert!(p1.coefficient(&Exponent(vec![0, 0])).is_none());
        let p2 = fixture("p2").unwrap();
        assert_eq!(c(&p2, &[4, 3]), Complex64::new(-50.0, 0.0));
        assert_eq!(c(&p2, &[1, 3]), Complex64::new(0.0, 100.0));
        let p3 = fixture("p3").unwrap();
        assert_eq!(c(&p3, &[1, 2]), Complex64::new(900.0, 0.0));
        assert_eq!(c(&p3, &[2, 2]), Complex64::new(900.0, 0.0));
    }

    #[test]
    fn sparsify_examples() {
        assert_eq!(sparsify(&fixture("p1").unwrap()), fixture("p1_sparse").unwrap());
        let line = parse_polynomial("z1 + z2 + 1").unwrap();
        assert_eq!(sparsify(&line), line);
        let s = sparsify(&fixture("p3").unwrap());
        assert_eq!(s.len(), 8);
        assert_eq!(sparsify(&s), s);
        assert_eq!(newton_polytope(&s).vertices(), newton_polytope(&fixture("p3").unwrap()).vertices());
    }

    #[test]
    fn random_family_rules() {
        let mut spec = FamilySpec { fill: 1.0, ..FamilySpec::maximally_sparse(2, 3, 4, 9) };
        let p = random_polynomial(&spec, 0).unwrap();
        let mut support = p.support();
        support.sort();
        assert_eq!(support, vec![Exponent(vec![0, 0]), Exponent(vec![0, 3]), Exponent(vec![3, 0])]);
        spec.support = SupportRule::FullSimplex;
        spec.degree = 2;
        assert!(random_polynomial(&spec, 1).unwrap().len() <= 6);
        let sparse = FamilySpec::maximally_sparse(2, 6, 10, 42);
        for i in 0..10 {
            let a = random_polynomial(&sparse, i).unwrap();
            assert_eq!(a, random_polynomial(&sparse, i).unwrap());
            assert!(is_maximally_sparse(&a));
            for (_, c) in a.terms() {
                assert!(c.norm() >= 0.1 - 1e-12 && c.norm() <= 10.0 + 1e-12);
            }
        }
        assert_ne!(random_polynomial(&sparse, 0).unwrap(), random_polynomial(&sparse, 1).unwrap());
    }

    #[test]
    fn invalid_specs() {
        let good = FamilySpec::maximally_sparse(2, 3, 4, 0);
        assert!(FamilySpec { degree: 0, ..good.clone() }.validate().is_err());
        assert!(FamilySpec { count: 0, ..good.clone() }.validate().is_err());
        assert!(FamilySpec { magnitude: (0.0, 1.0), ..good.clone() }.validate().is_err());
        assert!(good.validate().is_ok());
    }

    #[test]
    fn scan_rejects_non_sparse_input() {
        let p1 = fixture("p1").unwrap();
        assert!(matches!(
            scan_polynomials(&[p1], &DichotomousParams::new(4, 4)),
            Err(CorpusError::NotMaximallySparse(_))
        ));
    }
}
