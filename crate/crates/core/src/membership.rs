//! Point membership: lopsidedness certificates, component orders by root
//! counting on fiber slices, and the Harnack sign test.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::newton::{newton_polytope, NewtonPolytope};
use crate::poly::{Exponent, LaurentPolynomial, LogPoint};
use crate::roots::{circle_profile, CircleProfile, DEFAULT_THICKNESS};

/// Order of a complement component.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OrderVector(pub Vec<i32>);

impl OrderVector {
    pub fn as_exponent(&self) -> Exponent {
        Exponent(self.0.clone())
    }
}

impl From<Exponent> for OrderVector {
    fn from(e: Exponent) -> Self {
        OrderVector(e.0)
    }
}

impl std::fmt::Display for OrderVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Status {
    Complement(OrderVector),
    Amoeba,
    Undecided,
}

impl Status {
    pub fn order(&self) -> Option<&OrderVector> {
        match self {
            Status::Complement(v) => Some(v),
            _ => None,
        }
    }

    /// Amoeba and Undecided both render as amoeba.
    pub fn is_amoeba_like(&self) -> bool {
        !matches!(self, Status::Complement(_))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointClassification {
    pub status: Status,
    pub samples_used: usize,
    /// Fraction of fiber samples that agreed with the majority count.
    pub agreement: f64,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OrderError {
    #[error("fiber samples disagree or a slice root lies on the circle")]
    Divergent,
    #[error("slice vanished identically after resampling")]
    DegenerateSlice,
    #[error("order {0} lies outside the exponent range of the support")]
    OutOfRange(OrderVector),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MembershipError {
    #[error("the Harnack test needs real coefficients")]
    NonReal,
    #[error("the Harnack test is defined for two variables, got {0}")]
    Arity(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MembershipConfig {
    /// Fiber samples per coordinate.
    pub samples: usize,
    pub seed: u64,
    /// Half-width of the circle band, relative to `1 + R`.
    pub thickness: f64,
    /// Skip root finding when a single term dominates.
    pub lopsided_shortcut: bool,
    /// Search the fiber for a closer root when the sampled gap is small.
    pub refine: bool,
}

impl Default for MembershipConfig {
    fn default() -> Self {
        MembershipConfig { samples: 8, seed: 0, thickness: DEFAULT_THICKNESS, lopsided_shortcut: true, refine: true }
    }
}

impl MembershipConfig {
    pub fn with_samples(samples: usize) -> Self {
        MembershipConfig { samples: samples.max(1), ..Default::default() }
    }
}

const RESAMPLES: usize = 3;
const REFINE_GAP: f64 = 0.75;
const REFINE_EVALS: usize = 80;
const BISECT_STEPS: usize = 60;

/// Dominant exponent `a*` with `|c_a*| e^<a*,x> > sum of the other terms`, if any.
pub fn lopsided_at(p: &LaurentPolynomial, x: &LogPoint) -> Option<Exponent> {
    lopsided_log(p, x.coords())
}

fn lopsided_log(p: &LaurentPolynomial, x: &[f64]) -> Option<Exponent> {
    lopsided_margin(p, x, 0.0)
}

/// Lopsided with `sum of the others < (1 - margin) * dominant term`.
fn lopsided_margin(p: &LaurentPolynomial, x: &[f64], margin: f64) -> Option<Exponent> {
    let mut best: Option<(&Exponent, f64)> = None;
    let logs: Vec<(&Exponent, f64)> = p.terms().map(|(e, c)| (e, c.norm().ln() + e.dot(x))).collect();
    for &(e, l) in &logs {
        if best.map_or(true, |(_, b)| l > b) {
            best = Some((e, l));
        }
    }
    let (star, top) = best?;
    let rest: f64 = logs.iter().filter(|(e, _)| *e != star).map(|(_, l)| (l - top).exp()).sum();
    (rest < 1.0 - margin).then(|| star.clone())
}

/// Order of the complement component containing `x`, or an error when the
/// fiber samples do not certify one.
pub fn point_order(p: &LaurentPolynomial, x: &LogPoint, samples: usize) -> Result<OrderVector, OrderError> {
    let cfg = MembershipConfig { lopsided_shortcut: false, refine: false, ..MembershipConfig::with_samples(samples) };
    Classifier::with_config(p, cfg).order(x.coords())
}

pub fn classify_point(p: &LaurentPolynomial, x: &LogPoint, samples: usize) -> PointClassification {
    Classifier::with_config(p, MembershipConfig::with_samples(samples)).classify(x.coords())
}

/// `prod_{a,b = +-1} p(a e^x1, b e^x2)`. Nonpositive values mark the amoeba of
/// a Harnack curve.
pub fn harnack_region_test(p: &LaurentPolynomial, x: &LogPoint) -> Result<f64, MembershipError> {
    if p.arity() != 2 {
        return Err(MembershipError::Arity(p.arity()));
    }
    if !p.is_real() {
        return Err(MembershipError::NonReal);
    }
    let (u, v) = (x.coords()[0].exp(), x.coords()[1].exp());
    let mut prod = 1.0;
    for a in [1.0, -1.0] {
        for b in [1.0, -1.0] {
            let val: f64 = p
                .terms()
                .map(|(e, c)| c.re * (a * u).powi(e.0[0]) * (b * v).powi(e.0[1]))
                .sum();
            prod *= val;
        }
    }
    Ok(prod)
}

/// Reusable classifier for one polynomial.
#[derive(Debug, Clone)]
pub struct Classifier<'a> {
    p: &'a LaurentPolynomial,
    polytope: NewtonPolytope,
    cfg: MembershipConfig,
}

struct Sample {
    theta: Vec<f64>,
    profile: CircleProfile,
    count: i64,
}

enum Fiber {
    Count(i64),
    Amoeba(usize, f64),
    Undecided(usize, f64),
}

impl<'a> Classifier<'a> {
    pub fn new(p: &'a LaurentPolynomial) -> Self {
        Self::with_config(p, MembershipConfig::default())
    }

    pub fn with_config(p: &'a LaurentPolynomial, cfg: MembershipConfig) -> Self {
        Classifier { p, polytope: newton_polytope(p), cfg }
    }

    pub fn polynomial(&self) -> &LaurentPolynomial {
        self.p
    }

    pub fn polytope(&self) -> &NewtonPolytope {
        &self.polytope
    }

    pub fn config(&self) -> &MembershipConfig {
        &self.cfg
    }

    /// Strict order computation: every sample must agree and none may touch
    /// the circle.
    pub fn order(&self, x: &[f64]) -> Result<OrderVector, OrderError> {
        let n = self.p.arity();
        let mut nu = Vec::with_capacity(n);
        for j in 0..n {
            let mut common = None;
            for s in 0..self.cfg.samples.max(1) {
                let sample = self.sample(x, j, s).ok_or(OrderError::DegenerateSlice)?;
                if sample.profile.near {
                    return Err(OrderError::Divergent);
                }
                match common {
                    None => common = Some(sample.count),
                    Some(c) if c != sample.count => return Err(OrderError::Divergent),
                    _ => {}
                }
            }
            nu.push(common.unwrap() as i32);
        }
        let nu = OrderVector(nu);
        for j in 0..n {
            let (lo, hi) = self.p.exponent_range(j);
            if nu.0[j] < lo || nu.0[j] > hi {
                return Err(OrderError::OutOfRange(nu));
            }
        }
        Ok(nu)
    }

    pub fn classify_log(&self, x: &LogPoint) -> PointClassification {
        self.classify(x.coords())
    }

    pub fn classify(&self, x: &[f64]) -> PointClassification {
        if self.cfg.lopsided_shortcut {
            // points lopsided only within the thickness fall through to sampling
            if let Some(a) = lopsided_margin(self.p, x, self.cfg.thickness) {
                return PointClassification { status: Status::Complement(a.into()), samples_used: 0, agreement: 1.0 };
            }
        }
        let n = self.p.arity();
        let mut nu = Vec::with_capacity(n);
        let mut used = 0;
        for j in 0..n {
            match self.fiber(x, j) {
                Fiber::Count(c) => {
                    used += self.cfg.samples;
                    nu.push(c as i32);
                }
                Fiber::Amoeba(k, agreement) => {
                    return PointClassification { status: Status::Amoeba, samples_used: used + k, agreement };
                }
                Fiber::Undecided(k, agreement) => {
                    return PointClassification { status: Status::Undecided, samples_used: used + k, agreement };
                }
            }
        }
        let nu = OrderVector(nu);
        let status = if self.polytope.contains(&nu.0.iter().map(|&v| v as i64).collect::<Vec<_>>()) {
            Status::Complement(nu)
        } else {
            Status::Undecided
        };
        PointClassification { status, samples_used: used, agreement: 1.0 }
    }

    fn fiber(&self, x: &[f64], j: usize) -> Fiber {
        let k = self.cfg.samples.max(1);
        let mut samples = Vec::with_capacity(k);
        for s in 0..k {
            let Some(sample) = self.sample(x, j, s) else {
                return Fiber::Undecided(s + 1, 0.0);
            };
            if sample.profile.near {
                return Fiber::Amoeba(s + 1, 0.0);
            }
            samples.push(sample);
        }
        let first = samples[0].count;
        if let Some(other) = samples.iter().position(|s| s.count != first) {
            let agreement = majority_fraction(&samples);
            return if self.bisect(x, j, &samples[0], &samples[other]) {
                Fiber::Amoeba(k, agreement)
            } else {
                Fiber::Undecided(k, agreement)
            };
        }
        if self.cfg.refine && self.p.arity() > 1 {
            let best = samples
                .iter()
                .min_by(|a, b| a.profile.min_log_gap.total_cmp(&b.profile.min_log_gap))
                .unwrap();
            if best.profile.min_log_gap < REFINE_GAP {
                let step = TAU / (k as f64).powf(1.0 / (self.p.arity() - 1) as f64) / 2.0;
                if self.refine(x, j, best, step) {
                    return Fiber::Amoeba(k, 1.0);
                }
            }
        }
        Fiber::Count(first)
    }

    /// Compass search on the fiber angles for a root on the circle. Returns
    /// true on a near-circle hit or on a count change (which forces a
    /// crossing in between).
    fn refine(&self, x: &[f64], j: usize, start: &Sample, step: f64) -> bool {
        let free: Vec<usize> = (0..self.p.arity()).filter(|&i| i != j).collect();
        let mut theta = start.theta.clone();
        let mut best = start.profile.min_log_gap;
        let mut h = step;
        let mut evals = 0;
        while evals < REFINE_EVALS && h > 1e-10 {
            let mut moved = false;
            'dirs: for &i in &free {
                for sign in [1.0, -1.0] {
                    let mut t = theta.clone();
                    t[i] += sign * h;
                    evals += 1;
                    let Some(s) = self.sample_at(x, j, &t) else { continue };
                    if s.profile.near {
                        return true;
                    }
                    if s.count != start.count {
                        return self.bisect(x, j, start, &s);
                    }
                    if s.profile.min_log_gap < best {
                        best = s.profile.min_log_gap;
                        theta = t;
                        moved = true;
                        break 'dirs;
                    }
                }
            }
            if !moved {
                h *= 0.5;
            }
        }
        false
    }

    /// Bisect the straight segment between two fiber samples with different
    /// counts until a root sits on the circle.
    fn bisect(&self, x: &[f64], j: usize, a: &Sample, b: &Sample) -> bool {
        let (mut ta, mut tb) = (a.theta.clone(), b.theta.clone());
        let ca = a.count;
        for _ in 0..BISECT_STEPS {
            let mid: Vec<f64> = ta.iter().zip(&tb).map(|(u, v)| 0.5 * (u + v)).collect();
            let Some(s) = self.sample_at(x, j, &mid) else { return false };
            if s.profile.near {
                return true;
            }
            if s.count == ca {
                ta = mid;
            } else {
                tb = mid;
            }
        }
        let mid: Vec<f64> = ta.iter().zip(&tb).map(|(u, v)| 0.5 * (u + v)).collect();
        self.sample_at(x, j, &mid)
            .is_some_and(|s| s.profile.min_log_gap <= 10.0 * self.cfg.thickness)
    }

    fn sample(&self, x: &[f64], j: usize, s: usize) -> Option<Sample> {
        for attempt in 0..=RESAMPLES {
            let theta = fiber_angles(x, self.cfg.seed, j, s, attempt, self.p.arity());
            if let Some(sample) = self.sample_at(x, j, &theta) {
                return Some(sample);
            }
        }
        None
    }

    fn sample_at(&self, x: &[f64], j: usize, theta: &[f64]) -> Option<Sample> {
        let slice = self.p.restrict_log_polar(j, x, theta);
        if slice.degenerate {
            return None;
        }
        let profile = circle_profile(&slice.coeffs, x[j], self.cfg.thickness)?;
        let count = profile.inside + slice.min_exp as i64;
        Some(Sample { theta: theta.to_vec(), profile, count })
    }
}

fn majority_fraction(samples: &[Sample]) -> f64 {
    let mut best = 0;
    for s in samples {
        best = best.max(samples.iter().filter(|t| t.count == s.count).count());
    }
    best as f64 / samples.len() as f64
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Low-discrepancy fiber angles: a golden-ratio (n = 2) or plastic-number
/// (n = 3) Kronecker sequence with an offset hashed from the point and seed.
fn fiber_angles(x: &[f64], seed: u64, j: usize, s: usize, attempt: usize, n: usize) -> Vec<f64> {
    let mut h = splitmix(seed ^ ((j as u64) << 56) ^ ((attempt as u64) << 48));
    for v in x {
        h = splitmix(h ^ v.to_bits());
    }
    const PHI: f64 = 0.618_033_988_749_894_9;
    const PLASTIC: f64 = 1.324_717_957_244_746;
    let steps: [f64; 2] = if n <= 2 { [PHI, 0.0] } else { [1.0 / PLASTIC, 1.0 / (PLASTIC * PLASTIC)] };
    let mut theta = vec![0.0; n];
    let mut k = 0;
    for (i, t) in theta.iter_mut().enumerate() {
        if i == j {
            continue;
        }
        h = splitmix(h);
        let offset = (h >> 11) as f64 / (1u64 << 53) as f64;
        *t = TAU * (offset + s as f64 * steps[k]).fract();
        k += 1;
    }
    theta
}
