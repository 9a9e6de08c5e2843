//! Acceptance run: one line per criterion, nonzero exit if any fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use amoeba_core::corpus::{fixture, passare_scan, random_polynomial, scan_polynomials, FamilySpec, Phase, SupportRule};
use amoeba_core::membership::{harnack_region_test, lopsided_at, Classifier, MembershipConfig, Status};
use amoeba_core::newton::component_count_bounds;
use amoeba_core::render::{auto_domain, covering_domain, dichotomous_with, AmoebaReport, DichotomousParams, DomainBox, DEFAULT_PADDING};
use amoeba_core::roots::all_roots;
use amoeba_core::tropical::{ronkin_value, spine, spine_polynomial, tropical_eval, DEFAULT_RONKIN_TOL};
use amoeba_core::{parse_polynomial, Complex64, Exponent, LaurentPolynomial, LogPoint};

type Outcome = Result<String, String>;

/// A component run kept for the determinism check.
struct Case {
    name: &'static str,
    p: LaurentPolynomial,
    domain: DomainBox,
    params: DichotomousParams,
    json: String,
    ppm: Vec<u8>,
}

fn run_case(name: &'static str, p: LaurentPolynomial, domain: DomainBox, depth: u32) -> Result<(AmoebaReport, Case), String> {
    let params = DichotomousParams::new(depth, 8);
    let r = dichotomous_with(&p, &domain, &params).map_err(|e| format!("{name}: {e}"))?;
    let json = r.to_json();
    let ppm = r.to_image(400, 400).map_err(|e| e.to_string())?.to_ppm();
    Ok((r, Case { name, p, domain, params, json, ppm }))
}

fn within(t: Duration, cap: u64) -> Result<(), String> {
    if t > Duration::from_secs(cap) {
        Err(format!("took {:.1}s, cap {cap}s", t.as_secs_f64()))
    } else {
        Ok(())
    }
}

fn orders(r: &AmoebaReport) -> BTreeSet<Vec<i32>> {
    r.components.iter().map(|c| c.order.0.clone()).collect()
}

fn line() -> LaurentPolynomial {
    parse_polynomial("z1 + z2 + 1").unwrap()
}

fn criterion_1(cases: &mut Vec<Case>) -> Outcome {
    let t = Instant::now();
    let (r, case) = run_case("line", line(), DomainBox::cube(2, 4.0), 8)?;
    let sp = spine(&case.p, &r);
    within(t.elapsed(), 5)?;
    cases.push(case);
    let want: BTreeSet<Vec<i32>> = [vec![0, 0], vec![1, 0], vec![0, 1]].into();
    if orders(&r) != want || r.components.len() != 3 {
        return Err(format!("orders {:?}", orders(&r)));
    }
    if r.counts.bounded != 0 || !r.flags.solid {
        return Err(format!("bounded {} solid {}", r.counts.bounded, r.flags.solid));
    }
    let v = sp.vertices.first().ok_or("spine has no vertex")?;
    if v[0].hypot(v[1]) > 0.05 {
        return Err(format!("spine vertex {v:?}"));
    }
    Ok(format!("3 unbounded components, spine vertex {:.1e} from origin, {:.2}s", v[0].hypot(v[1]), t.elapsed().as_secs_f64()))
}

fn criterion_2(cases: &mut Vec<Case>) -> Outcome {
    let t = Instant::now();
    let p = fixture("p1_sparse").unwrap();
    let d = auto_domain(&p, DEFAULT_PADDING);
    let (r, case) = run_case("p1_sparse", p, d, 8)?;
    within(t.elapsed(), 30)?;
    cases.push(case);
    if r.components.len() != 8 || r.counts.bounded != 0 || !r.flags.solid {
        return Err(format!("{} components, {} bounded, solid {}", r.components.len(), r.counts.bounded, r.flags.solid));
    }
    Ok(format!("8 components, none bounded, {:.2}s", t.elapsed().as_secs_f64()))
}

fn criterion_3(cases: &mut Vec<Case>) -> Outcome {
    let t = Instant::now();
    let p = fixture("p2").unwrap();
    let d = auto_domain(&p, DEFAULT_PADDING);
    let (r, case) = run_case("p2", p.clone(), d, 9)?;
    within(t.elapsed(), 60)?;
    cases.push(case);
    if r.components.len() != 7 || r.counts.bounded != 3 || r.counts.unbounded != 4 {
        return Err(format!("{} components, {} bounded", r.components.len(), r.counts.bounded));
    }
    let bounded: BTreeSet<Vec<i32>> = r.bounded_orders().into_iter().map(|o| o.0).collect();
    if !bounded.contains(&vec![1, 3]) || !bounded.contains(&vec![3, 3]) {
        return Err(format!("bounded orders {bounded:?}"));
    }
    let third: Vec<i32> = bounded.iter().find(|o| **o != vec![1, 3] && **o != vec![3, 3]).cloned().unwrap();
    if p.coefficient(&Exponent(third.clone())).is_some() {
        return Err(format!("third order {third:?} is a monomial"));
    }
    let c = r.component(&third).unwrap();
    if c.in_support || c.lattice_class != amoeba_core::newton::PointClass::Interior {
        return Err(format!("third order {third:?} class {:?}", c.lattice_class));
    }
    let label = format!("({},{})", third[0], third[1]);
    if !r.warnings.iter().any(|w| w.contains(&label) && w.contains("monomial")) {
        return Err(format!("no warning about {label}: {:?}", r.warnings));
    }
    Ok(format!("4 unbounded + 3 bounded, third order {label} flagged, {:.2}s", t.elapsed().as_secs_f64()))
}

/// Lattice points of the hull of `support`, by half-plane tests against every
/// line through two support points.
fn lattice_oracle(support: &[Exponent]) -> usize {
    let pts: Vec<(i64, i64)> = support.iter().map(|e| (e.0[0] as i64, e.0[1] as i64)).collect();
    let mut halfplanes = Vec::new();
    for a in &pts {
        for b in &pts {
            if a == b {
                continue;
            }
            let side = |q: &(i64, i64)| (b.0 - a.0) * (q.1 - a.1) - (b.1 - a.1) * (q.0 - a.0);
            if pts.iter().all(|q| side(q) >= 0) {
                halfplanes.push((*a, *b));
            }
        }
    }
    let (x0, x1) = (pts.iter().map(|p| p.0).min().unwrap(), pts.iter().map(|p| p.0).max().unwrap());
    let (y0, y1) = (pts.iter().map(|p| p.1).min().unwrap(), pts.iter().map(|p| p.1).max().unwrap());
    let mut count = 0;
    for x in x0..=x1 {
        for y in y0..=y1 {
            if halfplanes.iter().all(|(a, b)| (b.0 - a.0) * (y - a.1) - (b.1 - a.1) * (x - a.0) >= 0) {
                count += 1;
            }
        }
    }
    count
}

fn criterion_4(cases: &mut Vec<Case>) -> Outcome {
    let t = Instant::now();
    let p = fixture("p3").unwrap();
    let d = auto_domain(&p, DEFAULT_PADDING);
    let expected = lattice_oracle(&p.support());
    let (r9, case) = run_case("p3", p.clone(), d.clone(), 9)?;
    within(t.elapsed(), 60)?;
    cases.push(case);
    let r5 = dichotomous_with(&p, &d, &DichotomousParams::new(5, 8)).map_err(|e| e.to_string())?;
    if r9.components.len() != expected || !r9.flags.optimal {
        return Err(format!("depth 9: {} components, lattice count {expected}", r9.components.len()));
    }
    if r5.components.len() != r9.components.len() {
        return Err(format!("depth 5: {} components, depth 9: {}", r5.components.len(), r9.components.len()));
    }
    Ok(format!("{expected} components at depths 5 and 9, optimal, {:.2}s", t.elapsed().as_secs_f64()))
}

fn general_family(count: usize, seed: u64) -> FamilySpec {
    FamilySpec {
        arity: 2,
        degree: 6,
        support: SupportRule::FullSimplex,
        magnitude: (0.1, 10.0),
        phase: Phase::Uniform,
        count,
        seed,
        fill: 0.3,
    }
}

fn criterion_5() -> Outcome {
    let spec = general_family(50, 11);
    let mut violations = Vec::new();
    let mut nondegenerate = 0;
    for i in 0..50 {
        let p = random_polynomial(&spec, i).map_err(|e| e.to_string())?;
        if p.len() < 2 {
            continue;
        }
        nondegenerate += 1;
        let (lo, hi) = component_count_bounds(&p);
        let r = dichotomous_with(&p, &covering_domain(&p, DEFAULT_PADDING), &DichotomousParams::new(8, 8))
            .map_err(|e| format!("{i}: {e}"))?;
        let n = r.components.len();
        if n < lo || n > hi {
            violations.push(format!("#{i} {p}: {n} not in {lo}..{hi}"));
        }
        if orders(&r).len() != n {
            violations.push(format!("#{i}: duplicate orders"));
        }
    }
    if violations.is_empty() {
        Ok(format!("{nondegenerate} polynomials within bounds, orders injective"))
    } else {
        Err(violations.join("; "))
    }
}

fn criterion_6() -> Outcome {
    let spec = general_family(20, 12);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut certified = 0;
    for i in 0..20 {
        let p = random_polynomial(&spec, i).map_err(|e| e.to_string())?;
        let cls = Classifier::new(&p);
        for _ in 0..1000 {
            let x = LogPoint(vec![rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)]);
            if lopsided_at(&p, &x).is_some() {
                certified += 1;
                if cls.classify_log(&x).status == Status::Amoeba {
                    return Err(format!("#{i} {p} at {:?}", x.0));
                }
            }
        }
    }
    Ok(format!("{certified} certified points, none classified amoeba"))
}

fn criterion_7() -> Outcome {
    let tol = DEFAULT_RONKIN_TOL;
    let mono = parse_polynomial("(2-3i)*z1^2*z2^-1").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let x = [rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0)];
        let want = 13f64.sqrt().ln() + 2.0 * x[0] - x[1];
        let got = ronkin_value(&mono, &x, tol).value;
        if (got - want).abs() >= 1e-9 {
            return Err(format!("monomial at {x:?}: {got} vs {want}"));
        }
    }
    let uni = parse_polynomial("x - 1").unwrap();
    for k in -20..=20 {
        let x = k as f64 * 0.25;
        let got = ronkin_value(&uni, &[x], tol).value;
        if (got - x.max(0.0)).abs() > 1e-4 {
            return Err(format!("x - 1 at {x}: {got}"));
        }
    }
    let p = fixture("p2").unwrap();
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..100 {
        let a = [rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)];
        let b = [rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)];
        let m = [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])];
        let gap = ronkin_value(&p, &m, tol).value - 0.5 * (ronkin_value(&p, &a, tol).value + ronkin_value(&p, &b, tol).value);
        worst = worst.max(gap);
        if gap > 2.0 * tol * (1.0 + ronkin_value(&p, &m, tol).value.abs()) {
            return Err(format!("midpoint of {a:?} {b:?} exceeds the chord by {gap:.2e}"));
        }
    }
    Ok(format!("monomial exact, Jensen case exact, worst midpoint excess {worst:.1e}"))
}

fn criterion_8() -> Outcome {
    let mut notes = Vec::new();
    for name in ["p1", "p1_sparse", "p2", "p3"] {
        let p = fixture(name).unwrap();
        let d = auto_domain(&p, DEFAULT_PADDING);
        let r = dichotomous_with(&p, &d, &DichotomousParams::new(8, 8)).map_err(|e| e.to_string())?;
        let t = spine_polynomial(&p, &r, DEFAULT_RONKIN_TOL).ok_or(format!("{name}: no spine polynomial"))?;
        for c in &r.components {
            let (_, arg) = tropical_eval(&t, &c.representative.0);
            if arg != vec![c.order.as_exponent()] {
                return Err(format!("{name}: argmax at the representative of {} is {arg:?}", c.order));
            }
        }
        let curve = spine(&p, &r);
        let step = d.width(0).min(d.width(1)) / 200.0;
        let pts: Vec<[f64; 2]> = curve.sample_points(step, 100.0).into_iter().filter(|q| d.contains(q)).collect();
        let cls = Classifier::new(&p);
        let hits = pts.iter().filter(|q| cls.classify(&q[..]).status.is_amoeba_like()).count();
        let frac = hits as f64 / pts.len().max(1) as f64;
        if pts.is_empty() || frac < 0.95 {
            return Err(format!("{name}: {hits}/{} spine samples in the amoeba", pts.len()));
        }
        notes.push(format!("{name} {:.1}%", 100.0 * frac));
    }
    Ok(format!("argmax matches every order; spine samples in amoeba: {}", notes.join(", ")))
}

fn criterion_9() -> Outcome {
    let c = [Complex64::new(1.0, 0.0), Complex64::new(-2.5, 0.0), Complex64::new(1.0, 0.0)];
    let roots = all_roots(&c).map_err(|e| e.to_string())?;
    let mut logs: Vec<f64> = roots.roots.iter().map(|w| w.norm().ln()).collect();
    logs.sort_by(f64::total_cmp);
    let ln2 = 2f64.ln();
    if logs.len() != 2 || (logs[0] + ln2).abs() > 1e-9 || (logs[1] - ln2).abs() > 1e-9 {
        return Err(format!("amoeba {logs:?}"));
    }
    let p = parse_polynomial("x^2 - 2.5*x + 1").unwrap();
    let cls = Classifier::new(&p);
    for (x, want) in [(-3.0, 0), (-1.0, 0), (0.0, 1), (0.5, 1), (1.0, 2), (3.0, 2)] {
        match cls.classify(&[x]).status {
            Status::Complement(o) if o.0 == vec![want] => {}
            s => return Err(format!("x = {x}: {s:?}, want order {want}")),
        }
    }
    for x in [-ln2, ln2] {
        if !cls.classify(&[x]).status.is_amoeba_like() {
            return Err(format!("{x} not in the amoeba"));
        }
    }
    Ok("amoeba {-ln 2, ln 2}, orders 0/1/2".into())
}

fn criterion_10() -> Outcome {
    let p = line();
    let n = 100;
    let at = |i: usize| -3.0 + 6.0 * (i as f64 + 0.5) / n as f64;
    let mut harnack = vec![false; n * n];
    for j in 0..n {
        for i in 0..n {
            harnack[j * n + i] = harnack_region_test(&p, &LogPoint(vec![at(i), at(j)])).unwrap() <= 0.0;
        }
    }
    let cls = Classifier::with_config(&p, MembershipConfig::with_samples(8));
    let mut disagree = 0;
    for j in 0..n {
        for i in 0..n {
            let inside = cls.classify(&[at(i), at(j)]).status.is_amoeba_like();
            if inside == harnack[j * n + i] {
                continue;
            }
            disagree += 1;
            let band = (-1i64..=1).any(|dj| {
                (-1i64..=1).any(|di| {
                    let (a, b) = (i as i64 + di, j as i64 + dj);
                    a >= 0 && b >= 0 && a < n as i64 && b < n as i64 && harnack[b as usize * n + a as usize] != harnack[j * n + i]
                })
            });
            if !band {
                return Err(format!("disagreement away from the boundary at ({}, {})", at(i), at(j)));
            }
        }
    }
    let agree = 1.0 - disagree as f64 / (n * n) as f64;
    if agree < 0.99 {
        return Err(format!("agreement {:.2}%", 100.0 * agree));
    }
    Ok(format!("agreement {:.2}%, {disagree} boundary disagreements", 100.0 * agree))
}

fn criterion_11(cases: &[Case]) -> Outcome {
    if cases.len() != 4 {
        return Err(format!("only {} of the 4 baseline runs are available", cases.len()));
    }
    for threads in [1, 4, 8] {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(|e| e.to_string())?;
        for c in cases {
            let r = pool.install(|| dichotomous_with(&c.p, &c.domain, &c.params)).map_err(|e| e.to_string())?;
            if r.to_json() != c.json {
                return Err(format!("{} JSON differs at {threads} threads", c.name));
            }
            if r.to_image(400, 400).map_err(|e| e.to_string())?.to_ppm() != c.ppm {
                return Err(format!("{} PPM differs at {threads} threads", c.name));
            }
        }
    }
    Ok("JSON and PPM identical at 1, 4 and 8 threads".into())
}

fn criterion_12() -> Outcome {
    let spec = FamilySpec::maximally_sparse(2, 6, 100, 12);
    let params = DichotomousParams::new(8, 8);
    let entries = passare_scan(&spec, &params).map_err(|e| e.to_string())?;
    let errors: Vec<_> = entries.iter().filter_map(|e| e.error.as_ref()).collect();
    if !errors.is_empty() {
        return Err(format!("scan errors: {errors:?}"));
    }
    let flagged: Vec<usize> = entries.iter().filter(|e| !e.bounded_orders.is_empty()).map(|e| e.index).collect();
    let confirmed: Vec<_> = entries.iter().filter(|e| e.confirmed).map(|e| e.polynomial.clone()).collect();
    if !confirmed.is_empty() {
        return Err(format!("confirmed candidates: {confirmed:?}"));
    }
    let sparse = scan_polynomials(&[fixture("p1_sparse").unwrap()], &params).map_err(|e| e.to_string())?;
    if !sparse[0].bounded_orders.is_empty() {
        return Err(format!("p1_sparse flagged: {:?}", sparse[0].bounded_orders));
    }
    Ok(format!(
        "{} polynomials, flagged {flagged:?} (not confirmed at depth + 2), 0 confirmed; p1_sparse not flagged",
        entries.len()
    ))
}

fn main() {
    let mut cases = Vec::new();
    let mut failed = 0;
    let mut report = |k: usize, t: Instant, o: Outcome| {
        let secs = t.elapsed().as_secs_f64();
        match o {
            Ok(m) => println!("criterion {k:>2}: PASS  {m}  [{secs:.1}s]"),
            Err(m) => {
                failed += 1;
                println!("criterion {k:>2}: FAIL  {m}  [{secs:.1}s]");
            }
        }
    };
    let t = Instant::now();
    report(1, t, criterion_1(&mut cases));
    let t = Instant::now();
    report(2, t, criterion_2(&mut cases));
    let t = Instant::now();
    report(3, t, criterion_3(&mut cases));
    let t = Instant::now();
    report(4, t, criterion_4(&mut cases));
    let t = Instant::now();
    report(5, t, criterion_5());
    let t = Instant::now();
    report(6, t, criterion_6());
    let t = Instant::now();
    report(7, t, criterion_7());
    let t = Instant::now();
    report(8, t, criterion_8());
    let t = Instant::now();
    report(9, t, criterion_9());
    let t = Instant::now();
    report(10, t, criterion_10());
    let t = Instant::now();
    report(11, t, criterion_11(&cases));
    let t = Instant::now();
    report(12, t, criterion_12());
    if failed > 0 {
        println!("{failed} of 12 criteria failed");
        std::process::exit(1);
    }
    println!("all 12 criteria passed");
}
