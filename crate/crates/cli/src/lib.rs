//! Command-line front end: argument parsing, orchestration and artifact output.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use amoeba_core::corpus::{self, FamilySpec};
use amoeba_core::maps;
use amoeba_core::membership::{lopsided_at, Classifier, Status};
use amoeba_core::newton::{is_maximally_sparse, newton_polytope};
use amoeba_core::render::{
    auto_domain, covering_domain, dichotomous_with, greedy_render, naive_render, pixel_membership_render, write_image, AmoebaReport,
    DichotomousParams, DomainBox, DEFAULT_PADDING, ImageFormat, Overlay, RasterImage, RenderError, INK, MAX_DEPTH,
};
use amoeba_core::tropical::{archimedean_tropicalization, spine, spine_polynomial, tropical_vertices, TropicalCurve};
use amoeba_core::{parse_polynomial, LaurentPolynomial, LogPoint};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

const MAX_RESOLUTION: usize = 4096;

#[derive(Debug, Parser)]
#[command(name = "amoeba", version, about = "Amoebas of sparse Laurent polynomials")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Newton polytope, component bounds and tropical data as JSON.
    Info(Source),
    /// Picture of the amoeba.
    Draw(Source),
    /// Complement components by adaptive subdivision.
    Components(Source),
    /// Spine from the Ronkin coefficients of the detected components.
    Spine(Source),
    /// Argument image of the zero locus on the torus square.
    Coamoeba(Source),
    /// Moment map image of the zero locus inside the Newton polygon.
    Compactified(Source),
    /// Critical values of the log map restricted to the zero locus.
    Contour(Source),
    /// Classify a single point of log space.
    Member {
        #[command(flatten)]
        source: Source,
        /// Comma separated coordinates, e.g. 0.5,-1
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Look for bounded complement components of maximally sparse polynomials.
    Scan {
        #[command(flatten)]
        source: Source,
        /// Number of random polynomials.
        #[arg(long, default_value_t = 100)]
        count: usize,
        /// Total degree of the simplex the supports are drawn from.
        #[arg(long, default_value_t = 6)]
        degree: u32,
    },
}

/// Where the polynomial comes from. Exactly one must be given, except for
/// `scan`, which falls back to a random family.
#[derive(Debug, Clone, Default, Args)]
pub struct Source {
    /// Polynomial text, e.g. "z1 + z2 + 1"
    #[arg(value_name = "POLY")]
    pub positional: Option<String>,
    #[arg(short = 'p', long = "poly")]
    pub poly: Option<String>,
    /// File holding the polynomial text.
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// One of p1, p1_sparse, p2, p3.
    #[arg(long)]
    pub fixture: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    Naive,
    Grid,
    Greedy,
    Dichotomous,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Ppm,
    Svg,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct Options {
    /// Log-space box such as x:-4:4,y:-4:4, or "auto" or "cover".
    #[arg(long, global = true, default_value = "auto", allow_hyphen_values = true)]
    pub domain: String,
    #[arg(long, global = true, value_enum)]
    pub alg: Option<Algorithm>,
    /// Modulus and argument steps of the naive algorithm; sampling density
    /// for coamoeba, compactified and contour.
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    /// Image size WxH.
    #[arg(long, global = true, default_value = "800x800")]
    pub res: String,
    #[arg(long, global = true, default_value_t = 8)]
    pub depth: u32,
    /// Fiber samples per coordinate.
    #[arg(long, global = true, default_value_t = 8)]
    pub samples: usize,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Image output path.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// JSON report path.
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,
    /// Worker thread cap.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug)]
pub enum CliError {
    Invalid(String),
    Budget(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Invalid(m) | CliError::Budget(m) => f.write_str(m),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => EXIT_INVALID,
            CliError::Budget(_) => EXIT_BUDGET,
        }
    }
}

impl From<RenderError> for CliError {
    fn from(e: RenderError) -> Self {
        match e {
            RenderError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            other => CliError::Invalid(other.to_string()),
        }
    }
}

fn invalid(msg: impl fmt::Display) -> CliError {
    CliError::Invalid(msg.to_string())
}

/// Parse `argv` (including the program name), run, and return the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(summary) => {
            // a closed pipe on stdout is not an error worth a panic
            let _ = writeln!(std::io::stdout(), "{summary}");
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Run a parsed command inside a pool capped at `--threads`. Returns the
/// one-line summary.
pub fn execute(cli: &Cli) -> Result<String, CliError> {
    match cli.opts.threads {
        Some(0) => Err(invalid("--threads must be positive")),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(t).build().map_err(invalid)?;
            pool.install(|| dispatch(cli))
        }
        None => dispatch(cli),
    }
}

struct Timer {
    phases: Vec<(&'static str, f64)>,
    last: Instant,
    start: Instant,
}

impl Timer {
    fn new() -> Self {
        let now = Instant::now();
        Timer { phases: Vec::new(), last: now, start: now }
    }

    fn lap(&mut self, name: &'static str) {
        let now = Instant::now();
        self.phases.push((name, (now - self.last).as_secs_f64()));
        self.last = now;
    }

    fn total(&self) -> f64 {
        self.start.elapsed().as_secs_f64()
    }

    fn report(&self) {
        let parts: Vec<String> = self.phases.iter().map(|(n, t)| format!("{n} {t:.3}s")).collect();
        eprintln!("timing: {}", parts.join(", "));
    }
}

fn dispatch(cli: &Cli) -> Result<String, CliError> {
    let o = &cli.opts;
    if o.depth > MAX_DEPTH {
        return Err(invalid(format!("depth {} exceeds the maximum of {MAX_DEPTH}", o.depth)));
    }
    if o.samples == 0 {
        return Err(invalid("--samples must be positive"));
    }
    let mut timer = Timer::new();
    let summary = match &cli.command {
        Command::Info(src) => info(&load(src)?, o)?,
        Command::Draw(src) => draw(&load(src)?, o, &mut timer)?,
        Command::Components(src) => components(&load(src)?, o, &mut timer)?,
        Command::Spine(src) => spine_cmd(&load(src)?, o, &mut timer)?,
        Command::Coamoeba(src) => coamoeba(&load(src)?, o, &mut timer)?,
        Command::Compactified(src) => compactified(&load(src)?, o, &mut timer)?,
        Command::Contour(src) => contour(&load(src)?, o, &mut timer)?,
        Command::Member { source, point } => member(&load(source)?, point)?,
        Command::Scan { source, count, degree } => scan(source, *count, *degree, o, &mut timer)?,
    };
    if !timer.phases.is_empty() {
        timer.report();
    }
    Ok(summary)
}

/// Resolve the polynomial source; exactly one must be given.
pub fn load(src: &Source) -> Result<LaurentPolynomial, CliError> {
    let given = [src.positional.is_some(), src.poly.is_some(), src.file.is_some(), src.fixture.is_some()];
    match given.iter().filter(|g| **g).count() {
        0 => return Err(invalid("no polynomial given; use POLY, --poly, --file or --fixture")),
        1 => {}
        _ => return Err(invalid("give exactly one of POLY, --poly, --file, --fixture")),
    }
    if let Some(name) = &src.fixture {
        return corpus::fixture(name).map_err(invalid);
    }
    let text = match (&src.positional, &src.poly, &src.file) {
        (Some(t), _, _) | (_, Some(t), _) => t.clone(),
        (_, _, Some(path)) => std::fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))?,
        _ => unreachable!(),
    };
    parse_polynomial(text.trim()).map_err(invalid)
}

/// `x:lo:hi,y:lo:hi[,z:lo:hi]`, `auto` (padded tropical vertices) or `cover`
/// (also reaching every vertex component).
pub fn parse_domain(text: &str, p: &LaurentPolynomial) -> Result<DomainBox, CliError> {
    match text.trim() {
        "auto" => return Ok(auto_domain(p, DEFAULT_PADDING)),
        "cover" => return Ok(covering_domain(p, DEFAULT_PADDING)),
        _ => {}
    }
    let mut lo = Vec::new();
    let mut hi = Vec::new();
    for (k, part) in text.split(',').enumerate() {
        let f: Vec<&str> = part.trim().split(':').collect();
        let (a, b) = match f.as_slice() {
            [_, a, b] | [a, b] => (*a, *b),
            _ => return Err(invalid(format!("bad domain axis {part:?}; expected name:lo:hi"))),
        };
        let num = |s: &str| s.trim().parse::<f64>().map_err(|_| invalid(format!("bad number {s:?} in axis {}", k + 1)));
        lo.push(num(a)?);
        hi.push(num(b)?);
    }
    if lo.len() != p.arity() {
        return Err(invalid(format!("domain has {} axes but the polynomial has {} variables", lo.len(), p.arity())));
    }
    DomainBox::new(lo, hi).map_err(invalid)
}

/// `WxH`, each side in `1..=4096`.
pub fn parse_resolution(text: &str) -> Result<(usize, usize), CliError> {
    let bad = || invalid(format!("bad resolution {text:?}; expected WxH with sides up to {MAX_RESOLUTION}"));
    let (w, h) = text.split_once(['x', 'X']).ok_or_else(bad)?;
    let w: usize = w.trim().parse().map_err(|_| bad())?;
    let h: usize = h.trim().parse().map_err(|_| bad())?;
    if w == 0 || h == 0 || w > MAX_RESOLUTION || h > MAX_RESOLUTION {
        return Err(bad());
    }
    Ok((w, h))
}

fn parse_point(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| invalid(format!("bad coordinate {s:?}"))))
        .collect()
}

fn image_format(o: &Options, path: &Path) -> Result<ImageFormat, CliError> {
    let f = o.format.unwrap_or_else(|| match path.extension().and_then(|e| e.to_str()) {
        Some("svg") => Format::Svg,
        _ => Format::Ppm,
    });
    match f {
        Format::Ppm => Ok(ImageFormat::Ppm),
        Format::Svg => Ok(ImageFormat::Svg),
        Format::Json => Err(invalid("--format json applies to reports; images are ppm or svg")),
    }
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

fn save_image(img: &RasterImage, o: &Options, overlay: Option<&Overlay>) -> Result<(), CliError> {
    if let Some(path) = &o.out {
        let format = image_format(o, path)?;
        write_image(img, path, format, overlay).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

/// Write the report as pretty JSON with a trailing newline.
pub fn emit_report(report: &AmoebaReport, path: &Path) -> Result<(), CliError> {
    write_text(path, &(report.to_json() + "\n"))
}

fn save_json(value: &Value, o: &Options) -> Result<(), CliError> {
    if let Some(path) = &o.report {
        write_text(path, &(serde_json::to_string_pretty(value).expect("json") + "\n"))?;
    }
    Ok(())
}

fn two_vars(p: &LaurentPolynomial, what: &str) -> Result<(), CliError> {
    if p.arity() != 2 {
        return Err(invalid(format!("{what} needs a polynomial in two variables, got {}", p.arity())));
    }
    Ok(())
}

fn info(p: &LaurentPolynomial, o: &Options) -> Result<String, CliError> {
    let poly = newton_polytope(p);
    let (min, max) = poly.component_bounds();
    let support: Vec<&[i32]> = p.terms().map(|(e, _)| e.as_slice()).collect();
    let value = json!({
        "polynomial": p.to_string(),
        "variables": p.arity(),
        "terms": p.len(),
        "support": support,
        "vertices": poly.vertices().iter().map(|v| v.as_slice()).collect::<Vec<_>>(),
        "dimension": poly.dimension(),
        "lattice_points": poly.lattice_points().len(),
        "interior_points": poly.interior_points().iter().map(|v| v.0.clone()).collect::<Vec<_>>(),
        "bounds": { "min": min, "max": max },
        "maximally_sparse": is_maximally_sparse(p),
        "real": p.is_real(),
        "tropical_vertices": tropical_vertices(&archimedean_tropicalization(p)),
        "domain": parse_domain(&o.domain, p)?,
    });
    let text = serde_json::to_string_pretty(&value).expect("json");
    save_json(&value, o)?;
    Ok(text)
}

fn params(o: &Options) -> DichotomousParams {
    DichotomousParams { seed: o.seed, ..DichotomousParams::new(o.depth, o.samples) }
}

fn run_components(p: &LaurentPolynomial, o: &Options, timer: &mut Timer) -> Result<AmoebaReport, CliError> {
    let domain = parse_domain(&o.domain, p)?;
    let report = dichotomous_with(p, &domain, &params(o))?;
    timer.lap("classification");
    Ok(report)
}

fn draw(p: &LaurentPolynomial, o: &Options, timer: &mut Timer) -> Result<String, CliError> {
    two_vars(p, "draw")?;
    let domain = parse_domain(&o.domain, p)?;
    let (w, h) = parse_resolution(&o.res)?;
    let alg = o.alg.unwrap_or(Algorithm::Greedy);
    let (img, detail) = match alg {
        Algorithm::Naive => {
            let n = o.grid.unwrap_or(100);
            let r = naive_render(p, &domain, n, n, w, h)?;
            timer.lap("classification");
            let detail = format!("{} roots plotted, {} slices skipped", r.plotted, r.skipped_slices);
            (r.image, detail)
        }
        Algorithm::Grid => {
            let img = pixel_membership_render(p, &domain, w, h, o.samples)?;
            timer.lap("classification");
            (img, format!("{} pixels tested", w * h))
        }
        Algorithm::Greedy => {
            let r = greedy_render(p, &domain, w, h, o.samples, None)?;
            timer.lap("classification");
            for warn in &r.warnings {
                eprintln!("warning: {warn}");
            }
            (r.image, format!("{} pixels tested", r.tested))
        }
        Algorithm::Dichotomous => {
            let report = dichotomous_with(p, &domain, &params(o))?;
            timer.lap("classification");
            let img = report.to_image(w, h)?;
            timer.lap("merge");
            if let Some(path) = &o.report {
                emit_report(&report, path)?;
            }
            (img, format!("{} components", report.counts.components))
        }
    };
    let painted = img.painted_count();
    save_image(&img, o, None)?;
    timer.lap("render");
    Ok(format!(
        "draw: {painted} of {} pixels painted, {detail}, alg {:?}, {:.2}s",
        w * h,
        alg,
        timer.total()
    )
    .to_lowercase())
}

fn components(p: &LaurentPolynomial, o: &Options, timer: &mut Timer) -> Result<String, CliError> {
    if matches!(o.alg, Some(a) if a != Algorithm::Dichotomous) {
        return Err(invalid("components uses the dichotomous algorithm"));
    }
    let report = run_components(p, o, timer)?;
    timer.lap("merge");
    if let Some(path) = &o.report {
        emit_report(&report, path)?;
    }
    if o.out.is_some() {
        two_vars(p, "an image")?;
        let (w, h) = parse_resolution(&o.res)?;
        save_image(&report.to_image(w, h)?, o, None)?;
    }
    timer.lap("render");
    for warn in &report.warnings {
        eprintln!("warning: {warn}");
    }
    let c = &report.counts;
    Ok(format!(
        "components: {} ({} bounded, {} unbounded), bounds {}..{}, solid={}, optimal={}, {:.2}s",
        c.components,
        c.bounded,
        c.unbounded,
        report.bounds.min,
        report.bounds.max,
        report.flags.solid,
        report.flags.optimal,
        timer.total()
    ))
}

/// Clip a ray to the domain by walking the longest diagonal.
fn curve_overlay(curve: &TropicalCurve, domain: &DomainBox) -> Overlay {
    let reach = domain.width(0).hypot(domain.width(1))
        + domain.lo.iter().chain(&domain.hi).map(|v| v.abs()).fold(0.0, f64::max) * 2.0;
    let mut polylines: Vec<Vec<[f64; 2]>> = curve.segments.iter().map(|s| vec![s.start, s.end]).collect();
    polylines.extend(curve.rays.iter().map(|r| {
        vec![r.origin, [r.origin[0] + reach * r.direction[0], r.origin[1] + reach * r.direction[1]]]
    }));
    Overlay { polylines, points: curve.vertices.clone() }
}

fn spine_cmd(p: &LaurentPolynomial, o: &Options, timer: &mut Timer) -> Result<String, CliError> {
    two_vars(p, "spine")?;
    let report = run_components(p, o, timer)?;
    let coeffs = spine_polynomial(p, &report, amoeba_core::tropical::DEFAULT_RONKIN_TOL);
    let curve = spine(p, &report);
    timer.lap("merge");
    let value = json!({
        "polynomial": p.to_string(),
        "components": report.counts.components,
        "coefficients": coeffs.as_ref().map(|t| t.terms().iter().map(|(e, a)| json!({"order": e.as_slice(), "value": a})).collect::<Vec<_>>()),
        "vertices": curve.vertices,
        "segments": curve.segments.iter().map(|s| [s.start, s.end]).collect::<Vec<_>>(),
        "rays": curve.rays.iter().map(|r| json!({"origin": r.origin, "direction": r.direction})).collect::<Vec<_>>(),
    });
    save_json(&value, o)?;
    if o.out.is_some() {
        let (w, h) = parse_resolution(&o.res)?;
        let img = report.to_image(w, h)?;
        save_image(&img, o, Some(&curve_overlay(&curve, &report.domain)))?;
    }
    timer.lap("render");
    Ok(format!(
        "spine: {} vertices, {} edges from {} components, {:.2}s",
        curve.vertices.len(),
        curve.edge_count(),
        report.counts.components,
        timer.total()
    ))
}

fn density(o: &Options) -> Result<usize, CliError> {
    match o.grid.unwrap_or(200) {
        0 => Err(invalid("--grid must be positive")),
        n => Ok(n),
    }
}

fn coamoeba(p: &LaurentPolynomial, o: &Options, timer: &mut Timer) -> Result<String, CliError> {
    two_vars(p, "coamoeba")?;
    let domain = parse_domain(&o.domain, p)?;
    let (w, h) = parse_resolution(&o.res)?;
    let sample = maps::sample_zero_locus(p, &domain, density(o)?)?;
    let pts = maps::coamoeba_points(&sample);
    timer.lap("classification");
    save_json(&json!(pts), o)?;
    save_image(&maps::coamoeba_raster(&pts, w, h), o, None)?;
    timer.lap("render");
    Ok(format!(
        "coamoeba: {} points, {} slices skipped, {} roots rejected, {:.2}s",
        pts.len(),
        sample.skipped_slices,
        sample.rejected,
        timer.total()
    ))
}

fn compactified(p: &LaurentPolynomial, o: &Options, timer: &mut Timer) -> Result<String, CliError> {
    two_vars(p, "compactified")?;
    let domain = parse_domain(&o.domain, p)?;
    let (w, h) = parse_resolution(&o.res)?;
    let sample = maps::sample_zero_locus(p, &domain, density(o)?)?;
    let c = maps::compactified_amoeba(p, &sample);
    timer.lap("classification");
    let outline: Vec<&[i32]> = c.outline.iter().map(|v| v.as_slice()).collect();
    save_json(&json!({"outline": outline, "points": c.points}), o)?;
    let img = c.raster(w, h);
    let mut ring: Vec<[f64; 2]> = c.outline.iter().map(|v| [v.0[0] as f64, v.0[1] as f64]).collect();
    if let Some(first) = ring.first().copied() {
        ring.push(first);
    }
    save_image(&img, o, Some(&Overlay { polylines: vec![ring], points: Vec::new() }))?;
    timer.lap("render");
    Ok(format!("compactified: {} points, {} outline vertices, {:.2}s", c.points.len(), c.outline.len(), timer.total()))
}

fn contour(p: &LaurentPolynomial, o: &Options, timer: &mut Timer) -> Result<String, CliError> {
    two_vars(p, "contour")?;
    let domain = parse_domain(&o.domain, p)?;
    let (w, h) = parse_resolution(&o.res)?;
    let pts = maps::contour_points(p, &domain, density(o)?)?;
    timer.lap("classification");
    save_json(&json!(pts.iter().map(|q| q.coords()).collect::<Vec<_>>()), o)?;
    let mut img = RasterImage::new(w, h, domain);
    for q in &pts {
        if let Some((i, j)) = img.pixel_of([q.0[0], q.0[1]]) {
            img.set(i, j, INK);
        }
    }
    save_image(&img, o, None)?;
    timer.lap("render");
    Ok(format!("contour: {} points, {:.2}s", pts.len(), timer.total()))
}

fn member(p: &LaurentPolynomial, point: &str) -> Result<String, CliError> {
    let x = parse_point(point)?;
    if x.len() != p.arity() {
        return Err(invalid(format!("point has {} coordinates, polynomial has {} variables", x.len(), p.arity())));
    }
    let cls = Classifier::new(p);
    let c = cls.classify(&x);
    let lop = lopsided_at(p, &LogPoint(x.clone()));
    let (status, order) = match &c.status {
        Status::Complement(o) => ("complement", Some(o.0.clone())),
        Status::Amoeba => ("amoeba", None),
        Status::Undecided => ("undecided", None),
    };
    let value = json!({
        "point": x,
        "status": status,
        "order": order,
        "lopsided": lop.map(|e| e.0),
        "samples_used": c.samples_used,
        "agreement": c.agreement,
    });
    Ok(serde_json::to_string(&value).expect("json"))
}

fn scan(src: &Source, count: usize, degree: u32, o: &Options, timer: &mut Timer) -> Result<String, CliError> {
    let params = params(o);
    let given = src.positional.is_some() || src.poly.is_some() || src.file.is_some() || src.fixture.is_some();
    let entries = if given {
        corpus::scan_polynomials(&[load(src)?], &params).map_err(invalid)?
    } else {
        let spec = FamilySpec::maximally_sparse(2, degree, count, o.seed);
        corpus::passare_scan(&spec, &params).map_err(invalid)?
    };
    timer.lap("classification");
    save_json(&serde_json::to_value(&entries).expect("json"), o)?;
    let flagged = entries.iter().filter(|e| !e.bounded_orders.is_empty()).count();
    let confirmed = entries.iter().filter(|e| e.confirmed).count();
    let failed = entries.iter().filter(|e| e.error.is_some()).count();
    for e in entries.iter().filter(|e| !e.bounded_orders.is_empty()) {
        eprintln!("candidate {}: {} bounded {:?} confirmed={}", e.index, e.polynomial, e.bounded_orders, e.confirmed);
    }
    Ok(format!(
        "scan: {} polynomials, {flagged} flagged, {confirmed} confirmed, {failed} failed, {:.2}s",
        entries.len(),
        timer.total()
    ))
}
