//! Campaign configuration and the verification suites.

use std::path::PathBuf;

use crate::bodies::{self, from_polar, nested_pair, random_body, regular_polygon};
use crate::bonnesen::{deficit_report, kappa_limit_sweep, quadratic_witness, SweepRow, SLACK_TOL};
use crate::convex::GeodesicPolygon;
use crate::error::{Error, Result};
use crate::kinematics::{containment_slack, find_containment, kinematic_lhs, kinematic_rhs, monotonicity_probe};
use crate::par::{map_indexed, Execution};
use crate::radii::{metrics, BodyMetrics};
use crate::rng::RandomStream;
use crate::surface::{disc_area, disc_perimeter, Curvature};

use super::bodyfile::parse_body_file;
use super::report::{write_report, Format, Record};

/// Monte Carlo agreement is checked at `max(Z·σ, REL·rhs)`.
pub const KINEMATIC_Z: f64 = 4.0;
pub const KINEMATIC_REL: f64 = 1e-3;
/// Criterion slack needed before a containment witness is demanded.
pub const CONTAINMENT_MARGIN: f64 = 1e-3;
pub const SWEEP_KAPPAS: [f64; 9] = [0.1, 0.01, 1e-3, 1e-4, 0.0, -0.1, -0.01, -1e-3, -1e-4];
pub const SWEEP_FINAL_GAP: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq)]
pub enum BodySource {
    Random { count: usize, max_vertices: usize },
    FromFile(PathBuf),
    DiscNgon { radius: f64, sides: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Metrics,
    Kinematic,
    Containment,
    Bonnesen,
    Sweep,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Metrics, Suite::Kinematic, Suite::Containment, Suite::Bonnesen, Suite::Sweep];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Metrics => "metrics",
            Suite::Kinematic => "kinematic",
            Suite::Containment => "containment",
            Suite::Bonnesen => "bonnesen",
            Suite::Sweep => "sweep",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CampaignConfig {
    pub seed: u64,
    pub kappas: Vec<f64>,
    pub bodies: BodySource,
    pub mc_samples: u64,
    pub containment_budget: u64,
    pub output: PathBuf,
    pub format: Format,
    pub suites: Vec<Suite>,
}

impl CampaignConfig {
    pub fn validate(&self) -> Result<()> {
        if self.kappas.is_empty() {
            return Err(Error::Config("kappa: at least one curvature is required".into()));
        }
        if let Some(k) = self.kappas.iter().find(|k| !k.is_finite()) {
            return Err(Error::Config(format!("kappa: {k} is not finite")));
        }
        if self.mc_samples < 1000 {
            return Err(Error::Config(format!("samples: need at least 1000, got {}", self.mc_samples)));
        }
        match &self.bodies {
            BodySource::Random { count, max_vertices } => {
                if *count < 1 {
                    return Err(Error::Config("count: must be at least 1".into()));
                }
                if *max_vertices < 3 {
                    return Err(Error::Config(format!("max-vertices: need at least 3, got {max_vertices}")));
                }
            }
            BodySource::DiscNgon { radius, sides } => {
                if !(radius.is_finite() && *radius > 0.0) {
                    return Err(Error::Config(format!("disc-radius: must be positive, got {radius}")));
                }
                if *sides < 3 {
                    return Err(Error::Config(format!("disc-sides: need at least 3, got {sides}")));
                }
            }
            BodySource::FromFile(_) => {}
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct BodyEntry {
    pub id: usize,
    pub kappa: Curvature,
    pub body: GeodesicPolygon,
}

#[derive(Clone, Debug)]
pub struct SuiteOutcome {
    pub suite: Suite,
    pub path: PathBuf,
    pub records: Vec<Record>,
}

impl SuiteOutcome {
    pub fn checked(&self) -> usize {
        self.records.iter().filter(|r| r.satisfied.is_some()).count()
    }

    pub fn failed(&self) -> usize {
        self.records.iter().filter(|r| r.satisfied == Some(false)).count()
    }
}

/// Stream roles under the campaign seed.
const BODY_STREAM: u64 = 0;
const KINEMATIC_STREAM: u64 = 1;
const CONTAINMENT_STREAM: u64 = 2;
const NESTED_STREAM: u64 = 3;

pub fn build_bodies(cfg: &CampaignConfig) -> Result<Vec<BodyEntry>> {
    let root = RandomStream::new(cfg.seed).split(BODY_STREAM);
    let mut out = Vec::new();
    match &cfg.bodies {
        BodySource::FromFile(path) => {
            for (kappa, body) in parse_body_file(path)? {
                out.push(BodyEntry { id: out.len(), kappa, body });
            }
        }
        BodySource::Random { count, max_vertices } => {
            for (ki, &kv) in cfg.kappas.iter().enumerate() {
                let kappa = Curvature::new(kv)?;
                let stream = root.split(ki as u64);
                let made = map_indexed(*count, Execution::Parallel, |j| {
                    random_body(kappa, *max_vertices, &mut stream.split(j as u64))
                });
                for body in made {
                    out.push(BodyEntry { id: out.len(), kappa, body });
                }
            }
        }
        BodySource::DiscNgon { radius, sides } => {
            for &kv in &cfg.kappas {
                let kappa = Curvature::new(kv)?;
                if *radius >= bodies::size_limit(kappa) && kv > 0.0 {
                    return Err(Error::Config(format!(
                        "disc-radius: {radius} leaves the hemisphere at κ = {kv}"
                    )));
                }
                let body = regular_polygon(kappa, *radius, *sides, 0.0)?;
                out.push(BodyEntry { id: out.len(), kappa, body });
            }
        }
    }
    if out.is_empty() {
        return Err(Error::Config("no bodies to verify".into()));
    }
    Ok(out)
}

fn with_metrics(mut r: Record, m: &BodyMetrics) -> Record {
    r.area = Some(m.area);
    r.perimeter = Some(m.perimeter);
    r.r_in = Some(m.inradius);
    r.r_circ = Some(m.circumradius);
    r
}

fn all_metrics(bodies: &[BodyEntry]) -> Result<Vec<BodyMetrics>> {
    map_indexed(bodies.len(), Execution::Parallel, |i| metrics(&bodies[i].body))
        .into_iter()
        .collect()
}

/// Consecutive bodies of equal curvature, wrapping within each group.
fn pairs(bodies: &[BodyEntry]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut start = 0;
    while start < bodies.len() {
        let mut end = start + 1;
        while end < bodies.len() && bodies[end].kappa == bodies[start].kappa {
            end += 1;
        }
        let n = end - start;
        for i in 0..n {
            out.push((start + i, start + (i + 1) % n));
        }
        start = end;
    }
    out
}

fn metrics_suite(cfg: &CampaignConfig, bodies: &[BodyEntry], ms: &[BodyMetrics]) -> Result<Vec<Record>> {
    let mut out = Vec::new();
    for (e, m) in bodies.iter().zip(ms) {
        let tol = 1e-9;
        let scale = 1.0 + m.area + m.perimeter;
        let a_lo = disc_area(e.kappa, m.inradius)?;
        let a_hi = disc_area(e.kappa, m.circumradius)?;
        let p_hi = disc_perimeter(e.kappa, m.circumradius)?;
        let slack = [
            m.circumradius - m.inradius,
            m.area - a_lo,
            a_hi - m.area,
            p_hi - m.perimeter,
        ]
        .into_iter()
        .fold(f64::INFINITY, f64::min);
        let mut r = with_metrics(Record::new("metrics", "disc_sandwich", e.kappa.value(), e.id.to_string(), cfg.seed), m);
        r.slack = Some(slack);
        r.tolerance = Some(tol);
        r.satisfied = Some(slack >= -tol * scale);
        out.push(r);
    }
    Ok(out)
}

fn kinematic_suite(cfg: &CampaignConfig, bodies: &[BodyEntry]) -> Result<Vec<Record>> {
    let root = RandomStream::new(cfg.seed).split(KINEMATIC_STREAM);
    let mut out = Vec::new();
    for (n, (i, j)) in pairs(bodies).into_iter().enumerate() {
        let (k, l) = (&bodies[i], &bodies[j]);
        let est = kinematic_lhs(&k.body, &l.body, cfg.mc_samples, &root.split(n as u64))?;
        let rhs = kinematic_rhs(&k.body, &l.body)?;
        let tol = (KINEMATIC_Z * est.std_error).max(KINEMATIC_REL * rhs);
        let mut r = Record::new("kinematic", "kinematic_formula", k.kappa.value(), format!("{}+{}", k.id, l.id), cfg.seed);
        r.bound_value = Some(rhs);
        r.mc_mean = Some(est.mean);
        r.mc_stderr = Some(est.std_error);
        r.samples = Some(est.samples);
        r.slack = Some(tol - (est.mean - rhs).abs());
        r.tolerance = Some(tol);
        r.satisfied = Some((est.mean - rhs).abs() <= tol);
        out.push(r);
    }
    Ok(out)
}

fn containment_suite(cfg: &CampaignConfig, bodies: &[BodyEntry]) -> Result<Vec<Record>> {
    let root = RandomStream::new(cfg.seed).split(CONTAINMENT_STREAM);
    let pairs = pairs(bodies);
    let rows = map_indexed(pairs.len(), Execution::Parallel, |n| -> Result<Record> {
        let (i, j) = pairs[n];
        let (k, l) = (&bodies[i], &bodies[j]);
        let mut r = Record::new("containment", "containment_witness", k.kappa.value(), format!("{}+{}", k.id, l.id), cfg.seed);
        r.tolerance = Some(CONTAINMENT_MARGIN);
        if !k.body.has_interior() || !l.body.has_interior() {
            return Ok(r);
        }
        let slack = containment_slack(&k.body, &l.body)?;
        r.bound_value = Some(slack);
        r.slack = Some(slack);
        if slack >= CONTAINMENT_MARGIN {
            let w = find_containment(&k.body, &l.body, cfg.containment_budget, &mut root.split(n as u64))?;
            r.samples = Some(w.map_or(cfg.containment_budget, |w| w.evaluations));
            r.satisfied = Some(w.is_some());
        }
        Ok(r)
    });
    let mut out: Vec<Record> = rows.into_iter().collect::<Result<_>>()?;

    let nested_root = RandomStream::new(cfg.seed).split(NESTED_STREAM);
    let count = match cfg.bodies {
        BodySource::Random { count, .. } => count,
        _ => 0,
    };
    for (ki, &kv) in cfg.kappas.iter().enumerate() {
        let kappa = Curvature::new(kv)?;
        let stream = nested_root.split(ki as u64);
        let rows = map_indexed(count, Execution::Parallel, |j| -> Result<Record> {
            let (inner, outer) = nested_pair(kappa, 12, &mut stream.split(j as u64));
            let ok = monotonicity_probe(&inner, &outer)?;
            let mut r = Record::new("containment", "perimeter_monotonicity", kv, format!("nested{ki}.{j}"), cfg.seed);
            r.perimeter = Some(inner.perimeter());
            r.bound_value = Some(outer.perimeter());
            r.slack = Some(outer.perimeter() - inner.perimeter());
            r.tolerance = Some(1e-9);
            r.satisfied = Some(ok);
            Ok(r)
        });
        for r in rows {
            out.push(r?);
        }
    }
    Ok(out)
}

fn bonnesen_suite(cfg: &CampaignConfig, bodies: &[BodyEntry], ms: &[BodyMetrics]) -> Result<Vec<Record>> {
    let mut out = Vec::new();
    for (e, m) in bodies.iter().zip(ms) {
        let report = deficit_report(m)?;
        for b in &report.bounds {
            let mut r = with_metrics(Record::new("bonnesen", "bonnesen", e.kappa.value(), e.id.to_string(), cfg.seed), m);
            r.deficit = Some(b.lhs);
            r.bound_name = Some(b.name);
            r.bound_value = Some(b.value);
            r.tolerance = Some(SLACK_TOL * (1.0 + b.value.abs()));
            if b.applicable {
                r.slack = Some(b.slack());
                r.satisfied = Some(b.satisfied() == Some(true) && b.value >= -SLACK_TOL);
            }
            out.push(r);
        }
        if let Ok(w) = quadratic_witness(m) {
            let mut r = with_metrics(Record::new("bonnesen", "witness_roots", e.kappa.value(), e.id.to_string(), cfg.seed), m);
            r.deficit = Some(report.deficit);
            r.bound_value = Some(w.discriminant);
            r.slack = w.roots.map(|(lo, hi)| (w.bracket.0 - lo).min(hi - w.bracket.1));
            r.satisfied = Some(w.holds());
            out.push(r);
        }
    }
    Ok(out)
}

fn sweep_rows(cfg: &CampaignConfig, id: String, rows: &[SweepRow]) -> Vec<Record> {
    let mut out = Vec::new();
    for row in rows {
        let mut r = Record::new("sweep", "kappa_limit", row.kappa, id.clone(), cfg.seed);
        r.deficit = Some(row.deficit);
        r.bound_name = Some(row.bound_name);
        r.bound_value = Some(row.bound);
        r.slack = Some(-row.gap);
        r.tolerance = Some(SWEEP_FINAL_GAP);
        if row.kappa != 0.0 {
            let sign = row.kappa.signum();
            let same: Vec<&SweepRow> = rows.iter().filter(|o| o.kappa.signum() == sign && o.kappa != 0.0).collect();
            let larger = same.iter().filter(|o| o.kappa.abs() > row.kappa.abs()).all(|o| o.gap >= row.gap);
            let smallest = same.iter().all(|o| o.kappa.abs() >= row.kappa.abs());
            r.satisfied = Some(larger && (!smallest || row.gap < SWEEP_FINAL_GAP));
        }
        out.push(r);
    }
    out
}

fn sweep_suite(cfg: &CampaignConfig, bodies: &[BodyEntry]) -> Result<Vec<Record>> {
    let mut families: Vec<(String, Vec<(f64, f64)>)> = Vec::new();
    match cfg.bodies {
        BodySource::Random { .. } => families.push(("unit_square".into(), bodies::unit_square_polar())),
        _ => {
            for e in bodies.iter().filter(|e| e.body.has_interior()) {
                let data = e.body.vertices().iter().map(|v| v.polar()).collect();
                families.push((e.id.to_string(), data));
            }
        }
    }
    let mut out = Vec::new();
    for (id, data) in families {
        let rows = kappa_limit_sweep(|k| from_polar(k, &data), &SWEEP_KAPPAS)?;
        out.extend(sweep_rows(cfg, id, &rows));
    }
    Ok(out)
}

/// Runs the selected suites and writes one report per suite into
/// `cfg.output`.
pub fn run_campaign(cfg: &CampaignConfig) -> Result<Vec<SuiteOutcome>> {
    cfg.validate()?;
    let bodies = build_bodies(cfg)?;
    let needs_metrics = cfg.suites.iter().any(|s| matches!(s, Suite::Metrics | Suite::Bonnesen));
    let ms = if needs_metrics { all_metrics(&bodies)? } else { Vec::new() };
    std::fs::create_dir_all(&cfg.output)?;
    let mut outcomes = Vec::new();
    for &suite in &cfg.suites {
        let records = match suite {
            Suite::Metrics => metrics_suite(cfg, &bodies, &ms)?,
            Suite::Kinematic => kinematic_suite(cfg, &bodies)?,
            Suite::Containment => containment_suite(cfg, &bodies)?,
            Suite::Bonnesen => bonnesen_suite(cfg, &bodies, &ms)?,
            Suite::Sweep => sweep_suite(cfg, &bodies)?,
        };
        let path = cfg.output.join(format!("{}.{}", suite.name(), cfg.format.extension()));
        write_report(&path, cfg.format, &records)?;
        outcomes.push(SuiteOutcome { suite, path, records });
    }
    Ok(outcomes)
}
