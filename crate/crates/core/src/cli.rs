//! Everything the command-line front end does that is worth testing without
//! a process boundary: trade-off tables, front and Gantt exports, run
//! manifests and the solve pipeline that ties them together.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::decode::{schedule_record, ObjectiveVector, Schedule, ScheduleRecord};
use crate::error::{Error, Result};
use crate::evolve::{self, EvolveConfig, Refiner};
use crate::exact::{Objective, ParetoFront};
use crate::model::{
    benchmark, enrich, generate_synthetic_profile, load_energy_profile, parse_instance,
    EnergyProfile, EnrichedInstance, Instance, SyntheticMarket, DEFAULT_BASE_DEMAND_KW,
};
use crate::refine::GreedyRefiner;

impl FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ms" | "makespan" => Ok(Objective::Makespan),
            "ec" | "cost" | "energy-cost" => Ok(Objective::Cost),
            "em" | "emissions" => Ok(Objective::Emissions),
            other => Err(Error::Parameter(format!(
                "unknown objective {other:?}, expected ms, ec or em"
            ))),
        }
    }
}

impl Objective {
    pub fn short(self) -> &'static str {
        match self {
            Objective::Makespan => "ms",
            Objective::Cost => "ec",
            Objective::Emissions => "em",
        }
    }

    pub fn value(self, v: &ObjectiveVector) -> f64 {
        match self {
            Objective::Makespan => v.makespan as f64,
            Objective::Cost => v.energy_cost,
            Objective::Emissions => v.emissions,
        }
    }
}

pub const DEFAULT_DELTAS: [f64; 4] = [5.0, 20.0, 50.0, 75.0];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TradeoffRow {
    pub delta_percent: f64,
    /// Largest admitted value of axis A.
    pub threshold: f64,
    /// Best axis B value among members within the threshold.
    pub best_b: f64,
    pub savings_percent: f64,
}

/// Savings on axis B bought by letting axis A grow by each relative step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TradeoffReport {
    pub axis_a: Objective,
    pub axis_b: Objective,
    pub baseline_a: f64,
    pub baseline_b: f64,
    pub rows: Vec<TradeoffRow>,
}

/// Builds a trade-off table over the given front points.
///
/// The baseline is the best axis-A value and, among the members attaining it,
/// the best axis-B value. A member qualifies for step `d` when its axis-A
/// value is at most `baseline_a * (1 + d/100)`; no interpolation between
/// members. Savings use `|baseline_b|` as denominator and are 0 when the
/// baseline is 0.
pub fn tradeoff_table(
    points: &[ObjectiveVector],
    axis_a: Objective,
    axis_b: Objective,
    deltas: &[f64],
) -> Result<TradeoffReport> {
    if points.is_empty() {
        return Err(Error::Report("front is empty".into()));
    }
    if let Some(d) = deltas.iter().find(|d| !(d.is_finite() && **d >= 0.0)) {
        return Err(Error::Report(format!(
            "increase {d} is not a non-negative percentage"
        )));
    }
    let a = |v: &ObjectiveVector| axis_a.value(v);
    let b = |v: &ObjectiveVector| axis_b.value(v);
    let baseline_a = points.iter().map(a).fold(f64::INFINITY, f64::min);
    let baseline_b = points
        .iter()
        .filter(|v| a(v) == baseline_a)
        .map(b)
        .fold(f64::INFINITY, f64::min);
    let rows = deltas
        .iter()
        .map(|&d| {
            let threshold = baseline_a * (100.0 + d) / 100.0;
            // compare as a*100 <= base*(100+d) to keep integer makespans exact
            let limit = baseline_a * (100.0 + d);
            let best_b = points
                .iter()
                .filter(|v| a(v) * 100.0 <= limit + limit.abs() * 1e-12)
                .map(b)
                .fold(baseline_b, f64::min);
            let savings_percent = if baseline_b == 0.0 {
                0.0
            } else {
                (baseline_b - best_b) / baseline_b.abs() * 100.0
            };
            TradeoffRow {
                delta_percent: d,
                threshold,
                best_b,
                savings_percent,
            }
        })
        .collect();
    Ok(TradeoffReport {
        axis_a,
        axis_b,
        baseline_a,
        baseline_b,
        rows,
    })
}

impl TradeoffReport {
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{} -> {}: baseline {} = {}, {} = {}\n",
            self.axis_a.short(),
            self.axis_b.short(),
            self.axis_a.short(),
            self.baseline_a,
            self.axis_b.short(),
            self.baseline_b
        );
        for r in &self.rows {
            let _ = writeln!(
                out,
                "  +{:>5.1}%  {} <= {:<12.4} best {} = {:<14.4} savings {:6.2}%",
                r.delta_percent,
                self.axis_a.short(),
                r.threshold,
                self.axis_b.short(),
                r.best_b,
                r.savings_percent
            );
        }
        out
    }
}

/// The three standard analyses: makespan against cost, makespan against
/// emissions, cost against emissions.
pub fn standard_tradeoffs(points: &[ObjectiveVector]) -> Result<Vec<TradeoffReport>> {
    [
        (Objective::Makespan, Objective::Cost),
        (Objective::Makespan, Objective::Emissions),
        (Objective::Cost, Objective::Emissions),
    ]
    .into_iter()
    .map(|(a, b)| tradeoff_table(points, a, b, &DEFAULT_DELTAS))
    .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrontFormat {
    Csv,
    Json,
}

/// JSON form of a front: one schedule record per member, canonical order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrontRecord {
    pub members: Vec<ScheduleRecord>,
}

pub const FRONT_CSV_HEADER: &str = "makespan,energy_cost_eur,emissions_g,emissions_t";

/// Shortest round-trip decimal, always with a fractional part.
fn decimal(x: f64) -> String {
    let s = x.to_string();
    if s.contains(['.', 'e', 'N', 'i']) {
        s
    } else {
        s + ".0"
    }
}

/// CSV of objective triples; tons are grams / 1e6.
pub fn front_csv(points: &[ObjectiveVector]) -> String {
    let mut out = String::from(FRONT_CSV_HEADER);
    out.push('\n');
    for p in points {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            p.makespan,
            decimal(p.energy_cost),
            p.emissions,
            p.emissions / 1e6
        );
    }
    out
}

pub fn export_front(front: &ParetoFront, e: &EnrichedInstance, format: FrontFormat) -> String {
    match format {
        FrontFormat::Csv => front_csv(&front.objectives()),
        FrontFormat::Json => {
            let record = FrontRecord {
                members: front
                    .members
                    .iter()
                    .map(|m| schedule_record(&m.schedule, e))
                    .collect(),
            };
            serde_json::to_string_pretty(&record).expect("front records serialize") + "\n"
        }
    }
}

pub fn parse_front_csv(text: &str) -> Result<Vec<ObjectiveVector>> {
    let mut reader = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| Error::Format(e.to_string()))?
        .clone();
    if headers.iter().collect::<Vec<_>>().join(",") != FRONT_CSV_HEADER {
        return Err(Error::Format(format!(
            "unexpected front header {headers:?}"
        )));
    }
    let mut out = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let row = row.map_err(|e| Error::Format(e.to_string()))?;
        let field = |k: usize| -> Result<&str> {
            row.get(k)
                .ok_or_else(|| Error::Format(format!("row {} is short", i + 2)))
        };
        let bad = |k: usize| Error::Format(format!("row {}: bad value in column {}", i + 2, k + 1));
        let makespan = field(0)?.parse::<usize>().map_err(|_| bad(0))?;
        let cost = field(1)?.parse::<f64>().map_err(|_| bad(1))?;
        let emissions = field(2)?.parse::<f64>().map_err(|_| bad(2))?;
        out.push(ObjectiveVector::new(makespan, cost, emissions));
    }
    Ok(out)
}

pub fn parse_front_json(text: &str) -> Result<FrontRecord> {
    serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
}

/// Objective triples of a front file in either export format.
pub fn parse_front(text: &str) -> Result<Vec<ObjectiveVector>> {
    if text.trim_start().starts_with('{') {
        Ok(parse_front_json(text)?
            .members
            .iter()
            .map(|m| m.objectives.into())
            .collect())
    } else {
        parse_front_csv(text)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GanttBar {
    pub job: usize,
    pub op: usize,
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GanttLane {
    pub machine: usize,
    pub bars: Vec<GanttBar>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GanttSeries {
    pub name: String,
    pub unit: String,
    /// Suggested line style.
    pub style: String,
    pub values: Vec<f64>,
}

/// Plot-ready schedule: one lane per machine (one-based) with its bars in
/// start order, and the price and emission series over the used horizon.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GanttChart {
    pub step_minutes: u32,
    pub horizon_used: usize,
    pub makespan: usize,
    pub lanes: Vec<GanttLane>,
    pub series: Vec<GanttSeries>,
}

pub fn export_gantt(s: &Schedule, e: &EnrichedInstance) -> GanttChart {
    let inst = e.instance();
    let lanes = s
        .machine_sequences(inst.machine_count())
        .into_iter()
        .enumerate()
        .map(|(m, seq)| GanttLane {
            machine: m + 1,
            bars: seq
                .into_iter()
                .map(|op| {
                    let (i, j) = inst.op_ref(op);
                    GanttBar {
                        job: i + 1,
                        op: j + 1,
                        start: s.ops[op].start,
                        end: s.ops[op].end,
                    }
                })
                .collect(),
        })
        .collect();
    let horizon = s.horizon_used.max(e.horizon());
    let p = e.profile();
    GanttChart {
        step_minutes: p.step_minutes(),
        horizon_used: horizon,
        makespan: s.makespan(),
        lanes,
        series: vec![
            GanttSeries {
                name: "price".into(),
                unit: "EUR/MWh".into(),
                style: "dashed".into(),
                values: (0..horizon).map(|t| p.price_at(t)).collect(),
            },
            GanttSeries {
                name: "emission".into(),
                unit: "g/kWh".into(),
                style: "dotted".into(),
                values: (0..horizon).map(|t| p.emission_at(t)).collect(),
            },
        ],
    }
}

/// Where the instance of a run came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InstanceSource {
    File {
        path: PathBuf,
    },
    /// A named benchmark, resolved from the benchmark directory when set
    /// and otherwise generated with the given seed.
    Benchmark {
        name: String,
        surrogate_seed: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MarketSource {
    Csv { path: PathBuf },
    Synthetic(SyntheticMarket),
}

/// Everything a solve needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveRequest {
    pub instance: InstanceSource,
    pub market: MarketSource,
    pub step_minutes: u32,
    pub base_demand_kw: f64,
    /// Truncate or tile the profile to this many steps.
    pub steps: Option<usize>,
    pub config: EvolveConfig,
}

impl SolveRequest {
    pub fn new(instance: InstanceSource, market: MarketSource) -> Self {
        Self {
            instance,
            market,
            step_minutes: 15,
            base_demand_kw: DEFAULT_BASE_DEMAND_KW,
            steps: None,
            config: EvolveConfig::default(),
        }
    }
}

/// Record written next to every solve's outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub version: String,
    pub request: SolveRequest,
    pub generations_completed: usize,
    pub stopped_by_time: bool,
    pub elapsed_seconds: f64,
    pub front_size: usize,
}

impl RunManifest {
    /// Request that repeats the run exactly: the completed generation count
    /// becomes the limit and the wall clock no longer matters.
    pub fn replay_request(&self) -> SolveRequest {
        let mut req = self.request.clone();
        req.config.generation_limit = self.generations_completed;
        req.config.runtime_limit_seconds = None;
        req
    }
}

/// File contents produced by one solve.
#[derive(Debug, Clone)]
pub struct SolveArtifacts {
    pub front: ParetoFront,
    pub front_json: String,
    pub front_csv: String,
    pub gantt_json: String,
    pub tradeoffs_json: String,
    pub tradeoffs_text: String,
    pub manifest: RunManifest,
}

impl SolveArtifacts {
    /// Writes every artifact into `dir`, creating it if needed.
    pub fn write_to(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
        let manifest =
            serde_json::to_string_pretty(&self.manifest).expect("manifest serializes") + "\n";
        for (name, body) in [
            ("front.json", &self.front_json),
            ("front.csv", &self.front_csv),
            ("gantt.json", &self.gantt_json),
            ("tradeoffs.json", &self.tradeoffs_json),
            ("tradeoffs.txt", &self.tradeoffs_text),
            ("manifest.json", &manifest),
        ] {
            let path = dir.join(name);
            std::fs::write(&path, body)
                .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        }
        Ok(())
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn load_instance(source: &InstanceSource) -> Result<Instance> {
    match source {
        InstanceSource::File { path } => parse_instance(&read(path)?),
        InstanceSource::Benchmark {
            name,
            surrogate_seed,
        } => benchmark::load_benchmark(name, *surrogate_seed).map(|(inst, _)| inst),
    }
}

pub fn load_profile(
    market: &MarketSource,
    step_minutes: u32,
    steps: Option<usize>,
) -> Result<EnergyProfile> {
    let profile = match market {
        MarketSource::Csv { path } => load_energy_profile(&read(path)?, step_minutes)?,
        MarketSource::Synthetic(params) => {
            if step_minutes == 15 {
                generate_synthetic_profile(params)?
            } else {
                params.generate()?.expand(step_minutes)?
            }
        }
    };
    match steps {
        Some(0) => Err(Error::Parameter("profile needs at least one step".into())),
        Some(n) => Ok(profile.resized(n)),
        None => Ok(profile),
    }
}

pub fn load_enriched(req: &SolveRequest) -> Result<EnrichedInstance> {
    let instance = load_instance(&req.instance)?;
    let profile = load_profile(&req.market, req.step_minutes, req.steps)?;
    enrich(instance, profile, req.base_demand_kw)
}

/// Runs the engine and renders every export.
pub fn solve(req: &SolveRequest) -> Result<SolveArtifacts> {
    let e = load_enriched(req)?;
    let refiner = GreedyRefiner;
    let refiner: Option<&dyn Refiner> = if req.config.refine {
        Some(&refiner)
    } else {
        None
    };
    let run = evolve::run(&e, &req.config, refiner)?;
    render(
        req,
        &e,
        run.front,
        run.generations,
        run.stopped_by_time,
        run.elapsed,
    )
}

fn render(
    req: &SolveRequest,
    e: &EnrichedInstance,
    front: ParetoFront,
    generations: usize,
    stopped_by_time: bool,
    elapsed: Duration,
) -> Result<SolveArtifacts> {
    let points = front.objectives();
    let (tradeoffs_json, tradeoffs_text) = if points.is_empty() {
        ("[]\n".to_string(), String::new())
    } else {
        let reports = standard_tradeoffs(&points)?;
        (
            serde_json::to_string_pretty(&reports).expect("reports serialize") + "\n",
            reports
                .iter()
                .map(TradeoffReport::to_text)
                .collect::<Vec<_>>()
                .join("\n"),
        )
    };
    let empty = Schedule {
        ops: Vec::new(),
        horizon_used: e.horizon(),
    };
    let lead = front.members.first().map_or(&empty, |m| &m.schedule);
    let gantt_json =
        serde_json::to_string_pretty(&export_gantt(lead, e)).expect("chart serializes") + "\n";
    Ok(SolveArtifacts {
        front_json: export_front(&front, e, FrontFormat::Json),
        front_csv: export_front(&front, e, FrontFormat::Csv),
        gantt_json,
        tradeoffs_json,
        tradeoffs_text,
        manifest: RunManifest {
            version: env!("CARGO_PKG_VERSION").to_string(),
            request: req.clone(),
            generations_completed: generations,
            stopped_by_time,
            elapsed_seconds: elapsed.as_secs_f64(),
            front_size: front.len(),
        },
        front,
    })
}
