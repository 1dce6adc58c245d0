//! C interface to the ecofjsp scheduler.
//!
//! Problems and fronts are opaque handles created and released through this
//! API. Every fallible function returns an [`EcofjspStatus`]; on failure the
//! message is available from [`ecofjsp_last_error`] on the same thread.
//! Indices are zero-based. Strings handed out by the library must be
//! released with [`ecofjsp_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use ecofjsp::cli::{export_front, FrontFormat};
use ecofjsp::exact::{BruteForceLimits, MilpEmission, Objective};
use ecofjsp::model::{
    enrich, generate_synthetic_profile, load_energy_profile, parse_instance, EnrichedInstance,
    SyntheticMarket,
};
use ecofjsp::{Error, EvolveConfig, GreedyRefiner, ParetoFront};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EcofjspStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    Io = 4,
    Validation = 5,
    Limit = 6,
    Internal = 7,
    Panic = 8,
}

/// Objective minimized by an emitted MILP.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EcofjspObjective {
    Makespan = 0,
    Cost = 1,
    Emissions = 2,
}

/// An instance with its energy profile and per-job demand.
pub struct EcofjspProblem {
    inner: EnrichedInstance,
}

/// A Pareto front with witness schedules.
pub struct EcofjspFront {
    inner: ParetoFront,
    json: String,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(err: &Error) -> EcofjspStatus {
    match err {
        Error::Parse { .. } | Error::Ingest { .. } | Error::Format(_) => EcofjspStatus::Parse,
        Error::Parameter(_)
        | Error::Horizon { .. }
        | Error::UndefinedCorrelation(_)
        | Error::Report(_) => EcofjspStatus::InvalidArgument,
        Error::Validation(_) => EcofjspStatus::Validation,
        Error::Limit(_) => EcofjspStatus::Limit,
        Error::Io(_) => EcofjspStatus::Io,
        Error::Selection(_) => EcofjspStatus::Internal,
    }
}

struct Failure(EcofjspStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(EcofjspStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, records any failure or panic and converts it to a status.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> EcofjspStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            EcofjspStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(&format!("internal panic: {msg}"));
            EcofjspStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        Failure(
            EcofjspStatus::InvalidArgument,
            format!("{what} is not UTF-8"),
        )
    })
}

unsafe fn problem_ref<'a>(p: *const EcofjspProblem) -> Result<&'a EnrichedInstance, Failure> {
    p.as_ref().map(|p| &p.inner).ok_or_else(|| null("problem"))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(what))
}

fn hand_out(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| Failure(EcofjspStatus::Internal, "output contains a NUL byte".into()))
}

/// Message of the last failed call on this thread, or an empty string. The
/// pointer stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn ecofjsp_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Builds a problem from instance text and an hourly market CSV.
///
/// # Safety
/// `instance_text` and `market_csv` must be NUL-terminated strings; `out`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn ecofjsp_problem_load(
    instance_text: *const c_char,
    market_csv: *const c_char,
    step_minutes: u32,
    base_demand_kw: f64,
    out_problem: *mut *mut EcofjspProblem,
) -> EcofjspStatus {
    guard(|| {
        let slot = out(out_problem, "out_problem")?;
        let inst = parse_instance(text(instance_text, "instance_text")?)?;
        let profile = load_energy_profile(text(market_csv, "market_csv")?, step_minutes)?;
        let inner = enrich(inst, profile, base_demand_kw)?;
        *slot = Box::into_raw(Box::new(EcofjspProblem { inner }));
        Ok(())
    })
}

/// Builds a problem from instance text and a seeded synthetic market of
/// `hours` hours at 15-minute resolution, optionally cut or tiled to `steps`
/// steps (0 keeps the full length).
///
/// # Safety
/// `instance_text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ecofjsp_problem_synthetic(
    instance_text: *const c_char,
    seed: u64,
    hours: usize,
    steps: usize,
    out_problem: *mut *mut EcofjspProblem,
) -> EcofjspStatus {
    guard(|| {
        let slot = out(out_problem, "out_problem")?;
        let inst = parse_instance(text(instance_text, "instance_text")?)?;
        let mut profile = generate_synthetic_profile(&SyntheticMarket {
            seed,
            hours,
            ..SyntheticMarket::default()
        })?;
        if steps > 0 {
            profile = profile.resized(steps);
        }
        let inner = enrich(inst, profile, ecofjsp::model::DEFAULT_BASE_DEMAND_KW)?;
        *slot = Box::into_raw(Box::new(EcofjspProblem { inner }));
        Ok(())
    })
}

/// Releases a problem; null is ignored.
///
/// # Safety
/// `problem` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ecofjsp_problem_free(problem: *mut EcofjspProblem) {
    if !problem.is_null() {
        drop(Box::from_raw(problem));
    }
}

/// Job, machine, operation and time-step counts.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ecofjsp_problem_counts(
    problem: *const EcofjspProblem,
    jobs: *mut usize,
    machines: *mut usize,
    operations: *mut usize,
    steps: *mut usize,
) -> EcofjspStatus {
    guard(|| {
        let e = problem_ref(problem)?;
        *out(jobs, "jobs")? = e.instance().job_count();
        *out(machines, "machines")? = e.instance().machine_count();
        *out(operations, "operations")? = e.instance().total_operations();
        *out(steps, "steps")? = e.horizon();
        Ok(())
    })
}

/// Energy cost (EUR) and emissions (gCO2eq) of operation `(job, position)`
/// on `machine` starting at `start`.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ecofjsp_op_cost(
    problem: *const EcofjspProblem,
    job: usize,
    position: usize,
    machine: usize,
    start: usize,
    cost_eur: *mut f64,
    emissions_g: *mut f64,
) -> EcofjspStatus {
    guard(|| {
        let c = problem_ref(problem)?.op_cost(job, position, machine, start)?;
        *out(cost_eur, "cost_eur")? = c.cost;
        *out(emissions_g, "emissions_g")? = c.emissions;
        Ok(())
    })
}

fn front_handle(inner: ParetoFront, e: &EnrichedInstance) -> *mut EcofjspFront {
    let json = export_front(&inner, e, FrontFormat::Json);
    Box::into_raw(Box::new(EcofjspFront { inner, json }))
}

/// Runs the memetic NSGA-III. `config_text` holds optional `key = value`
/// lines (null for defaults); a non-zero `generations` overrides the
/// generation limit.
///
/// # Safety
/// `problem` must be valid, `config_text` null or NUL-terminated, `out_front`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn ecofjsp_solve(
    problem: *const EcofjspProblem,
    config_text: *const c_char,
    seed: u64,
    generations: usize,
    out_front: *mut *mut EcofjspFront,
) -> EcofjspStatus {
    guard(|| {
        let e = problem_ref(problem)?;
        let slot = out(out_front, "out_front")?;
        let mut cfg = if config_text.is_null() {
            EvolveConfig::default()
        } else {
            EvolveConfig::from_config_str(text(config_text, "config_text")?)?
        };
        cfg.seed = seed;
        if generations > 0 {
            cfg.generation_limit = generations;
        }
        let refiner = GreedyRefiner;
        let run = ecofjsp::run(
            e,
            &cfg,
            cfg.refine
                .then_some(&refiner as &dyn ecofjsp::evolve::Refiner),
        )?;
        *slot = front_handle(run.front, e);
        Ok(())
    })
}

/// Exact front by enumeration; refuses instances over the given limits.
///
/// # Safety
/// `problem` must be valid and `out_front` writable.
#[no_mangle]
pub unsafe extern "C" fn ecofjsp_brute_force(
    problem: *const EcofjspProblem,
    max_ops: usize,
    max_horizon: usize,
    out_front: *mut *mut EcofjspFront,
) -> EcofjspStatus {
    guard(|| {
        let e = problem_ref(problem)?;
        let slot = out(out_front, "out_front")?;
        let front = ecofjsp::brute_force_pareto(
            e,
            BruteForceLimits {
                max_ops,
                max_horizon,
            },
        )?;
        *slot = front_handle(front, e);
        Ok(())
    })
}

/// Number of front members; 0 for null.
///
/// # Safety
/// `front` must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn ecofjsp_front_len(front: *const EcofjspFront) -> usize {
    front.as_ref().map_or(0, |f| f.inner.len())
}

/// Objectives of member `index`.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ecofjsp_front_objectives(
    front: *const EcofjspFront,
    index: usize,
    makespan: *mut usize,
    cost_eur: *mut f64,
    emissions_g: *mut f64,
) -> EcofjspStatus {
    guard(|| {
        let f = front.as_ref().ok_or_else(|| null("front"))?;
        let m = f.inner.members.get(index).ok_or_else(|| {
            Failure(
                EcofjspStatus::InvalidArgument,
                format!(
                    "index {index} out of range for a front of {}",
                    f.inner.len()
                ),
            )
        })?;
        *out(makespan, "makespan")? = m.objectives.makespan;
        *out(cost_eur, "cost_eur")? = m.objectives.energy_cost;
        *out(emissions_g, "emissions_g")? = m.objectives.emissions;
        Ok(())
    })
}

/// JSON export of the front with every schedule; release with
/// [`ecofjsp_string_free`].
///
/// # Safety
/// `front` must be valid and `out_json` writable.
#[no_mangle]
pub unsafe extern "C" fn ecofjsp_front_json(
    front: *const EcofjspFront,
    out_json: *mut *mut c_char,
) -> EcofjspStatus {
    guard(|| {
        let f = front.as_ref().ok_or_else(|| null("front"))?;
        let slot = out(out_json, "out_json")?;
        *slot = hand_out(f.json.clone())?;
        Ok(())
    })
}

/// Releases a front; null is ignored.
///
/// # Safety
/// `front` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ecofjsp_front_free(front: *mut EcofjspFront) {
    if !front.is_null() {
        drop(Box::from_raw(front));
    }
}

/// Mixed-integer model in LP format minimizing `objective`, refusing models
/// with more than `max_variables` start indicators (0 uses the default).
///
/// # Safety
/// `problem` must be valid and `out_lp` writable.
#[no_mangle]
pub unsafe extern "C" fn ecofjsp_emit_milp(
    problem: *const EcofjspProblem,
    objective: EcofjspObjective,
    max_variables: usize,
    out_lp: *mut *mut c_char,
) -> EcofjspStatus {
    guard(|| {
        let e = problem_ref(problem)?;
        let slot = out(out_lp, "out_lp")?;
        let mut m = MilpEmission::new(match objective {
            EcofjspObjective::Makespan => Objective::Makespan,
            EcofjspObjective::Cost => Objective::Cost,
            EcofjspObjective::Emissions => Objective::Emissions,
        });
        if max_variables > 0 {
            m.max_variables = max_variables;
        }
        *slot = hand_out(ecofjsp::exact::emit_milp(e, &m)?)?;
        Ok(())
    })
}

/// Releases a string returned by the library; null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ecofjsp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
