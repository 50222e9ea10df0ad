//! C ABI for the platoon-game simulator.
//!
//! Scenarios and run outcomes are opaque handles owned by the caller and
//! released with the matching `*_free` function. Every fallible call returns
//! a [`PgStatus`]; on failure the message is available from
//! [`pg_last_error_message`] on the same thread.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use platoon_game::error::GameError;
use platoon_game::learning::{run, Trace};
use platoon_game::metrics::{emit, optimal_social_cost, OutputFormat, Summary};
use platoon_game::potential::{check_exactness, PotentialKind};
use platoon_game::game::{Game, VelocityModel};
use platoon_game::scenario::ScenarioSpec;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PgStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Io = 3,
    Parse = 4,
    Validation = 5,
    Policy = 6,
    Guard = 7,
    Panic = 8,
}

/// A loaded scenario.
pub struct PgScenario {
    spec: ScenarioSpec,
}

/// The result of one learning run.
pub struct PgOutcome {
    trace: Trace,
    summary: Summary,
    formats: Vec<OutputFormat>,
}

/// Scalar part of a run summary.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PgSummary {
    pub s_nash: f64,
    pub s_optimal: f64,
    pub s_preference: f64,
    pub ratio_nash: f64,
    pub ratio_preference: f64,
    pub iterations: u64,
    /// Day of certification, or -1 when the run did not certify.
    pub certified_at: i64,
    pub converged: bool,
    pub max_truck_concentration: u32,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &GameError) -> PgStatus {
    match err {
        GameError::InvalidProfile(_) | GameError::InvalidConfig { .. } => PgStatus::Validation,
        GameError::Policy(_) => PgStatus::Policy,
        GameError::SizeGuard { .. } => PgStatus::Guard,
        GameError::Parse { .. } => PgStatus::Parse,
        GameError::Io { .. } => PgStatus::Io,
    }
}

enum Failure {
    Status(PgStatus, String),
    Game(GameError),
}

impl From<GameError> for Failure {
    fn from(e: GameError) -> Self {
        Failure::Game(e)
    }
}

fn null(name: &str) -> Failure {
    Failure::Status(PgStatus::NullArgument, format!("{name} is null"))
}

fn guarded(f: impl FnOnce() -> Result<(), Failure>) -> PgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PgStatus::Ok,
        Ok(Err(Failure::Status(status, message))) => {
            set_last_error(message);
            status
        }
        Ok(Err(Failure::Game(e))) => {
            set_last_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_last_error("internal panic".into());
            PgStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const libc::c_char, name: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(name));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure::Status(PgStatus::InvalidUtf8, format!("{name} is not valid UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, name: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(name))
}

/// Message of the last failed call on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn pg_last_error_message() -> *const libc::c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn pg_version() -> *const libc::c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Loads and validates a scenario file.
///
/// # Safety
/// `path` must be a valid NUL-terminated string and `out` a valid pointer
/// to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn pg_scenario_load(path: *const libc::c_char, out: *mut *mut PgScenario) -> PgStatus {
    guarded(|| {
        let path = str_arg(path, "path")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let spec = ScenarioSpec::load(Path::new(path))?;
        *out = Box::into_raw(Box::new(PgScenario { spec }));
        Ok(())
    })
}

/// Parses and validates a scenario from a JSON document.
///
/// # Safety
/// Same contract as [`pg_scenario_load`], with `json` holding the document.
#[no_mangle]
pub unsafe extern "C" fn pg_scenario_from_json(json: *const libc::c_char, out: *mut *mut PgScenario) -> PgStatus {
    guarded(|| {
        let json = str_arg(json, "json")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let (spec, _) = ScenarioSpec::parse(json, Path::new("<memory>"))?;
        *out = Box::into_raw(Box::new(PgScenario { spec }));
        Ok(())
    })
}

/// The built-in default scenario. Never NULL.
#[no_mangle]
pub extern "C" fn pg_scenario_paper_default() -> *mut PgScenario {
    Box::into_raw(Box::new(PgScenario {
        spec: ScenarioSpec::paper_default(),
    }))
}

/// # Safety
/// `scenario` must be NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pg_scenario_free(scenario: *mut PgScenario) {
    if !scenario.is_null() {
        drop(Box::from_raw(scenario));
    }
}

/// # Safety
/// `scenario` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn pg_scenario_set_seed(scenario: *mut PgScenario, seed: u64) -> PgStatus {
    guarded(|| {
        let s = scenario.as_mut().ok_or_else(|| null("scenario"))?;
        s.spec.seed = seed;
        Ok(())
    })
}

/// # Safety
/// `scenario` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn pg_scenario_set_max_iters(scenario: *mut PgScenario, max_iters: u64) -> PgStatus {
    guarded(|| {
        let s = scenario.as_mut().ok_or_else(|| null("scenario"))?;
        s.spec.learner.max_iters = max_iters as usize;
        Ok(())
    })
}

/// Serializes the scenario to JSON. Free the string with [`pg_string_free`].
///
/// # Safety
/// `scenario` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pg_scenario_to_json(scenario: *const PgScenario, out: *mut *mut libc::c_char) -> PgStatus {
    guarded(|| {
        let s = handle(scenario, "scenario")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let json = CString::new(s.spec.to_json()).expect("JSON has no NUL bytes");
        *out = json.into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must be NULL or a string returned by this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pg_string_free(s: *mut libc::c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Samples the population and runs the configured learner. A run that
/// stops at the iteration cap still succeeds; check `converged`.
///
/// # Safety
/// `scenario` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pg_run(scenario: *const PgScenario, out: *mut *mut PgOutcome) -> PgStatus {
    guarded(|| {
        let s = handle(scenario, "scenario")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let spec = &s.spec;
        let game = spec.build_game()?;
        let trace = run(&game, spec.learner, spec.perturbations.clone(), spec.seed)?;
        let summary = Summary::from_trace(&game, &trace)?;
        *out = Box::into_raw(Box::new(PgOutcome {
            trace,
            summary,
            formats: spec.output.formats.clone(),
        }));
        Ok(())
    })
}

/// # Safety
/// `outcome` must be NULL or a handle from [`pg_run`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pg_outcome_free(outcome: *mut PgOutcome) {
    if !outcome.is_null() {
        drop(Box::from_raw(outcome));
    }
}

/// # Safety
/// `outcome` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pg_outcome_summary(outcome: *const PgOutcome, out: *mut PgSummary) -> PgStatus {
    guarded(|| {
        let o = handle(outcome, "outcome")?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let s = &o.summary;
        *out = PgSummary {
            s_nash: s.s_nash,
            s_optimal: s.s_optimal,
            s_preference: s.s_preference,
            ratio_nash: s.ratio_nash,
            ratio_preference: s.ratio_preference,
            iterations: s.iterations as u64,
            certified_at: s.certified_at.map_or(-1, |t| t as i64),
            converged: s.converged,
            max_truck_concentration: s.max_truck_concentration,
        };
        Ok(())
    })
}

/// Number of intervals, the length expected by [`pg_outcome_final_occupancy`].
///
/// # Safety
/// `outcome` must be NULL or a live handle; NULL yields 0.
#[no_mangle]
pub unsafe extern "C" fn pg_outcome_intervals(outcome: *const PgOutcome) -> usize {
    outcome.as_ref().map_or(0, |o| o.summary.final_n.len())
}

/// Copies the final vehicle and truck counts per interval.
///
/// # Safety
/// `vehicles` and `trucks` must each point to `len` writable `uint32_t`.
#[no_mangle]
pub unsafe extern "C" fn pg_outcome_final_occupancy(
    outcome: *const PgOutcome,
    vehicles: *mut u32,
    trucks: *mut u32,
    len: usize,
) -> PgStatus {
    guarded(|| {
        let o = handle(outcome, "outcome")?;
        if vehicles.is_null() || trucks.is_null() {
            return Err(null("vehicles/trucks"));
        }
        let r = o.summary.final_n.len();
        if len != r {
            return Err(Failure::Status(
                PgStatus::Validation,
                format!("buffer length {len} does not match {r} intervals"),
            ));
        }
        ptr::copy_nonoverlapping(o.summary.final_n.as_ptr(), vehicles, r);
        ptr::copy_nonoverlapping(o.summary.final_m.as_ptr(), trucks, r);
        Ok(())
    })
}

/// Writes the scenario's output files for this run into `dir`.
///
/// # Safety
/// `outcome` must be a live handle and `dir` a NUL-terminated path.
#[no_mangle]
pub unsafe extern "C" fn pg_outcome_emit(outcome: *const PgOutcome, dir: *const libc::c_char) -> PgStatus {
    guarded(|| {
        let o = handle(outcome, "outcome")?;
        let dir = str_arg(dir, "dir")?;
        emit(&o.trace, &o.summary, Path::new(dir), &o.formats)?;
        Ok(())
    })
}

/// Best achievable worst-interval velocity for the given counts.
#[no_mangle]
pub extern "C" fn pg_optimal_social_cost(cars: usize, trucks: usize, intervals: usize, a: f64, b: f64) -> f64 {
    if intervals == 0 {
        return f64::NAN;
    }
    optimal_social_cost(cars, trucks, intervals, &VelocityModel { a, b })
}

/// Runs `trials` random unilateral deviations and stores the largest
/// mismatch between potential and utility changes in `max_error`. Fails
/// with `Policy` when the scenario's pricing has no potential.
///
/// # Safety
/// `scenario` must be a live handle and `max_error` writable.
#[no_mangle]
pub unsafe extern "C" fn pg_verify_potential(
    scenario: *const PgScenario,
    trials: u64,
    max_error: *mut f64,
) -> PgStatus {
    guarded(|| {
        let s = handle(scenario, "scenario")?;
        let out = max_error.as_mut().ok_or_else(|| null("max_error"))?;
        let game: Game = s.spec.build_game()?;
        let kind = PotentialKind::for_policy(&game.config().policy).ok_or_else(|| {
            GameError::Policy(format!("no potential for the {} policy", game.config().policy.name()))
        })?;
        let mut rng = ChaCha8Rng::seed_from_u64(s.spec.seed);
        rng.set_stream(u64::MAX);
        *out = check_exactness(kind, &game, trials as usize, &mut rng)?.max_error;
        Ok(())
    })
}
