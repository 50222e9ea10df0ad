use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::asfp::{asfp_step, AsfpParams, AsfpState};
use super::jsfp::{jsfp_step, JsfpParams, JsfpState};
use super::{Environment, ForgettingSchedule, Inertia, Perturbation, StepReport};
use crate::error::{GameError, Result};
use crate::game::{nash_check_with, ActionProfile, DayConditions, Deviation, Game, Occupancy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Jsfp,
    Asfp,
}

impl std::str::FromStr for Algorithm {
    type Err = GameError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "jsfp" => Ok(Algorithm::Jsfp),
            "asfp" => Ok(Algorithm::Asfp),
            other => Err(GameError::config(
                "learner.algorithm",
                format!("unknown algorithm {other:?}"),
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LearnerParams {
    pub algorithm: Algorithm,
    pub inertia: f64,
    pub forgetting: ForgettingSchedule,
    pub max_iters: usize,
    /// Consecutive unchanged days required before the profile is certified.
    pub stability_window: usize,
}

impl LearnerParams {
    pub fn validate(&self) -> Result<()> {
        Inertia::new(self.inertia)?;
        self.forgetting.validate()?;
        if self.algorithm == Algorithm::Asfp
            && !matches!(self.forgetting, ForgettingSchedule::Constant { .. })
        {
            return Err(GameError::config(
                "learner.forgetting",
                "average strategy fictitious play needs a constant forgetting factor",
            ));
        }
        if self.stability_window == 0 {
            return Err(GameError::config(
                "learner.stability_window",
                "must be >= 1",
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub t: usize,
    pub occupancy: Occupancy,
    pub car_switches: u32,
    pub truck_switches: u32,
}

/// Everything a run produced: the per-day occupancy path, the final profile,
/// and whether it was certified as a pure Nash equilibrium.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trace {
    pub algorithm: Algorithm,
    pub seed: u64,
    pub records: Vec<IterationRecord>,
    pub final_profile: ActionProfile,
    pub certified: bool,
    /// Day index at which the profile was certified.
    pub certified_at: Option<usize>,
    /// Number of learning steps executed.
    pub iterations: usize,
    /// The last improving deviation seen by a failed certification attempt.
    pub last_witness: Option<Deviation>,
}

impl Trace {
    pub fn final_occupancy(&self) -> Option<&Occupancy> {
        self.records.last().map(|r| &r.occupancy)
    }
}

enum State {
    Jsfp(JsfpState, JsfpParams),
    Asfp(AsfpState, AsfpParams),
}

/// Stepwise driver for either learner.
pub struct Learner<'g> {
    game: &'g Game,
    params: LearnerParams,
    seed: u64,
    env: Environment,
    state: State,
    records: Vec<IterationRecord>,
    stable: usize,
    certified_at: Option<usize>,
    last_witness: Option<Deviation>,
}

/// Stream 0 of a seed belongs to population sampling; day `t` uses `t + 1`.
fn day_rng(seed: u64, t: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(t as u64 + 1);
    rng
}

impl<'g> Learner<'g> {
    pub fn new(
        game: &'g Game,
        params: LearnerParams,
        perturbations: Vec<Perturbation>,
        seed: u64,
    ) -> Result<Self> {
        params.validate()?;
        let inertia = Inertia::new(params.inertia)?;
        let env = Environment::new(game, perturbations)?;
        let state = match params.algorithm {
            Algorithm::Jsfp => State::Jsfp(
                JsfpState::new(game)?,
                JsfpParams {
                    inertia,
                    schedule: params.forgetting,
                },
            ),
            Algorithm::Asfp => {
                let ForgettingSchedule::Constant { lambda } = params.forgetting else {
                    unreachable!("validated above")
                };
                State::Asfp(AsfpState::new(game)?, AsfpParams { inertia, lambda })
            }
        };
        Ok(Learner {
            game,
            params,
            seed,
            env,
            state,
            records: Vec::new(),
            stable: 0,
            certified_at: None,
            last_witness: None,
        })
    }

    pub fn profile(&self) -> &ActionProfile {
        match &self.state {
            State::Jsfp(s, _) => &s.profile,
            State::Asfp(s, _) => &s.profile,
        }
    }

    pub fn occupancy(&self) -> &Occupancy {
        match &self.state {
            State::Jsfp(s, _) => &s.occupancy,
            State::Asfp(s, _) => &s.occupancy,
        }
    }

    pub fn jsfp_state(&self) -> Option<&JsfpState> {
        match &self.state {
            State::Jsfp(s, _) => Some(s),
            State::Asfp(..) => None,
        }
    }

    pub fn asfp_state(&self) -> Option<&AsfpState> {
        match &self.state {
            State::Asfp(s, _) => Some(s),
            State::Jsfp(..) => None,
        }
    }

    /// Consecutive days without any switch.
    pub fn stable_days(&self) -> usize {
        self.stable
    }

    pub fn records(&self) -> &[IterationRecord] {
        &self.records
    }

    /// Plays one day and appends its record.
    pub fn step(&mut self) -> Result<StepReport> {
        let report = match &mut self.state {
            State::Jsfp(s, p) => {
                let mut rng = day_rng(self.seed, s.t);
                jsfp_step(s, self.game, p, &mut self.env, &mut rng)
            }
            State::Asfp(s, p) => {
                let mut rng = day_rng(self.seed, s.t + 1);
                asfp_step(s, self.game, p, &mut self.env, &mut rng)?
            }
        };
        self.stable = if report.switches() == 0 {
            self.stable + 1
        } else {
            0
        };
        self.records.push(IterationRecord {
            t: report.t,
            occupancy: self.occupancy().clone(),
            car_switches: report.car_switches,
            truck_switches: report.truck_switches,
        });
        Ok(report)
    }

    /// The profile qualifies for a Nash check once it has been quiet for the
    /// stability window (and for the tax delay, so the announced tax equals
    /// the live one) and every scheduled accident is behind it.
    fn ready_to_certify(&self, t: usize) -> bool {
        let needed = self
            .params
            .stability_window
            .max(self.env.delay().unwrap_or(0));
        let after_accidents = self.env.last_perturbation().is_none_or(|last| t > last);
        self.stable >= needed && after_accidents
    }

    /// Steps until the profile is certified or `max_iters` steps were played.
    pub fn run_to_certification(&mut self) -> Result<Trace> {
        while self.records.len() < self.params.max_iters && self.certified_at.is_none() {
            let report = self.step()?;
            if self.ready_to_certify(report.t) {
                let check = nash_check_with(
                    self.profile(),
                    self.occupancy(),
                    self.game,
                    &DayConditions::default(),
                );
                match check.witness {
                    None => self.certified_at = Some(report.t),
                    Some(w) => self.last_witness = Some(w),
                }
            }
        }
        Ok(self.trace())
    }

    pub fn trace(&self) -> Trace {
        Trace {
            algorithm: self.params.algorithm,
            seed: self.seed,
            records: self.records.clone(),
            final_profile: self.profile().clone(),
            certified: self.certified_at.is_some(),
            certified_at: self.certified_at,
            iterations: self.records.len(),
            last_witness: if self.certified_at.is_some() {
                None
            } else {
                self.last_witness
            },
        }
    }
}

/// Runs a learner from the preferred-interval profile until certification
/// or `max_iters`. Non-convergence is reported in the trace, not as an error.
pub fn run(
    game: &Game,
    params: LearnerParams,
    perturbations: Vec<Perturbation>,
    seed: u64,
) -> Result<Trace> {
    Learner::new(game, params, perturbations, seed)?.run_to_certification()
}
