//! Fictitious-play learning dynamics with inertia.
//!
//! Two learners share the same accept/switch rule: an agent computes a
//! candidate interval from its memory, compares the candidate's realized
//! utility against its current one under the previous day's profile, and
//! switches with probability `p` only if the candidate is strictly better.
//!
//! * [`jsfp`] keeps, per agent and interval, a forgetting-weighted average of
//!   the utility the agent would have received there.
//! * [`asfp`] broadcasts averaged per-interval flows from a central node;
//!   each agent also remembers how often it chose each interval.
//!
//! Each day has two phases. First every agent decides against the frozen
//! previous profile, consuming one pre-drawn uniform in fixed agent order
//! (cars, then trucks). Then the profile is committed and memories update.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{GameError, Result};
use crate::game::{DayConditions, Game, Interval, Occupancy, PricingPolicy, TaxBasis};

pub mod asfp;
pub mod jsfp;
mod run;

pub use asfp::{asfp_step, AsfpState};
pub use jsfp::{jsfp_step, JsfpState};
pub use run::{run, Algorithm, IterationRecord, Learner, LearnerParams, Trace};

/// Weight on the newest observation in the exponential-average memories.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ForgettingSchedule {
    Constant {
        lambda: f64,
    },
    /// `lambda_t = 1 / (t + 1)`: every past day weighs the same.
    Harmonic,
}

impl ForgettingSchedule {
    pub fn lambda(&self, t: usize) -> f64 {
        match *self {
            ForgettingSchedule::Constant { lambda } => lambda,
            ForgettingSchedule::Harmonic => 1.0 / (t as f64 + 1.0),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            ForgettingSchedule::Constant { lambda } if !(lambda > 0.0 && lambda < 1.0) => {
                Err(GameError::config(
                    "learner.forgetting.lambda",
                    "must lie strictly inside (0, 1)",
                ))
            }
            _ => Ok(()),
        }
    }
}

/// Probability that an agent with a strictly better candidate actually switches.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Inertia(f64);

impl Inertia {
    pub fn new(p: f64) -> Result<Self> {
        if p > 0.0 && p < 1.0 {
            Ok(Inertia(p))
        } else {
            Err(GameError::config(
                "learner.inertia",
                "switch probability must lie strictly inside (0, 1)",
            ))
        }
    }

    pub fn p(self) -> f64 {
        self.0
    }
}

/// An accident on day `at_iteration`: the velocity of the listed intervals
/// is divided by `velocity_divisor` for that day only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Perturbation {
    pub at_iteration: usize,
    pub intervals: Vec<Interval>,
    pub velocity_divisor: f64,
}

impl Perturbation {
    pub fn validate(&self, intervals: usize) -> Result<()> {
        if self.velocity_divisor <= 0.0 || !self.velocity_divisor.is_finite() {
            return Err(GameError::config(
                "perturbations.velocity_divisor",
                "must be finite and > 0",
            ));
        }
        if let Some(r) = self.intervals.iter().find(|r| r.get() > intervals) {
            return Err(GameError::config(
                "perturbations.intervals",
                format!("interval {r} outside 1..={intervals}"),
            ));
        }
        Ok(())
    }
}

/// Per-agent switch counts of one learning step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct StepReport {
    pub t: usize,
    pub car_switches: u32,
    pub truck_switches: u32,
}

impl StepReport {
    pub fn switches(&self) -> u32 {
        self.car_switches + self.truck_switches
    }
}

/// Day-varying surroundings of a run: scheduled accidents and the ring
/// buffer of past truck occupancies behind the delayed car tax.
#[derive(Debug, Clone)]
pub struct Environment {
    intervals: usize,
    perturbations: Vec<Perturbation>,
    delay: Option<usize>,
    truck_history: VecDeque<Vec<u32>>,
}

/// Owned conditions for one day; borrow them with [`Day::conditions`].
#[derive(Debug, Clone, Default)]
pub struct Day {
    divisor: Option<Vec<f64>>,
    announced: Option<Vec<u32>>,
    waived: bool,
}

impl Day {
    pub fn conditions(&self) -> DayConditions<'_> {
        let tax_basis = if self.waived {
            TaxBasis::Waived
        } else if let Some(m) = &self.announced {
            TaxBasis::Announced(m)
        } else {
            TaxBasis::Live
        };
        DayConditions {
            velocity_divisor: self.divisor.as_deref(),
            tax_basis,
        }
    }
}

impl Environment {
    pub fn new(game: &Game, perturbations: Vec<Perturbation>) -> Result<Self> {
        for p in &perturbations {
            p.validate(game.intervals())?;
        }
        let delay = match game.config().policy {
            PricingPolicy::CarTaxDelayed { delay } => Some(delay as usize),
            _ => None,
        };
        Ok(Environment {
            intervals: game.intervals(),
            perturbations,
            delay,
            truck_history: VecDeque::new(),
        })
    }

    pub fn delay(&self) -> Option<usize> {
        self.delay
    }

    pub fn last_perturbation(&self) -> Option<usize> {
        self.perturbations.iter().map(|p| p.at_iteration).max()
    }

    pub fn day(&self, t: usize) -> Day {
        let mut divisor: Option<Vec<f64>> = None;
        for p in self.perturbations.iter().filter(|p| p.at_iteration == t) {
            let div = divisor.get_or_insert_with(|| vec![1.0; self.intervals]);
            for r in &p.intervals {
                div[r.index()] *= p.velocity_divisor;
            }
        }
        let (announced, waived) = match self.delay {
            Some(d) if t > d => (self.truck_history.front().cloned(), false),
            Some(_) => (None, true),
            None => (None, false),
        };
        Day {
            divisor,
            announced,
            waived,
        }
    }

    /// Stores day `t`'s truck counts; the buffer keeps the last `delay` days.
    pub fn record(&mut self, occ: &Occupancy) {
        if let Some(d) = self.delay {
            self.truck_history.push_back(occ.trucks.clone());
            while self.truck_history.len() > d {
                self.truck_history.pop_front();
            }
        }
    }
}

/// `(1 - lambda) * old + lambda * new`, kept inside `[min, max]` of its inputs.
#[inline]
pub(crate) fn blend(old: f64, new: f64, lambda: f64) -> f64 {
    let mixed = (1.0 - lambda) * old + lambda * new;
    mixed.clamp(old.min(new), old.max(new))
}
