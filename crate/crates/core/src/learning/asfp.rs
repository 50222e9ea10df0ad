//! Average strategy fictitious play.
//!
//! A central node broadcasts exponentially averaged car and truck counts per
//! interval. Each agent also keeps the average of its own choice indicators,
//! and predicts the flow it would join at `r` as the broadcast total minus
//! its own share plus one. Only policies whose prices depend on the counts of
//! the chosen interval can be evaluated on such forecasts.

use rand::Rng;

use super::jsfp::accept;
use super::{blend, Environment, Inertia, StepReport};
use crate::error::{GameError, Result};
use crate::game::{ActionProfile, AgentId, Game, Interval, Occupancy, PricingPolicy};

#[derive(Debug, Clone, PartialEq)]
pub struct AsfpState {
    pub n_bar_cars: Vec<f64>,
    pub n_bar_trucks: Vec<f64>,
    /// Per-car choice averages, row-major `N x R`.
    pub w_bar_cars: Vec<f64>,
    /// Per-truck choice averages, row-major `M x R`.
    pub w_bar_trucks: Vec<f64>,
    pub profile: ActionProfile,
    pub occupancy: Occupancy,
    /// Last completed day; day 0 is the initial profile.
    pub t: usize,
}

/// Rejects pricing that is not a function of the chosen interval's counts.
pub fn check_forecast_policy(policy: &PricingPolicy) -> Result<()> {
    match policy {
        PricingPolicy::CarTaxDelayed { .. } => Err(GameError::Policy(
            "the delayed car tax depends on past days, not on the forecast flows".into(),
        )),
        _ => Ok(()),
    }
}

impl AsfpState {
    /// Everyone starts at the preferred interval; forecasts equal the
    /// realized counts and choice averages are indicator rows.
    pub fn new(game: &Game) -> Result<Self> {
        check_forecast_policy(&game.config().policy)?;
        let r_count = game.intervals();
        let profile = game.population().preferred_profile();
        let occupancy = game.occupancy(&profile)?;
        let indicator_rows = |choices: &[Interval]| {
            let mut w = vec![0.0; choices.len() * r_count];
            for (k, r) in choices.iter().enumerate() {
                w[k * r_count + r.index()] = 1.0;
            }
            w
        };
        Ok(AsfpState {
            n_bar_cars: occupancy
                .total
                .iter()
                .zip(&occupancy.trucks)
                .map(|(&n, &m)| (n - m) as f64)
                .collect(),
            n_bar_trucks: occupancy.trucks.iter().map(|&m| m as f64).collect(),
            w_bar_cars: indicator_rows(&profile.cars),
            w_bar_trucks: indicator_rows(&profile.trucks),
            profile,
            occupancy,
            t: 0,
        })
    }

    /// Forecast utility of `agent` at interval index `r`.
    pub fn forecast_utility(&self, game: &Game, agent: AgentId, r: usize) -> f64 {
        let cfg = game.config();
        let r_count = game.intervals();
        let (a, b, beta) = (cfg.velocity.a, cfg.velocity.b, cfg.beta);
        let chosen = Interval::from_index(r);
        let flow = self.n_bar_cars[r] + self.n_bar_trucks[r];
        match agent {
            AgentId::Car(i) => {
                let car = &game.population().cars[i];
                let n = flow - self.w_bar_cars[i * r_count + r] + 1.0;
                let tax = if cfg.policy == PricingPolicy::CarTax {
                    a * beta * cfg.benefit.cumulative_real(self.n_bar_trucks[r]) / car.value_of_time
                } else {
                    0.0
                };
                car.penalty.eval(chosen, car.preferred) + (a * n + b) + tax
            }
            AgentId::Truck(j) => {
                let truck = &game.population().trucks[j];
                let own = self.w_bar_trucks[j * r_count + r];
                let n = flow - own + 1.0;
                let m = self.n_bar_trucks[r] - own + 1.0;
                let v = a * n + b;
                let subsidy = match cfg.policy {
                    PricingPolicy::TruckSubsidy { v0 } => beta * (v0 - v) * m,
                    _ => 0.0,
                };
                truck.penalty.eval(chosen, truck.preferred)
                    + v
                    + subsidy
                    + beta * v * cfg.benefit.g_real(m)
            }
        }
    }

    pub fn candidate(&self, game: &Game, agent: AgentId) -> Interval {
        Interval::from_index(Game::argmax(
            (0..game.intervals()).map(|r| self.forecast_utility(game, agent, r)),
        ))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsfpParams {
    pub inertia: Inertia,
    pub lambda: f64,
}

/// Plays day `state.t + 1`: each agent proposes the interval maximizing its
/// forecast utility, keeps or switches by comparing realized utilities under
/// the previous profile, then the central node and the agents fold the new
/// day into their averages.
pub fn asfp_step<R: Rng + ?Sized>(
    state: &mut AsfpState,
    game: &Game,
    params: &AsfpParams,
    env: &mut Environment,
    rng: &mut R,
) -> Result<StepReport> {
    check_forecast_policy(&game.config().policy)?;
    let r_count = game.intervals();
    let t = state.t + 1;
    let day = env.day(t);
    let cond = day.conditions();
    let draws: Vec<f64> = (0..game.num_cars() + game.num_trucks())
        .map(|_| rng.random::<f64>())
        .collect();

    let mut next = state.profile.clone();
    let mut report = StepReport {
        t,
        ..StepReport::default()
    };
    for (k, agent) in game.agents().enumerate() {
        let current = state.profile.action(agent);
        let candidate = state.candidate(game, agent);
        if accept(
            game,
            agent,
            current,
            candidate,
            &state.occupancy,
            &cond,
            draws[k],
            params.inertia,
        ) {
            next.set(agent, candidate);
            match agent {
                AgentId::Car(_) => report.car_switches += 1,
                AgentId::Truck(_) => report.truck_switches += 1,
            }
        }
    }

    if report.switches() > 0 {
        for agent in game.agents() {
            let (from, to) = (state.profile.action(agent), next.action(agent));
            state
                .occupancy
                .shift(from, to, matches!(agent, AgentId::Truck(_)));
        }
        state.profile = next;
    }

    let lambda = params.lambda;
    let occ = &state.occupancy;
    for r in 0..r_count {
        let cars_here = (occ.total[r] - occ.trucks[r]) as f64;
        state.n_bar_cars[r] = blend(state.n_bar_cars[r], cars_here, lambda);
        state.n_bar_trucks[r] = blend(state.n_bar_trucks[r], occ.trucks[r] as f64, lambda);
    }
    let fold = |w: &mut [f64], choices: &[Interval]| {
        for (row, choice) in w.chunks_exact_mut(r_count).zip(choices) {
            for (r, cell) in row.iter_mut().enumerate() {
                let hit = if r == choice.index() { 1.0 } else { 0.0 };
                *cell = blend(*cell, hit, lambda);
            }
        }
    };
    fold(&mut state.w_bar_cars, &state.profile.cars);
    fold(&mut state.w_bar_trucks, &state.profile.trucks);

    env.record(&state.occupancy);
    state.t = t;
    Ok(report)
}
