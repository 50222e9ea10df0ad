//! Joint strategy fictitious play.

use rand::Rng;

use super::{blend, Environment, ForgettingSchedule, Inertia, StepReport};
use crate::error::Result;
use crate::game::{ActionProfile, AgentId, DayConditions, Game, Interval, Occupancy};

/// Memories and profile of a JSFP run.
#[derive(Debug, Clone, PartialEq)]
pub struct JsfpState {
    /// Car memories, row-major `N x R`.
    pub u_hat: Vec<f64>,
    /// Truck memories, row-major `M x R`.
    pub v_hat: Vec<f64>,
    pub profile: ActionProfile,
    pub occupancy: Occupancy,
    /// Index of the next day to play.
    pub t: usize,
}

impl JsfpState {
    /// Memories start at the schedule penalty of each interval; agents start
    /// at their preferred intervals.
    pub fn new(game: &Game) -> Result<Self> {
        let r_count = game.intervals();
        let pop = game.population();
        let mut u_hat = Vec::with_capacity(pop.cars.len() * r_count);
        for car in &pop.cars {
            u_hat.extend(
                (0..r_count).map(|r| car.penalty.eval(Interval::from_index(r), car.preferred)),
            );
        }
        let mut v_hat = Vec::with_capacity(pop.trucks.len() * r_count);
        for truck in &pop.trucks {
            v_hat.extend(
                (0..r_count).map(|r| truck.penalty.eval(Interval::from_index(r), truck.preferred)),
            );
        }
        let profile = pop.preferred_profile();
        let occupancy = game.occupancy(&profile)?;
        Ok(JsfpState {
            u_hat,
            v_hat,
            profile,
            occupancy,
            t: 0,
        })
    }

    pub fn memory(&self, agent: AgentId, r_count: usize) -> &[f64] {
        match agent {
            AgentId::Car(i) => &self.u_hat[i * r_count..(i + 1) * r_count],
            AgentId::Truck(j) => &self.v_hat[j * r_count..(j + 1) * r_count],
        }
    }

    /// Interval maximizing the agent's memory, smallest on ties.
    pub fn candidate(&self, agent: AgentId, r_count: usize) -> Interval {
        Interval::from_index(Game::argmax(self.memory(agent, r_count).iter().copied()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JsfpParams {
    pub inertia: Inertia,
    pub schedule: ForgettingSchedule,
}

/// Decides whether `agent` moves from `current` to `candidate` against the
/// frozen profile occupancy.
#[inline]
#[allow(clippy::too_many_arguments)]
pub(crate) fn accept(
    game: &Game,
    agent: AgentId,
    current: Interval,
    candidate: Interval,
    occ: &Occupancy,
    cond: &DayConditions<'_>,
    draw: f64,
    inertia: Inertia,
) -> bool {
    if candidate == current {
        return false;
    }
    let stay = game.utility_if_at(agent, current, current.index(), occ, cond);
    let go = game.utility_if_at(agent, current, candidate.index(), occ, cond);
    go > stay && draw < inertia.p()
}

/// Plays day `state.t`: decisions against the previous profile, then all
/// memories move toward the utilities each interval would have given under
/// the new profile.
pub fn jsfp_step<R: Rng + ?Sized>(
    state: &mut JsfpState,
    game: &Game,
    params: &JsfpParams,
    env: &mut Environment,
    rng: &mut R,
) -> StepReport {
    let r_count = game.intervals();
    let t = state.t;
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
        let candidate = state.candidate(agent, r_count);
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

    let lambda = params.schedule.lambda(t);
    let occ = &state.occupancy;
    for (i, &z) in state.profile.cars.iter().enumerate() {
        let row = &mut state.u_hat[i * r_count..(i + 1) * r_count];
        for (r, mem) in row.iter_mut().enumerate() {
            *mem = blend(
                *mem,
                game.utility_if_at(AgentId::Car(i), z, r, occ, &cond),
                lambda,
            );
        }
    }
    for (j, &x) in state.profile.trucks.iter().enumerate() {
        let row = &mut state.v_hat[j * r_count..(j + 1) * r_count];
        for (r, mem) in row.iter_mut().enumerate() {
            *mem = blend(
                *mem,
                game.utility_if_at(AgentId::Truck(j), x, r, occ, &cond),
                lambda,
            );
        }
    }

    env.record(&state.occupancy);
    state.t += 1;
    report
}
