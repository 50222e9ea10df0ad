//! Game model for the two-type (car/truck) atomic congestion game.
//!
//! Every vehicle picks one of `R` non-overlapping time intervals. The average
//! velocity of an interval is affine in the number of vehicles using it,
//! `v_r = a * n_r + b` with `a < 0`. Cars trade off their schedule penalty
//! against velocity and an optional congestion tax; trucks additionally earn
//! `beta * v_r * g(m_r)` from travelling with the other `m_r - 1` trucks, and
//! may receive a platooning subsidy.
//!
//! Utilities are evaluated through a single path (`car_utility_at` /
//! `truck_utility_at`) that takes the interval counts *including the agent
//! itself*. Counterfactual evaluation only adjusts those counts, so an
//! incremental evaluation and one from a freshly counted occupancy agree
//! bitwise.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{GameError, Result};

/// A time interval, numbered from 1 to `R`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Interval(u16);

impl Interval {
    /// Wraps a 1-based interval number. Range checks against `R` happen where
    /// the interval is used with a game (see [`Interval::checked`]).
    pub fn new(r: u16) -> Self {
        assert!(r >= 1, "intervals are numbered from 1");
        Interval(r)
    }

    pub fn checked(r: usize, intervals: usize) -> Result<Self> {
        if r == 0 || r > intervals || r > u16::MAX as usize {
            return Err(GameError::InvalidProfile(format!(
                "interval {r} outside 1..={intervals}"
            )));
        }
        Ok(Interval(r as u16))
    }

    pub(crate) fn from_index(idx: usize) -> Self {
        Interval(idx as u16 + 1)
    }

    /// 1-based interval number.
    pub fn get(self) -> usize {
        self.0 as usize
    }

    /// 0-based position, for indexing per-interval vectors.
    pub fn index(self) -> usize {
        self.0 as usize - 1
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Affine velocity model `v = a * n + b` (km/h).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VelocityModel {
    pub a: f64,
    pub b: f64,
}

impl VelocityModel {
    pub fn speed(&self, vehicles: u32) -> f64 {
        self.a * vehicles as f64 + self.b
    }

    fn validate(&self) -> Result<()> {
        if self.a >= 0.0 || !self.a.is_finite() {
            return Err(GameError::config(
                "game.velocity.a",
                "must be finite and strictly negative",
            ));
        }
        if self.b <= 0.0 || !self.b.is_finite() {
            return Err(GameError::config(
                "game.velocity.b",
                "must be finite and strictly positive",
            ));
        }
        Ok(())
    }
}

/// Schedule penalty for using the road away from the preferred interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Penalty {
    /// `alpha * |chosen - preferred|`
    Absolute { alpha: f64 },
    /// `alpha * max(chosen - preferred, 0)`: only lateness costs.
    LateOnly { alpha: f64 },
}

impl Penalty {
    pub fn alpha(&self) -> f64 {
        match *self {
            Penalty::Absolute { alpha } | Penalty::LateOnly { alpha } => alpha,
        }
    }

    pub fn eval(&self, chosen: Interval, preferred: Interval) -> f64 {
        let (c, p) = (chosen.get() as i64, preferred.get() as i64);
        match *self {
            Penalty::Absolute { alpha } => alpha * (c - p).abs() as f64,
            Penalty::LateOnly { alpha } => alpha * (c - p).max(0) as f64,
        }
    }

    fn validate(&self, field: &str) -> Result<()> {
        let alpha = self.alpha();
        if alpha >= 0.0 || !alpha.is_finite() {
            return Err(GameError::config(
                field,
                "penalty slope alpha must be finite and strictly negative",
            ));
        }
        Ok(())
    }
}

/// `penalty(kind, chosen, preferred)`; see [`Penalty::eval`].
pub fn penalty(kind: &Penalty, chosen: Interval, preferred: Interval) -> f64 {
    kind.eval(chosen, preferred)
}

/// Platooning benefit `g(m)` as a function of the number of trucks in an interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PlatoonBenefit {
    /// `g(m) = m`
    Linear,
    /// `g(m) = m` once `m >= tau`, zero below.
    Thresholded { tau: u32 },
}

impl PlatoonBenefit {
    pub fn g(&self, m: u32) -> f64 {
        match *self {
            PlatoonBenefit::Linear => m as f64,
            PlatoonBenefit::Thresholded { tau } => {
                if m >= tau {
                    m as f64
                } else {
                    0.0
                }
            }
        }
    }

    /// `g` on a fractional truck count, used by forecast-based learning.
    pub fn g_real(&self, y: f64) -> f64 {
        match *self {
            PlatoonBenefit::Linear => y,
            PlatoonBenefit::Thresholded { tau } => {
                if y >= tau as f64 {
                    y
                } else {
                    0.0
                }
            }
        }
    }

    /// `sum_{l=1}^{m} g(l)`, summed in increasing `l`.
    pub fn cumulative(&self, m: u32) -> f64 {
        let mut acc = 0.0;
        for l in 1..=m {
            acc += self.g(l);
        }
        acc
    }

    /// `cumulative` extended to fractional counts by linear interpolation
    /// between neighbouring integers.
    pub fn cumulative_real(&self, y: f64) -> f64 {
        let y = y.max(0.0);
        let whole = y.floor();
        let k = whole as u32;
        self.cumulative(k) + (y - whole) * self.g(k + 1)
    }
}

/// Pricing policy applied to the game. Exactly one is active per run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PricingPolicy {
    NoPricing,
    /// Cars pay `a * beta * sum_{l<=m_r} g(l)` (scaled by `1 / delta`).
    CarTax,
    /// The car tax on day `t` is computed from the truck counts of day
    /// `t - delay`, and waived for `t <= delay`.
    CarTaxDelayed {
        delay: u32,
    },
    /// Trucks receive `beta * (v0 - v_r) * m_r`.
    TruckSubsidy {
        v0: f64,
    },
}

impl PricingPolicy {
    pub fn taxes_cars(&self) -> bool {
        matches!(
            self,
            PricingPolicy::CarTax | PricingPolicy::CarTaxDelayed { .. }
        )
    }

    pub fn name(&self) -> &'static str {
        match self {
            PricingPolicy::NoPricing => "no_pricing",
            PricingPolicy::CarTax => "car_tax",
            PricingPolicy::CarTaxDelayed { .. } => "car_tax_delayed",
            PricingPolicy::TruckSubsidy { .. } => "truck_subsidy",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CarAgent {
    pub preferred: Interval,
    pub penalty: Penalty,
    /// Value of time; divides the congestion tax only.
    pub value_of_time: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruckAgent {
    pub preferred: Interval,
    pub penalty: Penalty,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Population {
    pub cars: Vec<CarAgent>,
    pub trucks: Vec<TruckAgent>,
}

impl Population {
    pub fn num_cars(&self) -> usize {
        self.cars.len()
    }

    pub fn num_trucks(&self) -> usize {
        self.trucks.len()
    }

    /// Profile where every agent uses its preferred interval.
    pub fn preferred_profile(&self) -> ActionProfile {
        ActionProfile {
            cars: self.cars.iter().map(|c| c.preferred).collect(),
            trucks: self.trucks.iter().map(|t| t.preferred).collect(),
        }
    }
}

/// One interval choice per car (`z`) and per truck (`x`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ActionProfile {
    pub cars: Vec<Interval>,
    pub trucks: Vec<Interval>,
}

impl ActionProfile {
    pub fn action(&self, agent: AgentId) -> Interval {
        match agent {
            AgentId::Car(i) => self.cars[i],
            AgentId::Truck(j) => self.trucks[j],
        }
    }

    pub fn set(&mut self, agent: AgentId, r: Interval) {
        match agent {
            AgentId::Car(i) => self.cars[i] = r,
            AgentId::Truck(j) => self.trucks[j] = r,
        }
    }

    /// Copy of the profile with one agent moved.
    pub fn with_move(&self, agent: AgentId, r: Interval) -> ActionProfile {
        let mut next = self.clone();
        next.set(agent, r);
        next
    }
}

/// Identifies a player: car `i` or truck `j` (0-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AgentId {
    Car(usize),
    Truck(usize),
}

impl fmt::Display for AgentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AgentId::Car(i) => write!(f, "car {i}"),
            AgentId::Truck(j) => write!(f, "truck {j}"),
        }
    }
}

/// Per-interval vehicle totals `n_r` and truck counts `m_r`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Occupancy {
    pub total: Vec<u32>,
    pub trucks: Vec<u32>,
}

impl Occupancy {
    pub fn empty(intervals: usize) -> Self {
        Occupancy {
            total: vec![0; intervals],
            trucks: vec![0; intervals],
        }
    }

    pub fn intervals(&self) -> usize {
        self.total.len()
    }

    pub fn vehicles(&self) -> u64 {
        self.total.iter().map(|&n| n as u64).sum()
    }

    pub fn max_total(&self) -> u32 {
        self.total.iter().copied().max().unwrap_or(0)
    }

    pub fn max_trucks(&self) -> u32 {
        self.trucks.iter().copied().max().unwrap_or(0)
    }

    pub(crate) fn shift(&mut self, from: Interval, to: Interval, is_truck: bool) {
        if from == to {
            return;
        }
        self.total[from.index()] -= 1;
        self.total[to.index()] += 1;
        if is_truck {
            self.trucks[from.index()] -= 1;
            self.trucks[to.index()] += 1;
        }
    }
}

/// Counts vehicles and trucks per interval.
pub fn occupancy(profile: &ActionProfile, intervals: usize) -> Result<Occupancy> {
    let mut occ = Occupancy::empty(intervals);
    for (i, &r) in profile.cars.iter().enumerate() {
        if r.get() > intervals {
            return Err(GameError::InvalidProfile(format!(
                "car {i} chose interval {r} outside 1..={intervals}"
            )));
        }
        occ.total[r.index()] += 1;
    }
    for (j, &r) in profile.trucks.iter().enumerate() {
        if r.get() > intervals {
            return Err(GameError::InvalidProfile(format!(
                "truck {j} chose interval {r} outside 1..={intervals}"
            )));
        }
        occ.total[r.index()] += 1;
        occ.trucks[r.index()] += 1;
    }
    Ok(occ)
}

/// `a * n_r + b` for interval `r`.
pub fn velocity(occ: &Occupancy, r: Interval, vm: &VelocityModel) -> f64 {
    vm.speed(occ.total[r.index()])
}

/// The game's fixed physics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameConfig {
    pub intervals: usize,
    pub velocity: VelocityModel,
    pub beta: f64,
    pub benefit: PlatoonBenefit,
    pub policy: PricingPolicy,
}

impl GameConfig {
    pub fn validate(&self) -> Result<()> {
        if self.intervals < 2 || self.intervals > u16::MAX as usize {
            return Err(GameError::config(
                "game.intervals",
                "need at least 2 intervals",
            ));
        }
        self.velocity.validate()?;
        if self.beta < 0.0 || !self.beta.is_finite() {
            return Err(GameError::config("game.beta", "must be finite and >= 0"));
        }
        if let PlatoonBenefit::Thresholded { tau } = self.benefit {
            if tau == 0 {
                return Err(GameError::config(
                    "game.benefit.tau",
                    "threshold must be >= 1",
                ));
            }
        }
        match self.policy {
            PricingPolicy::CarTaxDelayed { delay: 0 } => {
                Err(GameError::config("policy.delay", "delay must be >= 1"))
            }
            PricingPolicy::TruckSubsidy { v0 } if !v0.is_finite() => {
                Err(GameError::config("policy.v0", "must be finite"))
            }
            _ => Ok(()),
        }
    }
}

/// Congestion tax paid by a car at interval `r` (utility units, nonpositive).
///
/// Reads the live truck count from `occ`; for the delayed policy this is the
/// stationary reading, where the announced occupancy equals the current one.
pub fn car_tax(cfg: &GameConfig, occ: &Occupancy, r: Interval, delta: f64) -> Result<f64> {
    if !cfg.policy.taxes_cars() {
        return Err(GameError::Policy(format!(
            "car tax requested under {} policy",
            cfg.policy.name()
        )));
    }
    let m = occ.trucks[r.index()];
    Ok(cfg.velocity.a * cfg.beta * cfg.benefit.cumulative(m) / delta)
}

/// Platooning subsidy received by a truck at interval `r`.
pub fn truck_subsidy(cfg: &GameConfig, occ: &Occupancy, r: Interval) -> Result<f64> {
    let PricingPolicy::TruckSubsidy { v0 } = cfg.policy else {
        return Err(GameError::Policy(format!(
            "truck subsidy requested under {} policy",
            cfg.policy.name()
        )));
    };
    let v = velocity(occ, r, &cfg.velocity);
    Ok(cfg.beta * (v0 - v) * occ.trucks[r.index()] as f64)
}

/// Which truck counts the car tax is computed from on a given day.
#[derive(Debug, Clone, Copy, Default)]
pub enum TaxBasis<'a> {
    /// Current truck counts.
    #[default]
    Live,
    /// Truck counts announced in advance (delayed tax).
    Announced(&'a [u32]),
    /// No tax collected on this day.
    Waived,
}

/// Day-specific conditions layered over the static game: an accident that
/// divides some intervals' velocity, and the basis of the car tax.
#[derive(Debug, Clone, Copy, Default)]
pub struct DayConditions<'a> {
    pub velocity_divisor: Option<&'a [f64]>,
    pub tax_basis: TaxBasis<'a>,
}

/// A validated game: configuration plus population, with the cumulative
/// platoon benefit table precomputed.
#[derive(Debug, Clone)]
pub struct Game {
    config: GameConfig,
    population: Population,
    cumulative_benefit: Vec<f64>,
    warnings: Vec<String>,
}

impl Game {
    pub fn new(config: GameConfig, population: Population) -> Result<Self> {
        config.validate()?;
        let r_max = config.intervals;
        for (i, car) in population.cars.iter().enumerate() {
            if car.preferred.get() > r_max {
                return Err(GameError::config(
                    format!("cars[{i}].preferred"),
                    format!("interval {} outside 1..={r_max}", car.preferred),
                ));
            }
            car.penalty.validate(&format!("cars[{i}].penalty"))?;
            if car.value_of_time <= 0.0 || !car.value_of_time.is_finite() {
                return Err(GameError::config(
                    format!("cars[{i}].value_of_time"),
                    "must be finite and > 0",
                ));
            }
        }
        for (j, truck) in population.trucks.iter().enumerate() {
            if truck.preferred.get() > r_max {
                return Err(GameError::config(
                    format!("trucks[{j}].preferred"),
                    format!("interval {} outside 1..={r_max}", truck.preferred),
                ));
            }
            truck.penalty.validate(&format!("trucks[{j}].penalty"))?;
        }

        let m_max = population.trucks.len() as u32;
        let mut cumulative_benefit = Vec::with_capacity(m_max as usize + 1);
        let mut acc = 0.0;
        cumulative_benefit.push(acc);
        for l in 1..=m_max {
            acc += config.benefit.g(l);
            cumulative_benefit.push(acc);
        }

        let mut warnings = Vec::new();
        let everyone = (population.cars.len() + population.trucks.len()) as u32;
        if config.velocity.speed(everyone) < 0.0 {
            let msg = format!(
                "velocity model goes negative if all {everyone} vehicles share an interval \
                 (a={}, b={}); the affine fit is only meaningful for moderate loads",
                config.velocity.a, config.velocity.b
            );
            log::warn!("{msg}");
            warnings.push(msg);
        }

        Ok(Game {
            config,
            population,
            cumulative_benefit,
            warnings,
        })
    }

    pub fn config(&self) -> &GameConfig {
        &self.config
    }

    pub fn population(&self) -> &Population {
        &self.population
    }

    pub fn intervals(&self) -> usize {
        self.config.intervals
    }

    pub fn num_cars(&self) -> usize {
        self.population.cars.len()
    }

    pub fn num_trucks(&self) -> usize {
        self.population.trucks.len()
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn agents(&self) -> impl Iterator<Item = AgentId> + '_ {
        (0..self.num_cars())
            .map(AgentId::Car)
            .chain((0..self.num_trucks()).map(AgentId::Truck))
    }

    /// Same population under a different configuration.
    pub fn with_config(&self, config: GameConfig) -> Result<Game> {
        Game::new(config, self.population.clone())
    }

    pub fn occupancy(&self, profile: &ActionProfile) -> Result<Occupancy> {
        if profile.cars.len() != self.num_cars() || profile.trucks.len() != self.num_trucks() {
            return Err(GameError::InvalidProfile(format!(
                "profile has {} cars and {} trucks, game has {} and {}",
                profile.cars.len(),
                profile.trucks.len(),
                self.num_cars(),
                self.num_trucks()
            )));
        }
        occupancy(profile, self.intervals())
    }

    pub(crate) fn cumulative_benefit(&self, m: u32) -> f64 {
        self.cumulative_benefit[m as usize]
    }

    /// Velocity of interval index `r` carrying `n` vehicles.
    #[inline]
    pub(crate) fn velocity_at(&self, r: usize, n: u32, cond: &DayConditions<'_>) -> f64 {
        let v = self.config.velocity.speed(n);
        match cond.velocity_divisor {
            Some(div) => v / div[r],
            None => v,
        }
    }

    #[inline]
    fn car_tax_at(&self, car: &CarAgent, r: usize, m: u32, cond: &DayConditions<'_>) -> f64 {
        if !self.config.policy.taxes_cars() {
            return 0.0;
        }
        let m = match cond.tax_basis {
            TaxBasis::Live => m,
            TaxBasis::Announced(counts) => counts[r],
            TaxBasis::Waived => return 0.0,
        };
        self.config.velocity.a * self.config.beta * self.cumulative_benefit(m) / car.value_of_time
    }

    /// Utility of car `i` at interval index `r`, where `n` and `m` already
    /// count the car itself.
    #[inline]
    pub(crate) fn car_utility_at(
        &self,
        i: usize,
        r: usize,
        n: u32,
        m: u32,
        cond: &DayConditions<'_>,
    ) -> f64 {
        let car = &self.population.cars[i];
        let chosen = Interval::from_index(r);
        car.penalty.eval(chosen, car.preferred)
            + self.velocity_at(r, n, cond)
            + self.car_tax_at(car, r, m, cond)
    }

    /// Utility of truck `j` at interval index `r`, where `n` and `m` already
    /// count the truck itself.
    #[inline]
    pub(crate) fn truck_utility_at(
        &self,
        j: usize,
        r: usize,
        n: u32,
        m: u32,
        cond: &DayConditions<'_>,
    ) -> f64 {
        let truck = &self.population.trucks[j];
        let chosen = Interval::from_index(r);
        let v = self.velocity_at(r, n, cond);
        let subsidy = match self.config.policy {
            PricingPolicy::TruckSubsidy { v0 } => self.config.beta * (v0 - v) * m as f64,
            _ => 0.0,
        };
        truck.penalty.eval(chosen, truck.preferred)
            + v
            + subsidy
            + self.config.beta * v * self.config.benefit.g(m)
    }

    /// Utility of `agent` if it moved to interval index `r`, all others fixed.
    /// `occ` is the occupancy of the profile in which the agent sits at `current`.
    #[inline]
    pub(crate) fn utility_if_at(
        &self,
        agent: AgentId,
        current: Interval,
        r: usize,
        occ: &Occupancy,
        cond: &DayConditions<'_>,
    ) -> f64 {
        let here = usize::from(r != current.index()) as u32;
        let n = occ.total[r] + here;
        match agent {
            AgentId::Car(i) => self.car_utility_at(i, r, n, occ.trucks[r], cond),
            AgentId::Truck(j) => self.truck_utility_at(j, r, n, occ.trucks[r] + here, cond),
        }
    }

    /// Index of the largest value, smallest index on ties.
    pub(crate) fn argmax(values: impl IntoIterator<Item = f64>) -> usize {
        let mut best = 0;
        let mut best_val = f64::NEG_INFINITY;
        for (r, v) in values.into_iter().enumerate() {
            if v > best_val {
                best = r;
                best_val = v;
            }
        }
        best
    }
}

/// Utility of car `i` (0-based) under `profile`, from a freshly counted occupancy.
pub fn car_utility(i: usize, profile: &ActionProfile, game: &Game) -> Result<f64> {
    let occ = game.occupancy(profile)?;
    let r = profile.cars[i].index();
    Ok(game.car_utility_at(i, r, occ.total[r], occ.trucks[r], &DayConditions::default()))
}

/// Utility of truck `j` (0-based) under `profile`, from a freshly counted occupancy.
pub fn truck_utility(j: usize, profile: &ActionProfile, game: &Game) -> Result<f64> {
    let occ = game.occupancy(profile)?;
    let r = profile.trucks[j].index();
    Ok(game.truck_utility_at(j, r, occ.total[r], occ.trucks[r], &DayConditions::default()))
}

pub fn utility(agent: AgentId, profile: &ActionProfile, game: &Game) -> Result<f64> {
    match agent {
        AgentId::Car(i) => car_utility(i, profile, game),
        AgentId::Truck(j) => truck_utility(j, profile, game),
    }
}

/// Best unilateral response of `agent`, smallest interval on ties.
pub fn best_response(agent: AgentId, profile: &ActionProfile, game: &Game) -> Result<Interval> {
    let occ = game.occupancy(profile)?;
    let cond = DayConditions::default();
    let current = profile.action(agent);
    let best = Game::argmax(
        (0..game.intervals()).map(|r| game.utility_if_at(agent, current, r, &occ, &cond)),
    );
    Ok(Interval::from_index(best))
}

/// A strictly improving unilateral deviation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Deviation {
    pub agent: AgentId,
    pub to: Interval,
    pub gain: f64,
}

/// Outcome of a Nash check: `None` witness means no agent can strictly improve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NashCheck {
    pub witness: Option<Deviation>,
}

impl NashCheck {
    pub fn is_nash(&self) -> bool {
        self.witness.is_none()
    }
}

/// Scans cars then trucks, intervals in increasing order, and reports the
/// first strictly improving deviation (zero tolerance).
pub fn is_nash(profile: &ActionProfile, game: &Game) -> Result<NashCheck> {
    let occ = game.occupancy(profile)?;
    Ok(nash_check_with(
        profile,
        &occ,
        game,
        &DayConditions::default(),
    ))
}

pub(crate) fn nash_check_with(
    profile: &ActionProfile,
    occ: &Occupancy,
    game: &Game,
    cond: &DayConditions<'_>,
) -> NashCheck {
    for agent in game.agents() {
        let current = profile.action(agent);
        let now = game.utility_if_at(agent, current, current.index(), occ, cond);
        for r in 0..game.intervals() {
            if r == current.index() {
                continue;
            }
            let alt = game.utility_if_at(agent, current, r, occ, cond);
            if alt > now {
                return NashCheck {
                    witness: Some(Deviation {
                        agent,
                        to: Interval::from_index(r),
                        gain: alt - now,
                    }),
                };
            }
        }
    }
    NashCheck { witness: None }
}
