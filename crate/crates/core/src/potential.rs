//! Potential functions, cross differences, and an exhaustive 4-cycle test
//! for exact-potential existence.
//!
//! `potential_value` evaluates the closed forms directly from a fresh
//! occupancy count and never calls the utility code, so comparing potential
//! differences against utility differences checks one against the other.
//! The 4-cycle oracle goes the other way: it only sees the game through
//! utility evaluations and knows nothing about the pricing formulas.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{GameError, Result};
use crate::game::{self, ActionProfile, AgentId, Game, Interval, PricingPolicy};

/// Tolerance for potential-vs-utility difference checks.
pub const POTENTIAL_TOLERANCE: f64 = 1e-9;

/// Tolerance for a 4-cycle sum to count as zero.
pub const CYCLE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PotentialKind {
    /// Potential of the game with the car congestion tax.
    PhiCarTax,
    /// Potential of the game with the truck platooning subsidy.
    PsiTruckSubsidy,
}

impl PotentialKind {
    /// The potential matching the game's pricing policy, if there is one.
    pub fn for_policy(policy: &PricingPolicy) -> Option<Self> {
        match policy {
            PricingPolicy::CarTax => Some(PotentialKind::PhiCarTax),
            PricingPolicy::TruckSubsidy { .. } => Some(PotentialKind::PsiTruckSubsidy),
            _ => None,
        }
    }
}

pub fn potential_value(kind: PotentialKind, profile: &ActionProfile, game: &Game) -> Result<f64> {
    let cfg = game.config();
    let v0 = match (kind, cfg.policy) {
        (PotentialKind::PhiCarTax, PricingPolicy::CarTax) => None,
        (PotentialKind::PsiTruckSubsidy, PricingPolicy::TruckSubsidy { v0 }) => Some(v0),
        _ => {
            return Err(GameError::Policy(format!(
                "{kind:?} does not apply to the {} policy",
                cfg.policy.name()
            )))
        }
    };
    let occ = game.occupancy(profile)?;
    let pop = game.population();
    let (a, b, beta) = (cfg.velocity.a, cfg.velocity.b, cfg.beta);
    let g = |l: u32| cfg.benefit.g(l);

    let mut schedule = 0.0;
    for (car, &z) in pop.cars.iter().zip(&profile.cars) {
        schedule += car.penalty.eval(z, car.preferred);
    }
    for (truck, &x) in pop.trucks.iter().zip(&profile.trucks) {
        schedule += truck.penalty.eval(x, truck.preferred);
    }

    let mut congestion = 0.0;
    for &n in &occ.total {
        for k in 1..=n {
            congestion += a * k as f64 + b;
        }
    }

    let value = match v0 {
        None => {
            let mut platoon = 0.0;
            for (&n, &m) in occ.total.iter().zip(&occ.trucks) {
                let mut sum_g = 0.0;
                for l in 1..=m {
                    sum_g += g(l);
                }
                platoon += beta * (a * n as f64 + b) * sum_g;
            }
            let mut correction = 0.0;
            for &m in &occ.trucks {
                for l in 1..=m {
                    for k in 1..l {
                        correction += g(k);
                    }
                }
            }
            schedule + congestion + platoon - a * beta * correction
        }
        Some(v0) => {
            let mut platoon = 0.0;
            for &m in &occ.trucks {
                for l in 1..=m {
                    platoon += g(l);
                }
            }
            schedule + congestion + beta * v0 * platoon
        }
    };
    Ok(value)
}

/// Change in potential and in the mover's utility when `mover` switches to
/// `to`, both as `before - after`, each from a full re-evaluation.
pub fn delta_move(
    kind: PotentialKind,
    profile: &ActionProfile,
    mover: AgentId,
    to: Interval,
    game: &Game,
) -> Result<(f64, f64)> {
    if to.get() > game.intervals() {
        return Err(GameError::InvalidProfile(format!(
            "target interval {to} out of range"
        )));
    }
    let after = profile.with_move(mover, to);
    let d_potential = potential_value(kind, profile, game)? - potential_value(kind, &after, game)?;
    let d_utility = game::utility(mover, profile, game)? - game::utility(mover, &after, game)?;
    Ok((d_potential, d_utility))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossDifferenceReport {
    /// Truck-side double difference of V_j.
    pub lhs: f64,
    /// Car-side double difference of U_i.
    pub rhs: f64,
    /// `lhs - rhs`
    pub mismatch: f64,
    pub car: usize,
    pub truck: usize,
    pub car_from: Interval,
    pub car_to: Interval,
    pub truck_from: Interval,
    pub truck_to: Interval,
}

/// Double differences of the truck's and the car's utilities over the four
/// corners spanned by moving car `i` to `car_to` and truck `j` to `truck_to`.
/// A potential can only exist if they agree.
pub fn cross_difference(
    profile: &ActionProfile,
    i: usize,
    j: usize,
    car_to: Interval,
    truck_to: Interval,
    game: &Game,
) -> Result<CrossDifferenceReport> {
    let base = profile;
    let moved_car = profile.with_move(AgentId::Car(i), car_to);
    let moved_truck = profile.with_move(AgentId::Truck(j), truck_to);
    let moved_both = moved_car.with_move(AgentId::Truck(j), truck_to);

    let v = |p: &ActionProfile| game::truck_utility(j, p, game);
    let u = |p: &ActionProfile| game::car_utility(i, p, game);

    let lhs = (v(base)? - v(&moved_car)?) - (v(&moved_truck)? - v(&moved_both)?);
    let rhs = (u(base)? - u(&moved_truck)?) - (u(&moved_car)? - u(&moved_both)?);
    Ok(CrossDifferenceReport {
        lhs,
        rhs,
        mismatch: lhs - rhs,
        car: i,
        truck: j,
        car_from: profile.cars[i],
        car_to,
        truck_from: profile.trucks[j],
        truck_to,
    })
}

/// Closed form of [`cross_difference`]'s mismatch for an unpriced game:
/// `a*beta*[(1{x=z} - 1{x=z'}) g(m_x(x)) - (1{x'=z} - 1{x'=z'}) g(m_x'(x'))]`.
pub fn unpriced_mismatch(
    profile: &ActionProfile,
    i: usize,
    j: usize,
    car_to: Interval,
    truck_to: Interval,
    game: &Game,
) -> Result<f64> {
    let cfg = game.config();
    if cfg.policy != PricingPolicy::NoPricing {
        return Err(GameError::Policy(
            "closed-form mismatch only holds without pricing".into(),
        ));
    }
    let (z, z2) = (profile.cars[i], car_to);
    let (x, x2) = (profile.trucks[j], truck_to);
    let ind = |c: bool| if c { 1.0 } else { 0.0 };

    let m_before = game.occupancy(profile)?.trucks[x.index()];
    let moved = profile.with_move(AgentId::Truck(j), truck_to);
    let m_after = game.occupancy(&moved)?.trucks[x2.index()];
    let g = |m| cfg.benefit.g(m);

    Ok(cfg.velocity.a
        * cfg.beta
        * ((ind(x == z) - ind(x == z2)) * g(m_before)
            - (ind(x2 == z) - ind(x2 == z2)) * g(m_after)))
}

/// `F(s) - F(s with p moved) - F(s with q moved) + F(s with both moved)`,
/// evaluated in the two nesting orders. Returns `(p outer, q outer)`.
pub fn double_differences<F>(
    f: F,
    profile: &ActionProfile,
    p: (AgentId, Interval),
    q: (AgentId, Interval),
) -> Result<(f64, f64)>
where
    F: Fn(&ActionProfile) -> Result<f64>,
{
    let sp = profile.with_move(p.0, p.1);
    let sq = profile.with_move(q.0, q.1);
    let spq = sp.with_move(q.0, q.1);
    let (f0, fp, fq, fpq) = (f(profile)?, f(&sp)?, f(&sq)?, f(&spq)?);
    let p_outer = (f0 - fq) - (fp - fpq);
    let q_outer = (f0 - fp) - (fq - fpq);
    Ok((p_outer, q_outer))
}

/// A closed path of four unilateral moves by two agents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FourCycle {
    pub start: ActionProfile,
    pub first: AgentId,
    pub first_to: Interval,
    pub second: AgentId,
    pub second_to: Interval,
    /// Sum of the movers' utility gains around the cycle; zero in a potential game.
    pub violation: f64,
}

/// Sum of utility gains around `s -> (p moves) -> (q moves) -> (p returns) -> s`.
pub fn four_cycle_sum(
    game: &Game,
    start: &ActionProfile,
    p: AgentId,
    p_to: Interval,
    q: AgentId,
    q_to: Interval,
) -> Result<f64> {
    let s1 = start.with_move(p, p_to);
    let s2 = s1.with_move(q, q_to);
    let s3 = start.with_move(q, q_to);
    let u = |agent, s: &ActionProfile| game::utility(agent, s, game);
    Ok((u(p, &s1)? - u(p, start)?)
        + (u(q, &s2)? - u(q, &s1)?)
        + (u(p, &s3)? - u(p, &s2)?)
        + (u(q, start)? - u(q, &s3)?))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PotentialVerdict {
    pub exists: bool,
    pub cycles_checked: u64,
    pub counterexample: Option<FourCycle>,
}

/// Default cap on the number of profiles enumerated by the oracle.
pub const DEFAULT_PROFILE_GUARD: u64 = 1 << 20;

/// Decides whether the finite game has an exact potential by checking that
/// every 4-cycle of unilateral moves by two agents sums to zero. Enumerates
/// every profile, so `R^(N+M)` must not exceed `max_profiles`.
pub fn exact_potential_exists(game: &Game, max_profiles: u64) -> Result<PotentialVerdict> {
    let r = game.intervals();
    let agents: Vec<AgentId> = game.agents().collect();
    let profiles = (r as f64).powi(agents.len() as i32);
    if profiles > max_profiles as f64 {
        return Err(GameError::SizeGuard {
            profiles,
            guard: max_profiles,
        });
    }

    let mut digits = vec![0usize; agents.len()];
    let mut cycles_checked = 0u64;
    loop {
        let start = ActionProfile {
            cars: digits[..game.num_cars()]
                .iter()
                .map(|&d| Interval::checked(d + 1, r))
                .collect::<Result<_>>()?,
            trucks: digits[game.num_cars()..]
                .iter()
                .map(|&d| Interval::checked(d + 1, r))
                .collect::<Result<_>>()?,
        };
        for (pi, &p) in agents.iter().enumerate() {
            for &q in &agents[pi + 1..] {
                for p_to in (1..=r).filter(|&t| t != digits[pi] + 1) {
                    let p_to = Interval::checked(p_to, r)?;
                    let q_from = start.action(q);
                    for q_to in (1..=r).filter(|&t| t != q_from.get()) {
                        let q_to = Interval::checked(q_to, r)?;
                        let violation = four_cycle_sum(game, &start, p, p_to, q, q_to)?;
                        cycles_checked += 1;
                        if violation.abs() > CYCLE_TOLERANCE {
                            return Ok(PotentialVerdict {
                                exists: false,
                                cycles_checked,
                                counterexample: Some(FourCycle {
                                    start,
                                    first: p,
                                    first_to: p_to,
                                    second: q,
                                    second_to: q_to,
                                    violation,
                                }),
                            });
                        }
                    }
                }
            }
        }

        // Odometer increment over all agents' actions.
        let mut k = 0;
        while k < digits.len() {
            digits[k] += 1;
            if digits[k] < r {
                break;
            }
            digits[k] = 0;
            k += 1;
        }
        if k == digits.len() {
            break;
        }
    }
    Ok(PotentialVerdict {
        exists: true,
        cycles_checked,
        counterexample: None,
    })
}

fn random_profile<R: Rng + ?Sized>(game: &Game, rng: &mut R) -> ActionProfile {
    let r = game.intervals();
    let mut draw = |k: usize| {
        (0..k)
            .map(|_| Interval::from_index(rng.random_range(0..r)))
            .collect()
    };
    ActionProfile {
        cars: draw(game.num_cars()),
        trucks: draw(game.num_trucks()),
    }
}

fn random_agent<R: Rng + ?Sized>(game: &Game, rng: &mut R) -> AgentId {
    let k = rng.random_range(0..game.num_cars() + game.num_trucks());
    if k < game.num_cars() {
        AgentId::Car(k)
    } else {
        AgentId::Truck(k - game.num_cars())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactnessReport {
    pub trials: usize,
    /// Largest `|dPotential - dUtility|` seen.
    pub max_error: f64,
}

impl ExactnessReport {
    pub fn passed(&self) -> bool {
        self.max_error <= POTENTIAL_TOLERANCE
    }
}

/// Compares potential and utility changes over `trials` random unilateral
/// deviations from uniformly random profiles.
pub fn check_exactness<R: Rng + ?Sized>(
    kind: PotentialKind,
    game: &Game,
    trials: usize,
    rng: &mut R,
) -> Result<ExactnessReport> {
    if game.num_cars() + game.num_trucks() == 0 {
        return Err(GameError::config("population", "no agents to move"));
    }
    let mut max_error: f64 = 0.0;
    for _ in 0..trials {
        let profile = random_profile(game, rng);
        let mover = random_agent(game, rng);
        let to = Interval::from_index(rng.random_range(0..game.intervals()));
        let (d_potential, d_utility) = delta_move(kind, &profile, mover, to, game)?;
        max_error = max_error.max((d_potential - d_utility).abs());
    }
    Ok(ExactnessReport { trials, max_error })
}

/// Samples `trials` random 4-cycles and returns the first whose sum exceeds
/// [`CYCLE_TOLERANCE`]. For games too large to enumerate.
pub fn search_four_cycles<R: Rng + ?Sized>(
    game: &Game,
    trials: usize,
    rng: &mut R,
) -> Result<Option<FourCycle>> {
    if game.num_cars() + game.num_trucks() < 2 || game.intervals() < 2 {
        return Ok(None);
    }
    let r = game.intervals();
    for _ in 0..trials {
        let start = random_profile(game, rng);
        let p = random_agent(game, rng);
        let q = loop {
            let q = random_agent(game, rng);
            if q != p {
                break q;
            }
        };
        let other = |from: Interval, rng: &mut R| {
            let k = rng.random_range(0..r - 1);
            Interval::from_index(if k >= from.index() { k + 1 } else { k })
        };
        let p_to = other(start.action(p), rng);
        let q_to = other(start.action(q), rng);
        let violation = four_cycle_sum(game, &start, p, p_to, q, q_to)?;
        if violation.abs() > CYCLE_TOLERANCE {
            return Ok(Some(FourCycle {
                start,
                first: p,
                first_to: p_to,
                second: q,
                second_to: q_to,
                violation,
            }));
        }
    }
    Ok(None)
}
