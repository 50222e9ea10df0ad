//! Departure-time game between cars and platooning trucks on a single road.
//!
//! Vehicles pick one of `R` departure intervals. Interval velocity falls
//! linearly with its occupancy, and trucks additionally gain from platooning
//! with other trucks. Pricing policies (a car tax or a truck subsidy) make
//! the game an exact potential game, which the learners in [`learning`] use
//! to reach a pure Nash equilibrium.

pub mod error;
pub mod game;
pub mod learning;
pub mod metrics;
pub mod potential;
pub mod scenario;

pub use error::{GameError, Result};
pub use game::{ActionProfile, AgentId, Game, GameConfig, Interval, Occupancy, PricingPolicy};
pub use learning::{run, Algorithm, LearnerParams, Trace};
pub use metrics::Summary;
pub use scenario::ScenarioSpec;
