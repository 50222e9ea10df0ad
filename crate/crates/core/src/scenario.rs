//! JSON scenario files and seeded population sampling.

use std::fs;
use std::path::{Path, PathBuf};

use rand::distr::weighted::WeightedIndex;
use rand::distr::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{GameError, Result};
use crate::game::{
    CarAgent, Game, GameConfig, Interval, Penalty, PlatoonBenefit, Population, PricingPolicy,
    TruckAgent, VelocityModel,
};
use crate::learning::{Algorithm, ForgettingSchedule, LearnerParams, Perturbation};
use crate::metrics::OutputFormat;

const SUM_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PenaltyShape {
    Absolute,
    LateOnly,
}

impl PenaltyShape {
    fn with_alpha(self, alpha: f64) -> Penalty {
        match self {
            PenaltyShape::Absolute => Penalty::Absolute { alpha },
            PenaltyShape::LateOnly => Penalty::LateOnly { alpha },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameSection {
    pub intervals: usize,
    pub velocity: VelocityModel,
    pub beta: f64,
    pub benefit: PlatoonBenefit,
    pub penalty: PenaltyShape,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaRange {
    pub lower: f64,
    pub upper: f64,
}

impl Default for AlphaRange {
    fn default() -> Self {
        AlphaRange {
            lower: -7.5,
            upper: -2.5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValueOfTimeGroup {
    pub delta: f64,
    pub probability: f64,
}

fn single_value_of_time() -> Vec<ValueOfTimeGroup> {
    vec![ValueOfTimeGroup {
        delta: 1.0,
        probability: 1.0,
    }]
}

/// The three car groups used for heterogeneous values of time.
pub fn value_of_time_groups() -> Vec<ValueOfTimeGroup> {
    vec![
        ValueOfTimeGroup {
            delta: 1.00,
            probability: 0.754,
        },
        ValueOfTimeGroup {
            delta: 3.37,
            probability: 0.036,
        },
        ValueOfTimeGroup {
            delta: 0.19,
            probability: 0.210,
        },
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PopulationSection {
    pub cars: usize,
    pub trucks: usize,
    /// Replaces the split by `M = round(ratio * (cars + trucks))`, keeping
    /// the total fixed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub equipment_ratio: Option<f64>,
    /// Probability of each preferred interval, `1..=R`.
    pub preference: Vec<f64>,
    /// Truck preferences; the car distribution when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truck_preference: Option<Vec<f64>>,
    #[serde(default)]
    pub alpha: AlphaRange,
    #[serde(default = "single_value_of_time")]
    pub value_of_time: Vec<ValueOfTimeGroup>,
}

impl PopulationSection {
    /// Car and truck counts after applying `equipment_ratio`.
    pub fn counts(&self) -> (usize, usize) {
        match self.equipment_ratio {
            Some(rho) => {
                let total = self.cars + self.trucks;
                let m = (rho * total as f64).round() as usize;
                (total - m, m)
            }
            None => (self.cars, self.trucks),
        }
    }
}

fn default_formats() -> Vec<OutputFormat> {
    vec![OutputFormat::Csv, OutputFormat::Json]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<PathBuf>,
    #[serde(default = "default_formats")]
    pub formats: Vec<OutputFormat>,
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection {
            dir: None,
            formats: default_formats(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSpec {
    pub seed: u64,
    pub game: GameSection,
    pub population: PopulationSection,
    pub policy: PricingPolicy,
    pub learner: LearnerParams,
    #[serde(default)]
    pub perturbations: Vec<Perturbation>,
    #[serde(default)]
    pub output: OutputSection,
}

fn check_distribution(field: &str, probs: &[f64], len: Option<usize>) -> Result<()> {
    if let Some(len) = len {
        if probs.len() != len {
            return Err(GameError::config(
                field,
                format!("expected {len} probabilities, found {}", probs.len()),
            ));
        }
    }
    if probs.is_empty() {
        return Err(GameError::config(field, "empty distribution"));
    }
    if probs.iter().any(|p| *p < 0.0 || !p.is_finite()) {
        return Err(GameError::config(
            field,
            "probabilities must be finite and nonnegative",
        ));
    }
    let sum: f64 = probs.iter().sum();
    if (sum - 1.0).abs() > SUM_TOLERANCE {
        return Err(GameError::config(
            field,
            format!("probabilities sum to {sum}, not 1"),
        ));
    }
    Ok(())
}

impl ScenarioSpec {
    /// Ten thousand cars, a hundred trucks and eight intervals with the car
    /// tax, learned by JSFP.
    pub fn paper_default() -> ScenarioSpec {
        ScenarioSpec {
            seed: 1,
            game: GameSection {
                intervals: 8,
                velocity: VelocityModel {
                    a: -0.0110,
                    b: 84.9696,
                },
                beta: 1e-3,
                benefit: PlatoonBenefit::Linear,
                penalty: PenaltyShape::Absolute,
            },
            population: PopulationSection {
                cars: 10_000,
                trucks: 100,
                equipment_ratio: None,
                preference: vec![
                    1.0 / 12.0,
                    1.0 / 6.0,
                    1.0 / 4.0,
                    1.0 / 6.0,
                    1.0 / 12.0,
                    1.0 / 12.0,
                    1.0 / 12.0,
                    1.0 / 12.0,
                ],
                truck_preference: None,
                alpha: AlphaRange::default(),
                value_of_time: single_value_of_time(),
            },
            policy: PricingPolicy::CarTax,
            learner: LearnerParams {
                algorithm: Algorithm::Jsfp,
                inertia: 0.4,
                forgetting: ForgettingSchedule::Constant { lambda: 0.03 },
                max_iters: 1000,
                stability_window: 50,
            },
            perturbations: Vec::new(),
            output: OutputSection::default(),
        }
    }

    pub fn game_config(&self) -> GameConfig {
        GameConfig {
            intervals: self.game.intervals,
            velocity: self.game.velocity,
            beta: self.game.beta,
            benefit: self.game.benefit,
            policy: self.policy,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.game_config().validate()?;
        let pop = &self.population;
        let r_count = self.game.intervals;
        check_distribution("population.preference", &pop.preference, Some(r_count))?;
        if let Some(tp) = &pop.truck_preference {
            check_distribution("population.truck_preference", tp, Some(r_count))?;
        }
        if let Some(rho) = pop.equipment_ratio {
            if !(0.0..=1.0).contains(&rho) {
                return Err(GameError::config(
                    "population.equipment_ratio",
                    "must lie in [0, 1]",
                ));
            }
        }
        let AlphaRange { lower, upper } = pop.alpha;
        if !(lower.is_finite() && lower <= upper && upper < 0.0) {
            return Err(GameError::config(
                "population.alpha",
                "need lower <= upper < 0",
            ));
        }
        let probs: Vec<f64> = pop.value_of_time.iter().map(|g| g.probability).collect();
        check_distribution("population.value_of_time", &probs, None)?;
        if pop
            .value_of_time
            .iter()
            .any(|g| g.delta <= 0.0 || !g.delta.is_finite())
        {
            return Err(GameError::config(
                "population.value_of_time.delta",
                "must be finite and > 0",
            ));
        }
        self.learner.validate()?;
        for p in &self.perturbations {
            p.validate(r_count)?;
        }
        Ok(())
    }

    /// Parses and validates a scenario document. Fields the schema does not
    /// know are returned as warnings.
    pub fn parse(text: &str, path: &Path) -> Result<(ScenarioSpec, Vec<String>)> {
        let mut unknown = Vec::new();
        let mut de = serde_json::Deserializer::from_str(text);
        let spec: ScenarioSpec =
            serde_ignored::deserialize(&mut de, |field| unknown.push(field.to_string()))
                .and_then(|spec| de.end().map(|_| spec))
                .map_err(|e| GameError::Parse {
                    path: path.to_path_buf(),
                    message: e.to_string(),
                })?;
        spec.validate()?;
        let warnings = unknown
            .into_iter()
            .map(|f| format!("{}: unknown field `{f}` ignored", path.display()))
            .collect();
        Ok((spec, warnings))
    }

    pub fn load(path: &Path) -> Result<ScenarioSpec> {
        let text = fs::read_to_string(path).map_err(|e| GameError::io(path, e))?;
        let (spec, warnings) = ScenarioSpec::parse(&text, path)?;
        for w in warnings {
            log::warn!("{w}");
        }
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("scenario serializes");
        s.push('\n');
        s
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json()).map_err(|e| GameError::io(path, e))
    }

    /// Draws the population from stream 0 of `self.seed`.
    pub fn sample_population(&self) -> Result<Population> {
        self.validate()?;
        let pop = &self.population;
        let (n, m) = pop.counts();
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(0);

        let weights = |field: &str, probs: &[f64]| {
            WeightedIndex::new(probs).map_err(|e| GameError::config(field, e.to_string()))
        };
        let car_pref = weights("population.preference", &pop.preference)?;
        let truck_pref = match &pop.truck_preference {
            Some(tp) => weights("population.truck_preference", tp)?,
            None => car_pref.clone(),
        };
        let vot_probs: Vec<f64> = pop.value_of_time.iter().map(|g| g.probability).collect();
        let vot = weights("population.value_of_time", &vot_probs)?;
        let alpha = Uniform::new_inclusive(pop.alpha.lower, pop.alpha.upper)
            .map_err(|e| GameError::config("population.alpha", e.to_string()))?;
        let shape = self.game.penalty;

        let cars = (0..n)
            .map(|_| {
                let preferred = Interval::from_index(car_pref.sample(&mut rng));
                let penalty = shape.with_alpha(alpha.sample(&mut rng));
                let value_of_time = pop.value_of_time[vot.sample(&mut rng)].delta;
                CarAgent {
                    preferred,
                    penalty,
                    value_of_time,
                }
            })
            .collect();
        let trucks = (0..m)
            .map(|_| {
                let preferred = Interval::from_index(truck_pref.sample(&mut rng));
                TruckAgent {
                    preferred,
                    penalty: shape.with_alpha(alpha.sample(&mut rng)),
                }
            })
            .collect();
        Ok(Population { cars, trucks })
    }

    pub fn build_game(&self) -> Result<Game> {
        Game::new(self.game_config(), self.sample_population()?)
    }
}
