use std::path::Path;

use platoon_game::game::PricingPolicy;
use platoon_game::learning::{Algorithm, Perturbation};
use platoon_game::scenario::{value_of_time_groups, ScenarioSpec};
use platoon_game::Interval;

fn main() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios");
    let base = ScenarioSpec::paper_default();
    base.save(&dir.join("paper_default.json")).unwrap();

    let mut s = base.clone();
    s.perturbations = vec![Perturbation {
        at_iteration: 50,
        intervals: vec![Interval::new(2), Interval::new(3), Interval::new(4)],
        velocity_divisor: 10.0,
    }];
    s.save(&dir.join("accident.json")).unwrap();

    let mut s = base.clone();
    s.population.value_of_time = value_of_time_groups();
    s.save(&dir.join("value_of_time.json")).unwrap();

    let mut s = base.clone();
    s.policy = PricingPolicy::TruckSubsidy { v0: 85.0 };
    s.learner.algorithm = Algorithm::Asfp;
    s.learner.max_iters = 2000;
    s.save(&dir.join("asfp_subsidy.json")).unwrap();

    let mut s = base.clone();
    s.policy = PricingPolicy::CarTaxDelayed { delay: 30 };
    s.learner.max_iters = 2000;
    s.save(&dir.join("delayed_tax.json")).unwrap();

    let mut s = base.clone();
    s.population.cars = 1;
    s.population.trucks = 1;
    s.game.intervals = 2;
    s.population.preference = vec![0.5, 0.5];
    s.policy = PricingPolicy::NoPricing;
    s.save(&dir.join("two_player_unpriced.json")).unwrap();

    let mut s = base.clone();
    s.population.cars = 50;
    s.population.trucks = 10;
    s.save(&dir.join("small_car_tax.json")).unwrap();
}
