use std::path::Path;

use platoon_game::game::{
    ActionProfile, CarAgent, Game, GameConfig, Interval, Penalty, PlatoonBenefit, Population,
    PricingPolicy, TruckAgent, VelocityModel,
};
use platoon_game::potential::{
    check_exactness, cross_difference, exact_potential_exists, unpriced_mismatch, PotentialKind,
    DEFAULT_PROFILE_GUARD,
};
use platoon_game::scenario::ScenarioSpec;
use platoon_game::GameError;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn two_player() -> Game {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios/two_player_unpriced.json");
    ScenarioSpec::load(&path).unwrap().build_game().unwrap()
}

fn with_policy(game: &Game, beta: f64, policy: PricingPolicy) -> Game {
    game.with_config(GameConfig {
        beta,
        policy,
        ..*game.config()
    })
    .unwrap()
}

fn small_game(
    intervals: usize,
    cars: usize,
    trucks: usize,
    benefit: PlatoonBenefit,
    policy: PricingPolicy,
) -> Game {
    let iv = |k: usize| Interval::new((1 + k % intervals) as u16);
    let cfg = GameConfig {
        intervals,
        velocity: VelocityModel {
            a: -0.0110,
            b: 84.9696,
        },
        beta: 1e-3,
        benefit,
        policy,
    };
    let pop = Population {
        cars: (0..cars)
            .map(|i| CarAgent {
                preferred: iv(i + 1),
                penalty: if i % 2 == 0 {
                    Penalty::Absolute {
                        alpha: -3.0 - i as f64,
                    }
                } else {
                    Penalty::LateOnly { alpha: -2.5 }
                },
                value_of_time: 1.0,
            })
            .collect(),
        trucks: (0..trucks)
            .map(|j| TruckAgent {
                preferred: iv(2 * j),
                penalty: Penalty::Absolute {
                    alpha: -4.0 - j as f64,
                },
            })
            .collect(),
    };
    Game::new(cfg, pop).unwrap()
}

fn all_profiles(game: &Game) -> Vec<ActionProfile> {
    let r = game.intervals();
    let k = game.num_cars() + game.num_trucks();
    (0..r.pow(k as u32))
        .map(|mut code| {
            let mut digits = Vec::with_capacity(k);
            for _ in 0..k {
                digits.push(Interval::new((code % r + 1) as u16));
                code /= r;
            }
            let trucks = digits.split_off(game.num_cars());
            ActionProfile {
                cars: digits,
                trucks,
            }
        })
        .collect()
}

#[test]
fn two_player_violation_has_closed_form_magnitude() {
    let game = two_player();
    assert_eq!(game.config().policy, PricingPolicy::NoPricing);
    let verdict = exact_potential_exists(&game, DEFAULT_PROFILE_GUARD).unwrap();
    assert!(!verdict.exists);
    let cycle = verdict.counterexample.unwrap();
    let expected = (2.0 * game.config().velocity.a * game.config().beta).abs();
    assert!((expected - 2.2e-5).abs() < 1e-15);
    assert!(
        (cycle.violation.abs() - expected).abs() <= 1e-12,
        "{}",
        cycle.violation
    );
}

#[test]
fn pricing_or_zero_beta_restores_the_potential() {
    let base = two_player();
    for (beta, policy) in [
        (1e-3, PricingPolicy::CarTax),
        (1e-3, PricingPolicy::TruckSubsidy { v0: 85.0 }),
        (0.0, PricingPolicy::NoPricing),
    ] {
        let game = with_policy(&base, beta, policy);
        let verdict = exact_potential_exists(&game, DEFAULT_PROFILE_GUARD).unwrap();
        assert!(verdict.exists, "{policy:?} beta={beta}");
        assert!(verdict.cycles_checked > 0);
    }
}

#[test]
fn oracle_agrees_with_potentials_on_small_games() {
    for benefit in [
        PlatoonBenefit::Linear,
        PlatoonBenefit::Thresholded { tau: 2 },
    ] {
        let game = small_game(3, 2, 3, benefit, PricingPolicy::CarTax);
        assert!(
            exact_potential_exists(&game, DEFAULT_PROFILE_GUARD)
                .unwrap()
                .exists
        );
        let game = small_game(3, 2, 3, benefit, PricingPolicy::NoPricing);
        assert!(
            !exact_potential_exists(&game, DEFAULT_PROFILE_GUARD)
                .unwrap()
                .exists
        );
    }
    let game = small_game(
        3,
        2,
        3,
        PlatoonBenefit::Linear,
        PricingPolicy::TruckSubsidy { v0: 85.0 },
    );
    assert!(
        exact_potential_exists(&game, DEFAULT_PROFILE_GUARD)
            .unwrap()
            .exists
    );
}

// The subsidy is paid per truck while the platoon gain follows g, so with a
// threshold the two stop cancelling.
#[test]
fn subsidy_with_threshold_has_no_potential() {
    let game = small_game(
        3,
        1,
        3,
        PlatoonBenefit::Thresholded { tau: 2 },
        PricingPolicy::TruckSubsidy { v0: 85.0 },
    );
    assert!(
        !exact_potential_exists(&game, DEFAULT_PROFILE_GUARD)
            .unwrap()
            .exists
    );
}

#[test]
fn oracle_refuses_large_games() {
    let game = small_game(8, 6, 4, PlatoonBenefit::Linear, PricingPolicy::CarTax);
    assert!(matches!(
        exact_potential_exists(&game, 1 << 20),
        Err(GameError::SizeGuard { .. })
    ));
}

#[test]
fn closed_form_mismatch_is_exhaustively_exact() {
    for intervals in 2..=4 {
        for cars in 1..=3 {
            for trucks in 1..=3 {
                for benefit in [
                    PlatoonBenefit::Linear,
                    PlatoonBenefit::Thresholded { tau: 2 },
                ] {
                    let game =
                        small_game(intervals, cars, trucks, benefit, PricingPolicy::NoPricing);
                    for profile in all_profiles(&game) {
                        for i in 0..cars {
                            for j in 0..trucks {
                                for z in 0..intervals {
                                    for x in 0..intervals {
                                        let (z, x) = (
                                            Interval::new(z as u16 + 1),
                                            Interval::new(x as u16 + 1),
                                        );
                                        let report =
                                            cross_difference(&profile, i, j, z, x, &game).unwrap();
                                        let closed =
                                            unpriced_mismatch(&profile, i, j, z, x, &game).unwrap();
                                        assert!(
                                            (report.mismatch - closed).abs() <= 1e-12,
                                            "{profile:?} car {i}->{z} truck {j}->{x}: {} vs {closed}",
                                            report.mismatch
                                        );
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn sampled_exactness_at_moderate_scale() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios/small_car_tax.json");
    let tax = ScenarioSpec::load(&path).unwrap().build_game().unwrap();
    let subsidy = with_policy(&tax, 1e-3, PricingPolicy::TruckSubsidy { v0: 85.0 });
    for game in [tax, subsidy] {
        let kind = PotentialKind::for_policy(&game.config().policy).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let report = check_exactness(kind, &game, 2_000, &mut rng).unwrap();
        assert!(report.passed(), "{kind:?}: {}", report.max_error);
    }
}
