//! Property tests: axioms and invariants that must hold on randomized
//! inputs, not just on curated examples — norm axioms, duality pairing,
//! the 1-Lipschitz law, nearest-point bookkeeping, and lossless config
//! round-trips.

mod support;

use proptest::prelude::*;
use proxilab::norm::NormDescriptor;
use proxilab::projection::best_approximations;
use proxilab::scenario::{
    normalize, parse_config, serialize_config, CheckSpec, ProbeSpec, SamplerSpec, ScenarioConfig,
    SetSpec,
};
use proxilab::sets::ClosedSetRep;
use proxilab::solver::{solve_distance, SolverConfig};

fn vector(dim: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-5.0..5.0f64, dim)
}

fn norm_strategy(dim: usize) -> impl Strategy<Value = NormDescriptor> {
    prop_oneof![
        (1.0..6.0f64).prop_map(|p| NormDescriptor::Lp { p }),
        Just(NormDescriptor::Sup),
        (1.0..4.0f64, prop::collection::vec(0.2..5.0f64, dim))
            .prop_map(|(p, weights)| NormDescriptor::WeightedLp { p, weights }),
        prop::collection::vec(vector(dim), 1..3).prop_map(move |extra| {
            // Identity rows keep the family spanning; extras add slant.
            let mut functionals: Vec<Vec<f64>> = (0..dim)
                .map(|i| {
                    let mut e = vec![0.0; dim];
                    e[i] = 1.0;
                    e
                })
                .collect();
            functionals.extend(extra);
            NormDescriptor::Polyhedral { functionals }
        }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn norm_axioms_hold(
        (norm, u, v, t) in (2usize..=4)
            .prop_flat_map(|dim| (norm_strategy(dim), vector(dim), vector(dim), -4.0..4.0f64))
    ) {
        prop_assume!(norm.validate().is_ok());
        let nu = norm.eval(&u);
        let nv = norm.eval(&v);
        prop_assert!(nu >= 0.0 && nv >= 0.0);

        // Triangle inequality, with headroom for floating-point noise.
        let sum: Vec<f64> = u.iter().zip(&v).map(|(a, b)| a + b).collect();
        let slack = 1e-12 * (1.0 + nu + nv);
        prop_assert!(norm.eval(&sum) <= nu + nv + slack,
            "triangle: |u+v| = {} vs {} + {}", norm.eval(&sum), nu, nv);

        // Absolute homogeneity.
        let scaled: Vec<f64> = u.iter().map(|a| t * a).collect();
        let lhs = norm.eval(&scaled);
        let rhs = t.abs() * nu;
        prop_assert!((lhs - rhs).abs() <= 1e-11 * (1.0 + rhs),
            "homogeneity: |t u| = {lhs} vs |t| |u| = {rhs}");

        // Positive definiteness, away from the fuzzy zero neighborhood.
        if u.iter().any(|a| a.abs() > 1e-9) {
            prop_assert!(nu > 0.0);
        }
    }

    #[test]
    fn dual_pairing_never_beats_the_product(
        (norm, x, f) in (2usize..=4)
            .prop_flat_map(|dim| (norm_strategy(dim), vector(dim), vector(dim)))
    ) {
        prop_assume!(norm.validate().is_ok());
        let Ok(dual) = norm.dual_norm(&f) else {
            // Norms without a dual evaluator are outside this law.
            return Ok(());
        };
        let pairing: f64 = x.iter().zip(&f).map(|(a, b)| a * b).sum();
        let bound = dual * norm.eval(&x);
        prop_assert!(pairing.abs() <= bound * (1.0 + 1e-9) + 1e-12,
            "pairing {} vs dual product {}", pairing.abs(), bound);
    }

    #[test]
    fn distance_is_one_lipschitz_on_random_triangles(
        (a, b, c, u, v) in (vector(2), vector(2), vector(2), vector(2), vector(2))
    ) {
        let set = ClosedSetRep::Polytope { vertices: vec![a, b, c] };
        prop_assume!(set.validate().is_ok());
        let norm = NormDescriptor::Lp { p: 2.0 };
        let cfg = SolverConfig::default();
        let du = solve_distance(&norm, &set, &u, &cfg).unwrap().value;
        let dv = solve_distance(&norm, &set, &v, &cfg).unwrap().value;
        let gap: Vec<f64> = u.iter().zip(&v).map(|(x, y)| x - y).collect();
        prop_assert!((du - dv).abs() <= norm.eval(&gap) + 1e-6,
            "|{du} - {dv}| vs |u - v| = {}", norm.eval(&gap));
    }

    #[test]
    fn nearest_point_bookkeeping_is_consistent(
        (a, b, c, probe, seed) in (vector(2), vector(2), vector(2), vector(2), any::<u64>())
    ) {
        let vertices = vec![a, b, c];
        let set = ClosedSetRep::Polytope { vertices: vertices.clone() };
        prop_assume!(set.validate().is_ok());
        let norm = NormDescriptor::Lp { p: 2.0 };
        let cfg = SolverConfig { seed, ..SolverConfig::default() };
        let result = best_approximations(&norm, &set, &probe, &cfg, 64, None, 0).unwrap();

        // The reported distance is the norm gap at the reported point.
        let residual: Vec<f64> =
            probe.iter().zip(&result.point).map(|(x, y)| x - y).collect();
        prop_assert!((norm.eval(&residual) - result.distance).abs() <= 1e-9);

        // Cluster bookkeeping: one representative per cluster, diameter
        // nonnegative, and a unique verdict never coexists with several
        // clusters. (One wide cluster with `unique == false` is legal: a
        // tie continuum is connected but not a single point.)
        prop_assert!(!result.minimizers.is_empty());
        prop_assert_eq!(result.cluster_count, result.minimizers.len());
        if result.unique {
            prop_assert_eq!(result.cluster_count, 1);
        }
        prop_assert!(result.cluster_diameter >= 0.0);

        // Every representative lies in the set (soft membership).
        for m in &result.minimizers {
            prop_assert!(set.contains(m, 1e-6), "representative {m:?} escapes the set");
        }

        // No vertex beats the reported distance.
        for v in &vertices {
            let to_vertex: Vec<f64> = probe.iter().zip(v).map(|(x, y)| x - y).collect();
            prop_assert!(result.distance <= norm.eval(&to_vertex) + 1e-9);
        }
    }
}

// -------------------------------------------------------------------
// Scenario config round-trips and normalization.
// -------------------------------------------------------------------

fn check_strategy() -> impl Strategy<Value = CheckSpec> {
    prop_oneof![
        any::<bool>().prop_map(|expect_witness| CheckSpec::Distance { expect_witness }),
        (8usize..64, any::<bool>()).prop_map(|(samples, expect_witness)| {
            CheckSpec::BestApproximations {
                samples,
                expect_witness,
            }
        }),
        (8usize..64, prop::option::of(1usize..4), any::<bool>()).prop_map(
            |(samples, probe_limit, expect_witness)| CheckSpec::Chebyshev {
                samples,
                probe_limit,
                expect_witness,
            }
        ),
        (prop::option::of(1usize..4), any::<bool>()).prop_map(|(probe_limit, expect_witness)| {
            CheckSpec::Frechet {
                probe_limit,
                expect_witness,
            }
        }),
        (prop::option::of(1usize..3), any::<bool>()).prop_map(|(probe_limit, expect_witness)| {
            CheckSpec::ExposureConvergence {
                probe_limit,
                expect_witness,
            }
        }),
        (10usize..100, any::<bool>()).prop_map(|(pairs, expect_witness)| {
            CheckSpec::Lipschitz {
                pairs,
                instances: None,
                expect_witness,
            }
        }),
    ]
}

fn config_strategy() -> impl Strategy<Value = ScenarioConfig> {
    let name = "[a-z][a-z0-9_]{0,15}";
    let set = prop_oneof![
        prop::collection::vec(vector(2), 3..6).prop_map(|vertices| SetSpec::Polytope { vertices }),
        (vector(2), 0.5..3.0f64).prop_map(|(center, radius)| SetSpec::NormBall {
            center,
            radius,
            norm: NormDescriptor::Lp { p: 2.0 },
        }),
    ];
    let sampler = prop::option::of(
        (1usize..8, any::<u64>()).prop_map(|(count, seed)| SamplerSpec { count, seed }),
    );
    (
        name,
        any::<u64>(),
        0.25..4.0f64,
        1e-11..1e-6f64,
        set,
        (
            any::<bool>(),
            prop::collection::vec(vector(2), 0..3),
            sampler,
        ),
        prop::collection::vec(check_strategy(), 0..5),
        prop::option::of("[a-z]{1,8}\\.json"),
    )
        .prop_map(
            |(
                name,
                seed,
                budget_scale,
                tolerance,
                set,
                (origin, points, sampler),
                checks,
                output,
            )| {
                ScenarioConfig {
                    version: 1,
                    name,
                    seed,
                    budget_scale,
                    tolerance,
                    output,
                    norm: NormDescriptor::Lp { p: 2.0 },
                    set,
                    probes: ProbeSpec {
                        origin,
                        points,
                        sampler,
                    },
                    checks,
                }
            },
        )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn configs_round_trip_through_their_text_form(cfg in config_strategy()) {
        prop_assume!(cfg.validate().is_ok());
        let text = serialize_config(&cfg);
        let back = parse_config(&text)
            .unwrap_or_else(|e| panic!("rendered config failed to parse: {e}\n{text}"));
        prop_assert_eq!(&back, &cfg, "round-trip changed the config:\n{}", text);
    }

    #[test]
    fn normalization_inserts_prerequisites_and_is_idempotent(cfg in config_strategy()) {
        prop_assume!(cfg.validate().is_ok());
        let once = normalize(cfg);

        // Every convergence experiment must see a differentiability check
        // somewhere before it.
        for (i, check) in once.checks.iter().enumerate() {
            if matches!(check, CheckSpec::ExposureConvergence { .. }) {
                prop_assert!(
                    once.checks[..i]
                        .iter()
                        .any(|c| matches!(c, CheckSpec::Frechet { .. })),
                    "no differentiability check before experiment at {i}: {:?}",
                    once.checks
                );
            }
        }

        // A second pass changes nothing, and the result still round-trips.
        let twice = normalize(once.clone());
        prop_assert_eq!(&twice, &once);
        let text = serialize_config(&once);
        prop_assert_eq!(&parse_config(&text).unwrap(), &once);
    }
}
