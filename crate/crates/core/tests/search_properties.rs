use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use trireg::search::{fitness, random_regular, run_search, two_switch, SearchConfig};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn trajectories_stay_regular(n in 5usize..20, d in 1usize..5, seed in any::<u64>()) {
        let n = n + (n * d) % 2;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut g = random_regular(n, d, &mut rng).unwrap();
        for _ in 0..50 {
            match two_switch(&g, &mut rng) {
                Some(next) => g = next,
                None => break,
            }
            prop_assert!(g.degrees().iter().all(|&x| x == d));
        }
    }

    #[test]
    fn fitness_is_one_exactly_at_target(n in 4usize..16, d in 1usize..6, r3 in 0usize..6, seed in any::<u64>()) {
        prop_assume!(d < n);
        let n = n + (n * d) % 2;
        let g = random_regular(n, d, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let f = fitness(&g, r3).unwrap();
        let on_target = g.triangle_degrees().iter().all(|&t| t == r3);
        prop_assert_eq!(f.is_one(), on_target);
        prop_assert!(f > BigRational::from_integer(0.into()) && f <= BigRational::one());
    }
}

#[test]
fn traces_are_monotone_and_runs_reproducible() {
    for seed in [1u64, 2, 3] {
        let mut cfg = SearchConfig::new(6, 8, 12).with_seed(seed);
        cfg.restarts = 3;
        cfg.max_iterations = 3_000;
        let a = run_search(&cfg).unwrap();
        assert!(a.fitness_trace.windows(2).all(|w| w[0].1 < w[1].1));
        assert_eq!(a, run_search(&cfg).unwrap());
        assert!(a.best_graph.degrees().iter().all(|&d| d == 6));
    }
}
