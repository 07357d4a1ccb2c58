use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use permcover::charseq::HullTable;
use permcover::covering::{
    pullback_cycle, reduce_to_cyclic, snap, to_discrete_cover, Interval, PLCoveringSystem, PLMap,
    Rational,
};
use permcover::markov::CycleLength;
use permcover::{
    characteristic_sequence, convf, CharNumber, CyclicPerm, IndexInterval, MarkovGraph,
};

fn cycle(n: usize, seed: u64) -> CyclicPerm {
    CyclicPerm::random(n, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap()
}

proptest! {
    #[test]
    fn convf_is_monotone(n in 2usize..12, seed: u64, a in 1usize..12, b in 1usize..12, c in 1usize..12, d in 1usize..12) {
        let f = cycle(n, seed);
        let mut pts = [a.min(n), b.min(n), c.min(n), d.min(n)];
        pts.sort();
        // [pts[1], pts[2]] ⊆ [pts[0], pts[3]]
        let inner = IndexInterval::new(pts[1], pts[2]);
        let outer = IndexInterval::new(pts[0], pts[3]);
        prop_assert!(convf(&f, outer).contains(&convf(&f, inner)));
    }

    #[test]
    fn table_matches_direct(n in 2usize..14, seed: u64) {
        let f = cycle(n, seed);
        let mut table = HullTable::new(n);
        let direct = characteristic_sequence(&f).raw;
        prop_assert_eq!(table.raw_numbers(f.image()), direct.as_slice());
    }

    #[test]
    fn reflection_keeps_sorted_sequence(n in 2usize..14, seed: u64) {
        let f = cycle(n, seed);
        let g = f.reflect_conjugate();
        let a = characteristic_sequence(&f);
        let b = characteristic_sequence(&g);
        prop_assert_eq!(&a.sorted, &b.sorted);
        // position i of f corresponds to position n - i of the reflection
        let mut rev = b.raw.clone();
        rev.reverse();
        prop_assert_eq!(a.raw, rev);
    }

    #[test]
    fn numbers_are_shortest_cycles(n in 2usize..10, seed: u64) {
        let f = cycle(n, seed);
        let seq = characteristic_sequence(&f);
        let report = MarkovGraph::build(&f).cycle_report();
        for (m, c) in seq.raw.iter().zip(&report.cycles) {
            match (m, c.length) {
                (CharNumber::Steps(a), CycleLength::Steps(b)) => prop_assert_eq!(*a, b),
                other => prop_assert!(false, "unexpected {:?}", other),
            }
        }
    }

    #[test]
    fn rational_text_round_trips(p in -10_000i64..10_000, q in 1i64..10_000) {
        let x = Rational::new(p, q);
        prop_assert_eq!(x.to_string().parse::<Rational>().unwrap(), x);
    }

    #[test]
    fn pipeline_recovers_random_cycles(n in 2usize..9, seed: u64) {
        let f = cycle(n, seed);
        let sys = PLCoveringSystem::thickened(&f, &Rational::new(1, 4), &Rational::new(1, 8)).unwrap();
        let snapped = snap(&sys, 3).unwrap();
        let cover = to_discrete_cover(&snapped.system).unwrap().cover;
        prop_assert_eq!(reduce_to_cyclic(&cover).unwrap().perm, f);
    }

    #[test]
    fn graph_cycles_pull_back_exactly(n in 2usize..9, seed: u64) {
        let f = cycle(n, seed);
        let map = PLMap::extension(&f).unwrap();
        for c in MarkovGraph::build(&f).cycle_report().cycles {
            let chain: Vec<Interval> = c
                .witness
                .iter()
                .map(|&v| Interval::new(Rational::from(v), Rational::from(v + 1)))
                .collect();
            let p = pullback_cycle(&map, &chain).unwrap();
            prop_assert_eq!(map.iterate(&p.x, p.period).unwrap(), p.x.clone());
            prop_assert!(chain[0].contains_point(&p.x));
        }
    }
}
