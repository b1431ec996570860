use proptest::prelude::*;

use cluster_angles::angle_matchings;
use cluster_angles::bipartite;
use cluster_angles::expand::{self, Backend, Options};
use cluster_angles::generate;
use cluster_angles::oracle::Seed;
use cluster_angles::polygon::{self, TPolygon};
use cluster_angles::qp;
use cluster_angles::snake;
use cluster_angles::surface::{ArcKind, TaggedArcSpec, Triangulation};

fn instance(seed: u64) -> (Triangulation, TaggedArcSpec, TPolygon) {
    let mut rng = generate::rng(seed);
    let (t, d) = generate::random_arc(&mut rng, 6, 5).unwrap();
    let p = match d.kind() {
        ArcKind::Plain => polygon::build_plain(&t, &d).unwrap(),
        _ => polygon::build_notched(&t, &d).unwrap(),
    };
    (t, d, p)
}

fn skew(n: usize, entries: &[i64]) -> Vec<Vec<i64>> {
    let mut b = vec![vec![0; n]; n];
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            b[i][j] = entries[k];
            b[j][i] = -entries[k];
            k += 1;
        }
    }
    b
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn minimal_angle_matching_is_unique(seed in any::<u64>()) {
        let (_, _, p) = instance(seed);
        let all = angle_matchings::enumerate(&p);
        prop_assert!(angle_matchings::minimal_among(&p, &all).is_ok());
        prop_assert!(all.iter().all(|m| angle_matchings::is_matching(&p, m)));
    }

    #[test]
    fn snake_differences_are_tile_boundaries(seed in any::<u64>()) {
        let (_, d, p) = instance(seed);
        prop_assume!(d.kind() == ArcKind::Plain);
        let g = snake::build_snake(&p).unwrap();
        let minimal = snake::minimal_pm(&g).unwrap();
        let all = snake::enumerate_pm(&g);
        prop_assert_eq!(all.len(), angle_matchings::enumerate(&p).len());
        for m in &all {
            prop_assert!(snake::height(&g, &minimal, m).is_ok());
        }
        prop_assert!(snake::height(&g, &minimal, &minimal).unwrap().is_empty());
    }

    #[test]
    fn bipartite_differences_are_square_boundaries(seed in any::<u64>()) {
        let (_, _, p) = instance(seed);
        let b = bipartite::build_bipartite(&p);
        let em = bipartite::minimal_pm(&p).unwrap();
        let am = angle_matchings::minimal_matching(&p).unwrap();
        for e in bipartite::enumerate_pm(&p, &b) {
            let mut a = e.clone();
            a.sort_by_key(|x| x.tri);
            prop_assert_eq!(bipartite::squares_of(&b, &em, &e).unwrap(), angle_matchings::y_support(&p, &am, &a));
        }
    }

    #[test]
    fn minimal_cuts_are_images_of_angle_matchings(seed in any::<u64>()) {
        let (_, _, p) = instance(seed);
        let q = qp::build_qp(&p).unwrap();
        prop_assert!(qp::check_rho(&p, &q, true));
        prop_assert_eq!(qp::minimal_cuts(&q, &p, true), qp::minimal_cuts(&q, &p, false));
    }

    #[test]
    fn backends_give_one_multiset(seed in any::<u64>()) {
        let (t, d, _) = instance(seed);
        let (_, reference) = expand::arc_terms(&t, &d, Backend::Angles).unwrap();
        for b in Backend::ALL {
            prop_assert_eq!(&expand::arc_terms(&t, &d, b).unwrap().1, &reference);
        }
    }

    #[test]
    fn specialization_and_positivity(seed in any::<u64>()) {
        let (t, d, _) = instance(seed);
        let v = expand::cluster_variable(&t, &d, &Options::default()).unwrap().value;
        let free = expand::cluster_variable(&t, &d, &Options { coefficient_free: true, ..Options::default() }).unwrap().value;
        prop_assert_eq!(v.set_y_one(), free);
        prop_assert!(!v.has_negative_coefficient());
    }

    #[test]
    fn f_vector_equals_intersections(seed in any::<u64>()) {
        let (t, d, _) = instance(seed);
        let f = expand::f_vector(&t, &d).unwrap();
        prop_assert!(f.agrees(), "{:?}", f);
    }

    #[test]
    fn mutation_is_an_involution(n in 2usize..5, entries in prop::collection::vec(-2i64..=2, 6), k in 1usize..5) {
        let k = 1 + (k - 1) % n;
        let s = Seed::principal(&skew(n, &entries[..n * (n - 1) / 2])).unwrap();
        let m = s.mutate(k).unwrap();
        prop_assert!(m.is_skew());
        prop_assert_eq!(m.mutate(k).unwrap(), s);
    }

    #[test]
    fn annulus_loop_elements_agree(seed in any::<u64>(), outer in 1usize..4, inner in 1usize..4) {
        let mut rng = generate::rng(seed);
        let (t, z) = generate::annulus(&mut rng, outer, inner).unwrap();
        let a = expand::loop_element(&t, &z, Backend::Angles, false).unwrap();
        let b = expand::loop_element(&t, &z, Backend::Snake, false).unwrap();
        prop_assert_eq!(a.value, b.value);
    }
}
