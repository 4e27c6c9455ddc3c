use brauer_core::algebra::{cartan_matrix, hom_basis, multiply, total_dimension};
use brauer_core::config::{are_isomorphic, parse_configuration, random_configuration, BrauerConfiguration, RandomSpec};
use brauer_core::flip::{flip, satisfies_condition_e, Direction};
use brauer_core::mutation::{endomorphism_grid, mutation_complex, two_term_hom_dim};
use brauer_core::oracle::{brute_force_cartan, hom_chain_dim};
use brauer_core::TwoTermComplex;
use proptest::prelude::*;

fn configuration() -> impl Strategy<Value = BrauerConfiguration> {
    (2usize..16, any::<u64>(), 2usize..5, 1usize..3).prop_map(|(n, seed, hi, m)| {
        let mut spec = RandomSpec::new(n, seed);
        spec.max_polygon = hi;
        spec.max_multiplicity = m;
        if hi == 2 && n % 2 == 1 {
            spec.n_angles += 1;
        }
        random_configuration(&spec).unwrap()
    })
}

/// Renames every angle, vertex and polygon and rotates each cycle.
fn relabel(c: &BrauerConfiguration, shift: usize) -> BrauerConfiguration {
    let mut data = c.data().clone();
    for v in &mut data.vertices {
        v.id = format!("r{}", v.id);
        let k = shift % v.cycle.len();
        v.cycle.rotate_left(k);
        for a in &mut v.cycle {
            *a = format!("r{a}");
        }
    }
    for p in &mut data.polygons {
        p.id = format!("r{}", p.id);
        for a in &mut p.angles {
            *a = format!("r{a}");
        }
    }
    data.vertices.reverse();
    BrauerConfiguration::from_data(data).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn text_round_trip(c in configuration()) {
        prop_assert_eq!(parse_configuration(&c.to_bcf()).unwrap(), c);
    }

    #[test]
    fn reverse_is_an_involution(c in configuration()) {
        prop_assert_eq!(c.reverse().reverse(), c);
    }

    #[test]
    fn relabelled_copies_are_isomorphic(c in configuration(), shift in 0usize..5) {
        let r = relabel(&c, shift);
        let iso = are_isomorphic(&c, &r);
        prop_assert!(iso.is_some());
        prop_assert!(iso.unwrap().verify(&c, &r));
    }

    #[test]
    fn cartan_is_symmetric_and_enumerated(c in configuration()) {
        let m = cartan_matrix(&c);
        prop_assert_eq!(&m, &brute_force_cartan(&c));
        for (i, row) in m.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                prop_assert_eq!(*x, m[j][i]);
            }
        }
    }

    #[test]
    fn multiplication_is_associative(c in configuration(), picks in proptest::collection::vec(any::<prop::sample::Index>(), 6)) {
        let polys: Vec<_> = c.polygons().collect();
        let u = [0, 1, 2, 3].map(|k| polys[picks[k].index(polys.len())]);
        let (b1, b2, b3) = (hom_basis(&c, u[1], u[0]), hom_basis(&c, u[2], u[1]), hom_basis(&c, u[3], u[2]));
        prop_assume!(!b1.is_empty() && !b2.is_empty() && !b3.is_empty());
        let (p, q) = (b1[picks[4].index(b1.len())], b2[picks[5].index(b2.len())]);
        let r = b3[picks[4].index(b3.len())];
        let left = multiply(&c, p, q).unwrap().and_then(|pq| multiply(&c, pq, r).unwrap());
        let right = multiply(&c, q, r).unwrap().and_then(|qr| multiply(&c, p, qr).unwrap());
        prop_assert_eq!(left, right);
    }

    #[test]
    fn flips_keep_angles_polygons_and_multiplicities(c in configuration()) {
        for v in c.polygons().filter(|&v| satisfies_condition_e(&c, v, Direction::Left)) {
            let f = flip(&c, v, Direction::Left).unwrap();
            prop_assert_eq!(&f.config.data().polygons, &c.data().polygons);
            let mut m1: Vec<_> = c.vertices().map(|w| c.multiplicity(w)).collect();
            let mut m2: Vec<_> = f.config.vertices().map(|w| f.config.multiplicity(w)).collect();
            m1.sort_unstable();
            m2.sort_unstable();
            prop_assert_eq!(m1, m2);
            let grid = endomorphism_grid(&c, &mutation_complex(&c, v).unwrap());
            let total: i64 = grid.iter().flatten().sum();
            prop_assert_eq!(total as usize, total_dimension(&f.config));
        }
    }

    #[test]
    fn stalk_homotopy_dims_are_hom_dims(c in configuration()) {
        let polys: Vec<_> = c.polygons().collect();
        for &u in polys.iter().take(3) {
            for &w in polys.iter().take(3) {
                let (a, b) = (TwoTermComplex::stalk(u), TwoTermComplex::stalk(w));
                prop_assert_eq!(hom_chain_dim(&c, &a, &b, 0).unwrap(), cartan_matrix(&c)[u.0][w.0]);
                prop_assert_eq!(hom_chain_dim(&c, &a, &b, 1).unwrap(), 0);
            }
        }
    }

    #[test]
    fn valency_counts_occurrences(c in configuration()) {
        for v in c.vertices() {
            let total: usize = c.polygons().map(|p| c.occurrences(v, p)).sum();
            prop_assert_eq!(total, c.valency(v));
        }
    }

    #[test]
    fn euler_form_is_symmetric_on_summands(c in configuration(), pick in any::<prop::sample::Index>()) {
        let polys: Vec<_> = c.polygons().collect();
        let v = polys[pick.index(polys.len())];
        let s = mutation_complex(&c, v).unwrap().summands(&c);
        for t in &s {
            for u in &s {
                let e = two_term_hom_dim(&c, t, u);
                prop_assert_eq!(e, two_term_hom_dim(&c, u, t));
                prop_assert_eq!(e, hom_chain_dim(&c, t, u, 0).unwrap() as i64);
            }
        }
    }
}
