use proptest::prelude::*;
use proptest::test_runner::Config;

use qpbl::axioms::{check_axioms, check_bml, derive_bml, minimal_coefficient, BoundKind};
use qpbl::catalog;
use qpbl::fixedpoint::chain_bound;
use qpbl::topology::{ball, enumerate_topology, separation_class, SeparationClass};
use qpbl::{Point, SamplePlan, Space, Value};

mod suites;
use suites::*;

#[test]
fn every_map_has_a_home_and_a_pairing() {
    let pairs = all_pairings();
    for mid in catalog::mapping_ids() {
        assert!(catalog::home_space(mid).is_some(), "{mid}");
        assert!(pairs.iter().any(|(_, m, _)| m.name() == mid), "{mid}");
    }
}

proptest! {
    #![proptest_config(Config::with_cases(1000))]

    #[test]
    fn chained_bound_on_every_pairing(u in 0.0..=1.0f64, n in 0usize..20, gap in 1usize..=20) {
        let m = (n + gap).min(20).max(n + 1);
        for (space, map, scale) in all_pairings() {
            let (x0, o) = orbit_from(&space, &map, scale, u, m);
            let c = chain_bound(&space, &o, n, m, 1e-9).unwrap();
            let label = format!("{} {} x0={} n={n} m={m}: {c:?}", space.name(), map.name(), space.label(&x0));
            prop_assert!(rel_le(c.actual_forward, c.chained_forward) && rel_le(c.actual_backward, c.chained_backward), "{}", label);
            if n >= 1 {
                prop_assert!(rel_le(c.actual_forward, c.bound_forward) && rel_le(c.actual_backward, c.bound_backward), "{}", label);
            }
        }
    }

    #[test]
    fn catalog_axioms_on_random_triples(u in 0.0..=1.0f64, v in 0.0..=1.0f64, w in 0.0..=1.0f64) {
        for space in spaces() {
            let (x, y, z) = (point_at(&space, u), point_at(&space, v), point_at(&space, w));
            let d = |a: &Point, b: &Point| space.eval(a, b).unwrap();
            let tol = 1e-9 * d(&x, &y).to_f64().max(1.0);
            prop_assert!(d(&x, &x).le_tol(&d(&x, &y), tol));
            prop_assert!(d(&x, &x).le_tol(&d(&y, &x), tol));
            let rhs = space.coefficient().mul(d(&x, &z).add(d(&z, &y))).sub(d(&z, &z));
            prop_assert!(d(&x, &y).le_tol(&rhs, tol), "{}: ({}, {}, {})", space.name(), space.label(&x), space.label(&z), space.label(&y));
        }
    }

    #[test]
    fn ball_membership_matches_definition(u in 0.0..=1.0f64, v in 0.0..=1.0f64, eps_num in 1i128..=300) {
        let eps = Value::ratio(eps_num, 100);
        for space in spaces() {
            let (x, y) = (point_at(&space, u), point_at(&space, v));
            let b = ball(&space, &x, eps).unwrap();
            let bound = space.eval(&x, &x).unwrap().add(eps);
            let def = space.eval(&x, &y).unwrap().lt(&bound) && space.eval(&y, &x).unwrap().lt(&bound);
            prop_assert_eq!(b.contains(&y), def);
        }
    }

    #[test]
    fn random_tables(entries in prop::collection::vec(1i128..=12, 16), diag in prop::collection::vec(0i128..=12, 4), n in 2usize..=4) {
        // Diagonal clamped under every row and column entry so QPbl2-3 hold.
        let mut m = vec![vec![Value::ZERO; n]; n];
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    m[i][j] = Value::int(entries[i * 4 + j]);
                }
            }
        }
        for i in 0..n {
            let cap = (0..n).filter(|&j| j != i).map(|j| entries[i * 4 + j].min(entries[j * 4 + i])).min().unwrap();
            m[i][i] = Value::int(diag[i].min(cap));
        }
        let labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let space = Space::finite("random", labels, m, Value::ONE).unwrap();
        let plan = SamplePlan::default();
        let base = check_axioms(&space, Value::ONE, &plan).unwrap();
        prop_assume!(base[..3].iter().all(|r| r.passed));

        let b = minimal_coefficient(&space, &plan).unwrap();
        prop_assert_eq!(b.kind, BoundKind::Exact);
        let at_min = check_axioms(&space, b.value, &plan).unwrap();
        prop_assert!(at_min.iter().all(|r| r.passed));
        if Value::ONE.lt(&b.value) {
            let below = Value::ONE.add(b.value).div(Value::int(2));
            prop_assert!(!check_axioms(&space, below, &plan).unwrap()[3].passed);
        }

        let sized = space.with_coefficient(b.value).unwrap();
        let d = derive_bml(&sized, &plan).unwrap();
        prop_assert!(check_bml(&d, b.value, &plan).unwrap().iter().all(|r| r.passed));

        let top = enumerate_topology(&space).unwrap();
        prop_assert!(top.is_valid());
        let sep = separation_class(&top);
        prop_assert_eq!(sep.t2, sep.class == SeparationClass::T2);
        prop_assert!(!sep.t1 || sep.t0);
        prop_assert_eq!(sep.witness.is_none(), sep.class == SeparationClass::T2);
    }
}

#[test]
fn inner_delta_regressions() {
    // case-analysis radius too large (s = 1), then a sampled check too sparse (s = 2)
    inner_delta_contained(0.4369348275018015, 0.5843393392273782, 78).unwrap();
    inner_delta_contained(0.9335102976295375, 0.057822690757067724, 142).unwrap();
}
