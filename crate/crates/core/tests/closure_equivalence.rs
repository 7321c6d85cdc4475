//! The dominant-triplet engines against the literal axiom closures.

use std::collections::BTreeSet;
use std::sync::Arc;

use proptest::prelude::*;
use stabind::closure::{classify_stability, sem_close, stab_close};
use stabind::triplet::all_triplets;
use stabind::{
    combined_representation, maximal, sem_dominants, stab_dominants, Order, Relation, Triplet,
    Universe, VarSet,
};

fn triplet_strategy(n: usize) -> impl Strategy<Value = Triplet> {
    // each variable goes to X, Y, Z or nowhere
    proptest::collection::vec(0u8..4, n).prop_filter_map("X and Y must be nonempty", |roles| {
        let pick = |r: u8| {
            roles
                .iter()
                .enumerate()
                .filter(|(_, &x)| x == r)
                .map(|(i, _)| i)
                .collect::<VarSet>()
        };
        Triplet::new(pick(1), pick(2), pick(3)).ok()
    })
}

fn relation_strategy() -> impl Strategy<Value = Relation> {
    (3usize..=5).prop_flat_map(|n| {
        proptest::collection::vec((triplet_strategy(n), any::<bool>()), 0..=4).prop_map(
            move |items| {
                let u = Arc::new(Universe::alphabetic(n).unwrap());
                let mut r = Relation::new(u);
                for (t, stable) in items {
                    if stable {
                        r.insert_stable(t).unwrap();
                    } else {
                        r.insert(t).unwrap();
                    }
                }
                r
            },
        )
    })
}

fn o_cones(ds: &[Triplet]) -> BTreeSet<Triplet> {
    ds.iter().flat_map(|t| t.o_cone()).collect()
}

fn s_cones(ds: &[Triplet], n: usize) -> BTreeSet<Triplet> {
    ds.iter().flat_map(|t| t.s_cone(n)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn sem_dominants_match_oracle(r in relation_strategy()) {
        let closed = sem_close(&r).unwrap().triplets();
        let ds = sem_dominants(&r);
        prop_assert_eq!(&ds, &maximal(&closed, Order::O));
        prop_assert_eq!(o_cones(&ds), closed);
    }

    #[test]
    fn stab_dominants_match_oracle(r in relation_strategy()) {
        let n = r.universe().len();
        let closed = stab_close(&r).unwrap().triplets();
        let ds = stab_dominants(&r);
        prop_assert_eq!(&ds, &maximal(&closed, Order::S));
        prop_assert_eq!(s_cones(&ds, n), closed);
    }

    #[test]
    fn representation_equation(r in relation_strategy()) {
        let u = r.universe().clone();
        let stable_seed = Relation::from_triplets(u.clone(), r.stable().iter().copied()).unwrap();
        let mut seed = Relation::from_triplets(u.clone(), r.unstable().iter().copied()).unwrap();
        for t in stab_close(&stable_seed).unwrap().triplets() {
            seed.insert(t).unwrap();
        }
        let expected = sem_close(&seed).unwrap().triplets();
        let rep = combined_representation(&r);
        for t in all_triplets(u.len()) {
            prop_assert_eq!(rep.contains(&t).unwrap(), expected.contains(&t), "{:?}", t);
        }
        // antichains, and no o-generator hidden in an s-cone
        prop_assert_eq!(maximal(rep.d_u(), Order::O), rep.d_u().to_vec());
        prop_assert_eq!(maximal(rep.d_s(), Order::S), rep.d_s().to_vec());
        for t in rep.d_u() {
            prop_assert!(!rep.d_s().iter().any(|s| s.s_dominates(t)));
        }
    }

    #[test]
    fn closures_are_extensive_idempotent_and_nested(r in relation_strategy()) {
        let sem = sem_close(&r).unwrap();
        let stab = stab_close(&r).unwrap();
        prop_assert!(r.triplets().is_subset(&sem.triplets()));
        prop_assert!(sem.triplets().is_subset(&stab.triplets()));
        prop_assert_eq!(sem_close(&sem).unwrap().triplets(), sem.triplets());
        prop_assert_eq!(stab_close(&stab).unwrap().triplets(), stab.triplets());
    }

    #[test]
    fn stable_part_is_a_stable_semigraphoid(r in relation_strategy()) {
        let closed = sem_close(&r).unwrap();
        let part = classify_stability(&closed).unwrap();
        let stable = Relation::from_triplets(r.universe().clone(), part.stable().iter().copied()).unwrap();
        prop_assert_eq!(stab_close(&stable).unwrap().triplets(), stable.triplets());
    }
}

#[test]
fn closures_are_monotone() {
    let u = Arc::new(Universe::alphabetic(4).unwrap());
    let all = all_triplets(4);
    for (i, a) in all.iter().enumerate().step_by(7) {
        let small = Relation::from_triplets(u.clone(), [*a]).unwrap();
        let b = all[(i * 13 + 5) % all.len()];
        let big = Relation::from_triplets(u.clone(), [*a, b]).unwrap();
        assert!(sem_close(&small)
            .unwrap()
            .triplets()
            .is_subset(&sem_close(&big).unwrap().triplets()));
        assert!(stab_close(&small)
            .unwrap()
            .triplets()
            .is_subset(&stab_close(&big).unwrap().triplets()));
    }
}
