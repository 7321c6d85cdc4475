//! Seeded random inputs shared by the integration tests.
#![allow(dead_code)]

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use stabind::{Dag, Relation, Triplet, Universe, VarSet};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn universe(n: usize) -> Arc<Universe> {
    Arc::new(Universe::alphabetic(n).unwrap())
}

/// Arcs follow a random vertex order, each present with probability `p`.
pub fn random_dag(rng: &mut impl Rng, n: usize, p: f64) -> Dag {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut arcs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(p) {
                arcs.push((order[i], order[j]));
            }
        }
    }
    Dag::new(universe(n), arcs).unwrap()
}

/// `count` DAGs with sizes cycling through `sizes` and densities between 0.15 and 0.75.
pub fn dag_corpus(seed: u64, sizes: &[usize], count: usize) -> Vec<Dag> {
    let mut rng = rng(seed);
    (0..count)
        .map(|i| {
            let p = rng.random_range(0.15..0.75);
            random_dag(&mut rng, sizes[i % sizes.len()], p)
        })
        .collect()
}

pub fn random_triplet(rng: &mut impl Rng, n: usize) -> Triplet {
    loop {
        let mut sides = [VarSet::EMPTY; 3];
        for v in 0..n {
            let role = rng.random_range(0..4usize);
            if role < 3 {
                sides[role] = sides[role].insert(v);
            }
        }
        if let Ok(t) = Triplet::new(sides[0], sides[1], sides[2]) {
            return t;
        }
    }
}

/// Up to four seed statements over 3 to 5 variables, each stable with probability one half.
pub fn random_relation(rng: &mut impl Rng) -> Relation {
    let n = rng.random_range(3..=5);
    let mut r = Relation::new(universe(n));
    for _ in 0..rng.random_range(0..=4) {
        let t = random_triplet(rng, n);
        if rng.random_bool(0.5) {
            r.insert_stable(t).unwrap();
        } else {
            r.insert(t).unwrap();
        }
    }
    r
}

/// Whether every chain between X and Y passes through Z.
pub fn z_separates(g: &Dag, x: VarSet, y: VarSet, z: VarSet) -> bool {
    let mut seen = x;
    let mut frontier = x;
    while !frontier.is_empty() {
        let mut next = VarSet::EMPTY;
        for v in frontier {
            next = next | g.neighbours(v);
        }
        next = next - z - seen;
        seen = seen | next;
        frontier = next;
    }
    seen.is_disjoint(y)
}
