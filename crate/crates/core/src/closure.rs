//! Semi-graphoid and stable closures.
//!
//! Two independent routes compute the same relations:
//!
//! * [`sem_close`] and [`stab_close`] apply the axioms literally until nothing
//!   new appears. They enumerate statements one by one and are guarded to small
//!   universes.
//! * [`sem_dominants`], [`stab_dominants`] and [`combined_representation`] run a
//!   fixpoint over dominant triplets only. Contraction (and composition, for
//!   the stable axioms) is instantiated between members of the generators'
//!   cones, and the working set is pruned back to an antichain after every
//!   round.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::limits::{guard, Limits};
use crate::relation::Relation;
use crate::triplet::{maximal, Order, Triplet};
use crate::universe::Universe;
use crate::varset::VarSet;

type Oriented = (VarSet, VarSet, VarSet);

/// Closure of `r` under symmetry, decomposition, weak union and contraction.
pub fn sem_close(r: &Relation) -> Result<Relation> {
    sem_close_with(r, &Limits::default())
}

pub fn sem_close_with(r: &Relation, limits: &Limits) -> Result<Relation> {
    let n = r.universe().len();
    guard("semi-graphoid closure", n, limits.closure)?;
    let closed = saturate(n, r.triplets(), false);
    Ok(Relation::from_trusted(r.universe().clone(), [], closed))
}

/// Closure of `r` under the stable semi-graphoid axioms: the semi-graphoid
/// axioms plus composition and strong union. Every statement of the result
/// is marked stable.
pub fn stab_close(r: &Relation) -> Result<Relation> {
    stab_close_with(r, &Limits::default())
}

pub fn stab_close_with(r: &Relation, limits: &Limits) -> Result<Relation> {
    let n = r.universe().len();
    guard("stable closure", n, limits.closure)?;
    let closed = saturate(n, r.triplets(), true);
    Ok(Relation::from_trusted(r.universe().clone(), closed, []))
}

/// Literal axiom application to a fixpoint.
fn saturate(n: usize, seed: BTreeSet<Triplet>, stable: bool) -> BTreeSet<Triplet> {
    let full = VarSet::full(n);
    let mut set: HashSet<Triplet> = seed.into_iter().collect();
    loop {
        let snapshot: Vec<Triplet> = set.iter().copied().collect();
        let mut derived = Vec::new();

        // (first side, conditioning set) -> second sides
        let mut index: HashMap<(VarSet, VarSet), Vec<VarSet>> = HashMap::new();
        for t in &snapshot {
            for (x, y) in t.orientations() {
                index.entry((x, t.z())).or_default().push(y);
            }
        }

        for t in &snapshot {
            let z = t.z();
            for (x, y) in t.orientations() {
                // decomposition and weak union
                for part in y.nonempty_subsets().filter(|&p| p != y) {
                    derived.push(Triplet::canonical(x, part, z));
                    derived.push(Triplet::canonical(x, part, z | (y - part)));
                }
                // contraction: ⟨x,y|z⟩ ∧ ⟨x,w|yz⟩ → ⟨x,yw|z⟩
                if let Some(ws) = index.get(&(x, y | z)) {
                    for &w in ws {
                        derived.push(Triplet::canonical(x, y | w, z));
                    }
                }
                if stable {
                    // strong union
                    for w in (full - x - y - z).nonempty_subsets() {
                        derived.push(Triplet::canonical(x, y, z | w));
                    }
                    // composition: ⟨x,y|z⟩ ∧ ⟨x,w|z⟩ → ⟨x,yw|z⟩
                    if let Some(ws) = index.get(&(x, z)) {
                        for &w in ws {
                            derived.push(Triplet::canonical(x, y | w, z));
                        }
                    }
                }
            }
        }

        let before = set.len();
        set.extend(derived);
        if set.len() == before {
            return set.into_iter().collect();
        }
    }
}

/// Some statement derivable from `r` in one axiom step but missing from it,
/// or `None` if `r` is closed under the semi-graphoid axioms.
pub fn missing_consequence(r: &Relation) -> Option<Triplet> {
    let members = r.triplets();
    let mut index: BTreeMap<(VarSet, VarSet), Vec<VarSet>> = BTreeMap::new();
    for t in &members {
        for (x, y) in t.orientations() {
            index.entry((x, t.z())).or_default().push(y);
        }
    }
    for t in &members {
        let z = t.z();
        for (x, y) in t.orientations() {
            for part in y.nonempty_subsets().filter(|&p| p != y) {
                for c in [
                    Triplet::canonical(x, part, z),
                    Triplet::canonical(x, part, z | (y - part)),
                ] {
                    if !members.contains(&c) {
                        return Some(c);
                    }
                }
            }
            if let Some(ws) = index.get(&(x, y | z)) {
                for &w in ws {
                    let c = Triplet::canonical(x, y | w, z);
                    if !members.contains(&c) {
                        return Some(c);
                    }
                }
            }
        }
    }
    None
}

/// Fails with [`Error::NotClosed`] unless `r` is closed under the semi-graphoid axioms.
pub fn ensure_closed(r: &Relation) -> Result<()> {
    match missing_consequence(r) {
        Some(t) => Err(Error::NotClosed {
            missing: t.display(r.universe()).to_string(),
        }),
        None => Ok(()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Kind {
    O,
    S,
}

impl Kind {
    fn order(self) -> Order {
        match self {
            Kind::O => Order::O,
            Kind::S => Order::S,
        }
    }
}

/// Dominant-triplet fixpoint. `fixed` are s-dominant generators whose cones
/// are already closed; the growing set has cones of kind `kind`.
struct Fixpoint {
    n: usize,
    kind: Kind,
    compose: bool,
    fixed: Vec<Triplet>,
    cones: HashMap<(Triplet, Kind), Vec<Oriented>>,
}

impl Fixpoint {
    fn new(n: usize, kind: Kind, compose: bool, fixed: Vec<Triplet>) -> Self {
        Fixpoint {
            n,
            kind,
            compose,
            fixed,
            cones: HashMap::new(),
        }
    }

    fn covered(&self, t: &Triplet, gens: &[Triplet]) -> bool {
        self.fixed.iter().any(|f| f.s_dominates(t))
            || gens.iter().any(|g| g.dominates(t, self.kind.order()))
    }

    fn prune(&self, items: &[Triplet]) -> Vec<Triplet> {
        maximal(items, self.kind.order())
            .into_iter()
            .filter(|t| !self.fixed.iter().any(|f| f.s_dominates(t)))
            .collect()
    }

    fn cone(&mut self, t: Triplet, kind: Kind) -> &[Oriented] {
        let n = self.n;
        self.cones.entry((t, kind)).or_insert_with(|| match kind {
            Kind::O => t.o_cone_oriented().collect(),
            Kind::S => t.s_cone_oriented(n).collect(),
        })
    }

    /// Statements obtained by contraction (and composition) with a first
    /// premise from `first`'s cone and a second premise from `second`'s cone.
    /// Only the largest admissible second side is emitted; smaller ones yield
    /// o-dominated results.
    fn combine(&mut self, first: (Triplet, Kind), second: (Triplet, Kind), out: &mut Vec<Triplet>) {
        let compose = self.compose;
        let (t2, kind2) = second;
        let c = t2.z();
        let span2 = t2.span();
        let orientations = t2.orientations();
        for &(x, y, z) in self.cone(first.0, first.1) {
            let k = y | z;
            for (a, b) in orientations {
                if !x.is_subset(a) {
                    continue;
                }
                // ⟨x,y|z⟩ ∧ ⟨x,w|yz⟩ → ⟨x,yw|z⟩
                if c.is_subset(k) && (kind2 == Kind::S || k.is_subset(span2)) {
                    let w = b - k;
                    if !w.is_empty() {
                        out.push(Triplet::canonical(x, y | w, z));
                    }
                }
                // ⟨x,y|z⟩ ∧ ⟨x,w|z⟩ → ⟨x,yw|z⟩
                if compose && kind2 == Kind::S && c.is_subset(z) {
                    let w = b - z - y;
                    if !w.is_empty() {
                        out.push(Triplet::canonical(x, y | w, z));
                    }
                }
            }
        }
    }

    fn run(mut self, seeds: impl IntoIterator<Item = Triplet>) -> Vec<Triplet> {
        let seeds: Vec<Triplet> = seeds.into_iter().collect();
        let mut gens = self.prune(&seeds);
        let mut fresh: HashSet<Triplet> = gens.iter().copied().collect();
        let mut first_round = true;

        loop {
            let mut all: Vec<(Triplet, Kind, bool)> = Vec::new();
            all.extend(self.fixed.iter().map(|&f| (f, Kind::S, first_round)));
            all.extend(gens.iter().map(|&g| (g, self.kind, fresh.contains(&g))));

            let mut candidates = Vec::new();
            for &(t1, k1, new1) in &all {
                for &(t2, k2, new2) in &all {
                    if new1 || new2 {
                        self.combine((t1, k1), (t2, k2), &mut candidates);
                    }
                }
            }
            candidates.sort();
            candidates.dedup();
            candidates.retain(|c| !self.covered(c, &gens));
            if candidates.is_empty() {
                return gens;
            }

            let old: HashSet<Triplet> = gens.iter().copied().collect();
            candidates.extend(gens.iter().copied());
            gens = self.prune(&candidates);
            fresh = gens.iter().filter(|g| !old.contains(g)).copied().collect();
            first_round = false;
        }
    }
}

/// The maximally o-dominant statements of the semi-graphoid closure of `r`.
/// Stability marks are ignored.
pub fn sem_dominants(r: &Relation) -> Vec<Triplet> {
    Fixpoint::new(r.universe().len(), Kind::O, false, Vec::new()).run(r.triplets())
}

/// The maximally s-dominant statements of the stable closure of `r`. Every
/// statement of `r` is treated as stable.
pub fn stab_dominants(r: &Relation) -> Vec<Triplet> {
    Fixpoint::new(r.universe().len(), Kind::S, true, Vec::new()).run(r.triplets())
}

/// A closed relation held as two antichains: the union of the o-cones of
/// `d_u` and the s-cones of `d_s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representation {
    universe: Arc<Universe>,
    d_u: Vec<Triplet>,
    d_s: Vec<Triplet>,
}

impl Representation {
    /// Assembles a representation from explicit dominant sets. Each set is
    /// reduced to its maximal elements; `d_u` members inside an s-cone of
    /// `d_s` are dropped.
    pub fn from_dominants(
        universe: Arc<Universe>,
        d_u: impl IntoIterator<Item = Triplet>,
        d_s: impl IntoIterator<Item = Triplet>,
    ) -> Result<Self> {
        let d_s: Vec<Triplet> = d_s.into_iter().collect();
        let d_u: Vec<Triplet> = d_u.into_iter().collect();
        for t in d_s.iter().chain(&d_u) {
            universe.check(t.span())?;
        }
        let d_s = maximal(&d_s, Order::S);
        let d_u = maximal(&d_u, Order::O)
            .into_iter()
            .filter(|t| !d_s.iter().any(|s| s.s_dominates(t)))
            .collect();
        Ok(Representation { universe, d_u, d_s })
    }

    pub fn universe(&self) -> &Arc<Universe> {
        &self.universe
    }

    /// Maximally o-dominant generators.
    pub fn d_u(&self) -> &[Triplet] {
        &self.d_u
    }

    /// Maximally s-dominant generators.
    pub fn d_s(&self) -> &[Triplet] {
        &self.d_s
    }

    pub fn is_empty(&self) -> bool {
        self.d_u.is_empty() && self.d_s.is_empty()
    }

    pub fn contains(&self, t: &Triplet) -> Result<bool> {
        self.universe.check(t.span())?;
        Ok(self.d_u.iter().any(|w| w.o_dominates(t)) || self.d_s.iter().any(|w| w.s_dominates(t)))
    }

    /// Enumerates every represented statement. Members of an s-cone are
    /// marked stable.
    pub fn expand(&self) -> Relation {
        let n = self.universe.len();
        let stable: BTreeSet<Triplet> = self.d_s.iter().flat_map(|t| t.s_cone(n)).collect();
        let rest: BTreeSet<Triplet> = self.d_u.iter().flat_map(|t| t.o_cone()).collect();
        Relation::from_trusted(self.universe.clone(), stable, rest)
    }
}

/// Builds the combined representation of sem(I^U ∪ stab(I^S)).
///
/// Saturated statements of I^U are promoted to I^S first; their o-cone and
/// s-cone coincide.
pub fn combined_representation(r: &Relation) -> Representation {
    let n = r.universe().len();
    let (promoted, unstable): (Vec<Triplet>, Vec<Triplet>) =
        r.unstable().iter().partition(|t| t.is_saturated(n));
    let stable: Vec<Triplet> = r.stable().iter().copied().chain(promoted).collect();

    let d_s = Fixpoint::new(n, Kind::S, true, Vec::new()).run(stable);
    let d_u = Fixpoint::new(n, Kind::O, false, d_s.clone()).run(unstable);
    Representation {
        universe: r.universe().clone(),
        d_u,
        d_s,
    }
}

/// The stable/unstable split of a closed relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilityPartition {
    relation: Relation,
}

impl StabilityPartition {
    /// The closed relation, with its stable part marked.
    pub fn relation(&self) -> &Relation {
        &self.relation
    }

    pub fn into_relation(self) -> Relation {
        self.relation
    }

    pub fn stable(&self) -> &BTreeSet<Triplet> {
        self.relation.stable()
    }

    pub fn unstable(&self) -> &BTreeSet<Triplet> {
        self.relation.unstable()
    }

    pub fn universe(&self) -> &Arc<Universe> {
        self.relation.universe()
    }
}

/// Marks ⟨X,Y|Z⟩ stable iff ⟨X,Y|Z'⟩ is present for every Z ⊂ Z' ⊆ V∖XY.
/// Saturated statements are stable. Fails if `closed` is not closed under
/// the semi-graphoid axioms.
pub fn classify_stability(closed: &Relation) -> Result<StabilityPartition> {
    ensure_closed(closed)?;
    Ok(classify_stability_unverified(closed))
}

/// [`classify_stability`] without the closedness check.
pub fn classify_stability_unverified(closed: &Relation) -> StabilityPartition {
    let n = closed.universe().len();
    let full = VarSet::full(n);
    let members = closed.triplets();
    let (stable, unstable): (Vec<Triplet>, Vec<Triplet>) = members.iter().partition(|t| {
        let free = full - t.span();
        free.nonempty_subsets()
            .all(|extra| members.contains(&Triplet::canonical(t.x(), t.y(), t.z() | extra)))
    });
    StabilityPartition {
        relation: Relation::from_trusted(closed.universe().clone(), stable, unstable),
    }
}
