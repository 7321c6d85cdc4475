//! Necessary conditions for a relation to have a directed perfect map, and an
//! exhaustive perfect-map search for small universes.
//!
//! No known set of conditions is sufficient, so the checks can only ever
//! reject a relation. A positive answer comes only from [`find_pmap`]
//! producing an actual DAG.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::closure::{
    classify_stability_unverified, combined_representation, ensure_closed, Representation,
    StabilityPartition,
};
use crate::error::{Error, Result};
use crate::graph::{extract_models_with, Dag, SeparationVerdict};
use crate::limits::{guard, Limits};
use crate::relation::Relation;
use crate::triplet::{all_triplets, Triplet};
use crate::universe::Universe;
use crate::varset::VarSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConditionId {
    /// Symmetry.
    #[serde(rename = "C1")]
    C1,
    /// Composition/decomposition.
    #[serde(rename = "C2")]
    C2,
    /// Intersection.
    #[serde(rename = "C3")]
    C3,
    /// Weak union.
    #[serde(rename = "C4")]
    C4,
    /// Contraction.
    #[serde(rename = "C5")]
    C5,
    /// Weak transitivity.
    #[serde(rename = "C6")]
    C6,
    /// Chordality.
    #[serde(rename = "C7")]
    C7,
    /// Transitivity and composition of the stable part.
    StableTransitivity,
    /// Some statement is saturated, or some variable is on no side of any statement.
    SaturatedODominant,
    /// Every maximally s-dominant statement is saturated.
    AllSDominantsSaturated,
}

impl ConditionId {
    pub const CLASSICAL: [ConditionId; 7] = [
        ConditionId::C1,
        ConditionId::C2,
        ConditionId::C3,
        ConditionId::C4,
        ConditionId::C5,
        ConditionId::C6,
        ConditionId::C7,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ConditionId::C1 => "C1",
            ConditionId::C2 => "C2",
            ConditionId::C3 => "C3",
            ConditionId::C4 => "C4",
            ConditionId::C5 => "C5",
            ConditionId::C6 => "C6",
            ConditionId::C7 => "C7",
            ConditionId::StableTransitivity => "stable-transitivity",
            ConditionId::SaturatedODominant => "saturated-o-dominant",
            ConditionId::AllSDominantsSaturated => "all-s-dominants-saturated",
        }
    }
}

impl fmt::Display for ConditionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    NotRun,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::NotRun => "not-run",
        }
    }
}

/// The instantiation of a condition's quantified variables that violates it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// ⟨X,Y|Z⟩ whose mirror image is missing.
    Symmetry { x: VarSet, y: VarSet, z: VarSet },
    /// Sets X, Y, W, Z for the conditions C2–C5.
    Sets {
        x: VarSet,
        y: VarSet,
        w: VarSet,
        z: VarSet,
    },
    /// Sets X, Y, Z and the external variable γ.
    Transitivity {
        x: VarSet,
        y: VarSet,
        z: VarSet,
        gamma: usize,
    },
    /// Four distinct variables α, β, γ, δ.
    Chordality {
        alpha: usize,
        beta: usize,
        gamma: usize,
        delta: usize,
    },
    /// Dominant statements that are not saturated.
    Unsaturated(Vec<Triplet>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionEntry {
    pub id: ConditionId,
    pub status: Status,
    pub witness: Option<Witness>,
}

impl ConditionEntry {
    fn from_search(id: ConditionId, witness: Option<Witness>) -> Self {
        let status = if witness.is_some() {
            Status::Fail
        } else {
            Status::Pass
        };
        ConditionEntry {
            id,
            status,
            witness,
        }
    }

    pub fn not_run(id: ConditionId) -> Self {
        ConditionEntry {
            id,
            status: Status::NotRun,
            witness: None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConditionReport {
    entries: Vec<ConditionEntry>,
}

impl ConditionReport {
    pub fn entries(&self) -> &[ConditionEntry] {
        &self.entries
    }

    pub fn get(&self, id: ConditionId) -> Option<&ConditionEntry> {
        self.entries.iter().find(|e| e.id == id)
    }

    pub fn status(&self, id: ConditionId) -> Status {
        self.get(id).map_or(Status::NotRun, |e| e.status)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ConditionEntry> {
        self.entries.iter().filter(|e| e.status == Status::Fail)
    }

    pub fn any_failed(&self) -> bool {
        self.failures().next().is_some()
    }

    pub fn push(&mut self, entry: ConditionEntry) {
        self.entries.retain(|e| e.id != entry.id);
        self.entries.push(entry);
        self.entries.sort_by_key(|e| e.id);
    }

    pub fn merge(&mut self, other: ConditionReport) {
        for e in other.entries {
            self.push(e);
        }
    }
}

/// Membership test that ignores orientation.
struct Lookup<'a>(&'a HashSet<Triplet>);

impl Lookup<'_> {
    fn has(&self, x: VarSet, y: VarSet, z: VarSet) -> bool {
        !x.is_empty()
            && !y.is_empty()
            && x.is_disjoint(y)
            && (x | y).is_disjoint(z)
            && self.0.contains(&Triplet::canonical(x, y, z))
    }
}

/// Whether `witness` exhibits a violation of condition `id` in the relation
/// whose membership test is `has`.
fn violated(id: ConditionId, witness: &Witness, has: &Lookup<'_>) -> bool {
    match (id, witness) {
        (ConditionId::C1, &Witness::Symmetry { x, y, z }) => has.has(x, y, z) && !has.has(y, x, z),
        (ConditionId::C2, &Witness::Sets { x, y, w, z }) => {
            has.has(x, y | w, z) != (has.has(x, y, z) && has.has(x, w, z))
        }
        (ConditionId::C3, &Witness::Sets { x, y, w, z }) => {
            has.has(x, y, z | w) && has.has(x, w, z | y) && !has.has(x, y | w, z)
        }
        (ConditionId::C4, &Witness::Sets { x, y, w, z }) => {
            has.has(x, y | w, z) && !has.has(x, y, w | z)
        }
        (ConditionId::C5, &Witness::Sets { x, y, w, z }) => {
            has.has(x, y, z) && has.has(x, w, y | z) && !has.has(x, y | w, z)
        }
        (ConditionId::C6, &Witness::Transitivity { x, y, z, gamma }) => {
            let g = VarSet::singleton(gamma);
            has.has(x, y, z) && has.has(x, y, z | g) && !has.has(x, g, z) && !has.has(g, y, z)
        }
        (
            ConditionId::C7,
            &Witness::Chordality {
                alpha,
                beta,
                gamma,
                delta,
            },
        ) => {
            let [a, b, c, d] = [alpha, beta, gamma, delta].map(VarSet::singleton);
            has.has(a, b, c | d) && has.has(c, d, a | b) && !has.has(a, b, c) && !has.has(a, b, d)
        }
        (ConditionId::StableTransitivity, &Witness::Transitivity { x, y, z, gamma }) => {
            let g = VarSet::singleton(gamma);
            has.has(x, y, z)
                && ((!has.has(g, y, z) && !has.has(x, g, z))
                    || (!has.has(x | g, y, z) && !has.has(x, y | g, z)))
        }
        _ => false,
    }
}

/// True when `entry` is a failure whose witness reproduces the violation in
/// `relation`. Stable transitivity is replayed against the stable part.
pub fn replays(entry: &ConditionEntry, relation: &Relation) -> bool {
    let Some(witness) = &entry.witness else {
        return false;
    };
    let members: HashSet<Triplet> = if entry.id == ConditionId::StableTransitivity {
        relation.stable().iter().copied().collect()
    } else {
        relation.triplets().into_iter().collect()
    };
    entry.status == Status::Fail && violated(entry.id, witness, &Lookup(&members))
}

/// True when a failed saturation entry's witness is confirmed by `rep`.
pub fn replays_saturation(entry: &ConditionEntry, rep: &Representation) -> bool {
    let n = rep.universe().len();
    match (&entry.status, &entry.witness) {
        (Status::Fail, Some(Witness::Unsaturated(ts))) => match entry.id {
            ConditionId::SaturatedODominant => {
                rep.d_s().is_empty()
                    && ts.as_slice() == rep.d_u()
                    && ts.iter().all(|t| !t.is_saturated(n))
                    && ts.iter().fold(VarSet::EMPTY, |acc, t| acc | t.x() | t.y())
                        == VarSet::full(n)
            }
            ConditionId::AllSDominantsSaturated => {
                !ts.is_empty()
                    && ts
                        .iter()
                        .all(|t| !t.is_saturated(n) && rep.d_s().contains(t))
            }
            _ => false,
        },
        _ => false,
    }
}

/// The classical conditions C1–C7 on a relation closed under the semi-graphoid axioms.
pub fn check_conditions(closed: &Relation) -> Result<ConditionReport> {
    check_conditions_with(closed, &Limits::default())
}

pub fn check_conditions_with(closed: &Relation, limits: &Limits) -> Result<ConditionReport> {
    let n = closed.universe().len();
    guard("condition checks", n, limits.conditions)?;
    ensure_closed(closed)?;
    let members: HashSet<Triplet> = closed.triplets().into_iter().collect();
    let has = Lookup(&members);
    let full = VarSet::full(n);

    let mut first: [Option<Witness>; 7] = Default::default();
    let mut record = |id: ConditionId, w: Witness, has: &Lookup<'_>| {
        let slot = &mut first[id as usize];
        if slot.is_none() && violated(id, &w, has) {
            *slot = Some(w);
        }
    };

    let mut sorted: Vec<&Triplet> = members.iter().collect();
    sorted.sort();
    for t in sorted {
        for (x, y) in t.orientations() {
            record(ConditionId::C1, Witness::Symmetry { x, y, z: t.z() }, &has);
        }
    }

    // X, Y, W, Z in lexicographic order of their masks
    for x in full.nonempty_subsets() {
        for y in (full - x).nonempty_subsets() {
            for w in (full - x - y).nonempty_subsets() {
                for z in (full - x - y - w).subsets() {
                    for id in [
                        ConditionId::C2,
                        ConditionId::C3,
                        ConditionId::C4,
                        ConditionId::C5,
                    ] {
                        record(id, Witness::Sets { x, y, w, z }, &has);
                    }
                }
            }
            for z in (full - x - y).subsets() {
                for gamma in full - x - y - z {
                    record(
                        ConditionId::C6,
                        Witness::Transitivity { x, y, z, gamma },
                        &has,
                    );
                }
            }
        }
    }

    for alpha in 0..n {
        for beta in 0..n {
            for gamma in 0..n {
                for delta in 0..n {
                    let distinct = VarSet::from_indices([alpha, beta, gamma, delta]).len() == 4;
                    if distinct {
                        record(
                            ConditionId::C7,
                            Witness::Chordality {
                                alpha,
                                beta,
                                gamma,
                                delta,
                            },
                            &has,
                        );
                    }
                }
            }
        }
    }

    let mut report = ConditionReport::default();
    for (id, w) in ConditionId::CLASSICAL.into_iter().zip(first) {
        report.push(ConditionEntry::from_search(id, w));
    }
    Ok(report)
}

/// Transitivity and composition of the stable part: for every stable
/// ⟨X,Y|Z⟩ and γ ∉ XYZ, S⟨γ,Y|Z⟩ ∨ S⟨X,γ|Z⟩ and S⟨Xγ,Y|Z⟩ ∨ S⟨X,Yγ|Z⟩.
pub fn check_stable_transitivity(part: &StabilityPartition) -> Result<ConditionReport> {
    check_stable_transitivity_with(part, &Limits::default())
}

pub fn check_stable_transitivity_with(
    part: &StabilityPartition,
    limits: &Limits,
) -> Result<ConditionReport> {
    let n = part.universe().len();
    guard("condition checks", n, limits.conditions)?;
    let stable: HashSet<Triplet> = part.stable().iter().copied().collect();
    let has = Lookup(&stable);
    let full = VarSet::full(n);
    let witness = part.stable().iter().find_map(|t| {
        (full - t.span()).iter().find_map(|gamma| {
            let w = Witness::Transitivity {
                x: t.x(),
                y: t.y(),
                z: t.z(),
                gamma,
            };
            violated(ConditionId::StableTransitivity, &w, &has).then_some(w)
        })
    });
    let mut report = ConditionReport::default();
    report.push(ConditionEntry::from_search(
        ConditionId::StableTransitivity,
        witness,
    ));
    Ok(report)
}

/// Result of [`saturation_tests`], with the number of dominant statements inspected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SaturationOutcome {
    pub report: ConditionReport,
    pub inspected: usize,
}

/// The two linear scans over a representation.
///
/// The first passes when the relation has a saturated statement or some
/// variable never occurs on either side of a statement. The second case covers
/// DAGs whose only sink is adjacent to every other vertex, such as a collider
/// `a -> c <- b`: no saturated statement exists there, and the sink can never
/// be separated from anything. The second test passes when every s-dominant
/// statement is saturated. Each member of `d_u ∪ d_s` is inspected exactly once.
pub fn saturation_tests(rep: &Representation) -> SaturationOutcome {
    let n = rep.universe().len();
    let mut inspected = 0;
    let mut saturated_u = false;
    let mut sides = VarSet::EMPTY;
    for t in rep.d_u() {
        inspected += 1;
        saturated_u |= t.is_saturated(n);
        sides = sides | t.x() | t.y();
    }
    let mut unsaturated_s = Vec::new();
    for t in rep.d_s() {
        inspected += 1;
        sides = sides | t.x() | t.y();
        if !t.is_saturated(n) {
            unsaturated_s.push(*t);
        }
    }

    // a nonempty s-cone always holds ⟨X,Y|V∖XY⟩
    let exists = saturated_u || !rep.d_s().is_empty() || sides != VarSet::full(n);
    let mut report = ConditionReport::default();
    report.push(ConditionEntry::from_search(
        ConditionId::SaturatedODominant,
        (!exists).then(|| Witness::Unsaturated(rep.d_u().to_vec())),
    ));
    report.push(ConditionEntry::from_search(
        ConditionId::AllSDominantsSaturated,
        (!unsaturated_s.is_empty()).then_some(Witness::Unsaturated(unsaturated_s)),
    ));
    SaturationOutcome { report, inspected }
}

/// Every necessary condition on a closed relation: C1–C7, stable
/// transitivity of its stable part, and the saturation tests on the
/// representation built from that stable part.
pub fn assess(closed: &Relation) -> Result<ConditionReport> {
    assess_with(closed, &Limits::default())
}

pub fn assess_with(closed: &Relation, limits: &Limits) -> Result<ConditionReport> {
    let mut report = check_conditions_with(closed, limits)?;
    let part = classify_stability_unverified(closed);
    report.merge(check_stable_transitivity_with(&part, limits)?);
    report.merge(saturation_tests(&combined_representation(part.relation())).report);
    Ok(report)
}

/// True iff the d-separations of `g` are exactly the statements of `closed`.
pub fn is_pmap(g: &Dag, closed: &Relation) -> Result<bool> {
    is_pmap_with(g, closed, &Limits::default())
}

pub fn is_pmap_with(g: &Dag, closed: &Relation, limits: &Limits) -> Result<bool> {
    closed.check_universe(g.universe())?;
    let (model, _) = extract_models_with(g, limits)?;
    Ok(model.triplets() == closed.triplets())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    /// Some necessary condition fails, or exhaustive search found no perfect map.
    NotIsomorphic,
    /// All checked conditions pass; they are not sufficient.
    Inconclusive,
    /// A perfect map, found by exhaustive search.
    IsomorphicWithWitness(Dag),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PMapVerdict {
    pub outcome: Outcome,
    pub report: ConditionReport,
    /// Number of DAGs examined by the search; zero when no search ran.
    pub examined: usize,
}

/// The verdict the conditions alone support.
pub fn verdict_from_conditions(report: ConditionReport) -> PMapVerdict {
    let outcome = if report.any_failed() {
        Outcome::NotIsomorphic
    } else {
        Outcome::Inconclusive
    };
    PMapVerdict {
        outcome,
        report,
        examined: 0,
    }
}

/// Searches every labeled DAG over the universe, in [`labeled_dags`] order,
/// for a perfect map of `closed`.
pub fn find_pmap(closed: &Relation) -> Result<PMapVerdict> {
    find_pmap_with(closed, &Limits::default())
}

pub fn find_pmap_with(closed: &Relation, limits: &Limits) -> Result<PMapVerdict> {
    let n = closed.universe().len();
    guard("perfect-map search", n, limits.pmap_search)?;
    let report = assess_with(closed, limits)?;

    let statements = all_triplets(n);
    let members: HashSet<Triplet> = closed.triplets().into_iter().collect();
    let mut examined = 0;
    for g in labeled_dags(closed.universe().clone()) {
        examined += 1;
        let exact = statements.iter().all(|t| {
            let separated =
                g.separation_unchecked(t.x(), t.y(), t.z()) != SeparationVerdict::Connected;
            separated == members.contains(t)
        });
        if exact {
            return Ok(PMapVerdict {
                outcome: Outcome::IsomorphicWithWitness(g),
                report,
                examined,
            });
        }
    }
    Ok(PMapVerdict {
        outcome: Outcome::NotIsomorphic,
        report,
        examined,
    })
}

/// All labeled DAGs over `universe`. The candidate arcs (i, j), i ≠ j, are
/// numbered lexicographically and arc sets are visited in increasing order of
/// their bit encoding, keeping only the acyclic ones.
pub fn labeled_dags(universe: Arc<Universe>) -> impl Iterator<Item = Dag> {
    let n = universe.len();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    assert!(
        pairs.len() < 64,
        "labeled DAG enumeration needs fewer than 64 candidate arcs"
    );
    let masks = 0..(1u64 << pairs.len());
    masks.filter_map(move |mask| {
        let arcs: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|(bit, _)| mask & (1u64 << bit) != 0)
            .map(|(_, &arc)| arc)
            .collect();
        let two_cycle = arcs.iter().any(|&(i, j)| i < j && arcs.contains(&(j, i)));
        if two_cycle {
            return None;
        }
        match Dag::new(universe.clone(), arcs) {
            Ok(g) => Some(g),
            Err(Error::Cycle(_)) => None,
            Err(e) => unreachable!("enumerated arcs are valid: {e}"),
        }
    })
}
