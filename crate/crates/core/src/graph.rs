//! DAGs and d-separation.
//!
//! Blocking on a chain happens at an internal vertex `v`:
//!
//! * a non-collider (`←v→`, `→v→`, `←v←`) blocks when `v ∈ Z`, "by presence
//!   of information";
//! * a collider (`→v←`) blocks when neither `v` nor any descendant is in `Z`.
//!
//! Z d-separates X and Y when every chain is blocked, and strongly
//! d-separates them when every chain is blocked by presence of information.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits::{guard, Limits};
use crate::relation::Relation;
use crate::triplet::{all_triplets, Triplet};
use crate::universe::Universe;
use crate::varset::VarSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dag {
    universe: Arc<Universe>,
    arcs: Vec<(usize, usize)>,
    parents: Vec<VarSet>,
    children: Vec<VarSet>,
    order: Vec<usize>,
}

impl Dag {
    /// Validates `arcs` (tail, head) over `universe`: rejects unknown vertices,
    /// self-arcs, duplicates and cycles.
    pub fn new(
        universe: Arc<Universe>,
        arcs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let n = universe.len();
        let mut parents = vec![VarSet::EMPTY; n];
        let mut children = vec![VarSet::EMPTY; n];
        let mut list = Vec::new();
        for (tail, head) in arcs {
            for v in [tail, head] {
                if v >= n {
                    return Err(Error::IndexOutOfRange { index: v, size: n });
                }
            }
            if tail == head {
                return Err(Error::SelfArc(universe.name(tail).to_string()));
            }
            if children[tail].contains(head) {
                return Err(Error::DuplicateArc(
                    universe.name(tail).to_string(),
                    universe.name(head).to_string(),
                ));
            }
            children[tail] = children[tail].insert(head);
            parents[head] = parents[head].insert(tail);
            list.push((tail, head));
        }
        list.sort_unstable();

        let order = match topological_order(&parents, &children) {
            Ok(order) => order,
            Err(remaining) => {
                let cycle = find_cycle(&parents, remaining)
                    .into_iter()
                    .map(|v| universe.name(v).to_string())
                    .collect();
                return Err(Error::Cycle(cycle));
            }
        };
        Ok(Dag {
            universe,
            arcs: list,
            parents,
            children,
            order,
        })
    }

    pub fn from_names<S: AsRef<str>>(universe: Arc<Universe>, arcs: &[(S, S)]) -> Result<Self> {
        let indexed = arcs
            .iter()
            .map(|(t, h)| {
                Ok((
                    universe.index_of(t.as_ref())?,
                    universe.index_of(h.as_ref())?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        Dag::new(universe, indexed)
    }

    pub fn universe(&self) -> &Arc<Universe> {
        &self.universe
    }

    pub fn len(&self) -> usize {
        self.universe.len()
    }

    pub fn is_empty(&self) -> bool {
        self.universe.is_empty()
    }

    /// Arcs sorted by (tail, head).
    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn parents(&self, v: usize) -> VarSet {
        self.parents[v]
    }

    pub fn children(&self, v: usize) -> VarSet {
        self.children[v]
    }

    pub fn neighbours(&self, v: usize) -> VarSet {
        self.parents[v] | self.children[v]
    }

    pub fn has_arc(&self, tail: usize, head: usize) -> bool {
        self.children[tail].contains(head)
    }

    /// Topological order, smallest available index first.
    pub fn topological_order(&self) -> &[usize] {
        &self.order
    }

    /// `v` together with everything reachable from it.
    pub fn descendants(&self, v: usize) -> VarSet {
        let mut seen = VarSet::singleton(v);
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            for c in self.children[u] - seen {
                seen = seen.insert(c);
                stack.push(c);
            }
        }
        seen
    }

    /// `set` together with all of its ancestors.
    pub fn ancestral_closure(&self, set: VarSet) -> VarSet {
        let mut seen = set;
        let mut stack: Vec<usize> = set.iter().collect();
        while let Some(u) = stack.pop() {
            for p in self.parents[u] - seen {
                seen = seen.insert(p);
                stack.push(p);
            }
        }
        seen
    }

    /// Vertices without children.
    pub fn sinks(&self) -> VarSet {
        (0..self.len())
            .filter(|&v| self.children[v].is_empty())
            .collect()
    }

    fn check_query(&self, x: VarSet, y: VarSet, z: VarSet) -> Result<()> {
        self.universe.check(x | y | z)?;
        Triplet::new(x, y, z).map(|_| ())
    }

    /// Strong, weak or no d-separation of `x` and `y` given `z`.
    pub fn separation(&self, x: VarSet, y: VarSet, z: VarSet) -> Result<SeparationVerdict> {
        self.check_query(x, y, z)?;
        Ok(self.separation_unchecked(x, y, z))
    }

    pub fn separation_of(&self, t: &Triplet) -> Result<SeparationVerdict> {
        self.separation(t.x(), t.y(), t.z())
    }

    pub(crate) fn separation_unchecked(
        &self,
        x: VarSet,
        y: VarSet,
        z: VarSet,
    ) -> SeparationVerdict {
        if !self.reaches(x, y, z, Pass::Strong) {
            SeparationVerdict::Strong
        } else if !self.reaches(x, y, z, Pass::Active) {
            SeparationVerdict::Weak
        } else {
            SeparationVerdict::Connected
        }
    }

    /// Reachability over (vertex, direction of arrival) states. `Up` means the
    /// walk arrived from a child, `Down` from a parent.
    fn reaches(&self, x: VarSet, y: VarSet, z: VarSet, pass: Pass) -> bool {
        let open_colliders = match pass {
            Pass::Active => self.ancestral_closure(z),
            Pass::Strong => VarSet::full(self.len()),
        };
        let mut seen_up = VarSet::EMPTY;
        let mut seen_down = VarSet::EMPTY;
        let mut stack: Vec<(usize, bool)> = x.iter().map(|v| (v, true)).collect();
        while let Some((v, up)) = stack.pop() {
            let seen = if up { &mut seen_up } else { &mut seen_down };
            if seen.contains(v) {
                continue;
            }
            *seen = seen.insert(v);
            if y.contains(v) {
                return true;
            }
            let in_z = z.contains(v);
            if up {
                if !in_z {
                    stack.extend(self.parents[v].iter().map(|p| (p, true)));
                    stack.extend(self.children[v].iter().map(|c| (c, false)));
                }
            } else {
                if !in_z {
                    stack.extend(self.children[v].iter().map(|c| (c, false)));
                }
                if open_colliders.contains(v) {
                    stack.extend(self.parents[v].iter().map(|p| (p, true)));
                }
            }
        }
        false
    }
}

#[derive(Clone, Copy)]
enum Pass {
    /// Colliders open iff they or a descendant lie in Z.
    Active,
    /// Colliders always open; only non-colliders in Z block.
    Strong,
}

/// Kahn's algorithm. On failure returns the vertices left on cycles or downstream of them.
fn topological_order(parents: &[VarSet], children: &[VarSet]) -> Result<Vec<usize>, VarSet> {
    let n = parents.len();
    let mut indegree: Vec<usize> = parents.iter().map(|p| p.len()).collect();
    let mut ready: BTreeSet<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(v) = ready.pop_first() {
        order.push(v);
        for c in children[v] {
            indegree[c] -= 1;
            if indegree[c] == 0 {
                ready.insert(c);
            }
        }
    }
    if order.len() == n {
        Ok(order)
    } else {
        let placed: VarSet = order.iter().copied().collect();
        Err(VarSet::full(n) - placed)
    }
}

/// One directed cycle among `remaining`, listed in arc order starting from
/// its smallest vertex. Every vertex Kahn's algorithm leaves behind has a
/// parent that was also left behind, so walking parents must revisit a vertex.
fn find_cycle(parents: &[VarSet], remaining: VarSet) -> Vec<usize> {
    let mut v = remaining.first().expect("cycle set is nonempty");
    let mut walk = Vec::new();
    let mut position = BTreeMap::new();
    while !position.contains_key(&v) {
        position.insert(v, walk.len());
        walk.push(v);
        v = (parents[v] & remaining)
            .first()
            .expect("vertex left by Kahn's algorithm has a remaining parent");
    }
    let mut cycle: Vec<usize> = walk[position[&v]..].iter().rev().copied().collect();
    let smallest = (0..cycle.len()).min_by_key(|&i| cycle[i]).unwrap_or(0);
    cycle.rotate_left(smallest);
    cycle
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeparationVerdict {
    /// Every chain is blocked by presence of information.
    Strong,
    /// d-separated, but some chain is blocked only by absence of information.
    Weak,
    /// Some chain is active.
    Connected,
}

impl SeparationVerdict {
    pub fn is_separated(self) -> bool {
        !matches!(self, SeparationVerdict::Connected)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SeparationVerdict::Strong => "strong",
            SeparationVerdict::Weak => "weak",
            SeparationVerdict::Connected => "connected",
        }
    }
}

impl fmt::Display for SeparationVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Ground-truth separation verdict from explicit enumeration of every simple
/// chain between `x` and `y`.
pub fn chain_oracle(g: &Dag, x: VarSet, y: VarSet, z: VarSet) -> Result<SeparationVerdict> {
    chain_oracle_with(g, x, y, z, &Limits::default())
}

pub fn chain_oracle_with(
    g: &Dag,
    x: VarSet,
    y: VarSet,
    z: VarSet,
    limits: &Limits,
) -> Result<SeparationVerdict> {
    guard("chain enumeration", g.len(), limits.chain_oracle)?;
    g.check_query(x, y, z)?;
    let mut state = ChainScan {
        g,
        y,
        z,
        active: false,
        unblocked_by_presence: false,
    };
    for start in x {
        let mut path = vec![start];
        state.extend(&mut path, VarSet::singleton(start));
        if state.active {
            break;
        }
    }
    Ok(if state.active {
        SeparationVerdict::Connected
    } else if state.unblocked_by_presence {
        SeparationVerdict::Weak
    } else {
        SeparationVerdict::Strong
    })
}

struct ChainScan<'a> {
    g: &'a Dag,
    y: VarSet,
    z: VarSet,
    active: bool,
    unblocked_by_presence: bool,
}

impl ChainScan<'_> {
    fn extend(&mut self, path: &mut Vec<usize>, on_path: VarSet) {
        if self.active {
            return;
        }
        let last = *path.last().unwrap();
        if path.len() > 1 && self.y.contains(last) {
            self.evaluate(path);
        }
        for next in self.g.neighbours(last) - on_path {
            path.push(next);
            self.extend(path, on_path.insert(next));
            path.pop();
        }
    }

    fn evaluate(&mut self, chain: &[usize]) {
        let mut presence = false;
        let mut absence = false;
        for w in chain.windows(3) {
            let (a, v, b) = (w[0], w[1], w[2]);
            let collider = self.g.has_arc(a, v) && self.g.has_arc(b, v);
            if collider {
                if (self.g.descendants(v) & self.z).is_empty() {
                    absence = true;
                }
            } else if self.z.contains(v) {
                presence = true;
            }
        }
        if !presence {
            self.unblocked_by_presence = true;
            if !absence {
                self.active = true;
            }
        }
    }
}

/// The graphical independence model M_G and the strong model M_G^S.
pub fn extract_models(g: &Dag) -> Result<(Relation, Relation)> {
    extract_models_with(g, &Limits::default())
}

pub fn extract_models_with(g: &Dag, limits: &Limits) -> Result<(Relation, Relation)> {
    guard("model extraction", g.len(), limits.models)?;
    let mut model = Vec::new();
    let mut strong = Vec::new();
    for t in all_triplets(g.len()) {
        match g.separation_unchecked(t.x(), t.y(), t.z()) {
            SeparationVerdict::Strong => {
                model.push(t);
                strong.push(t);
            }
            SeparationVerdict::Weak => model.push(t),
            SeparationVerdict::Connected => {}
        }
    }
    let u = g.universe().clone();
    Ok((
        Relation::from_trusted(u.clone(), [], model),
        Relation::from_trusted(u, [], strong),
    ))
}

/// ⟨x, V∖(x ∪ π(x)) | π(x)⟩ for the smallest-index sink `x` whose remainder is nonempty.
pub fn terminal_saturated(g: &Dag) -> Option<Triplet> {
    let full = VarSet::full(g.len());
    g.sinks().iter().find_map(|x| {
        let parents = g.parents(x);
        let rest = full - parents - VarSet::singleton(x);
        (!rest.is_empty()).then(|| Triplet::canonical(VarSet::singleton(x), rest, parents))
    })
}

/// The sides an external variable can join without breaking a strong separation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SideSet {
    pub x_side: bool,
    pub y_side: bool,
}

impl SideSet {
    pub fn as_str(self) -> &'static str {
        match (self.x_side, self.y_side) {
            (true, true) => "both",
            (true, false) => "x",
            (false, true) => "y",
            (false, false) => "none",
        }
    }
}

impl fmt::Display for SideSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// For each variable γ outside XYZ of a strongly separated `t`, whether
/// ⟨Xγ,Y|Z⟩ and ⟨X,Yγ|Z⟩ are still strongly separated. Sides refer to the
/// canonical orientation of `t`.
pub fn classify_external(g: &Dag, t: &Triplet) -> Result<BTreeMap<usize, SideSet>> {
    g.universe().check(t.span())?;
    let (x, y, z) = (t.x(), t.y(), t.z());
    if g.separation_unchecked(x, y, z) != SeparationVerdict::Strong {
        return Err(Error::NotStronglySeparated(
            t.display(g.universe()).to_string(),
        ));
    }
    let strong =
        |a: VarSet, b: VarSet| g.separation_unchecked(a, b, z) == SeparationVerdict::Strong;
    Ok((VarSet::full(g.len()) - t.span())
        .iter()
        .map(|gamma| {
            let gs = VarSet::singleton(gamma);
            (
                gamma,
                SideSet {
                    x_side: strong(x | gs, y),
                    y_side: strong(x, y | gs),
                },
            )
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dag(names: &[&str], arcs: &[(&str, &str)]) -> Dag {
        let u = Arc::new(Universe::new(names.iter().copied()).unwrap());
        Dag::from_names(u, arcs).unwrap()
    }

    fn set(g: &Dag, names: &[&str]) -> VarSet {
        g.universe().set_of(names).unwrap()
    }

    fn verdict(g: &Dag, x: &[&str], y: &[&str], z: &[&str]) -> SeparationVerdict {
        let (x, y, z) = (set(g, x), set(g, y), set(g, z));
        let fast = g.separation(x, y, z).unwrap();
        assert_eq!(fast, chain_oracle(g, x, y, z).unwrap());
        fast
    }

    #[test]
    fn validation() {
        let g = dag(&["a", "b", "c"], &[("a", "b"), ("b", "c")]);
        assert_eq!(g.topological_order(), &[0, 1, 2]);

        let u = Arc::new(Universe::alphabetic(2).unwrap());
        assert_eq!(
            Dag::new(u.clone(), [(0, 1), (1, 0)]),
            Err(Error::Cycle(vec!["a".into(), "b".into()]))
        );
        assert_eq!(
            Dag::new(u.clone(), [(0, 0)]),
            Err(Error::SelfArc("a".into()))
        );
        assert_eq!(
            Dag::new(u.clone(), [(0, 1), (0, 1)]),
            Err(Error::DuplicateArc("a".into(), "b".into()))
        );
        assert!(matches!(
            Dag::new(u, [(0, 4)]),
            Err(Error::IndexOutOfRange { .. })
        ));

        let single = Dag::new(Arc::new(Universe::alphabetic(1).unwrap()), []).unwrap();
        assert_eq!(single.topological_order(), &[0]);
    }

    #[test]
    fn cycle_report_skips_downstream_vertices() {
        // a -> b -> c -> b, c -> d: the cycle is b, c
        let u = Arc::new(Universe::alphabetic(4).unwrap());
        let err = Dag::new(u, [(0, 1), (1, 2), (2, 1), (2, 3)]).unwrap_err();
        assert_eq!(err, Error::Cycle(vec!["b".into(), "c".into()]));
    }

    #[test]
    fn reverse_topological_tiebreak() {
        let g = dag(&["a", "b", "c"], &[("c", "a"), ("b", "a")]);
        assert_eq!(g.topological_order(), &[1, 2, 0]);
    }

    #[test]
    fn separation_examples() {
        let chain = dag(&["a", "b", "c"], &[("a", "b"), ("b", "c")]);
        assert_eq!(
            verdict(&chain, &["a"], &["c"], &["b"]),
            SeparationVerdict::Strong
        );

        let collider = dag(&["a", "b", "c"], &[("a", "b"), ("c", "b")]);
        assert_eq!(
            verdict(&collider, &["a"], &["c"], &[]),
            SeparationVerdict::Weak
        );

        let with_child = dag(&["a", "b", "c", "d"], &[("a", "b"), ("c", "b"), ("b", "d")]);
        assert_eq!(
            verdict(&with_child, &["a"], &["c"], &["d"]),
            SeparationVerdict::Connected
        );

        let fork = dag(&["a", "b", "c"], &[("b", "a"), ("b", "c")]);
        assert_eq!(
            verdict(&fork, &["a"], &["c"], &["b"]),
            SeparationVerdict::Strong
        );
    }

    #[test]
    fn chain_oracle_edge_cases() {
        let arc = dag(&["a", "b", "c"], &[("a", "b")]);
        assert_eq!(
            verdict(&arc, &["a"], &["b"], &["c"]),
            SeparationVerdict::Connected
        );
        let empty = dag(&["a", "b"], &[]);
        assert_eq!(
            verdict(&empty, &["a"], &["b"], &[]),
            SeparationVerdict::Strong
        );

        let big = Dag::new(Arc::new(Universe::alphabetic(9).unwrap()), []).unwrap();
        let (a, b) = (VarSet::singleton(0), VarSet::singleton(1));
        assert!(matches!(
            chain_oracle(&big, a, b, VarSet::EMPTY),
            Err(Error::GuardExceeded {
                size: 9,
                limit: 8,
                ..
            })
        ));
    }

    #[test]
    fn query_errors() {
        let g = dag(&["a", "b", "c"], &[]);
        let (a, b) = (VarSet::singleton(0), VarSet::singleton(1));
        assert_eq!(
            g.separation(a, a, VarSet::EMPTY),
            Err(Error::OverlappingSides)
        );
        assert_eq!(
            g.separation(VarSet::EMPTY, b, VarSet::EMPTY),
            Err(Error::EmptySide)
        );
        assert_eq!(g.separation(a, b, a), Err(Error::OverlappingSides));
    }

    #[test]
    fn model_examples() {
        let u3 = |g: &Dag, x: &str, y: &str, z: &[&str]| {
            Triplet::new(set(g, &[x]), set(g, &[y]), set(g, z)).unwrap()
        };
        let chain = dag(&["a", "b", "c"], &[("a", "b"), ("b", "c")]);
        let (m, s) = extract_models(&chain).unwrap();
        let expected: BTreeSet<_> = [u3(&chain, "a", "c", &["b"])].into();
        assert_eq!(m.triplets(), expected);
        assert_eq!(s.triplets(), expected);

        let collider = dag(&["a", "b", "c"], &[("a", "b"), ("c", "b")]);
        let (m, s) = extract_models(&collider).unwrap();
        assert_eq!(m.triplets(), [u3(&collider, "a", "c", &[])].into());
        assert!(s.is_empty());

        let empty = dag(&["a", "b"], &[]);
        let (m, s) = extract_models(&empty).unwrap();
        assert_eq!(m.triplets(), [u3(&empty, "a", "b", &[])].into());
        assert_eq!(s.triplets(), m.triplets());

        let big = Dag::new(Arc::new(Universe::alphabetic(8).unwrap()), []).unwrap();
        assert!(extract_models(&big).is_err());
    }

    #[test]
    fn terminal_saturated_examples() {
        let chain = dag(&["a", "b", "c"], &[("a", "b"), ("b", "c")]);
        let t = terminal_saturated(&chain).unwrap();
        assert_eq!(
            t,
            Triplet::new(
                set(&chain, &["a"]),
                set(&chain, &["c"]),
                set(&chain, &["b"])
            )
            .unwrap()
        );

        let complete = dag(&["a", "b", "c"], &[("a", "b"), ("a", "c"), ("b", "c")]);
        assert_eq!(terminal_saturated(&complete), None);

        let fork = dag(&["a", "b", "c"], &[("a", "b"), ("a", "c")]);
        let t = terminal_saturated(&fork).unwrap();
        assert_eq!(
            t,
            Triplet::new(set(&fork, &["b"]), set(&fork, &["c"]), set(&fork, &["a"])).unwrap()
        );
    }

    #[test]
    fn classify_external_examples() {
        let g = dag(&["x", "y", "z", "f"], &[("x", "z"), ("z", "y"), ("f", "z")]);
        let t = Triplet::new(set(&g, &["x"]), set(&g, &["y"]), set(&g, &["z"])).unwrap();
        let sides = classify_external(&g, &t).unwrap();
        assert_eq!(sides.len(), 1);
        assert_eq!(
            sides[&3],
            SideSet {
                x_side: true,
                y_side: false
            }
        );

        let g = dag(&["x", "y", "z", "w"], &[("x", "z"), ("z", "y")]);
        let sides = classify_external(&g, &t).unwrap();
        assert_eq!(sides[&3].as_str(), "both");

        let collider = dag(&["a", "b", "c"], &[("a", "b"), ("c", "b")]);
        let t = Triplet::new(
            set(&collider, &["a"]),
            set(&collider, &["c"]),
            set(&collider, &["b"]),
        )
        .unwrap();
        assert!(matches!(
            classify_external(&collider, &t),
            Err(Error::NotStronglySeparated(_))
        ));
    }
}
