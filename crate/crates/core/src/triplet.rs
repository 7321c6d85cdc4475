//! Canonical independence statements ⟨X,Y|Z⟩ and the two dominance orders.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::universe::Universe;
use crate::varset::VarSet;

/// An independence statement ⟨X,Y|Z⟩ in canonical orientation.
///
/// `x` and `y` are nonempty, the three components are pairwise disjoint and
/// `x < y` as masks, so a statement and its symmetric image share one value.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triplet {
    x: VarSet,
    y: VarSet,
    z: VarSet,
}

impl Triplet {
    /// Validates and canonicalizes ⟨x,y|z⟩.
    pub fn new(x: VarSet, y: VarSet, z: VarSet) -> Result<Self> {
        if x.is_empty() || y.is_empty() {
            return Err(Error::EmptySide);
        }
        if !x.is_disjoint(y) || !x.is_disjoint(z) || !y.is_disjoint(z) {
            return Err(Error::OverlappingSides);
        }
        Ok(Self::canonical(x, y, z))
    }

    /// Like [`Triplet::new`], additionally checking every index against `universe`.
    pub fn new_in(universe: &Universe, x: VarSet, y: VarSet, z: VarSet) -> Result<Self> {
        universe.check(x | y | z)?;
        Self::new(x, y, z)
    }

    pub fn from_names<S: AsRef<str>>(
        universe: &Universe,
        x: &[S],
        y: &[S],
        z: &[S],
    ) -> Result<Self> {
        Self::new(
            universe.set_of(x)?,
            universe.set_of(y)?,
            universe.set_of(z)?,
        )
    }

    /// Caller guarantees the components form a valid statement.
    pub(crate) fn canonical(x: VarSet, y: VarSet, z: VarSet) -> Self {
        debug_assert!(!x.is_empty() && !y.is_empty());
        debug_assert!(x.is_disjoint(y) && x.is_disjoint(z) && y.is_disjoint(z));
        if x <= y {
            Triplet { x, y, z }
        } else {
            Triplet { x: y, y: x, z }
        }
    }

    pub fn x(&self) -> VarSet {
        self.x
    }

    pub fn y(&self) -> VarSet {
        self.y
    }

    pub fn z(&self) -> VarSet {
        self.z
    }

    /// X ∪ Y ∪ Z.
    pub fn span(&self) -> VarSet {
        self.x | self.y | self.z
    }

    pub fn is_saturated(&self, universe_size: usize) -> bool {
        self.span() == VarSet::full(universe_size)
    }

    /// The two ordered readings (x, y) and (y, x).
    pub fn orientations(&self) -> [(VarSet, VarSet); 2] {
        [(self.x, self.y), (self.y, self.x)]
    }

    /// `other ≺ self`: other is derivable from self by decomposition and weak union.
    pub fn o_dominates(&self, other: &Triplet) -> bool {
        let span = self.span();
        self.z.is_subset(other.z) && other.z.is_subset(span) && self.sides_cover(other)
    }

    /// `other ≪ self`: other is derivable from self by decomposition and strong union.
    pub fn s_dominates(&self, other: &Triplet) -> bool {
        self.z.is_subset(other.z) && self.sides_cover(other)
    }

    pub fn dominates(&self, other: &Triplet, order: Order) -> bool {
        match order {
            Order::O => self.o_dominates(other),
            Order::S => self.s_dominates(other),
        }
    }

    fn sides_cover(&self, other: &Triplet) -> bool {
        (other.x.is_subset(self.x) && other.y.is_subset(self.y))
            || (other.x.is_subset(self.y) && other.y.is_subset(self.x))
    }

    /// All statements o-dominated by `self`, as oriented (x, y, z) tuples.
    /// Both orientations of every member are produced.
    pub fn o_cone_oriented(&self) -> impl Iterator<Item = (VarSet, VarSet, VarSet)> + '_ {
        let z = self.z;
        self.orientations().into_iter().flat_map(move |(a, b)| {
            a.nonempty_subsets().flat_map(move |t| {
                b.nonempty_subsets().flat_map(move |u| {
                    ((a - t) | (b - u))
                        .subsets()
                        .map(move |extra| (t, u, z | extra))
                })
            })
        })
    }

    /// All statements s-dominated by `self` within a universe of `n`
    /// variables, as oriented (x, y, z) tuples in both orientations.
    pub fn s_cone_oriented(&self, n: usize) -> impl Iterator<Item = (VarSet, VarSet, VarSet)> + '_ {
        let z = self.z;
        let full = VarSet::full(n);
        self.orientations().into_iter().flat_map(move |(a, b)| {
            a.nonempty_subsets().flat_map(move |t| {
                b.nonempty_subsets().flat_map(move |u| {
                    (full - t - u - z)
                        .subsets()
                        .map(move |extra| (t, u, z | extra))
                })
            })
        })
    }

    /// Canonical members of the o-cone.
    pub fn o_cone(&self) -> BTreeSet<Triplet> {
        self.o_cone_oriented()
            .map(|(x, y, z)| Triplet::canonical(x, y, z))
            .collect()
    }

    /// Canonical members of the s-cone within a universe of `n` variables.
    pub fn s_cone(&self, n: usize) -> BTreeSet<Triplet> {
        self.s_cone_oriented(n)
            .map(|(x, y, z)| Triplet::canonical(x, y, z))
            .collect()
    }

    pub fn display<'a>(&'a self, universe: &'a Universe) -> TripletDisplay<'a> {
        TripletDisplay {
            triplet: self,
            universe,
        }
    }
}

impl fmt::Debug for Triplet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨{:?},{:?}|{:?}⟩", self.x, self.y, self.z)
    }
}

/// Renders a statement in the `.ind` statement syntax, `a,b ; c | d`.
pub struct TripletDisplay<'a> {
    triplet: &'a Triplet,
    universe: &'a Universe,
}

impl fmt::Display for TripletDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let u = self.universe;
        let t = self.triplet;
        write!(f, "{} ; {} |", u.format_set(t.x), u.format_set(t.y))?;
        if !t.z.is_empty() {
            write!(f, " {}", u.format_set(t.z))?;
        }
        Ok(())
    }
}

/// Which dominance order to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    /// o-dominance (≺).
    O,
    /// s-dominance (≪).
    S,
}

/// The triplets of `ts` not strictly dominated by another member, sorted and deduplicated.
pub fn maximal<'a, I>(ts: I, order: Order) -> Vec<Triplet>
where
    I: IntoIterator<Item = &'a Triplet>,
{
    let items: BTreeSet<Triplet> = ts.into_iter().copied().collect();
    items
        .iter()
        .filter(|t| !items.iter().any(|w| w != *t && w.dominates(t, order)))
        .copied()
        .collect()
}

/// Every canonical triplet over a universe of `n` variables, in ascending order.
pub fn all_triplets(n: usize) -> Vec<Triplet> {
    let full = VarSet::full(n);
    let mut out = Vec::new();
    for x in full.nonempty_subsets() {
        for y in (full - x).nonempty_subsets() {
            if y < x {
                continue;
            }
            for z in (full - x - y).subsets() {
                out.push(Triplet { x, y, z });
            }
        }
    }
    out.sort();
    out
}
