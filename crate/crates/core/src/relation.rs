use std::collections::BTreeSet;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::triplet::Triplet;
use crate::universe::Universe;

/// A finite set of canonical statements over one universe, partitioned into
/// statements declared stable (I^S) and statements whose stability has not
/// been established (I^U). A relation built without marks has an empty
/// stable part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    universe: Arc<Universe>,
    stable: BTreeSet<Triplet>,
    unstable: BTreeSet<Triplet>,
}

impl Relation {
    pub fn new(universe: Arc<Universe>) -> Self {
        Relation {
            universe,
            stable: BTreeSet::new(),
            unstable: BTreeSet::new(),
        }
    }

    pub fn from_triplets<I>(universe: Arc<Universe>, triplets: I) -> Result<Self>
    where
        I: IntoIterator<Item = Triplet>,
    {
        let mut r = Relation::new(universe);
        for t in triplets {
            r.insert(t)?;
        }
        Ok(r)
    }

    pub fn from_parts<I, J>(universe: Arc<Universe>, stable: I, unstable: J) -> Result<Self>
    where
        I: IntoIterator<Item = Triplet>,
        J: IntoIterator<Item = Triplet>,
    {
        let mut r = Relation::from_triplets(universe, unstable)?;
        for t in stable {
            r.insert_stable(t)?;
        }
        Ok(r)
    }

    /// Builds from statements already known to lie in `universe`.
    pub(crate) fn from_trusted<I, J>(universe: Arc<Universe>, stable: I, unstable: J) -> Self
    where
        I: IntoIterator<Item = Triplet>,
        J: IntoIterator<Item = Triplet>,
    {
        let stable: BTreeSet<Triplet> = stable.into_iter().collect();
        let unstable = unstable
            .into_iter()
            .filter(|t| !stable.contains(t))
            .collect();
        Relation {
            universe,
            stable,
            unstable,
        }
    }

    pub fn universe(&self) -> &Arc<Universe> {
        &self.universe
    }

    /// Adds `t` to the unmarked part unless it is already present.
    pub fn insert(&mut self, t: Triplet) -> Result<bool> {
        self.universe.check(t.span())?;
        if self.stable.contains(&t) {
            return Ok(false);
        }
        Ok(self.unstable.insert(t))
    }

    /// Adds `t` to the stable part, moving it out of the unmarked part if needed.
    pub fn insert_stable(&mut self, t: Triplet) -> Result<bool> {
        self.universe.check(t.span())?;
        self.unstable.remove(&t);
        Ok(self.stable.insert(t))
    }

    pub fn contains(&self, t: &Triplet) -> bool {
        self.stable.contains(t) || self.unstable.contains(t)
    }

    /// `Some(true)` for stable members, `Some(false)` for unmarked members.
    pub fn is_stable(&self, t: &Triplet) -> Option<bool> {
        if self.stable.contains(t) {
            Some(true)
        } else if self.unstable.contains(t) {
            Some(false)
        } else {
            None
        }
    }

    pub fn stable(&self) -> &BTreeSet<Triplet> {
        &self.stable
    }

    pub fn unstable(&self) -> &BTreeSet<Triplet> {
        &self.unstable
    }

    /// All statements in canonical order.
    pub fn triplets(&self) -> BTreeSet<Triplet> {
        self.stable.union(&self.unstable).copied().collect()
    }

    pub fn len(&self) -> usize {
        self.stable.len() + self.unstable.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Same statements with every stability mark dropped.
    pub fn unmarked(&self) -> Relation {
        Relation::from_trusted(self.universe.clone(), [], self.triplets())
    }

    /// True when both relations contain the same statements, ignoring marks.
    pub fn same_statements(&self, other: &Relation) -> bool {
        self.universe == other.universe && self.triplets() == other.triplets()
    }

    pub(crate) fn check_universe(&self, other: &Universe) -> Result<()> {
        if *self.universe == *other {
            Ok(())
        } else {
            Err(Error::UniverseMismatch)
        }
    }
}
