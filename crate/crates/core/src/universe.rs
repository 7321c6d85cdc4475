use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::varset::VarSet;

/// Default upper bound on the number of variables in a universe.
pub const DEFAULT_MAX_VARIABLES: usize = 64;

/// An ordered set of named variables. Each name is bound to its position.
#[derive(Debug, Clone)]
pub struct Universe {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl Universe {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self::with_limit(names, DEFAULT_MAX_VARIABLES)
    }

    /// Builds a universe refusing more than `limit` variables. The limit is
    /// capped at 64, the width of [`VarSet`].
    pub fn with_limit<I, S>(names: I, limit: usize) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let limit = limit.min(DEFAULT_MAX_VARIABLES);
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::EmptyUniverse);
        }
        if names.len() > limit {
            return Err(Error::UniverseTooLarge {
                size: names.len(),
                limit,
            });
        }
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if !is_valid_name(name) {
                return Err(Error::InvalidName(name.clone()));
            }
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::DuplicateVariable(name.clone()));
            }
        }
        Ok(Universe { names, index })
    }

    /// Universe named `a`, `b`, `c`, ... (then `v26`, `v27`, ...).
    pub fn alphabetic(n: usize) -> Result<Self> {
        Self::new((0..n).map(|i| {
            if i < 26 {
                ((b'a' + i as u8) as char).to_string()
            } else {
                format!("v{i}")
            }
        }))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn full(&self) -> VarSet {
        VarSet::full(self.len())
    }

    pub fn set_of<I, S>(&self, names: I) -> Result<VarSet>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        names
            .into_iter()
            .map(|n| self.index_of(n.as_ref()).map(VarSet::singleton))
            .try_fold(VarSet::EMPTY, |acc, s| s.map(|s| acc | s))
    }

    /// Rejects sets that mention indices outside the universe.
    pub fn check(&self, set: VarSet) -> Result<()> {
        match (set - self.full()).first() {
            Some(index) => Err(Error::IndexOutOfRange {
                index,
                size: self.len(),
            }),
            None => Ok(()),
        }
    }

    /// Comma-separated names in universe order.
    pub fn format_set(&self, set: VarSet) -> String {
        set.iter()
            .map(|i| self.name(i))
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn set_names(&self, set: VarSet) -> Vec<String> {
        set.iter().map(|i| self.name(i).to_string()).collect()
    }
}

impl PartialEq for Universe {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names
    }
}

impl Eq for Universe {}

/// Word characters only: letters, digits, underscore.
pub fn is_valid_name(name: &str) -> bool {
    !name.is_empty() && name.chars().all(|c| c.is_alphanumeric() || c == '_')
}
