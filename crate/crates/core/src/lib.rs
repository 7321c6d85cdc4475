//! Reasoning about semi-graphoid independence relations.
//!
//! The crate covers four layers:
//!
//! * [`triplet`], [`relation`]: canonical statements ⟨X,Y|Z⟩ over a named
//!   [`Universe`], o-dominance and s-dominance.
//! * [`closure`]: semi-graphoid and stable closures, both by literal axiom
//!   application and by a fixpoint over dominant triplets, plus the combined
//!   o/s-dominant representation and stability classification.
//! * [`graph`]: DAGs with strong, weak and ordinary d-separation, graphical
//!   independence models and classification of external variables.
//! * [`pmap`]: necessary conditions for the existence of a directed perfect
//!   map, and an exhaustive perfect-map search for small universes.
//!
//! [`io`] reads and writes the `.ind` and `.dag` text formats and [`cli`]
//! drives everything from the command line.

pub mod cli;
pub mod closure;
pub mod error;
pub mod graph;
pub mod io;
pub mod limits;
pub mod pmap;
pub mod relation;
pub mod triplet;
pub mod universe;
pub mod varset;

pub use closure::{
    classify_stability, combined_representation, sem_close, sem_dominants, stab_close,
    stab_dominants, Representation, StabilityPartition,
};
pub use error::{Error, Result};

pub use graph::{Dag, SeparationVerdict, SideSet};
pub use limits::Limits;
pub use relation::Relation;
pub use triplet::{maximal, Order, Triplet};
pub use universe::Universe;
pub use varset::VarSet;
