//! Bayesian extension of a finite Boolean algebra.
//!
//! An [`ExtensionTower`] starts from a base algebra and grows one stage per
//! conditioning step. Conditioning on a nontrivial `b` replaces every atom
//! by ordered pairs `(ω, υ)` of atoms on opposite sides of `b`; when `b`
//! (or `∼b`) was conditioned before, only pairs whose ancestors at that
//! earlier step are transposes of each other survive. Each stage embeds
//! into the next through ψ, which sends an atom to the pairs having it as
//! first component, and `[x]y` is `(id ∪ t)(ψy ∩ ψx)` at the step that
//! conditioned `x`.

mod axioms;
mod dump;
mod pairing;
mod tower;

use thiserror::Error;

use crate::boolalg::{AlgebraId, BoolAlgError};

pub use axioms::{check_bayes_axioms, AxiomCheck, AxiomReport, Law, Violation};
pub use dump::{LineageDump, StageDump, TowerDump};
pub use pairing::{cantor_pair, cantor_unpair};
pub use tower::{ConditioningDomain, ExtensionTower, Lineage, Stage, DEFAULT_MAX_ATOMS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BayesError {
    #[error(transparent)]
    Algebra(#[from] BoolAlgError),
    #[error("element of algebra {0} does not belong to this tower")]
    ForeignElement(AlgebraId),
    #[error("stage {0} does not exist")]
    NoSuchStage(usize),
    #[error("cannot map stage {from} back to stage {to}")]
    BackwardMap { from: usize, to: usize },
    #[error("atom index {0} is out of range")]
    NotAnAtom(usize),
    #[error("atoms lie on the same side of the conditioning element")]
    SameSide,
    #[error("extension would create {atoms} atoms (limit {max})")]
    TooLarge { atoms: usize, max: usize },
    #[error("`{literal}` is not an element of the latest stage {stage}; add `@n` to name an earlier stage")]
    NotAtLatest { literal: String, stage: usize },
    #[error("bad stage suffix in `{0}`")]
    BadStageSuffix(String),
    #[error("invalid tower dump: {0}")]
    Dump(String),
}
