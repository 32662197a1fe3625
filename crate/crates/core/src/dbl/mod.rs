//! A propositional logic of conditionals.
//!
//! Propositions are built from atoms, `F`, implication and the conditional
//! `[X]Y`. A valuation sends atoms to elements of an [`ExtensionTower`]
//! stage and `[X]Y` to the tower's conditional, so a sequent
//! `X1 || … || Xn` holds when one of its disjuncts evaluates to ⊤.
//! Derivations are checked against a Hilbert system whose classical part is
//! a truth-table rule.
//!
//! [`ExtensionTower`]: crate::bayes::ExtensionTower

mod builder;
pub mod corpus;
mod derive;
mod parse;
mod semantics;
mod soundness;
mod syntax;

use thiserror::Error;

use crate::bayes::BayesError;

pub use builder::ProofBuilder;
pub use derive::{check_derivation, is_tautology, matches, substitute, CheckError, Derivation, Rule, Step, Theorem};
pub use parse::{parse_prop, parse_sequent};
pub use semantics::{
    evaluate, holds, search_counterexample, Counterexample, SearchOptions, SearchOutcome, Valuation,
};
pub use soundness::{check_soundness, SoundnessFailure, SoundnessOptions, SoundnessReport};
pub use syntax::{Prop, Sequent};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DblError {
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("no value for atom `{0}`")]
    Unbound(String),
    #[error("expected name=element, got `{0}`")]
    BadBinding(String),
    #[error("unknown rule `{0}`")]
    UnknownRule(String),
    #[error("invalid derivation file: {0}")]
    Json(String),
    #[error(transparent)]
    Bayes(#[from] BayesError),
}
