//! Conditional algebras over finite Boolean algebras: towers of
//! conditioning stages, probability on those towers, and a small
//! propositional logic of conditionals with a derivation checker.

pub mod bayes;
pub mod boolalg;
pub mod dbl;
pub mod field;
pub mod prob;
