//! Exact probability on tower stages.
//!
//! A [`Distribution`] assigns a mass to every atom of one stage. It is
//! carried up the tower by [`extend_distribution`]: the pair atom `(ω, υ)`
//! receives `P(ω)·P(υ)/P(block(ω))`, where `block(ω)` collects the partners
//! `υ′` that survived next to `ω`. Without exclusions the block is the
//! whole opposite side; with them the rule is the one that keeps the total
//! at one and makes the new distribution restrict to the old one along ψ.
//! Strict positivity is required, and [`make_tangible`] supplies it by
//! mixing in an infinitesimal amount of a positive distribution.

mod extend;
mod lewis;
mod tangible;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bayes::{BayesError, ExtensionTower};
use crate::boolalg::{AlgebraId, BoolAlgError, Element, FiniteBooleanAlgebra};
use crate::field::{EpsScalar, FieldError, FieldTag, OrderedField, Rational};

pub use extend::{extend_distribution, extend_to, verify_conditional_law, LawReport};
pub use lewis::lewis_search;
pub use tangible::{hahn_witness, make_tangible, standard_project, uniform, Witness};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProbError {
    #[error(transparent)]
    Algebra(#[from] BoolAlgError),
    #[error(transparent)]
    Bayes(#[from] BayesError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("expected {expected} masses, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("negative mass {mass} on atom `{atom}`")]
    Negative { atom: String, mass: String },
    #[error("masses sum to {0}, not 1")]
    BadSum(String),
    #[error("no mass given for atom `{0}`")]
    MissingMass(String),
    #[error("distribution is not strictly positive; make it tangible first")]
    NotStrictlyPositive,
    #[error("element and distribution live on different algebras")]
    StageMismatch,
}

/// Masses on the atoms of one algebra, summing to one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Distribution<S> {
    stage: usize,
    algebra: AlgebraId,
    labels: Vec<String>,
    masses: Vec<S>,
}

impl<S: OrderedField> Distribution<S> {
    /// Masses in atom order for `alg`, which is stage `stage` of its tower.
    pub fn new(alg: &FiniteBooleanAlgebra, stage: usize, masses: Vec<S>) -> Result<Self, ProbError> {
        if masses.len() != alg.atom_count() {
            return Err(ProbError::WrongLength {
                expected: alg.atom_count(),
                got: masses.len(),
            });
        }
        for (label, m) in alg.labels().iter().zip(&masses) {
            if m.is_negative() {
                return Err(ProbError::Negative {
                    atom: label.clone(),
                    mass: m.to_string(),
                });
            }
        }
        let total = masses.iter().cloned().fold(S::zero(), |a, b| a + b);
        if total != S::one() {
            return Err(ProbError::BadSum(total.to_string()));
        }
        Ok(Distribution {
            stage,
            algebra: alg.id(),
            labels: alg.labels().to_vec(),
            masses,
        })
    }

    /// Masses by label; every atom must be listed.
    pub fn from_labels<'a>(
        alg: &FiniteBooleanAlgebra,
        stage: usize,
        masses: impl IntoIterator<Item = (&'a str, S)>,
    ) -> Result<Self, ProbError> {
        let mut slots: Vec<Option<S>> = vec![None; alg.atom_count()];
        for (label, m) in masses {
            let atom = alg
                .atom_by_label(label)
                .ok_or_else(|| BoolAlgError::UnknownLabel(label.to_string()))?;
            slots[atom.0] = Some(m);
        }
        let masses = slots
            .into_iter()
            .enumerate()
            .map(|(i, m)| m.ok_or_else(|| ProbError::MissingMass(alg.labels()[i].clone())))
            .collect::<Result<_, _>>()?;
        Self::new(alg, stage, masses)
    }

    pub(crate) fn from_parts_unchecked(
        alg: &FiniteBooleanAlgebra,
        stage: usize,
        masses: Vec<S>,
    ) -> Self {
        Distribution {
            stage,
            algebra: alg.id(),
            labels: alg.labels().to_vec(),
            masses,
        }
    }

    pub fn stage(&self) -> usize {
        self.stage
    }

    pub fn algebra(&self) -> AlgebraId {
        self.algebra
    }

    pub fn field(&self) -> FieldTag {
        S::TAG
    }

    pub fn masses(&self) -> &[S] {
        &self.masses
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn mass(&self, label: &str) -> Option<&S> {
        self.labels.iter().position(|l| l == label).map(|i| &self.masses[i])
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.masses.iter().all(OrderedField::is_positive)
    }

    /// `P(x)`: total mass of the atoms of `x`.
    pub fn prob_of(&self, x: &Element) -> Result<S, ProbError> {
        if x.algebra() != self.algebra {
            return Err(ProbError::StageMismatch);
        }
        Ok(x.atoms().fold(S::zero(), |acc, a| acc + self.masses[a.0].clone()))
    }

    /// `{ "stage": n, "masses": { label: scalar } }`
    pub fn spec(&self) -> DistributionSpec {
        DistributionSpec {
            stage: self.stage,
            masses: self
                .labels
                .iter()
                .cloned()
                .zip(self.masses.iter().map(ToString::to_string))
                .collect(),
        }
    }

    /// Reads a spec against the stage it names in `tower`.
    pub fn from_spec(spec: &DistributionSpec, tower: &ExtensionTower) -> Result<Self, ProbError> {
        let st = tower.stage(spec.stage)?;
        let masses = spec
            .masses
            .iter()
            .map(|(l, m)| Ok((l.as_str(), S::parse(m)?)))
            .collect::<Result<Vec<_>, ProbError>>()?;
        Self::from_labels(st.algebra(), spec.stage, masses)
    }
}

impl Distribution<Rational> {
    pub fn to_eps(&self) -> Distribution<EpsScalar> {
        Distribution {
            stage: self.stage,
            algebra: self.algebra,
            labels: self.labels.clone(),
            masses: self.masses.iter().cloned().map(EpsScalar::from).collect(),
        }
    }
}

impl<S: OrderedField> fmt::Display for Distribution<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut order: Vec<usize> = (0..self.labels.len()).collect();
        order.sort_by(|&a, &b| self.labels[a].cmp(&self.labels[b]));
        f.write_str("{")?;
        for (k, i) in order.into_iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}: {}", self.labels[i], self.masses[i])?;
        }
        f.write_str("}")
    }
}

/// JSON form of a distribution.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistributionSpec {
    #[serde(default)]
    pub stage: usize,
    pub masses: BTreeMap<String, String>,
}

/// A distribution in whichever field it needed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnyDistribution {
    Rational(Distribution<Rational>),
    Eps(Distribution<EpsScalar>),
}

impl AnyDistribution {
    pub fn from_spec(spec: &DistributionSpec, tower: &ExtensionTower) -> Result<Self, ProbError> {
        match Distribution::<Rational>::from_spec(spec, tower) {
            Ok(d) => Ok(AnyDistribution::Rational(d)),
            Err(ProbError::Field(FieldError::NotRational(_))) => {
                Ok(AnyDistribution::Eps(Distribution::from_spec(spec, tower)?))
            }
            Err(e) => Err(e),
        }
    }

    pub fn stage(&self) -> usize {
        match self {
            AnyDistribution::Rational(d) => d.stage(),
            AnyDistribution::Eps(d) => d.stage(),
        }
    }

    pub fn field(&self) -> FieldTag {
        match self {
            AnyDistribution::Rational(_) => FieldTag::Rational,
            AnyDistribution::Eps(_) => FieldTag::Infinitesimal,
        }
    }

    pub fn is_strictly_positive(&self) -> bool {
        match self {
            AnyDistribution::Rational(d) => d.is_strictly_positive(),
            AnyDistribution::Eps(d) => d.is_strictly_positive(),
        }
    }

    /// Moves to the infinitesimal field.
    pub fn into_eps(self) -> Distribution<EpsScalar> {
        match self {
            AnyDistribution::Rational(d) => d.to_eps(),
            AnyDistribution::Eps(d) => d,
        }
    }

    /// Returns a strictly positive version: unchanged when it already is,
    /// otherwise made tangible in the infinitesimal field.
    pub fn tangible(self, witness: Witness) -> Self {
        if self.is_strictly_positive() {
            self
        } else {
            AnyDistribution::Eps(make_tangible(&self.into_eps(), witness))
        }
    }

    pub fn spec(&self) -> DistributionSpec {
        match self {
            AnyDistribution::Rational(d) => d.spec(),
            AnyDistribution::Eps(d) => d.spec(),
        }
    }
}

impl fmt::Display for AnyDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnyDistribution::Rational(d) => d.fmt(f),
            AnyDistribution::Eps(d) => d.fmt(f),
        }
    }
}
