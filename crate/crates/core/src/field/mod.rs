//! Exact ordered fields.
//!
//! Two fields are provided: [`Rational`], arbitrary precision rationals, and
//! [`EpsScalar`], rational functions in a single positive infinitesimal `e`
//! ordered by valuation. The second one is what makes every finite Boolean
//! algebra carry a strictly positive distribution, and [`EpsScalar::standard_part`]
//! projects back to the rationals.

mod eps;
mod parse;
mod poly;
mod rational;

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use thiserror::Error;

pub use eps::EpsScalar;
pub use poly::Polynomial;
pub use rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("valuation of zero is undefined")]
    ZeroValuation,
    #[error("standard part undefined for infinite element (valuation {0})")]
    Infinite(i64),
    #[error("value `{0}` is not a rational number")]
    NotRational(String),
    #[error("scalar syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
}

/// Which concrete field a value or distribution lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldTag {
    Rational,
    Infinitesimal,
}

impl fmt::Display for FieldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldTag::Rational => f.write_str("rational"),
            FieldTag::Infinitesimal => f.write_str("eps"),
        }
    }
}

/// An exact totally ordered field.
///
/// The operators panic on division by zero, like integer division does;
/// use [`OrderedField::checked_div`] where the divisor is not known to be
/// nonzero.
pub trait OrderedField:
    Clone
    + Eq
    + Ord
    + fmt::Debug
    + fmt::Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const TAG: FieldTag;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_rational(q: Rational) -> Self;
    fn is_zero(&self) -> bool;

    fn checked_div(&self, rhs: &Self) -> Result<Self, FieldError> {
        if rhs.is_zero() {
            Err(FieldError::DivisionByZero)
        } else {
            Ok(self.clone() / rhs.clone())
        }
    }

    fn is_positive(&self) -> bool {
        *self > Self::zero()
    }

    fn is_negative(&self) -> bool {
        *self < Self::zero()
    }

    /// Coefficient of `e^0`, defined for finite values.
    fn standard_part(&self) -> Result<Rational, FieldError>;

    /// Parses the scalar text syntax (`3`, `1/4`, `(1 - e)/2`, `e^2/(1+e)`).
    fn parse(text: &str) -> Result<Self, FieldError>;
}

impl OrderedField for Rational {
    const TAG: FieldTag = FieldTag::Rational;

    fn zero() -> Self {
        Rational::zero()
    }

    fn one() -> Self {
        Rational::one()
    }

    fn from_rational(q: Rational) -> Self {
        q
    }

    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }

    fn standard_part(&self) -> Result<Rational, FieldError> {
        Ok(self.clone())
    }

    fn parse(text: &str) -> Result<Self, FieldError> {
        let value = parse::parse_scalar(text)?;
        value
            .as_rational()
            .ok_or_else(|| FieldError::NotRational(text.trim().to_string()))
    }
}

impl OrderedField for EpsScalar {
    const TAG: FieldTag = FieldTag::Infinitesimal;

    fn zero() -> Self {
        EpsScalar::zero()
    }

    fn one() -> Self {
        EpsScalar::one()
    }

    fn from_rational(q: Rational) -> Self {
        EpsScalar::from(q)
    }

    fn is_zero(&self) -> bool {
        EpsScalar::is_zero(self)
    }

    fn standard_part(&self) -> Result<Rational, FieldError> {
        EpsScalar::standard_part(self)
    }

    fn parse(text: &str) -> Result<Self, FieldError> {
        parse::parse_scalar(text)
    }
}

/// Three-way comparison in either field.
pub fn compare<F: OrderedField>(a: &F, b: &F) -> std::cmp::Ordering {
    a.cmp(b)
}
