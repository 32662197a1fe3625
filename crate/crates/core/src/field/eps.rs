use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::One;

use super::{FieldError, Polynomial, Rational};

/// A rational function `num(e) / den(e)` in one positive infinitesimal `e`.
///
/// Canonical form: `num` and `den` are coprime and the lowest nonzero
/// coefficient of `den` is `1`, so structural equality is value equality.
/// A value is positive iff the lowest nonzero coefficient of `num` is.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct EpsScalar {
    num: Polynomial,
    den: Polynomial,
}

impl EpsScalar {
    pub fn zero() -> Self {
        EpsScalar {
            num: Polynomial::zero(),
            den: Polynomial::one(),
        }
    }

    pub fn one() -> Self {
        EpsScalar::from(Rational::one())
    }

    /// The infinitesimal itself.
    pub fn eps() -> Self {
        EpsScalar::from_polynomial(Polynomial::monomial(Rational::one(), 1))
    }

    /// `e^k`
    pub fn eps_pow(k: usize) -> Self {
        EpsScalar::from_polynomial(Polynomial::monomial(Rational::one(), k))
    }

    pub fn from_polynomial(num: Polynomial) -> Self {
        EpsScalar {
            num,
            den: Polynomial::one(),
        }
    }

    pub fn from_parts(num: Polynomial, den: Polynomial) -> Result<Self, FieldError> {
        if den.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(Self::normalize(num, den))
    }

    fn normalize(num: Polynomial, den: Polynomial) -> Self {
        if num.is_zero() {
            return EpsScalar::zero();
        }
        let (mut num, mut den) = (num, den);
        if !den.is_constant() {
            let g = num.gcd(&den);
            if !g.is_constant() {
                num = num.div_rem(&g).0;
                den = den.div_rem(&g).0;
            }
        }
        let low = den.lowest().expect("nonzero denominator").clone();
        if !low.is_one() {
            let inv = low.recip().unwrap();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        EpsScalar { num, den }
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// `Some(q)` when the value carries no `e` at all.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.num.is_constant() && self.den.is_constant() {
            Some(self.num.coeff(0) / self.den.coeff(0))
        } else {
            None
        }
    }

    /// Lowest exponent of `e` in the Laurent expansion.
    pub fn valuation(&self) -> Result<i64, FieldError> {
        let n = self.num.low_degree().ok_or(FieldError::ZeroValuation)?;
        let d = self.den.low_degree().expect("nonzero denominator");
        Ok(n as i64 - d as i64)
    }

    pub fn signum(&self) -> i32 {
        self.num.lowest().map_or(0, Rational::signum)
    }

    pub fn standard_part(&self) -> Result<Rational, FieldError> {
        if self.is_zero() {
            return Ok(Rational::zero());
        }
        let v = self.valuation()?;
        match v.cmp(&0) {
            Ordering::Less => Err(FieldError::Infinite(v)),
            Ordering::Greater => Ok(Rational::zero()),
            Ordering::Equal => {
                let n = self.num.low_degree().unwrap();
                let d = self.den.low_degree().unwrap();
                Ok(self.num.coeff(n) / self.den.coeff(d))
            }
        }
    }

    pub fn recip(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(Self::normalize(self.den.clone(), self.num.clone()))
    }

    pub fn pow(&self, exp: i32) -> Result<Self, FieldError> {
        if exp < 0 {
            return self.recip()?.pow(-exp);
        }
        let mut acc = EpsScalar::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        Ok(acc)
    }
}

impl From<Rational> for EpsScalar {
    fn from(q: Rational) -> Self {
        EpsScalar::from_polynomial(Polynomial::constant(q))
    }
}

impl From<i64> for EpsScalar {
    fn from(n: i64) -> Self {
        EpsScalar::from(Rational::from(n))
    }
}

impl<'a> Add<&'a EpsScalar> for &'a EpsScalar {
    type Output = EpsScalar;
    fn add(self, rhs: &'a EpsScalar) -> EpsScalar {
        if self.den == rhs.den {
            return EpsScalar::normalize(&self.num + &rhs.num, self.den.clone());
        }
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        EpsScalar::normalize(num, &self.den * &rhs.den)
    }
}

impl<'a> Sub<&'a EpsScalar> for &'a EpsScalar {
    type Output = EpsScalar;
    fn sub(self, rhs: &'a EpsScalar) -> EpsScalar {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a EpsScalar> for &'a EpsScalar {
    type Output = EpsScalar;
    fn mul(self, rhs: &'a EpsScalar) -> EpsScalar {
        EpsScalar::normalize(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl<'a> Div<&'a EpsScalar> for &'a EpsScalar {
    type Output = EpsScalar;
    fn div(self, rhs: &'a EpsScalar) -> EpsScalar {
        assert!(!rhs.is_zero(), "division by zero");
        EpsScalar::normalize(&self.num * &rhs.den, &self.den * &rhs.num)
    }
}

impl Neg for &EpsScalar {
    type Output = EpsScalar;
    fn neg(self) -> EpsScalar {
        EpsScalar {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

macro_rules! owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for EpsScalar {
            type Output = EpsScalar;
            fn $method(self, rhs: EpsScalar) -> EpsScalar {
                $trait::$method(&self, &rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
owned_binop!(Div, div);

impl Neg for EpsScalar {
    type Output = EpsScalar;
    fn neg(self) -> EpsScalar {
        -&self
    }
}

impl Ord for EpsScalar {
    fn cmp(&self, other: &Self) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        (self - other).signum().cmp(&0)
    }
}

impl PartialOrd for EpsScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::iter::Sum for EpsScalar {
    fn sum<I: Iterator<Item = EpsScalar>>(iter: I) -> Self {
        iter.fold(EpsScalar::zero(), |a, b| &a + &b)
    }
}

fn write_int_poly(f: &mut fmt::Formatter<'_>, ints: &[BigInt], wrap: bool) -> fmt::Result {
    let poly = Polynomial::from_ints(ints);
    if wrap && poly.term_count() > 1 {
        write!(f, "({})", poly)
    } else {
        write!(f, "{}", poly)
    }
}

impl fmt::Display for EpsScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            // den is exactly 1 in canonical form
            let l = Rational::lcm_denominator(self.num.coeffs());
            let ints: Vec<BigInt> = self
                .num
                .coeffs()
                .iter()
                .map(|c| (c * &Rational::from_integer(l.clone())).numer().clone())
                .collect();
            if l.is_one() {
                return write_int_poly(f, &ints, false);
            }
            write_int_poly(f, &ints, true)?;
            return write!(f, "/{}", l);
        }
        let mut all = self.num.coeffs().to_vec();
        all.extend_from_slice(self.den.coeffs());
        let l = Rational::from_integer(Rational::lcm_denominator(&all));
        let to_ints = |p: &Polynomial| -> Vec<BigInt> {
            p.coeffs().iter().map(|c| (c * &l).numer().clone()).collect()
        };
        let (n, d) = (to_ints(&self.num), to_ints(&self.den));
        // strip a common integer content so the printed form is small
        let mut joint = n.clone();
        joint.extend(d.iter().cloned());
        let (n, d) = if Polynomial::content_is_one(&joint) {
            (n, d)
        } else {
            let g = joint
                .iter()
                .fold(BigInt::from(0), |g, c| num_integer::Integer::gcd(&g, c));
            (
                n.iter().map(|c| c / &g).collect(),
                d.iter().map(|c| c / &g).collect(),
            )
        };
        write_int_poly(f, &n, true)?;
        f.write_str("/")?;
        let dp = Polynomial::from_ints(&d);
        let bare_power = dp.term_count() == 1 && dp.leading().is_some_and(Rational::is_one);
        if dp.degree().unwrap_or(0) > 0 && !bare_power {
            write!(f, "({})", dp)
        } else {
            write!(f, "{}", dp)
        }
    }
}

impl fmt::Debug for EpsScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl std::str::FromStr for EpsScalar {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        super::parse::parse_scalar(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> EpsScalar {
        EpsScalar::from(Rational::ratio(n, d))
    }

    fn e() -> EpsScalar {
        EpsScalar::eps()
    }

    #[test]
    fn product_of_conjugates() {
        let one = EpsScalar::one();
        let lhs = (&one - &e()) * (&one + &e());
        assert_eq!(lhs, &one - &EpsScalar::eps_pow(2));
    }

    #[test]
    fn inverse_multiplies_back() {
        let one_plus = &EpsScalar::one() + &e();
        let inv = one_plus.recip().unwrap();
        assert_eq!(&inv * &one_plus, EpsScalar::one());
        assert_eq!(inv.to_string(), "1/(1 + e)");
    }

    #[test]
    fn eps_is_positive_but_tiny() {
        assert!(e() > EpsScalar::zero());
        assert!(e() < q(1, 1_000_000));
        assert_eq!(e().cmp(&e()), Ordering::Equal);
    }

    #[test]
    fn valuations() {
        // e^2 * 3 / (2e)
        let x = (EpsScalar::eps_pow(2) * q(3, 1)) / (q(2, 1) * e());
        assert_eq!(x.valuation(), Ok(1));
        assert_eq!(q(5, 1).valuation(), Ok(0));
        assert_eq!(e().recip().unwrap().valuation(), Ok(-1));
        assert_eq!(EpsScalar::zero().valuation(), Err(FieldError::ZeroValuation));
    }

    #[test]
    fn standard_parts() {
        let half_minus = (&EpsScalar::one() - &e()) / q(2, 1);
        assert_eq!(half_minus.standard_part(), Ok(Rational::ratio(1, 2)));
        let small = &e() / &(&EpsScalar::one() + &e());
        assert_eq!(small.standard_part(), Ok(Rational::zero()));
        assert_eq!(
            e().recip().unwrap().standard_part(),
            Err(FieldError::Infinite(-1))
        );
    }

    #[test]
    fn canonical_denominator() {
        let x = EpsScalar::from_parts(
            Polynomial::new(vec![Rational::from(2), Rational::from(2)]),
            Polynomial::new(vec![Rational::from(4), Rational::from(4)]),
        )
        .unwrap();
        assert_eq!(x, q(1, 2));
        let y = EpsScalar::from_parts(
            Polynomial::new(vec![Rational::from(1)]),
            Polynomial::new(vec![Rational::from(0), Rational::from(3)]),
        )
        .unwrap();
        assert_eq!(y.denominator().lowest(), Some(&Rational::one()));
    }

    #[test]
    fn display_forms() {
        let half_minus = (&EpsScalar::one() - &e()) / q(2, 1);
        assert_eq!(half_minus.to_string(), "(1 - e)/2");
        assert_eq!((&e() / &q(3, 1)).to_string(), "e/3");
        let r = &EpsScalar::eps_pow(2) / &(&EpsScalar::one() + &e());
        assert_eq!(r.to_string(), "e^2/(1 + e)");
        assert_eq!(e().recip().unwrap().to_string(), "1/e");
    }
}
