use condalg::field::{EpsScalar, OrderedField, Rational};
use proptest::prelude::*;

fn poly() -> impl Strategy<Value = EpsScalar> {
    prop::collection::vec(-4i64..=4, 1..4).prop_map(|cs| {
        cs.iter()
            .enumerate()
            .fold(EpsScalar::zero(), |acc, (k, &c)| &acc + &(&EpsScalar::from(c) * &EpsScalar::eps_pow(k)))
    })
}

fn eps_scalar() -> impl Strategy<Value = EpsScalar> {
    (poly(), poly()).prop_map(|(n, d)| if d.is_zero() { n } else { &n / &d })
}

fn rational() -> impl Strategy<Value = Rational> {
    (-50i64..=50, 1i64..=30).prop_map(|(n, d)| Rational::ratio(n, d))
}

fn finite(x: &EpsScalar) -> bool {
    x.is_zero() || x.valuation().unwrap() >= 0
}

macro_rules! field_laws {
    ($name:ident, $strategy:expr) => {
        mod $name {
            use super::*;

            proptest! {
                #[test]
                fn ring(a in $strategy, b in $strategy, c in $strategy) {
                    prop_assert_eq!(a.clone() + b.clone(), b.clone() + a.clone());
                    prop_assert_eq!(a.clone() * b.clone(), b.clone() * a.clone());
                    prop_assert_eq!((a.clone() + b.clone()) + c.clone(), a.clone() + (b.clone() + c.clone()));
                    prop_assert_eq!((a.clone() * b.clone()) * c.clone(), a.clone() * (b.clone() * c.clone()));
                    prop_assert_eq!(a.clone() * (b.clone() + c.clone()), a.clone() * b.clone() + a.clone() * c.clone());
                    prop_assert_eq!(a.clone() + OrderedField::zero(), a.clone());
                    prop_assert_eq!(a.clone() * OrderedField::one(), a.clone());
                    prop_assert!((a.clone() - a.clone()).is_zero());
                    prop_assert_eq!(-(-a.clone()), a.clone());
                }

                #[test]
                fn inverses(a in $strategy, b in $strategy) {
                    if !b.is_zero() {
                        prop_assert_eq!(a.clone() / b.clone() * b.clone(), a.clone());
                        prop_assert!(a.checked_div(&b).is_ok());
                    } else {
                        prop_assert!(a.checked_div(&b).is_err());
                    }
                }

                #[test]
                fn order(a in $strategy, b in $strategy, c in $strategy) {
                    let lt = (a < b) as u8 + (a == b) as u8 + (a > b) as u8;
                    prop_assert_eq!(lt, 1);
                    if a < b {
                        prop_assert!(a.clone() + c.clone() < b.clone() + c.clone());
                        if c.is_positive() {
                            prop_assert!(a.clone() * c.clone() < b.clone() * c.clone());
                        }
                    }
                    if a.is_positive() && b.is_positive() {
                        prop_assert!((a.clone() * b.clone()).is_positive());
                    }
                    prop_assert_eq!(a.is_negative(), (-a.clone()).is_positive());
                }

                #[test]
                fn text_round_trip(a in $strategy) {
                    let back = OrderedField::parse(&a.to_string()).unwrap();
                    prop_assert_eq!(a, back);
                }
            }
        }
    };
}

field_laws!(rational_laws, rational());
field_laws!(eps_laws, eps_scalar());

proptest! {
    #[test]
    fn eps_is_below_every_positive_rational(q in rational()) {
        let e = EpsScalar::eps();
        prop_assert!(e.is_positive());
        if q.is_positive() {
            prop_assert!(e < EpsScalar::from(q.clone()));
            prop_assert!(EpsScalar::eps_pow(2) < e);
        }
    }

    #[test]
    fn standard_part_is_a_ring_morphism(a in eps_scalar(), b in eps_scalar()) {
        prop_assume!(finite(&a) && finite(&b));
        let (sa, sb) = (a.standard_part().unwrap(), b.standard_part().unwrap());
        prop_assert_eq!((&a + &b).standard_part().unwrap(), &sa + &sb);
        prop_assert_eq!((&a * &b).standard_part().unwrap(), &sa * &sb);
        prop_assert_eq!((-&a).standard_part().unwrap(), -sa.clone());
        if a <= b {
            prop_assert!(sa <= sb);
        }
    }

    #[test]
    fn rationals_embed(p in rational(), q in rational()) {
        let (ep, eq) = (EpsScalar::from(p.clone()), EpsScalar::from(q.clone()));
        prop_assert_eq!(&ep + &eq, EpsScalar::from(&p + &q));
        prop_assert_eq!(&ep * &eq, EpsScalar::from(&p * &q));
        prop_assert_eq!(ep < eq, p < q);
        prop_assert_eq!(ep.as_rational(), Some(p));
    }
}
