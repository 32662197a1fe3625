use crate::boolalg::FiniteBooleanAlgebra;
use crate::field::{EpsScalar, OrderedField, Rational};

use super::{Distribution, ProbError};

/// The strictly positive distribution mixed in by [`make_tangible`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Witness {
    #[default]
    Uniform,
    /// `R(ωᵢ) = eⁱ / (e + e² + … + eⁿ)`.
    Hahn,
}

pub fn uniform(alg: &FiniteBooleanAlgebra, stage: usize) -> Distribution<EpsScalar> {
    let n = alg.atom_count() as i64;
    let m = EpsScalar::from(Rational::ratio(1, n));
    Distribution::from_parts_unchecked(alg, stage, vec![m; alg.atom_count()])
}

pub fn hahn_witness(alg: &FiniteBooleanAlgebra, stage: usize) -> Distribution<EpsScalar> {
    let powers: Vec<EpsScalar> = (1..=alg.atom_count()).map(EpsScalar::eps_pow).collect();
    let total = powers.iter().fold(EpsScalar::zero(), |a, b| &a + b);
    let masses = powers.iter().map(|p| p / &total).collect();
    Distribution::from_parts_unchecked(alg, stage, masses)
}

/// `(1 - e)P + eR`, strictly positive with standard part `P`. Strictly
/// positive inputs come back unchanged.
pub fn make_tangible(d: &Distribution<EpsScalar>, witness: Witness) -> Distribution<EpsScalar> {
    if d.is_strictly_positive() {
        return d.clone();
    }
    let n = d.masses().len();
    let r: Vec<EpsScalar> = match witness {
        Witness::Uniform => vec![EpsScalar::from(Rational::ratio(1, n as i64)); n],
        Witness::Hahn => {
            let powers: Vec<EpsScalar> = (1..=n).map(EpsScalar::eps_pow).collect();
            let total = powers.iter().fold(EpsScalar::zero(), |a, b| &a + b);
            powers.iter().map(|p| p / &total).collect()
        }
    };
    let e = EpsScalar::eps();
    let keep = &EpsScalar::one() - &e;
    let masses = d
        .masses()
        .iter()
        .zip(&r)
        .map(|(p, r)| &(&keep * p) + &(&e * r))
        .collect();
    Distribution {
        masses,
        ..d.clone()
    }
}

/// Atomwise standard part.
pub fn standard_project(d: &Distribution<EpsScalar>) -> Result<Distribution<Rational>, ProbError> {
    let masses = d
        .masses()
        .iter()
        .map(OrderedField::standard_part)
        .collect::<Result<_, _>>()?;
    Ok(Distribution {
        stage: d.stage,
        algebra: d.algebra,
        labels: d.labels.clone(),
        masses,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn acd() -> FiniteBooleanAlgebra {
        FiniteBooleanAlgebra::new(["a", "c", "d"]).unwrap()
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::ratio(n, d)
    }

    #[test]
    fn zero_mass_becomes_infinitesimal() {
        let alg = acd();
        let d = Distribution::new(&alg, 0, vec![q(1, 2), q(1, 2), q(0, 1)]).unwrap();
        let t = make_tangible(&d.to_eps(), Witness::Uniform);
        assert!(t.is_strictly_positive());
        let half: EpsScalar = OrderedField::parse("(1 - e)/2 + e/3").unwrap();
        assert_eq!(t.masses()[0], half);
        assert_eq!(t.masses()[2], OrderedField::parse("e/3").unwrap());
        assert_eq!(standard_project(&t).unwrap(), d);
        let total = t.masses().iter().fold(EpsScalar::zero(), |a, b| &a + b);
        assert_eq!(total, EpsScalar::one());
    }

    #[test]
    fn positive_input_is_kept() {
        let alg = acd();
        let d = Distribution::new(&alg, 0, vec![q(1, 4), q(1, 4), q(1, 2)]).unwrap();
        let t = make_tangible(&d.to_eps(), Witness::Hahn);
        assert_eq!(t, d.to_eps());
        assert_eq!(standard_project(&t).unwrap(), d);
    }

    #[test]
    fn hahn_witness_masses() {
        let w = hahn_witness(&acd(), 0);
        let den: EpsScalar = OrderedField::parse("e + e^2 + e^3").unwrap();
        for (i, m) in w.masses().iter().enumerate() {
            assert_eq!(*m, &EpsScalar::eps_pow(i + 1) / &den);
            assert!(m.is_positive());
        }
        assert_eq!(w.masses()[0].standard_part().unwrap(), q(1, 1));
        assert_eq!(w.masses()[2].to_string(), "e^2/(1 + e + e^2)");
    }

    #[test]
    fn hahn_mode_keeps_standard_part() {
        let alg = acd();
        let d = Distribution::new(&alg, 0, vec![q(1, 1), q(0, 1), q(0, 1)]).unwrap();
        let t = make_tangible(&d.to_eps(), Witness::Hahn);
        assert!(t.is_strictly_positive());
        assert!(t.masses()[1] > t.masses()[2]);
        assert_eq!(standard_project(&t).unwrap(), d);
    }

    #[test]
    fn projection_rejects_infinite_mass() {
        let alg = FiniteBooleanAlgebra::new(["a", "b"]).unwrap();
        let inf: EpsScalar = OrderedField::parse("1/e").unwrap();
        let d = Distribution::from_parts_unchecked(&alg, 0, vec![inf.clone(), &EpsScalar::one() - &inf]);
        assert!(standard_project(&d).is_err());
    }
}
