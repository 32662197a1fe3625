use std::fmt;

use crate::bayes::{ExtensionTower, Lineage};
use crate::boolalg::Element;
use crate::field::OrderedField;

use super::{Distribution, ProbError};

/// Carries `d` from its stage to the next one of `tower`.
pub fn extend_distribution<S: OrderedField>(
    d: &Distribution<S>,
    tower: &ExtensionTower,
) -> Result<Distribution<S>, ProbError> {
    let here = tower.stage(d.stage())?;
    if here.id() != d.algebra() {
        return Err(ProbError::StageMismatch);
    }
    let next = tower.stage(d.stage() + 1)?;
    if !d.is_strictly_positive() {
        return Err(ProbError::NotStrictlyPositive);
    }
    let p = d.masses();
    let mut block = vec![S::zero(); p.len()];
    for l in next.lineage() {
        if let Lineage::Pair(w, u) = l {
            block[w.0] = block[w.0].clone() + p[u.0].clone();
        }
    }
    let masses = next
        .lineage()
        .iter()
        .map(|l| match l {
            Lineage::Pair(w, u) => p[w.0].clone() * p[u.0].clone() / block[w.0].clone(),
            Lineage::Carried(a) => p[a.0].clone(),
            Lineage::Base(_) => unreachable!("base atoms only occur at stage 0"),
        })
        .collect();
    Ok(Distribution::from_parts_unchecked(next.algebra(), next.index(), masses))
}

/// Carries `d` up to stage `j`.
pub fn extend_to<S: OrderedField>(
    d: &Distribution<S>,
    tower: &ExtensionTower,
    j: usize,
) -> Result<Distribution<S>, ProbError> {
    let mut cur = d.clone();
    while cur.stage() < j {
        cur = extend_distribution(&cur, tower)?;
    }
    Ok(cur)
}

/// Outcome of [`verify_conditional_law`], with every probability involved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawReport<S> {
    pub stage: usize,
    pub conditional: Element,
    pub p_x: S,
    pub p_xy: S,
    pub p_cond: S,
    pub p_not_x: S,
    pub p_not_x_cond: S,
}

impl<S: OrderedField> LawReport<S> {
    /// `P([x]y)·P(x) = P(x ∩ y)`
    pub fn product_law(&self) -> bool {
        self.p_cond.clone() * self.p_x.clone() == self.p_xy
    }

    /// `P([x]y)·P(∼x) = P(∼x ∩ [x]y)`
    pub fn independence(&self) -> bool {
        self.p_cond.clone() * self.p_not_x.clone() == self.p_not_x_cond
    }

    pub fn holds(&self) -> bool {
        self.product_law() && self.independence()
    }
}

impl<S: OrderedField> fmt::Display for LawReport<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "stage {}", self.stage)?;
        writeln!(f, "P(x) = {}", self.p_x)?;
        writeln!(f, "P(x & y) = {}", self.p_xy)?;
        writeln!(f, "P([x]y) = {}", self.p_cond)?;
        writeln!(
            f,
            "P([x]y) * P(x) = P(x & y): {}",
            if self.product_law() { "ok" } else { "FAILED" }
        )?;
        write!(
            f,
            "P([x]y) * P(~x) = P(~x & [x]y): {}",
            if self.independence() { "ok" } else { "FAILED" }
        )
    }
}

/// Computes `[x]y` in `tower` (extending it if needed), carries `d` to the
/// stage of the result and compares both sides of the product law.
pub fn verify_conditional_law<S: OrderedField>(
    tower: &mut ExtensionTower,
    d: &Distribution<S>,
    x: &Element,
    y: &Element,
) -> Result<LawReport<S>, ProbError> {
    let r = tower.conditional(x, y)?;
    let j = tower.stage_of(&r)?;
    let dj = extend_to(d, tower, j)?;
    let xj = tower.forward_to(x, j)?;
    let yj = tower.forward_to(y, j)?;
    let not_x = xj.complement();
    Ok(LawReport {
        stage: j,
        p_x: dj.prob_of(&xj)?,
        p_xy: dj.prob_of(&xj.meet(&yj)?)?,
        p_cond: dj.prob_of(&r)?,
        p_not_x: dj.prob_of(&not_x)?,
        p_not_x_cond: dj.prob_of(&not_x.meet(&r)?)?,
        conditional: r,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolalg::FiniteBooleanAlgebra;
    use crate::field::Rational;
    use crate::prob::{make_tangible, standard_project, Witness};

    fn q(n: i64, d: i64) -> Rational {
        Rational::ratio(n, d)
    }

    fn setup() -> (ExtensionTower, Distribution<Rational>) {
        let t = ExtensionTower::new(FiniteBooleanAlgebra::new(["a", "c", "d"]).unwrap());
        let d = Distribution::new(t.base().algebra(), 0, vec![q(1, 4), q(1, 4), q(1, 2)]).unwrap();
        (t, d)
    }

    #[test]
    fn first_step_masses() {
        let (mut t, d) = setup();
        let b = t.parse_element("{a,c}").unwrap();
        t.extend(&b).unwrap();
        let d1 = extend_distribution(&d, &t).unwrap();
        assert_eq!(d1.mass("(a,d)"), Some(&q(1, 4)));
        assert_eq!(d1.mass("(d,a)"), Some(&q(1, 4)));
        assert_eq!(d1.mass("(d,c)"), Some(&q(1, 4)));
        let total: Rational = d1.masses().iter().cloned().sum();
        assert_eq!(total, q(1, 1));
    }

    #[test]
    fn reconditioning_transports_masses() {
        let (mut t, d) = setup();
        let b = t.parse_element("{a,c}").unwrap();
        t.extend(&b).unwrap();
        t.extend(&b).unwrap();
        let d1 = extend_distribution(&d, &t).unwrap();
        let d2 = extend_distribution(&d1, &t).unwrap();
        // one atom per block, so each atom keeps its parent's mass
        assert_eq!(d2.masses(), d1.masses());
    }

    #[test]
    fn trivial_step_keeps_masses() {
        let (mut t, d) = setup();
        let top = t.base().algebra().top();
        t.extend(&top).unwrap();
        assert_eq!(extend_distribution(&d, &t).unwrap().masses(), d.masses());
    }

    #[test]
    fn law_on_example() {
        let (mut t, d) = setup();
        let b = t.parse_element("{a,c}").unwrap();
        let y = t.parse_element("{a}").unwrap();
        let r = verify_conditional_law(&mut t, &d, &b, &y).unwrap();
        assert_eq!(r.p_cond, q(1, 2));
        assert_eq!(r.p_xy, q(1, 4));
        assert!(r.holds());
        let top = t.base().algebra().top();
        let r = verify_conditional_law(&mut t, &d, &top, &y).unwrap();
        assert_eq!(r.p_cond, q(1, 4));
    }

    #[test]
    fn zero_mass_needs_tangible() {
        let (mut t, _) = setup();
        let d = Distribution::new(t.base().algebra(), 0, vec![q(1, 2), q(1, 2), q(0, 1)]).unwrap();
        let x = t.parse_element("{d}").unwrap();
        let y = t.parse_element("{a,d}").unwrap();
        assert_eq!(
            verify_conditional_law(&mut t, &d, &x, &y),
            Err(ProbError::NotStrictlyPositive)
        );
        let e = make_tangible(&d.to_eps(), Witness::Uniform);
        let r = verify_conditional_law(&mut t, &e, &x, &y).unwrap();
        assert!(r.holds());
        assert!(r.p_x.is_positive());
        let lhs = (r.p_cond.clone() * r.p_x.clone()).standard_part().unwrap();
        assert_eq!(lhs, r.p_xy.standard_part().unwrap());
        let p1 = extend_to(&e, &t, 1).unwrap();
        let back = standard_project(&p1).unwrap();
        let total: Rational = back.masses().iter().cloned().sum();
        assert_eq!(total, q(1, 1));
    }
}
