use crate::boolalg::{Element, FiniteBooleanAlgebra};
use crate::field::OrderedField;

use super::{Distribution, ProbError};

/// Looks for an element `z` of `alg` itself with `P(z)·P(x) = P(x ∩ y)`
/// under every distribution in `dists`. `y` is tried first, then all
/// elements in bitmask order.
pub fn lewis_search<S: OrderedField>(
    alg: &FiniteBooleanAlgebra,
    dists: &[Distribution<S>],
    x: &Element,
    y: &Element,
) -> Result<Option<Element>, ProbError> {
    alg.check(x)?;
    alg.check(y)?;
    if dists.iter().any(|d| d.algebra() != alg.id()) {
        return Err(ProbError::StageMismatch);
    }
    let xy = x.meet(y)?;
    let targets = dists
        .iter()
        .map(|d| Ok((d.prob_of(x)?, d.prob_of(&xy)?)))
        .collect::<Result<Vec<_>, ProbError>>()?;
    let works = |z: &Element| -> Result<bool, ProbError> {
        for (d, (px, pxy)) in dists.iter().zip(&targets) {
            if d.prob_of(z)? * px.clone() != *pxy {
                return Ok(false);
            }
        }
        Ok(true)
    };
    if works(y)? {
        return Ok(Some(y.clone()));
    }
    for z in alg.elements()? {
        if works(&z)? {
            return Ok(Some(z));
        }
    }
    Ok(None)
}
