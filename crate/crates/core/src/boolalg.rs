//! Finite Boolean algebras in their atom (Stone) representation.
//!
//! An algebra is its generating partition: an ordered list of labelled
//! atoms. Elements are atom sets tagged with the id of the algebra that
//! issued them, and every binary operation rejects operands from
//! different algebras.

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoolAlgError {
    #[error("an algebra needs at least one atom")]
    NoAtoms,
    #[error("duplicate atom label `{0}`")]
    DuplicateLabel(String),
    #[error("invalid atom label `{0}` (use letters, digits, `_` or `.`)")]
    InvalidLabel(String),
    #[error("operands belong to different algebras ({0} and {1})")]
    MixedAlgebras(AlgebraId, AlgebraId),
    #[error("atom index {index} out of range for {count} atoms")]
    AtomOutOfRange { index: usize, count: usize },
    #[error("unknown atom label `{0}`")]
    UnknownLabel(String),
    #[error("malformed element literal `{0}`")]
    Malformed(String),
    #[error("too many atoms ({0}) to enumerate all elements")]
    TooLarge(usize),
}

/// Process-unique identity of one algebra (or one stage of a tower).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AlgebraId(u64);

impl AlgebraId {
    pub fn fresh() -> Self {
        static NEXT: AtomicU64 = AtomicU64::new(1);
        AlgebraId(NEXT.fetch_add(1, Ordering::Relaxed))
    }
}

impl fmt::Display for AlgebraId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Index of an atom inside one algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AtomId(pub usize);

/// JSON form of an algebra: `{ "atoms": ["a", "c", "d"] }`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraSpec {
    pub atoms: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct FiniteBooleanAlgebra {
    id: AlgebraId,
    labels: Vec<String>,
    index: HashMap<String, usize>,
    // atom indices sorted by label, for canonical printing
    print_order: Vec<usize>,
}

fn valid_label(label: &str) -> bool {
    !label.is_empty()
        && label
            .chars()
            .all(|c| c.is_alphanumeric() || c == '_' || c == '.')
}

impl FiniteBooleanAlgebra {
    /// Algebra over user supplied labels.
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self, BoolAlgError> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if let Some(bad) = labels.iter().find(|l| !valid_label(l)) {
            return Err(BoolAlgError::InvalidLabel(bad.clone()));
        }
        Self::with_labels(labels)
    }

    /// Same as [`FiniteBooleanAlgebra::new`] without the label character
    /// check; tower stages use structured labels such as `(a,d)`.
    pub(crate) fn with_labels(labels: Vec<String>) -> Result<Self, BoolAlgError> {
        if labels.is_empty() {
            return Err(BoolAlgError::NoAtoms);
        }
        let mut index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(BoolAlgError::DuplicateLabel(l.clone()));
            }
        }
        let mut print_order: Vec<usize> = (0..labels.len()).collect();
        print_order.sort_by(|&a, &b| labels[a].cmp(&labels[b]));
        Ok(FiniteBooleanAlgebra {
            id: AlgebraId::fresh(),
            labels,
            index,
            print_order,
        })
    }

    pub fn from_spec(spec: &AlgebraSpec) -> Result<Self, BoolAlgError> {
        Self::new(spec.atoms.iter().cloned())
    }

    pub fn spec(&self) -> AlgebraSpec {
        AlgebraSpec {
            atoms: self.labels.clone(),
        }
    }

    pub fn id(&self) -> AlgebraId {
        self.id
    }

    pub fn atom_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, atom: AtomId) -> &str {
        &self.labels[atom.0]
    }

    pub fn atom_by_label(&self, label: &str) -> Option<AtomId> {
        self.index.get(label).copied().map(AtomId)
    }

    pub fn bottom(&self) -> Element {
        Element {
            algebra: self.id,
            atoms: FixedBitSet::with_capacity(self.atom_count()),
        }
    }

    pub fn top(&self) -> Element {
        let mut atoms = FixedBitSet::with_capacity(self.atom_count());
        atoms.insert_range(..);
        Element {
            algebra: self.id,
            atoms,
        }
    }

    pub fn atom(&self, atom: AtomId) -> Result<Element, BoolAlgError> {
        self.element([atom])
    }

    /// Singleton elements, one per atom: the generating partition.
    pub fn partition(&self) -> Vec<Element> {
        (0..self.atom_count())
            .map(|i| self.atom(AtomId(i)).unwrap())
            .collect()
    }

    pub fn element(&self, atoms: impl IntoIterator<Item = AtomId>) -> Result<Element, BoolAlgError> {
        let mut el = self.bottom();
        for AtomId(i) in atoms {
            if i >= self.atom_count() {
                return Err(BoolAlgError::AtomOutOfRange {
                    index: i,
                    count: self.atom_count(),
                });
            }
            el.atoms.insert(i);
        }
        Ok(el)
    }

    /// Element whose atoms are the set bits of `mask` (bit `i` is atom `i`).
    pub fn element_from_mask(&self, mask: u64) -> Element {
        let mut el = self.bottom();
        for i in 0..self.atom_count().min(64) {
            if mask >> i & 1 == 1 {
                el.atoms.insert(i);
            }
        }
        el
    }

    /// All `2^n` elements in mask order.
    pub fn elements(&self) -> Result<impl Iterator<Item = Element> + '_, BoolAlgError> {
        let n = self.atom_count();
        if n > 24 {
            return Err(BoolAlgError::TooLarge(n));
        }
        Ok((0..1u64 << n).map(move |m| self.element_from_mask(m)))
    }

    pub fn owns(&self, x: &Element) -> bool {
        x.algebra == self.id
    }

    pub fn check(&self, x: &Element) -> Result<(), BoolAlgError> {
        if self.owns(x) {
            Ok(())
        } else {
            Err(BoolAlgError::MixedAlgebras(self.id, x.algebra))
        }
    }

    /// Canonical literal: atoms sorted by label, e.g. `{a,d}`.
    pub fn print_element(&self, x: &Element) -> String {
        let mut out = String::from("{");
        let mut first = true;
        for &i in &self.print_order {
            if x.atoms.contains(i) {
                if !first {
                    out.push(',');
                }
                first = false;
                out.push_str(&self.labels[i]);
            }
        }
        out.push('}');
        out
    }

    /// Parses `{a,c}`; labels may themselves contain bracketed commas.
    pub fn parse_element(&self, text: &str) -> Result<Element, BoolAlgError> {
        let t = text.trim();
        let inner = t
            .strip_prefix('{')
            .and_then(|s| s.strip_suffix('}'))
            .ok_or_else(|| BoolAlgError::Malformed(t.to_string()))?;
        let mut el = self.bottom();
        if inner.trim().is_empty() {
            return Ok(el);
        }
        for label in split_top_level(inner).ok_or_else(|| BoolAlgError::Malformed(t.to_string()))? {
            let label = label.trim();
            if label.is_empty() {
                return Err(BoolAlgError::Malformed(t.to_string()));
            }
            let AtomId(i) = self
                .atom_by_label(label)
                .ok_or_else(|| BoolAlgError::UnknownLabel(label.to_string()))?;
            el.atoms.insert(i);
        }
        Ok(el)
    }
}

/// Splits on commas that are not nested inside parentheses.
fn split_top_level(s: &str) -> Option<Vec<&str>> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return None;
                }
            }
            ',' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return None;
    }
    parts.push(&s[start..]);
    Some(parts)
}

/// A set of atoms of one specific algebra.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element {
    algebra: AlgebraId,
    atoms: FixedBitSet,
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:?}", self.algebra, self.atoms.ones().collect::<Vec<_>>())
    }
}

impl Element {
    pub fn algebra(&self) -> AlgebraId {
        self.algebra
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    pub fn contains(&self, atom: AtomId) -> bool {
        self.atoms.contains(atom.0)
    }

    pub fn atoms(&self) -> impl Iterator<Item = AtomId> + '_ {
        self.atoms.ones().map(AtomId)
    }

    pub fn size(&self) -> usize {
        self.atoms.count_ones(..)
    }

    pub fn is_bottom(&self) -> bool {
        self.atoms.is_clear()
    }

    pub fn is_top(&self) -> bool {
        self.atoms.is_full()
    }

    pub fn is_trivial(&self) -> bool {
        self.is_bottom() || self.is_top()
    }

    fn same(&self, other: &Element) -> Result<(), BoolAlgError> {
        if self.algebra == other.algebra {
            Ok(())
        } else {
            Err(BoolAlgError::MixedAlgebras(self.algebra, other.algebra))
        }
    }

    pub fn meet(&self, other: &Element) -> Result<Element, BoolAlgError> {
        self.same(other)?;
        let mut atoms = self.atoms.clone();
        atoms.intersect_with(&other.atoms);
        Ok(Element { algebra: self.algebra, atoms })
    }

    pub fn join(&self, other: &Element) -> Result<Element, BoolAlgError> {
        self.same(other)?;
        let mut atoms = self.atoms.clone();
        atoms.union_with(&other.atoms);
        Ok(Element { algebra: self.algebra, atoms })
    }

    pub fn complement(&self) -> Element {
        let mut atoms = self.atoms.clone();
        atoms.toggle_range(..);
        Element { algebra: self.algebra, atoms }
    }

    /// Classical implication `~x | y`.
    pub fn implies(&self, other: &Element) -> Result<Element, BoolAlgError> {
        self.complement().join(other)
    }

    pub fn leq(&self, other: &Element) -> Result<bool, BoolAlgError> {
        self.same(other)?;
        Ok(self.atoms.is_subset(&other.atoms))
    }

    pub fn is_disjoint(&self, other: &Element) -> Result<bool, BoolAlgError> {
        self.same(other)?;
        Ok(self.atoms.is_disjoint(&other.atoms))
    }
}

/// `{ y in family : y <= x }`
pub fn crop(family: &[Element], x: &Element) -> Result<Vec<Element>, BoolAlgError> {
    let mut out = Vec::new();
    for y in family {
        if y.leq(x)? {
            out.push(y.clone());
        }
    }
    Ok(out)
}

/// Pair cropping: `crop(family, x) × crop(family, y)`.
pub fn crop_pair(
    family: &[Element],
    x: &Element,
    y: &Element,
) -> Result<Vec<(Element, Element)>, BoolAlgError> {
    let left = crop(family, x)?;
    let right = crop(family, y)?;
    Ok(left
        .iter()
        .flat_map(|l| right.iter().map(move |r| (l.clone(), r.clone())))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn acd() -> FiniteBooleanAlgebra {
        FiniteBooleanAlgebra::new(["a", "c", "d"]).unwrap()
    }

    #[test]
    fn meet_of_literals() {
        let alg = acd();
        let x = alg.parse_element("{a,c}").unwrap();
        let y = alg.parse_element("{c,d}").unwrap();
        assert_eq!(alg.print_element(&x.meet(&y).unwrap()), "{c}");
    }

    #[test]
    fn complement_of_top_is_bottom() {
        let alg = acd();
        assert_eq!(alg.top().complement(), alg.bottom());
    }

    #[test]
    fn literal_round_trip_is_canonical() {
        let alg = acd();
        assert_eq!(alg.parse_element("{}").unwrap(), alg.bottom());
        let x = alg.parse_element("{d, a}").unwrap();
        assert_eq!(alg.print_element(&x), "{a,d}");
        assert_eq!(alg.parse_element(&alg.print_element(&x)).unwrap(), x);
    }

    #[test]
    fn literal_errors() {
        let alg = acd();
        assert_eq!(
            alg.parse_element("{a,b}"),
            Err(BoolAlgError::UnknownLabel("b".into()))
        );
        assert!(matches!(alg.parse_element("a,c"), Err(BoolAlgError::Malformed(_))));
        assert!(matches!(alg.parse_element("{a,,c}"), Err(BoolAlgError::Malformed(_))));
    }

    #[test]
    fn construction_errors() {
        assert_eq!(
            FiniteBooleanAlgebra::new(Vec::<String>::new()).unwrap_err(),
            BoolAlgError::NoAtoms
        );
        assert_eq!(
            FiniteBooleanAlgebra::new(["a", "a"]).unwrap_err(),
            BoolAlgError::DuplicateLabel("a".into())
        );
        assert!(matches!(
            FiniteBooleanAlgebra::new(["a b"]),
            Err(BoolAlgError::InvalidLabel(_))
        ));
    }

    #[test]
    fn mixed_algebras_are_rejected() {
        let a = acd();
        let b = acd();
        assert!(matches!(
            a.top().meet(&b.top()),
            Err(BoolAlgError::MixedAlgebras(_, _))
        ));
        assert!(a.top().leq(&b.top()).is_err());
    }

    #[test]
    fn crop_examples() {
        let alg = acd();
        let part = alg.partition();
        assert_eq!(crop(&part, &alg.top()).unwrap(), part);
        assert!(crop(&part, &alg.bottom()).unwrap().is_empty());
        let fam: Vec<Element> = ["{a}", "{c}", "{a,c}"]
            .iter()
            .map(|s| alg.parse_element(s).unwrap())
            .collect();
        let x = alg.parse_element("{a,c}").unwrap();
        assert_eq!(crop(&fam, &x).unwrap(), fam);
        let pairs = crop_pair(&part, &x, &x.complement()).unwrap();
        assert_eq!(pairs.len(), 2);
    }

    #[test]
    fn nested_labels_parse() {
        let alg = FiniteBooleanAlgebra::with_labels(vec!["(a,d)".into(), "(d,a)".into()]).unwrap();
        let x = alg.parse_element("{(d,a),(a,d)}").unwrap();
        assert!(x.is_top());
        assert_eq!(alg.print_element(&x), "{(a,d),(d,a)}");
    }
}
