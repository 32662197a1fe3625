use std::collections::BTreeSet;
use std::fmt;

/// A conditional proposition in core form.
///
/// Negation, disjunction, conjunction, `T` and `<->` are abbreviations that
/// expand into these constructors; see [`Prop::neg`] and friends.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Prop {
    Bot,
    Atom(String),
    /// A fixed element of a tower, written as an element literal such as
    /// `{a,c}` or `{a,c}@0`.
    Lit(String),
    Impl(Box<Prop>, Box<Prop>),
    Cond(Box<Prop>, Box<Prop>),
}

impl Prop {
    pub fn atom(name: &str) -> Prop {
        Prop::Atom(name.to_string())
    }

    pub fn implies(a: Prop, b: Prop) -> Prop {
        Prop::Impl(Box::new(a), Box::new(b))
    }

    pub fn cond(a: Prop, b: Prop) -> Prop {
        Prop::Cond(Box::new(a), Box::new(b))
    }

    /// `X -> F`
    pub fn neg(a: Prop) -> Prop {
        Prop::implies(a, Prop::Bot)
    }

    /// `~X -> Y`
    pub fn or(a: Prop, b: Prop) -> Prop {
        Prop::implies(Prop::neg(a), b)
    }

    /// `~(~X | ~Y)`
    pub fn and(a: Prop, b: Prop) -> Prop {
        Prop::neg(Prop::or(Prop::neg(a), Prop::neg(b)))
    }

    /// `~F`
    pub fn top() -> Prop {
        Prop::neg(Prop::Bot)
    }

    /// `(X -> Y) & (Y -> X)`
    pub fn iff(a: Prop, b: Prop) -> Prop {
        Prop::and(Prop::implies(a.clone(), b.clone()), Prop::implies(b, a))
    }

    pub fn as_neg(&self) -> Option<&Prop> {
        match self {
            Prop::Impl(a, b) if **b == Prop::Bot => Some(a),
            _ => None,
        }
    }

    pub fn as_and(&self) -> Option<(&Prop, &Prop)> {
        let inner = self.as_neg()?;
        let Prop::Impl(l, r) = inner else { return None };
        Some((l.as_neg()?.as_neg()?, r.as_neg()?))
    }

    pub fn as_iff(&self) -> Option<(&Prop, &Prop)> {
        let (l, r) = self.as_and()?;
        match (l, r) {
            (Prop::Impl(a, b), Prop::Impl(c, d)) if a == d && b == c => Some((a, b)),
            _ => None,
        }
    }

    pub fn is_top(&self) -> bool {
        self.as_neg() == Some(&Prop::Bot)
    }

    /// Names of the atomic propositions, sorted.
    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            Prop::Bot | Prop::Lit(_) => {}
            Prop::Atom(n) => {
                out.insert(n.clone());
            }
            Prop::Impl(a, b) | Prop::Cond(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Prop::Bot | Prop::Atom(_) | Prop::Lit(_) => 1,
            Prop::Impl(a, b) | Prop::Cond(a, b) => 1 + a.size() + b.size(),
        }
    }

    fn prec(&self) -> u8 {
        if self.is_top() {
            return 9;
        }
        if self.as_iff().is_some() {
            return 1;
        }
        if self.as_and().is_some() {
            return 4;
        }
        match self {
            Prop::Impl(_, b) if **b == Prop::Bot => 5,
            Prop::Impl(..) => 2,
            Prop::Cond(..) => 5,
            _ => 9,
        }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let p = self.prec();
        if p < min {
            f.write_str("(")?;
        }
        if self.is_top() {
            f.write_str("T")?;
        } else if let Some((a, b)) = self.as_iff() {
            a.write(f, 2)?;
            f.write_str(" <-> ")?;
            b.write(f, 1)?;
        } else if let Some((a, b)) = self.as_and() {
            a.write(f, 4)?;
            f.write_str(" & ")?;
            b.write(f, 5)?;
        } else {
            match self {
                Prop::Bot => f.write_str("F")?,
                Prop::Atom(n) => f.write_str(n)?,
                Prop::Lit(s) => f.write_str(s)?,
                Prop::Impl(a, b) if **b == Prop::Bot => {
                    f.write_str("~")?;
                    a.write(f, 5)?;
                }
                Prop::Impl(a, b) => {
                    a.write(f, 3)?;
                    f.write_str(" -> ")?;
                    b.write(f, 2)?;
                }
                Prop::Cond(a, b) => {
                    f.write_str("[")?;
                    a.write(f, 0)?;
                    f.write_str("]")?;
                    b.write(f, 5)?;
                }
            }
        }
        if p < min {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Prop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, 0)
    }
}

/// Meta-disjunction `X1 || … || Xn`: some disjunct is everywhere true.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Sequent(pub Vec<Prop>);

impl Sequent {
    pub fn single(p: Prop) -> Self {
        Sequent(vec![p])
    }

    pub fn props(&self) -> &[Prop] {
        &self.0
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        self.0.iter().flat_map(Prop::atoms).collect()
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" || ")?;
            }
            write!(f, "{}", p)?;
        }
        Ok(())
    }
}
