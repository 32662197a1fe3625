use std::collections::BTreeMap;
use std::fmt;

use crate::bayes::{BayesError, ExtensionTower};
use crate::boolalg::{Element, FiniteBooleanAlgebra};

use super::syntax::{Prop, Sequent};
use super::DblError;

/// Assignment of tower elements to atomic propositions.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Valuation {
    bindings: BTreeMap<String, Element>,
}

impl Valuation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bind(&mut self, name: &str, x: Element) -> &mut Self {
        self.bindings.insert(name.to_string(), x);
        self
    }

    pub fn with(mut self, name: &str, x: Element) -> Self {
        self.bind(name, x);
        self
    }

    pub fn get(&self, name: &str) -> Option<&Element> {
        self.bindings.get(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Element)> {
        self.bindings.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// Reads `name=literal` pairs, e.g. `x={a,c}` or `y={(a,d)}@1`.
    pub fn parse(tower: &ExtensionTower, pairs: &[&str]) -> Result<Self, DblError> {
        let mut v = Valuation::new();
        for p in pairs {
            let (name, lit) = p
                .split_once('=')
                .ok_or_else(|| DblError::BadBinding(p.to_string()))?;
            v.bind(name.trim(), tower.parse_element(lit)?);
        }
        Ok(v)
    }

    pub fn display<'a>(&'a self, tower: &'a ExtensionTower) -> impl fmt::Display + 'a {
        struct D<'a>(&'a Valuation, &'a ExtensionTower);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                for (i, (k, x)) in self.0.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    let stage = self.1.stage_of(x).map_err(|_| fmt::Error)?;
                    let lit = self.1.print_element(x).map_err(|_| fmt::Error)?;
                    write!(f, "{} = {}@{}", k, lit, stage)?;
                }
                Ok(())
            }
        }
        D(self, tower)
    }
}

/// Interprets `p` in `tower` under `v`. Conditionals may extend the tower;
/// the result lives at its latest stage. Literals without a stage suffix
/// refer to the stage that was latest when evaluation started.
pub fn evaluate(tower: &mut ExtensionTower, v: &Valuation, p: &Prop) -> Result<Element, DblError> {
    let start = tower.latest_index();
    let r = eval(tower, v, p, start)?;
    Ok(tower.forward(&r)?)
}

fn eval(tower: &mut ExtensionTower, v: &Valuation, p: &Prop, start: usize) -> Result<Element, DblError> {
    Ok(match p {
        Prop::Bot => tower.latest().algebra().bottom(),
        Prop::Atom(n) => {
            let x = v.get(n).ok_or_else(|| DblError::Unbound(n.clone()))?;
            tower.forward(x)?
        }
        Prop::Lit(s) => {
            let x = if s.contains('@') {
                tower.parse_element(s)?
            } else {
                tower.parse_element(&format!("{}@{}", s, start))?
            };
            tower.forward(&x)?
        }
        Prop::Impl(a, b) => {
            let a = eval(tower, v, a, start)?;
            let b = eval(tower, v, b, start)?;
            let a = tower.forward(&a)?;
            let b = tower.forward(&b)?;
            a.complement().join(&b).map_err(BayesError::from)?
        }
        Prop::Cond(a, b) => {
            let a = eval(tower, v, a, start)?;
            let b = eval(tower, v, b, start)?;
            tower.conditional(&a, &b)?
        }
    })
}

/// Whether some disjunct of `s` evaluates to ⊤.
pub fn holds(tower: &mut ExtensionTower, v: &Valuation, s: &Sequent) -> Result<bool, DblError> {
    for p in s.props() {
        if evaluate(tower, v, p)?.is_top() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// A valuation under which a sequent fails. `tower` is the tower before
/// evaluation, so the failure can be replayed with [`holds`].
#[derive(Debug, Clone)]
pub struct Counterexample {
    pub tower: ExtensionTower,
    pub valuation: Valuation,
}

impl Counterexample {
    /// Re-evaluates the sequent on a copy of the stored tower.
    pub fn confirms(&self, s: &Sequent) -> Result<bool, DblError> {
        let mut t = self.tower.clone();
        Ok(!holds(&mut t, &self.valuation, s)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    /// Maximum number of valuations evaluated.
    pub budget: usize,
    /// Bases of 2 up to this many atoms are tried.
    pub max_base_atoms: usize,
    /// Also try valuations into the first stage after each single
    /// extension step.
    pub extensions: bool,
    pub max_atoms: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { budget: 20_000, max_base_atoms: 3, extensions: true, max_atoms: 1024 }
    }
}

#[derive(Debug, Clone)]
pub enum SearchOutcome {
    Found { counterexample: Counterexample, tried: usize },
    /// Every candidate valuation was tried.
    Exhausted { tried: usize },
    BudgetSpent { tried: usize },
}

impl SearchOutcome {
    pub fn counterexample(&self) -> Option<&Counterexample> {
        match self {
            SearchOutcome::Found { counterexample, .. } => Some(counterexample),
            _ => None,
        }
    }

    pub fn tried(&self) -> usize {
        match self {
            SearchOutcome::Found { tried, .. }
            | SearchOutcome::Exhausted { tried }
            | SearchOutcome::BudgetSpent { tried } => *tried,
        }
    }
}

/// Candidate towers in the order they are searched: each base on its own,
/// then each base extended once by every nontrivial element.
fn candidate_towers(opts: &SearchOptions) -> Vec<ExtensionTower> {
    let names = ["a", "b", "c", "d", "e", "f"];
    let mut out = Vec::new();
    for m in 2..=opts.max_base_atoms.clamp(2, names.len()) {
        let base = FiniteBooleanAlgebra::new(names[..m].iter().copied()).unwrap();
        let t = ExtensionTower::new(base).with_max_atoms(opts.max_atoms);
        out.push(t.clone());
        if opts.extensions {
            for mask in 1..(1u64 << m) - 1 {
                let mut t1 = t.clone();
                let b = t1.base().algebra().element_from_mask(mask);
                if t1.extend(&b).is_ok() {
                    out.push(t1);
                }
            }
        }
    }
    out
}

/// Searches small towers for a valuation falsifying `s`. Valuations whose
/// evaluation exceeds the atom limit are skipped.
pub fn search_counterexample(s: &Sequent, opts: &SearchOptions) -> SearchOutcome {
    let names: Vec<String> = s.atoms().into_iter().collect();
    let mut tried = 0;
    for tower in candidate_towers(opts) {
        let elements = match tower.latest().algebra().elements() {
            Ok(e) => e.collect::<Vec<_>>(),
            Err(_) => continue,
        };
        let k = names.len();
        let mut digits = vec![0usize; k];
        loop {
            if tried >= opts.budget {
                return SearchOutcome::BudgetSpent { tried };
            }
            tried += 1;
            let mut v = Valuation::new();
            for (n, &d) in names.iter().zip(&digits) {
                v.bind(n, elements[d].clone());
            }
            let mut t = tower.clone();
            if let Ok(false) = holds(&mut t, &v, s) {
                return SearchOutcome::Found {
                    counterexample: Counterexample { tower, valuation: v },
                    tried,
                };
            }
            // next valuation in mixed radix
            let mut i = 0;
            while i < k {
                digits[i] += 1;
                if digits[i] < elements.len() {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
            if i == k {
                break;
            }
        }
    }
    SearchOutcome::Exhausted { tried }
}
