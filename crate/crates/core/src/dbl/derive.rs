use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::parse::{parse_prop, parse_sequent};
use super::syntax::{Prop, Sequent};
use super::DblError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    /// Propositional tautology, decided by truth table.
    Taut,
    MP,
    /// meta permutation
    MPerm,
    /// meta contraction
    MContract,
    /// meta weakening
    MWeaken,
    AxInfCond,
    AxK,
    AxCondInf,
    AxNeg,
    AxInd,
    /// A hypothesis of a schematic derivation.
    Hyp,
}

impl Rule {
    pub const ALL: [Rule; 11] = [
        Rule::Taut,
        Rule::MP,
        Rule::MPerm,
        Rule::MContract,
        Rule::MWeaken,
        Rule::AxInfCond,
        Rule::AxK,
        Rule::AxCondInf,
        Rule::AxNeg,
        Rule::AxInd,
        Rule::Hyp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::Taut => "TAUT",
            Rule::MP => "MP",
            Rule::MPerm => "mP",
            Rule::MContract => "mC",
            Rule::MWeaken => "mW",
            Rule::AxInfCond => "AxInfCond",
            Rule::AxK => "AxK",
            Rule::AxCondInf => "AxCondInf",
            Rule::AxNeg => "AxNeg",
            Rule::AxInd => "AxInd",
            Rule::Hyp => "HYP",
        }
    }

    fn premise_count(self) -> usize {
        match self {
            Rule::MP | Rule::AxInd => 2,
            Rule::MPerm | Rule::MContract | Rule::MWeaken | Rule::AxInfCond => 1,
            _ => 0,
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Rule {
    type Err = DblError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Rule::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| DblError::UnknownRule(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub rule: Rule,
    pub premises: Vec<usize>,
    pub conclusion: Sequent,
    /// Optional witnesses for schema letters, checked against the match.
    pub subst: Option<BTreeMap<String, Prop>>,
}

/// A proof script. Atoms are schematic letters; `hypotheses` are the
/// sequents a `HYP` step may introduce.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Derivation {
    pub name: Option<String>,
    pub hypotheses: Vec<Sequent>,
    pub steps: Vec<Step>,
}

#[derive(Serialize, Deserialize)]
struct RawStep {
    rule: String,
    #[serde(default)]
    premises: Vec<usize>,
    conclusion: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    subst: Option<BTreeMap<String, String>>,
}

#[derive(Serialize, Deserialize)]
struct RawDerivation {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    hypotheses: Vec<String>,
    steps: Vec<RawStep>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawAny {
    Full(RawDerivation),
    Bare(Vec<RawStep>),
}

impl Derivation {
    /// Reads either a bare array of steps or an object with `steps` and
    /// optional `name` and `hypotheses`.
    pub fn from_json(text: &str) -> Result<Self, DblError> {
        let raw: RawAny = serde_json::from_str(text).map_err(|e| DblError::Json(e.to_string()))?;
        let raw = match raw {
            RawAny::Full(r) => r,
            RawAny::Bare(steps) => RawDerivation { name: None, hypotheses: vec![], steps },
        };
        let hypotheses = raw
            .hypotheses
            .iter()
            .map(|h| parse_sequent(h))
            .collect::<Result<_, _>>()?;
        let steps = raw
            .steps
            .into_iter()
            .map(|s| {
                let subst = s
                    .subst
                    .map(|m| {
                        m.into_iter()
                            .map(|(k, v)| Ok((k, parse_prop(&v)?)))
                            .collect::<Result<BTreeMap<_, _>, DblError>>()
                    })
                    .transpose()?;
                Ok(Step {
                    rule: s.rule.parse()?,
                    premises: s.premises,
                    conclusion: parse_sequent(&s.conclusion)?,
                    subst,
                })
            })
            .collect::<Result<_, DblError>>()?;
        Ok(Derivation { name: raw.name, hypotheses, steps })
    }

    pub fn to_json(&self) -> String {
        let raw = RawDerivation {
            name: self.name.clone(),
            hypotheses: self.hypotheses.iter().map(ToString::to_string).collect(),
            steps: self
                .steps
                .iter()
                .map(|s| RawStep {
                    rule: s.rule.name().to_string(),
                    premises: s.premises.clone(),
                    conclusion: s.conclusion.to_string(),
                    subst: s
                        .subst
                        .as_ref()
                        .map(|m| m.iter().map(|(k, v)| (k.clone(), v.to_string())).collect()),
                })
                .collect(),
        };
        let mut out = serde_json::to_string_pretty(&raw).expect("derivations always serialize");
        out.push('\n');
        out
    }

    pub fn conclusion(&self) -> Option<&Sequent> {
        self.steps.last().map(|s| &s.conclusion)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("step {step} ({rule}): {reason}")]
pub struct CheckError {
    pub step: usize,
    pub rule: String,
    pub reason: String,
}

/// What a valid derivation establishes: if every hypothesis is provable,
/// so is the conclusion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Theorem {
    pub hypotheses: Vec<Sequent>,
    pub conclusion: Sequent,
    pub steps: usize,
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, h) in self.hypotheses.iter().enumerate() {
            if i > 0 {
                f.write_str(" ; ")?;
            }
            write!(f, "{}", h)?;
        }
        if !self.hypotheses.is_empty() {
            f.write_str(" ")?;
        }
        write!(f, "|- {}", self.conclusion)
    }
}

pub fn check_derivation(d: &Derivation) -> Result<Theorem, CheckError> {
    if d.steps.is_empty() {
        return Err(CheckError { step: 0, rule: "-".into(), reason: "empty derivation".into() });
    }
    for (i, step) in d.steps.iter().enumerate() {
        check_step(d, i, step).map_err(|reason| CheckError {
            step: i,
            rule: step.rule.to_string(),
            reason,
        })?;
    }
    Ok(Theorem {
        hypotheses: d.hypotheses.clone(),
        conclusion: d.steps.last().unwrap().conclusion.clone(),
        steps: d.steps.len(),
    })
}

fn check_step(d: &Derivation, i: usize, step: &Step) -> Result<(), String> {
    let want = step.rule.premise_count();
    if step.premises.len() != want {
        return Err(format!("expected {} premise(s), got {}", want, step.premises.len()));
    }
    let mut prem = Vec::with_capacity(want);
    for &p in &step.premises {
        if p >= i {
            return Err(format!("premise {} does not precede this step", p));
        }
        prem.push(d.steps[p].conclusion.props());
    }
    let c = step.conclusion.props();
    if c.is_empty() {
        return Err("empty conclusion".into());
    }
    let bindings = match step.rule {
        Rule::Hyp => {
            if !d.hypotheses.contains(&step.conclusion) {
                return Err("not a declared hypothesis".into());
            }
            None
        }
        Rule::Taut => {
            if !c.iter().any(is_tautology) {
                return Err("no disjunct is a propositional tautology".into());
            }
            None
        }
        Rule::MP => {
            check_mp(prem[0], prem[1], c)?;
            None
        }
        Rule::MPerm => {
            let (mut a, mut b) = (prem[0].to_vec(), c.to_vec());
            a.sort();
            b.sort();
            if a != b {
                return Err("conclusion is not a permutation of the premise".into());
            }
            None
        }
        Rule::MContract => {
            let p = prem[0];
            let ok = p.len() == c.len() + 1
                && (0..p.len()).any(|r| {
                    without(p, r) == c && p.iter().enumerate().any(|(k, q)| k != r && *q == p[r])
                });
            if !ok {
                return Err("conclusion does not drop a repeated disjunct".into());
            }
            None
        }
        Rule::MWeaken => {
            let p = prem[0];
            if !(c.len() == p.len() + 1 && (0..c.len()).any(|r| without(c, r) == p)) {
                return Err("conclusion does not add one disjunct to the premise".into());
            }
            None
        }
        Rule::AxK | Rule::AxCondInf | Rule::AxNeg => {
            if c.len() != 1 {
                return Err("axioms have a single disjunct".into());
            }
            let mut b = HashMap::new();
            if !matches(schema(step.rule), &c[0], &mut b) {
                return Err(format!("not an instance of {}", schema(step.rule)));
            }
            Some(b)
        }
        Rule::AxInfCond => {
            let p = prem[0];
            let (gamma, last) = p.split_last().map(|(l, g)| (g, l)).ok_or("empty premise")?;
            let Prop::Impl(x, y) = last else {
                return Err("premise does not end in an implication".into());
            };
            let mut expect = gamma.to_vec();
            expect.push(Prop::neg((**x).clone()));
            expect.push(Prop::Cond(x.clone(), y.clone()));
            if c != expect {
                return Err(format!("expected conclusion {}", Sequent(expect)));
            }
            Some(HashMap::from([("X".to_string(), (**x).clone()), ("Y".to_string(), (**y).clone())]))
        }
        Rule::AxInd => {
            let (p1, p2) = (prem[0], prem[1]);
            let (Some((a, g1)), Some((b, g2)), Some((z, g3))) =
                (p1.split_last(), p2.split_last(), c.split_last())
            else {
                return Err("empty sequent".into());
            };
            if g1 != g2 || g1 != g3 {
                return Err("premises and conclusion must share the same context".into());
            }
            let pats = ind_schemas();
            let mut m = HashMap::new();
            if !matches(&pats[0], a, &mut m) {
                return Err(format!("first premise must end in {}", pats[0]));
            }
            if !matches(&pats[1], b, &mut m) {
                return Err(format!("second premise must end in {}", pats[1]));
            }
            if !matches(&pats[2], z, &mut m) {
                return Err(format!("conclusion must end in {}", pats[2]));
            }
            Some(m)
        }
    };
    if let Some(subst) = &step.subst {
        let Some(b) = bindings else {
            return Err("substitution given for a rule without schema letters".into());
        };
        for (k, v) in subst {
            match b.get(k) {
                Some(w) if w == v => {}
                Some(w) => return Err(format!("bad substitution: {} is {}, not {}", k, w, v)),
                None => return Err(format!("bad substitution: no letter {}", k)),
            }
        }
    }
    Ok(())
}

fn without(s: &[Prop], r: usize) -> Vec<Prop> {
    let mut v = s.to_vec();
    v.remove(r);
    v
}

fn check_mp(p1: &[Prop], p2: &[Prop], c: &[Prop]) -> Result<(), String> {
    let Some(y) = c.last() else {
        return Err("empty conclusion".into());
    };
    for (i, q) in p2.iter().enumerate() {
        let Prop::Impl(x, y2) = q else { continue };
        if **y2 != *y {
            continue;
        }
        let delta = without(p2, i);
        for (j, q1) in p1.iter().enumerate() {
            if q1 != &**x {
                continue;
            }
            let mut expect = without(p1, j);
            expect.extend(delta.iter().cloned());
            expect.push(y.clone());
            if expect == c {
                return Ok(());
            }
        }
    }
    Err("premises do not have the shapes ⌊Γ|X⌋ and ⌊Δ|X -> Y⌋ for ⌊Γ|Δ|Y⌋".into())
}

fn schema(rule: Rule) -> &'static Prop {
    static K: OnceLock<Prop> = OnceLock::new();
    static CI: OnceLock<Prop> = OnceLock::new();
    static NEG: OnceLock<Prop> = OnceLock::new();
    let (cell, src) = match rule {
        Rule::AxK => (&K, "[X](Y -> Z) -> ([X]Y -> [X]Z)"),
        Rule::AxCondInf => (&CI, "[X]Y -> (X -> Y)"),
        Rule::AxNeg => (&NEG, "[X]~Y <-> ~[X]Y"),
        _ => unreachable!(),
    };
    cell.get_or_init(|| parse_prop(src).unwrap())
}

fn ind_schemas() -> &'static [Prop; 3] {
    static S: OnceLock<[Prop; 3]> = OnceLock::new();
    S.get_or_init(|| {
        ["Y <-> ~X", "[X]Z <-> Z", "[Y]Z <-> Z"].map(|s| parse_prop(s).unwrap())
    })
}

/// Matches `target` against `pat`, whose atoms are schema letters.
pub fn matches(pat: &Prop, target: &Prop, b: &mut HashMap<String, Prop>) -> bool {
    match (pat, target) {
        (Prop::Atom(n), t) => match b.get(n) {
            Some(bound) => bound == t,
            None => {
                b.insert(n.clone(), t.clone());
                true
            }
        },
        (Prop::Bot, Prop::Bot) => true,
        (Prop::Lit(a), Prop::Lit(c)) => a == c,
        (Prop::Impl(a, c), Prop::Impl(x, y)) | (Prop::Cond(a, c), Prop::Cond(x, y)) => {
            matches(a, x, b) && matches(c, y, b)
        }
        _ => false,
    }
}

/// Replaces atoms by the bound propositions.
pub fn substitute(p: &Prop, s: &BTreeMap<String, Prop>) -> Prop {
    match p {
        Prop::Atom(n) => s.get(n).cloned().unwrap_or_else(|| p.clone()),
        Prop::Bot | Prop::Lit(_) => p.clone(),
        Prop::Impl(a, b) => Prop::implies(substitute(a, s), substitute(b, s)),
        Prop::Cond(a, b) => Prop::cond(substitute(a, s), substitute(b, s)),
    }
}

const MAX_TAUT_LETTERS: usize = 22;

enum Node {
    Bot,
    Var(usize),
    Impl(Box<Node>, Box<Node>),
}

fn compile(p: &Prop, letters: &mut HashMap<Prop, usize>) -> Node {
    match p {
        Prop::Bot => Node::Bot,
        Prop::Impl(a, b) => Node::Impl(Box::new(compile(a, letters)), Box::new(compile(b, letters))),
        _ => {
            let n = letters.len();
            Node::Var(*letters.entry(p.clone()).or_insert(n))
        }
    }
}

fn truth(n: &Node, v: u32) -> bool {
    match n {
        Node::Bot => false,
        Node::Var(i) => v >> i & 1 == 1,
        Node::Impl(a, b) => !truth(a, v) || truth(b, v),
    }
}

/// Classical tautology with atoms, literals and conditionals as opaque
/// letters. Formulas with too many letters are rejected.
pub fn is_tautology(p: &Prop) -> bool {
    let mut letters = HashMap::new();
    let node = compile(p, &mut letters);
    if letters.len() > MAX_TAUT_LETTERS {
        return false;
    }
    (0..1u32 << letters.len()).all(|v| truth(&node, v))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn step(rule: Rule, premises: &[usize], c: &str) -> Step {
        Step { rule, premises: premises.to_vec(), conclusion: parse_sequent(c).unwrap(), subst: None }
    }

    fn check(hyps: &[&str], steps: Vec<Step>) -> Result<Theorem, CheckError> {
        check_derivation(&Derivation {
            name: None,
            hypotheses: hyps.iter().map(|h| parse_sequent(h).unwrap()).collect(),
            steps,
        })
    }

    #[test]
    fn tautologies() {
        for s in ["X -> X", "X | ~X", "[X]Y -> [X]Y", "(X -> Y) -> (~Y -> ~X)", "T", "~F"] {
            assert!(is_tautology(&parse_prop(s).unwrap()), "{}", s);
        }
        for s in ["X", "[X]Y -> Y", "[X]Y -> [X]Z", "F"] {
            assert!(!is_tautology(&parse_prop(s).unwrap()), "{}", s);
        }
    }

    #[test]
    fn modus_ponens() {
        let ok = check(
            &["G || X"],
            vec![
                step(Rule::Hyp, &[], "G || X"),
                step(Rule::Taut, &[], "X -> X | Y"),
                step(Rule::MP, &[0, 1], "G || X | Y"),
            ],
        );
        assert_eq!(ok.unwrap().conclusion.to_string(), "G || ~X -> Y");
        let bad = check(
            &["G || X"],
            vec![
                step(Rule::Hyp, &[], "G || X"),
                step(Rule::Taut, &[], "X -> X | Y"),
                step(Rule::MP, &[0, 1], "G || Y"),
            ],
        );
        assert_eq!(bad.unwrap_err().step, 2);
    }

    #[test]
    fn meta_rules() {
        let base = || vec![step(Rule::Taut, &[], "X -> X")];
        let mut s = base();
        s.push(step(Rule::MWeaken, &[0], "Y || X -> X"));
        s.push(step(Rule::MWeaken, &[1], "Y || X -> X || Y"));
        s.push(step(Rule::MContract, &[2], "X -> X || Y"));
        s.push(step(Rule::MPerm, &[3], "Y || X -> X"));
        assert!(check(&[], s).is_ok());
        let mut s = base();
        s.push(step(Rule::MContract, &[0], "X -> X"));
        assert!(check(&[], s).is_err());
        let mut s = base();
        s.push(step(Rule::MPerm, &[0], "Y || X -> X"));
        assert!(check(&[], s).is_err());
    }

    #[test]
    fn axiom_schemas() {
        assert!(check(&[], vec![step(Rule::AxK, &[], "[a](b -> c) -> ([a]b -> [a]c)")]).is_ok());
        assert!(check(&[], vec![step(Rule::AxK, &[], "[a](b -> c) -> ([a]b -> [b]c)")]).is_err());
        assert!(check(&[], vec![step(Rule::AxCondInf, &[], "[a & b]~c -> (a & b -> ~c)")]).is_ok());
        assert!(check(&[], vec![step(Rule::AxNeg, &[], "[a]~[b]c <-> ~[a][b]c")]).is_ok());
        assert!(check(&[], vec![step(Rule::AxNeg, &[], "[a]~b <-> [a]b")]).is_err());
    }

    #[test]
    fn inference_rules() {
        let r = check(
            &[],
            vec![
                step(Rule::Taut, &[], "X -> X"),
                step(Rule::AxInfCond, &[0], "~X || [X]X"),
            ],
        );
        assert!(r.is_ok());
        let r = check(
            &["G || Y <-> ~X", "G || [X]Z <-> Z"],
            vec![
                step(Rule::Hyp, &[], "G || Y <-> ~X"),
                step(Rule::Hyp, &[], "G || [X]Z <-> Z"),
                step(Rule::AxInd, &[0, 1], "G || [Y]Z <-> Z"),
            ],
        );
        assert!(r.is_ok());
        let r = check(
            &["G || Y <-> ~X", "H || [X]Z <-> Z"],
            vec![
                step(Rule::Hyp, &[], "G || Y <-> ~X"),
                step(Rule::Hyp, &[], "H || [X]Z <-> Z"),
                step(Rule::AxInd, &[0, 1], "G || [Y]Z <-> Z"),
            ],
        );
        assert!(r.is_err());
    }

    #[test]
    fn substitution_witnesses() {
        let mut s = step(Rule::AxCondInf, &[], "[a]b -> (a -> b)");
        s.subst = Some(BTreeMap::from([("X".into(), Prop::atom("a"))]));
        assert!(check(&[], vec![s.clone()]).is_ok());
        s.subst = Some(BTreeMap::from([("X".into(), Prop::atom("b"))]));
        let e = check(&[], vec![s]).unwrap_err();
        assert!(e.reason.contains("bad substitution"));
    }

    #[test]
    fn hypotheses_and_ordering() {
        assert!(check(&[], vec![step(Rule::Hyp, &[], "X")]).is_err());
        let r = check(&[], vec![step(Rule::Taut, &[], "X -> X"), step(Rule::MPerm, &[1], "X -> X")]);
        assert!(r.unwrap_err().reason.contains("precede"));
        assert!(check(&[], vec![]).is_err());
    }

    #[test]
    fn json_forms() {
        let bare = r#"[{"rule": "TAUT", "premises": [], "conclusion": "X -> X"},
                       {"rule": "AxInfCond", "premises": [0], "conclusion": "~X || [X]X"}]"#;
        let d = Derivation::from_json(bare).unwrap();
        assert!(check_derivation(&d).is_ok());
        let back = Derivation::from_json(&d.to_json()).unwrap();
        assert_eq!(back, d);
        assert!(Derivation::from_json(r#"[{"rule": "XX", "conclusion": "X"}]"#).is_err());
    }
}
