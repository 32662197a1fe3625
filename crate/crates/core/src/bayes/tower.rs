use std::collections::HashMap;
use std::sync::Arc;

use crate::boolalg::{AlgebraId, AtomId, BoolAlgError, Element, FiniteBooleanAlgebra};

use super::pairing::cantor_unpair;
use super::BayesError;

pub const DEFAULT_MAX_ATOMS: usize = 4096;

// nested `(p,q)` labels double in length per step; deeper stages switch
// to `s<stage>.<index>`
const MAX_NESTED_LABEL: usize = 40;

/// Where an atom of a stage comes from.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Lineage {
    /// Atom of the base algebra.
    Base(String),
    /// `(first, second)`, atoms of the previous stage on opposite sides of
    /// the conditioned element.
    Pair(AtomId, AtomId),
    /// Copied unchanged by a trivial step.
    Carried(AtomId),
}

/// One level of an [`ExtensionTower`].
#[derive(Debug, Clone)]
pub struct Stage {
    index: usize,
    algebra: Arc<FiniteBooleanAlgebra>,
    lineage: Vec<Lineage>,
    // element of the previous stage this stage was built from
    step_base: Option<Element>,
    transposition: Option<Vec<AtomId>>,
}

impl Stage {
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn algebra(&self) -> &FiniteBooleanAlgebra {
        &self.algebra
    }

    pub fn id(&self) -> AlgebraId {
        self.algebra.id()
    }

    pub fn atom_count(&self) -> usize {
        self.lineage.len()
    }

    pub fn lineage(&self) -> &[Lineage] {
        &self.lineage
    }

    /// The element `b` of the previous stage, unless this is stage 0 or
    /// the step conditioned on `⊥` or `⊤`.
    pub fn conditioned_base(&self) -> Option<&Element> {
        self.step_base.as_ref().filter(|b| !b.is_trivial())
    }

    /// Element the step into this stage was asked for, trivial or not.
    pub fn step_base(&self) -> Option<&Element> {
        self.step_base.as_ref()
    }

    pub fn is_pair_stage(&self) -> bool {
        self.transposition.is_some()
    }

    /// `(p, q) ↦ (q, p)`; `None` outside pair stages.
    pub fn transpose(&self, atom: AtomId) -> Option<AtomId> {
        self.transposition.as_ref().map(|t| t[atom.0])
    }

    pub fn transpose_element(&self, x: &Element) -> Option<Element> {
        let t = self.transposition.as_ref()?;
        Some(self.algebra.element(x.atoms().map(|a| t[a.0])).unwrap())
    }

    /// First component (or carried original) in the previous stage.
    pub fn parent(&self, atom: AtomId) -> Option<AtomId> {
        match self.lineage[atom.0] {
            Lineage::Base(_) => None,
            Lineage::Pair(p, _) | Lineage::Carried(p) => Some(p),
        }
    }

    /// For each atom of the previous stage, the atoms of this stage it maps to.
    pub fn step_map(&self, previous_atoms: usize) -> Vec<Vec<AtomId>> {
        let mut map = vec![Vec::new(); previous_atoms];
        for i in 0..self.atom_count() {
            if let Some(p) = self.parent(AtomId(i)) {
                map[p.0].push(AtomId(i));
            }
        }
        map
    }

    pub fn print(&self, x: &Element) -> String {
        self.algebra.print_element(x)
    }
}

/// The set of elements `b` for which `[b]·` is total at one stage.
#[derive(Debug, Clone)]
pub struct ConditioningDomain {
    stage: usize,
    elements: Vec<Element>,
}

impl ConditioningDomain {
    pub fn stage(&self) -> usize {
        self.stage
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn contains(&self, x: &Element) -> bool {
        self.elements.contains(x)
    }
}

/// Chain of stages `E_0 ⊂ E_1 ⊂ …` joined by the morphisms ψ.
#[derive(Debug, Clone)]
pub struct ExtensionTower {
    stages: Vec<Stage>,
    by_id: HashMap<AlgebraId, usize>,
    max_atoms: usize,
}

impl ExtensionTower {
    pub fn new(base: FiniteBooleanAlgebra) -> Self {
        let lineage = base.labels().iter().cloned().map(Lineage::Base).collect();
        let stage = Stage {
            index: 0,
            algebra: Arc::new(base),
            lineage,
            step_base: None,
            transposition: None,
        };
        let mut by_id = HashMap::new();
        by_id.insert(stage.id(), 0);
        ExtensionTower {
            stages: vec![stage],
            by_id,
            max_atoms: DEFAULT_MAX_ATOMS,
        }
    }

    pub fn with_max_atoms(mut self, max_atoms: usize) -> Self {
        self.max_atoms = max_atoms;
        self
    }

    pub fn max_atoms(&self) -> usize {
        self.max_atoms
    }

    pub fn set_max_atoms(&mut self, max_atoms: usize) {
        self.max_atoms = max_atoms;
    }

    pub fn base(&self) -> &Stage {
        &self.stages[0]
    }

    pub fn latest(&self) -> &Stage {
        self.stages.last().unwrap()
    }

    pub fn latest_index(&self) -> usize {
        self.stages.len() - 1
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    pub fn stage(&self, i: usize) -> Result<&Stage, BayesError> {
        self.stages.get(i).ok_or(BayesError::NoSuchStage(i))
    }

    /// `(stage, element)` for every extension step, in order.
    pub fn history(&self) -> impl Iterator<Item = (usize, &Element)> {
        self.stages[1..]
            .iter()
            .map(|s| (s.index - 1, s.step_base.as_ref().unwrap()))
    }

    pub fn stage_of(&self, x: &Element) -> Result<usize, BayesError> {
        self.by_id
            .get(&x.algebra())
            .copied()
            .ok_or(BayesError::ForeignElement(x.algebra()))
    }

    /// ψ_{i,j}: stage-`j` atoms whose stage-`i` ancestor lies in `x`.
    pub fn psi(&self, i: usize, j: usize, x: &Element) -> Result<Element, BayesError> {
        if i > j {
            return Err(BayesError::BackwardMap { from: i, to: j });
        }
        self.stage(j)?;
        self.stage(i)?.algebra.check(x)?;
        let mut cur = x.clone();
        for k in i + 1..=j {
            let st = &self.stages[k];
            let atoms = (0..st.atom_count())
                .map(AtomId)
                .filter(|&a| cur.contains(st.parent(a).unwrap()));
            cur = st.algebra.element(atoms).unwrap();
        }
        Ok(cur)
    }

    /// Maps an element of any stage to the latest one.
    pub fn forward(&self, x: &Element) -> Result<Element, BayesError> {
        let i = self.stage_of(x)?;
        self.psi(i, self.latest_index(), x)
    }

    /// Maps `x` up to stage `j`.
    pub fn forward_to(&self, x: &Element, j: usize) -> Result<Element, BayesError> {
        let i = self.stage_of(x)?;
        self.psi(i, j, x)
    }

    pub fn ancestor(&self, j: usize, atom: AtomId, i: usize) -> AtomId {
        let mut a = atom;
        for k in (i + 1..=j).rev() {
            a = self.stages[k].parent(a).unwrap();
        }
        a
    }

    /// The element of stage `i` whose ψ-image is `x`, if any.
    pub fn preimage(&self, x: &Element, i: usize) -> Result<Option<Element>, BayesError> {
        let j = self.stage_of(x)?;
        if i > j {
            return Err(BayesError::BackwardMap { from: j, to: i });
        }
        let candidate = self.stages[i]
            .algebra
            .element(x.atoms().map(|a| self.ancestor(j, a, i)))
            .unwrap();
        Ok((self.psi(i, j, &candidate)? == *x).then_some(candidate))
    }

    /// Elements `b` with `[b]·` total at stage `i`: ⊥, ⊤ and the images of
    /// every earlier nontrivial base together with their complements.
    pub fn domain(&self, i: usize) -> Result<ConditioningDomain, BayesError> {
        let st = self.stage(i)?;
        let mut elements = vec![st.algebra.bottom(), st.algebra.top()];
        for k in 0..i {
            if let Some(b) = self.stages[k + 1].conditioned_base() {
                let img = self.psi(k, i, b)?;
                for e in [img.complement(), img] {
                    if !elements.contains(&e) {
                        elements.push(e);
                    }
                }
            }
        }
        Ok(ConditioningDomain { stage: i, elements })
    }

    /// The latest stage `K` whose step conditioned on (an ancestor image of)
    /// `x` or `∼x`, with the preimage of `x` at `K`. `x` must live at the
    /// latest stage.
    fn totalizing(&self, x: &Element) -> Result<Option<(usize, Element)>, BayesError> {
        let n = self.latest_index();
        for k in (0..n).rev() {
            let Some(b) = self.stages[k + 1].conditioned_base() else {
                continue;
            };
            let img = self.psi(k, n, b)?;
            let flipped = img.complement();
            if img == *x || flipped == *x {
                let at_k1 = self.psi(k, k + 1, b)?;
                let x_k1 = if img == *x { at_k1 } else { at_k1.complement() };
                return Ok(Some((k + 1, x_k1)));
            }
        }
        Ok(None)
    }

    /// Whether the pair `(ω, υ)` is dropped when the latest stage is
    /// extended on `b`. Both atoms belong to the latest stage and lie on
    /// opposite sides of `b`.
    pub fn exclusion_test(&self, omega: AtomId, upsilon: AtomId, b: &Element) -> Result<bool, BayesError> {
        let b = self.forward(b)?;
        let n = self.latest_index();
        let count = self.latest().atom_count();
        for a in [omega, upsilon] {
            if a.0 >= count {
                return Err(BayesError::NotAnAtom(a.0));
            }
        }
        if b.contains(omega) == b.contains(upsilon) {
            return Err(BayesError::SameSide);
        }
        Ok(match self.totalizing(&b)? {
            None => false,
            Some((k, _)) => {
                let t = &self.stages[k];
                self.ancestor(n, omega, k) != t.transpose(self.ancestor(n, upsilon, k)).unwrap()
            }
        })
    }

    /// Appends the stage conditioned on `b` and returns its index.
    pub fn extend(&mut self, b: &Element) -> Result<usize, BayesError> {
        let b = self.forward(b)?;
        let n = self.latest_index();
        let prev = self.latest().clone();

        if b.is_trivial() {
            let lineage = (0..prev.atom_count()).map(|i| Lineage::Carried(AtomId(i))).collect();
            let algebra = FiniteBooleanAlgebra::with_labels(prev.algebra.labels().to_vec())?;
            self.push(Stage {
                index: n + 1,
                algebra: Arc::new(algebra),
                lineage,
                step_base: Some(b),
                transposition: None,
            });
            return Ok(n + 1);
        }

        // partner test: ancestors at the totalizing stage must be transposes
        let rule = self.totalizing(&b)?.map(|(k, _)| {
            let anc: Vec<AtomId> = (0..prev.atom_count())
                .map(|a| self.ancestor(n, AtomId(a), k))
                .collect();
            (k, anc)
        });
        let compatible = |w: usize, u: usize| match &rule {
            None => true,
            Some((k, anc)) => anc[w] == self.stages[*k].transpose(anc[u]).unwrap(),
        };

        let mut pairs = Vec::new();
        for w in 0..prev.atom_count() {
            for u in 0..prev.atom_count() {
                if b.contains(AtomId(w)) != b.contains(AtomId(u)) && compatible(w, u) {
                    pairs.push((w, u));
                }
            }
        }
        if pairs.len() > self.max_atoms {
            return Err(BayesError::TooLarge {
                atoms: pairs.len(),
                max: self.max_atoms,
            });
        }

        let position: HashMap<(usize, usize), usize> =
            pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let transposition = pairs.iter().map(|&(w, u)| AtomId(position[&(u, w)])).collect();
        let mut labels: Vec<String> = pairs
            .iter()
            .map(|&(w, u)| format!("({},{})", prev.algebra.labels()[w], prev.algebra.labels()[u]))
            .collect();
        if labels.iter().any(|l| l.len() > MAX_NESTED_LABEL) {
            labels = (0..pairs.len()).map(|i| format!("s{}.{}", n + 1, i)).collect();
        }
        let lineage = pairs
            .iter()
            .map(|&(w, u)| Lineage::Pair(AtomId(w), AtomId(u)))
            .collect();
        self.push(Stage {
            index: n + 1,
            algebra: Arc::new(FiniteBooleanAlgebra::with_labels(labels)?),
            lineage,
            step_base: Some(b),
            transposition: Some(transposition),
        });
        Ok(n + 1)
    }

    fn push(&mut self, stage: Stage) {
        self.by_id.insert(stage.id(), stage.index);
        self.stages.push(stage);
    }

    /// `[x]y`, extending the tower when no existing stage makes it total.
    /// The result lives at the latest stage after the call.
    pub fn conditional(&mut self, x: &Element, y: &Element) -> Result<Element, BayesError> {
        if let Some(r) = self.conditional_shortcut(x, y)? {
            return Ok(r);
        }
        self.conditional_fresh(x, y)
    }

    /// `[x]y` read off an earlier step that conditioned on `x` or `∼x`,
    /// when `y` already exists at that step. Never extends the tower.
    pub fn conditional_shortcut(&self, x: &Element, y: &Element) -> Result<Option<Element>, BayesError> {
        let x = self.forward(x)?;
        let y = self.forward(y)?;
        if x.is_trivial() {
            return Ok(Some(y));
        }
        let Some((k, x_k)) = self.totalizing(&x)? else {
            return Ok(None);
        };
        let Some(y_k) = self.preimage(&y, k)? else {
            return Ok(None);
        };
        let st = &self.stages[k];
        let m = y_k.meet(&x_k)?;
        let r = m.join(&st.transpose_element(&m).unwrap())?;
        Ok(Some(self.psi(k, self.latest_index(), &r)?))
    }

    /// `[x]y` through a new extension step on `x`, even when an earlier
    /// step already made it total.
    pub fn conditional_fresh(&mut self, x: &Element, y: &Element) -> Result<Element, BayesError> {
        let x = self.forward(x)?;
        let y = self.forward(y)?;
        if x.is_trivial() {
            return Ok(y);
        }
        let n1 = self.extend(&x)?;
        let px = self.psi(n1 - 1, n1, &x)?;
        let py = self.psi(n1 - 1, n1, &y)?;
        let m = py.meet(&px)?;
        let st = &self.stages[n1];
        Ok(m.join(&st.transpose_element(&m).unwrap())?)
    }

    /// Next base under the Cantor schedule: `ψ_{i,n}(u(i, j))` with
    /// `(i, j)` the unpairing of the latest stage index `n`.
    pub fn schedule_next_with(&self, u: impl Fn(&Stage, u64) -> Element) -> Element {
        let n = self.latest_index();
        let (i, j) = cantor_unpair(n as u64);
        let x = u(&self.stages[i as usize], j);
        self.psi(i as usize, n, &x).unwrap()
    }

    /// [`ExtensionTower::schedule_next_with`] for the enumeration that sends
    /// `j` to the element whose atom bitmask is `j` mod `2^atoms`.
    pub fn schedule_next(&self) -> Element {
        self.schedule_next_with(|st, j| st.algebra().element_from_mask(j))
    }

    /// Extends `steps` times along the Cantor schedule.
    pub fn run_schedule(&mut self, steps: usize) -> Result<(), BayesError> {
        for _ in 0..steps {
            let b = self.schedule_next();
            self.extend(&b)?;
        }
        Ok(())
    }

    /// Parses `{a,c}` at the latest stage or `{a,c}@n` at stage `n`.
    pub fn parse_element(&self, text: &str) -> Result<Element, BayesError> {
        let text = text.trim();
        let (lit, stage) = match text.rsplit_once('@') {
            Some((lit, n)) if lit.ends_with('}') => {
                let n = n.trim().parse().map_err(|_| BayesError::BadStageSuffix(text.to_string()))?;
                (lit, n)
            }
            _ => {
                let n = self.latest_index();
                return match self.latest().algebra.parse_element(text) {
                    Err(BoolAlgError::UnknownLabel(_)) if n > 0 => {
                        Err(BayesError::NotAtLatest { literal: text.to_string(), stage: n })
                    }
                    r => Ok(r?),
                };
            }
        };
        Ok(self.stage(stage)?.algebra.parse_element(lit)?)
    }

    /// Canonical literal of `x` in its own stage.
    pub fn print_element(&self, x: &Element) -> Result<String, BayesError> {
        Ok(self.stages[self.stage_of(x)?].print(x))
    }
}
