use std::fmt;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::boolalg::{Element, FiniteBooleanAlgebra};

use super::{BayesError, ExtensionTower};

/// The four laws of a Bayesian algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Law {
    /// `z ↦ [x]z` preserves meets and complements.
    B,
    /// `x ⊆ y` and `x ≠ ⊥` give `[x]y = ⊤`.
    D,
    /// `x ∩ [x]y = x ∩ y`.
    I,
    /// `[x][x]y = [∼x][x]y = [x]y`.
    Ind,
}

impl Law {
    pub const ALL: [Law; 4] = [Law::B, Law::D, Law::I, Law::Ind];
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Law::B => "B",
            Law::D => "D",
            Law::I => "I",
            Law::Ind => "Ind",
        })
    }
}

#[derive(Debug, Clone)]
pub struct AxiomCheck {
    /// Stages with at most this many atoms are checked over every element;
    /// capped at 10.
    pub exhaustive_bound: usize,
    /// Elements drawn per role above the bound.
    pub samples: usize,
    pub seed: u64,
}

impl Default for AxiomCheck {
    fn default() -> Self {
        AxiomCheck {
            exhaustive_bound: 8,
            samples: 24,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub law: Law,
    pub x: String,
    pub y: String,
    pub z: Option<String>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "law {} fails for x = {}, y = {}", self.law, self.x, self.y)?;
        if let Some(z) = &self.z {
            write!(f, ", z = {}", z)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct AxiomReport {
    pub stage: usize,
    pub atoms: usize,
    pub exhaustive: bool,
    /// Instances checked per law, in [`Law::ALL`] order.
    pub checked: [u64; 4],
    pub violation: Option<Violation>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "stage {} ({} atoms, {}): ",
            self.stage,
            self.atoms,
            if self.exhaustive { "exhaustive" } else { "sampled" }
        )?;
        for (law, n) in Law::ALL.iter().zip(self.checked) {
            write!(f, "{}={} ", law, n)?;
        }
        match &self.violation {
            None => f.write_str("ok"),
            Some(v) => write!(f, "FAILED: {}", v),
        }
    }
}

fn sample(alg: &FiniteBooleanAlgebra, count: usize, rng: &mut StdRng) -> Vec<Element> {
    let mut out = vec![alg.bottom(), alg.top()];
    while out.len() < count.max(2) {
        let atoms = (0..alg.atom_count())
            .filter(|_| rng.gen_bool(0.5))
            .map(crate::boolalg::AtomId);
        out.push(alg.element(atoms).unwrap());
    }
    out
}

fn mask(x: &Element) -> u128 {
    x.atoms().fold(0, |m, a| m | 1u128 << a.0)
}

/// Checks laws B, D, I and Ind at the latest stage of `tower`.
///
/// Every `x` is handled on a private copy of the tower, so `tower` itself
/// is left untouched.
pub fn check_bayes_axioms(tower: &ExtensionTower, opts: &AxiomCheck) -> Result<AxiomReport, BayesError> {
    let st = tower.latest();
    let atoms = st.atom_count();
    let exhaustive = atoms <= opts.exhaustive_bound.min(10);
    let alg = st.algebra();
    let mut rng = StdRng::seed_from_u64(opts.seed);
    let (xs, ys): (Vec<Element>, Vec<Element>) = if exhaustive {
        let all: Vec<Element> = alg.elements()?.collect();
        (all.clone(), all)
    } else {
        (sample(alg, opts.samples, &mut rng), sample(alg, opts.samples, &mut rng))
    };

    let mut report = AxiomReport {
        stage: tower.latest_index(),
        atoms,
        exhaustive,
        checked: [0; 4],
        violation: None,
    };

    for x in &xs {
        let mut fork = tower.clone();
        let mut f = Vec::with_capacity(ys.len());
        for y in &ys {
            f.push(fork.conditional(x, y)?);
        }
        let f: Vec<Element> = f.iter().map(|e| fork.forward(e)).collect::<Result<_, _>>()?;
        let px = fork.forward(x)?;
        let fail = |fork: &ExtensionTower, law, y: &Element, z: Option<&Element>| {
            Some(Violation {
                law,
                x: fork.print_element(x).unwrap(),
                y: fork.print_element(y).unwrap(),
                z: z.map(|z| fork.print_element(z).unwrap()),
            })
        };

        for (idx, (y, fy)) in ys.iter().zip(&f).enumerate() {
            report.checked[2] += 1;
            if px.meet(fy)? != fork.forward(&x.meet(y)?)? {
                report.violation = fail(&fork, Law::I, y, None);
                return Ok(report);
            }

            if !x.is_bottom() && x.leq(y)? {
                report.checked[1] += 1;
                if !fy.is_top() {
                    report.violation = fail(&fork, Law::D, y, None);
                    return Ok(report);
                }
            }

            report.checked[0] += 1;
            let f_not_y = if exhaustive {
                f[(1usize << atoms) - 1 - idx].clone()
            } else {
                let r = fork.conditional(x, &y.complement())?;
                fork.forward(&r)?
            };
            if fork.forward(&f_not_y)? != fork.forward(fy)?.complement() {
                report.violation = fail(&fork, Law::B, y, None);
                return Ok(report);
            }

            report.checked[3] += 1;
            let again = fork.conditional(x, fy)?;
            let flipped = fork.conditional(&x.complement(), fy)?;
            let fy_now = fork.forward(fy)?;
            if fork.forward(&again)? != fy_now || fork.forward(&flipped)? != fy_now {
                report.violation = fail(&fork, Law::Ind, y, None);
                return Ok(report);
            }
        }

        if exhaustive {
            let fm: Vec<u128> = f.iter().map(|e| fork.forward(e).map(|e| mask(&e))).collect::<Result<_, _>>()?;
            for a in 0..fm.len() {
                for b in a + 1..fm.len() {
                    report.checked[0] += 1;
                    if fm[a & b] != fm[a] & fm[b] {
                        report.violation = fail(&fork, Law::B, &ys[a], Some(&ys[b]));
                        return Ok(report);
                    }
                }
            }
        } else {
            for _ in 0..opts.samples {
                let y = &ys[rng.gen_range(0..ys.len())];
                let z = &ys[rng.gen_range(0..ys.len())];
                report.checked[0] += 1;
                let lhs = fork.conditional(x, &y.meet(z)?)?;
                let fy = fork.conditional(x, y)?;
                let fz = fork.conditional(x, z)?;
                let rhs = fork.forward(&fy)?.meet(&fork.forward(&fz)?)?;
                if fork.forward(&lhs)? != rhs {
                    report.violation = fail(&fork, Law::B, y, Some(z));
                    return Ok(report);
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tower(labels: &[&str], steps: &[&str]) -> ExtensionTower {
        let mut t = ExtensionTower::new(FiniteBooleanAlgebra::new(labels.iter().copied()).unwrap());
        for s in steps {
            let b = t.parse_element(s).unwrap();
            t.extend(&b).unwrap();
        }
        t
    }

    #[test]
    fn base_stage_satisfies_all_laws() {
        let t = tower(&["a", "c", "d"], &[]);
        let r = check_bayes_axioms(&t, &AxiomCheck::default()).unwrap();
        assert!(r.passed(), "{}", r);
        assert!(r.exhaustive);
        assert!(r.checked.iter().all(|&n| n > 0));
    }

    #[test]
    fn extended_stage_satisfies_all_laws() {
        let t = tower(&["a", "c", "d"], &["{a,c}", "{(a,d),(d,c)}"]);
        let r = check_bayes_axioms(&t, &AxiomCheck::default()).unwrap();
        assert!(r.passed(), "{}", r);
    }

    #[test]
    fn sampled_mode_above_bound() {
        let t = tower(&["a", "c", "d"], &["{a,c}"]);
        let opts = AxiomCheck {
            exhaustive_bound: 3,
            ..AxiomCheck::default()
        };
        let r = check_bayes_axioms(&t, &opts).unwrap();
        assert!(!r.exhaustive);
        assert!(r.passed(), "{}", r);
    }

    #[test]
    fn inference_on_bottom() {
        let mut t = tower(&["a", "c", "d"], &[]);
        let bot = t.latest().algebra().bottom();
        let y = t.parse_element("{a}").unwrap();
        let r = t.conditional(&bot, &y).unwrap();
        assert!(bot.meet(&r).unwrap().is_bottom());
    }
}
