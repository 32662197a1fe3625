use std::collections::BTreeSet;
use std::fmt;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::bayes::ExtensionTower;
use crate::boolalg::FiniteBooleanAlgebra;

use super::derive::Derivation;
use super::semantics::{evaluate, holds, Valuation};
use super::syntax::Sequent;
use super::DblError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SoundnessOptions {
    pub samples: usize,
    pub seed: u64,
    /// Base sizes are cycled through `2..=max_base_atoms`.
    pub max_base_atoms: usize,
    pub max_atoms: usize,
}

impl Default for SoundnessOptions {
    fn default() -> Self {
        SoundnessOptions { samples: 500, seed: 7, max_base_atoms: 4, max_atoms: 2048 }
    }
}

#[derive(Debug, Clone)]
pub struct SoundnessFailure {
    pub tower: ExtensionTower,
    pub valuation: Valuation,
    pub reason: String,
}

#[derive(Debug, Clone)]
pub struct SoundnessReport {
    pub name: String,
    pub sampled: usize,
    /// Valuations under which every hypothesis held.
    pub applicable: usize,
    /// Valuations dropped because evaluation hit the atom limit.
    pub skipped: usize,
    pub bases: BTreeSet<usize>,
    /// Sides of a proved `X <-> Y` compared elementwise.
    pub equivalences: usize,
    pub failure: Option<SoundnessFailure>,
}

impl SoundnessReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

impl fmt::Display for SoundnessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} valuations ({} with hypotheses true, {} skipped) over bases of {:?} atoms: {}",
            self.name,
            self.sampled,
            self.applicable,
            self.skipped,
            self.bases,
            if self.passed() { "ok" } else { "FAILED" }
        )?;
        if let Some(e) = &self.failure {
            write!(f, "\n  {} under {}", e.reason, e.valuation.display(&e.tower))?;
        }
        Ok(())
    }
}

/// A random tower: a base of `m` atoms, extended zero to two times.
fn sample_tower(rng: &mut StdRng, m: usize, max_atoms: usize) -> ExtensionTower {
    let names: Vec<String> = (0..m).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
    let mut t = ExtensionTower::new(FiniteBooleanAlgebra::new(&names).unwrap()).with_max_atoms(max_atoms);
    let steps = rng.gen_range(0..3);
    for _ in 0..steps {
        let n = t.latest().atom_count().min(63);
        let mask = rng.gen_range(0..1u64 << n);
        let b = t.latest().algebra().element_from_mask(mask);
        if t.extend(&b).is_err() {
            break;
        }
    }
    t
}

/// Valuation biased towards ⊥, ⊤ and repeated values, so that hypotheses
/// of schematic derivations hold often enough to matter.
fn sample_valuation(rng: &mut StdRng, t: &ExtensionTower, names: &[String]) -> Valuation {
    let alg = t.latest().algebra();
    let n = alg.atom_count().min(63);
    let mut v = Valuation::new();
    let mut used = Vec::new();
    for name in names {
        let roll = rng.gen_range(0..100);
        let x = if roll < 20 {
            alg.bottom()
        } else if roll < 35 {
            alg.top()
        } else if roll < 55 && !used.is_empty() {
            let k = rng.gen_range(0..used.len());
            let prev: &crate::boolalg::Element = &used[k];
            if rng.gen_bool(0.5) {
                prev.clone()
            } else {
                prev.complement()
            }
        } else {
            alg.element_from_mask(rng.gen_range(0..1u64 << n))
        };
        used.push(x.clone());
        v.bind(name, x);
    }
    v
}

fn letters(d: &Derivation) -> Vec<String> {
    let mut out: BTreeSet<String> = d.hypotheses.iter().flat_map(Sequent::atoms).collect();
    if let Some(c) = d.conclusion() {
        out.extend(c.atoms());
    }
    out.into_iter().collect()
}

/// Samples valuations; whenever every hypothesis of `d` holds, its
/// conclusion must hold too. Single-disjunct `X <-> Y` conclusions are
/// also checked as `evaluate(X) = evaluate(Y)`.
///
/// Every rule is sound valuation by valuation, so this is a necessary
/// condition for the derivation to be correct.
pub fn check_soundness(d: &Derivation, opts: &SoundnessOptions) -> SoundnessReport {
    let mut rng = StdRng::seed_from_u64(opts.seed);
    let names = letters(d);
    let concl = d.conclusion().cloned().unwrap_or(Sequent(vec![]));
    let iff = match concl.props() {
        [p] => p.as_iff().map(|(l, r)| (l.clone(), r.clone())),
        _ => None,
    };
    let mut report = SoundnessReport {
        name: d.name.clone().unwrap_or_else(|| "derivation".into()),
        sampled: 0,
        applicable: 0,
        skipped: 0,
        bases: BTreeSet::new(),
        equivalences: 0,
        failure: None,
    };
    let sizes: Vec<usize> = (2..=opts.max_base_atoms.max(2)).collect();
    for i in 0..opts.samples {
        let m = sizes[i % sizes.len()];
        let tower = sample_tower(&mut rng, m, opts.max_atoms);
        let v = sample_valuation(&mut rng, &tower, &names);
        report.sampled += 1;
        report.bases.insert(m);
        let outcome = (|| -> Result<Option<String>, DblError> {
            let mut t = tower.clone();
            for h in &d.hypotheses {
                if !holds(&mut t, &v, h)? {
                    return Ok(None);
                }
            }
            if !holds(&mut t, &v, &concl)? {
                return Ok(Some(format!("conclusion {} fails", concl)));
            }
            if let (Some((l, r)), true) = (&iff, d.hypotheses.is_empty()) {
                let a = evaluate(&mut t, &v, l)?;
                let b = evaluate(&mut t, &v, r)?;
                if t.forward(&a)? != t.forward(&b)? {
                    return Ok(Some(format!("{} and {} differ", l, r)));
                }
            }
            Ok(Some(String::new()))
        })();
        match outcome {
            Err(_) => report.skipped += 1,
            Ok(None) => {}
            Ok(Some(reason)) => {
                report.applicable += 1;
                if iff.is_some() && d.hypotheses.is_empty() {
                    report.equivalences += 1;
                }
                if !reason.is_empty() {
                    report.failure = Some(SoundnessFailure { tower, valuation: v, reason });
                    break;
                }
            }
        }
    }
    report
}
