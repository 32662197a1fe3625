//! Browser bindings. Every export takes plain strings and returns a JSON
//! string: `{"ok": true, ...}` or `{"ok": false, "error": "..."}`.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use condalg::bayes::ExtensionTower;
use condalg::boolalg::FiniteBooleanAlgebra;
use condalg::dbl::{evaluate, parse_prop, parse_sequent, search_counterexample, SearchOptions, Valuation};
use condalg::field::OrderedField;
use condalg::prob::{extend_to, AnyDistribution, Distribution, DistributionSpec, Witness};

/// Keeps the demo responsive.
const MAX_ATOMS: usize = 512;

fn reply(r: Result<Value, String>) -> String {
    match r {
        Ok(mut v) => {
            v["ok"] = json!(true);
            v.to_string()
        }
        Err(e) => json!({ "ok": false, "error": e }).to_string(),
    }
}

/// Base labels separated by spaces or commas.
fn tower(atoms: &str) -> Result<ExtensionTower, String> {
    let labels = atoms.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty());
    let alg = FiniteBooleanAlgebra::new(labels).map_err(|e| e.to_string())?;
    Ok(ExtensionTower::new(alg).with_max_atoms(MAX_ATOMS))
}

fn stage_table(t: &ExtensionTower) -> Value {
    t.stages()
        .iter()
        .map(|s| json!({ "index": s.index(), "atoms": s.algebra().labels() }))
        .collect()
}

/// `[x]y` over a fresh tower on `atoms`, with the stages it needed.
#[wasm_bindgen]
pub fn conditional(atoms: &str, x: &str, y: &str) -> String {
    reply((|| {
        let mut t = tower(atoms)?;
        let x = t.parse_element(x).map_err(|e| e.to_string())?;
        let y = t.parse_element(y).map_err(|e| e.to_string())?;
        let r = t.conditional(&x, &y).map_err(|e| e.to_string())?;
        Ok(json!({
            "element": t.print_element(&r).map_err(|e| e.to_string())?,
            "stage": t.stage_of(&r).map_err(|e| e.to_string())?,
            "stages": stage_table(&t),
        }))
    })())
}

fn prob_in<S: OrderedField>(t: &ExtensionTower, d: &Distribution<S>, x: &condalg::boolalg::Element) -> Result<String, String> {
    let d = extend_to(d, t, t.latest_index()).map_err(|e| e.to_string())?;
    Ok(d.prob_of(x).map_err(|e| e.to_string())?.to_string())
}

/// Probability of an expression such as `[{a,c}]{a}`. `masses` lists one
/// scalar per atom in order (`1/4 1/4 1/2`, `e`, `(1-e)/2`); zero masses
/// are lifted to the infinitesimal field.
#[wasm_bindgen]
pub fn probability(atoms: &str, masses: &str, expr: &str) -> String {
    reply((|| {
        let mut t = tower(atoms)?;
        let labels = t.base().algebra().labels().to_vec();
        let values: Vec<&str> = masses.split_whitespace().collect();
        if values.len() != labels.len() {
            return Err(format!("{} masses for {} atoms", values.len(), labels.len()));
        }
        let spec = DistributionSpec {
            stage: 0,
            masses: labels.into_iter().zip(values.iter().map(|s| s.to_string())).collect(),
        };
        let d = AnyDistribution::from_spec(&spec, &t)
            .map_err(|e| e.to_string())?
            .tangible(Witness::Uniform);
        let r = evaluate(&mut t, &Valuation::new(), &parse_prop(expr).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        let value = match &d {
            AnyDistribution::Rational(d) => prob_in(&t, d, &r)?,
            AnyDistribution::Eps(d) => prob_in(&t, d, &r)?,
        };
        Ok(json!({
            "value": value,
            "field": d.field().to_string(),
            "element": t.print_element(&r).map_err(|e| e.to_string())?,
            "stage": t.latest_index(),
        }))
    })())
}

/// Searches small towers for a valuation falsifying a sequent.
#[wasm_bindgen]
pub fn refute(sequent: &str, budget: u32) -> String {
    reply((|| {
        let s = parse_sequent(sequent).map_err(|e| e.to_string())?;
        let opts = SearchOptions { budget: budget as usize, max_atoms: MAX_ATOMS, ..SearchOptions::default() };
        let out = search_counterexample(&s, &opts);
        Ok(match out.counterexample() {
            Some(c) => json!({
                "refuted": true,
                "tried": out.tried(),
                "base": c.tower.base().algebra().labels(),
                "history": c.tower.history().map(|(i, b)| format!("{}@{}", c.tower.stages()[i].print(b), i)).collect::<Vec<_>>(),
                "valuation": c.valuation.display(&c.tower).to_string(),
            }),
            None => json!({ "refuted": false, "tried": out.tried() }),
        })
    })())
}
