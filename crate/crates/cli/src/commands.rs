use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::{json, Value};

use condalg::bayes::{cantor_pair, cantor_unpair, check_bayes_axioms, AxiomCheck, ExtensionTower};
use condalg::boolalg::{AlgebraSpec, AtomId, Element, FiniteBooleanAlgebra};
use condalg::dbl::{
    check_derivation, check_soundness, corpus::corpus, evaluate, parse_prop, parse_sequent, search_counterexample,
    Derivation, SearchOptions, SearchOutcome, SoundnessOptions, Valuation,
};
use condalg::field::OrderedField;
use condalg::prob::{
    extend_to, lewis_search, make_tangible, verify_conditional_law, AnyDistribution, Distribution,
    DistributionSpec, Witness,
};

use crate::error::{read, write, CliError};
use crate::{FieldChoice, GlobalOpts, Report};

/// Stages with at most this many atoms get the conditional law checked on
/// every pair of elements.
const LAW_EXHAUSTIVE_ATOMS: usize = 6;
const LAW_SAMPLES: usize = 24;

fn load_algebra(path: &Path) -> Result<FiniteBooleanAlgebra, CliError> {
    let spec: AlgebraSpec = serde_json::from_str(&read(path)?).map_err(|e| CliError::file(path, e))?;
    Ok(FiniteBooleanAlgebra::from_spec(&spec)?)
}

fn load_tower(o: &GlobalOpts, path: &Path) -> Result<ExtensionTower, CliError> {
    let mut t = ExtensionTower::from_json(&read(path)?).map_err(|e| CliError::file(path, e))?;
    if let Some(n) = o.max_atoms {
        t.set_max_atoms(n);
    }
    Ok(t)
}

fn save_tower(t: &ExtensionTower, path: &Path) -> Result<(), CliError> {
    write(path, &(t.to_json() + "\n"))
}

fn load_dist(o: &GlobalOpts, path: &Path, tower: &ExtensionTower) -> Result<AnyDistribution, CliError> {
    let spec: DistributionSpec = serde_json::from_str(&read(path)?).map_err(|e| CliError::file(path, e))?;
    let d = AnyDistribution::from_spec(&spec, tower).map_err(|e| CliError::file(path, e))?;
    match (o.field, d) {
        (None, d) => Ok(d.tangible(Witness::Uniform)),
        (Some(FieldChoice::Rational), AnyDistribution::Rational(d)) if d.is_strictly_positive() => {
            Ok(AnyDistribution::Rational(d))
        }
        (Some(FieldChoice::Rational), AnyDistribution::Rational(_)) => Err(CliError::file(
            path,
            "some masses are zero, so conditionals need the infinitesimal field (--field eps)",
        )),
        (Some(FieldChoice::Rational), AnyDistribution::Eps(_)) => {
            Err(CliError::file(path, "masses are not rational numbers"))
        }
        (Some(FieldChoice::Eps), d) => Ok(AnyDistribution::Eps(make_tangible(&d.into_eps(), Witness::Uniform))),
    }
}

fn literal(t: &ExtensionTower, x: &Element) -> Result<String, CliError> {
    Ok(format!("{}@{}", t.print_element(x)?, t.stage_of(x)?))
}

fn field_name(d: &AnyDistribution) -> String {
    d.field().to_string()
}

pub fn build(o: &GlobalOpts, algebra: &Path, out: Option<&Path>) -> Result<Report, CliError> {
    let mut t = ExtensionTower::new(load_algebra(algebra)?);
    if let Some(n) = o.max_atoms {
        t.set_max_atoms(n);
    }
    let text = match out {
        Some(p) => {
            save_tower(&t, p)?;
            format!("stage 0: {} atoms\n", t.base().atom_count())
        }
        None => t.to_json() + "\n",
    };
    Ok(Report { text, json: serde_json::to_value(t.dump()).unwrap(), ok: true })
}

pub fn extend(o: &GlobalOpts, path: &Path, element: &str, out: Option<&Path>) -> Result<Report, CliError> {
    let mut t = load_tower(o, path)?;
    let b = t.parse_element(element)?;
    let stage = t.extend(&b)?;
    save_tower(&t, out.unwrap_or(path))?;
    let atoms = t.latest().atom_count();
    Ok(Report {
        text: format!("stage {}: {} atoms\n", stage, atoms),
        json: json!({ "stage": stage, "atoms": atoms }),
        ok: true,
    })
}

pub fn cond(o: &GlobalOpts, path: &Path, x: &str, y: &str, save: bool) -> Result<Report, CliError> {
    let mut t = load_tower(o, path)?;
    let (x, y) = (t.parse_element(x)?, t.parse_element(y)?);
    let r = t.conditional(&x, &y)?;
    if save {
        save_tower(&t, path)?;
    }
    Ok(Report {
        text: format!("{}\n", literal(&t, &r)?),
        json: json!({ "element": t.print_element(&r)?, "stage": t.stage_of(&r)? }),
        ok: true,
    })
}

pub fn prob(o: &GlobalOpts, path: &Path, dist: &Path, expr: &str) -> Result<Report, CliError> {
    let mut t = load_tower(o, path)?;
    let d = load_dist(o, dist, &t)?;
    let r = evaluate(&mut t, &Valuation::new(), &parse_prop(expr)?)?;
    let j = t.latest_index();
    let value = match &d {
        AnyDistribution::Rational(d) => extend_to(d, &t, j)?.prob_of(&r)?.to_string(),
        AnyDistribution::Eps(d) => extend_to(d, &t, j)?.prob_of(&r)?.to_string(),
    };
    Ok(Report {
        text: format!("{}\n", value),
        json: json!({
            "value": value,
            "field": field_name(&d),
            "element": t.print_element(&r)?,
            "stage": j,
        }),
        ok: true,
    })
}

fn law_elements(t: &ExtensionTower) -> Result<(Vec<Element>, bool), CliError> {
    let alg = t.latest().algebra();
    if alg.atom_count() <= LAW_EXHAUSTIVE_ATOMS {
        return Ok((alg.elements()?.collect(), true));
    }
    let mut rng = StdRng::seed_from_u64(0);
    let n = alg.atom_count();
    let mut v = vec![alg.bottom(), alg.top()];
    while v.len() < LAW_SAMPLES {
        v.push(alg.element((0..n).filter(|_| rng.gen_bool(0.5)).map(AtomId))?);
    }
    Ok((v, false))
}

/// Checks `P([x]y)·P(x) = P(x ∩ y)` and `P([x]y)·P(∼x) = P(∼x ∩ [x]y)` for
/// every pair drawn from `elems`. Returns the number of pairs and the first
/// failing pair.
fn law_check<S: OrderedField>(
    t: &ExtensionTower,
    d: &Distribution<S>,
    elems: &[Element],
) -> Result<(usize, Option<(Element, Element)>), CliError> {
    let mut pairs = 0;
    for x in elems {
        let mut fork = t.clone();
        let conds = elems
            .iter()
            .map(|y| fork.conditional(x, y))
            .collect::<Result<Vec<_>, _>>()?;
        let dj = extend_to(d, &fork, fork.latest_index())?;
        let xj = fork.forward(x)?;
        let nx = xj.complement();
        let (px, pnx) = (dj.prob_of(&xj)?, dj.prob_of(&nx)?);
        for (y, c) in elems.iter().zip(&conds) {
            let c = fork.forward(c)?;
            let xy = xj.meet(&fork.forward(y)?)?;
            let pc = dj.prob_of(&c)?;
            pairs += 1;
            if pc.clone() * px.clone() != dj.prob_of(&xy)? || pc * pnx.clone() != dj.prob_of(&nx.meet(&c)?)? {
                return Ok((pairs, Some((x.clone(), y.clone()))));
            }
        }
    }
    Ok((pairs, None))
}

pub fn verify(o: &GlobalOpts, path: &Path, dist: &Path) -> Result<Report, CliError> {
    let t = load_tower(o, path)?;
    let d = load_dist(o, dist, &t)?;
    let axioms = check_bayes_axioms(&t, &AxiomCheck::default())?;
    let (elems, exhaustive) = law_elements(&t)?;
    let (pairs, bad) = match &d {
        AnyDistribution::Rational(d) => law_check(&t, d, &elems)?,
        AnyDistribution::Eps(d) => law_check(&t, d, &elems)?,
    };
    let law = match &bad {
        None => "ok".to_string(),
        Some((x, y)) => format!("FAILED at x = {}, y = {}", t.print_element(x)?, t.print_element(y)?),
    };
    let mut text = format!("laws {}\n", axioms);
    writeln!(
        text,
        "conditional probability law ({}, {} pairs, {}): {}",
        field_name(&d),
        pairs,
        if exhaustive { "exhaustive" } else { "sampled" },
        law
    )
    .unwrap();
    Ok(Report {
        text,
        json: json!({
            "stage": axioms.stage,
            "atoms": axioms.atoms,
            "axioms": {
                "exhaustive": axioms.exhaustive,
                "checked": axioms.checked,
                "violation": axioms.violation.as_ref().map(|v| v.to_string()),
            },
            "law": {
                "field": field_name(&d),
                "pairs": pairs,
                "exhaustive": exhaustive,
                "failure": bad.as_ref().map(|_| law.clone()),
            },
        }),
        ok: axioms.passed() && bad.is_none(),
    })
}

fn lewis_in<S: OrderedField>(
    t: &mut ExtensionTower,
    dists: &[Distribution<S>],
    x: &Element,
    y: &Element,
) -> Result<Report, CliError> {
    let alg = t.base().algebra().clone();
    let xy = x.meet(y)?;
    let mut text = format!("x = {}, y = {}\n", alg.print_element(x), alg.print_element(y));
    let mut rows = Vec::new();
    for (i, d) in dists.iter().enumerate() {
        let (px, pxy) = (d.prob_of(x)?, d.prob_of(&xy)?);
        let need = pxy.checked_div(&px).ok().map(|q| q.to_string()).unwrap_or_else(|| "anything".into());
        writeln!(text, "P{}: P(x) = {}, P(x & y) = {}, needs P(z) = {}", i + 1, px, pxy, need).unwrap();
        rows.push(json!({ "p_x": px.to_string(), "p_xy": pxy.to_string(), "needs": need }));
    }
    let found = lewis_search(&alg, dists, x, y)?;
    match &found {
        Some(z) => writeln!(text, "z = {} works for every distribution", alg.print_element(z)).unwrap(),
        None => writeln!(text, "no element of the algebra works for every distribution").unwrap(),
    }
    let mut cond = Vec::new();
    for d in dists {
        let r = verify_conditional_law(t, d, x, y)?;
        if !r.holds() {
            return Err(CliError::Usage(format!("conditional law fails:\n{}", r)));
        }
        cond.push(r.p_cond.to_string());
    }
    let c = t.conditional(x, y)?;
    let shown: Vec<String> = cond.iter().enumerate().map(|(i, p)| format!("P{} = {}", i + 1, p)).collect();
    writeln!(text, "[x]y = {}: {}", literal(t, &c)?, shown.join(", ")).unwrap();
    Ok(Report {
        text,
        json: json!({
            "distributions": rows,
            "internal": found.as_ref().map(|z| alg.print_element(z)),
            "conditional": { "element": t.print_element(&c)?, "stage": t.stage_of(&c)?, "probabilities": cond },
        }),
        ok: true,
    })
}

pub fn lewis(o: &GlobalOpts, algebra: &Path, x: &str, y: &str, dists: &[PathBuf]) -> Result<Report, CliError> {
    let mut t = ExtensionTower::new(load_algebra(algebra)?);
    if let Some(n) = o.max_atoms {
        t.set_max_atoms(n);
    }
    let (x, y) = (t.base().algebra().parse_element(x)?, t.base().algebra().parse_element(y)?);
    let ds = dists
        .iter()
        .map(|p| load_dist(o, p, &t))
        .collect::<Result<Vec<_>, _>>()?;
    if ds.iter().any(|d| d.stage() != 0) {
        return Err(CliError::Usage("distributions must live on the algebra itself (stage 0)".into()));
    }
    if ds.iter().all(|d| matches!(d, AnyDistribution::Rational(_))) {
        let ds: Vec<_> = ds
            .into_iter()
            .map(|d| match d {
                AnyDistribution::Rational(d) => d,
                AnyDistribution::Eps(_) => unreachable!(),
            })
            .collect();
        lewis_in(&mut t, &ds, &x, &y)
    } else {
        let ds: Vec<_> = ds.into_iter().map(AnyDistribution::into_eps).collect();
        lewis_in(&mut t, &ds, &x, &y)
    }
}

pub fn dbl_eval(
    o: &GlobalOpts,
    path: &Path,
    prop: &str,
    bindings: &[String],
    save: bool,
) -> Result<Report, CliError> {
    let mut t = load_tower(o, path)?;
    let pairs: Vec<&str> = bindings.iter().map(String::as_str).collect();
    let v = Valuation::parse(&t, &pairs)?;
    let r = evaluate(&mut t, &v, &parse_prop(prop)?)?;
    if save {
        save_tower(&t, path)?;
    }
    Ok(Report {
        text: format!("{}\n", literal(&t, &r)?),
        json: json!({ "element": t.print_element(&r)?, "stage": t.stage_of(&r)?, "top": r.is_top() }),
        ok: true,
    })
}

fn describe_tower(t: &ExtensionTower) -> Result<String, CliError> {
    let mut s = t.base().print(&t.base().algebra().top());
    for (stage, b) in t.history() {
        write!(s, " extended by {}@{}", t.stages()[stage].print(b), stage).unwrap();
    }
    Ok(s)
}

pub fn dbl_search(o: &GlobalOpts, sequent: &str) -> Result<Report, CliError> {
    let s = parse_sequent(sequent)?;
    let mut opts = SearchOptions { budget: o.budget, ..SearchOptions::default() };
    if let Some(n) = o.max_atoms {
        opts.max_atoms = n;
    }
    let out = search_counterexample(&s, &opts);
    let tried = out.tried();
    Ok(match &out {
        SearchOutcome::Found { counterexample: c, .. } => Report {
            text: format!(
                "refuted after {} valuations\ntower: {}\n{}\n",
                tried,
                describe_tower(&c.tower)?,
                c.valuation.display(&c.tower)
            ),
            json: json!({
                "refuted": true,
                "tried": tried,
                "tower": c.tower.dump(),
                "valuation": c.valuation.display(&c.tower).to_string(),
            }),
            ok: false,
        },
        SearchOutcome::Exhausted { .. } | SearchOutcome::BudgetSpent { .. } => {
            let why = if matches!(out, SearchOutcome::Exhausted { .. }) { "all candidates tried" } else { "budget spent" };
            Report {
                text: format!("no counterexample in {} valuations ({})\n", tried, why),
                json: json!({ "refuted": false, "tried": tried, "exhausted": why == "all candidates tried" }),
                ok: true,
            }
        }
    })
}

pub fn dbl_check(o: &GlobalOpts, files: &[PathBuf], builtin: bool, soundness: bool) -> Result<Report, CliError> {
    if files.is_empty() && !builtin {
        return Err(CliError::Usage("give derivation files or --corpus".into()));
    }
    let mut scripts = Vec::new();
    for p in files {
        let mut d = Derivation::from_json(&read(p)?).map_err(|e| CliError::file(p, e))?;
        if d.name.is_none() {
            d.name = p.file_stem().map(|s| s.to_string_lossy().into_owned());
        }
        scripts.push(d);
    }
    if builtin {
        scripts.extend(corpus());
    }
    let mut sopts = SoundnessOptions::default();
    if let Some(n) = o.max_atoms {
        sopts.max_atoms = n;
    }
    let mut text = String::new();
    let mut rows = Vec::new();
    let mut ok = true;
    for d in &scripts {
        let name = d.name.clone().unwrap_or_default();
        let mut row = json!({ "name": name });
        match check_derivation(d) {
            Ok(thm) => {
                writeln!(text, "{}: ok ({} steps) {}", name, thm.steps, thm).unwrap();
                row["theorem"] = json!(thm.to_string());
            }
            Err(e) => {
                writeln!(text, "{}: FAILED {}", name, e).unwrap();
                row["error"] = json!(e.to_string());
                ok = false;
            }
        }
        if soundness {
            let r = check_soundness(d, &sopts);
            writeln!(
                text,
                "  soundness: {} valuations, {} with hypotheses true, {} skipped: {}",
                r.sampled,
                r.applicable,
                r.skipped,
                if r.passed() { "ok" } else { "FAILED" }
            )
            .unwrap();
            if let Some(f) = &r.failure {
                writeln!(text, "  {} under {}", f.reason, f.valuation.display(&f.tower)).unwrap();
            }
            row["soundness"] = json!({
                "sampled": r.sampled,
                "applicable": r.applicable,
                "skipped": r.skipped,
                "passed": r.passed(),
            });
            ok &= r.passed();
        }
        rows.push(row);
    }
    Ok(Report { text, json: Value::Array(rows), ok })
}

pub fn pairing(numbers: &[u64]) -> Result<Report, CliError> {
    match *numbers {
        [n] => {
            let (i, j) = cantor_unpair(n);
            Ok(Report { text: format!("{} {}\n", i, j), json: json!({ "n": n, "i": i, "j": j }), ok: true })
        }
        [i, j] => {
            let n = cantor_pair(i, j).ok_or_else(|| CliError::Usage(format!("pair ({}, {}) overflows u64", i, j)))?;
            Ok(Report { text: format!("{}\n", n), json: json!({ "n": n, "i": i, "j": j }), ok: true })
        }
        _ => Err(CliError::Usage("pairing takes n or i j".into())),
    }
}
