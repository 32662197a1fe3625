//! Proof scripts for the standard consequences of the axioms.
//!
//! Letters are schematic. `G` stands for an arbitrary side context: every
//! rule treats the context uniformly, so a script proved with the single
//! letter `G` goes through for any sequence in its place.

use super::builder::ProofBuilder;
use super::derive::Derivation;
use super::syntax::Prop;

fn a(n: &str) -> Prop {
    Prop::atom(n)
}

fn neg(p: Prop) -> Prop {
    Prop::neg(p)
}

fn iff(x: Prop, y: Prop) -> Prop {
    Prop::iff(x, y)
}

fn cond(x: Prop, y: Prop) -> Prop {
    Prop::cond(x, y)
}

fn build(name: &str, f: impl FnOnce(&mut ProofBuilder)) -> Derivation {
    let mut b = ProofBuilder::new();
    f(&mut b);
    b.finish(name)
}

fn axioms() -> Vec<Derivation> {
    let (x, y, z) = (a("X"), a("Y"), a("Z"));
    vec![
        build("ax_k", |b| {
            b.ax_k(&x, &y, &z);
        }),
        build("ax_cond_inf", |b| {
            b.ax_cond_inf(&x, &y);
        }),
        build("ax_neg", |b| {
            b.ax_neg(&x, &y);
        }),
        build("ax_inf_cond", |b| {
            let h = b.hyp(vec![a("G"), Prop::implies(x.clone(), y.clone())]);
            b.ax_inf_cond(h);
        }),
        build("ax_ind", |b| {
            let h1 = b.hyp(vec![a("G"), iff(y.clone(), neg(x.clone()))]);
            let h2 = b.hyp(vec![a("G"), iff(cond(x.clone(), z.clone()), z.clone())]);
            b.ax_ind(h1, h2);
        }),
    ]
}

/// Every script, axioms first.
pub fn corpus() -> Vec<Derivation> {
    let g = a("G");
    let ctx = [g.clone()];
    let (w, x, y, z) = (a("W"), a("X"), a("Y"), a("Z"));
    let mut out = axioms();
    out.extend([
        build("full_univ", |b| {
            let h = b.hyp(vec![g.clone(), x.clone()]);
            b.full_univ(&ctx, &y, h);
        }),
        build("full_univ_top", |b| {
            let t = b.taut(Prop::top());
            b.full_univ(&[], &y, t);
        }),
        build("empty_univ", |b| {
            let h = b.hyp(vec![g.clone(), neg(x.clone())]);
            b.empty_univ(&ctx, &y, h);
        }),
        build("empty_univ_bot", |b| {
            let t = b.taut(neg(Prop::Bot));
            b.empty_univ(&[], &y, t);
        }),
        build("cont_taut", |b| {
            let h = b.hyp(vec![g.clone(), y.clone()]);
            b.cont_taut(&ctx, &x, h);
        }),
        build("cont_taut_neg", |b| {
            let h = b.hyp(vec![g.clone(), neg(y.clone())]);
            b.cont_taut_neg(&ctx, &x, h);
        }),
        build("cond_top", |b| {
            let t = b.taut(Prop::top());
            b.cont_taut(&[], &x, t);
        }),
        build("cond_bot", |b| {
            let t = b.taut(neg(Prop::Bot));
            b.cont_taut_neg(&[], &x, t);
        }),
        build("subuniv", |b| {
            b.subuniv(&x, &y, &z);
        }),
        build("cond_and", |b| {
            b.distribute(&x, &Prop::and(y.clone(), z.clone()), &[]);
        }),
        build("cond_or", |b| {
            b.distribute(&x, &Prop::or(y.clone(), z.clone()), &[]);
        }),
        build("cond_iff", |b| {
            b.distribute(&x, &iff(y.clone(), z.clone()), &[]);
        }),
        build("right_equiv", |b| {
            let h = b.hyp(vec![g.clone(), iff(y.clone(), z.clone())]);
            b.right_equiv(&ctx, &x, h);
        }),
        build("cond_inf", |b| {
            b.cond_inf(&x, &y);
        }),
        build("introspection", |b| {
            b.introspection(&x);
        }),
        build("indep_hyp", |b| {
            b.indep_hyp(&x, &y);
        }),
        build("equivalence", |b| {
            let h1 = b.hyp(vec![g.clone(), iff(w.clone(), x.clone())]);
            let h2 = b.hyp(vec![g.clone(), iff(y.clone(), z.clone())]);
            b.equivalence(&ctx, h1, h2);
        }),
        build("indep_reflexive", |b| {
            let h = b.hyp(vec![g.clone(), iff(cond(x.clone(), x.clone()), x.clone())]);
            b.indep_reflexive(&ctx, h);
        }),
        build("indep_infer", |b| {
            let h1 = b.hyp(vec![g.clone(), iff(cond(x.clone(), y.clone()), y.clone())]);
            let h2 = b.hyp(vec![g.clone(), Prop::implies(x.clone(), y.clone())]);
            b.indep_infer(&ctx, h1, h2);
        }),
        build("indep_or", |b| {
            let h1 = b.hyp(vec![g.clone(), iff(cond(x.clone(), y.clone()), y.clone())]);
            let h2 = b.hyp(vec![g.clone(), Prop::or(x.clone(), y.clone())]);
            b.indep_or(&ctx, h1, h2);
        }),
        build("indep_factor", |b| {
            let h1 = b.hyp(vec![
                g.clone(),
                Prop::implies(Prop::and(x.clone(), y.clone()), Prop::and(x.clone(), z.clone())),
            ]);
            let h2 = b.hyp(vec![g.clone(), iff(cond(x.clone(), y.clone()), y.clone())]);
            let h3 = b.hyp(vec![g.clone(), iff(cond(x.clone(), z.clone()), z.clone())]);
            b.indep_factor(&ctx, h1, h2, h3);
        }),
    ]);
    out
}

pub fn by_name(name: &str) -> Option<Derivation> {
    corpus().into_iter().find(|d| d.name.as_deref() == Some(name))
}
