use super::derive::{is_tautology, Derivation, Rule, Step};
use super::syntax::{Prop, Sequent};

/// Assembles derivations step by step, computing each conclusion from the
/// rule and its premises. Misuse panics; the result is meant to be run
/// through [`check_derivation`](super::check_derivation) anyway.
#[derive(Debug, Default)]
pub struct ProofBuilder {
    hypotheses: Vec<Sequent>,
    steps: Vec<Step>,
}

fn c(x: &Prop, y: &Prop) -> Prop {
    Prop::cond(x.clone(), y.clone())
}

fn iff(x: Prop, y: Prop) -> Prop {
    Prop::iff(x, y)
}

fn neg(x: &Prop) -> Prop {
    Prop::neg(x.clone())
}

fn imp(x: &Prop, y: &Prop) -> Prop {
    Prop::implies(x.clone(), y.clone())
}

fn and(x: &Prop, y: &Prop) -> Prop {
    Prop::and(x.clone(), y.clone())
}

fn with(ctx: &[Prop], more: &[Prop]) -> Vec<Prop> {
    ctx.iter().chain(more).cloned().collect()
}

impl ProofBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn seq(&self, i: usize) -> &[Prop] {
        &self.steps[i].conclusion.0
    }

    pub fn last(&self, i: usize) -> &Prop {
        self.seq(i).last().unwrap()
    }

    fn push(&mut self, rule: Rule, premises: Vec<usize>, conclusion: Vec<Prop>) -> usize {
        self.steps.push(Step { rule, premises, conclusion: Sequent(conclusion), subst: None });
        self.steps.len() - 1
    }

    pub fn finish(self, name: &str) -> Derivation {
        Derivation { name: Some(name.to_string()), hypotheses: self.hypotheses, steps: self.steps }
    }

    pub fn hyp(&mut self, s: Vec<Prop>) -> usize {
        let s = Sequent(s);
        if !self.hypotheses.contains(&s) {
            self.hypotheses.push(s.clone());
        }
        self.push(Rule::Hyp, vec![], s.0)
    }

    pub fn taut(&mut self, p: Prop) -> usize {
        assert!(is_tautology(&p), "not a tautology: {}", p);
        self.push(Rule::Taut, vec![], vec![p])
    }

    pub fn ax_k(&mut self, x: &Prop, y: &Prop, z: &Prop) -> usize {
        let p = imp(&c(x, &imp(y, z)), &imp(&c(x, y), &c(x, z)));
        self.push(Rule::AxK, vec![], vec![p])
    }

    pub fn ax_cond_inf(&mut self, x: &Prop, y: &Prop) -> usize {
        let p = imp(&c(x, y), &imp(x, y));
        self.push(Rule::AxCondInf, vec![], vec![p])
    }

    pub fn ax_neg(&mut self, x: &Prop, y: &Prop) -> usize {
        let p = iff(c(x, &neg(y)), neg(&c(x, y)));
        self.push(Rule::AxNeg, vec![], vec![p])
    }

    pub fn ax_inf_cond(&mut self, i: usize) -> usize {
        let (last, gamma) = self.seq(i).split_last().unwrap();
        let Prop::Impl(x, y) = last else { panic!("AxInfCond needs an implication") };
        let out = with(gamma, &[neg(x), c(x, y)]);
        self.push(Rule::AxInfCond, vec![i], out)
    }

    pub fn ax_ind(&mut self, i: usize, j: usize) -> usize {
        let (yx, gamma) = self.seq(i).split_last().unwrap();
        let (y, nx) = yx.as_iff().expect("Y <-> ~X");
        let x = nx.as_neg().expect("Y <-> ~X");
        let (xz, _) = self.last(j).as_iff().expect("[X]Z <-> Z");
        let Prop::Cond(x2, z) = xz else { panic!("[X]Z <-> Z") };
        assert_eq!(&**x2, x);
        let out = with(gamma, &[iff(c(y, z), (**z).clone())]);
        self.push(Rule::AxInd, vec![i, j], out)
    }

    /// Modus ponens against the last disjunct `A -> B` of `j`, taking the
    /// last occurrence of `A` in `i`.
    pub fn mp(&mut self, i: usize, j: usize) -> usize {
        let (ab, delta) = self.seq(j).split_last().unwrap();
        let Prop::Impl(a, b) = ab else { panic!("MP needs an implication") };
        let p1 = self.seq(i);
        let k = p1.iter().rposition(|p| p == &**a).expect("antecedent missing");
        let mut out: Vec<Prop> = p1.to_vec();
        out.remove(k);
        out.extend(delta.iter().cloned());
        out.push((**b).clone());
        self.push(Rule::MP, vec![i, j], out)
    }

    /// Reorders `i` into `target`, skipping the step when nothing moves.
    pub fn perm_to(&mut self, i: usize, target: Vec<Prop>) -> usize {
        if self.seq(i) == target.as_slice() {
            return i;
        }
        let (mut a, mut b) = (self.seq(i).to_vec(), target.clone());
        a.sort();
        b.sort();
        assert_eq!(a, b, "not a permutation");
        self.push(Rule::MPerm, vec![i], target)
    }

    /// Drops repeated disjuncts one at a time, keeping first occurrences.
    pub fn contract_all(&mut self, mut i: usize) -> usize {
        loop {
            let s = self.seq(i);
            let dup = (1..s.len()).find(|&r| s[..r].contains(&s[r]));
            let Some(r) = dup else { return i };
            let mut out = s.to_vec();
            out.remove(r);
            i = self.push(Rule::MContract, vec![i], out);
        }
    }

    pub fn weaken(&mut self, i: usize, p: Prop, pos: usize) -> usize {
        let mut out = self.seq(i).to_vec();
        out.insert(pos, p);
        self.push(Rule::MWeaken, vec![i], out)
    }

    /// `⌊ctx | concl⌋` from premises `⌊Γₖ | Aₖ⌋` when `A₁ → … → Aₙ → concl`
    /// is a tautology and every `Γₖ` lies inside `ctx`.
    pub fn classical(&mut self, ctx: &[Prop], premises: &[usize], concl: Prop) -> usize {
        let chain = premises
            .iter()
            .rev()
            .fold(concl.clone(), |acc, &p| imp(self.last(p), &acc));
        let mut cur = self.taut(chain);
        for &p in premises {
            cur = self.mp(p, cur);
        }
        cur = self.contract_all(cur);
        let mut target = ctx.to_vec();
        target.push(concl);
        let mut have = self.seq(cur).to_vec();
        for (pos, p) in target.iter().enumerate() {
            if !have.contains(p) {
                cur = self.weaken(cur, p.clone(), pos.min(have.len()));
                have = self.seq(cur).to_vec();
            }
        }
        self.perm_to(cur, target)
    }

    /// From `⌊Γ|X⌋`: `⌊Γ|[X]Y <-> Y⌋`.
    pub fn full_univ(&mut self, ctx: &[Prop], y: &Prop, h: usize) -> usize {
        let x = self.last(h).clone();
        let a1 = self.ax_cond_inf(&x, y);
        let a2 = self.ax_cond_inf(&x, &neg(y));
        let a3 = self.ax_neg(&x, y);
        let t = self.classical(&[], &[a1, a2, a3], imp(&x, &iff(c(&x, y), y.clone())));
        let r = self.mp(h, t);
        self.perm_to(r, with(ctx, &[iff(c(&x, y), y.clone())]))
    }

    /// From `⌊Γ|~X⌋`: `⌊Γ|[X]Y <-> Y⌋`.
    pub fn empty_univ(&mut self, ctx: &[Prop], y: &Prop, h: usize) -> usize {
        let x = self.last(h).as_neg().expect("~X").clone();
        let r1 = self.full_univ(ctx, y, h);
        let t = self.classical(ctx, &[], iff(x.clone(), neg(&neg(&x))));
        self.ax_ind(t, r1)
    }

    /// From `⌊Γ|Y⌋`: `⌊Γ|[X]Y⌋`.
    pub fn cont_taut(&mut self, ctx: &[Prop], x: &Prop, h: usize) -> usize {
        let y = self.last(h).clone();
        let xy = c(x, &y);
        let s1 = self.classical(ctx, &[h], imp(x, &y));
        let s2 = self.ax_inf_cond(s1);
        let inner = with(ctx, std::slice::from_ref(&xy));
        let s3 = self.perm_to(s2, with(&inner, &[neg(x)]));
        let s4 = self.empty_univ(&inner, &y, s3);
        self.classical(ctx, &[s4, h], xy)
    }

    /// From `⌊Γ|~Y⌋`: `⌊Γ|~[X]Y⌋`.
    pub fn cont_taut_neg(&mut self, ctx: &[Prop], x: &Prop, h: usize) -> usize {
        let y = self.last(h).as_neg().expect("~Y").clone();
        let s1 = self.cont_taut(ctx, x, h);
        let a = self.ax_neg(x, &y);
        self.classical(ctx, &[s1, a], neg(&c(x, &y)))
    }

    /// `⌊[X](Y -> Z) <-> ([X]Y -> [X]Z)⌋`
    pub fn subuniv(&mut self, x: &Prop, y: &Prop, z: &Prop) -> usize {
        let yz = imp(y, z);
        let k = self.ax_k(x, y, z);
        let t1 = self.taut(imp(&neg(y), &yz));
        let c1 = self.cont_taut(&[], x, t1);
        let k1 = self.ax_k(x, &neg(y), &yz);
        let m1 = self.mp(c1, k1);
        let t2 = self.taut(imp(z, &yz));
        let c2 = self.cont_taut(&[], x, t2);
        let k2 = self.ax_k(x, z, &yz);
        let m2 = self.mp(c2, k2);
        let n = self.ax_neg(x, y);
        self.classical(&[], &[m1, m2, n, k], iff(c(x, &yz), imp(&c(x, y), &c(x, z))))
    }

    /// `⌊[X]p <-> D(p)⌋`, where `D` pushes `[X]` through the implications
    /// and negations of `p` down to atoms, conditionals and `leaves`.
    pub fn distribute(&mut self, x: &Prop, p: &Prop, leaves: &[Prop]) -> (usize, Prop) {
        if leaves.contains(p) {
            let d = c(x, p);
            return (self.taut(iff(d.clone(), d.clone())), d);
        }
        if let Some(a) = p.as_neg() {
            let (e, da) = self.distribute(x, a, leaves);
            let n = self.ax_neg(x, a);
            let d = neg(&da);
            let r = self.classical(&[], &[n, e], iff(c(x, p), d.clone()));
            return (r, d);
        }
        if let Prop::Impl(a, b) = p {
            let k = self.subuniv(x, a, b);
            let (ea, da) = self.distribute(x, a, leaves);
            let (eb, db) = self.distribute(x, b, leaves);
            let d = imp(&da, &db);
            let r = self.classical(&[], &[k, ea, eb], iff(c(x, p), d.clone()));
            return (r, d);
        }
        let d = c(x, p);
        (self.taut(iff(d.clone(), d.clone())), d)
    }

    /// From `⌊Γ|Y <-> Z⌋`: `⌊Γ|[X]Y <-> [X]Z⌋`.
    pub fn right_equiv(&mut self, ctx: &[Prop], x: &Prop, h: usize) -> usize {
        let (y, z) = self.last(h).as_iff().expect("Y <-> Z");
        let (y, z) = (y.clone(), z.clone());
        let s1 = self.cont_taut(ctx, x, h);
        let (e, _) = self.distribute(x, &iff(y.clone(), z.clone()), &[y.clone(), z.clone()]);
        self.classical(ctx, &[s1, e], iff(c(x, &y), c(x, &z)))
    }

    /// `⌊(X & [X]Y) <-> (X & Y)⌋`
    pub fn cond_inf(&mut self, x: &Prop, y: &Prop) -> usize {
        let a1 = self.ax_cond_inf(x, y);
        let a2 = self.ax_cond_inf(x, &neg(y));
        let a3 = self.ax_neg(x, y);
        self.classical(&[], &[a1, a2, a3], iff(and(x, &c(x, y)), and(x, y)))
    }

    /// `⌊~X|[X]X⌋`
    pub fn introspection(&mut self, x: &Prop) -> usize {
        let t = self.taut(imp(x, x));
        self.ax_inf_cond(t)
    }

    /// `⌊[X][X]Y <-> [X]Y⌋`
    pub fn indep_hyp(&mut self, x: &Prop, y: &Prop) -> usize {
        let xy = c(x, y);
        let ci = self.cond_inf(x, y);
        let r = self.right_equiv(&[], x, ci);
        let (d1, _) = self.distribute(x, &and(x, &xy), std::slice::from_ref(x));
        let (d2, _) = self.distribute(x, &and(x, y), &[x.clone(), y.clone()]);
        let e = iff(c(x, &xy), xy.clone());
        let cl = self.classical(&[], &[r, d1, d2], imp(&c(x, x), &e));
        let i8 = self.introspection(x);
        let m = self.mp(i8, cl);
        let m = self.perm_to(m, vec![e.clone(), neg(x)]);
        let u = self.empty_univ(&[e], &xy, m);
        self.contract_all(u)
    }

    /// From `⌊Γ|W <-> X⌋` and `⌊Γ|Y <-> Z⌋`: `⌊Γ|[W]Y <-> [X]Z⌋`.
    pub fn equivalence(&mut self, ctx: &[Prop], h1: usize, h2: usize) -> usize {
        let (w, x) = self.last(h1).as_iff().expect("W <-> X");
        let (w, x) = (w.clone(), x.clone());
        let (y, z) = self.last(h2).as_iff().expect("Y <-> Z");
        let (y, z) = (y.clone(), z.clone());
        let xy = c(&x, &y);

        // [W][X]Y <-> [X]Y
        let a1 = self.classical(ctx, &[h1], iff(neg(&w), neg(&x)));
        let i9 = self.indep_hyp(&x, &y);
        let i9 = self.classical(ctx, &[i9], iff(c(&x, &xy), xy.clone()));
        let a2 = self.ax_ind(a1, i9);
        let a3 = self.classical(ctx, &[], iff(w.clone(), neg(&neg(&w))));
        let a4 = self.ax_ind(a3, a2);

        // ⌊Γ|~W|[W]Y <-> [X]Y⌋
        let i8 = self.introspection(&w);
        let (d1, _) = self.distribute(&w, &and(&w, &xy), std::slice::from_ref(&w));
        let ci = self.cond_inf(&x, &y);
        let c1 = self.classical(ctx, &[h1, ci], iff(and(&w, &xy), and(&w, &y)));
        let c2 = self.right_equiv(ctx, &w, c1);
        let (d2, _) = self.distribute(&w, &and(&w, &y), &[w.clone(), y.clone()]);
        let r = iff(c(&w, &y), xy.clone());
        let f = self.classical(&with(ctx, &[neg(&w)]), &[i8, a4, d1, c2, d2], r.clone());

        // the ~W case, where both sides collapse to Y
        let inner = with(ctx, std::slice::from_ref(&r));
        let g1 = self.perm_to(f, with(&inner, &[neg(&w)]));
        let g2 = self.empty_univ(&inner, &y, g1);
        let h = self.classical(&inner, &[h1, g1], neg(&x));
        let g3 = self.empty_univ(&inner, &y, h);
        let g4 = self.classical(ctx, &[g2, g3], r);

        let e = self.right_equiv(ctx, &x, h2);
        self.classical(ctx, &[g4, e], iff(c(&w, &y), c(&x, &z)))
    }

    /// From `⌊Γ|[X]X <-> X⌋`: `⌊Γ|~X|X⌋`.
    pub fn indep_reflexive(&mut self, ctx: &[Prop], h: usize) -> usize {
        let (_, x) = self.last(h).as_iff().expect("[X]X <-> X");
        let x = x.clone();
        let i8 = self.introspection(&x);
        self.classical(&with(ctx, &[neg(&x)]), &[i8, h], x)
    }

    /// From `⌊Γ|[X]Y <-> Y⌋` and `⌊Γ|X -> Y⌋`: `⌊Γ|~X|Y⌋`.
    pub fn indep_infer(&mut self, ctx: &[Prop], h1: usize, h2: usize) -> usize {
        let Prop::Impl(x, y) = self.last(h2).clone() else { panic!("X -> Y") };
        let s = self.ax_inf_cond(h2);
        self.classical(&with(ctx, &[neg(&x)]), &[s, h1], *y)
    }

    /// From `⌊Γ|[X]Y <-> Y⌋` and `⌊Γ|X | Y⌋`: `⌊Γ|X|Y⌋`.
    pub fn indep_or(&mut self, ctx: &[Prop], h1: usize, h2: usize) -> usize {
        let Prop::Impl(nx, y) = self.last(h2).clone() else { panic!("X | Y") };
        let x = nx.as_neg().expect("X | Y").clone();
        let t = self.classical(ctx, &[], iff((*nx).clone(), (*nx).clone()));
        let s1 = self.ax_ind(t, h1);
        let s2 = self.ax_inf_cond(h2);
        let nxy = c(&nx, &y);
        let s3 = self.perm_to(s2, with(ctx, &[nxy.clone(), neg(&nx)]));
        let s4 = self.classical(&with(ctx, std::slice::from_ref(&nxy)), &[s3], x.clone());
        let s5 = self.perm_to(s4, with(ctx, &[x.clone(), nxy]));
        self.classical(&with(ctx, &[x]), &[s5, s1], *y)
    }

    /// From `⌊Γ|(X & Y) -> (X & Z)⌋`, `⌊Γ|[X]Y <-> Y⌋` and `⌊Γ|[X]Z <-> Z⌋`:
    /// `⌊Γ|~X|Y -> Z⌋`.
    pub fn indep_factor(&mut self, ctx: &[Prop], h1: usize, h2: usize, h3: usize) -> usize {
        let (xy, _) = self.last(h2).as_iff().expect("[X]Y <-> Y");
        let (xz, _) = self.last(h3).as_iff().expect("[X]Z <-> Z");
        let (Prop::Cond(x, y), Prop::Cond(_, z)) = (xy.clone(), xz.clone()) else {
            panic!("[X]Y <-> Y")
        };
        let s1 = self.classical(ctx, &[h1], imp(&x, &imp(&y, &z)));
        let s2 = self.ax_inf_cond(s1);
        let k = self.subuniv(&x, &y, &z);
        self.classical(&with(ctx, &[neg(&x)]), &[s2, k, h2, h3], imp(&y, &z))
    }
}
