mod common;

use std::collections::BTreeSet;
use std::fmt::Write;
use std::sync::Arc;

use common::*;
use hypolog::bilattice::BaseLattice;
use hypolog::engine::{immediate_consequence, is_sound, support};
use hypolog::reference::{
    interpretation_to_valuation, is_unfounded_set, kripke_kleene, phi, to_three_valued, unfounded,
    valuation_to_interpretation, well_founded, DatalogProgram, PartialInterpretation,
};
use hypolog::{
    ground, h_founded_semantics, parse_program, Bilattice, Four, GroundAtom, GroundFormula, HerbrandBase,
    Interpretation, TruthValue,
};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A first-order program over constants a, b with unary `p`, `r`, binary `e`
/// and quantified bodies.
fn first_order_text(rng: &mut impl Rng) -> String {
    fn body(rng: &mut impl Rng, vars: &[&str], depth: usize) -> String {
        let term = |rng: &mut dyn rand::RngCore| -> String {
            let mut pool: Vec<&str> = vec!["a", "b"];
            pool.extend_from_slice(vars);
            pool.choose(rng).unwrap().to_string()
        };
        if depth == 0 || rng.gen_bool(0.3) {
            let neg = if rng.gen_bool(0.3) { "~" } else { "" };
            return match rng.gen_range(0..4) {
                0 => ["T", "F", "U", "O"].choose(rng).unwrap().to_string(),
                1 => format!("{neg}e({},{})", term(rng), term(rng)),
                2 => format!("{neg}r({})", term(rng)),
                _ => format!("{neg}p({})", term(rng)),
            };
        }
        match rng.gen_range(0..6) {
            0 => {
                let v = ["Y", "Z"][vars.len() % 2];
                let mut inner = vars.to_vec();
                inner.push(v);
                let q = if rng.gen_bool(0.5) { "exists" } else { "forall" };
                format!("{q} {v} ({})", body(rng, &inner, depth - 1))
            }
            k => {
                let op = ["&", "|", "(+)", "(*)", "&"][k - 1];
                format!("({} {op} {})", body(rng, vars, depth - 1), body(rng, vars, depth - 1))
            }
        }
    }
    let mut text = String::new();
    for (k, args) in ["a,b", "b,b"].iter().enumerate() {
        if k == 0 || rng.gen_bool(0.6) {
            writeln!(text, "e({args}) = {}.", ["T", "F", "O"].choose(rng).unwrap()).unwrap();
        }
    }
    for _ in 0..rng.gen_range(1..=3) {
        let head = ["p", "r"].choose(rng).unwrap();
        writeln!(text, "{head}(X) <- {}.", body(rng, &["X"], 3)).unwrap();
    }
    text
}

fn random_interpretation(rng: &mut impl Rng, base: &Arc<HerbrandBase>, bilattice: Bilattice) -> Interpretation {
    let elems = bilattice.elements().expect("finite");
    let mut i = Interpretation::new(base.clone(), bilattice);
    for a in base.atoms() {
        if rng.gen_bool(0.6) {
            i.set(a.clone(), *elems.choose(rng).unwrap()).unwrap();
        }
    }
    i
}

fn three_valued(rng: &mut impl Rng, base: &Arc<HerbrandBase>) -> Interpretation {
    let mut i = Interpretation::new(base.clone(), Bilattice::Four);
    for a in base.atoms() {
        match rng.gen_range(0..3) {
            0 => i.set(a.clone(), TruthValue::TRUE).unwrap(),
            1 => i.set(a.clone(), TruthValue::FALSE).unwrap(),
            _ => {}
        }
    }
    i
}

/// A random `J` with `I <= J`.
fn completion(rng: &mut impl Rng, i: &Interpretation) -> Interpretation {
    let elems = i.bilattice().elements().expect("finite");
    let mut j = i.clone();
    for a in i.base().atoms() {
        if !i.is_defined(a) {
            j.set(a.clone(), *elems.choose(rng).unwrap()).unwrap();
        }
    }
    j
}

fn rule_body(text: &str, bilattice: Bilattice) -> (hypolog::GroundProgram, GroundFormula) {
    let g = ground(&parse_program(text, bilattice).unwrap()).unwrap();
    let body = g.rules[&GroundAtom::new("goal", &[])].clone();
    (g, body)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn printing_then_parsing_is_identity(seed in any::<u64>()) {
        let mut r = rng(seed);
        for text in [first_order_text(&mut r), four_text(&mut r, 6), datalog_text(&mut r, 8, 12, 3)] {
            let p = parse_program(&text, Bilattice::Four).unwrap();
            prop_assert_eq!(parse_program(&p.to_string(), Bilattice::Four).unwrap(), p);
        }
    }

    #[test]
    fn grounding_is_idempotent(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = ground(&parse_program(&first_order_text(&mut r), Bilattice::Four).unwrap()).unwrap();
        let again = ground(&g.to_program()).unwrap();
        prop_assert_eq!(&again, &g);
        prop_assert_eq!(again.clauses, g.clauses);
    }

    #[test]
    fn quantifier_expansion_agrees_with_direct_evaluation(seed in any::<u64>()) {
        let mut r = rng(seed);
        let text = first_order_text(&mut r);
        let p = parse_program(&text, Bilattice::Four).unwrap();
        let g = ground(&p).unwrap();
        let i = random_interpretation(&mut r, &g.base, Bilattice::Four);
        // Direct: for each head instance, the disjunction of the matching
        // source rules evaluated with quantifiers.
        for (head, ground_body) in &g.rules {
            let mut direct: Option<TruthValue> = None;
            for rule in p.rules.iter().filter(|c| c.head.predicate == head.predicate) {
                let hypolog::program::Term::Var(x) = &rule.head.args[0] else { unreachable!() };
                let closed = substitute(&rule.body, x, &head.args[0]);
                let v = i.eval_formula(&closed).unwrap();
                direct = Some(match direct { Some(d) => d.join_t(v).unwrap(), None => v });
            }
            prop_assert_eq!(i.eval(ground_body).unwrap(), direct.unwrap());
        }
    }

    #[test]
    fn robust_value_on_product_bilattice_matches_all_completions(seed in any::<u64>()) {
        let mut r = rng(seed);
        let b = Bilattice::Product(BaseLattice::Chain(2), BaseLattice::Chain(2));
        let atoms = ["a", "b", "c"];
        let body = random_body_over(&mut r, &atoms);
        let (_, phi) = rule_body(&format!("a = U.\nb = U.\nc = U.\ngoal <- {body}."), b);
        let hb = Arc::new(HerbrandBase::from_atoms(atoms.iter().map(|n| GroundAtom::new(n, &[]))));
        let i = random_interpretation(&mut r, &hb, b);
        // Exhaust all completions: 9 values per undefined atom.
        let elems = b.elements().unwrap();
        let undefined: Vec<GroundAtom> = hb.atoms().filter(|a| !i.is_defined(a)).cloned().collect();
        let mut values = BTreeSet::new();
        let mut stack = vec![(0usize, i.clone())];
        while let Some((k, j)) = stack.pop() {
            if k == undefined.len() {
                values.insert(j.eval(&phi).unwrap().to_string());
                continue;
            }
            for &v in &elems {
                let mut next = j.clone();
                next.set(undefined[k].clone(), v).unwrap();
                stack.push((k + 1, next));
            }
        }
        let robust = i.robust_value(&phi).unwrap().map(|v| v.to_string());
        let expected = (values.len() == 1).then(|| values.into_iter().next().unwrap());
        prop_assert_eq!(robust, expected);
    }

    #[test]
    fn evaluation_is_knowledge_monotone(seed in any::<u64>()) {
        let mut r = rng(seed);
        for b in [Bilattice::Four, Bilattice::Interval(BaseLattice::Chain(2))] {
            let body = random_body_over(&mut r, &["a", "b", "c"]);
            let (g, phi) = rule_body(&format!("a = U.\nb = U.\nc = U.\ngoal <- {body}."), b);
            let i = random_interpretation(&mut r, &g.base, b);
            let j = completion(&mut r, &i);
            prop_assert!(i.leq_k(&j).unwrap());
            prop_assert!(i.eval(&phi).unwrap().leq_k(j.eval(&phi).unwrap()).unwrap());
        }
    }

    #[test]
    fn part_of_laws(seed in any::<u64>()) {
        let mut r = rng(seed);
        let hb = Arc::new(HerbrandBase::from_atoms((0..5).map(|k| GroundAtom::new(&format!("x{k}"), &[]))));
        let [i, j, k] = [0, 1, 2].map(|_| random_interpretation(&mut r, &hb, Bilattice::Four));
        prop_assert!(i.part_of(&i).unwrap());
        if i.part_of(&j).unwrap() && j.part_of(&i).unwrap() {
            prop_assert_eq!(&i, &j);
        }
        if i.part_of(&j).unwrap() && j.part_of(&k).unwrap() {
            prop_assert!(i.part_of(&k).unwrap());
        }
        let subset: Vec<GroundAtom> = hb.atoms().filter(|_| r.gen_bool(0.5)).cloned().collect();
        prop_assert!(i.restrict(&subset).part_of(&i).unwrap());
        prop_assert_eq!(i.compatible(&j).unwrap(), j.compatible(&i).unwrap());
        // On compatible three-valued interpretations, (+) is the least upper bound.
        let (x, y) = (three_valued(&mut r, &hb), three_valued(&mut r, &hb));
        let x = x.restrict(&x.def().into_iter().filter(|a| !y.is_defined(a) || y.get(a) == x.get(a)).collect::<Vec<_>>());
        let join = x.knowledge_join(&y).unwrap();
        prop_assert!(x.part_of(&join).unwrap() && y.part_of(&join).unwrap());
        prop_assert_eq!(join.def(), x.def().union(&y.def()).cloned().collect::<BTreeSet<_>>());
    }

    #[test]
    fn support_properties_on_four_programs(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = setup(&four_text(&mut r, 6));
        let h = random_hypothesis(&mut r, &g, 4);
        let s = support(&g, &h).unwrap();
        prop_assert!(s.support.part_of(&h).unwrap());
        prop_assert!(s.support.compatible(&g.fact_interpretation()).unwrap());
        prop_assert!(is_sound(&g, &s.support).unwrap());
        for w in s.pf_trace.windows(2) {
            prop_assert!(w[0].is_subset(&w[1]));
        }
        prop_assert!(s.pf_trace.len() <= g.base.len() + 2);
        let t = immediate_consequence(&g, &g.fact_interpretation()).unwrap();
        prop_assert!(t.compatible(&s.support).unwrap());
        prop_assert_eq!(&s.support, &brute_force_support(&g, &h));
        // Joins of sound parts stay sound.
        let sound: Vec<Interpretation> = restrictions(&h).into_iter().filter(|x| is_sound(&g, x).unwrap()).collect();
        for a in &sound {
            for b in &sound {
                prop_assert!(is_sound(&g, &a.knowledge_join(b).unwrap()).unwrap());
            }
        }
        let sem = h_founded_semantics(&g, &h, None).unwrap();
        for w in sem.stage_trace.windows(2) {
            prop_assert!(w[0].part_of(&w[1]).unwrap());
        }
        prop_assert!(hypolog::is_model(&g, &sem.model).unwrap());
    }

    #[test]
    fn classical_semantics_on_datalog_programs(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = setup(&datalog_text(&mut r, 8, 12, 3));
        let d = DatalogProgram::from_ground(&g).unwrap();
        let wfs = to_three_valued(&well_founded(&d), &g.base).unwrap();
        let kk = kripke_kleene(&d);
        prop_assert!(kk.leq_k(&wfs).unwrap());
        prop_assert_eq!(&wfs, &h_founded_semantics(&g, &everywhere(&g, TruthValue::FALSE), None).unwrap().model);
        prop_assert_eq!(&kk, &h_founded_semantics(&g, &everywhere(&g, TruthValue::UNDER), None).unwrap().model);

        let i = three_valued(&mut r, &g.base);
        let pi = hypolog::reference::to_partial(&i).unwrap();
        prop_assert!(is_unfounded_set(&d, &pi, &unfounded(&d, &pi)));
        // One Kripke-Kleene step equals one application of T.
        let step = valuation_to_interpretation(&phi(&d, &interpretation_to_valuation(&i).unwrap()), &g.base);
        prop_assert_eq!(step, immediate_consequence(&g, &i).unwrap());
    }

    #[test]
    fn well_founded_stages_increase(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = setup(&datalog_text(&mut r, 8, 12, 3));
        let d = DatalogProgram::from_ground(&g).unwrap();
        let stages = hypolog::reference::well_founded_trace(&d);
        prop_assert!(stages.len() <= g.base.len() + 2);
        for w in stages.windows(2) {
            prop_assert!(w[0].pos.is_subset(&w[1].pos) && w[0].neg.is_subset(&w[1].neg));
        }
        let last: &PartialInterpretation = stages.last().unwrap();
        prop_assert!(last.pos.is_disjoint(&last.neg));
    }
}

fn random_body_over(rng: &mut impl Rng, atoms: &[&str]) -> String {
    fn go(rng: &mut impl Rng, atoms: &[&str], depth: usize) -> String {
        if depth == 0 || rng.gen_bool(0.3) {
            let a = atoms.choose(rng).unwrap();
            return match rng.gen_range(0..5) {
                0 => Four::ALL.choose(rng).unwrap().symbol().to_string(),
                1 | 2 => format!("~{a}"),
                _ => a.to_string(),
            };
        }
        let op = ["&", "|", "(+)", "(*)"].choose(rng).unwrap();
        format!("({} {op} {})", go(rng, atoms, depth - 1), go(rng, atoms, depth - 1))
    }
    go(rng, atoms, 4)
}

fn substitute(
    f: &hypolog::program::Formula,
    var: &hypolog::program::Symbol,
    c: &hypolog::program::Symbol,
) -> hypolog::program::Formula {
    use hypolog::program::{Atom, Formula, Term};
    let sub_atom = |a: &Atom| Atom {
        predicate: a.predicate.clone(),
        args: a
            .args
            .iter()
            .map(|t| match t {
                Term::Var(v) if v == var => Term::Const(c.clone()),
                other => other.clone(),
            })
            .collect(),
    };
    match f {
        Formula::Atom(a) => Formula::Atom(sub_atom(a)),
        Formula::NegAtom(a) => Formula::NegAtom(sub_atom(a)),
        Formula::Const(v) => Formula::Const(*v),
        Formula::Binary(op, l, r) => Formula::binary(*op, substitute(l, var, c), substitute(r, var, c)),
        Formula::Quant(q, v, body) if v == var => Formula::Quant(*q, v.clone(), body.clone()),
        Formula::Quant(q, v, body) => Formula::Quant(*q, v.clone(), Box::new(substitute(body, var, c))),
    }
}
