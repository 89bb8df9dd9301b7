//! Generators and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::fmt::Write;

use hypolog::{engine, ground, parse_program, Bilattice, Four, GroundAtom, GroundProgram, Interpretation, TruthValue};
use rand::seq::SliceRandom;
use rand::Rng;

pub const JUDGE: &str = "\
witness(john) = F.
friends(john,ted) = T.
suspect(X) <- motive(X) | witness(X).
innocent(X) <- exists Y (alibi(X,Y) & ~friends(X,Y)).
friends(X,Y) <- friends(Y,X) | exists Z (friends(X,Z) & friends(Z,Y)).
charge(X) <- suspect(X) (+) ~innocent(X).
";

pub const JEAN: &str = "\
witness(jean) = T.
suspect(X) <- motive(X) | witness(X).
innocent(X) <- exists Y (alibi(X,Y) & ~friends(X,Y)).
friends(X,Y) <- friends(Y,X) | exists Z (friends(X,Z) & friends(Z,Y)).
charge(X) <- suspect(X) (+) ~innocent(X).
";

pub const JEAN_H: &str = "\
witness(jean) = F.
motive(jean) = F.
suspect(jean) = F.
innocent(jean) = T.
";

pub fn setup(text: &str) -> GroundProgram {
    ground(&parse_program(text, Bilattice::Four).expect("parses")).expect("grounds")
}

pub fn hypothesis(g: &GroundProgram, text: &str) -> Interpretation {
    let a = hypolog::parse_hypothesis(text, g.bilattice).expect("parses");
    Interpretation::from_assignment(g.base.clone(), g.bilattice, &a).expect("in base")
}

pub fn everywhere(g: &GroundProgram, v: TruthValue) -> Interpretation {
    Interpretation::constant(g.base.clone(), g.bilattice, v).expect("value in bilattice")
}

/// A propositional Datalog-with-negation program: up to `max_atoms`
/// atoms, `max_rules` rules and `max_lits` literals per body; some atoms are
/// `T` facts.
pub fn datalog_text(rng: &mut impl Rng, max_atoms: usize, max_rules: usize, max_lits: usize) -> String {
    let n = rng.gen_range(1..=max_atoms);
    let atoms: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
    let mut text = String::new();
    let mut used = BTreeSet::new();
    for a in &atoms {
        if rng.gen_bool(0.15) {
            writeln!(text, "{a} = T.").unwrap();
            used.insert(a.clone());
        }
    }
    for _ in 0..rng.gen_range(0..=max_rules) {
        let head = atoms.choose(rng).unwrap();
        used.insert(head.clone());
        let k = rng.gen_range(0..=max_lits);
        let lits: Vec<String> = (0..k)
            .map(|_| {
                let a = atoms.choose(rng).unwrap();
                used.insert(a.clone());
                if rng.gen_bool(0.5) {
                    format!("~{a}")
                } else {
                    a.clone()
                }
            })
            .collect();
        let body = if lits.is_empty() {
            "T".to_string()
        } else {
            lits.join(" & ")
        };
        writeln!(text, "{head} <- {body}.").unwrap();
    }
    // Every atom occurs, so the base has exactly n atoms.
    for a in atoms.iter().filter(|a| !used.contains(*a)) {
        writeln!(text, "{a} <- {a}.").unwrap();
    }
    text
}

fn four_symbol(v: Four) -> char {
    v.symbol()
}

fn random_body(rng: &mut impl Rng, atoms: &[String], depth: usize) -> String {
    if depth == 0 || rng.gen_bool(0.35) {
        return match rng.gen_range(0..10) {
            0 => four_symbol(*Four::ALL.choose(rng).unwrap()).to_string(),
            1..=3 => format!("~{}", atoms.choose(rng).unwrap()),
            _ => atoms.choose(rng).unwrap().clone(),
        };
    }
    let op = ["&", "|", "(+)", "(*)"].choose(rng).unwrap();
    format!(
        "({} {op} {})",
        random_body(rng, atoms, depth - 1),
        random_body(rng, atoms, depth - 1)
    )
}

/// A propositional program over FOUR with up to `max_atoms` atoms. Fact
/// atoms and rule heads are kept disjoint.
pub fn four_text(rng: &mut impl Rng, max_atoms: usize) -> String {
    let n = rng.gen_range(1..=max_atoms);
    let atoms: Vec<String> = (0..n).map(|i| format!("q{i}")).collect();
    let mut text = String::new();
    let mut heads = Vec::new();
    for a in &atoms {
        match rng.gen_range(0..4) {
            0 => writeln!(text, "{a} = {}.", four_symbol(*Four::ALL.choose(rng).unwrap())).unwrap(),
            1 => {}
            _ => heads.push(a.clone()),
        }
    }
    for h in &heads {
        for _ in 0..rng.gen_range(1..=2) {
            writeln!(text, "{h} <- {}.", random_body(rng, &atoms, 3)).unwrap();
        }
    }
    // `= U` facts keep otherwise unused atoms in the base.
    for a in &atoms {
        if !text.contains(a.as_str()) {
            writeln!(text, "{a} = U.").unwrap();
        }
    }
    text
}

/// A hypothesis defining up to `max_defined` atoms of the base.
pub fn random_hypothesis(rng: &mut impl Rng, g: &GroundProgram, max_defined: usize) -> Interpretation {
    let atoms: Vec<&GroundAtom> = g.base.atoms().collect();
    let k = rng.gen_range(0..=max_defined.min(atoms.len()));
    let mut h = Interpretation::new(g.base.clone(), g.bilattice);
    for a in atoms.choose_multiple(rng, k) {
        let v = *[Four::False, Four::True, Four::Over].choose(rng).unwrap();
        h.set((*a).clone(), v.into()).unwrap();
    }
    h
}

/// Every restriction of `h` to a subset of `def(h)`.
pub fn restrictions(h: &Interpretation) -> Vec<Interpretation> {
    let def: Vec<GroundAtom> = h.def().into_iter().collect();
    (0u32..(1 << def.len()))
        .map(|mask| {
            let keep: BTreeSet<&GroundAtom> = def
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, a)| a)
                .collect();
            h.restrict(keep)
        })
        .collect()
}

/// The `⊕` of all sound restrictions of `h`.
pub fn brute_force_support(g: &GroundProgram, h: &Interpretation) -> Interpretation {
    let mut acc = Interpretation::new(g.base.clone(), g.bilattice);
    for r in restrictions(h) {
        if engine::is_sound(g, &r).unwrap() {
            acc = acc.knowledge_join(&r).unwrap();
        }
    }
    acc
}

/// Lists atoms where two interpretations differ.
pub fn diff(a: &Interpretation, b: &Interpretation) -> Vec<String> {
    a.base()
        .atoms()
        .filter(|x| a.get(x) != b.get(x))
        .map(|x| format!("{x}: {} vs {}", a.get(x), b.get(x)))
        .collect()
}
