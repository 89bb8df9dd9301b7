//! The consequence operator, sound hypotheses, support and the
//! hypothesis-founded semantics.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::interpretation::{Interpretation, InterpretationError};
use crate::program::{GroundAtom, GroundProgram};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    #[error(transparent)]
    Interpretation(#[from] InterpretationError),
    #[error("no fixpoint after {iterations} iterations")]
    IterationCap {
        iterations: usize,
        previous: Box<Interpretation>,
        last: Box<Interpretation>,
    },
}

pub type AtomSet = BTreeSet<GroundAtom>;

/// Outcome of [`support`].
#[derive(Debug, Clone, PartialEq)]
pub struct SupportResult {
    /// The maximal sound part of the hypothesis.
    pub support: Interpretation,
    /// `IF(F, H)`: atoms where facts and hypothesis disagree.
    pub incompatible: AtomSet,
    /// `PF_0, PF_1, ...` up to the first repetition.
    pub pf_trace: Vec<AtomSet>,
    /// Number of `PF_i` computed after `PF_0`.
    pub iterations: usize,
}

impl SupportResult {
    /// The limit `PF`.
    pub fn pf(&self) -> &AtomSet {
        self.pf_trace.last().expect("trace starts with PF_0")
    }
}

/// Outcome of [`h_founded_semantics`].
#[derive(Debug, Clone, PartialEq)]
pub struct SemanticsResult {
    pub model: Interpretation,
    /// `F_0, F_1, ...`; the last entry is the model.
    pub stage_trace: Vec<Interpretation>,
    /// Applications of the operator, counting the one that confirmed the
    /// fixpoint.
    pub iterations: usize,
}

/// `T(I)`: every clause head gets the robust value of its body under `I`,
/// or `U` when there is none. Facts are clauses `A <- v` and so always
/// reproduce their value.
pub fn immediate_consequence(g: &GroundProgram, i: &Interpretation) -> Result<Interpretation, EngineError> {
    let mut out = Interpretation::new(g.base.clone(), g.bilattice);
    for (head, body) in &g.clauses {
        if let Some(v) = i.robust_value(body)? {
            out.set(head.clone(), v)?;
        }
    }
    Ok(out)
}

/// `IF(F, H)`.
pub fn incompatible(facts: &Interpretation, h: &Interpretation) -> AtomSet {
    facts
        .iter()
        .filter(|(a, v)| h.is_defined(a) && h.get(a) != *v)
        .map(|(a, _)| a.clone())
        .collect()
}

/// `H` is compatible with the facts and `H` restricted to `Head(P)` is part
/// of `T(F ⊕ H)`.
pub fn is_sound(g: &GroundProgram, h: &Interpretation) -> Result<bool, EngineError> {
    sound_under(g, &g.fact_interpretation(), h)
}

fn sound_under(g: &GroundProgram, facts: &Interpretation, h: &Interpretation) -> Result<bool, EngineError> {
    if !facts.compatible(h)? {
        return Ok(false);
    }
    let t = immediate_consequence(g, &facts.knowledge_join(h)?)?;
    Ok(h.iter().all(|(a, v)| g.clause(a).is_none() || t.get(a) == v))
}

fn pf_step(
    g: &GroundProgram,
    facts: &Interpretation,
    h: &Interpretation,
    removed: &AtomSet,
) -> Result<AtomSet, EngineError> {
    let assumed = facts.knowledge_join(&h.without(removed))?;
    let mut out = AtomSet::new();
    for (head, body) in &g.clauses {
        if assumed.robust_value(body)? != Some(h.get(head)) {
            out.insert(head.clone());
        }
    }
    Ok(out)
}

/// The sequence `PF_0 = ∅`, `PF_i` = heads whose bodies do not robustly
/// take their hypothesised value under `F ⊕ H` restricted to
/// `HB \ IF \ PF_{i-1}`; stops at the first repeat.
pub fn compute_pf(g: &GroundProgram, h: &Interpretation) -> Result<Vec<AtomSet>, EngineError> {
    Ok(support(g, h)?.pf_trace)
}

/// The support of `h`: `h` minus `IF(F, h)` minus the limit of the PF
/// sequence.
pub fn support(g: &GroundProgram, h: &Interpretation) -> Result<SupportResult, EngineError> {
    support_under(g, &g.fact_interpretation(), h)
}

/// [`support`] for the program whose facts are `facts` and whose rules are
/// those of `g`.
pub fn support_under(
    g: &GroundProgram,
    facts: &Interpretation,
    h: &Interpretation,
) -> Result<SupportResult, EngineError> {
    let inc = incompatible(facts, h);
    let mut trace = vec![AtomSet::new()];
    loop {
        let prev = trace.last().expect("non-empty");
        let removed: AtomSet = inc.union(prev).cloned().collect();
        let next = pf_step(g, facts, h, &removed)?;
        let done = &next == prev;
        trace.push(next);
        if done || trace.len() > g.base.len() + 2 {
            break;
        }
    }
    let iterations = trace.len() - 1;
    // A repeat is recorded once: drop the duplicate tail element.
    if trace.len() >= 2 && trace[trace.len() - 1] == trace[trace.len() - 2] {
        trace.pop();
    }
    let pf = trace.last().expect("non-empty");
    let support = h.without(inc.iter().chain(pf.iter()));
    Ok(SupportResult {
        support,
        incompatible: inc,
        pf_trace: trace,
        iterations,
    })
}

/// Default iteration cap for fixpoint loops.
pub fn default_max_iters(g: &GroundProgram) -> usize {
    10 * g.base.len() + 10
}

/// `F_0 = F`, `F_{n+1} = T(F_n) ⊕ support(<F_n, R>, h)`, iterated to a
/// fixpoint.
pub fn h_founded_semantics(
    g: &GroundProgram,
    h: &Interpretation,
    max_iters: Option<usize>,
) -> Result<SemanticsResult, EngineError> {
    let cap = max_iters.unwrap_or_else(|| default_max_iters(g));
    let mut stages = vec![g.fact_interpretation()];
    for _ in 0..cap {
        let current = stages.last().expect("non-empty");
        let t = immediate_consequence(g, current)?;
        let s = support_under(g, current, h)?.support;
        let next = t.knowledge_join(&s)?;
        if &next == current {
            let iterations = stages.len();
            return Ok(SemanticsResult {
                model: next,
                stage_trace: stages,
                iterations,
            });
        }
        stages.push(next);
    }
    let last = stages.pop().expect("non-empty");
    let previous = stages.pop().unwrap_or_else(|| last.clone());
    Err(EngineError::IterationCap {
        iterations: cap,
        previous: Box::new(previous),
        last: Box::new(last),
    })
}

/// Every clause whose body has a robust value gives its head that value.
pub fn is_model(g: &GroundProgram, i: &Interpretation) -> Result<bool, EngineError> {
    for (head, body) in &g.clauses {
        if let Some(v) = i.robust_value(body)? {
            if i.get(head) != v {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
