//! Fitting logic programs over bilattices, hypotheses and their support,
//! and the hypothesis-founded semantics.
//!
//! ```
//! use hypolog::{ground, parse_program, Bilattice, Interpretation, TruthValue};
//!
//! let p = parse_program("q = T.\np <- q & ~r.", Bilattice::Four)?;
//! let g = ground(&p)?;
//! let hf = Interpretation::constant(g.base.clone(), g.bilattice, TruthValue::FALSE)?;
//! let sem = hypolog::h_founded_semantics(&g, &hf, None)?;
//! assert_eq!(sem.model.to_string(), "p = T\nq = T\nr = F\n");
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod bilattice;
pub mod engine;
pub mod interpretation;
pub mod program;
pub mod reference;

pub use bilattice::{BaseLattice, Bilattice, BilatticeError, BinOp, Four, TruthValue};
pub use engine::{
    compute_pf, h_founded_semantics, immediate_consequence, incompatible, is_model, is_sound, support, support_under,
    AtomSet, EngineError, SemanticsResult, SupportResult,
};
pub use interpretation::{Interpretation, InterpretationError};
pub use program::{
    ground, parse_hypothesis, parse_program, Assignment, GroundAtom, GroundError, GroundFormula, GroundProgram,
    HerbrandBase, ParseError, Program,
};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/bilattices.md")]
    mod bilattices {}
    #[doc = include_str!("../../../book/src/programs.md")]
    mod programs {}
    #[doc = include_str!("../../../book/src/interpretations.md")]
    mod interpretations {}
    #[doc = include_str!("../../../book/src/support.md")]
    mod support {}
    #[doc = include_str!("../../../book/src/semantics.md")]
    mod semantics {}
    #[doc = include_str!("../../../book/src/classical.md")]
    mod classical {}
    #[doc = include_str!("../../../README.md")]
    mod readme {}
}
