//! Core engines for classifying product-design problems and synthesizing
//! candidate solutions.
//!
//! A design problem is either a [`BlackBox`] or a [`FunctionStructure`]
//! (a DAG of subfunctions connected by labeled flows). From there:
//!
//! * [`funcstruct`] computes vertex degrees and the interdependency index PI.
//! * [`novelty`] scores a design instance against a knowledge base
//!   (innovation and creativity indices) and files it as routine,
//!   innovative or creative.
//! * [`grammar`] is an attributed graph-grammar engine: matching, rewriting,
//!   bounded breadth-first generation and canonical forms.
//! * [`casebase`] implements retrieve / reuse / revise / retain over a case
//!   base of function structures.
//! * [`synth`] synthesizes Boolean circuits, either by gate assignment on a
//!   fixed topology or by minimal topology search.
//! * [`classify`] maps a problem profile onto the synthesis methods able to
//!   handle it.

pub mod casebase;
pub mod classify;
mod error;
pub mod funcstruct;
pub mod grammar;
pub mod novelty;
pub mod rational;
pub mod synth;

pub use error::{Error, Result};
pub use funcstruct::{BlackBox, DesignProblem, FunctionStructure};
pub use rational::Rational;
