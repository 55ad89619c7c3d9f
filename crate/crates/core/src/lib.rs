//! Synthesis of opacity-enforcing edit functions for modular discrete-event
//! systems.
//!
//! The pipeline abstracts each nondeterministic component, builds its
//! three-player observer, turns the observers into an interacting family of
//! automata, adds an automaton for the bound on consecutive erasures, and
//! computes the supremal controllable and nonblocking supervisor over them.
//! A [`runtime::Session`] then executes the resulting edit function one
//! system event at a time.

pub mod abstraction;
pub mod automaton;
pub mod constraint;
pub mod error;
pub mod estimation;
pub mod fixture;
pub mod io;
pub mod oracle;
pub mod runtime;
pub mod synthesis;
pub mod tpo;
pub mod transform;

pub use abstraction::{abstract_component, AbstractionBundle};
pub use automaton::{Automaton, EventId, Label, Partition, StateId, StateInfo, Word, TAU};
pub use error::{Error, Result};
pub use estimation::{check_current_state_opacity, desired_observer, determinize, Observer, OpacityReport};
pub use runtime::{Policy, Session};
pub use synthesis::{synthesize_modular_edit_structure, ModularEditStructure, SynthesisOptions};
pub use tpo::{build_largest_tpo, prune_to_aes, EditSymbol, Tpo};
pub use transform::{DecoratedEvent, DecorationKind, TransformedAutomaton};
