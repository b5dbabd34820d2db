//! Ordered partition refinement for Wheeler automata and co-lex orders.
//!
//! * [`refine`] computes the ordered coarsest forward-stable partition of an
//!   NFA, its quotient, and whether that quotient is Wheeler.
//! * [`prune`] interleaves edge pruning to obtain the infimum and supremum
//!   automata of a DFA.
//! * [`colex`] sorts the infima and suprema and derives a minimum chain
//!   partition of the smallest-width co-lex order.
//! * [`oracle`] holds brute-force references used by tests and `check`.

pub mod automaton;
pub mod bench;
pub mod colex;
pub mod error;
pub mod gen;
pub mod oracle;
pub mod partition;
pub mod prune;
pub mod refine;

pub use automaton::{Automaton, Edge, Letter, OrderedPartition, StateId};
pub use error::{Error, Result};
