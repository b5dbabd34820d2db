//! Refinement to the ordered coarsest forward-stable partition and the
//! quasi-Wheeler verdict.

use crate::automaton::{Automaton, OrderedPartition, Quotient};
use crate::error::Result;
use crate::oracle::{check_wheeler_order, WheelerViolation};
use crate::partition::{InitialOrder, PruneMode, RefineStats, Refinement};

#[derive(Clone, Copy, Debug, Default)]
pub struct RefineOptions {
    /// Full invariant scans after every split; quadratic, small inputs only.
    pub check_invariants: bool,
}

pub fn refine_all(a: &Automaton) -> Result<OrderedPartition> {
    refine_all_with(a, RefineOptions::default()).map(|(p, _)| p)
}

pub fn refine_all_with(a: &Automaton, opts: RefineOptions) -> Result<(OrderedPartition, RefineStats)> {
    a.require_valid()?;
    let mut r = Refinement::new(a, InitialOrder::Ascending, PruneMode::Off);
    r.set_invariant_checks(opts.check_invariants);
    r.run();
    Ok((r.snapshot_partition(), r.stats().clone()))
}

#[derive(Clone, Debug)]
pub struct WheelerPreorder {
    pub partition: OrderedPartition,
    pub quotient: Quotient,
    pub quasi_wheeler: bool,
    /// Why the quotient order is not Wheeler, if it is not.
    pub violation: Option<WheelerViolation>,
    pub stats: RefineStats,
}

/// Refines `a`, builds the quotient with the part order as state order, and
/// checks that order on the quotient.
pub fn wheeler_preorder(a: &Automaton) -> Result<WheelerPreorder> {
    let (partition, stats) = refine_all_with(a, RefineOptions::default())?;
    let quotient = a.quotient(&partition)?;
    let order: Vec<_> = quotient.automaton.states().collect();
    let violation = check_wheeler_order(&quotient.automaton, &order)?;
    Ok(WheelerPreorder {
        partition,
        quotient,
        quasi_wheeler: violation.is_none(),
        violation,
        stats,
    })
}
