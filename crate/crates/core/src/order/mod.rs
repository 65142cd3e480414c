//! Measurement-order search.
//!
//! Every strategy works on a [`ConeMap`] and returns a permutation of the
//! measured outputs together with its width. [`compile_order`] runs a
//! strategy on a circuit and, optionally, on its dual, keeping the better
//! of the two.

mod constraints;
mod exact;
mod greedy;

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

pub use constraints::{Assignment, Constraint, ConstraintViolation};
pub use exact::{brute_force_order, exact_order, ExactResult, BRUTE_FORCE_MAX_OUTPUTS};
pub use greedy::{greedy_brute_first, greedy_order};

use crate::causal::{compute_cones, ConeMap, MeasurementOrder};
use crate::circuit::{dual, Circuit};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    Greedy,
    GreedyBruteFirst,
    Exact,
    BruteForce,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::Greedy => "greedy",
            Strategy::GreedyBruteFirst => "greedy-brute",
            Strategy::Exact => "exact",
            Strategy::BruteForce => "brute-force",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "greedy" => Ok(Strategy::Greedy),
            "greedy-brute" | "greedy-brute-first" => Ok(Strategy::GreedyBruteFirst),
            "exact" => Ok(Strategy::Exact),
            "brute-force" => Ok(Strategy::BruteForce),
            other => Err(Error::InvalidArgument(format!("unknown strategy {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrderResult {
    pub order: MeasurementOrder,
    pub strategy: Strategy,
    /// The order refers to the outputs of the dual circuit.
    pub via_dual: bool,
    /// Proven minimal (exact search that finished, or brute force).
    pub optimal: bool,
    pub elapsed: Duration,
}

impl OrderResult {
    pub fn width(&self) -> usize {
        self.order.width
    }
}

/// Runs `strategy` on precomputed cones.
pub fn run_strategy(cones: &ConeMap, strategy: Strategy, time_limit: Option<Duration>) -> Result<OrderResult> {
    let start = Instant::now();
    let (order, optimal) = match strategy {
        Strategy::Greedy => (greedy_order(cones, None)?, false),
        Strategy::GreedyBruteFirst => (greedy_brute_first(cones), false),
        Strategy::Exact => {
            let r = exact_order(cones, time_limit.unwrap_or(Duration::MAX), None)?;
            (r.order, r.optimal)
        }
        Strategy::BruteForce => (brute_force_order(cones)?.order, true),
    };
    Ok(OrderResult {
        order,
        strategy,
        via_dual: false,
        optimal,
        elapsed: start.elapsed(),
    })
}

/// Finds a measurement order for `circuit`. With `use_dual`, the strategy
/// also runs on the dual circuit and the dual result is kept only if it is
/// strictly narrower.
pub fn compile_order(
    circuit: &Circuit,
    strategy: Strategy,
    use_dual: bool,
    time_limit: Option<Duration>,
) -> Result<OrderResult> {
    let start = Instant::now();
    let direct = run_strategy(&compute_cones(circuit)?, strategy, time_limit)?;
    let mut best = direct;
    if use_dual {
        let dual_cones = compute_cones(&dual(circuit)?)?;
        let mut via = run_strategy(&dual_cones, strategy, time_limit)?;
        if via.width() < best.width() {
            via.via_dual = true;
            best = via;
        }
    }
    best.elapsed = start.elapsed();
    Ok(best)
}
