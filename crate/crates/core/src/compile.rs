use std::time::Duration;

use crate::circuit::Circuit;
use crate::error::Result;
use crate::order::{compile_order, OrderResult, Strategy};
use crate::rewrite::{rewrite_via_dual_with, rewrite_with, AllocationPolicy, CompiledCircuit, RewriteOptions};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompileOptions {
    pub strategy: Strategy,
    /// Also search the dual circuit and keep it if strictly narrower.
    pub use_dual: bool,
    pub policy: AllocationPolicy,
    pub rewrite: RewriteOptions,
    /// Only consulted by the exact strategy.
    pub time_limit: Option<Duration>,
}

impl Default for CompileOptions {
    fn default() -> Self {
        Self {
            strategy: Strategy::GreedyBruteFirst,
            use_dual: true,
            policy: AllocationPolicy::ReuseFirst,
            rewrite: RewriteOptions::default(),
            time_limit: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Compilation {
    pub order: OrderResult,
    pub compiled: CompiledCircuit,
}

/// Searches a measurement order and rewrites `circuit` along it.
pub fn compile(circuit: &Circuit, options: &CompileOptions) -> Result<Compilation> {
    let order = compile_order(circuit, options.strategy, options.use_dual, options.time_limit)?;
    let compiled = if order.via_dual {
        rewrite_via_dual_with(circuit, &order.order, options.policy, options.rewrite)?
    } else {
        rewrite_with(circuit, &order.order, options.policy, options.rewrite)?
    };
    Ok(Compilation { order, compiled })
}
