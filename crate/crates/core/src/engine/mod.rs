//! QAOA circuits, `E_p` evaluation and parameter optimization.

mod ansatz;
mod expectation;
mod optimize;

pub use ansatz::{build_qaoa_circuit, cost_diagonal, interp, QaoaParams};
pub use expectation::{
    decompose, expectation_decomposed, expectation_full, expectation_of, Term, TermSubproblem,
};
pub use optimize::{
    optimize, Evaluator, Init, Method, OptimizeResult, OptimizerConfig, TraceRow, BETA_RANGE,
    GAMMA_RANGE,
};
