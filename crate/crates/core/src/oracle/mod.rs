//! Offline side: exact optima, the 4/3 plan, and advice-tape generation.

mod advice;
mod exact;
mod plan43;

pub use advice::{
    advice_43, advice_cancel, advice_fpa, advice_greedyopt, advice_trivial, advice_truncated,
    opt_bipartite, truncate_opt,
};
pub use exact::{first_fit_colors, opt_exact, Budget, OptWitness};
pub use plan43::{plan_43, Plan43, PlanNode};
