//! Pell equations `t² − D u² = 1` and the counts `S(x, α)`, `S^f(x, α)`.

mod cache;
mod count;
mod solve;
mod window;

pub use cache::{read_cache, write_cache, SolutionCache, CACHE_HEADER};
pub use count::{
    count_both, count_both_cached, count_s, count_s_param, count_s_param_with, count_sf,
    eta_within, Counts, MAX_EXACT_DENOMINATOR,
};
pub use solve::{fundamental_solution, solution_powers, Fundamental, PellSolution, SolutionRecord};
pub use window::{
    x_alpha, y1_solve, y_window, Alpha, CountWindow, YWindow, BISECTION_STEPS, Y1_TOLERANCE,
};
