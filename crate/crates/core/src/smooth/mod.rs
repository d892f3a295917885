//! Smooth numbers, the Dickman function and mean values of arithmetic functions.

mod dickman;
mod mean;
mod parts;
mod sieve;

pub use dickman::{
    dickman_rho, dickman_table, rho_closed_form_2_3, DickmanTable, RHO_MAX_U, TABLE_STEP,
};
pub use mean::{
    dyadic_ratios, gamma_two_power_sum, mean_value_suite, mean_value_suite_with, rankin_prefix,
    rankin_sum, squarefull_avg, squarefull_prefix, MeanRow, MEAN_LIMIT, RANKIN_LIMIT,
    SQUAREFULL_LIMIT,
};
pub use parts::{divisor_in_window, part_functions, PartFunctions};
pub use sieve::{psi, psi_lpf, psi_with, smoothness, SmoothnessCertificate, PSI_LIMIT};
