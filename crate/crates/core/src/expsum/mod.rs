//! Complete exponential sums modulo `q`: the Gauss-type sum `T`, the
//! Kloosterman-type sum `K`, the sum `𝔅`, sums of rational functions
//! `Σ(λ, q)`, their upper bounds, the van der Corput splitting, the smooth
//! bump with its Poisson check, and the smoothed triple sum `𝔖`.

mod bounds;
mod bump;
mod parts;
mod poly;
mod sums;
mod triple;
mod vdc;

pub use bounds::{bound_b, bound_general, bound_k};
pub use bump::{
    decay_profile, poisson_check, smooth_bump, BumpFunction, PoissonReport, DECAY_CONSTANT_A4,
    POISSON_THRESHOLD,
};
pub use parts::{mod_parts, ModulusParts};
pub use poly::{
    gcd_conventions, lambda_prime_mismatches, reference_lambda_prime, resultant, two_pole_lambda,
    verify_lambda_prime, GcdConventions, IntPolynomial, RationalFunctionPair,
};
pub use sums::{b_sum, e, gauss_T, kloos_K, rational_exp_sum, CompensatedSum, ModContext};
pub use triple::{triple_sum, TripleSumConfig, TripleSumResult, TRIPLE_BUDGET};
pub use vdc::{
    crt_identities, crt_twist, identity_point, vdc_bound, vdc_partial_sum, vdc_split, CrtReport,
    VdcPath, VdcSplit, IDENTITY_TOLERANCE,
};
