//! Exact integer-polynomial kernel: arithmetic, Sturm root counting, total positivity,
//! resultants, difference polynomials, factorization and power sums.

mod factor;
mod poly;
mod resultant;
mod sturm;

pub use factor::{factor, factor_with_cap, FactoredPoly, DEFAULT_FACTOR_DEGREE_CAP};
pub use poly::{binomial, power_sums, IntPolynomial};
pub use resultant::{difference_poly, differences_are_units, resultant};
#[allow(unused_imports)]
pub(crate) use resultant::interpolate_integer_points;
pub use sturm::{
    count_real_roots, count_real_roots_open, has_root_below, is_real_rooted,
    is_totally_positive, sturm_chain, ExtRational,
};
