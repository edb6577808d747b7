//! Exact certification of upper bounds on the number of rational points of curves over
//! finite fields.
//!
//! The crate enumerates the possible zeta-function types of a curve that would beat a
//! candidate bound and rules each one out with an exact obstruction: the Weil interval,
//! nonnegativity of place counts, indecomposability of the Jacobian, Galois descent,
//! admissible elliptic traces, and the explicit-formulae inequality. The bound reported
//! by [`engine::best_upper_bound`] is proven; surviving candidates are only unobstructed.

pub mod descent;
pub mod elimination;
pub mod engine;
pub mod error;
pub mod exactalg;
pub mod hondatate;
pub mod oesterle;
pub(crate) mod serde_big;
pub mod zetatypes;

pub use error::{Error, Result};
pub use exactalg::{FactoredPoly, IntPolynomial};
pub use zetatypes::{FieldContext, PointCountProfile, ZetaType};
