//! Zero counting for the harmonic polynomial family
//! f(z) = p(z) + conj(q(z)) built from S(z) = i·zⁿ and
//! T(z) = i·(z+a)ⁿ⁻¹·(z−(n−1)a) with p = S + T, q = S − T and |a| = 1.
//!
//! Because f collapses to 2·Re S + 2i·Im T, its zeros at a = 1 are the
//! intersections of 2n rays {Re S = 0} with the curve {Im T = 0}. The crate
//! provides three independent counting routes and keeps them honest against
//! each other:
//!
//! - [`valence`]: the closed-form count n² − 2n + 2 + 4·k_max(n), where
//!   k_max is read off a sequence of cotangent margins, plus the asymptotics
//!   of k_max/n via the fixed point of cos.
//! - [`ray`]: certified per-ray root bracketing of a one-variable transverse
//!   function — every count is backed by sign certificates, not sampling.
//! - [`planar`]: a construction-agnostic multi-start Newton finder with
//!   argument-principle completeness checking.
//!
//! [`construction`] builds the polynomial pair both in expanded coefficient
//! form and as an exactly-factored evaluator, and [`planar::cross_validate`]
//! glues the routes into one report.

pub mod construction;
pub mod error;
pub mod planar;
pub mod poly;
pub mod ray;
pub mod valence;

pub use construction::{
    build_perturbed, build_standard, ConstructionParams, FactoredFamily, HarmonicMap, Jacobian,
    MAX_EXPANDED_ORDER,
};
pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use planar::{
    cross_validate, find_zeros, winding_number, winding_on_circle, DegenerateAnnotation,
    SearchRegion, Zero,
};
pub use poly::ComplexPoly;
pub use ray::{
    boundary_value, cot_identity_residual, count_ray, critical_points, critical_value_margin,
    pole_angles, ray_value, ray_zero_locations, sine_numerator, special_ray_counts, theta_to_r,
    threshold_constant, total_from_rays, CriticalValueMargin, Ray, RayProfile, BISECTION_TOL,
};
pub use valence::{
    asymptotic_slope, cos_fixed_point_bisection, gamma_leading_term, k_max, kmax_margin,
    margin_sine_numerator, predict_count, solve_cos_fixed_point, KmaxResult, ValenceReport,
};
