//! Explicit well-conditioned polynomials built from an equal-area point set on
//! the unit sphere.
//!
//! The crate constructs the point set, its stereographic polynomial, and the
//! Shub-Smale condition number of that polynomial through two independent
//! routes. It also evaluates the logarithmic-energy estimates and elementary
//! sum bounds that control the construction.

pub mod condition;
pub mod energy;
pub mod error;
pub mod export;
pub mod interval;
pub mod points;
pub mod polynomial;
pub mod precision;
pub mod quadrature;
pub mod sums;
pub mod verification;

pub use condition::{
    certify_bound, mu_at_root, mu_max_coefficient_route, mu_max_spherical_route, numerator_integral_log,
    parallel_self_product_log, theta_product, ConditionReport, QuadratureConfig, QuadratureInfo, Route,
    RootCondition, SphericalOptions, Verdicts,
};
pub use energy::{
    band_integral, comparison_inside_margin, comparison_outside_margin, expected_log_parallel, kappa,
    log_energy, log_product_to_set, s_n, t_ell, BandGeometry, EnergyReport,
};
pub use error::{Error, Result};
pub use interval::Interval;
pub use points::{
    band_of, band_of_height, build_bands, build_parallels, build_point_set, inverse_stereographic,
    stereographic, BandSpec, ParallelSpec, PointSet, SpherePoint,
};
pub use polynomial::{
    bombieri_norm_sq, canonical_polynomial, derivative_modulus_at_root, evaluate, expand, roots,
    DensePolynomial, Factor, FactorizedPolynomial, NormConfig, Root, RootList,
};
pub use precision::Precision;
pub use sums::SumCheck;
pub use verification::{EvaluationGrid, SuiteRun, VerificationReport};
