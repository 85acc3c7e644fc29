//! Exact tools for projective hypersurfaces: smooth / nodal / degenerate
//! classification via Groebner bases, Chern-class pushforwards on the
//! projectivized tangent bundle, diagonal Hilbert-Mumford destabilizers and
//! stabilizer-order bounds.

pub mod chern;
pub mod cli;
pub mod error;
pub mod feasibility;
pub mod git;
pub mod ideal;
pub mod matrix;
pub mod poly;
pub mod random;
pub mod singularity;
pub mod stabilizer;

pub use error::{Error, Result};
pub use ideal::{buchberger, normal_form, only_origin, GroebnerBasis, GroebnerLimits, Ideal};
pub use matrix::RationalMatrix;
pub use poly::{Exponent, Form, Poly, Rational};
pub use singularity::{
    classify, classify_with, degenerate_witness, is_singular_at, singular_ideals, PointCheck,
    SingularityClass, SingularityReport,
};
pub use chern::{
    euler_class, pushforward, pushforward_euler, twisted_cotangent_chern, BaseClass,
    CohomologyClass, LineBundle, Mode,
};
pub use git::{
    check_weight_inequalities, find_diagonal_destabilizer, mu, verify_vanishing_consequence,
    CoordinateSearch, DestabilizerCertificate, SearchOutcome, WeightVector,
};
pub use stabilizer::{
    infinitesimal_diagonal_stabilizer, monomial_stabilizer_count, order_bound, StabilizerProbe,
};
