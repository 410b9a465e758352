//! Computation in the Fricke–Klein space of hyperbolic cone tori.
//!
//! A point of the space is a triple of traces `(x, y, z)` with all three
//! coordinates above 2 and `x² + y² + z² − xyz − 2 = −2cos(θ/2)` for a cone
//! angle `θ ∈ (0, 2π)`. The crate covers:
//!
//! * exact word algebra in the free group `⟨X, Y⟩` and in the Coxeter group
//!   `⟨P, Q, R⟩` that contains it with index two ([`words`]);
//! * integer trace polynomials of words ([`tracepoly`]);
//! * holonomy matrices, Coxeter extensions and isometry classification
//!   ([`fricke`]);
//! * the triangle-shape parametrization and a few hyperbolic-plane helpers
//!   ([`geometry`]);
//! * normal-closure membership and torsion-type decisions for words
//!   ([`newman`]);
//! * certified root finding for relation loci on coordinate curves
//!   ([`search`]).
//!
//! All real arithmetic is done with MPFR floats at a caller-chosen precision
//! (256 bits by default).

pub mod error;
pub mod fricke;
pub mod geometry;
pub mod newman;
pub mod real;
pub mod search;
pub mod tracepoly;
pub mod words;

pub use error::{Error, Result};
pub use fricke::{
    classify, coxeter_extension, evaluate_cox_word, evaluate_word, normal_form, short_relation_scan, solve_z,
    ConeAngle, CoxeterImages, FrickePoint, IsometryClass, Mat2, Representation,
};
pub use geometry::{SideLengths, TriangleShape, UhpPoint};
pub use newman::{
    candidate_relators, case_audit, in_normal_closure, is_torsion_type, CandidateRelator, MembershipCertificate,
    MembershipOutcome, TorsionTypeOutcome,
};
pub use real::{Tolerances, DEFAULT_PRECISION};
pub use search::{Axis, Grid, LocusKind, LocusResult};
pub use tracepoly::{kappa, trace_polynomial, TracePolynomial};
pub use words::{CoxWord, FWord, Letter, Reflection};
