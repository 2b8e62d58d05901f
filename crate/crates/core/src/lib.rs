//! Numerical laboratory for quasidense monotone operators on Banach spaces.
//!
//! The crate works with pairs `E x E*` where `E` is either `R^n` or a
//! sequence space (`c0`, `l1`) represented by [`FinTailSeq`]. It provides the
//! bilinear forms `q_L` and `r_L`, grid Fenchel calculus, Fitzpatrick
//! functions of operator graphs, quasidensity probes with certificates, and a
//! gallery of sequence-space operators with exact identities.
//!
//! Everything is generic over the scalar type ([`Scalar`], implemented for
//! `f32` and `f64`); the `*F64` aliases below fix the usual choice.

pub mod convexcalc;
pub mod error;
pub mod gallery;
pub mod linalg;
pub mod operators;
pub mod quasidensity;
pub mod sampling;
pub mod scalar;
pub mod seq;
pub mod spaces;

pub use convexcalc::{
    at_transform, biconjugate_envelope, biconjugate_envelope_on, coincidence_set, conjugate,
    episum, rslem_search, shift_by, Axis, CoincidenceSet, Episum, EpisumAxis, GridFunction,
    Lattice,
};
pub use error::{Error, Result};
pub use linalg::DenseMatrix;
pub use operators::{
    fitz_ext_membership, fitz_phi, fitz_theta, gossez_membership, minty_min, monotone_check,
    op_inverse, op_sum, pullback_via_l, Budget, FitzValue, Membership, MembershipVerdict,
    MonotoneVerdict, OperatorGraph, OperatorSpec, SeqRule,
};
pub use quasidensity::{
    dual_condition_check, ni_check, primal_iterate, probe, probe_batch, Certificate, DualCheck,
    EpsSchedule, NiReport, PrimalIterate, ProbeBudget, Verdict,
};
pub use scalar::{Scalar, TOL_EXACT, TOL_OPT, TOL_SUM};
pub use seq::{FinTailSeq, Tail};
pub use spaces::{
    apply_l, bilinear, dual_bilinear, pairing, DualPoint, NormKind, PairedPoint, PairedSpace,
    SpaceKind,
};

pub type FinTailSeqF64 = FinTailSeq<f64>;
pub type PairedPointF64 = PairedPoint<f64>;
pub type DualPointF64 = DualPoint<f64>;
pub type GridFunctionF64 = GridFunction<f64>;
pub type OperatorGraphF64 = OperatorGraph<f64>;
pub type CertificateF64 = Certificate<f64>;
pub type DenseMatrixF64 = DenseMatrix<f64>;
