//! Frames, K-frames and atomic systems in Hilbert C*-modules over
//! finite-dimensional C*-algebras.
//!
//! The algebra is `A = ⊕_b M_{d_b}(ℂ)`, the module is the free module `A^m`,
//! and adjointable operators are A-valued matrices. Every order, norm and range
//! question is answered through the block realization `φ` of
//! [`ModuleOperator::realize`], which turns it into dense Hermitian linear
//! algebra.

pub mod algebra;
pub mod error;
pub mod frame;
pub mod harness;
pub mod json;
pub mod linalg;
pub mod module;
pub mod operator_frames;
pub mod random;

pub use algebra::{AlgebraElement, AlgebraSpec};
pub use error::{FrameError, Result};
pub use frame::{
    is_orthonormal_system, random_frame, standard_generator_frame, BoundFlavor, DualReport, FrameBounds, FrameSystem,
    NormSampling, FRAME_TOL,
};
pub use harness::{
    run_property_suite, run_trial, SuiteConfig, SuiteId, SuiteReport, SuiteSummary, Tolerances, TrialOutcome,
};
pub use json::{fingerprint, from_json, to_json, to_json_pretty};
pub use module::{BlockRealization, ModuleOperator, ModuleVector, RANK_TOL};
pub use operator_frames::{
    atomic_coefficients, atomic_system_for, douglas_factorize, douglas_report, frame_from_kframe, kframe_via_range,
    optimal_kframe_lower_bound, range_included_by_rank, surjectivity_constant, verify_atomic_system, verify_kframe,
    AtomicCertificate, DouglasReport, KFrameCertificate,
};
