//! Exact-arithmetic engine for finite-type simply connected minimal Sullivan
//! algebras over the rationals.
//!
//! The crate computes cohomology, coformal limits, Toomer invariants,
//! homotopy Lie algebras and fibration diagnostics (TNHZ/TNCZ), and
//! mechanizes coformalization and non-coformality searches. All arithmetic
//! is exact; every cutoff-relative verdict records the cutoff it was
//! computed under.

pub mod algebra;
pub mod coformal;
pub mod cohomology;
pub mod dga;
pub mod error;
pub mod fibration;
pub mod fixtures;
pub mod lie;
pub mod morphism;
pub mod random;
pub mod rat;
pub mod search;

pub use algebra::{GradedContext, Monomial, Polynomial};
pub use coformal::{
    coformal_limit, coformality_report, coformalize, CoformalKind, CoformalVerdict,
    CoformalityReport,
};
pub use cohomology::{
    betti, cup_length_evidence, find_primitive, induced_on_H, toomer, CohomologyTable,
    ToomerVerdict,
};
pub use dga::{sphere_model, tensor, SullivanAlgebra, ValidationReport};
pub use error::Error;
pub use fibration::{coformal_pipeline_applies, KoszulVerdict, RelativeModel};
pub use lie::{
    ce_quadratic_model, free_lie, quadratic_dual, validate_lie, wedge_of_spheres_model,
    GradedLieAlgebra,
};
pub use morphism::DgaMorphism;
pub use random::{random_minimal_algebra, RandomSpec};
pub use rat::{RatMatrix, Rational};
pub use search::{parametrized_iso_search, replay_branch, SearchVerdict};
