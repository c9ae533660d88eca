//! Exact computer algebra for level-indexed twisted Zhu algebras and their
//! bimodules over the rank-1 free boson.
//!
//! The crate builds, concretely and in exact rational arithmetic:
//! - the free boson vertex algebra with its order-2 involution, the vacuum
//!   Fock module and the half-integer-moded twisted Fock module ([`fock`]);
//! - the level-n quotient algebras with their two defining products, the
//!   level-lowering surjections, the grading involution phi, and the
//!   depth-filtered module functor with its zero-mode action ([`zhu`]);
//! - the level-n bimodule quotients of the adjoint module with left and
//!   right actions, the epimorphism chain, the phi identities, and the
//!   depth filtration ([`bimod`]);
//! - graded components of the canonical intertwiner with homomorphism and
//!   vanishing checks ([`intertwine`]).
//!
//! Everything is verified, not assumed: [`laurent`] proves the underlying
//! binomial identities symbolically, [`oracle`] recomputes every product
//! through an independent series-pairing path, and [`runner`] drives the
//! batch verification suites behind the CLI with deterministic reports.

pub mod bimod;
pub mod error;
pub mod fock;
pub mod intertwine;
pub mod laurent;
pub mod linalg;
pub mod oracle;
pub mod rat;
pub mod report;
pub mod runner;
pub mod sample;
pub mod zhu;

pub use error::{Error, Result};
pub use fock::{Aut, FockKey, FockVector, Sector, VoaContext};
pub use rat::{decompose_n, delta, rat_binomial, FracExp, ModIndex, Rat};
pub use report::Report;
pub use runner::{run_build, run_identities, run_verify, RunConfig};
