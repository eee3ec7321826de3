//! Exact-arithmetic toolkit for tridiagonal pairs: verification, algebra
//! closure, centre computation, and sharpening over prime fields, their
//! finite extensions, and the rationals.
//!
//! Everything here is exact — there are no floating-point numbers anywhere.
//! Matrices carry their field with them, field mismatches are hard errors,
//! and every structural claim (idempotent identities, irreducibility,
//! module isomorphisms) is re-checked on the produced objects rather than
//! assumed from the construction.
//!
//! The crate is organised bottom-up:
//!
//! * [`field`] — field descriptions and exact scalar arithmetic;
//! * [`poly`] — univariate polynomials, gcds, irreducibility, root finding;
//! * [`matrix`] — dense exact matrices, reduced echelon forms, kernels,
//!   linear solving with certified inconsistency;
//! * [`spectral`] — minimal polynomials, eigendecompositions, primitive
//!   idempotents;
//! * [`algebra`] — matrix subalgebras: closure, centre, corners, in-algebra
//!   inversion, and field certification;
//! * [`meataxe`] — irreducibility of matrix modules (randomised test with a
//!   brute-force oracle for tiny cases);
//! * [`td`] — recognition of tridiagonal pairs and canonical system records;
//! * [`sharpen`] — the sharpening pipeline: builds the generated algebra,
//!   certifies its centre as a field, and rebases the module over it;
//! * [`generate`] — seeded instance generators (split-form pairs, scalar
//!   restriction, a twisted non-sharp family);
//! * [`instance`] / [`report`] / [`cli`] — the JSON file formats and the
//!   command-line entry points.
//!
//! The `examples/` directory contains one runnable walk-through per major
//! capability; start with `cargo run --example sharpen_flagship`.

pub mod algebra;
pub mod cli;
pub mod field;
pub mod generate;
pub mod instance;
pub mod matrix;
pub mod meataxe;
pub mod poly;
pub mod report;
pub mod sharpen;
pub mod spectral;
pub mod td;
