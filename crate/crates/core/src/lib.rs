//! Exact-arithmetic toolkit for working with K3 surfaces: even lattices
//! and their discriminant forms, elliptic fibrations over Q(t) with
//! Kodaira fiber classification, character sums and zeta functions of
//! quartic-type surfaces over finite fields, and a replay harness that
//! cross-checks a registry of named surfaces against expected data.
//!
//! No floating point is used anywhere in the computational core; every
//! quantity is a big rational, a quadratic field element, a cyclotomic
//! integer or a finite field element.

pub mod chars;
pub mod cyclo;
pub mod disc;
pub mod error;
pub mod field;
pub mod fq;
pub mod jacobi;
pub mod kodaira;
pub mod lattice;
pub mod poly;
pub mod quad;
pub mod refine;
pub mod registry;
pub mod replay;
pub mod report;
pub mod snf;
pub mod suite;
pub mod weier;
pub mod zeta;

pub use error::{Error, Result};
