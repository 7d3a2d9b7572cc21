#![allow(clippy::needless_range_loop)]
//! Independent reference implementations used to check epochscope.
//!
//! Nothing here depends on the library under test: corpora are generated
//! as plain text and every oracle recomputes its answer from first
//! principles (exact integer enumeration, naive rescans, brute force).

pub mod corpus;
pub mod oracle;
