//! Command-line companion to `kucomm-core`: expression parsing, JSON
//! renderings, and the verification harness.

pub mod expr;
pub mod json;
pub mod verify;
