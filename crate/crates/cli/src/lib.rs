//! Library surface of the command-line front end; exposes the JSON float
//! formatting used by the binary so tests can perform exact round trips.

pub mod json;
