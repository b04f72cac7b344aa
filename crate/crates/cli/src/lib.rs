//! Reports, diagrams and verification suites behind the `netlie` binary.

pub mod dot;
pub mod report;
pub mod verify;
