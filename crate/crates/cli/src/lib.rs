//! Manifest parsing, analysis runs and report encoding for the `cofun` tool.

pub mod codec;
pub mod manifest;
pub mod report;
pub mod run;
