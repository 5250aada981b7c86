//! Document formats and commands behind the `mlrewrite` binary.

pub mod commands;
pub mod dot;
pub mod dsl;
pub mod hierarchy;
pub mod json;
