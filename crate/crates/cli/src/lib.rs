//! Expression parsing, JSON schema and command implementations behind the
//! `toepkern` binary.

pub mod commands;
pub mod expr;
pub mod json;
