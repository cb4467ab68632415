//! File format and command layer behind the `regmod` binary.

pub mod commands;
pub mod format;

pub use commands::{cmd_basis, cmd_gen, cmd_iso, cmd_member, cmd_passport, cmd_verify, Output};
pub use format::{
    parse_module_file, parse_vector_file, render_module_file, render_vector_file, AnyModule,
    AnyVector,
};
