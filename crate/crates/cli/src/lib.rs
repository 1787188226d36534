//! Library half of the `multiplier` binary: argument model, config files,
//! table builders, and the verification harness.

pub mod app;
pub mod commands;
pub mod fixtures;
pub mod table;
pub mod verify;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;
