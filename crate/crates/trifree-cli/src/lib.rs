pub mod commands;
pub mod dot;
pub mod harness;
pub mod io;
