//! The `quasicone` command-line tool and its HTTP session service.

pub mod cli;
pub mod matrix_io;
pub mod server;
