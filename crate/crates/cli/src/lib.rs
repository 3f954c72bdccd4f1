//! The `ship` command-line tool and its read-only JSON query service.

pub mod commands;
pub mod select;
pub mod server;
pub mod session;

pub use commands::{run, Cli};
pub use server::router;
pub use session::Session;
