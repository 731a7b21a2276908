//! File formats, experiment harness and brute-force oracle around
//! [`rowlrpc_core`].

pub mod config;
pub mod experiments;
pub mod format;
pub mod oracle;

pub use rowlrpc_core;
