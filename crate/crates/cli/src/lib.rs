//! Command-line plumbing for skc-core: job manifests, the expansion cache and the
//! command implementations behind the `skc` binary.

pub mod cache;
pub mod commands;
pub mod error;
pub mod manifest;

pub use cache::{decode_entry, encode_entry, Cache, CacheKey, Lookup};
pub use commands::{execute, parse_siegel_lines, RunOutput};
pub use error::{CliError, CliResult};
pub use manifest::{Command, Format, Job, JobManifest, Params};
