//! User-to-server protocol simulation under common and customized settings.

mod config;
mod io;
mod noisy;
mod roles;
mod run;

pub use config::{Mechanism, PrivacyConfig, Symmetrize};
pub use io::{count_noisy, graph_file_stem, noisy_meta, noisy_paths, read_noisy, write_noisy, NoisyGraphMeta, NOISY_FORMAT};
pub use noisy::{NoisyGraph, Provenance, UserMeta};
pub use roles::{assign_roles, Role, RoleVector};
pub use run::{
    private_split, run_protocol, run_protocol_exec, run_protocol_with, ProtocolEvent, ProtocolObserver, UserReport,
};
