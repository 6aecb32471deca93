//! Command-line front end for the `subdiff` solver.
//!
//! `subdiff <solve|order|timeerr|selftest> [flags]`, with an optional flat
//! `key = value` file passed by `--config`. Flags override the file, which
//! overrides the built-in defaults.

mod commands;
mod config;

pub use commands::{check_thread_env, run, RunError};
pub use config::{
    parse_args, parse_config, render, Command, ConfigError, RunConfig, DEFAULT_ALPHA, DEFAULT_FIT_POINTS,
    DEFAULT_GAMMA, DEFAULT_HORIZON, DEFAULT_NX, DEFAULT_REF_REFINE, DEFAULT_TIMEERR_HORIZON,
};
