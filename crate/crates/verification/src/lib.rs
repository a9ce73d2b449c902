//! Independent oracles for the acceptance run.

pub mod oracle;
