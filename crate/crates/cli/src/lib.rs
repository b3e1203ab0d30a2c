//! Command-line front end: configuration, output formatting, verification.

pub mod cache;
pub mod config;
pub mod radius;
pub mod report;
pub mod verify;
