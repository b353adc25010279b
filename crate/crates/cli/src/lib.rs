//! Command line front end and local scenario service.

pub mod commands;
pub mod service;
pub mod store;
