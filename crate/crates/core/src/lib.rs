//! Agent-based simulation of respiratory disease spread through in-person
//! classes on a university campus.

pub mod engine;
pub mod export;
pub mod net;
pub mod policy;
pub mod progression;
pub mod rng;
pub mod scenario;
pub mod synthetic;
pub mod testing;
pub mod transmission;
