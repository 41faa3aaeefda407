pub mod bases;
pub mod dd;
pub mod error;
pub mod hamiltonian;
pub mod meixner;
pub mod quadrature;
pub mod reconstruct;
pub mod run;
pub mod scenario;
pub mod special;
pub mod states;
pub mod verify;

pub use error::{Error, Result};
