pub mod arith;
pub mod classify;
pub mod cli;
pub mod error;
pub mod gf2;
pub mod graph;
pub mod groups;
pub mod maps;
pub mod perms;

pub use error::{Error, GeneratingSetError, Result};
pub use groups::{FiniteGroup, GroupAutomorphism, GroupElement, GroupKind};
