//! File formats, bundled fixtures and the command line of the zipfsem
//! toolkit. The numerical work lives in [`zipfsem_core`], re-exported as
//! [`core`].

pub use zipfsem_core as core;

pub mod cli;
mod error;
pub mod fixtures;
pub mod io;
pub mod manifest;

pub use error::{Error, Result};
pub use fixtures::{load_fixture, Fixture, FixtureCatalog};
pub use manifest::RunManifest;
