pub mod classify;
pub mod closed_form;
mod error;
pub mod linalg;
pub mod optimize;
pub mod oracle;
pub mod presets;
pub mod relations;
pub mod state;

#[cfg(test)]
mod testutil;

pub use error::{Error, Result};
