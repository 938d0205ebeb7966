pub mod error;
pub mod padic;
pub mod series;
pub mod groups;
pub mod dist;
pub mod measure;
pub mod iwmod;
pub mod euler;
pub mod codec;
pub mod cli;

pub use error::{Error, Result};
