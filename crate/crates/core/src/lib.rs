//! Numerical laboratory for Orlicz spaces and Wiener amalgam spaces of
//! Orlicz type.

pub mod amalgam;
pub mod cli;
pub mod dilation;
pub mod error;
pub mod gridfn;
pub mod orlicz;
pub mod ext;
pub mod quadrature;
pub mod record;
pub mod solve;
pub mod young;
pub mod zak;

pub use error::{Error, Result};
pub use ext::ExtNonneg;
pub use record::{Status, Tri, VerificationRecord};
