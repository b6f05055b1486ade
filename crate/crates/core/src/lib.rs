pub mod bttb;
pub mod circulant;
pub mod dense;
pub mod dft;
pub mod error;
pub mod experiment;
pub mod krylov;
pub mod matfunc;
pub mod plot;
pub mod spectrum;
pub mod toeplitz;

pub use error::{Error, Result};
