pub mod charfn;
pub mod config;
pub mod error;
pub mod inversion;
pub mod montecarlo;
pub mod numeric;
pub mod parallel;
pub mod quadrature;
pub mod rate;
pub mod sinr_dist;
pub mod special;

pub use config::SystemConfig;
pub use error::{Error, Result};
pub use special::ComplexValue;
