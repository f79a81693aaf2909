pub mod arith;
pub mod basis;
pub mod cli;
pub mod cyclo;
pub mod error;
pub mod eta;
pub mod lift;
pub mod product;
pub mod series;
pub mod weyl;

pub use cyclo::CycNum;
pub use error::{Error, Result};
pub use series::QSeries;
