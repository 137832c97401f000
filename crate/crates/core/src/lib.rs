pub mod anneal;
pub mod cli;
pub mod enumerate;
pub mod error;
pub mod fit;
pub mod format;
pub mod generate;
pub mod landscape;
pub mod model;
pub mod rng;
pub mod twosat;
