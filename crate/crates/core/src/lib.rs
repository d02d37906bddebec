pub mod asymptotic;
pub mod cli;
pub mod error;
pub mod facon;
pub mod groebner;
pub mod parser;
pub mod poly;
pub mod stratify;
pub mod tube;
