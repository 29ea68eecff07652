pub mod algebra;
pub mod error;
pub mod params;
pub mod chain;
pub mod topo;
pub mod wigner;
pub mod entropy;
pub mod cli;
