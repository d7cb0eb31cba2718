pub mod gf;
pub mod projgeom;
pub mod graphcore;
pub mod constructions;
pub mod switching;
pub mod oracles;
pub mod cli;
