pub mod drazin;
pub mod generator;
pub mod io;
pub mod matrix;
pub mod scalar;
pub mod selftest;
pub mod transfer;
