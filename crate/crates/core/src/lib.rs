pub mod cli;
pub mod error;
pub mod expansion;
pub mod families;
pub mod hermite;
pub mod io;
pub mod matpoly;
pub mod operators;
pub mod structmat;

pub type CMat = nalgebra::DMatrix<num_complex::Complex64>;

pub use error::{Error, Result};
