//! Spin triple factors: the triple product, tripotents, the predual, TCAR
//! bases and spin grids, Lorentz representations and the geometry of the
//! unit ball.

pub mod basis;
pub mod checks;
pub mod config;
pub mod dual;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod lorentz;
pub mod rng;
pub mod triple;
pub mod tripotent;
pub mod vector;

pub use config::{Config, Tolerance};
pub use error::{Result, SpinError};
pub use linalg::{ConjugateLinearOperator, LinearOperator};
pub use vector::SpinVector;
