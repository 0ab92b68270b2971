pub mod entangle;
pub mod error;
pub mod grassmann;
pub mod io;
pub mod groups;
pub mod random;
pub mod sdtr;
pub mod supermatrix;
pub mod superstate;
pub mod verify;

pub use error::{Error, Result};
pub use grassmann::{Complex, GrassmannElement, Monomial, Parity};
pub use supermatrix::{SuperFormat, SuperMatrix};
pub use superstate::{GradedOperator, SpaceFormat, SuperBra, SuperKet};
