//! Operator calculus for the intrinsic torsion of almost quaternion-Hermitian
//! structures on `R^{4n}`: exterior algebra, the quaternionic slot operators,
//! the torsion space and its six irreducible components, and classification.

pub mod basis;
pub mod classifier;
pub mod components;
pub mod error;
pub mod exterior;
pub mod io;
pub mod lie;
pub mod mixed;
#[cfg(test)]
mod properties;
pub mod quat;
pub mod report;
pub mod sample;
pub mod tables;
pub mod tensor;
pub mod threeform;
pub mod torsion;
pub mod verify;

pub use error::{Error, Result};
pub use exterior::AltForm;
pub use mixed::{MixedForm, MixedTorsion, MixedTwoFormFamily};
pub use quat::{Axis, QuatStructure};
pub use tensor::DenseTensor;
