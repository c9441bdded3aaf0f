//! Counterparts of Bessel's inequality and Grüss-type bounds for orthonormal
//! families in finite-dimensional real or complex inner product spaces,
//! together with their weighted quadrature forms.

pub mod bounds;
pub mod error;
pub mod experiments;
pub mod family;
pub mod hypothesis;
pub mod instance;
pub mod integral;
pub mod space;
pub mod tolerance;

pub use error::{Error, Result};
pub use space::{Field, Scalar, Vector};
