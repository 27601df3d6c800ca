//! Helicoidal and rotational surfaces in Euclidean 3-space.
//!
//! Profiles are parsed from text ([`expr`]) and evaluated as second-order
//! jets. [`surfaces`] turns them into immersions, [`forms`] computes the
//! fundamental forms and curvatures, [`bour`] builds the isometric
//! rotational image and the same-Gauss-map profile, [`lb3`] applies the
//! Laplace-Beltrami operator of the third fundamental form and [`verify`]
//! checks the identities between all of these against independent routes.

// `!(x > 0.0)` is used on purpose so that NaN takes the rejecting branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bour;
pub mod calculus;
pub mod error;
pub mod expr;
pub mod forms;
pub mod grid;
pub mod jet;
pub mod lb3;
pub mod surfaces;
pub mod vector;
pub mod verify;

pub use error::{Error, Result};
pub use expr::{parse, Expression};
pub use grid::ParamGrid;
pub use jet::Jet2;
pub use surfaces::{Domain, HelicoidalSurface, ProfileCurve, RotationalSurface, Surface, SurfaceJet};
pub use vector::Vec3;
