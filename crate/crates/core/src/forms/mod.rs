//! Exterior calculus with complex-, matrix- and quaternion-valued forms.
//!
//! Forms here are pointwise: a [`KForm`], [`MatForm`] or [`QForm`] holds
//! coefficients at one point together with their derivatives, and a
//! [`Field`] produces them from a point. Exterior derivatives therefore
//! cost one extra derivative order in the seed; fields used with `d∘d`
//! must be evaluated at order 2.

mod chart;
mod dense;
mod field;
mod kform;
mod matform;
mod qform;

pub use chart::Chart;
pub use dense::{dense_mat, dense_mat_add, dense_mat_d, dense_mat_scale, dense_mat_wedge, dense_trace, DenseForm, DenseMat};
pub use field::{Coords, Field, ScalarField};
pub use kform::{Cov, KForm};
pub use matform::MatForm;
pub use qform::QForm;
