// index loops mirror the component formulas; `!(x > 0.0)` is meant to catch NaN
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord, clippy::too_many_arguments)]

pub mod abel_curve;
pub mod abel_threefold;
pub mod bundle;
pub mod chern_simons;
pub mod config;
pub mod error;
pub mod forms;
pub mod group;
pub mod integrate;
pub mod jet;
pub mod quaternion;
pub mod report;
pub mod samples;
pub mod suites;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/overview.md")]
    mod overview {}
    #[doc = include_str!("../../../book/src/quaternions.md")]
    mod quaternions {}
    #[doc = include_str!("../../../book/src/forms.md")]
    mod forms {}
    #[doc = include_str!("../../../book/src/group.md")]
    mod group {}
    #[doc = include_str!("../../../book/src/bundle.md")]
    mod bundle {}
    #[doc = include_str!("../../../book/src/chern_simons.md")]
    mod chern_simons {}
    #[doc = include_str!("../../../book/src/tubular.md")]
    mod tubular {}
    #[doc = include_str!("../../../book/src/abel_curve.md")]
    mod abel_curve {}
    #[doc = include_str!("../../../book/src/abel_threefold.md")]
    mod abel_threefold {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
