//! Distribution catalog and the characteristic-functional moment engine.

mod catalog;
mod engine;

pub use catalog::{CharacteristicFunctional, Covariance, MagnitudeLaw, RandomVectorModel};
pub use engine::{
    mixture_identity_check, norm_moment_mc, norm_moment_via_cf, CfMomentEstimate, McEstimate,
    ResidualReport,
};
