//! Discrete Dirichlet polyharmonic operators, their heat kernels and
//! exponentially twisted semigroups, and principal symbol checks.

mod assemble;
mod spectral;
mod symbol;
mod twisted;

pub use assemble::{assemble_polyharmonic, polyharmonic_stencil, PolyharmonicOperator};
pub use spectral::{spectral_decompose, SpectralHeatKernel, SpectrumSnapshot, EIGEN_BUDGET};
pub use symbol::{strong_convexity_check, ConvexityCheck, EllipticFormSpec, SymbolSpec};
pub use twisted::{
    fit_form_constant, fit_growth_rate, linear_ramp, operator_norm, twist_scan, twisted_form,
    twisted_semigroup_norm, FormSample, TwistSample, TWIST_GUARD,
};
