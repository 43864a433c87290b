//! Closed-form references and numerical oracles.

pub mod families;
pub mod quadrature;
pub mod resolution;
pub mod special;

pub use families::{
    bandlimited_envelope_direct, bandlimited_family, crosslation_gaussian, gaussian_dr, gaussian_r,
    hilbert_exp, hilbert_sgn_exp, lorentzian_family, slepian_mean_and_variance, structure_global_gaussian,
    structure_local_gaussian, BandLimitedValues, LorentzianValues, SlepianMoments,
};
pub use resolution::{
    butterworth_gain, cr_bounds, degrees_of_freedom, degrees_of_freedom_from_autocorrelation, lorentzian_gain,
    lorentzian_gamma_star, spectral_moment, woodward_by_quadrature, woodward_constants, CrReport, Density,
    DofReport, Method, Regime, ResolutionReport,
};
