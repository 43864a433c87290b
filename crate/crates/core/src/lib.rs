//! Zero-crossing waveform interferometry.
//!
//! The crate computes zero-crossing interferograms of sampled random
//! waveforms (crosslation, autoference and their variants), the closed-form
//! reference functions they converge to, resolution gains and Cramér-Rao
//! bounds, a streaming tapped-delay-line crosslator, and a Monte-Carlo
//! time-delay estimation harness.
//!
//! Module map:
//!
//! - [`signal_gen`]: waveform synthesis, analytic (quadrature) pairs,
//!   fractional delay and noise corruption.
//! - [`zero_crossing`]: sub-sample zero-crossing detection with direction
//!   and local slew rate.
//! - [`crosslation`]: empirical interferograms and the complex crosslation.
//! - [`analytic_ref`]: closed forms, quadrature, special functions,
//!   resolution constants, degrees of freedom and Cramér-Rao bounds.
//! - [`streaming`]: event-driven crosslator emulation in elapsed time.
//! - [`estimation`]: time-delay estimation experiments.
//! - [`io`]: waveform files and CSV writers.
//!
//! Data-parallel loops run on rayon when the `parallel` feature is enabled
//! (the default) and fall back to sequential iteration otherwise. Every
//! reduction is performed in a fixed order, so results are bit-identical
//! either way.

pub mod analytic_ref;
pub mod crosslation;
mod dsp;
pub mod error;
pub mod estimation;
pub mod exec;
pub mod io;
pub mod seed;
pub mod signal_gen;
pub mod streaming;
pub mod zero_crossing;

pub use crate::crosslation::{ComplexCrosslation, Interferogram, LagRange, Timing, Variant};
pub use crate::error::{Error, Result};
pub use crate::exec::Execution;
pub use crate::signal_gen::{AnalyticPair, SpectrumModel, Waveform};
pub use crate::zero_crossing::{CrossingEvent, CrossingSet, Direction};

pub use crate::dsp::{band_filter, hilbert};
