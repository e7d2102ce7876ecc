//! Two-sided quaternion Fourier transform, quaternion offset linear canonical
//! transform and the associated Wigner-Ville distribution on sampled 2D
//! quaternion signals, with numerical checks of their identities.

pub mod error;
mod fft;
pub mod grid;
pub mod io;
pub mod oracle;
pub mod qft;
pub mod qolct;
pub mod quaternion;
pub mod report;
pub mod signals;
pub mod theorems;
pub mod verify;
pub mod wvd;

pub use error::{Error, Result};
pub use grid::{GridGeometry, Reduction, SampledSignal};
pub use qft::{AxisPair, ModuleSpectrum, Spectrum};
pub use qolct::OffsetParams;
pub use quaternion::{PureUnitAxis, Quaternion};
pub use wvd::WvdGrid;
