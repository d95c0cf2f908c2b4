//! Spectral theory of Sturm–Liouville problems on time scales built from
//! finitely many segments and isolated points.

pub mod asymptotics;
pub mod error;
pub mod inverse;
pub mod io;
pub mod ode;
pub mod poly;
pub mod propagation;
pub mod quadrature;
pub mod rational;
pub mod spectral;
pub mod timescale;

pub use asymptotics::{BranchLabel, Predictor};
pub use error::{Error, Result};
pub use inverse::{DataKind, Recovery, RecoveryTrace, SpectralInput};
pub use poly::PolyRat;
pub use propagation::{Backend, CharacteristicPair, EntireEval, JumpMatrix, SolutionState};
pub use rational::Rational;
pub use spectral::{RootSet, Spectrum, WeightSet, WeylFunction};
pub use timescale::{PointKind, Potential, SegmentProfile, TimeScale};
