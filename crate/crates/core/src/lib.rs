//! Short-time non-Markovian entanglement dynamics of two detuned harmonic
//! oscillators, each coupled to its own high-temperature Ohmic bath and
//! prepared in a twin-beam state.

pub mod analysis;
pub mod cli;
pub mod gaussian;
pub mod kernels;
pub mod numerics;
pub mod params;
pub mod secular;
pub mod separability;
