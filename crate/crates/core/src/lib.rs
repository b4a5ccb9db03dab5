//! Workbench for exclusivity-graph tasks.
//!
//! * [`graph`]: exclusivity graphs, independence number, maximal cliques.
//! * [`bounds`]: classical (α), quantum (ϑ) and postquantum (α*) bounds.
//! * [`realization`]: exact verification of a state plus projector family.
//! * [`photonics`]: polarization ⊗ OAM ququart optics.
//! * [`expsim`]: Monte Carlo photon counting, noise and ε certification.

pub mod bounds;
pub mod error;
pub mod expsim;
pub mod fixtures;
pub mod graph;
pub mod lp;
pub mod photonics;
pub mod rational;
pub mod realization;
pub mod report;
pub mod sdp;

pub use error::{Error, ParseError, Result};
pub use graph::{ExclusivityGraph, IndependentSet, Clique};
pub use rational::{ComplexRational, Rational};
