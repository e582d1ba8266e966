//! Geometry and dynamics of the Hunter–Saxton equation, its μ-variant and
//! their two-component extensions, viewed as geodesic equations on the
//! semidirect product of circle diffeomorphisms with periodic functions.
//!
//! Fields are sampled on a uniform periodic grid and handled spectrally
//! ([`field`]); group operations, Christoffel maps and metrics, curvature and
//! time evolution build on top of that. [`verification`] bundles the
//! acceptance criteria.

pub mod christoffel;
pub mod curvature;
pub mod dynamics;
pub mod error;
pub mod field;
pub mod group;
pub mod quadrature;
pub mod random;
pub mod verification;

pub use christoffel::{EquationKind, MetricConvention};
pub use error::{Error, Result};
pub use field::{InertiaOperatorKind, PeriodicField};
pub use group::{CircleDiffeo, GroupElement, TangentPair};
