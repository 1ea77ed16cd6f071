//! Wave-front tracking for scalar conservation laws `u_t + f(u)_x = 0` with
//! convex flux, and a harness that measures the weighted L1 functional of the
//! difference of two solutions together with its decay identities.

pub mod characteristics;
pub mod coupling;
pub mod error;
pub mod flux;
pub mod fronttrack;
pub mod functional;
pub mod profile;
pub mod runner;
pub mod scalar;

pub use coupling::{classify, CoefficientField, FieldPhase, JumpKind, Partition};
pub use error::{Error, Result};
pub use flux::{rankine_hugoniot_speed, secant_speed, FluxModel};
pub use fronttrack::{sample_initial_data, solve_riemann, Front, FrontKind, FrontTrackingRun};
pub use profile::{mu_psi_atom, nonconservative_product, MeasureSet, Profile, VariationFunction};
pub use scalar::{Rational, Scalar};
