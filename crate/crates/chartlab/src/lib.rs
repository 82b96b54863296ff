//! chartlab: a numerical laboratory for the birth of homoclinic tangency
//! cascades inside a linearized saddle chart.
//!
//! The model lives in the cube `D(delta)` around a saddle whose map is
//! exactly linear, `(x, y, z) -> (alpha x, beta y, gamma z)` with
//! `0 < gamma < 1 < beta < alpha`. Two polynomial germs meet the chart: a
//! two-parameter stable sheet `z = f_{mu,nu}(x, y)` carrying a nondegenerate
//! tangency with the unstable plane, and a two-parameter unstable strand
//! entering through a quasi-transverse crossing of the stable axis. Pushing
//! the strand forward through the linear map flattens it onto the strong
//! unstable axis; sweeping `nu` then produces, for each iterate count, a
//! quadratic tangency between strand and sheet. The crate measures every
//! step of that mechanism: C2 convergence rates of the iterated strand,
//! contact classification of the solved tangencies, and the generic
//! unfolding speed of each one.
//!
//! All germ data is polynomial and all derivatives are exact coefficient
//! arithmetic; the only approximations are root bracketing and Newton
//! polishing, both driven to machine precision.

pub mod cascade;
pub mod chart;
pub mod defaults;
pub mod error;
pub mod family_file;
pub mod geometry;
pub mod inclination;
pub mod poly;
pub mod scalar;
pub mod solve;
pub mod synth;
pub mod unfolding;
pub mod vec3;

pub use error::{ComputeError, FamilyError};
pub use scalar::Real;

// Concrete f64 aliases for the working precision used by the CLI and the
// test suites.
pub type SaddleSpectrum64 = chart::SaddleSpectrum<f64>;
pub type ChartDomain64 = chart::ChartDomain<f64>;
pub type ParamPoint64 = chart::ParamPoint<f64>;
pub type SurfaceFamily64 = chart::SurfaceFamily<f64>;
pub type CurveFamily64 = chart::CurveFamily<f64>;
pub type FamilyDefinition64 = chart::FamilyDefinition<f64>;
pub type ConditionReport64 = chart::ConditionReport<f64>;
pub type TangencyRecord64 = cascade::TangencyRecord<f64>;
pub type CascadeConfig64 = cascade::CascadeConfig<f64>;
pub type UnfoldingDiagnostic64 = unfolding::UnfoldingDiagnostic<f64>;
