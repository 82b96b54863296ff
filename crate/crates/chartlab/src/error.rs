//! Error types. Construction errors are one variant per violated invariant
//! so callers (and tests) can tell rejections apart; runtime errors carry the
//! measured witness that triggered them.

use std::fmt::Debug;

use thiserror::Error;

/// Rejection from a validating constructor. Each variant corresponds to
/// exactly one structural invariant of the chart model.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FamilyError {
    #[error("eigenvalues must satisfy 0 < gamma < 1 < beta < alpha, got alpha={alpha}, beta={beta}, gamma={gamma}")]
    SpectrumOrder { alpha: f64, beta: f64, gamma: f64 },
    #[error("chart half-width must be positive, got delta={delta}")]
    NonpositiveDelta { delta: f64 },
    #[error("quadratic form is degenerate at the origin: b*d - c^2 = {det}")]
    DegenerateHessian { det: f64 },
    #[error("x-curvature coefficient b(0,0) must be nonzero")]
    ZeroXxCoefficient,
    #[error("constant term must vanish at the bifurcation point, got a(0,0)={a00}")]
    OffsetAtBifurcation { a00: f64 },
    #[error("tangency center must unfold in mu: da/dmu(0,0) = 0")]
    ZeroMuVelocity,
    #[error("tangency center lies on the strong unstable axis: v(0,0) = 0")]
    CenterOnStrongUnstableAxis,
    #[error("surface center (u0,v0) outside its stated domain rectangle")]
    CenterOutsideDomain,
    #[error("strand is tangential to the yz-plane somewhere on the box: min |dx/dt| = {min_abs}")]
    TangentialStrand { min_abs: f64 },
    #[error("strand never crosses the yz-plane on its domain")]
    NoPlaneCrossing,
    #[error("strand crossing must lie in the upper half space, got z={z}")]
    NonpositiveCrossingHeight { z: f64 },
    #[error("strand crossing is off the stable axis at the bifurcation point: y={y}")]
    CrossingOffStableAxis { y: f64 },
    #[error("strand crossing does not unfold in nu: dy/dnu = 0 at the crossing")]
    ZeroNuVelocity,
    #[error("higher-order tail contains a term of total degree {degree} < 3")]
    LowOrderTermInTail { degree: usize },
    #[error("domain box is empty or degenerate")]
    EmptyDomainBox,
    #[error("non-finite value in family data")]
    NonFinite,
}

/// Runtime failure of a solver or an evaluation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ComputeError {
    #[error("point ({x}, {y}) outside the surface domain")]
    OutOfDomain { x: f64, y: f64 },
    #[error("parameter t={t} outside the strand domain")]
    OutOfStrandDomain { t: f64 },
    #[error("no sign change of x(t) on the strand domain")]
    CrossingNotFound,
    #[error("Newton iteration failed to converge (residual {residual} after {iterations} steps)")]
    NewtonDiverged { residual: f64, iterations: usize },
    #[error("implicit-function hypothesis fails: |{label}| = {value} below tolerance {tol}")]
    ImplicitFunctionFailure {
        label: &'static str,
        value: f64,
        tol: f64,
    },
    #[error("curve jet is singular (zero first derivative)")]
    SingularJet,
    #[error("direction is not tangent to the surface (normal component {normal_component})")]
    NotTangent { normal_component: f64 },
    #[error("Hessian determinant {det} below tolerance {tol}; type undefined")]
    DegenerateQuadraticForm { det: f64, tol: f64 },
    #[error("strip is empty at the requested parameters (wrong sign of mu0?)")]
    EmptyStrip,
    #[error("no separation sign change within nu_bar; separation below={below}, above={above}")]
    BracketFailure { below: f64, above: f64 },
    #[error("no strand/sheet contact transition inside the bracket")]
    NoContactTransition,
    #[error("iterated strand leaves the chart in y or z; largest admissible n = {max_admissible}")]
    DomainOverflow { max_admissible: usize },
    #[error("graph normalization requires x(t) affine in t with parameter-independent slope")]
    NonAffineParametrization,
    #[error("contact is degenerate at the solved point (|gap bend| = {bend})")]
    DegenerateContact { bend: f64 },
    #[error("reparametrization fit residual {residual} exceeds tolerance {tol}")]
    FitResidual { residual: f64, tol: f64 },
    #[error("mu0 sign {got} does not match the required sign {required} for this tangency type")]
    WrongMuSign { required: i8, got: i8 },
    #[error("invalid configuration: {0}")]
    BadConfig(String),
}

pub type FamilyResult<V> = Result<V, FamilyError>;
pub type ComputeResult<V> = Result<V, ComputeError>;
