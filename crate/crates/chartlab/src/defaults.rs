//! Default tolerances. The quoted magnitudes assume `f64`; each default is
//! floored by a small multiple of machine epsilon so the crate stays
//! meaningful (if much less precise) at `f32`.

use crate::scalar::Real;

/// Residual target for plane crossings and critical points (1e-12 at f64).
pub fn crossing_tol<T: Real>() -> T {
    T::of(1e-12).max(T::epsilon() * T::of(64.0))
}

/// Residual target for implicit solves such as the crossing normalization
/// in nu (1e-10 at f64).
pub fn residual_tol<T: Real>() -> T {
    T::of(1e-10).max(T::epsilon() * T::of(512.0))
}

/// Tolerance on genericity witnesses (1e-6).
pub fn generic_tol<T: Real>() -> T {
    T::of(1e-6).max(T::epsilon().sqrt())
}

/// Contact classification: threshold on the gap value and slope. Tangency
/// solvers drive both to near round-off, so this sits well above that.
pub fn contact_gap_tol<T: Real>() -> T {
    T::of(1e-9).max(T::epsilon() * T::of(4096.0))
}

/// Contact classification: floor on the gap bend below which a contact is
/// reported degenerate.
pub fn contact_bend_floor<T: Real>() -> T {
    T::of(1e-6).max(T::epsilon().sqrt())
}

/// Default chart half-width.
pub fn chart_half_width<T: Real>() -> T {
    T::one()
}
