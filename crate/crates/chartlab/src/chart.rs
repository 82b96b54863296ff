//! The chart model: linearized saddle spectrum, the two-parameter stable
//! sheet and unstable strand germs, and the generic-conditions checker.
//!
//! Coordinates follow the chart convention throughout: the saddle sits at
//! the origin of `D(delta) = (-delta, delta)^3`, the local stable manifold
//! is the z-axis, the local unstable plane is `{z = 0}` and the strong
//! unstable direction is the x-axis.
//!
//! Every germ is stored as a polynomial with two layers of types: raw data
//! carriers (`SurfaceData`, `CurveData`, `FamilyDefinition`) that accept
//! anything finite so that defective families can still be loaded and
//! *measured*, and validated wrappers (`SurfaceFamily`, `CurveFamily`, ...)
//! whose constructors reject each violated structural invariant with a
//! distinct error.

use std::ops::Deref;

use crate::error::{ComputeError, ComputeResult, FamilyError, FamilyResult};
use crate::poly::Poly;
use crate::scalar::Real;
use crate::vec3::Vec3;

/// Variable order of all two-parameter coefficient polynomials.
pub const MU: usize = 0;
/// Second parameter variable.
pub const NU: usize = 1;
/// Strand parameter variable in `Poly<T, 3>` curve components.
pub const TVAR: usize = 2;

/// Polynomial in the unfolding parameters `(mu, nu)`.
pub type ParamPoly<T> = Poly<T, 2>;
/// Polynomial in `(mu, nu, t)`.
pub type CurvePoly<T> = Poly<T, 3>;

/// Zero threshold for structural `!= 0` / `== 0` invariants at construction
/// time. Scaled from machine epsilon so the same code is meaningful for f32.
pub fn construction_zero_tol<T: Real>() -> T {
    T::epsilon().sqrt() * T::of(1e-2)
}

/// `c0 + cmu * mu + cnu * nu`.
pub fn affine_param<T: Real>(c0: T, cmu: T, cnu: T) -> ParamPoly<T> {
    Poly::from_terms(vec![([0, 0], c0), ([1, 0], cmu), ([0, 1], cnu)])
}

// ---------------------------------------------------------------------------
// Spectrum and chart domain
// ---------------------------------------------------------------------------

/// Eigenvalues of the linearized map at the saddle: `(x, y, z)` scale by
/// `(alpha, beta, gamma)` per iterate, with `0 < gamma < 1 < beta < alpha`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SaddleSpectrum<T> {
    alpha: T,
    beta: T,
    gamma: T,
}

impl<T: Real> SaddleSpectrum<T> {
    pub fn new(alpha: T, beta: T, gamma: T) -> FamilyResult<Self> {
        let ok = alpha.is_finite()
            && beta.is_finite()
            && gamma.is_finite()
            && T::zero() < gamma
            && gamma < T::one()
            && T::one() < beta
            && beta < alpha;
        if !ok {
            return Err(FamilyError::SpectrumOrder {
                alpha: alpha.lossy(),
                beta: beta.lossy(),
                gamma: gamma.lossy(),
            });
        }
        Ok(SaddleSpectrum { alpha, beta, gamma })
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }
    pub fn beta(&self) -> T {
        self.beta
    }
    pub fn gamma(&self) -> T {
        self.gamma
    }
}

/// The cube `D(delta) = (-delta, delta)^3`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChartDomain<T> {
    delta: T,
}

impl<T: Real> ChartDomain<T> {
    pub fn new(delta: T) -> FamilyResult<Self> {
        if !(delta.is_finite() && delta > T::zero()) {
            return Err(FamilyError::NonpositiveDelta {
                delta: delta.lossy(),
            });
        }
        Ok(ChartDomain { delta })
    }

    pub fn delta(&self) -> T {
        self.delta
    }

    pub fn contains(&self, p: Vec3<T>) -> bool {
        p.x.abs() < self.delta && p.y.abs() < self.delta && p.z.abs() < self.delta
    }
}

/// A point in the two-dimensional parameter plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParamPoint<T> {
    pub mu: T,
    pub nu: T,
}

impl<T: Real> ParamPoint<T> {
    pub fn new(mu: T, nu: T) -> Self {
        ParamPoint { mu, nu }
    }

    pub fn origin() -> Self {
        ParamPoint {
            mu: T::zero(),
            nu: T::zero(),
        }
    }
}

// ---------------------------------------------------------------------------
// Surface germ
// ---------------------------------------------------------------------------

/// Axis-aligned rectangle in the `(x, y)` plane; the domain of a surface
/// germ.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rect<T> {
    pub x_lo: T,
    pub x_hi: T,
    pub y_lo: T,
    pub y_hi: T,
}

impl<T: Real> Rect<T> {
    pub fn contains(&self, x: T, y: T) -> bool {
        x >= self.x_lo && x <= self.x_hi && y >= self.y_lo && y <= self.y_hi
    }

    pub fn is_proper(&self) -> bool {
        self.x_lo.is_finite()
            && self.x_hi.is_finite()
            && self.y_lo.is_finite()
            && self.y_hi.is_finite()
            && self.x_lo < self.x_hi
            && self.y_lo < self.y_hi
    }
}

/// Numeric Taylor data of a surface germ at one parameter point.
#[derive(Clone, Copy, Debug)]
pub struct TaylorAt<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
    pub u: T,
    pub v: T,
}

/// Value, gradient and Hessian of the sheet height at one point.
#[derive(Clone, Copy, Debug)]
pub struct SurfaceJet<T> {
    pub z: T,
    pub grad: [T; 2],
    pub hess: [[T; 2]; 2],
}

/// Raw two-parameter sheet germ
/// `f(x, y) = a + b/2 (x-u)^2 + c (x-u)(y-v) + d/2 (y-v)^2 + tail`,
/// with every Taylor coefficient a polynomial in `(mu, nu)` and a tail of
/// parameter-independent monomials of total degree >= 3 in `(x-u, y-v)`.
///
/// The center `(u, v)` is the exact critical point of the germ for every
/// parameter value (there is no linear-term slot), and `a` is the critical
/// height.
#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceData<T> {
    pub center_u: ParamPoly<T>,
    pub center_v: ParamPoly<T>,
    pub coeff_a: ParamPoly<T>,
    pub coeff_b: ParamPoly<T>,
    pub coeff_c: ParamPoly<T>,
    pub coeff_d: ParamPoly<T>,
    /// `(p, q, coeff)` monomials `coeff * (x-u)^p (y-v)^q`, `p + q >= 3`.
    pub higher_order: Vec<(u8, u8, T)>,
    pub domain: Rect<T>,
}

impl<T: Real> SurfaceData<T> {
    pub fn taylor_at(&self, p: ParamPoint<T>) -> TaylorAt<T> {
        let at = [p.mu, p.nu];
        TaylorAt {
            a: self.coeff_a.eval(&at),
            b: self.coeff_b.eval(&at),
            c: self.coeff_c.eval(&at),
            d: self.coeff_d.eval(&at),
            u: self.center_u.eval(&at),
            v: self.center_v.eval(&at),
        }
    }

    /// `b(0,0) d(0,0) - c(0,0)^2`.
    pub fn det00(&self) -> T {
        let t = self.taylor_at(ParamPoint::origin());
        t.b * t.d - t.c * t.c
    }

    /// `da/dmu` at the origin of the parameter plane.
    pub fn eta0(&self) -> T {
        self.coeff_a.partial(MU).eval(&[T::zero(), T::zero()])
    }

    /// Height and exact derivatives at `(x, y)`, without the domain check.
    pub fn jet_unchecked(&self, p: ParamPoint<T>, x: T, y: T) -> SurfaceJet<T> {
        let t = self.taylor_at(p);
        let half = T::of(0.5);
        let xx = x - t.u;
        let yy = y - t.v;
        let mut z = t.a + half * t.b * xx * xx + t.c * xx * yy + half * t.d * yy * yy;
        let mut fx = t.b * xx + t.c * yy;
        let mut fy = t.c * xx + t.d * yy;
        let mut fxx = t.b;
        let mut fxy = t.c;
        let mut fyy = t.d;
        for &(pe, qe, h) in &self.higher_order {
            let (p_i, q_i) = (pe as i32, q_i32(qe));
            z = z + h * xx.powi(p_i) * yy.powi(q_i);
            if pe >= 1 {
                fx = fx + h * T::of_usize(pe as usize) * xx.powi(p_i - 1) * yy.powi(q_i);
            }
            if qe >= 1 {
                fy = fy + h * T::of_usize(qe as usize) * xx.powi(p_i) * yy.powi(q_i - 1);
            }
            if pe >= 2 {
                fxx = fxx
                    + h * T::of_usize((pe * (pe - 1)) as usize)
                        * xx.powi(p_i - 2)
                        * yy.powi(q_i);
            }
            if pe >= 1 && qe >= 1 {
                fxy = fxy
                    + h * T::of_usize((pe * qe) as usize) * xx.powi(p_i - 1) * yy.powi(q_i - 1);
            }
            if qe >= 2 {
                fyy = fyy
                    + h * T::of_usize((qe * (qe - 1)) as usize)
                        * xx.powi(p_i)
                        * yy.powi(q_i - 2);
            }
        }
        SurfaceJet {
            z,
            grad: [fx, fy],
            hess: [[fxx, fxy], [fxy, fyy]],
        }
    }

    pub fn jet(&self, p: ParamPoint<T>, x: T, y: T) -> ComputeResult<SurfaceJet<T>> {
        if !self.domain.contains(x, y) {
            return Err(ComputeError::OutOfDomain {
                x: x.lossy(),
                y: y.lossy(),
            });
        }
        Ok(self.jet_unchecked(p, x, y))
    }

    /// The sheet height as a polynomial in `(nu, x, y)` at fixed `mu`.
    pub fn as_nu_xy_poly(&self, mu: T) -> Poly<T, 3> {
        // lift a (mu,nu)-coefficient into (nu, x, y) variables at fixed mu
        let lift = |c: &ParamPoly<T>| -> Poly<T, 3> {
            Poly::from_terms(
                c.fix_var(MU, mu)
                    .terms()
                    .iter()
                    .map(|t| ([t.exps[1], 0, 0], t.coeff))
                    .collect(),
            )
        };
        let xx = Poly::<T, 3>::var(1).sub(&lift(&self.center_u));
        let yy = Poly::<T, 3>::var(2).sub(&lift(&self.center_v));
        self.compose_height(&lift(&self.coeff_a), &lift(&self.coeff_b), &lift(&self.coeff_c), &lift(&self.coeff_d), &xx, &yy)
    }

    /// The gap `z(t) - f(x(t), y(t))` as a polynomial in `(mu, nu, t)`,
    /// given polynomial curve components in the same variables. Valid where
    /// the curve's `(x, y)` stays inside the surface domain.
    pub fn gap_poly(
        &self,
        x: &CurvePoly<T>,
        y: &CurvePoly<T>,
        z: &CurvePoly<T>,
    ) -> CurvePoly<T> {
        let xx = x.sub(&self.center_u.lift3());
        let yy = y.sub(&self.center_v.lift3());
        let f = self.compose_height(
            &self.coeff_a.lift3(),
            &self.coeff_b.lift3(),
            &self.coeff_c.lift3(),
            &self.coeff_d.lift3(),
            &xx,
            &yy,
        );
        z.sub(&f)
    }

    fn compose_height(
        &self,
        a: &Poly<T, 3>,
        b: &Poly<T, 3>,
        c: &Poly<T, 3>,
        d: &Poly<T, 3>,
        xx: &Poly<T, 3>,
        yy: &Poly<T, 3>,
    ) -> Poly<T, 3> {
        let half = T::of(0.5);
        let mut f = a
            .add(&b.mul(&xx.mul(xx)).scale(half))
            .add(&c.mul(&xx.mul(yy)))
            .add(&d.mul(&yy.mul(yy)).scale(half));
        for &(pe, qe, h) in &self.higher_order {
            f = f.add(&xx.pow(pe as usize).mul(&yy.pow(qe as usize)).scale(h));
        }
        f
    }

    fn all_finite(&self) -> bool {
        let polys = [
            &self.center_u,
            &self.center_v,
            &self.coeff_a,
            &self.coeff_b,
            &self.coeff_c,
            &self.coeff_d,
        ];
        polys
            .iter()
            .all(|p| p.terms().iter().all(|t| t.coeff.is_finite()))
            && self.higher_order.iter().all(|&(_, _, h)| h.is_finite())
    }
}

fn q_i32(q: u8) -> i32 {
    q as i32
}

/// Validated sheet germ. See [`SurfaceData`] for the representation; the
/// constructor additionally requires, at the parameter origin:
/// nondegeneracy `b d - c^2 != 0`, `b != 0`, generic mu-unfolding
/// `da/dmu != 0`, center off the x-axis `v != 0`, tangency height `a = 0`,
/// a degree >= 3 tail and the center inside the domain rectangle.
#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceFamily<T>(SurfaceData<T>);

impl<T: Real> SurfaceFamily<T> {
    pub fn new(data: SurfaceData<T>) -> FamilyResult<Self> {
        if !data.all_finite() {
            return Err(FamilyError::NonFinite);
        }
        if !data.domain.is_proper() {
            return Err(FamilyError::EmptyDomainBox);
        }
        for &(p, q, _) in &data.higher_order {
            let deg = p as usize + q as usize;
            if deg < 3 {
                return Err(FamilyError::LowOrderTermInTail { degree: deg });
            }
        }
        let tol = construction_zero_tol::<T>();
        let t0 = data.taylor_at(ParamPoint::origin());
        if !data.domain.contains(t0.u, t0.v) {
            return Err(FamilyError::CenterOutsideDomain);
        }
        if t0.a.abs() > tol {
            return Err(FamilyError::OffsetAtBifurcation { a00: t0.a.lossy() });
        }
        if t0.b.abs() <= tol {
            return Err(FamilyError::ZeroXxCoefficient);
        }
        let det = data.det00();
        if det.abs() <= tol {
            return Err(FamilyError::DegenerateHessian { det: det.lossy() });
        }
        if data.eta0().abs() <= tol {
            return Err(FamilyError::ZeroMuVelocity);
        }
        if t0.v.abs() <= tol {
            return Err(FamilyError::CenterOnStrongUnstableAxis);
        }
        Ok(SurfaceFamily(data))
    }

    /// Wrap raw data without invariant checks. Used by the file loader so
    /// that defective families can still be diagnosed by the checker.
    pub fn new_unchecked(data: SurfaceData<T>) -> Self {
        SurfaceFamily(data)
    }

    pub fn data(&self) -> &SurfaceData<T> {
        &self.0
    }

    pub fn into_data(self) -> SurfaceData<T> {
        self.0
    }
}

impl<T> Deref for SurfaceFamily<T> {
    type Target = SurfaceData<T>;
    fn deref(&self) -> &SurfaceData<T> {
        &self.0
    }
}

// ---------------------------------------------------------------------------
// Curve germ
// ---------------------------------------------------------------------------

/// Raw two-parameter strand germ `l(mu, nu, t) = (x, y, z)(mu, nu, t)` with
/// polynomial components, defined for `|t| < t_half` and parameters inside
/// the box `|mu| <= param_half.0`, `|nu| <= param_half.1`.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveData<T> {
    pub x: CurvePoly<T>,
    pub y: CurvePoly<T>,
    pub z: CurvePoly<T>,
    /// Index of the strand in the forward-iterate numbering; iterate `m`
    /// of the cascade corresponds to `n = m - m0` chart applications.
    pub m0: usize,
    pub t_half: T,
    pub param_half: (T, T),
}

impl<T: Real> CurveData<T> {
    pub fn point(&self, p: ParamPoint<T>, t: T) -> Vec3<T> {
        let at = [p.mu, p.nu, t];
        Vec3::new(self.x.eval(&at), self.y.eval(&at), self.z.eval(&at))
    }

    pub fn contains_t(&self, t: T) -> bool {
        t.abs() <= self.t_half
    }

    /// Transverse crossing of the yz-plane: solves `x(t*) = 0` with a
    /// safeguarded Newton on a scanned bracket.
    pub fn yz_crossing(&self, p: ParamPoint<T>) -> ComputeResult<(T, Vec3<T>)> {
        let xt = self.x.collapse_to_last(p.mu, p.nu);
        let roots = crate::poly::roots_in_interval(&xt, -self.t_half, self.t_half);
        let t0 = *roots.first().ok_or(ComputeError::CrossingNotFound)?;
        // polish to the quoted 1e-12 residual
        let dxt = xt.deriv();
        let t_star = crate::solve::newton_1d(
            |t| xt.eval1(t),
            |t| dxt.eval1(t),
            t0,
            crate::defaults::crossing_tol::<T>(),
            40,
            None,
        )?;
        Ok((t_star, self.point(p, t_star)))
    }

    /// Total derivative `d/dnu` of the crossing y-coordinate
    /// `y(mu, nu, t*(mu, nu))`, by implicit differentiation of
    /// `x(mu, nu, t*) = 0`.
    pub fn crossing_y_nu_derivative(&self, p: ParamPoint<T>) -> ComputeResult<T> {
        let (t_star, _) = self.yz_crossing(p)?;
        let at = [p.mu, p.nu, t_star];
        let x_t = self.x.partial(TVAR).eval(&at);
        let x_nu = self.x.partial(NU).eval(&at);
        let y_t = self.y.partial(TVAR).eval(&at);
        let y_nu = self.y.partial(NU).eval(&at);
        if x_t == T::zero() {
            return Err(ComputeError::ImplicitFunctionFailure {
                label: "dx/dt",
                value: 0.0,
                tol: 0.0,
            });
        }
        Ok(y_nu - y_t * x_nu / x_t)
    }

    /// Minimum of `|dx/dt|` over the `(mu, nu, t)` box, by a deterministic
    /// grid scan (the components are low-degree polynomials).
    pub fn min_abs_dx_dt(&self) -> T {
        let xt = self.x.partial(TVAR);
        let (mh, nh) = self.param_half;
        let mut min = T::infinity();
        let steps = 16usize;
        for i in 0..=steps {
            let mu = -mh + T::of(2.0) * mh * T::of_usize(i) / T::of_usize(steps);
            for j in 0..=steps {
                let nu = -nh + T::of(2.0) * nh * T::of_usize(j) / T::of_usize(steps);
                let q = xt.collapse_to_last(mu, nu);
                let (lo, hi) = crate::poly::range_on(&q, -self.t_half, self.t_half);
                // |q| min over the interval: zero if sign change, else nearest bound
                let m = if lo <= T::zero() && hi >= T::zero() {
                    T::zero()
                } else {
                    lo.abs().min(hi.abs())
                };
                min = min.min(m);
            }
        }
        min
    }

    fn all_finite(&self) -> bool {
        [&self.x, &self.y, &self.z]
            .iter()
            .all(|p| p.terms().iter().all(|t| t.coeff.is_finite()))
    }
}

/// Validated strand germ. Construction requires `dx/dt` bounded away from
/// zero on the box, a yz-plane crossing at the parameter origin with
/// `y = 0`, `z > 0`, and a nonzero nu-velocity of the crossing.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveFamily<T>(CurveData<T>);

impl<T: Real> CurveFamily<T> {
    pub fn new(data: CurveData<T>) -> FamilyResult<Self> {
        if !data.all_finite()
            || !data.t_half.is_finite()
            || !data.param_half.0.is_finite()
            || !data.param_half.1.is_finite()
        {
            return Err(FamilyError::NonFinite);
        }
        if data.t_half <= T::zero()
            || data.param_half.0 <= T::zero()
            || data.param_half.1 <= T::zero()
        {
            return Err(FamilyError::EmptyDomainBox);
        }
        let tol = construction_zero_tol::<T>();
        let min_dx = data.min_abs_dx_dt();
        if min_dx <= tol {
            return Err(FamilyError::TangentialStrand {
                min_abs: min_dx.lossy(),
            });
        }
        let (_, s) = data
            .yz_crossing(ParamPoint::origin())
            .map_err(|_| FamilyError::NoPlaneCrossing)?;
        if s.z <= T::zero() {
            return Err(FamilyError::NonpositiveCrossingHeight { z: s.z.lossy() });
        }
        if s.y.abs() > tol {
            return Err(FamilyError::CrossingOffStableAxis { y: s.y.lossy() });
        }
        let dy = data
            .crossing_y_nu_derivative(ParamPoint::origin())
            .map_err(|_| FamilyError::NoPlaneCrossing)?;
        if dy.abs() <= tol {
            return Err(FamilyError::ZeroNuVelocity);
        }
        Ok(CurveFamily(data))
    }

    pub fn new_unchecked(data: CurveData<T>) -> Self {
        CurveFamily(data)
    }

    pub fn data(&self) -> &CurveData<T> {
        &self.0
    }

    pub fn into_data(self) -> CurveData<T> {
        self.0
    }
}

impl<T> Deref for CurveFamily<T> {
    type Target = CurveData<T>;
    fn deref(&self) -> &CurveData<T> {
        &self.0
    }
}

// ---------------------------------------------------------------------------
// Tangency type and surface operations
// ---------------------------------------------------------------------------

/// Sign class of the quadratic form at the tangency center.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TangencyType {
    /// `b d - c^2 > 0`: cap- or bowl-like sheet.
    Elliptic,
    /// `b d - c^2 < 0`: saddle-like sheet.
    Hyperbolic,
}

impl TangencyType {
    pub fn as_str(&self) -> &'static str {
        match self {
            TangencyType::Elliptic => "elliptic",
            TangencyType::Hyperbolic => "hyperbolic",
        }
    }
}

/// Height, gradient and Hessian of the sheet at `(x, y)`; errors outside the
/// domain rectangle.
pub fn evaluate_surface<T: Real>(
    surf: &SurfaceData<T>,
    p: ParamPoint<T>,
    x: T,
    y: T,
) -> ComputeResult<SurfaceJet<T>> {
    surf.jet(p, x, y)
}

/// Critical point of the sheet at parameters `p`: Newton on the gradient
/// seeded at the stored center. With the Taylor representation the stored
/// center is already critical, so this converges immediately; it exists as
/// an independent check for data read from files.
pub fn critical_point<T: Real>(
    surf: &SurfaceData<T>,
    p: ParamPoint<T>,
) -> ComputeResult<(T, T)> {
    let t = surf.taylor_at(p);
    let sys = |q: [T; 2]| {
        let jet = surf.jet_unchecked(p, q[0], q[1]);
        (jet.grad, jet.hess)
    };
    let sol = crate::solve::newton_2d(sys, [t.u, t.v], crate::defaults::crossing_tol::<T>(), 50)?;
    Ok((sol[0], sol[1]))
}

/// Elliptic/hyperbolic classification by the sign of `b d - c^2` at the
/// parameter origin.
pub fn classify<T: Real>(surf: &SurfaceData<T>) -> ComputeResult<TangencyType> {
    classify_with(surf, construction_zero_tol::<T>())
}

pub fn classify_with<T: Real>(surf: &SurfaceData<T>, tol: T) -> ComputeResult<TangencyType> {
    let det = surf.det00();
    if det.abs() <= tol {
        return Err(ComputeError::DegenerateQuadraticForm {
            det: det.lossy(),
            tol: tol.lossy(),
        });
    }
    Ok(if det > T::zero() {
        TangencyType::Elliptic
    } else {
        TangencyType::Hyperbolic
    })
}

// ---------------------------------------------------------------------------
// Family definition (raw aggregate) and the generic-conditions checker
// ---------------------------------------------------------------------------

/// Raw aggregate of everything a family file carries. Nothing here is
/// validated beyond finiteness at load time, so the checker can measure
/// defective families instead of refusing them.
#[derive(Clone, Debug, PartialEq)]
pub struct FamilyDefinition<T> {
    pub alpha: T,
    pub beta: T,
    pub gamma: T,
    pub delta: T,
    pub surface: SurfaceData<T>,
    pub curve: CurveData<T>,
}

/// Validated bundle produced by [`FamilyDefinition::validate`].
#[derive(Clone, Debug)]
pub struct ValidatedFamily<T> {
    pub spectrum: SaddleSpectrum<T>,
    pub domain: ChartDomain<T>,
    pub surface: SurfaceFamily<T>,
    pub curve: CurveFamily<T>,
}

impl<T: Real> FamilyDefinition<T> {
    pub fn validate(&self) -> FamilyResult<ValidatedFamily<T>> {
        Ok(ValidatedFamily {
            spectrum: SaddleSpectrum::new(self.alpha, self.beta, self.gamma)?,
            domain: ChartDomain::new(self.delta)?,
            surface: SurfaceFamily::new(self.surface.clone())?,
            curve: CurveFamily::new(self.curve.clone())?,
        })
    }
}

/// Which of the four generic conditions an entry belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Condition {
    C1,
    C2,
    C3,
    C4,
}

impl Condition {
    pub fn as_str(&self) -> &'static str {
        match self {
            Condition::C1 => "C1",
            Condition::C2 => "C2",
            Condition::C3 => "C3",
            Condition::C4 => "C4",
        }
    }
}

/// One measured witness: the scalar that must clear the tolerance (or, for
/// the eigenvalue ordering, stay positive).
#[derive(Clone, Copy, Debug)]
pub struct ConditionEntry<T> {
    pub condition: Condition,
    pub label: &'static str,
    pub witness: T,
    pub tol: T,
    pub pass: bool,
}

/// Aggregated evidence for the generic conditions.
#[derive(Clone, Debug)]
pub struct ConditionReport<T> {
    pub entries: Vec<ConditionEntry<T>>,
}

impl<T: Real> ConditionReport<T> {
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }
}

/// Measure the generic conditions on a (possibly defective) family:
/// the eigenvalue ordering, the mu-unfolding speed of the tangency, the
/// nu-unfolding speed of the crossing, and the three additional witnesses
/// (`v0`, `dx/dt` on the box, `b(0,0)`). Failures are reported, never
/// thrown.
pub fn check_generic_conditions<T: Real>(
    def: &FamilyDefinition<T>,
    tol: T,
) -> ConditionReport<T> {
    let mut entries = Vec::new();

    // C1: 0 < gamma < 1 < beta < alpha; the witness is the smallest margin.
    let order_margin = def
        .gamma
        .min(T::one() - def.gamma)
        .min(def.beta - T::one())
        .min(def.alpha - def.beta);
    entries.push(ConditionEntry {
        condition: Condition::C1,
        label: "spectrum-order",
        witness: order_margin,
        tol: T::zero(),
        pass: order_margin > T::zero() && order_margin.is_finite(),
    });

    // C2: da/dmu at the origin.
    let eta0 = def.surface.eta0();
    entries.push(ConditionEntry {
        condition: Condition::C2,
        label: "eta0",
        witness: eta0,
        tol,
        pass: eta0.abs() > tol,
    });

    // C3: crossing nu-velocity.
    let dy = def
        .curve
        .crossing_y_nu_derivative(ParamPoint::origin())
        .unwrap_or(T::nan());
    entries.push(ConditionEntry {
        condition: Condition::C3,
        label: "dy-dnu",
        witness: dy,
        tol,
        pass: dy.is_finite() && dy.abs() > tol,
    });

    // C4: v0, dx/dt on the box, b(0,0).
    let t0 = def.surface.taylor_at(ParamPoint::origin());
    entries.push(ConditionEntry {
        condition: Condition::C4,
        label: "v0",
        witness: t0.v,
        tol,
        pass: t0.v.abs() > tol,
    });
    let min_dx = def.curve.min_abs_dx_dt();
    entries.push(ConditionEntry {
        condition: Condition::C4,
        label: "dx-dt",
        witness: min_dx,
        tol,
        pass: min_dx > tol,
    });
    entries.push(ConditionEntry {
        condition: Condition::C4,
        label: "b00",
        witness: t0.b,
        tol,
        pass: t0.b.abs() > tol,
    });

    ConditionReport { entries }
}
