//! Differential-geometric kernel: curve jets, curvature, normal curvature
//! of the sheet, the scalar curve-sheet gap and contact-order
//! classification.
//!
//! Contact order is decided on the gap `Delta(t) = z(t) - f(x(t), y(t))`,
//! the height of the strand over the sheet in the graph coordinate. Placing
//! the sheet at `{z = 0}` this way is a legitimate C2 flattening, and
//! quadraticity of the gap is insensitive to the choice of such a chart;
//! the curvature comparison below provides the metric cross-check.

use crate::chart::{CurveData, ParamPoint, SurfaceData};
use crate::error::{ComputeError, ComputeResult};
use crate::scalar::Real;
use crate::vec3::Vec3;

/// Second-order data of a strand at one parameter value: point, velocity,
/// acceleration.
#[derive(Clone, Copy, Debug)]
pub struct CurveJet<T> {
    pub point: Vec3<T>,
    pub first: Vec3<T>,
    pub second: Vec3<T>,
}

/// Value, slope and bend of the curve-sheet gap at one point.
#[derive(Clone, Copy, Debug)]
pub struct GapJet<T> {
    pub value: T,
    pub slope: T,
    pub bend: T,
}

/// Classification of one curve-sheet contact.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ContactClass {
    NoContact,
    Transverse,
    QuadraticTangency,
    DegenerateTangency,
}

impl ContactClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            ContactClass::NoContact => "no-contact",
            ContactClass::Transverse => "transverse",
            ContactClass::QuadraticTangency => "quadratic",
            ContactClass::DegenerateTangency => "degenerate",
        }
    }
}

/// Exact polynomial jet of the strand at `(p, t)`.
pub fn curve_jet<T: Real>(
    curve: &CurveData<T>,
    p: ParamPoint<T>,
    t: T,
) -> ComputeResult<CurveJet<T>> {
    if !curve.contains_t(t) {
        return Err(ComputeError::OutOfStrandDomain { t: t.lossy() });
    }
    let at = [p.mu, p.nu, t];
    let comp = |poly: &crate::chart::CurvePoly<T>| {
        (
            poly.eval(&at),
            poly.partial(crate::chart::TVAR).eval(&at),
            poly.partial(crate::chart::TVAR)
                .partial(crate::chart::TVAR)
                .eval(&at),
        )
    };
    let (x, dx, ddx) = comp(&curve.x);
    let (y, dy, ddy) = comp(&curve.y);
    let (z, dz, ddz) = comp(&curve.z);
    Ok(CurveJet {
        point: Vec3::new(x, y, z),
        first: Vec3::new(dx, dy, dz),
        second: Vec3::new(ddx, ddy, ddz),
    })
}

/// Curvature `|l' x l''| / |l'|^3` of a regular jet.
pub fn curvature<T: Real>(jet: &CurveJet<T>) -> ComputeResult<T> {
    let speed = jet.first.norm();
    if speed == T::zero() {
        return Err(ComputeError::SingularJet);
    }
    Ok(jet.first.cross(jet.second).norm() / (speed * speed * speed))
}

/// Normal curvature of the sheet at `base` along a tangent direction:
/// second fundamental form over first fundamental form, with the normal
/// oriented toward positive z.
pub fn normal_curvature<T: Real>(
    surf: &SurfaceData<T>,
    p: ParamPoint<T>,
    base: (T, T),
    direction: Vec3<T>,
) -> ComputeResult<T> {
    let jet = surf.jet(p, base.0, base.1)?;
    let (fx, fy) = (jet.grad[0], jet.grad[1]);
    let w = (T::one() + fx * fx + fy * fy).sqrt();
    // tangency check: the direction must be orthogonal to the normal
    let normal_component =
        (direction.z - fx * direction.x - fy * direction.y) / w / direction.norm();
    if normal_component.abs() > T::of(1e-6).max(T::epsilon().sqrt()) {
        return Err(ComputeError::NotTangent {
            normal_component: normal_component.lossy(),
        });
    }
    let (dx, dy) = (direction.x, direction.y);
    let ii = (jet.hess[0][0] * dx * dx
        + T::of(2.0) * jet.hess[0][1] * dx * dy
        + jet.hess[1][1] * dy * dy)
        / w;
    let i = direction.dot(direction);
    Ok(ii / i)
}

/// Principal curvatures of the sheet at a point (eigenvalues of the shape
/// operator), smaller magnitude first.
pub fn principal_curvatures<T: Real>(
    surf: &SurfaceData<T>,
    p: ParamPoint<T>,
    base: (T, T),
) -> ComputeResult<(T, T)> {
    let jet = surf.jet(p, base.0, base.1)?;
    let (fx, fy) = (jet.grad[0], jet.grad[1]);
    let w2 = T::one() + fx * fx + fy * fy;
    let w = w2.sqrt();
    // first fundamental form and second fundamental form
    let (e, f, g) = (T::one() + fx * fx, fx * fy, T::one() + fy * fy);
    let (l, m, n) = (
        jet.hess[0][0] / w,
        jet.hess[0][1] / w,
        jet.hess[1][1] / w,
    );
    // kappa^2 (EG-F^2) - kappa (EN + GL - 2FM) + (LN - M^2) = 0
    let a = e * g - f * f;
    let b = e * n + g * l - T::of(2.0) * f * m;
    let c = l * n - m * m;
    let disc = (b * b - T::of(4.0) * a * c).max(T::zero()).sqrt();
    let k1 = (b - disc) / (T::of(2.0) * a);
    let k2 = (b + disc) / (T::of(2.0) * a);
    if k1.abs() <= k2.abs() {
        Ok((k1, k2))
    } else {
        Ok((k2, k1))
    }
}

/// Gap jet `Delta = z(t) - f(x(t), y(t))` with slope and bend by the exact
/// chain rule.
pub fn gap_jet<T: Real>(
    curve: &CurveData<T>,
    surf: &SurfaceData<T>,
    p: ParamPoint<T>,
    t: T,
) -> ComputeResult<GapJet<T>> {
    let cj = curve_jet(curve, p, t)?;
    let sj = surf.jet(p, cj.point.x, cj.point.y)?;
    let (fx, fy) = (sj.grad[0], sj.grad[1]);
    let (fxx, fxy, fyy) = (sj.hess[0][0], sj.hess[0][1], sj.hess[1][1]);
    let (x1, y1, z1) = (cj.first.x, cj.first.y, cj.first.z);
    let (x2, y2, z2) = (cj.second.x, cj.second.y, cj.second.z);
    let value = cj.point.z - sj.z;
    let slope = z1 - fx * x1 - fy * y1;
    let bend = z2
        - (fxx * x1 * x1
            + T::of(2.0) * fxy * x1 * y1
            + fyy * y1 * y1
            + fx * x2
            + fy * y2);
    Ok(GapJet { value, slope, bend })
}

/// Classify a gap jet with the default bend floor.
pub fn contact_class<T: Real>(g: &GapJet<T>, tol: T) -> ContactClass {
    contact_class_with(g, tol, crate::defaults::contact_bend_floor::<T>())
}

/// Classify a gap jet: value at or above `gap_tol` means no contact; a
/// contact with a slope is transverse; a flat contact is quadratic when the
/// bend clears `bend_floor` and degenerate otherwise.
pub fn contact_class_with<T: Real>(g: &GapJet<T>, gap_tol: T, bend_floor: T) -> ContactClass {
    if g.value.abs() >= gap_tol {
        ContactClass::NoContact
    } else if g.slope.abs() >= gap_tol {
        ContactClass::Transverse
    } else if g.bend.abs() >= bend_floor {
        ContactClass::QuadraticTangency
    } else {
        ContactClass::DegenerateTangency
    }
}

/// Sufficient curvature criterion for a quadratic tangency: the curve bends
/// strictly less than the sheet does along the curve's direction. `false`
/// is inconclusive, not a disproof.
pub fn quadratic_by_curvature<T: Real>(curve_kappa: T, surface_normal_kappa: T) -> bool {
    curve_kappa < surface_normal_kappa.abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::{affine_param, Rect, SurfaceData};
    use crate::poly::Poly;

    fn strand(x: Vec<([u8; 3], f64)>, y: Vec<([u8; 3], f64)>, z: Vec<([u8; 3], f64)>) -> CurveData<f64> {
        CurveData {
            x: Poly::from_terms(x),
            y: Poly::from_terms(y),
            z: Poly::from_terms(z),
            m0: 0,
            t_half: 2.0,
            param_half: (0.2, 0.2),
        }
    }

    fn bowl(b: f64, c: f64, d: f64) -> SurfaceData<f64> {
        SurfaceData {
            center_u: Poly::constant(0.5),
            center_v: Poly::constant(0.4),
            coeff_a: affine_param(0.0, 1.0, 0.0),
            coeff_b: Poly::constant(b),
            coeff_c: Poly::constant(c),
            coeff_d: Poly::constant(d),
            higher_order: vec![],
            domain: Rect {
                x_lo: -2.0,
                x_hi: 2.0,
                y_lo: -2.0,
                y_hi: 2.0,
            },
        }
    }

    #[test]
    fn jets_of_simple_strands() {
        let s = strand(
            vec![([0, 0, 1], 1.0)],
            vec![([0, 0, 0], 0.3)],
            vec![([0, 0, 0], 0.5)],
        );
        let j = curve_jet(&s, ParamPoint::origin(), 0.0).unwrap();
        assert_eq!(j.first, Vec3::new(1.0, 0.0, 0.0));
        assert_eq!(j.second, Vec3::new(0.0, 0.0, 0.0));

        let s = strand(
            vec![([0, 0, 1], 1.0)],
            vec![([0, 0, 2], 1.0)],
            vec![],
        );
        let j = curve_jet(&s, ParamPoint::origin(), 1.0).unwrap();
        assert_eq!(j.first, Vec3::new(1.0, 2.0, 0.0));
        assert_eq!(j.second, Vec3::new(0.0, 2.0, 0.0));
    }

    #[test]
    fn curve_jet_matches_finite_differences() {
        let s = strand(
            vec![([0, 0, 1], 1.1), ([1, 0, 0], 0.02)],
            vec![([0, 1, 0], 0.7), ([0, 0, 1], 0.15), ([0, 0, 2], -0.08)],
            vec![([0, 0, 0], 0.4), ([0, 0, 2], 0.12), ([0, 0, 3], 0.05)],
        );
        let p = ParamPoint::new(0.03, -0.02);
        let t = 0.37;
        let j = curve_jet(&s, p, t).unwrap();
        let pt = |tt: f64| s.point(p, tt);
        // first derivatives at step 1e-5, second at 1e-4 (the larger step
        // keeps the cancellation noise of the second difference in check)
        let h = 1e-5;
        let (pm, pp) = (pt(t - h), pt(t + h));
        let fd1 = Vec3::new(
            (pp.x - pm.x) / (2.0 * h),
            (pp.y - pm.y) / (2.0 * h),
            (pp.z - pm.z) / (2.0 * h),
        );
        for (a, b) in [(j.first.x, fd1.x), (j.first.y, fd1.y), (j.first.z, fd1.z)] {
            assert!((a - b).abs() < 1e-8, "{a} vs {b}");
        }
        let h = 1e-4;
        let (pm, pp) = (pt(t - h), pt(t + h));
        let p0 = pt(t);
        let fd2 = Vec3::new(
            (pp.x - 2.0 * p0.x + pm.x) / (h * h),
            (pp.y - 2.0 * p0.y + pm.y) / (h * h),
            (pp.z - 2.0 * p0.z + pm.z) / (h * h),
        );
        for (a, b) in [
            (j.second.x, fd2.x),
            (j.second.y, fd2.y),
            (j.second.z, fd2.z),
        ] {
            assert!((a - b).abs() < 1e-6, "{a} vs {b}");
        }
    }

    #[test]
    fn curvature_examples() {
        // circle of radius 2
        let j: CurveJet<f64> = CurveJet {
            point: Vec3::new(2.0, 0.0, 0.0),
            first: Vec3::new(0.0, 2.0, 0.0),
            second: Vec3::new(-2.0, 0.0, 0.0),
        };
        assert!((curvature(&j).unwrap() - 0.5).abs() < 1e-15);
        // straight line
        let j: CurveJet<f64> = CurveJet {
            point: Vec3::new(0.0, 0.0, 0.0),
            first: Vec3::new(1.0, 0.0, 0.0),
            second: Vec3::new(0.0, 0.0, 0.0),
        };
        assert_eq!(curvature(&j).unwrap(), 0.0);
        // |(1,0,0) x (0,3,4)| = 5
        let j: CurveJet<f64> = CurveJet {
            point: Vec3::new(0.0, 0.0, 0.0),
            first: Vec3::new(1.0, 0.0, 0.0),
            second: Vec3::new(0.0, 3.0, 4.0),
        };
        assert!((curvature(&j).unwrap() - 5.0).abs() < 1e-15);
        // zero first derivative is rejected
        let j: CurveJet<f64> = CurveJet {
            point: Vec3::new(0.0, 0.0, 0.0),
            first: Vec3::new(0.0, 0.0, 0.0),
            second: Vec3::new(0.0, 1.0, 0.0),
        };
        assert!(matches!(curvature(&j), Err(ComputeError::SingularJet)));
    }

    #[test]
    fn curvature_is_reparametrization_invariant() {
        // kappa computed from the jet of l(t) and of l(2t) agree at the
        // same geometric point
        let s = strand(
            vec![([0, 0, 1], 1.0)],
            vec![([0, 0, 2], 0.7), ([0, 0, 3], -0.2)],
            vec![([0, 0, 1], 0.3), ([0, 0, 2], 0.4)],
        );
        let mut s2 = s.clone();
        for poly in [&mut s2.x, &mut s2.y, &mut s2.z] {
            *poly = poly.scale_var(crate::chart::TVAR, 2.0);
        }
        for t in [-0.6, -0.1, 0.25, 0.8] {
            let k1 = curvature(&curve_jet(&s, ParamPoint::origin(), t).unwrap()).unwrap();
            let k2 = curvature(&curve_jet(&s2, ParamPoint::origin(), t / 2.0).unwrap()).unwrap();
            assert!((k1 - k2).abs() < 1e-12, "t={t}: {k1} vs {k2}");
        }
    }

    proptest::proptest! {
        /// Curvature of a strand does not depend on the parametrization
        /// speed.
        #[test]
        fn curvature_reparametrization_invariant(
            y1 in -0.8f64..0.8,
            y2 in -0.8f64..0.8,
            z1 in -0.8f64..0.8,
            z2 in -0.8f64..0.8,
            t in -0.7f64..0.7,
            speed in 0.25f64..4.0,
        ) {
            let s = strand(
                vec![([0, 0, 1], 1.0)],
                vec![([0, 0, 1], y1), ([0, 0, 2], y2)],
                vec![([0, 0, 1], z1), ([0, 0, 2], z2)],
            );
            let mut fast = s.clone();
            for poly in [&mut fast.x, &mut fast.y, &mut fast.z] {
                *poly = poly.scale_var(crate::chart::TVAR, speed);
            }
            fast.t_half = s.t_half / speed;
            let k1 = curvature(&curve_jet(&s, ParamPoint::origin(), t).unwrap()).unwrap();
            let k2 =
                curvature(&curve_jet(&fast, ParamPoint::origin(), t / speed).unwrap()).unwrap();
            proptest::prop_assert!((k1 - k2).abs() < 1e-12 * (1.0 + k1.abs()));
        }
    }

    #[test]
    fn gap_of_iterated_strand_matches_closed_form_composition() {
        // route one: push the strand forward in closed form, wrap it as a
        // plain curve, measure the gap by the pointwise chain rule;
        // route two: compose strand and sheet into one gap polynomial and
        // differentiate the coefficients
        use crate::chart::{SaddleSpectrum, TangencyType};
        let spectrum = SaddleSpectrum::new(4.0, 2.0, 0.5).unwrap();
        let chart = crate::chart::ChartDomain::new(1.0).unwrap();
        let (surf, curve) =
            crate::synth::synthesize_family::<f64>(TangencyType::Elliptic, &spectrum, 5);
        let p = ParamPoint::new(0.01, 0.002);
        let iter =
            crate::inclination::iterate_strand(&spectrum, &chart, curve.data(), p, 6).unwrap();
        let lift = |p1: &Poly<f64, 1>| {
            crate::chart::CurvePoly::from_terms(
                p1.terms().iter().map(|t| ([0, 0, t.exps[0]], t.coeff)).collect(),
            )
        };
        let as_curve = CurveData {
            x: crate::chart::CurvePoly::var(crate::chart::TVAR),
            y: lift(&iter.y),
            z: lift(&iter.z),
            m0: curve.m0,
            t_half: iter.window,
            param_half: curve.param_half,
        };
        let (y_n, z_n) = {
            let gs = crate::inclination::GraphStrand::from_curve(curve.data(), &chart).unwrap();
            gs.iterate_polys(&spectrum, 6)
        };
        let gap_poly = surf.data().gap_poly(
            &crate::chart::CurvePoly::var(crate::chart::TVAR),
            &y_n,
            &z_n,
        );
        let gap_t = gap_poly.partial(crate::chart::TVAR);
        let gap_tt = gap_t.partial(crate::chart::TVAR);
        let t0 = surf.data().taylor_at(p);
        for i in 0..=10 {
            // sample where the strand's (x, y) is inside the sheet domain
            let t = t0.u - 0.2 + 0.4 * i as f64 / 10.0;
            let Ok(direct) = gap_jet(&as_curve, surf.data(), p, t) else {
                continue;
            };
            let at = [p.mu, p.nu, t];
            assert!((direct.value - gap_poly.eval(&at)).abs() < 1e-12);
            assert!((direct.slope - gap_t.eval(&at)).abs() < 1e-12);
            assert!((direct.bend - gap_tt.eval(&at)).abs() < 1e-12);
        }
    }

    #[test]
    fn normal_curvature_at_critical_point() {
        let s = bowl(-1.0, 0.0, -1.0);
        let k = normal_curvature(&s, ParamPoint::origin(), (0.5, 0.4), Vec3::new(1.0, 0.0, 0.0))
            .unwrap();
        assert!((k + 1.0).abs() < 1e-14);
    }

    #[test]
    fn normal_curvature_along_asymptotic_direction_is_zero() {
        let s = bowl(1.0, 0.0, -1.0);
        let dir = Vec3::new(1.0, 1.0, 0.0).normalized();
        let k = normal_curvature(&s, ParamPoint::origin(), (0.5, 0.4), dir).unwrap();
        assert!(k.abs() < 1e-14);
    }

    #[test]
    fn normal_curvature_rejects_non_tangent_direction() {
        let s = bowl(-1.0, 0.0, -1.0);
        let r = normal_curvature(&s, ParamPoint::origin(), (0.5, 0.4), Vec3::new(0.0, 0.0, 1.0));
        assert!(matches!(r, Err(ComputeError::NotTangent { .. })));
    }

    #[test]
    fn normal_curvature_off_critical_matches_section_oracle() {
        // oracle: sample the normal section of the graph in the plane
        // spanned by the direction and the surface normal, fit the second
        // derivative of the section height
        let s = bowl(-1.0, 0.3, -0.8);
        let p = ParamPoint::origin();
        let (x0, y0) = (0.62, 0.47);
        let jet = s.jet(p, x0, y0).unwrap();
        let (fx, fy) = (jet.grad[0], jet.grad[1]);
        let w = (1.0 + fx * fx + fy * fy).sqrt();
        let normal = Vec3::new(-fx / w, -fy / w, 1.0 / w);
        // a tangent direction: lift (1, 0.4) onto the graph
        let dir = Vec3::new(1.0, 0.4, fx + 0.4 * fy).normalized();
        let kappa = normal_curvature(&s, p, (x0, y0), dir).unwrap();

        // height of the surface over the section line, measured along the normal:
        // solve for lambda(s) with P(s) = base + s*dir + lambda*normal on the graph
        let lam = |sv: f64| {
            let mut lo = -0.5;
            let mut hi = 0.5;
            let g = |l: f64| {
                let px = x0 + sv * dir.x + l * normal.x;
                let py = y0 + sv * dir.y + l * normal.y;
                let pz = jet.z + sv * dir.z + l * normal.z;
                pz - s.jet_unchecked(p, px, py).z
            };
            for _ in 0..80 {
                let m = 0.5 * (lo + hi);
                if (g(lo) < 0.0) == (g(m) < 0.0) {
                    lo = m;
                } else {
                    hi = m;
                }
            }
            0.5 * (lo + hi)
        };
        // 5-point second-derivative stencil at h = 1e-3
        let h = 1e-3;
        let second = (-lam(2.0 * h) + 16.0 * lam(h) - 30.0 * lam(0.0) + 16.0 * lam(-h)
            - lam(-2.0 * h))
            / (12.0 * h * h);
        // the signed height of the section over its tangent, measured along
        // the upward normal, bends at exactly the normal curvature
        assert!(
            (second - kappa).abs() < 1e-6,
            "oracle {second} vs kappa {kappa}"
        );
    }

    #[test]
    fn gap_vanishes_identically_for_strand_on_sheet() {
        let s = bowl(-1.0, 0.2, -1.1);
        // strand whose z is the composed height of its own (x, y) path
        let x = Poly::from_terms(vec![([0, 0, 1], 1.0), ([0, 0, 0], 0.5)]);
        let y = Poly::from_terms(vec![([0, 0, 1], 0.3), ([0, 0, 0], 0.4)]);
        let z = s.gap_poly(&x, &y, &Poly::zero()).scale(-1.0);
        let on_sheet = CurveData {
            x,
            y,
            z,
            m0: 0,
            t_half: 0.5,
            param_half: (0.2, 0.2),
        };
        for t in [-0.4, -0.1, 0.0, 0.2, 0.4] {
            let g = gap_jet(&on_sheet, &s, ParamPoint::origin(), t).unwrap();
            assert!(g.value.abs() < 1e-14);
            assert!(g.slope.abs() < 1e-13);
            assert!(g.bend.abs() < 1e-12);
        }
    }

    #[test]
    fn gap_closed_form_on_cap() {
        // strand (t, v, h) over the cap z = mu0 - (x-u)^2 at mu0 = 0.1:
        // Delta = h - mu0 + (t-u)^2, so value h - mu0, slope 0, bend 2 at t=u
        let mut s = bowl(-2.0, 0.0, -2.0);
        s.coeff_a = affine_param(0.0, 1.0, 0.0);
        let strand_flat = CurveData {
            x: Poly::from_terms(vec![([0, 0, 1], 1.0)]),
            y: Poly::constant(0.4),
            z: Poly::constant(0.25),
            m0: 0,
            t_half: 1.9,
            param_half: (0.2, 0.2),
        };
        let g = gap_jet(&strand_flat, &s, ParamPoint::new(0.1, 0.0), 0.5).unwrap();
        assert!((g.value - 0.15).abs() < 1e-15); // 0.25 - 0.1
        assert!(g.slope.abs() < 1e-15);
        assert!((g.bend - 2.0).abs() < 1e-15);
    }

    #[test]
    fn gap_slope_matches_finite_differences() {
        let s = bowl(-1.0, 0.25, -0.9);
        let c = strand(
            vec![([0, 0, 1], 1.0), ([0, 0, 0], 0.5)],
            vec![([0, 0, 1], 0.2), ([0, 0, 0], 0.35), ([0, 0, 2], 0.1)],
            vec![([0, 0, 0], 0.02), ([0, 0, 1], 0.05)],
        );
        let p = ParamPoint::new(0.02, 0.01);
        let t = 0.08;
        let h = 1e-5;
        let g = gap_jet(&c, &s, p, t).unwrap();
        let val = |tt: f64| gap_jet(&c, &s, p, tt).unwrap().value;
        let fd = (val(t + h) - val(t - h)) / (2.0 * h);
        assert!((g.slope - fd).abs() < 1e-8);
    }

    #[test]
    fn contact_classification_table() {
        let tol = 1e-9;
        let g = GapJet {
            value: 0.0,
            slope: 0.0,
            bend: 2.0,
        };
        assert_eq!(contact_class(&g, tol), ContactClass::QuadraticTangency);
        let g = GapJet {
            value: 0.0,
            slope: 1.0,
            bend: 0.0,
        };
        assert_eq!(contact_class(&g, tol), ContactClass::Transverse);
        let g = GapJet {
            value: 1e-12,
            slope: 1e-12,
            bend: 1e-12,
        };
        assert_eq!(contact_class(&g, tol), ContactClass::DegenerateTangency);
        let g = GapJet {
            value: 0.5,
            slope: 0.0,
            bend: 0.0,
        };
        assert_eq!(contact_class(&g, tol), ContactClass::NoContact);
    }

    #[test]
    fn curvature_criterion() {
        assert!(quadratic_by_curvature(0.01, 1.0));
        assert!(!quadratic_by_curvature(1.0, 1.0));
        assert!(quadratic_by_curvature(0.0, -0.5));
    }
}
