//! Generic-unfolding verification: the nu-velocity of the iterated strand
//! against the nu-velocity of the sheet expressed as an implicit graph
//! `y = g(nu, x, z)`, plus the distance law of the quasi-transverse
//! crossing.
//!
//! At a tangency the strand's y moves like `beta^n` in nu while the graph's
//! y stays bounded, so the margin between the two velocities grows
//! geometrically along the cascade — each tangency unfolds generically, and
//! ever faster.

use crate::chart::{
    ChartDomain, CurveData, ParamPoint, SaddleSpectrum, SurfaceData, NU, TVAR,
};
use crate::error::{ComputeError, ComputeResult};
use crate::inclination::GraphStrand;
use crate::scalar::Real;

/// Per-record unfolding evidence.
#[derive(Clone, Copy, Debug)]
pub struct UnfoldingDiagnostic<T> {
    pub m: usize,
    /// `d y_m / d nu` at the tangency, from the closed-form iterate.
    pub curve_speed: T,
    /// `d g / d nu` of the implicit sheet graph at the same point.
    pub graph_speed: T,
    /// `|curve_speed - graph_speed|`; positive means generic unfolding.
    pub margin: T,
    /// `margin(m) / margin(previous m)` when the previous record exists.
    pub growth_ratio: Option<T>,
}

/// Optional nu-dependence of the spectrum, for the correction term in
/// [`curve_nu_speed_with`].
#[derive(Clone, Copy, Debug)]
pub struct SpectrumDerivative<T> {
    pub d_alpha: T,
    pub d_beta: T,
}

impl<T: Real> Default for SpectrumDerivative<T> {
    fn default() -> Self {
        SpectrumDerivative {
            d_alpha: T::zero(),
            d_beta: T::zero(),
        }
    }
}

/// Slope `dg/dnu` of the implicit graph `y = g(nu, x, z)` of the sheet:
/// solve `f(nu, x, y) = z` for y by Newton from `y_hint`, then implicit
/// differentiation `-f_nu / f_y`, all on exact polynomial partials.
pub fn graph_nu_slope<T: Real>(
    surf: &SurfaceData<T>,
    mu0: T,
    nu: T,
    x: T,
    z: T,
    y_hint: T,
) -> ComputeResult<T> {
    let f = surf.as_nu_xy_poly(mu0);
    let f_y = f.partial(2);
    let f_nu = f.partial(0);
    let y = crate::solve::newton_1d(
        |yy| f.eval(&[nu, x, yy]) - z,
        |yy| f_y.eval(&[nu, x, yy]),
        y_hint,
        crate::defaults::crossing_tol::<T>(),
        60,
        None,
    )?;
    let fy = f_y.eval(&[nu, x, y]);
    let tol = crate::defaults::generic_tol::<T>();
    if fy.abs() <= tol {
        return Err(ComputeError::ImplicitFunctionFailure {
            label: "df/dy",
            value: fy.abs().lossy(),
            tol: tol.lossy(),
        });
    }
    Ok(-f_nu.eval(&[nu, x, y]) / fy)
}

/// `d y_m / d nu` at `(nu, x_hat)` for the m-th iterate of the strand, by
/// the exact chain rule on the closed form
/// `y_m(nu, x) = beta^n y0(nu, alpha^-n x)` with constant spectrum.
pub fn curve_nu_speed<T: Real>(
    spectrum: &SaddleSpectrum<T>,
    domain: &ChartDomain<T>,
    curve: &CurveData<T>,
    mu0: T,
    m: usize,
    nu: T,
    x_hat: T,
) -> ComputeResult<T> {
    let gs = GraphStrand::from_curve(curve, domain)?;
    curve_nu_speed_with(
        spectrum,
        &gs,
        mu0,
        m - curve.m0,
        nu,
        x_hat,
        SpectrumDerivative::default(),
    )
}

/// Full form with nu-dependent spectrum: for
/// `y_m(nu, x) = beta(nu)^n y0(nu, alpha(nu)^-n x)`,
///
/// ```text
/// d y_m/d nu = n beta^(n-1) beta' y0(nu, u)
///            + beta^n [ dy0/dnu (nu, u) - dy0/dt (nu, u) * n alpha^(-n-1) alpha' x ]
/// ```
///
/// with `u = alpha^-n x`. The first term is the correction that appears
/// when the expansion rates move with the parameter.
pub fn curve_nu_speed_with<T: Real>(
    spectrum: &SaddleSpectrum<T>,
    strand: &GraphStrand<T>,
    mu0: T,
    n: usize,
    nu: T,
    x_hat: T,
    derivs: SpectrumDerivative<T>,
) -> ComputeResult<T> {
    let ni = n as i32;
    let alpha = spectrum.alpha();
    let beta = spectrum.beta();
    let u = alpha.powi(-ni) * x_hat;
    let at = [mu0, nu, u];
    let y0 = strand.y.eval(&at);
    let dy0_dnu = strand.y.partial(NU).eval(&at);
    let dy0_dt = strand.y.partial(TVAR).eval(&at);
    let bn = beta.powi(ni);
    let mut speed = bn * dy0_dnu;
    if derivs.d_beta != T::zero() && n > 0 {
        speed = speed + T::of_usize(n) * beta.powi(ni - 1) * derivs.d_beta * y0;
    }
    if derivs.d_alpha != T::zero() && n > 0 {
        let du_dnu = -T::of_usize(n) * alpha.powi(-ni - 1) * derivs.d_alpha * x_hat;
        speed = speed + bn * dy0_dt * du_dnu;
    }
    Ok(speed)
}

/// Verify generic unfolding of one tangency record: both nu-velocities at
/// the tangency point and their margin. The record is expected to come from
/// the same prepared family (shifted and oriented) the speeds are computed
/// on.
pub fn verify_unfolding<T: Real>(
    spectrum: &SaddleSpectrum<T>,
    strand: &GraphStrand<T>,
    surf: &SurfaceData<T>,
    mu0: T,
    record: &crate::cascade::TangencyRecord<T>,
) -> ComputeResult<UnfoldingDiagnostic<T>> {
    let n = record.m - strand.m0;
    let curve_speed = curve_nu_speed_with(
        spectrum,
        strand,
        mu0,
        n,
        record.nu_m,
        record.t_m,
        SpectrumDerivative::default(),
    )?;
    let graph_speed = graph_nu_slope(
        surf,
        mu0,
        record.nu_m,
        record.t_m,
        record.tau.z,
        record.tau.y,
    )?;
    Ok(UnfoldingDiagnostic {
        m: record.m,
        curve_speed,
        graph_speed,
        margin: (curve_speed - graph_speed).abs(),
        growth_ratio: None,
    })
}

/// Unfolding diagnostics for a whole cascade run, with growth ratios filled
/// between consecutive iterates and the margins written back onto the
/// records. Returns the diagnostics and the fitted floor constant
/// `C0 = min margin / beta^n` over the accepted records.
pub fn annotate_cascade<T: Real>(
    spectrum: &SaddleSpectrum<T>,
    domain: &ChartDomain<T>,
    surf: &crate::chart::SurfaceFamily<T>,
    curve: &crate::chart::CurveFamily<T>,
    cfg: &crate::cascade::CascadeConfig<T>,
    outcome: &mut crate::cascade::CascadeOutcome<T>,
) -> ComputeResult<(Vec<UnfoldingDiagnostic<T>>, Option<T>)> {
    // rebuild the prepared family exactly as the cascade ran it
    let (strand, surf_prepared) = crate::cascade::prepare_family(
        domain,
        surf.data(),
        curve.data(),
        outcome.nu_shift,
        outcome.orientation,
    )?;

    let mut diags: Vec<UnfoldingDiagnostic<T>> = Vec::new();
    let mut c0: Option<T> = None;
    for i in 0..outcome.records.len() {
        let mut diag =
            verify_unfolding(spectrum, &strand, &surf_prepared, cfg.mu0, &outcome.records[i])?;
        if i > 0 && outcome.records[i].m == outcome.records[i - 1].m + 1 {
            let prev = diags[i - 1].margin;
            if prev > T::zero() {
                diag.growth_ratio = Some(diag.margin / prev);
            }
        }
        let n = outcome.records[i].m - curve.m0;
        let floor = diag.margin / spectrum.beta().powi(n as i32);
        c0 = Some(c0.map_or(floor, |c: T| c.min(floor)));
        outcome.records[i].unfolding_margin = Some(diag.margin);
        diags.push(diag);
    }
    Ok((diags, c0))
}

/// Distance law of the quasi-transverse crossing: the distance of the
/// crossing point to the stable axis factors as `|nu| d(nu)` with
/// continuous `d`. The factor `dist / |nu|` is fitted by a polynomial on
/// each side of zero separately (on one side it is genuinely polynomial
/// for polynomial germs, so the fit is exact there); returns the averaged
/// `d(0)` and the worst distance residual over the grid. A vanishing
/// `d(0)` means the crossing is tangential in nu, not generic.
pub fn quasi_transverse_distance_law<T: Real>(
    curve: &CurveData<T>,
    mu: T,
    nu_grid: &[T],
    degree: usize,
) -> ComputeResult<(T, T)> {
    let mut pos: (Vec<T>, Vec<T>) = (Vec::new(), Vec::new());
    let mut neg: (Vec<T>, Vec<T>) = (Vec::new(), Vec::new());
    for &nu in nu_grid {
        if nu == T::zero() {
            continue;
        }
        let (_, s) = curve.yz_crossing(ParamPoint::new(mu, nu))?;
        let dist = (s.x * s.x + s.y * s.y).sqrt();
        let side = if nu > T::zero() { &mut pos } else { &mut neg };
        side.0.push(nu);
        side.1.push(dist / nu.abs());
    }
    let mut d0_acc = T::zero();
    let mut d0_count = 0usize;
    let mut residual = T::zero();
    for (xs, qs) in [&pos, &neg] {
        if xs.is_empty() {
            continue;
        }
        let fit = crate::solve::polyfit(xs, qs, degree.min(xs.len() - 1)).ok_or_else(|| {
            ComputeError::BadConfig("distance-law grid too small for the fit degree".into())
        })?;
        for (&nu, &q) in xs.iter().zip(qs) {
            residual = residual.max((nu.abs() * (fit.eval1(nu) - q)).abs());
        }
        d0_acc = d0_acc + fit.coeff([0]);
        d0_count += 1;
    }
    if d0_count == 0 {
        return Err(ComputeError::BadConfig(
            "distance-law grid contains no nonzero nu".into(),
        ));
    }
    let d0 = d0_acc / T::of_usize(d0_count);
    let tol = crate::defaults::generic_tol::<T>();
    if d0.abs() <= tol {
        return Err(ComputeError::ImplicitFunctionFailure {
            label: "d(0)",
            value: d0.abs().lossy(),
            tol: tol.lossy(),
        });
    }
    Ok((d0, residual))
}
