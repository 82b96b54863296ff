//! Reparametrization of the parameter plane and the exact pushforward of
//! strands through the linear chart map, with C2 convergence diagnostics.
//!
//! The pushforward is an identity of the linear chart: in graph form over
//! x, applying the map n times sends `(t, y(t), z(t))` to
//! `(t, beta^n y(alpha^-n t), gamma^n z(alpha^-n t))`. Iterated strands are
//! therefore stored in closed form — the argument scaled, the outputs
//! scaled — and no orbit round-off ever accumulates.

use crate::chart::{
    ChartDomain, CurveData, CurveFamily, CurvePoly, ParamPoint, SaddleSpectrum,
    SurfaceFamily, NU, TVAR,
};
use crate::error::{ComputeError, ComputeResult};
use crate::poly::{sup_abs_on, Poly};
use crate::scalar::Real;
use crate::vec3::Vec3;

/// A strand in graph form over x at symbolic parameters: `y` and `z` are
/// polynomials in `(mu, nu, s)` where `s` is the x-coordinate itself.
#[derive(Clone, Debug)]
pub struct GraphStrand<T> {
    pub y: CurvePoly<T>,
    pub z: CurvePoly<T>,
    /// Half-width of the graph window at n = 0.
    pub half_width: T,
    pub delta: T,
    pub m0: usize,
}

impl<T: Real> GraphStrand<T> {
    /// Normalize a strand to graph form over x. Requires the x-component to
    /// be affine in t with a parameter-independent slope, which makes the
    /// substitution `t = (s - x0(mu, nu)) / x1` exact polynomial algebra.
    pub fn from_curve(curve: &CurveData<T>, domain: &ChartDomain<T>) -> ComputeResult<Self> {
        if curve.x.degree_in(TVAR) != 1 {
            return Err(ComputeError::NonAffineParametrization);
        }
        let mut x1 = T::zero();
        let mut offset_terms = Vec::new();
        for t in curve.x.terms() {
            if t.exps[TVAR] == 1 {
                if t.exps[0] != 0 || t.exps[1] != 0 {
                    return Err(ComputeError::NonAffineParametrization);
                }
                x1 = t.coeff;
            } else {
                offset_terms.push((t.exps, t.coeff));
            }
        }
        if x1 == T::zero() {
            return Err(ComputeError::NonAffineParametrization);
        }
        let x0 = CurvePoly::from_terms(offset_terms);
        // t = (s - x0) / x1
        let repl = CurvePoly::var(TVAR).sub(&x0).scale(T::one() / x1);
        let y = curve.y.substitute(TVAR, &repl);
        let z = curve.z.substitute(TVAR, &repl);
        // offset shifts the covered x-window; stay conservative over the box
        let (mh, nh) = curve.param_half;
        let sup_x0 = x0
            .terms()
            .iter()
            .map(|t| t.coeff.abs() * mh.powi(t.exps[0] as i32) * nh.powi(t.exps[1] as i32))
            .sum();
        let reach = x1.abs() * curve.t_half - sup_x0;
        let half_width = domain.delta().min(reach);
        if half_width <= T::zero() {
            return Err(ComputeError::BadConfig(
                "strand too short to cover a graph window over x".into(),
            ));
        }
        Ok(GraphStrand {
            y,
            z,
            half_width,
            delta: domain.delta(),
            m0: curve.m0,
        })
    }

    /// Apply the nu-shift `nu -> nu + shift` (constant reparametrization at
    /// fixed mu).
    pub fn shift_nu(&self, shift: T) -> Self {
        let repl = CurvePoly::var(NU).add(&CurvePoly::constant(shift));
        GraphStrand {
            y: self.y.substitute(NU, &repl),
            z: self.z.substitute(NU, &repl),
            half_width: self.half_width,
            delta: self.delta,
            m0: self.m0,
        }
    }

    /// Closed-form pushforward at symbolic parameters: scale the argument
    /// by `alpha^-n`, the y-output by `beta^n`, the z-output by `gamma^n`.
    pub fn iterate_polys(
        &self,
        spectrum: &SaddleSpectrum<T>,
        n: usize,
    ) -> (CurvePoly<T>, CurvePoly<T>) {
        let an = spectrum.alpha().powi(n as i32);
        let bn = spectrum.beta().powi(n as i32);
        let gn = spectrum.gamma().powi(n as i32);
        let y = self.y.scale_var(TVAR, T::one() / an).scale(bn);
        let z = self.z.scale_var(TVAR, T::one() / an).scale(gn);
        (y, z)
    }
}

/// One iterated strand at fixed parameters, in closed form.
#[derive(Clone, Debug)]
pub struct IteratedStrand<T> {
    pub n: usize,
    /// `y_n(t) = beta^n y0(alpha^-n t)`, exact coefficient scaling.
    pub y: Poly<T, 1>,
    pub z: Poly<T, 1>,
    /// The base graph polynomials `y0`, `z0` at the same parameters.
    pub base_y: Poly<T, 1>,
    pub base_z: Poly<T, 1>,
    /// Chart window: `min(delta, alpha^n * w0)`.
    pub window: T,
    /// Base window `w0`.
    pub base_window: T,
    pub spectrum: SaddleSpectrum<T>,
    pub delta: T,
}

/// Sup norms of the iterated strand and its first two derivatives.
///
/// The position sups are taken over the strand's chart window (they measure
/// how far the strand sits from the strong unstable axis inside the chart,
/// and shrink to zero). The derivative sups are taken over the full image
/// of the base window, where the pushforward scaling factors out exactly:
/// `sup_dy(n) = (beta/alpha)^n sup_dy(0)` and so on, as identities of
/// polynomial arithmetic.
#[derive(Clone, Copy, Debug)]
pub struct C2Deviation<T> {
    pub sup_y: T,
    pub sup_z: T,
    pub sup_dy: T,
    pub sup_dz: T,
    pub sup_d2y: T,
    pub sup_d2z: T,
}

/// Transverse crossing of the strand with the yz-plane.
pub fn yz_crossing<T: Real>(
    curve: &CurveData<T>,
    p: ParamPoint<T>,
) -> ComputeResult<(T, Vec3<T>)> {
    curve.yz_crossing(p)
}

/// Solve `crossing-y(mu, nu) = 0` for nu at fixed mu: 1D Newton with exact
/// implicit derivatives and a bisection fallback. The residual target is
/// the crate's `residual_tol` (1e-10 at f64).
pub fn solve_nu_tilde<T: Real>(curve: &CurveData<T>, mu: T) -> ComputeResult<T> {
    let tol = crate::defaults::residual_tol::<T>();
    let slope0 = curve.crossing_y_nu_derivative(ParamPoint::new(mu, T::zero()))?;
    if slope0.abs() <= crate::defaults::generic_tol::<T>() {
        return Err(ComputeError::ImplicitFunctionFailure {
            label: "dy/dnu",
            value: slope0.abs().lossy(),
            tol: crate::defaults::generic_tol::<T>().lossy(),
        });
    }
    let g = |nu: T| -> ComputeResult<T> {
        Ok(curve.yz_crossing(ParamPoint::new(mu, nu))?.1.y)
    };
    let mut nu = T::zero();
    for _ in 0..60 {
        let val = g(nu)?;
        if val.abs() <= tol {
            return Ok(nu);
        }
        let slope = curve.crossing_y_nu_derivative(ParamPoint::new(mu, nu))?;
        if slope == T::zero() {
            break;
        }
        nu = nu - val / slope;
    }
    // bisection fallback on an expanding bracket
    let nu_box = curve.param_half.1;
    let mut half = nu_box * T::of(1e-3);
    while half <= nu_box {
        let (lo, hi) = (-half, half);
        let (glo, ghi) = (g(lo)?, g(hi)?);
        if (glo < T::zero()) != (ghi < T::zero()) {
            return crate::solve::newton_bracketed(
                |nu| g(nu).unwrap_or(T::nan()),
                |nu| {
                    curve
                        .crossing_y_nu_derivative(ParamPoint::new(mu, nu))
                        .unwrap_or(T::nan())
                },
                lo,
                hi,
                tol,
                120,
            );
        }
        half = half * T::of(2.0);
    }
    Err(ComputeError::NewtonDiverged {
        residual: g(nu).map(|v| v.abs().lossy()).unwrap_or(f64::NAN),
        iterations: 60,
    })
}

/// Configuration of the reparametrization fit.
#[derive(Clone, Debug)]
pub struct ReparamConfig<T> {
    pub mu_grid: Vec<T>,
    pub degree: usize,
    pub fit_tol: T,
}

impl<T: Real> Default for ReparamConfig<T> {
    fn default() -> Self {
        let mut grid = Vec::new();
        for i in -4i32..=4 {
            grid.push(T::of(0.015) * T::of(i as f64));
        }
        ReparamConfig {
            mu_grid: grid,
            degree: 3,
            fit_tol: T::of(1e-6).max(T::epsilon().sqrt()),
        }
    }
}

/// Straighten the bifurcation locus: fit `nu_tilde(mu)` on the grid by a
/// polynomial of the configured degree and substitute
/// `nu -> nu + nu_tilde(mu)` into both germs, so that in the new parameters
/// the quasi-transverse crossing sits at `nu = 0` for every grid mu. The
/// per-point residual after substitution must clear `fit_tol`.
pub fn reparametrize<T: Real>(
    curve: &CurveFamily<T>,
    surf: &SurfaceFamily<T>,
    cfg: &ReparamConfig<T>,
) -> ComputeResult<(CurveFamily<T>, SurfaceFamily<T>)> {
    let mut xs = Vec::with_capacity(cfg.mu_grid.len());
    let mut ys = Vec::with_capacity(cfg.mu_grid.len());
    for &mu in &cfg.mu_grid {
        xs.push(mu);
        ys.push(solve_nu_tilde(curve.data(), mu)?);
    }
    let fit = crate::solve::polyfit(&xs, &ys, cfg.degree).ok_or_else(|| {
        ComputeError::BadConfig("reparametrization grid too small for the fit degree".into())
    })?;

    // nu -> nu + fit(mu), in both arities
    let fit3 = CurvePoly::from_terms(
        fit.terms()
            .iter()
            .map(|t| ([t.exps[0], 0, 0], t.coeff))
            .collect(),
    );
    let repl3 = CurvePoly::var(NU).add(&fit3);
    let fit2 = Poly::<T, 2>::from_terms(
        fit.terms()
            .iter()
            .map(|t| ([t.exps[0], 0], t.coeff))
            .collect(),
    );
    let repl2 = Poly::<T, 2>::var(NU).add(&fit2);

    let mut new_curve = curve.data().clone();
    new_curve.x = new_curve.x.substitute(NU, &repl3);
    new_curve.y = new_curve.y.substitute(NU, &repl3);
    new_curve.z = new_curve.z.substitute(NU, &repl3);

    let mut new_surf = surf.data().clone();
    for poly in [
        &mut new_surf.center_u,
        &mut new_surf.center_v,
        &mut new_surf.coeff_a,
        &mut new_surf.coeff_b,
        &mut new_surf.coeff_c,
        &mut new_surf.coeff_d,
    ] {
        *poly = poly.substitute(NU, &repl2);
    }

    // verify the crossing is flattened on the grid
    let mut worst = T::zero();
    for &mu in &cfg.mu_grid {
        let (_, s) = new_curve.yz_crossing(ParamPoint::new(mu, T::zero()))?;
        worst = worst.max(s.y.abs());
    }
    if worst > cfg.fit_tol {
        return Err(ComputeError::FitResidual {
            residual: worst.lossy(),
            tol: cfg.fit_tol.lossy(),
        });
    }

    let curve_out = CurveFamily::new(new_curve)
        .map_err(|e| ComputeError::BadConfig(format!("reparametrized strand invalid: {e}")))?;
    let surf_out = SurfaceFamily::new(new_surf)
        .map_err(|e| ComputeError::BadConfig(format!("reparametrized sheet invalid: {e}")))?;
    Ok((curve_out, surf_out))
}

/// Push the strand forward `n` times at fixed parameters. Errors with the
/// largest admissible iterate count if the image leaves the chart in y or
/// z (for nonzero nu the strand sweeps upward in y like `beta^n`, so large
/// n always overflows).
pub fn iterate_strand<T: Real>(
    spectrum: &SaddleSpectrum<T>,
    domain: &ChartDomain<T>,
    curve: &CurveData<T>,
    p: ParamPoint<T>,
    n: usize,
) -> ComputeResult<IteratedStrand<T>> {
    let gs = GraphStrand::from_curve(curve, domain)?;
    iterate_graph_strand(spectrum, &gs, p, n)
}

/// Same as [`iterate_strand`] for a strand already in graph form.
pub fn iterate_graph_strand<T: Real>(
    spectrum: &SaddleSpectrum<T>,
    gs: &GraphStrand<T>,
    p: ParamPoint<T>,
    n: usize,
) -> ComputeResult<IteratedStrand<T>> {
    let base_y = gs.y.collapse_to_last(p.mu, p.nu);
    let base_z = gs.z.collapse_to_last(p.mu, p.nu);
    let make = |k: usize| -> IteratedStrand<T> {
        let ak = spectrum.alpha().powi(k as i32);
        let bk = spectrum.beta().powi(k as i32);
        let gk = spectrum.gamma().powi(k as i32);
        let y = base_y.scale_var(0, T::one() / ak).scale(bk);
        let z = base_z.scale_var(0, T::one() / ak).scale(gk);
        IteratedStrand {
            n: k,
            y,
            z,
            base_y: base_y.clone(),
            base_z: base_z.clone(),
            window: gs.delta.min(ak * gs.half_width),
            base_window: gs.half_width,
            spectrum: *spectrum,
            delta: gs.delta,
        }
    };
    // the chart cube is open, so touching the boundary at the window edge
    // is still admissible
    let admissible = |s: &IteratedStrand<T>| {
        sup_abs_on(&s.y, -s.window, s.window) <= s.delta
            && sup_abs_on(&s.z, -s.window, s.window) <= s.delta
    };
    let out = make(n);
    if admissible(&out) {
        return Ok(out);
    }
    let mut max_adm = 0usize;
    for k in 0..=(n.max(64)) {
        if admissible(&make(k)) {
            max_adm = k;
        }
    }
    Err(ComputeError::DomainOverflow {
        max_admissible: max_adm,
    })
}

impl<T: Real> IteratedStrand<T> {
    pub fn point(&self, t: T) -> Vec3<T> {
        Vec3::new(t, self.y.eval1(t), self.z.eval1(t))
    }

    pub fn jet(&self, t: T) -> crate::geometry::CurveJet<T> {
        let dy = self.y.deriv();
        let dz = self.z.deriv();
        crate::geometry::CurveJet {
            point: self.point(t),
            first: Vec3::new(T::one(), dy.eval1(t), dz.eval1(t)),
            second: Vec3::new(T::zero(), dy.deriv().eval1(t), dz.deriv().eval1(t)),
        }
    }
}

/// C2 deviation of an iterated strand from the strong unstable axis; see
/// [`C2Deviation`] for the domain conventions that make the derivative
/// components exact geometric sequences in n.
pub fn c2_deviation<T: Real>(s: &IteratedStrand<T>) -> C2Deviation<T> {
    let w0 = s.base_window;
    let n = s.n as i32;
    let ry = (s.spectrum.beta() / s.spectrum.alpha()).powi(n);
    let rz = (s.spectrum.gamma() / s.spectrum.alpha()).powi(n);
    let ry2 = (s.spectrum.beta() / (s.spectrum.alpha() * s.spectrum.alpha())).powi(n);
    let rz2 = (s.spectrum.gamma() / (s.spectrum.alpha() * s.spectrum.alpha())).powi(n);
    C2Deviation {
        sup_y: sup_abs_on(&s.y, -s.window, s.window),
        sup_z: sup_abs_on(&s.z, -s.window, s.window),
        sup_dy: ry * sup_abs_on(&s.base_y.deriv(), -w0, w0),
        sup_dz: rz * sup_abs_on(&s.base_z.deriv(), -w0, w0),
        sup_d2y: ry2 * sup_abs_on(&s.base_y.deriv().deriv(), -w0, w0),
        sup_d2z: rz2 * sup_abs_on(&s.base_z.deriv().deriv(), -w0, w0),
    }
}

/// Maximum curvature of the iterated strand over its chart window: dense
/// sampling followed by one Newton polish on the derivative of the squared
/// curvature (a polynomial identity, so the polish is exact arithmetic).
pub fn max_curvature<T: Real>(s: &IteratedStrand<T>, samples: usize) -> T {
    let dy = s.y.deriv();
    let dz = s.z.deriv();
    let d2y = dy.deriv();
    let d2z = dz.deriv();
    let kappa_sq = |t: T| {
        let (y1, z1, y2, z2) = (dy.eval1(t), dz.eval1(t), d2y.eval1(t), d2z.eval1(t));
        let cx = y1 * z2 - z1 * y2;
        let num = cx * cx + z2 * z2 + y2 * y2;
        let den = T::one() + y1 * y1 + z1 * z1;
        num / (den * den * den)
    };
    let n = samples.max(16);
    let mut best_t = -s.window;
    let mut best = kappa_sq(best_t);
    for i in 0..=n {
        let t = -s.window + T::of(2.0) * s.window * T::of_usize(i) / T::of_usize(n);
        let v = kappa_sq(t);
        if v > best {
            best = v;
            best_t = t;
        }
    }
    // d/dt [num/den^3] = 0  <=>  num' den - 3 num den' = 0
    let one = Poly::<T, 1>::constant(T::one());
    let cross = dy.mul(&d2z).sub(&dz.mul(&d2y));
    let num = cross.mul(&cross).add(&d2z.mul(&d2z)).add(&d2y.mul(&d2y));
    let den = one.add(&dy.mul(&dy)).add(&dz.mul(&dz));
    let p = num.deriv().mul(&den).sub(&num.mul(&den.deriv()).scale(T::of(3.0)));
    let dp = p.deriv();
    if let Ok(t) = crate::solve::newton_1d(
        |t| p.eval1(t),
        |t| dp.eval1(t),
        best_t,
        T::epsilon() * T::of(64.0),
        12,
        Some(s.window * T::of(0.05)),
    ) {
        if t.abs() <= s.window {
            best = best.max(kappa_sq(t));
        }
    }
    best.sqrt()
}

/// Smallest iterate count whose maximum curvature falls below `eps`,
/// scanning up to `n_max`.
pub fn curvature_threshold<T: Real>(
    spectrum: &SaddleSpectrum<T>,
    domain: &ChartDomain<T>,
    curve: &CurveData<T>,
    p: ParamPoint<T>,
    eps: T,
    n_max: usize,
) -> ComputeResult<Option<usize>> {
    let gs = GraphStrand::from_curve(curve, domain)?;
    for n in 0..=n_max {
        let s = iterate_graph_strand(spectrum, &gs, p, n)?;
        if max_curvature(&s, 1024) < eps {
            return Ok(Some(n));
        }
    }
    Ok(None)
}
