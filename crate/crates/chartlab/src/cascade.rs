//! Tangency cascade: bracket the sweep parameter by the y-projection
//! separation of strand and strip, locate each strand-sheet tangency by a
//! contact-transition bisection refined with 2D Newton, classify it, and
//! aggregate the sequence.
//!
//! For each iterate count the mechanism is the same: at `nu = 0` the
//! iterated strand hugs the strong unstable axis while the strip
//! `{0 <= z <= h0}` of the sheet sits at distance `|v|` in y; sweeping nu
//! moves the strand in y at speed `beta^n` until it has passed the strip
//! entirely. Somewhere in between the strand-over-sheet gap acquires (or
//! loses) its t-roots, and the transition parameter is a tangency.

use crate::chart::{
    ChartDomain, CurveData, CurveFamily, CurvePoly, ParamPoint, SaddleSpectrum, SurfaceData,
    SurfaceFamily, TangencyType, NU, TVAR,
};
use crate::error::{ComputeError, ComputeResult};
use crate::geometry::{contact_class_with, ContactClass, GapJet};
use crate::inclination::GraphStrand;
use crate::poly::{range_on, roots_in_interval, Poly};
use crate::scalar::Real;
use crate::vec3::Vec3;

/// Shape of the strip `Sigma(mu, nu) ∩ {0 <= z <= h0}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StripVariant {
    Annulus,
    TwoRectangles,
}

impl StripVariant {
    pub fn as_str(&self) -> &'static str {
        match self {
            StripVariant::Annulus => "annulus",
            StripVariant::TwoRectangles => "two-rectangles",
        }
    }
}

/// y-projection extent of the strip at one parameter point.
#[derive(Clone, Copy, Debug)]
pub struct StripDescription<T> {
    pub variant: StripVariant,
    pub y_min: T,
    pub y_max: T,
    pub h0: T,
}

/// One solved homoclinic tangency.
#[derive(Clone, Debug)]
pub struct TangencyRecord<T> {
    pub m: usize,
    /// Sweep parameter of the tangency, in the oriented coordinates of the
    /// run: positive, decreasing toward the bifurcation at 0.
    pub nu_m: T,
    pub t_m: T,
    pub tau: Vec3<T>,
    /// Bend of the sheet-over-strand height `f(l(t)) - z(t)` at the
    /// tangency: how the sheet curves away from the tangent strand.
    pub gap_bend: T,
    pub curve_kappa: T,
    /// Normal curvature of the sheet along the strand's tangent direction.
    pub surface_kappa: T,
    /// Normal curvature of the sheet along the x-direction at the tangency.
    pub surface_kappa_x: T,
    pub contact: ContactClass,
    /// Bracket `[0, nu_bar_m]` the solution was isolated in.
    pub bracket_hi: T,
    /// Number of contact transitions detected inside the bracket.
    pub multiplicity: usize,
    /// `|gap|` at the solved point.
    pub residual_gap: T,
    /// `|d gap/dt|` at the solved point.
    pub residual_slope: T,
    /// Generic-unfolding margin, filled by the unfolding diagnostics.
    pub unfolding_margin: Option<T>,
}

/// Cascade run configuration. `h0` and `nu_bar` default from the family
/// when left unset: `h0` to half the smallest strand height over the
/// iterate range and `nu_bar` to half the chart width (the bracket search
/// halves downward from there).
#[derive(Clone, Debug)]
pub struct CascadeConfig<T> {
    pub mu0: T,
    pub m_min: usize,
    pub m_max: usize,
    pub h0: Option<T>,
    pub nu_bar: Option<T>,
    /// Residual target for the tangency system `(gap, d gap/dt)`.
    pub solve_tol: T,
    pub contact_gap_tol: T,
    pub contact_bend_floor: T,
    /// Grid resolution of the contact-transition scan.
    pub scan_points: usize,
    /// Refuse to run when the sign of `mu0` contradicts the tangency type.
    pub enforce_sign: bool,
}

impl<T: Real> CascadeConfig<T> {
    pub fn new(mu0: T, m_min: usize, m_max: usize) -> Self {
        CascadeConfig {
            mu0,
            m_min,
            m_max,
            h0: None,
            nu_bar: None,
            solve_tol: crate::defaults::crossing_tol::<T>(),
            contact_gap_tol: crate::defaults::contact_gap_tol::<T>(),
            contact_bend_floor: crate::defaults::contact_bend_floor::<T>(),
            scan_points: 96,
            enforce_sign: true,
        }
    }
}

/// Result of a cascade run, including per-iterate failures (early iterates
/// legitimately fail when the strand still rides above the sheet apex).
#[derive(Clone, Debug)]
pub struct CascadeOutcome<T> {
    pub records: Vec<TangencyRecord<T>>,
    pub failures: Vec<(usize, ComputeError)>,
    /// Constant reparametrization applied at the run's mu0 before sweeping.
    pub nu_shift: T,
    /// Sweep direction in the shifted nu coordinate.
    pub orientation: i8,
    pub h0: T,
    pub nu_bar: T,
    pub required_sign: i8,
    pub tangency_type: TangencyType,
    /// Curvature floor of the sheet at the sweep start (minimum principal
    /// curvature magnitude at the x-tangent extremal point of `{f = 0}`).
    pub kappa0: Option<T>,
    /// Fitted per-step ratio of nu_m along the accepted tail.
    pub fitted_ratio: Option<T>,
}

impl<T: Real> CascadeOutcome<T> {
    /// nu_m strictly decreasing over the accepted records.
    pub fn nu_strictly_decreasing(&self) -> bool {
        self.records
            .windows(2)
            .all(|w| w[1].nu_m < w[0].nu_m)
    }

    pub fn all_quadratic(&self) -> bool {
        self.records
            .iter()
            .all(|r| r.contact == ContactClass::QuadraticTangency)
    }

    /// The curvature comparison holds at every record: the strand bends
    /// strictly less than the sheet along the strand direction.
    pub fn curvature_criterion(&self) -> bool {
        self.records
            .iter()
            .all(|r| crate::geometry::quadratic_by_curvature(r.curve_kappa, r.surface_kappa))
    }
}

/// Sign of mu0 for which the strip is nonempty: opposite to `b(0,0)` for an
/// elliptic tangency, equal to it for a hyperbolic one, flipped when the
/// mu-unfolding speed is negative.
pub fn required_mu_sign<T: Real>(kind: TangencyType, b00: T, eta0: T) -> ComputeResult<i8> {
    if b00 == T::zero() || eta0 == T::zero() {
        return Err(ComputeError::BadConfig(
            "required_mu_sign needs nonzero b(0,0) and eta0".into(),
        ));
    }
    let b_sign = if b00 > T::zero() { 1i8 } else { -1i8 };
    let e_sign = if eta0 > T::zero() { 1i8 } else { -1i8 };
    Ok(match kind {
        TangencyType::Elliptic => -b_sign * e_sign,
        TangencyType::Hyperbolic => b_sign * e_sign,
    })
}

// ---------------------------------------------------------------------------
// Strip geometry
// ---------------------------------------------------------------------------

/// `f(x_fixed, y) - lvl` as a univariate polynomial in `w = y - v`
/// (or with the roles of x and y swapped).
fn edge_poly<T: Real>(
    surf: &SurfaceData<T>,
    p: ParamPoint<T>,
    fixed: T,
    lvl: T,
    fixed_is_x: bool,
) -> Poly<T, 1> {
    let t = surf.taylor_at(p);
    let half = T::of(0.5);
    let mut terms: Vec<([u8; 1], T)> = Vec::new();
    let fixed_c = if fixed_is_x { fixed - t.u } else { fixed - t.v };
    if fixed_is_x {
        // a + b/2 Xe^2 - lvl + (c Xe) w + d/2 w^2 + tail
        terms.push(([0], t.a + half * t.b * fixed_c * fixed_c - lvl));
        terms.push(([1], t.c * fixed_c));
        terms.push(([2], half * t.d));
        for &(pe, qe, h) in &surf.higher_order {
            terms.push(([qe], h * fixed_c.powi(pe as i32)));
        }
    } else {
        terms.push(([0], t.a + half * t.d * fixed_c * fixed_c - lvl));
        terms.push(([1], t.c * fixed_c));
        terms.push(([2], half * t.b));
        for &(pe, qe, h) in &surf.higher_order {
            terms.push(([pe], h * fixed_c.powi(qe as i32)));
        }
    }
    Poly::from_terms(terms)
}

/// Interior candidates for the y-extremes of `{f = lvl}`: solutions of
/// `(df/dx, f - lvl) = 0`, seeded from the closed form of the quadratic
/// part and polished by 2D Newton.
fn lagrange_points<T: Real>(
    surf: &SurfaceData<T>,
    p: ParamPoint<T>,
    lvl: T,
) -> Vec<(T, T)> {
    let t = surf.taylor_at(p);
    let det = t.b * t.d - t.c * t.c;
    if det == T::zero() || t.b == T::zero() {
        return Vec::new();
    }
    let y_sq = T::of(2.0) * (lvl - t.a) * t.b / det;
    if y_sq <= T::zero() {
        return Vec::new();
    }
    let mut out = Vec::new();
    let y_mag = y_sq.sqrt();
    for sign in [T::one(), -T::one()] {
        let yy = sign * y_mag;
        let xx = -t.c / t.b * yy;
        let seed = [t.u + xx, t.v + yy];
        let sys = |q: [T; 2]| {
            let jet = surf.jet_unchecked(p, q[0], q[1]);
            (
                [jet.grad[0], jet.z - lvl],
                [
                    [jet.hess[0][0], jet.hess[0][1]],
                    [jet.grad[0], jet.grad[1]],
                ],
            )
        };
        if let Ok(sol) = crate::solve::newton_2d(sys, seed, crate::defaults::residual_tol::<T>(), 40)
        {
            if surf.domain.contains(sol[0], sol[1]) {
                out.push((sol[0], sol[1]));
            }
        }
    }
    out
}

/// The strip `Sigma(p) ∩ {0 <= z <= h0}`: shape variant and y-projection
/// extent, from the interior extremal points of both bounding levels plus
/// all domain-boundary crossings. Empty strip means the sheet never meets
/// the slab at these parameters — the signature of the wrong mu0 sign.
pub fn strip<T: Real>(
    surf: &SurfaceData<T>,
    p: ParamPoint<T>,
    h0: T,
) -> ComputeResult<StripDescription<T>> {
    if h0 <= T::zero() {
        return Err(ComputeError::BadConfig("h0 must be positive".into()));
    }
    let dom = surf.domain;
    let mut ys: Vec<T> = Vec::new();
    for lvl in [T::zero(), h0] {
        for (x, y) in lagrange_points(surf, p, lvl) {
            // keep only points genuinely inside the slab
            let z = surf.jet_unchecked(p, x, y).z;
            if z >= -h0 * T::of(1e-9) && z <= h0 * (T::one() + T::of(1e-9)) {
                ys.push(y);
            }
        }
        // vertical edges: roots of f(x_edge, y) = lvl
        for xe in [dom.x_lo, dom.x_hi] {
            let poly = edge_poly(surf, p, xe, lvl, true);
            let t0 = surf.taylor_at(p);
            for w in roots_in_interval(&poly, dom.y_lo - t0.v, dom.y_hi - t0.v) {
                ys.push(t0.v + w);
            }
        }
    }
    // horizontal edges: the extent reaches the edge if the band intersects it
    for ye in [dom.y_lo, dom.y_hi] {
        let poly = edge_poly(surf, p, ye, T::zero(), false);
        let t0 = surf.taylor_at(p);
        let (mn, mx) = range_on(&poly, dom.x_lo - t0.u, dom.x_hi - t0.u);
        if mx >= T::zero() && mn <= h0 {
            ys.push(ye);
        }
    }
    if ys.is_empty() {
        return Err(ComputeError::EmptyStrip);
    }
    let mut y_min = ys[0];
    let mut y_max = ys[0];
    for &y in &ys[1..] {
        y_min = y_min.min(y);
        y_max = y_max.max(y);
    }
    let variant = match crate::chart::classify(surf)? {
        TangencyType::Elliptic => StripVariant::Annulus,
        TangencyType::Hyperbolic => StripVariant::TwoRectangles,
    };
    Ok(StripDescription {
        variant,
        y_min,
        y_max,
        h0,
    })
}

// ---------------------------------------------------------------------------
// Bracketing
// ---------------------------------------------------------------------------

/// Which side of the strip the strand starts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum ApproachSide {
    Below,
    Above,
}

/// Core of the separation bracket: `strand_range(nu)` is the y-projection
/// of the strand, `strip_extent(nu)` that of the strip. Requires disjoint
/// projections at `nu = 0`; halves downward from `nu_bar` to the smallest
/// sweep value at which the strand has passed the strip entirely.
fn bracket_by_projection<T: Real>(
    strand_range: &dyn Fn(T) -> ComputeResult<(T, T)>,
    strip_extent: &dyn Fn(T) -> ComputeResult<(T, T)>,
    nu_bar: T,
) -> ComputeResult<T> {
    let (s_lo, s_hi) = strand_range(T::zero())?;
    let (a_lo, a_hi) = strip_extent(T::zero())?;
    let side = if s_hi < a_lo {
        ApproachSide::Below
    } else if s_lo > a_hi {
        ApproachSide::Above
    } else {
        return Err(ComputeError::BracketFailure {
            below: (a_lo - s_hi).lossy(),
            above: (s_lo - a_hi).lossy(),
        });
    };
    let passed = |nu: T| -> bool {
        let (Ok((s_lo, s_hi)), Ok((a_lo, a_hi))) = (strand_range(nu), strip_extent(nu)) else {
            return false;
        };
        match side {
            ApproachSide::Below => s_lo > a_hi,
            ApproachSide::Above => s_hi < a_lo,
        }
    };
    let mut nu = nu_bar;
    let mut last_pass: Option<T> = None;
    for _ in 0..64 {
        if passed(nu) {
            last_pass = Some(nu);
        } else if last_pass.is_some() {
            break;
        }
        nu = nu * T::of(0.5);
    }
    last_pass.ok_or_else(|| {
        let below = strip_extent(nu_bar)
            .and_then(|a| strand_range(nu_bar).map(|s| a.0 - s.1))
            .map(|v| v.lossy())
            .unwrap_or(f64::NAN);
        ComputeError::BracketFailure {
            below: (a_lo - s_hi).lossy(),
            above: below,
        }
    })
}

// ---------------------------------------------------------------------------
// Contact scan and tangency solve
// ---------------------------------------------------------------------------

/// Prepared gap data for one iterate: the strand and gap as polynomials in
/// `(mu, nu, t)` with mu fixed numerically, plus the chart window.
struct IterateGap<T> {
    mu0: T,
    y: CurvePoly<T>,
    z: CurvePoly<T>,
    gap: CurvePoly<T>,
    gap_t: CurvePoly<T>,
    gap_tt: CurvePoly<T>,
    gap_nu: CurvePoly<T>,
    gap_tnu: CurvePoly<T>,
    window: T,
    dom: crate::chart::Rect<T>,
}

impl<T: Real> IterateGap<T> {
    fn new(
        spectrum: &SaddleSpectrum<T>,
        strand: &GraphStrand<T>,
        surf: &SurfaceData<T>,
        mu0: T,
        n: usize,
    ) -> Self {
        let (y, z) = strand.iterate_polys(spectrum, n);
        let x = CurvePoly::var(TVAR);
        let gap = surf.gap_poly(&x, &y, &z);
        let gap_t = gap.partial(TVAR);
        IterateGap {
            mu0,
            gap_tt: gap_t.partial(TVAR),
            gap_nu: gap.partial(NU),
            gap_tnu: gap_t.partial(NU),
            y,
            z,
            gap,
            gap_t,
            window: strand.delta.min(spectrum.alpha().powi(n as i32) * strand.half_width),
            dom: surf.domain,
        }
    }

    /// t-intervals where the strand's `(x, y)` stays inside the sheet
    /// domain at this nu.
    fn domain_pieces(&self, nu: T) -> Vec<(T, T)> {
        let lo = self.dom.x_lo.max(-self.window);
        let hi = self.dom.x_hi.min(self.window);
        if lo >= hi {
            return Vec::new();
        }
        let y1 = self.y.collapse_to_last(self.mu0, nu);
        let mut cuts = vec![lo, hi];
        for bound in [self.dom.y_lo, self.dom.y_hi] {
            let shifted = y1.sub(&Poly::constant(bound));
            cuts.extend(roots_in_interval(&shifted, lo, hi));
        }
        cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut pieces = Vec::new();
        for w in cuts.windows(2) {
            let (a, b) = (w[0], w[1]);
            if b <= a {
                continue;
            }
            let mid = (a + b) * T::of(0.5);
            let ymid = y1.eval1(mid);
            if ymid >= self.dom.y_lo && ymid <= self.dom.y_hi {
                pieces.push((a, b));
            }
        }
        pieces
    }

    /// All strand-sheet crossings in t at this nu.
    fn contact_roots(&self, nu: T) -> Vec<T> {
        let g = self.gap.collapse_to_last(self.mu0, nu);
        let mut roots = Vec::new();
        for (a, b) in self.domain_pieces(nu) {
            roots.extend(roots_in_interval(&g, a, b));
        }
        roots
    }

    fn has_contact(&self, nu: T) -> bool {
        !self.contact_roots(nu).is_empty()
    }

    fn eval(&self, poly: &CurvePoly<T>, nu: T, t: T) -> T {
        poly.eval(&[self.mu0, nu, t])
    }

    /// Seed for the Newton polish near a transition: the interior critical
    /// point of the gap with the smallest gap magnitude.
    fn tangency_seed(&self, nu: T) -> Option<T> {
        let g = self.gap.collapse_to_last(self.mu0, nu);
        let gt = self.gap_t.collapse_to_last(self.mu0, nu);
        let mut best: Option<(T, T)> = None;
        for (a, b) in self.domain_pieces(nu) {
            for r in roots_in_interval(&gt, a, b) {
                let v = g.eval1(r).abs();
                if best.map_or(true, |(bv, _)| v < bv) {
                    best = Some((v, r));
                }
            }
        }
        best.map(|(_, t)| t)
    }
}

/// Solve one tangency inside a signed bracket `[lo, hi]`: scan the contact
/// predicate, bisect each transition, polish the first genuine one with 2D
/// Newton on `(gap, d gap/dt)` and classify the result. The smallest
/// solution is returned and the number of transitions recorded.
pub fn solve_tangency<T: Real>(
    spectrum: &SaddleSpectrum<T>,
    domain: &ChartDomain<T>,
    surf: &SurfaceData<T>,
    curve: &CurveData<T>,
    m: usize,
    bracket: (T, T),
    cfg: &CascadeConfig<T>,
) -> ComputeResult<TangencyRecord<T>> {
    if m < curve.m0 {
        return Err(ComputeError::BadConfig("m below the strand base index".into()));
    }
    let strand = GraphStrand::from_curve(curve, domain)?;
    let ig = IterateGap::new(spectrum, &strand, surf, cfg.mu0, m - curve.m0);
    solve_tangency_prepared(&ig, domain, surf, m, bracket, cfg)
}

fn solve_tangency_prepared<T: Real>(
    ig: &IterateGap<T>,
    domain: &ChartDomain<T>,
    surf: &SurfaceData<T>,
    m: usize,
    bracket: (T, T),
    cfg: &CascadeConfig<T>,
) -> ComputeResult<TangencyRecord<T>> {
    let (lo, hi) = bracket;
    if !(hi > lo) {
        return Err(ComputeError::BadConfig("empty bracket".into()));
    }
    let n_scan = cfg.scan_points.max(8);
    let mut states = Vec::with_capacity(n_scan + 1);
    for j in 0..=n_scan {
        let nu = lo + (hi - lo) * T::of_usize(j) / T::of_usize(n_scan);
        states.push((nu, ig.has_contact(nu)));
    }
    let mut transitions = Vec::new();
    for w in states.windows(2) {
        if w[0].1 != w[1].1 {
            transitions.push((w[0].0, w[1].0));
        }
    }
    if transitions.is_empty() {
        return Err(ComputeError::NoContactTransition);
    }
    let multiplicity = transitions.len();

    let mut solved: Option<(T, T)> = None;
    let mut last_err = ComputeError::NoContactTransition;
    for (a, b) in &transitions {
        let nu_star = crate::solve::bisect_predicate(
            |nu| ig.has_contact(nu),
            *a,
            *b,
            (hi - lo) * T::of(1e-9),
            80,
        );
        // seed t from whichever side of the transition still has the
        // near-double root
        let Some(t_seed) = ig
            .tangency_seed(nu_star)
            .or_else(|| ig.tangency_seed(*a))
            .or_else(|| ig.tangency_seed(*b))
        else {
            continue;
        };
        let sys = |q: [T; 2]| {
            let (nu, t) = (q[0], q[1]);
            (
                [ig.eval(&ig.gap, nu, t), ig.eval(&ig.gap_t, nu, t)],
                [
                    [ig.eval(&ig.gap_nu, nu, t), ig.eval(&ig.gap_t, nu, t)],
                    [ig.eval(&ig.gap_tnu, nu, t), ig.eval(&ig.gap_tt, nu, t)],
                ],
            )
        };
        match crate::solve::newton_2d(sys, [nu_star, t_seed], cfg.solve_tol, 60) {
            Ok([nu_m, t_m]) => {
                // reject boundary artifacts: the point must be interior to
                // the sheet domain and the chart window
                let y_m = ig.eval(&ig.y, nu_m, t_m);
                let interior = ig.dom.contains(t_m, y_m)
                    && t_m.abs() < ig.window
                    && nu_m > lo
                    && nu_m < hi;
                if interior {
                    if solved.map_or(true, |(prev, _)| nu_m < prev) {
                        solved = Some((nu_m, t_m));
                    }
                } else {
                    last_err = ComputeError::NoContactTransition;
                }
            }
            Err(e) => last_err = e,
        }
        if solved.is_some() {
            break; // transitions are scanned in increasing nu
        }
    }
    let (nu_m, t_m) = solved.ok_or(last_err)?;

    let value = ig.eval(&ig.gap, nu_m, t_m);
    let slope = ig.eval(&ig.gap_t, nu_m, t_m);
    let bend = ig.eval(&ig.gap_tt, nu_m, t_m);
    let jet = GapJet { value, slope, bend };
    let contact = contact_class_with(&jet, cfg.contact_gap_tol, cfg.contact_bend_floor);
    if contact == ContactClass::DegenerateTangency {
        return Err(ComputeError::DegenerateContact {
            bend: bend.abs().lossy(),
        });
    }

    let y_m = ig.eval(&ig.y, nu_m, t_m);
    let z_m = ig.eval(&ig.z, nu_m, t_m);
    let tau = Vec3::new(t_m, y_m, z_m);
    if !domain.contains(tau) {
        return Err(ComputeError::OutOfStrandDomain { t: t_m.lossy() });
    }

    // curvature comparison at the tangency
    let y1 = ig.y.collapse_to_last(ig.mu0, nu_m);
    let z1 = ig.z.collapse_to_last(ig.mu0, nu_m);
    let first = Vec3::new(
        T::one(),
        y1.deriv().eval1(t_m),
        z1.deriv().eval1(t_m),
    );
    let second = Vec3::new(
        T::zero(),
        y1.deriv().deriv().eval1(t_m),
        z1.deriv().deriv().eval1(t_m),
    );
    let curve_kappa = crate::geometry::curvature(&crate::geometry::CurveJet {
        point: tau,
        first,
        second,
    })?;
    let p_m = ParamPoint::new(ig.mu0, nu_m);
    let surface_kappa = crate::geometry::normal_curvature(surf, p_m, (t_m, y_m), first)?;
    let sjet = surf.jet_unchecked(p_m, t_m, y_m);
    let x_dir = Vec3::new(T::one(), T::zero(), sjet.grad[0]);
    let surface_kappa_x = crate::geometry::normal_curvature(surf, p_m, (t_m, y_m), x_dir)?;

    Ok(TangencyRecord {
        m,
        nu_m,
        t_m,
        tau,
        gap_bend: -bend,
        curve_kappa,
        surface_kappa,
        surface_kappa_x,
        contact,
        bracket_hi: hi,
        multiplicity,
        residual_gap: value.abs(),
        residual_slope: slope.abs(),
        unfolding_margin: None,
    })
}

/// y-projection bracket for one iterate of a prepared (shifted, oriented)
/// family; see [`bracket_by_projection`].
fn bracket_for_iterate<T: Real>(
    ig: &IterateGap<T>,
    surf: &SurfaceData<T>,
    h0: T,
    nu_bar: T,
) -> ComputeResult<T> {
    let strand_range = |nu: T| -> ComputeResult<(T, T)> {
        let y1 = ig.y.collapse_to_last(ig.mu0, nu);
        Ok(range_on(&y1, -ig.window, ig.window))
    };
    let strip_extent = |nu: T| -> ComputeResult<(T, T)> {
        let s = strip(surf, ParamPoint::new(ig.mu0, nu), h0)?;
        Ok((s.y_min, s.y_max))
    };
    bracket_by_projection(&strand_range, &strip_extent, nu_bar)
}

/// Separation bracket for the iterate `m` of a family, in the family's own
/// nu coordinate (callers normalize and orient first; [`run_cascade`] does
/// both automatically).
pub fn bracket_nu<T: Real>(
    spectrum: &SaddleSpectrum<T>,
    domain: &ChartDomain<T>,
    surf: &SurfaceData<T>,
    curve: &CurveData<T>,
    m: usize,
    cfg: &CascadeConfig<T>,
) -> ComputeResult<T> {
    if m < curve.m0 {
        return Err(ComputeError::BadConfig("m below the strand base index".into()));
    }
    let strand = GraphStrand::from_curve(curve, domain)?;
    let ig = IterateGap::new(spectrum, &strand, surf, cfg.mu0, m - curve.m0);
    let h0 = cfg
        .h0
        .ok_or_else(|| ComputeError::BadConfig("bracket_nu needs an explicit h0".into()))?;
    let nu_bar = cfg.nu_bar.unwrap_or(domain.delta() * T::of(0.5));
    bracket_for_iterate(&ig, surf, h0, nu_bar)
}

fn substitute_surface_nu<T: Real>(
    surf: &SurfaceData<T>,
    map: impl Fn(&crate::chart::ParamPoly<T>) -> crate::chart::ParamPoly<T>,
) -> SurfaceData<T> {
    SurfaceData {
        center_u: map(&surf.center_u),
        center_v: map(&surf.center_v),
        coeff_a: map(&surf.coeff_a),
        coeff_b: map(&surf.coeff_b),
        coeff_c: map(&surf.coeff_c),
        coeff_d: map(&surf.coeff_d),
        higher_order: surf.higher_order.clone(),
        domain: surf.domain,
    }
}

/// The family exactly as a cascade run sweeps it: the strand in graph form
/// with the crossing normalization `nu -> nu + nu_shift` applied and both
/// germs reoriented so the sweep parameter is positive.
pub fn prepare_family<T: Real>(
    domain: &ChartDomain<T>,
    surf: &SurfaceData<T>,
    curve: &CurveData<T>,
    nu_shift: T,
    orientation: i8,
) -> ComputeResult<(GraphStrand<T>, SurfaceData<T>)> {
    let strand0 = GraphStrand::from_curve(curve, domain)?.shift_nu(nu_shift);
    let orient = T::of(orientation as f64);
    let strand = GraphStrand {
        y: strand0.y.scale_var(NU, orient),
        z: strand0.z.scale_var(NU, orient),
        ..strand0
    };
    let shift_repl = crate::chart::ParamPoly::<T>::var(NU)
        .add(&crate::chart::ParamPoly::<T>::constant(nu_shift));
    let surf_prepared =
        substitute_surface_nu(surf, |p| p.substitute(NU, &shift_repl).scale_var(NU, orient));
    Ok((strand, surf_prepared))
}

/// Run the full cascade. The family is normalized at the run's `mu0` by the
/// exact constant shift `nu -> nu + nu_tilde(mu0)` and oriented so the
/// sweep parameter is positive; each iterate in `[m_min, m_max]` is then
/// bracketed and solved. Iterates may fail individually (recorded, not
/// fatal); the accepted sequence is post-processed for the decay fit.
pub fn run_cascade<T: Real>(
    spectrum: &SaddleSpectrum<T>,
    domain: &ChartDomain<T>,
    surf: &SurfaceFamily<T>,
    curve: &CurveFamily<T>,
    cfg: &CascadeConfig<T>,
) -> ComputeResult<CascadeOutcome<T>> {
    let kind = crate::chart::classify(surf.data())?;
    let t0 = surf.data().taylor_at(ParamPoint::origin());
    let required = required_mu_sign(kind, t0.b, surf.data().eta0())?;
    let got = if cfg.mu0 > T::zero() {
        1i8
    } else if cfg.mu0 < T::zero() {
        -1i8
    } else {
        0i8
    };
    if cfg.enforce_sign && got != required {
        return Err(ComputeError::WrongMuSign { required, got });
    }
    if cfg.m_min < curve.m0 || cfg.m_max < cfg.m_min {
        return Err(ComputeError::BadConfig(
            "iterate range must satisfy m0 <= m_min <= m_max".into(),
        ));
    }

    // normalize the crossing at this mu0 (exact constant shift)
    let nu_shift = crate::inclination::solve_nu_tilde(curve.data(), cfg.mu0)?;

    // orient the sweep: the strand must move toward the strip's side of the
    // y-axis as nu increases
    let p0 = ParamPoint::new(cfg.mu0, T::zero());
    let strand0 = GraphStrand::from_curve(curve.data(), domain)?.shift_nu(nu_shift);
    let v_at = surf.data().center_v.eval(&[cfg.mu0, nu_shift]);
    let dy_dnu = strand0.y.partial(NU).eval(&[cfg.mu0, T::zero(), T::zero()]);
    if v_at == T::zero() || dy_dnu == T::zero() {
        return Err(ComputeError::BadConfig(
            "cannot orient the sweep: v(mu0, 0) or dy/dnu vanishes".into(),
        ));
    }
    let orientation: i8 = if (v_at > T::zero()) == (dy_dnu > T::zero()) {
        1
    } else {
        -1
    };
    let (strand, surf_swept) =
        prepare_family(domain, surf.data(), curve.data(), nu_shift, orientation)?;

    // resolve h0 and nu_bar
    let z_base = strand.z.eval(&[cfg.mu0, T::zero(), T::zero()]);
    let n_max = cfg.m_max - curve.m0;
    let h0 = cfg
        .h0
        .unwrap_or_else(|| T::of(0.5) * spectrum.gamma().powi(n_max as i32) * z_base);
    if !(h0 > T::zero() && h0 < domain.delta()) {
        return Err(ComputeError::BadConfig(format!(
            "h0 = {} outside (0, delta)",
            h0.lossy()
        )));
    }
    let nu_bar = cfg.nu_bar.unwrap_or(domain.delta() * T::of(0.5));
    if !(nu_bar > T::zero()) {
        return Err(ComputeError::BadConfig("nu_bar must be positive".into()));
    }

    // the strip must exist at the sweep start; an empty one is the wrong-sign
    // signature
    strip(&surf_swept, p0, h0)?;

    // curvature floor at the sweep start: for an elliptic sheet any normal
    // curvature is bounded below by the smaller principal curvature; for a
    // hyperbolic sheet the bound is along the x-direction, taken at the
    // extremal point of the z = 0 level whose tangent is parallel to the
    // x-axis
    let kappa0 = lagrange_points(&surf_swept, p0, T::zero())
        .into_iter()
        .filter_map(|(x, y)| match kind {
            TangencyType::Elliptic => crate::geometry::principal_curvatures(&surf_swept, p0, (x, y))
                .ok()
                .map(|(km, _)| km.abs()),
            TangencyType::Hyperbolic => {
                let fx = surf_swept.jet_unchecked(p0, x, y).grad[0];
                crate::geometry::normal_curvature(
                    &surf_swept,
                    p0,
                    (x, y),
                    crate::vec3::Vec3::new(T::one(), T::zero(), fx),
                )
                .ok()
                .map(|k| k.abs())
            }
        })
        .fold(None, |acc: Option<T>, k| Some(acc.map_or(k, |a| a.min(k))));

    let mut records = Vec::new();
    let mut failures = Vec::new();
    for m in cfg.m_min..=cfg.m_max {
        let n = m - curve.m0;
        let ig = IterateGap::new(spectrum, &strand, &surf_swept, cfg.mu0, n);
        let result = bracket_for_iterate(&ig, &surf_swept, h0, nu_bar).and_then(|nu_bar_m| {
            solve_tangency_prepared(&ig, domain, &surf_swept, m, (T::zero(), nu_bar_m), cfg)
        });
        match result {
            Ok(rec) => records.push(rec),
            Err(e) => failures.push((m, e)),
        }
    }

    // fitted per-step ratio of nu_m over the accepted tail
    let fitted_ratio = if records.len() >= 3 {
        let xs: Vec<T> = records.iter().map(|r| T::of_usize(r.m)).collect();
        let ys: Vec<T> = records.iter().map(|r| r.nu_m.max(T::epsilon()).ln()).collect();
        crate::solve::polyfit(&xs, &ys, 1).map(|p| p.coeff([1]).exp())
    } else {
        None
    };

    Ok(CascadeOutcome {
        records,
        failures,
        nu_shift,
        orientation,
        h0,
        nu_bar,
        required_sign: required,
        tangency_type: kind,
        kappa0,
        fitted_ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::{affine_param, Rect};
    use crate::synth::synthesize_family;

    fn spectrum() -> SaddleSpectrum<f64> {
        SaddleSpectrum::new(4.0, 2.0, 0.5).unwrap()
    }

    fn domain() -> ChartDomain<f64> {
        ChartDomain::new(1.0).unwrap()
    }

    #[test]
    fn mu_sign_rule() {
        use TangencyType::*;
        assert_eq!(required_mu_sign(Elliptic, -1.0, 1.0).unwrap(), 1);
        assert_eq!(required_mu_sign(Elliptic, 1.0, 1.0).unwrap(), -1);
        assert_eq!(required_mu_sign(Hyperbolic, -1.0, 1.0).unwrap(), -1);
        assert_eq!(required_mu_sign(Hyperbolic, 1.0, 1.0).unwrap(), 1);
        // a negative unfolding speed flips the rule
        assert_eq!(required_mu_sign(Elliptic, -1.0, -1.0).unwrap(), -1);
        assert!(required_mu_sign(Elliptic, 0.0, 1.0).is_err());
    }

    fn cap_surface() -> SurfaceData<f64> {
        // f = mu - (x-u)^2 - (y-v)^2 with u = 0.5, v = 0.4
        SurfaceData {
            center_u: Poly::constant(0.5),
            center_v: Poly::constant(0.4),
            coeff_a: affine_param(0.0, 1.0, 0.0),
            coeff_b: Poly::constant(-2.0),
            coeff_c: Poly::constant(0.0),
            coeff_d: Poly::constant(-2.0),
            higher_order: vec![],
            domain: Rect {
                x_lo: 0.2,
                x_hi: 0.8,
                y_lo: 0.1,
                y_hi: 0.7,
            },
        }
    }

    #[test]
    fn strip_of_elliptic_cap() {
        let s = strip(&cap_surface(), ParamPoint::new(0.04, 0.0), 0.03).unwrap();
        assert_eq!(s.variant, StripVariant::Annulus);
        assert!((s.y_min - 0.2).abs() < 1e-10, "y_min = {}", s.y_min);
        assert!((s.y_max - 0.6).abs() < 1e-10, "y_max = {}", s.y_max);
    }

    #[test]
    fn strip_empty_for_wrong_sign() {
        assert!(matches!(
            strip(&cap_surface(), ParamPoint::new(-0.04, 0.0), 0.03),
            Err(ComputeError::EmptyStrip)
        ));
    }

    #[test]
    fn strip_of_hyperbolic_sheet() {
        // f = mu + (x-u)^2 - (y-v)^2
        let mut s = cap_surface();
        s.coeff_b = Poly::constant(2.0);
        let d = strip(&s, ParamPoint::new(0.01, 0.0), 0.002).unwrap();
        assert_eq!(d.variant, StripVariant::TwoRectangles);
        // inner edges at v ± sqrt(a) = 0.4 ± 0.1; outer reach clipped by O
        assert!(d.y_min < 0.3 && d.y_max > 0.5);
    }

    #[test]
    fn projection_bracket_halves_downward() {
        // strand y = 0.1 + nu against a fixed strip [0.3, 0.5]
        let strand = |nu: f64| -> ComputeResult<(f64, f64)> { Ok((0.1 + nu, 0.1 + nu)) };
        let fixed = |_: f64| -> ComputeResult<(f64, f64)> { Ok((0.3, 0.5)) };
        let nu_bar = bracket_by_projection(&strand, &fixed, 0.9).unwrap();
        assert!((nu_bar - 0.45).abs() < 1e-12);
    }

    #[test]
    fn projection_bracket_rejects_overlap_at_zero() {
        let strand = |nu: f64| -> ComputeResult<(f64, f64)> { Ok((0.35 + nu, 0.35 + nu)) };
        let fixed = |_: f64| -> ComputeResult<(f64, f64)> { Ok((0.3, 0.5)) };
        assert!(matches!(
            bracket_by_projection(&strand, &fixed, 0.9),
            Err(ComputeError::BracketFailure { .. })
        ));
    }

    #[test]
    fn closed_form_tangency_oracle() {
        // strand (t, 0.1 + nu, 0.09) against the cap
        // z = 0.25 - (x-0.5)^2 - (y-0.4)^2: tangency at t = 0.5 when
        // (0.1 + nu - 0.4)^2 = 0.16, inner branch nu = -0.1
        let mut surf = cap_surface();
        surf.coeff_a = Poly::constant(0.25);
        surf.domain = Rect {
            x_lo: -0.9,
            x_hi: 0.95,
            y_lo: -0.9,
            y_hi: 0.95,
        };
        let curve = CurveData {
            x: CurvePoly::var(TVAR),
            y: CurvePoly::from_terms(vec![([0, 0, 0], 0.1), ([0, 1, 0], 1.0)]),
            z: Poly::constant(0.09),
            m0: 0,
            t_half: 1.0,
            param_half: (0.3, 0.3),
        };
        let cfg = CascadeConfig::new(0.0, 0, 0);
        let rec = solve_tangency(
            &spectrum(),
            &domain(),
            &surf,
            &curve,
            0,
            (-0.2, 0.0),
            &cfg,
        )
        .unwrap();
        assert!((rec.nu_m + 0.1).abs() < 1e-10, "nu_m = {}", rec.nu_m);
        assert!((rec.t_m - 0.5).abs() < 1e-10, "t_m = {}", rec.t_m);
        assert!((rec.gap_bend + 2.0).abs() < 1e-10, "bend = {}", rec.gap_bend);
        assert_eq!(rec.contact, ContactClass::QuadraticTangency);
    }

    #[test]
    fn strand_on_sheet_is_degenerate() {
        let surf = cap_surface();
        // strand riding on the z = 0.01 level line of the sheet at mu = 0.04:
        // y fixed so that the gap is identically zero in t is impossible for
        // the cap, so instead lay the strand on the sheet itself
        let x = CurvePoly::var(TVAR);
        let y = Poly::constant(0.4);
        let z = surf.gap_poly(&x, &y, &Poly::zero()).scale(-1.0);
        let curve = CurveData {
            x,
            y,
            z,
            m0: 0,
            t_half: 1.0,
            param_half: (0.3, 0.3),
        };
        let cfg = CascadeConfig::new(0.04, 0, 0);
        let err = solve_tangency(
            &spectrum(),
            &domain(),
            &surf,
            &curve,
            0,
            (-0.05, 0.05),
            &cfg,
        )
        .unwrap_err();
        assert!(
            matches!(
                err,
                ComputeError::DegenerateContact { .. } | ComputeError::NoContactTransition
            ),
            "{err:?}"
        );
    }

    #[test]
    fn cascade_rejects_wrong_sign() {
        let sp = spectrum();
        let (surf, curve) = synthesize_family(TangencyType::Elliptic, &sp, 1);
        let t0 = surf.data().taylor_at(ParamPoint::origin());
        let required = required_mu_sign(TangencyType::Elliptic, t0.b, surf.data().eta0()).unwrap();
        let cfg = CascadeConfig::new(-(required as f64) * 0.01, 7, 10);
        let err = run_cascade(&sp, &domain(), &surf, &curve, &cfg).unwrap_err();
        assert!(matches!(err, ComputeError::WrongMuSign { .. }));
        // forcing past the sign check must hit the empty strip
        let mut cfg = cfg;
        cfg.enforce_sign = false;
        let out = run_cascade(&sp, &domain(), &surf, &curve, &cfg);
        match out {
            Err(ComputeError::EmptyStrip) => {}
            Ok(o) => panic!("expected empty strip, got {} records", o.records.len()),
            Err(e) => panic!("expected empty strip, got {e:?}"),
        }
    }

    #[test]
    fn elliptic_cascade_produces_decreasing_tangencies() {
        let sp = spectrum();
        let (surf, curve) = synthesize_family(TangencyType::Elliptic, &sp, 1);
        let t0 = surf.data().taylor_at(ParamPoint::origin());
        let required = required_mu_sign(TangencyType::Elliptic, t0.b, surf.data().eta0()).unwrap();
        let cfg = CascadeConfig::new(required as f64 * 0.01, 7, 16);
        let out = run_cascade(&sp, &domain(), &surf, &curve, &cfg).unwrap();
        assert!(
            out.records.len() == 10,
            "accepted {} of 10: {:?}",
            out.records.len(),
            out.failures
        );
        assert!(out.nu_strictly_decreasing());
        assert!(out.all_quadratic());
        assert!(out.curvature_criterion());
        assert!(out.records.last().unwrap().nu_m < 1e-3);
        for r in &out.records {
            let res_gap = r.contact == ContactClass::QuadraticTangency;
            assert!(res_gap);
        }
        let ratio = out.fitted_ratio.unwrap();
        assert!(
            (ratio - 0.5).abs() < 0.1,
            "per-step ratio {ratio} vs 1/beta = 0.5"
        );
    }

    #[test]
    fn hyperbolic_cascade_keeps_curvature_floor() {
        let sp = spectrum();
        let (surf, curve) = synthesize_family(TangencyType::Hyperbolic, &sp, 1);
        let t0 = surf.data().taylor_at(ParamPoint::origin());
        let required =
            required_mu_sign(TangencyType::Hyperbolic, t0.b, surf.data().eta0()).unwrap();
        assert!(required as f64 * t0.b > 0.0);
        let cfg = CascadeConfig::new(required as f64 * 0.01, 7, 16);
        let out = run_cascade(&sp, &domain(), &surf, &curve, &cfg).unwrap();
        assert!(
            out.records.len() == 10,
            "accepted {} of 10: {:?}",
            out.records.len(),
            out.failures
        );
        assert!(out.nu_strictly_decreasing());
        assert!(out.all_quadratic());
        assert!(out.curvature_criterion());
        let kappa0 = out.kappa0.expect("curvature floor");
        for r in &out.records {
            assert!(
                r.surface_kappa_x.abs() > kappa0 / 2.0,
                "m={} kappa_x={} kappa0={kappa0}",
                r.m,
                r.surface_kappa_x
            );
        }
    }

    #[test]
    fn cascade_stable_under_tolerance_halving() {
        let sp = spectrum();
        let (surf, curve) = synthesize_family(TangencyType::Elliptic, &sp, 3);
        let t0 = surf.data().taylor_at(ParamPoint::origin());
        let required = required_mu_sign(TangencyType::Elliptic, t0.b, surf.data().eta0()).unwrap();
        let mut cfg = CascadeConfig::new(required as f64 * 0.01, 8, 12);
        cfg.solve_tol = 1e-10;
        let a = run_cascade(&sp, &domain(), &surf, &curve, &cfg).unwrap();
        cfg.solve_tol = 5e-11;
        let b = run_cascade(&sp, &domain(), &surf, &curve, &cfg).unwrap();
        assert_eq!(a.records.len(), b.records.len());
        for (ra, rb) in a.records.iter().zip(&b.records) {
            assert!((ra.nu_m - rb.nu_m).abs() < 10.0 * 1e-10);
        }
    }
}
