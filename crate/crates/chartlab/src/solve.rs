//! Small deterministic solvers shared by the chart operations: safeguarded
//! 1D Newton on a bracket, plain Newton, damped 2D Newton with an analytic
//! Jacobian, and predicate bisection.

use crate::error::{ComputeError, ComputeResult};
use crate::scalar::Real;

/// Newton with a bisection safeguard. Requires `f(lo)` and `f(hi)` of
/// opposite sign; keeps the bracket valid throughout, so it cannot escape.
pub fn newton_bracketed<T: Real>(
    f: impl Fn(T) -> T,
    df: impl Fn(T) -> T,
    mut lo: T,
    mut hi: T,
    tol: T,
    max_iter: usize,
) -> ComputeResult<T> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == T::zero() {
        return Ok(lo);
    }
    if fhi == T::zero() {
        return Ok(hi);
    }
    if (flo < T::zero()) == (fhi < T::zero()) {
        return Err(ComputeError::BracketFailure {
            below: flo.lossy(),
            above: fhi.lossy(),
        });
    }
    let mut x = (lo + hi) * T::of(0.5);
    for it in 0..max_iter {
        let fx = f(x);
        if fx.abs() <= tol {
            return Ok(x);
        }
        if (flo < T::zero()) == (fx < T::zero()) {
            lo = x;
            flo = fx;
        } else {
            hi = x;
        }
        let d = df(x);
        let newton = if d != T::zero() { x - fx / d } else { x };
        x = if newton > lo && newton < hi {
            newton
        } else {
            (lo + hi) * T::of(0.5)
        };
        if it + 1 == max_iter {
            let r = f(x);
            if r.abs() <= tol {
                return Ok(x);
            }
            return Err(ComputeError::NewtonDiverged {
                residual: r.abs().lossy(),
                iterations: max_iter,
            });
        }
    }
    Ok(x)
}

/// Plain Newton from a seed; no bracket, so the caller must seed close
/// enough. Steps are clamped to `max_step` when given.
pub fn newton_1d<T: Real>(
    f: impl Fn(T) -> T,
    df: impl Fn(T) -> T,
    x0: T,
    tol: T,
    max_iter: usize,
    max_step: Option<T>,
) -> ComputeResult<T> {
    let mut x = x0;
    for _ in 0..max_iter {
        let fx = f(x);
        if fx.abs() <= tol {
            return Ok(x);
        }
        let d = df(x);
        if d == T::zero() || !d.is_finite() {
            return Err(ComputeError::NewtonDiverged {
                residual: fx.abs().lossy(),
                iterations: max_iter,
            });
        }
        let mut step = fx / d;
        if let Some(cap) = max_step {
            if step.abs() > cap {
                step = cap * step.signum();
            }
        }
        x = x - step;
    }
    let r = f(x);
    if r.abs() <= tol {
        Ok(x)
    } else {
        Err(ComputeError::NewtonDiverged {
            residual: r.abs().lossy(),
            iterations: max_iter,
        })
    }
}

/// Damped 2D Newton. `system` returns the residual pair and the 2x2
/// Jacobian at a point; convergence is on the max-norm of the residual.
pub fn newton_2d<T: Real>(
    system: impl Fn([T; 2]) -> ([T; 2], [[T; 2]; 2]),
    x0: [T; 2],
    tol: T,
    max_iter: usize,
) -> ComputeResult<[T; 2]> {
    let mut x = x0;
    let mut best = x0;
    let mut best_res = T::infinity();
    for _ in 0..max_iter {
        let (r, j) = system(x);
        let res = r[0].abs().max(r[1].abs());
        if res < best_res {
            best_res = res;
            best = x;
        }
        if res <= tol {
            return Ok(x);
        }
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det == T::zero() || !det.is_finite() {
            break;
        }
        let dx = [
            (r[0] * j[1][1] - r[1] * j[0][1]) / det,
            (r[1] * j[0][0] - r[0] * j[1][0]) / det,
        ];
        // halve the step until the residual does not blow up
        let mut lambda = T::one();
        let mut accepted = false;
        for _ in 0..8 {
            let cand = [x[0] - lambda * dx[0], x[1] - lambda * dx[1]];
            let (rc, _) = system(cand);
            let resc = rc[0].abs().max(rc[1].abs());
            if resc.is_finite() && resc < res {
                x = cand;
                accepted = true;
                break;
            }
            lambda = lambda * T::of(0.5);
        }
        if !accepted {
            break;
        }
    }
    let (r, _) = system(best);
    let res = r[0].abs().max(r[1].abs());
    if res <= tol {
        Ok(best)
    } else {
        Err(ComputeError::NewtonDiverged {
            residual: res.lossy(),
            iterations: max_iter,
        })
    }
}

/// Solve a small dense linear system by Gaussian elimination with partial
/// pivoting. Returns `None` on a (numerically) singular matrix.
pub fn solve_dense<T: Real>(mut a: Vec<Vec<T>>, mut b: Vec<T>) -> Option<Vec<T>> {
    let n = b.len();
    for col in 0..n {
        let mut piv = col;
        for row in col + 1..n {
            if a[row][col].abs() > a[piv][col].abs() {
                piv = row;
            }
        }
        if a[piv][col].abs() <= T::epsilon() * T::of(16.0) {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] = a[row][k] - f * a[col][k];
            }
            b[row] = b[row] - f * b[col];
        }
    }
    let mut x = vec![T::zero(); n];
    for col in (0..n).rev() {
        let mut s = b[col];
        for k in col + 1..n {
            s = s - a[col][k] * x[k];
        }
        x[col] = s / a[col][col];
    }
    Some(x)
}

/// Least-squares polynomial fit of the given degree through the sample
/// points, via the normal equations (fine for the tiny fits used here).
pub fn polyfit<T: Real>(xs: &[T], ys: &[T], degree: usize) -> Option<crate::poly::Poly<T, 1>> {
    let m = degree + 1;
    if xs.len() < m || xs.len() != ys.len() {
        return None;
    }
    let mut ata = vec![vec![T::zero(); m]; m];
    let mut atb = vec![T::zero(); m];
    for (&x, &y) in xs.iter().zip(ys) {
        let mut powers = Vec::with_capacity(m);
        let mut p = T::one();
        for _ in 0..m {
            powers.push(p);
            p = p * x;
        }
        for i in 0..m {
            for j in 0..m {
                ata[i][j] = ata[i][j] + powers[i] * powers[j];
            }
            atb[i] = atb[i] + powers[i] * y;
        }
    }
    let coef = solve_dense(ata, atb)?;
    Some(crate::poly::Poly::from_terms(
        coef.into_iter().enumerate().map(|(i, c)| ([i as u8], c)).collect(),
    ))
}

/// Bisect a boolean predicate on `[lo, hi]` with `pred(lo) != pred(hi)`;
/// returns the transition point to within `tol`.
pub fn bisect_predicate<T: Real>(
    pred: impl Fn(T) -> bool,
    mut lo: T,
    mut hi: T,
    tol: T,
    max_iter: usize,
) -> T {
    let plo = pred(lo);
    for _ in 0..max_iter {
        if (hi - lo).abs() <= tol {
            break;
        }
        let mid = (lo + hi) * T::of(0.5);
        if pred(mid) == plo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo + hi) * T::of(0.5)
}
