//! Sparse multivariate polynomials with exact derivative and composition
//! arithmetic.
//!
//! Everything the chart model stores — surface Taylor data, strand
//! parametrizations, gap functions — is a polynomial in at most three
//! variables, so derivatives, parameter substitutions and the linear-map
//! pushforward are all coefficient operations with no sampling error. The
//! only approximate step anywhere below is locating real roots on an
//! interval, which is done by sign scanning plus bisection to machine
//! precision.

use std::collections::BTreeMap;

use crate::scalar::Real;

/// One monomial: `coeff * x0^e0 * ... * x{N-1}^e{N-1}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Term<T, const N: usize> {
    pub exps: [u8; N],
    pub coeff: T,
}

/// Sparse polynomial in `N` variables. Terms are kept sorted by exponent
/// vector and never carry a zero coefficient, so evaluation order (and hence
/// every emitted byte) is deterministic.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<T, const N: usize> {
    terms: Vec<Term<T, N>>,
}

impl<T: Real, const N: usize> Poly<T, N> {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Poly::from_terms(vec![([0u8; N], c)])
    }

    /// The variable `x_k` as a polynomial.
    pub fn var(k: usize) -> Self {
        assert!(k < N);
        let mut exps = [0u8; N];
        exps[k] = 1;
        Poly::from_terms(vec![(exps, T::one())])
    }

    /// Build from (exponents, coefficient) pairs; merges duplicates and
    /// drops exact zeros.
    pub fn from_terms(raw: Vec<([u8; N], T)>) -> Self {
        let mut map: BTreeMap<[u8; N], T> = BTreeMap::new();
        for (exps, c) in raw {
            let slot = map.entry(exps).or_insert_with(T::zero);
            *slot = *slot + c;
        }
        let terms = map
            .into_iter()
            .filter(|(_, c)| *c != T::zero())
            .map(|(exps, coeff)| Term { exps, coeff })
            .collect();
        Poly { terms }
    }

    pub fn terms(&self) -> &[Term<T, N>] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree, 0 for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.terms
            .iter()
            .map(|t| t.exps.iter().map(|&e| e as usize).sum())
            .max()
            .unwrap_or(0)
    }

    /// Degree in a single variable.
    pub fn degree_in(&self, k: usize) -> usize {
        self.terms
            .iter()
            .map(|t| t.exps[k] as usize)
            .max()
            .unwrap_or(0)
    }

    /// Coefficient of an exact exponent vector (zero if absent).
    pub fn coeff(&self, exps: [u8; N]) -> T {
        match self.terms.binary_search_by(|t| t.exps.cmp(&exps)) {
            Ok(i) => self.terms[i].coeff,
            Err(_) => T::zero(),
        }
    }

    pub fn eval(&self, x: &[T; N]) -> T {
        let mut acc = T::zero();
        for t in &self.terms {
            let mut m = t.coeff;
            for k in 0..N {
                if t.exps[k] > 0 {
                    m = m * x[k].powi(t.exps[k] as i32);
                }
            }
            acc = acc + m;
        }
        acc
    }

    /// Exact partial derivative with respect to `x_k`.
    pub fn partial(&self, k: usize) -> Self {
        let mut out = Vec::new();
        for t in &self.terms {
            let e = t.exps[k];
            if e == 0 {
                continue;
            }
            let mut exps = t.exps;
            exps[k] = e - 1;
            out.push((exps, t.coeff * T::of_usize(e as usize)));
        }
        Poly::from_terms(out)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut raw: Vec<([u8; N], T)> =
            self.terms.iter().map(|t| (t.exps, t.coeff)).collect();
        raw.extend(other.terms.iter().map(|t| (t.exps, t.coeff)));
        Poly::from_terms(raw)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-T::one()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut raw = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                let mut exps = [0u8; N];
                for k in 0..N {
                    exps[k] = a.exps[k]
                        .checked_add(b.exps[k])
                        .expect("polynomial degree overflow");
                }
                raw.push((exps, a.coeff * b.coeff));
            }
        }
        Poly::from_terms(raw)
    }

    pub fn scale(&self, c: T) -> Self {
        if c == T::zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    exps: t.exps,
                    coeff: t.coeff * c,
                })
                .collect(),
        }
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = Poly::constant(T::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Substitute `x_k -> s * x_k`; exact coefficient scaling.
    pub fn scale_var(&self, k: usize, s: T) -> Self {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    exps: t.exps,
                    coeff: t.coeff * s.powi(t.exps[k] as i32),
                })
                .filter(|t| t.coeff != T::zero())
                .collect(),
        }
    }

    /// Substitute `x_k -> replacement(x)`. Grouped Horner evaluation in the
    /// replaced variable keeps the term count tame.
    pub fn substitute(&self, k: usize, replacement: &Self) -> Self {
        let maxdeg = self.degree_in(k);
        // bucket[e] holds the polynomial multiplying x_k^e
        let mut buckets: Vec<Vec<([u8; N], T)>> = vec![Vec::new(); maxdeg + 1];
        for t in &self.terms {
            let mut exps = t.exps;
            let e = exps[k] as usize;
            exps[k] = 0;
            buckets[e].push((exps, t.coeff));
        }
        let mut acc = Poly::zero();
        for e in (0..=maxdeg).rev() {
            acc = acc.mul(replacement).add(&Poly::from_terms(buckets[e].clone()));
        }
        acc
    }

    /// Fix `x_k = v`, folding the variable into the coefficients (the
    /// exponent slot stays, at zero).
    pub fn fix_var(&self, k: usize, v: T) -> Self {
        let raw = self
            .terms
            .iter()
            .map(|t| {
                let mut exps = t.exps;
                let e = exps[k];
                exps[k] = 0;
                (exps, t.coeff * v.powi(e as i32))
            })
            .collect();
        Poly::from_terms(raw)
    }
}

impl<T: Real> Poly<T, 3> {
    /// Collapse the first two variables, leaving a univariate polynomial in
    /// the last one.
    pub fn collapse_to_last(&self, v0: T, v1: T) -> Poly<T, 1> {
        let raw = self
            .terms
            .iter()
            .map(|t| {
                (
                    [t.exps[2]],
                    t.coeff * v0.powi(t.exps[0] as i32) * v1.powi(t.exps[1] as i32),
                )
            })
            .collect();
        Poly::from_terms(raw)
    }
}

impl<T: Real> Poly<T, 2> {
    /// Widen a 2-variable polynomial into 3 variables; the two existing
    /// variables keep their indices, the new last variable is unused.
    pub fn lift3(&self) -> Poly<T, 3> {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    exps: [t.exps[0], t.exps[1], 0],
                    coeff: t.coeff,
                })
                .collect(),
        }
    }

    pub fn collapse_to_last(&self, v0: T) -> Poly<T, 1> {
        let raw = self
            .terms
            .iter()
            .map(|t| ([t.exps[1]], t.coeff * v0.powi(t.exps[0] as i32)))
            .collect();
        Poly::from_terms(raw)
    }
}

impl<T: Real> Poly<T, 1> {
    pub fn eval1(&self, x: T) -> T {
        self.eval(&[x])
    }

    pub fn deriv(&self) -> Self {
        self.partial(0)
    }
}

/// All real roots of a univariate polynomial on `[lo, hi]`, located by a
/// dense sign scan followed by bisection. Roots of even multiplicity that
/// never produce a sign change are not reported; callers that need extrema
/// pair this with interval endpoints and grid candidates.
pub fn roots_in_interval<T: Real>(p: &Poly<T, 1>, lo: T, hi: T) -> Vec<T> {
    let mut roots = Vec::new();
    if lo >= hi || p.is_zero() {
        return roots;
    }
    let samples = (64.max(16 * p.degree_in(0))).min(4096);
    let step = (hi - lo) / T::of_usize(samples);
    let mut x_prev = lo;
    let mut f_prev = p.eval1(lo);
    if f_prev == T::zero() {
        roots.push(lo);
    }
    for i in 1..=samples {
        let x = if i == samples {
            hi
        } else {
            lo + step * T::of_usize(i)
        };
        let f = p.eval1(x);
        if f == T::zero() {
            roots.push(x);
        } else if f_prev != T::zero() && (f_prev < T::zero()) != (f < T::zero()) {
            roots.push(bisect_root(p, x_prev, x));
        }
        x_prev = x;
        f_prev = f;
    }
    roots.dedup_by(|a, b| (*a - *b).abs() <= T::epsilon() * (T::one() + a.abs()));
    roots
}

fn bisect_root<T: Real>(p: &Poly<T, 1>, mut a: T, mut b: T) -> T {
    let mut fa = p.eval1(a);
    for _ in 0..200 {
        let m = (a + b) * T::of(0.5);
        if m <= a || m >= b {
            break;
        }
        let fm = p.eval1(m);
        if fm == T::zero() {
            return m;
        }
        if (fa < T::zero()) == (fm < T::zero()) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    (a + b) * T::of(0.5)
}

/// Supremum of `|p|` over `[lo, hi]` by critical-point enumeration: the
/// candidates are the endpoints plus the roots of `p'`.
pub fn sup_abs_on<T: Real>(p: &Poly<T, 1>, lo: T, hi: T) -> T {
    let mut best = p.eval1(lo).abs().max(p.eval1(hi).abs());
    for r in roots_in_interval(&p.deriv(), lo, hi) {
        best = best.max(p.eval1(r).abs());
    }
    best
}

/// Minimum and maximum of `p` over `[lo, hi]`, same candidate set.
pub fn range_on<T: Real>(p: &Poly<T, 1>, lo: T, hi: T) -> (T, T) {
    let mut mn = p.eval1(lo).min(p.eval1(hi));
    let mut mx = p.eval1(lo).max(p.eval1(hi));
    for r in roots_in_interval(&p.deriv(), lo, hi) {
        let v = p.eval1(r);
        mn = mn.min(v);
        mx = mx.max(v);
    }
    (mn, mx)
}
