//! Family definition files: a line-oriented key-value text format that
//! round-trips bit-exactly (floats are written in shortest round-trip form
//! and re-parsed to identical bits).
//!
//! ```text
//! family v1
//! spectrum <alpha> <beta> <gamma>
//! delta <half-width>
//! m0 <index>
//! surface.domain <x_lo> <x_hi> <y_lo> <y_hi>
//! surface.<coef> <mu_exp> <nu_exp> <coeff>     # coef in {u, v, a, b, c, d}
//! surface.higher <x_exp> <y_exp> <coeff>       # tail term, total degree >= 3
//! curve.tdomain <t_half>
//! curve.parambox <mu_half> <nu_half>
//! curve.<comp> <mu_exp> <nu_exp> <t_exp> <coeff>  # comp in {x, y, z}
//! ```
//!
//! `#` starts a comment; blank lines are ignored; repeated polynomial lines
//! accumulate terms. Loading performs no structural validation beyond
//! finiteness, so defective families can be loaded and diagnosed.

use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::chart::{CurveData, CurvePoly, FamilyDefinition, ParamPoly, Rect, SurfaceData};
use crate::poly::Poly;
use crate::scalar::Real;

#[derive(Debug, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

/// Serialize a family definition. Output is deterministic: terms appear in
/// the polynomials' sorted storage order.
pub fn to_text<T: Real>(def: &FamilyDefinition<T>) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "family v1");
    let _ = writeln!(s, "spectrum {} {} {}", def.alpha, def.beta, def.gamma);
    let _ = writeln!(s, "delta {}", def.delta);
    let _ = writeln!(s, "m0 {}", def.curve.m0);
    let d = &def.surface.domain;
    let _ = writeln!(
        s,
        "surface.domain {} {} {} {}",
        d.x_lo, d.x_hi, d.y_lo, d.y_hi
    );
    let param_poly = |name: &str, p: &ParamPoly<T>, s: &mut String| {
        for t in p.terms() {
            let _ = writeln!(s, "surface.{} {} {} {}", name, t.exps[0], t.exps[1], t.coeff);
        }
    };
    param_poly("u", &def.surface.center_u, &mut s);
    param_poly("v", &def.surface.center_v, &mut s);
    param_poly("a", &def.surface.coeff_a, &mut s);
    param_poly("b", &def.surface.coeff_b, &mut s);
    param_poly("c", &def.surface.coeff_c, &mut s);
    param_poly("d", &def.surface.coeff_d, &mut s);
    for &(p, q, h) in &def.surface.higher_order {
        let _ = writeln!(s, "surface.higher {} {} {}", p, q, h);
    }
    let _ = writeln!(s, "curve.tdomain {}", def.curve.t_half);
    let _ = writeln!(
        s,
        "curve.parambox {} {}",
        def.curve.param_half.0, def.curve.param_half.1
    );
    for (name, poly) in [
        ("x", &def.curve.x),
        ("y", &def.curve.y),
        ("z", &def.curve.z),
    ] {
        for t in poly.terms() {
            let _ = writeln!(
                s,
                "curve.{} {} {} {} {}",
                name, t.exps[0], t.exps[1], t.exps[2], t.coeff
            );
        }
    }
    s
}

struct LineCtx<'a> {
    line: usize,
    tokens: Vec<&'a str>,
}

impl<'a> LineCtx<'a> {
    fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            message: message.into(),
        }
    }

    fn expect_args(&self, n: usize) -> Result<(), ParseError> {
        if self.tokens.len() != n + 1 {
            return Err(self.err(format!(
                "expected {} values after '{}', got {}",
                n,
                self.tokens[0],
                self.tokens.len() - 1
            )));
        }
        Ok(())
    }

    fn num<T: Real>(&self, idx: usize) -> Result<T, ParseError> {
        self.tokens[idx]
            .parse::<T>()
            .map_err(|_| self.err(format!("cannot parse '{}' as a number", self.tokens[idx])))
    }

    fn exp(&self, idx: usize) -> Result<u8, ParseError> {
        self.tokens[idx]
            .parse::<u8>()
            .map_err(|_| self.err(format!("cannot parse '{}' as an exponent", self.tokens[idx])))
    }
}

/// Parse a family definition. Errors carry the offending line number.
pub fn from_text<T: Real>(text: &str) -> Result<FamilyDefinition<T>, ParseError> {
    let mut alpha = None;
    let mut beta = None;
    let mut gamma = None;
    let mut delta = None;
    let mut m0 = None;
    let mut domain = None;
    let mut t_half = None;
    let mut param_half = None;
    let mut header_seen = false;
    let mut surf_terms: [Vec<([u8; 2], T)>; 6] = Default::default();
    let mut higher: Vec<(u8, u8, T)> = Vec::new();
    let mut curve_terms: [Vec<([u8; 3], T)>; 3] = Default::default();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let ctx = LineCtx {
            line,
            tokens: content.split_whitespace().collect(),
        };
        let key = ctx.tokens[0];
        if !header_seen {
            if key != "family" || ctx.tokens.get(1) != Some(&"v1") {
                return Err(ctx.err("file must start with 'family v1'"));
            }
            header_seen = true;
            continue;
        }
        match key {
            "spectrum" => {
                ctx.expect_args(3)?;
                alpha = Some(ctx.num::<T>(1)?);
                beta = Some(ctx.num::<T>(2)?);
                gamma = Some(ctx.num::<T>(3)?);
            }
            "delta" => {
                ctx.expect_args(1)?;
                delta = Some(ctx.num::<T>(1)?);
            }
            "m0" => {
                ctx.expect_args(1)?;
                m0 = Some(
                    ctx.tokens[1]
                        .parse::<usize>()
                        .map_err(|_| ctx.err("m0 must be a nonnegative integer"))?,
                );
            }
            "surface.domain" => {
                ctx.expect_args(4)?;
                domain = Some(Rect {
                    x_lo: ctx.num::<T>(1)?,
                    x_hi: ctx.num::<T>(2)?,
                    y_lo: ctx.num::<T>(3)?,
                    y_hi: ctx.num::<T>(4)?,
                });
            }
            "surface.higher" => {
                ctx.expect_args(3)?;
                higher.push((ctx.exp(1)?, ctx.exp(2)?, ctx.num::<T>(3)?));
            }
            "surface.u" | "surface.v" | "surface.a" | "surface.b" | "surface.c"
            | "surface.d" => {
                ctx.expect_args(3)?;
                let slot = match key {
                    "surface.u" => 0,
                    "surface.v" => 1,
                    "surface.a" => 2,
                    "surface.b" => 3,
                    "surface.c" => 4,
                    _ => 5,
                };
                surf_terms[slot].push(([ctx.exp(1)?, ctx.exp(2)?], ctx.num::<T>(3)?));
            }
            "curve.tdomain" => {
                ctx.expect_args(1)?;
                t_half = Some(ctx.num::<T>(1)?);
            }
            "curve.parambox" => {
                ctx.expect_args(2)?;
                param_half = Some((ctx.num::<T>(1)?, ctx.num::<T>(2)?));
            }
            "curve.x" | "curve.y" | "curve.z" => {
                ctx.expect_args(4)?;
                let slot = match key {
                    "curve.x" => 0,
                    "curve.y" => 1,
                    _ => 2,
                };
                curve_terms[slot].push((
                    [ctx.exp(1)?, ctx.exp(2)?, ctx.exp(3)?],
                    ctx.num::<T>(4)?,
                ));
            }
            other => return Err(ctx.err(format!("unknown key '{other}'"))),
        }
    }

    let missing = |name: &str| ParseError {
        line: 0,
        message: format!("missing required key '{name}'"),
    };
    if !header_seen {
        return Err(missing("family v1"));
    }
    let [u, v, a, b, c, d] = surf_terms;
    let [cx, cy, cz] = curve_terms;
    let def = FamilyDefinition {
        alpha: alpha.ok_or_else(|| missing("spectrum"))?,
        beta: beta.ok_or_else(|| missing("spectrum"))?,
        gamma: gamma.ok_or_else(|| missing("spectrum"))?,
        delta: delta.ok_or_else(|| missing("delta"))?,
        surface: SurfaceData {
            center_u: Poly::from_terms(u),
            center_v: Poly::from_terms(v),
            coeff_a: Poly::from_terms(a),
            coeff_b: Poly::from_terms(b),
            coeff_c: Poly::from_terms(c),
            coeff_d: Poly::from_terms(d),
            higher_order: higher,
            domain: domain.ok_or_else(|| missing("surface.domain"))?,
        },
        curve: CurveData {
            x: CurvePoly::from_terms(cx),
            y: CurvePoly::from_terms(cy),
            z: CurvePoly::from_terms(cz),
            m0: m0.ok_or_else(|| missing("m0"))?,
            t_half: t_half.ok_or_else(|| missing("curve.tdomain"))?,
            param_half: param_half.ok_or_else(|| missing("curve.parambox"))?,
        },
    };
    Ok(def)
}

pub fn save<T: Real>(path: &Path, def: &FamilyDefinition<T>) -> Result<(), LoadError> {
    std::fs::write(path, to_text(def))?;
    Ok(())
}

pub fn load<T: Real>(path: &Path) -> Result<FamilyDefinition<T>, LoadError> {
    let text = std::fs::read_to_string(path)?;
    Ok(from_text(&text)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::{SaddleSpectrum, TangencyType};
    use crate::synth::synthesize_definition;

    #[test]
    fn round_trip_is_bit_exact() {
        let sp = SaddleSpectrum::new(4.0, 2.0, 0.5).unwrap();
        for seed in [1u64, 7, 42] {
            let def = synthesize_definition::<f64>(TangencyType::Elliptic, &sp, seed);
            let text = to_text(&def);
            let back = from_text::<f64>(&text).unwrap();
            assert_eq!(def, back, "parsed definition differs");
            assert_eq!(text, to_text(&back), "second serialization differs");
        }
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let bad = "family v1\nspectrum 4 2\n";
        let err = from_text::<f64>(bad).unwrap_err();
        assert_eq!(err.line, 2);

        let bad = "family v1\nnonsense 1 2 3\n";
        let err = from_text::<f64>(bad).unwrap_err();
        assert_eq!(err.line, 2);

        let bad = "spectrum 4 2 0.5\n";
        assert!(from_text::<f64>(bad).is_err());
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let sp = SaddleSpectrum::new(4.0, 2.0, 0.5).unwrap();
        let def = synthesize_definition::<f64>(TangencyType::Hyperbolic, &sp, 3);
        let text = to_text(&def);
        let commented = format!("# header comment\n\n{}\n# trailing\n", text);
        let back = from_text::<f64>(&commented).unwrap();
        assert_eq!(def, back);
    }
}
