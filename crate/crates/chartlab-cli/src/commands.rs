use std::path::Path;
use std::process::ExitCode;

use anyhow::{Context, Result};

use chartlab::cascade::{self, CascadeConfig};
use chartlab::chart::{
    check_generic_conditions, classify, ChartDomain, ConditionReport, CurveFamily,
    FamilyDefinition, ParamPoint, SaddleSpectrum, SurfaceFamily, TangencyType,
};
use chartlab::family_file::{self, LoadError};
use chartlab::inclination::{self, GraphStrand};
use chartlab::unfolding;

use crate::csv::{fmt, fmt_opt, Table};

const EXIT_OK: u8 = 0;
const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

enum Loaded {
    Family(Box<FamilyDefinition<f64>>),
    Bail(ExitCode),
}

fn load_family(path: &Path) -> Loaded {
    match family_file::load::<f64>(path) {
        Ok(def) => Loaded::Family(Box::new(def)),
        Err(LoadError::Parse(e)) => {
            eprintln!("{}: {e}", path.display());
            Loaded::Bail(ExitCode::from(EXIT_USAGE))
        }
        Err(LoadError::Io(e)) => {
            eprintln!("cannot read {}: {e}", path.display());
            Loaded::Bail(ExitCode::from(EXIT_USAGE))
        }
    }
}

fn write_or_print(out: Option<&Path>, content: &str) -> Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, content).with_context(|| format!("writing {}", path.display()))?
        }
        None => print!("{content}"),
    }
    Ok(())
}

pub fn synth(
    kind: &str,
    alpha: f64,
    beta: f64,
    gamma: f64,
    seed: u64,
    out: &Path,
) -> Result<ExitCode> {
    let kind = match kind {
        "elliptic" => TangencyType::Elliptic,
        _ => TangencyType::Hyperbolic,
    };
    let spectrum = match SaddleSpectrum::new(alpha, beta, gamma) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("invalid spectrum: {e}");
            return Ok(ExitCode::from(EXIT_USAGE));
        }
    };
    let def = chartlab::synth::synthesize_definition(kind, &spectrum, seed);
    family_file::save(out, &def).with_context(|| format!("writing {}", out.display()))?;
    println!("wrote {} family to {}", kind.as_str(), out.display());
    Ok(ExitCode::from(EXIT_OK))
}

fn report_text(report: &ConditionReport<f64>) -> String {
    let mut s = String::new();
    for e in &report.entries {
        s.push_str(&format!(
            "{} {:<14} witness={} tol={} {}\n",
            e.condition.as_str(),
            e.label,
            fmt(e.witness),
            fmt(e.tol),
            if e.pass { "PASS" } else { "FAIL" }
        ));
    }
    s.push_str(&format!(
        "RESULT {}\n",
        if report.all_pass() { "pass" } else { "fail" }
    ));
    s
}

pub fn check(path: &Path, tol: f64, out: Option<&Path>) -> Result<ExitCode> {
    let def = match load_family(path) {
        Loaded::Family(d) => d,
        Loaded::Bail(code) => return Ok(code),
    };
    let report = check_generic_conditions(&def, tol);
    let text = report_text(&report);
    print!("{text}");
    if let Some(p) = out {
        std::fs::write(p, &text).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(ExitCode::from(if report.all_pass() {
        EXIT_OK
    } else {
        EXIT_FAIL
    }))
}

/// Shared preamble of the computing commands: the family must pass the
/// generic-conditions checker and validate structurally.
fn checked_family(
    def: &FamilyDefinition<f64>,
) -> Result<
    (
        SaddleSpectrum<f64>,
        ChartDomain<f64>,
        SurfaceFamily<f64>,
        CurveFamily<f64>,
    ),
    String,
> {
    let report = check_generic_conditions(def, 1e-6);
    if !report.all_pass() {
        let failing: Vec<String> = report
            .entries
            .iter()
            .filter(|e| !e.pass)
            .map(|e| format!("{} {}", e.condition.as_str(), e.label))
            .collect();
        return Err(format!(
            "family fails the generic conditions: {}",
            failing.join(", ")
        ));
    }
    let v = def.validate().map_err(|e| format!("invalid family: {e}"))?;
    Ok((v.spectrum, v.domain, v.surface, v.curve))
}

pub fn converge(
    path: &Path,
    mu0: f64,
    m_range: (usize, usize),
    eps: f64,
    out: Option<&Path>,
) -> Result<ExitCode> {
    let def = match load_family(path) {
        Loaded::Family(d) => d,
        Loaded::Bail(code) => return Ok(code),
    };
    let (spectrum, domain, _surface, curve) = match checked_family(&def) {
        Ok(v) => v,
        Err(msg) => {
            eprintln!("{msg}");
            return Ok(ExitCode::from(EXIT_FAIL));
        }
    };
    if m_range.0 < curve.m0 {
        eprintln!("m-range starts below the strand base index m0 = {}", curve.m0);
        return Ok(ExitCode::from(EXIT_USAGE));
    }

    // normalize the crossing at this mu0 before measuring
    let shift = match inclination::solve_nu_tilde(curve.data(), mu0) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("cannot normalize the family at mu0 = {mu0}: {e}");
            return Ok(ExitCode::from(EXIT_FAIL));
        }
    };
    let strand = match GraphStrand::from_curve(curve.data(), &domain) {
        Ok(g) => g.shift_nu(shift),
        Err(e) => {
            eprintln!("cannot normalize the strand to graph form: {e}");
            return Ok(ExitCode::from(EXIT_FAIL));
        }
    };

    let p = ParamPoint::new(mu0, 0.0);
    let ratio_dy = spectrum.beta() / spectrum.alpha();
    let ratio_dz = spectrum.gamma() / spectrum.alpha();
    let ratio_d2y = spectrum.beta() / (spectrum.alpha() * spectrum.alpha());
    let ratio_d2z = spectrum.gamma() / (spectrum.alpha() * spectrum.alpha());

    let mut table = Table::new(&[
        "n",
        "sup_y",
        "sup_z",
        "sup_dy",
        "sup_dz",
        "sup_d2y",
        "sup_d2z",
        "max_curvature",
        "expected_sup_dy",
        "expected_sup_dz",
        "expected_sup_d2y",
        "expected_sup_d2z",
    ]);
    let mut base: Option<chartlab::inclination::C2Deviation<f64>> = None;
    let mut truncated = None;
    for m in m_range.0..=m_range.1 {
        let n = m - curve.m0;
        let s = match inclination::iterate_graph_strand(&spectrum, &strand, p, n) {
            Ok(s) => s,
            Err(e) => {
                truncated = Some((n, e));
                break;
            }
        };
        let d = inclination::c2_deviation(&s);
        let b = *base.get_or_insert_with(|| {
            let s0 = inclination::iterate_graph_strand(&spectrum, &strand, p, 0)
                .expect("base iterate");
            inclination::c2_deviation(&s0)
        });
        let ni = n as i32;
        table.row(&[
            n.to_string(),
            fmt(d.sup_y),
            fmt(d.sup_z),
            fmt(d.sup_dy),
            fmt(d.sup_dz),
            fmt(d.sup_d2y),
            fmt(d.sup_d2z),
            fmt(inclination::max_curvature(&s, 2048)),
            fmt(ratio_dy.powi(ni) * b.sup_dy),
            fmt(ratio_dz.powi(ni) * b.sup_dz),
            fmt(ratio_d2y.powi(ni) * b.sup_d2y),
            fmt(ratio_d2z.powi(ni) * b.sup_d2z),
        ]);
    }
    write_or_print(out, &table.finish())?;
    if let Some((n, e)) = truncated {
        eprintln!("table truncated at n = {n}: {e}");
    }
    match inclination::curvature_threshold(&spectrum, &domain, curve.data(), p, eps, 200) {
        Ok(Some(n)) => eprintln!("curvature threshold: first n with max curvature < {eps}: {n}"),
        Ok(None) => eprintln!("curvature threshold: not reached below n = 200"),
        Err(e) => eprintln!("curvature threshold: {e}"),
    }
    Ok(ExitCode::from(EXIT_OK))
}

#[allow(clippy::too_many_arguments)]
pub fn cascade(
    path: &Path,
    mu0: f64,
    m_range: (usize, usize),
    h0: Option<f64>,
    nu_bar: Option<f64>,
    tol: f64,
    out: Option<&Path>,
    force: bool,
) -> Result<ExitCode> {
    let def = match load_family(path) {
        Loaded::Family(d) => d,
        Loaded::Bail(code) => return Ok(code),
    };
    let (spectrum, domain, surface, curve) = match checked_family(&def) {
        Ok(v) => v,
        Err(msg) => {
            eprintln!("{msg}");
            return Ok(ExitCode::from(EXIT_FAIL));
        }
    };

    let kind = classify(surface.data()).expect("validated surface classifies");
    let t0 = surface.data().taylor_at(ParamPoint::origin());
    let required = cascade::required_mu_sign(kind, t0.b, surface.data().eta0())
        .expect("validated surface has nonzero b and eta0");
    let got = if mu0 > 0.0 { 1i8 } else { -1i8 };
    if got != required && !force {
        eprintln!(
            "mu0 = {mu0} has the wrong sign for a {} tangency with b(0,0) = {} and eta0 = {}:",
            kind.as_str(),
            fmt(t0.b),
            fmt(surface.data().eta0()),
        );
        eprintln!(
            "the strip is nonempty only for sign(mu0) = {required:+}; pass --force to run anyway"
        );
        let mut cfg = CascadeConfig::new(mu0, m_range.0.max(curve.m0), m_range.1);
        cfg.enforce_sign = false;
        cfg.h0 = h0;
        cfg.nu_bar = nu_bar;
        match cascade::run_cascade(&spectrum, &domain, &surface, &curve, &cfg) {
            Err(e) => eprintln!("evidence: {e}"),
            Ok(o) if o.records.is_empty() => {
                eprintln!("evidence: no tangency found for any iterate")
            }
            Ok(_) => {}
        }
        return Ok(ExitCode::from(EXIT_FAIL));
    }

    let mut cfg = CascadeConfig::new(mu0, m_range.0, m_range.1);
    cfg.h0 = h0;
    cfg.nu_bar = nu_bar;
    cfg.solve_tol = tol;
    cfg.enforce_sign = false; // the sign decision was made above
    let mut outcome = match cascade::run_cascade(&spectrum, &domain, &surface, &curve, &cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("cascade failed: {e}");
            return Ok(ExitCode::from(EXIT_FAIL));
        }
    };
    let (diags, c0) =
        match unfolding::annotate_cascade(&spectrum, &domain, &surface, &curve, &cfg, &mut outcome)
        {
            Ok(v) => v,
            Err(e) => {
                eprintln!("unfolding diagnostics failed: {e}");
                return Ok(ExitCode::from(EXIT_FAIL));
            }
        };

    let mut table = Table::new(&[
        "m",
        "nu_m",
        "t_m",
        "tau_x",
        "tau_y",
        "tau_z",
        "delta2",
        "curve_kappa",
        "surface_kappa",
        "class",
        "curve_speed",
        "graph_speed",
        "margin",
        "growth_ratio",
    ]);
    for (r, d) in outcome.records.iter().zip(&diags) {
        table.row(&[
            r.m.to_string(),
            fmt(r.nu_m),
            fmt(r.t_m),
            fmt(r.tau.x),
            fmt(r.tau.y),
            fmt(r.tau.z),
            fmt(r.gap_bend),
            fmt(r.curve_kappa),
            fmt(r.surface_kappa),
            r.contact.as_str().to_string(),
            fmt(d.curve_speed),
            fmt(d.graph_speed),
            fmt(d.margin),
            fmt_opt(d.growth_ratio),
        ]);
    }
    write_or_print(out, &table.finish())?;

    // summary on stdout (separate from the CSV when it goes to a file)
    let mut summary = String::new();
    summary.push_str(&format!(
        "cascade: {} tangency, mu0 = {}, required sign {:+}\n",
        outcome.tangency_type.as_str(),
        fmt(mu0),
        outcome.required_sign
    ));
    summary.push_str(&format!(
        "  nu-shift {}  orientation {:+}  h0 {}  nu-bar {}\n",
        fmt(outcome.nu_shift),
        outcome.orientation,
        fmt(outcome.h0),
        fmt(outcome.nu_bar)
    ));
    summary.push_str(&format!(
        "  accepted {} of {} iterates\n",
        outcome.records.len(),
        m_range.1 - m_range.0 + 1
    ));
    for (m, e) in &outcome.failures {
        summary.push_str(&format!("  m={m} FAILED: {e}\n"));
    }
    let margins_positive = outcome
        .records
        .iter()
        .all(|r| r.unfolding_margin.unwrap_or(0.0) > 0.0);
    let all_accepted = outcome.failures.is_empty() && !outcome.records.is_empty();
    let checks = [
        ("all-iterates-accepted", all_accepted),
        ("nu-strictly-decreasing", outcome.nu_strictly_decreasing()),
        ("all-quadratic", outcome.all_quadratic()),
        ("curvature-criterion", outcome.curvature_criterion()),
        ("margins-positive", margins_positive),
    ];
    for (name, ok) in checks {
        summary.push_str(&format!(
            "  invariant {name} {}\n",
            if ok { "PASS" } else { "FAIL" }
        ));
    }
    if let Some(r) = outcome.fitted_ratio {
        summary.push_str(&format!(
            "  fitted nu ratio per step {} (1/beta = {})\n",
            fmt(r),
            fmt(1.0 / spectrum.beta())
        ));
    }
    if let Some(k0) = outcome.kappa0 {
        summary.push_str(&format!("  sheet curvature floor kappa0 {}\n", fmt(k0)));
    }
    if let Some(c0) = c0 {
        summary.push_str(&format!("  unfolding floor C0 {}\n", fmt(c0)));
    }
    if out.is_some() {
        print!("{summary}");
    } else {
        eprint!("{summary}");
    }

    let ok = checks.iter().all(|(_, v)| *v);
    Ok(ExitCode::from(if ok { EXIT_OK } else { EXIT_FAIL }))
}

pub fn plotdata(
    path: &Path,
    mu0: f64,
    m_range: (usize, usize),
    h0: Option<f64>,
    out: &Path,
) -> Result<ExitCode> {
    let def = match load_family(path) {
        Loaded::Family(d) => d,
        Loaded::Bail(code) => return Ok(code),
    };
    std::fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let (spectrum, domain, surface, curve) = match checked_family(&def) {
        Ok(v) => v,
        Err(msg) => {
            eprintln!("{msg}");
            return Ok(ExitCode::from(EXIT_FAIL));
        }
    };
    let shift = inclination::solve_nu_tilde(curve.data(), mu0).unwrap_or(0.0);
    let p = ParamPoint::new(mu0, shift);

    // run the cascade best-effort for strip sweep and tangency points
    let mut cfg = CascadeConfig::new(mu0, m_range.0.max(curve.m0), m_range.1);
    cfg.h0 = h0;
    cfg.enforce_sign = false;
    let outcome = cascade::run_cascade(&spectrum, &domain, &surface, &curve, &cfg).ok();
    let h0_val = outcome.as_ref().map(|o| o.h0).or(h0).unwrap_or(1e-4);

    // sheet sections at z = 0 and z = h0
    for (lvl, name) in [(0.0, "section_z0.dat"), (h0_val, "section_zh0.dat")] {
        let mut text = String::from("# x y branch\n");
        let dom = surface.data().domain;
        let nx = 160;
        for i in 0..=nx {
            let x = dom.x_lo + (dom.x_hi - dom.x_lo) * i as f64 / nx as f64;
            let ny = 400;
            let f = |y: f64| surface.data().jet_unchecked(p, x, y).z - lvl;
            let mut prev_y = dom.y_lo;
            let mut prev_f = f(prev_y);
            let mut branch = 0;
            for j in 1..=ny {
                let y = dom.y_lo + (dom.y_hi - dom.y_lo) * j as f64 / ny as f64;
                let fy = f(y);
                if prev_f == 0.0 || (prev_f < 0.0) != (fy < 0.0) {
                    let mut lo = prev_y;
                    let mut hi = y;
                    let flo = prev_f;
                    for _ in 0..60 {
                        let mid = 0.5 * (lo + hi);
                        if (f(mid) < 0.0) == (flo < 0.0) {
                            lo = mid;
                        } else {
                            hi = mid;
                        }
                    }
                    text.push_str(&format!("{} {} {}\n", fmt(x), fmt(0.5 * (lo + hi)), branch));
                    branch += 1;
                }
                prev_y = y;
                prev_f = fy;
            }
        }
        std::fs::write(out.join(name), text)?;
    }

    // strand polylines at the normalized parameters
    if let Ok(strand) = GraphStrand::from_curve(curve.data(), &domain) {
        let strand = strand.shift_nu(shift);
        for m in m_range.0..=m_range.1 {
            let n = m - curve.m0;
            let Ok(s) =
                inclination::iterate_graph_strand(&spectrum, &strand, ParamPoint::new(mu0, 0.0), n)
            else {
                continue;
            };
            let mut text = String::from("# t x y z\n");
            let np = 200;
            for i in 0..=np {
                let t = -s.window + 2.0 * s.window * i as f64 / np as f64;
                let pt = s.point(t);
                text.push_str(&format!(
                    "{} {} {} {}\n",
                    fmt(t),
                    fmt(pt.x),
                    fmt(pt.y),
                    fmt(pt.z)
                ));
            }
            std::fs::write(out.join(format!("strand_m{m}.dat")), text)?;
        }
    }

    // strip extent over the sweep, and the tangency points
    let mut strip_text = String::from("# nu y_min y_max variant\n");
    let mut tang_text = String::from("# m nu_m x y z\n");
    if let Some(o) = &outcome {
        let orient = o.orientation as f64;
        let ns = 50;
        for i in 0..=ns {
            let nu = o.nu_bar * i as f64 / ns as f64;
            let p_nu = ParamPoint::new(mu0, shift + orient * nu);
            if let Ok(s) = cascade::strip(surface.data(), p_nu, o.h0) {
                strip_text.push_str(&format!(
                    "{} {} {} {}\n",
                    fmt(nu),
                    fmt(s.y_min),
                    fmt(s.y_max),
                    s.variant.as_str()
                ));
            }
        }
        for r in &o.records {
            tang_text.push_str(&format!(
                "{} {} {} {} {}\n",
                r.m,
                fmt(r.nu_m),
                fmt(r.tau.x),
                fmt(r.tau.y),
                fmt(r.tau.z)
            ));
        }
    } else if let Ok(s) = cascade::strip(surface.data(), p, h0_val) {
        strip_text.push_str(&format!(
            "0 {} {} {}\n",
            fmt(s.y_min),
            fmt(s.y_max),
            s.variant.as_str()
        ));
    }
    std::fs::write(out.join("strip.dat"), strip_text)?;
    std::fs::write(out.join("tangencies.dat"), tang_text)?;
    println!("wrote plot data to {}", out.display());
    Ok(ExitCode::from(EXIT_OK))
}
