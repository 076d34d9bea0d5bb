use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};

use copspec::classify::{symbol_class, FixedPointRecord};
use copspec::dynamics::{find_squaring_iterate, growth_certificate, GridSpec};
use copspec::poly::{parse, rat_int, Rational};
use copspec::resolvent::{
    residual, resolvent_apply, spectral_witness, uniform_grid, SchwartzTestFunction,
};
use copspec::roots::Sign;
use copspec::spectrum::{
    contains, spectrum_of, ComplexQ, Membership, SetExpr, SpectrumDescriptor, Status,
};
use num::complex::Complex64;

#[derive(Parser)]
#[command(name = "copspec", about = "Spectra of composition operators with polynomial symbols")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify the symbol: fixed points, spectrum descriptor, provenance
    Classify {
        #[arg(allow_hyphen_values = true)]
        symbol: String,
        #[arg(long)]
        json: bool,
        /// Write polar boundary samples of the descriptor set as CSV
        #[arg(long, value_name = "PATH")]
        plot_data: Option<PathBuf>,
    },
    /// Test membership of a rational point in the spectrum
    Member {
        #[arg(allow_hyphen_values = true)]
        symbol: String,
        /// re,im as exact rationals, e.g. 1,0 or 1/2,-3/4
        #[arg(long)]
        lambda: String,
    },
    /// Apply the truncated resolvent series to a test function on a grid
    Resolvent {
        #[arg(allow_hyphen_values = true)]
        symbol: String,
        /// re,im as floats
        #[arg(long, default_value = "1,0")]
        lambda: String,
        /// gaussian | hermite:k | bump:a,b
        #[arg(long, default_value = "gaussian")]
        g: String,
        /// L,N for N uniform points on [-L, L]
        #[arg(long, default_value = "10,801")]
        grid: String,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long)]
        json: bool,
        /// Write the grid function as CSV
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Construct the inverse-orbit witness forcing |f(y_m)| = |lambda|^{-m-1}
    Witness {
        #[arg(allow_hyphen_values = true)]
        symbol: String,
        /// re,im as floats, 0 < |lambda| <= 1
        #[arg(long, default_value = "1,0")]
        lambda: String,
        #[arg(long, default_value_t = 8)]
        mmax: usize,
        #[arg(long)]
        json: bool,
        /// Write the witness table as CSV
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Iteration diagnostics: squaring iterate and derivative growth
    Dynamics {
        #[arg(allow_hyphen_values = true)]
        symbol: String,
        /// Certify |phi_N(x)| >= K(1 + x^2) for some N: pass the K bound
        #[arg(long = "K")]
        k: Option<String>,
        /// Growth-certificate base r (rational, > 1 for certification)
        #[arg(long)]
        r: Option<String>,
        /// Derivative order for the growth certificate
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 12)]
        mmax: usize,
        #[arg(long)]
        json: bool,
    },
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    let t = s.trim();
    if let Ok(r) = Rational::from_str(t) {
        return Ok(r);
    }
    // decimal literal like -0.25
    if let Some(dot) = t.find('.') {
        let (int_part, frac_part) = (&t[..dot], &t[dot + 1..]);
        if frac_part.chars().all(|c| c.is_ascii_digit()) && !frac_part.is_empty() {
            let mut whole = String::from(int_part);
            whole.push_str(frac_part);
            if let Ok(num) = Rational::from_str(&whole) {
                let mut den = rat_int(1);
                for _ in 0..frac_part.len() {
                    den *= rat_int(10);
                }
                return Ok(num / den);
            }
        }
    }
    Err(format!("cannot parse rational '{s}'"))
}

fn parse_rational_pair(s: &str) -> Result<(Rational, Rational), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected re,im but got '{s}'"))?;
    Ok((parse_rational(a)?, parse_rational(b)?))
}

fn parse_float_pair(s: &str) -> Result<Complex64, String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected re,im but got '{s}'"))?;
    let re: f64 = a.trim().parse().map_err(|e| format!("bad re '{a}': {e}"))?;
    let im: f64 = b.trim().parse().map_err(|e| format!("bad im '{b}': {e}"))?;
    Ok(Complex64::new(re, im))
}

fn parse_test_function(s: &str) -> Result<SchwartzTestFunction, String> {
    if s == "gaussian" {
        return Ok(SchwartzTestFunction::gaussian());
    }
    if let Some(k) = s.strip_prefix("hermite:") {
        let order: u32 = k.parse().map_err(|e| format!("bad hermite order: {e}"))?;
        return Ok(SchwartzTestFunction::HermiteGaussian { order });
    }
    if let Some(ab) = s.strip_prefix("bump:") {
        let (a, b) = ab
            .split_once(',')
            .ok_or_else(|| "bump needs a,b".to_string())?;
        let a: f64 = a.parse().map_err(|e| format!("bad bump endpoint: {e}"))?;
        let b: f64 = b.parse().map_err(|e| format!("bad bump endpoint: {e}"))?;
        return Ok(SchwartzTestFunction::Bump { a, b });
    }
    Err(format!("unknown test function '{s}'"))
}

fn parse_grid(s: &str) -> Result<Vec<f64>, String> {
    let (l, n) = s
        .split_once(',')
        .ok_or_else(|| format!("expected L,N but got '{s}'"))?;
    let l: f64 = l.trim().parse().map_err(|e| format!("bad L: {e}"))?;
    let n: usize = n.trim().parse().map_err(|e| format!("bad N: {e}"))?;
    if l <= 0.0 || n < 2 {
        return Err("grid needs L > 0 and N >= 2".into());
    }
    Ok(uniform_grid(l, n))
}

fn rational_str(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn sign_str(s: Sign) -> &'static str {
    match s {
        Sign::Negative => "negative",
        Sign::Zero => "zero",
        Sign::Positive => "positive",
    }
}

fn set_to_json(set: &SetExpr) -> Value {
    match set {
        SetExpr::OriginOnly => json!("origin_only"),
        SetExpr::UnitCircle => json!("unit_circle"),
        SetExpr::ClosedUnitDisc => json!("closed_unit_disc"),
        SetExpr::ClosedDiscMinusOrigin => json!("closed_disc_minus_origin"),
        SetExpr::FullPlane => json!("full_plane"),
        SetExpr::PlaneMinusOrigin => json!("plane_minus_origin"),
        SetExpr::FinitePoints(pts) => {
            let items: Vec<Value> = pts
                .iter()
                .map(|p| json!([rational_str(&p.re), rational_str(&p.im)]))
                .collect();
            json!({ "finite_points": items })
        }
        SetExpr::Annulus {
            r_in,
            r_out,
            include_in,
            include_out,
        } => json!({
            "annulus": {
                "r_in": rational_str(r_in),
                "r_out": rational_str(r_out),
                "include_in": include_in,
                "include_out": include_out,
            }
        }),
        SetExpr::Union(parts) => {
            let items: Vec<Value> = parts.iter().map(set_to_json).collect();
            json!({ "union": items })
        }
    }
}

fn set_to_text(set: &SetExpr) -> String {
    match set {
        SetExpr::OriginOnly => "{0}".into(),
        SetExpr::UnitCircle => "unit circle".into(),
        SetExpr::ClosedUnitDisc => "closed unit disc".into(),
        SetExpr::ClosedDiscMinusOrigin => "closed unit disc minus origin".into(),
        SetExpr::FullPlane => "C".into(),
        SetExpr::PlaneMinusOrigin => "C minus origin".into(),
        SetExpr::FinitePoints(pts) => {
            let items: Vec<String> = pts
                .iter()
                .map(|p| {
                    if p.im.is_integer() && p.im == rat_int(0) {
                        format!("{}", p.re)
                    } else {
                        format!("{}+{}i", p.re, p.im)
                    }
                })
                .collect();
            format!("{{{}}}", items.join(", "))
        }
        SetExpr::Annulus {
            r_in,
            r_out,
            include_in,
            include_out,
        } => format!(
            "annulus {}{}, {}{}",
            if *include_in { "[" } else { "(" },
            r_in,
            r_out,
            if *include_out { "]" } else { ")" }
        ),
        SetExpr::Union(parts) => parts
            .iter()
            .map(set_to_text)
            .collect::<Vec<_>>()
            .join(" u "),
    }
}

fn display_interval(fp: &FixedPointRecord) -> copspec::roots::IntervalQ {
    copspec::roots::refine(&fp.point, &Rational::new(1.into(), 1024.into()))
}

fn fixed_point_json(fp: &FixedPointRecord) -> Value {
    let iso = &display_interval(fp);
    json!({
        "point_interval": [rational_str(&iso.lo), rational_str(&iso.hi)],
        "multiplicity": fp.multiplicity,
        "derivative_sign": sign_str(fp.deriv_vs_zero),
    })
}

fn spectrum_json(d: &SpectrumDescriptor) -> Value {
    let mut m = Map::new();
    match &d.status {
        Status::Exact(set) => {
            m.insert("status".into(), json!("exact"));
            m.insert("set".into(), set_to_json(set));
        }
        Status::Partial { lower, upper } => {
            m.insert("status".into(), json!("partial"));
            m.insert("lower".into(), set_to_json(lower));
            m.insert(
                "upper".into(),
                upper.as_ref().map(set_to_json).unwrap_or(Value::Null),
            );
        }
    }
    m.insert("provenance".into(), json!(d.provenance));
    Value::Object(m)
}

/// 17 significant digits, the shortest round-trip-safe decimal width for f64.
fn csv_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn boundary_samples(set: &SetExpr, out: &mut String) {
    let circle = |r: f64, out: &mut String| {
        for k in 0..256 {
            let t = 2.0 * std::f64::consts::PI * k as f64 / 256.0;
            let _ = writeln!(
                out,
                "{},{}",
                csv_float(r * t.cos()),
                csv_float(r * t.sin())
            );
        }
    };
    match set {
        SetExpr::OriginOnly => {
            let _ = writeln!(out, "{},{}", csv_float(0.0), csv_float(0.0));
        }
        SetExpr::FinitePoints(pts) => {
            for p in pts {
                let _ = writeln!(
                    out,
                    "{},{}",
                    csv_float(copspec::poly::rational_to_f64(&p.re)),
                    csv_float(copspec::poly::rational_to_f64(&p.im))
                );
            }
        }
        SetExpr::UnitCircle | SetExpr::ClosedUnitDisc => circle(1.0, out),
        SetExpr::ClosedDiscMinusOrigin => {
            circle(1.0, out);
            let _ = writeln!(out, "{},{}", csv_float(0.0), csv_float(0.0));
        }
        SetExpr::FullPlane => {}
        SetExpr::PlaneMinusOrigin => {
            let _ = writeln!(out, "{},{}", csv_float(0.0), csv_float(0.0));
        }
        SetExpr::Annulus { r_in, r_out, .. } => {
            circle(copspec::poly::rational_to_f64(r_in), out);
            circle(copspec::poly::rational_to_f64(r_out), out);
        }
        SetExpr::Union(parts) => {
            for p in parts {
                boundary_samples(p, out);
            }
        }
    }
}

fn cmd_classify(symbol: &str, json_out: bool, plot: Option<&PathBuf>) -> Result<u8, String> {
    let phi = parse(symbol).map_err(|e| e.to_string())?;
    let class = symbol_class(&phi).map_err(|e| e.to_string())?;
    let d = spectrum_of(&phi).map_err(|e| e.to_string())?;

    if let Some(path) = plot {
        let set = match &d.status {
            Status::Exact(s) => s,
            Status::Partial { lower, .. } => lower,
        };
        let mut csv = String::from("re,im\n");
        boundary_samples(set, &mut csv);
        std::fs::write(path, csv).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    }

    if json_out {
        let report = json!({
            "symbol": format!("{phi}"),
            "degree": class.degree,
            "fixed_points": class.fixed_points.iter().map(fixed_point_json).collect::<Vec<_>>(),
            "spectrum": spectrum_json(&d),
        });
        println!("{}", serde_json::to_string_pretty(&report).unwrap());
    } else {
        println!("symbol: {phi} (degree {})", class.degree);
        if class.fixed_points.is_empty() {
            println!("fixed points: none");
        } else {
            for fp in &class.fixed_points {
                let iso = &display_interval(fp);
                println!(
                    "fixed point in [{}, {}], multiplicity {}, phi' {}",
                    iso.lo,
                    iso.hi,
                    fp.multiplicity,
                    sign_str(fp.deriv_vs_zero)
                );
            }
        }
        match &d.status {
            Status::Exact(set) => println!("spectrum: exact {}", set_to_text(set)),
            Status::Partial { lower, upper } => {
                println!("spectrum: partial, lower bound {}", set_to_text(lower));
                if let Some(up) = upper {
                    println!("          upper bound {}", set_to_text(up));
                }
            }
        }
        println!("provenance: {}", d.provenance.join(", "));
    }
    Ok(if d.is_exact() { 0 } else { 2 })
}

fn cmd_member(symbol: &str, lambda: &str) -> Result<u8, String> {
    let phi = parse(symbol).map_err(|e| e.to_string())?;
    let (re, im) = parse_rational_pair(lambda)?;
    let d = spectrum_of(&phi).map_err(|e| e.to_string())?;
    let m = contains(&d, &ComplexQ::new(re, im));
    match m {
        Membership::In => {
            println!("In");
            Ok(0)
        }
        Membership::Out => {
            println!("Out");
            Ok(0)
        }
        Membership::Unknown => {
            println!("Unknown");
            Ok(2)
        }
    }
}

fn cmd_resolvent(
    symbol: &str,
    lambda: &str,
    g: &str,
    grid: &str,
    tol: f64,
    json_out: bool,
    out: Option<&PathBuf>,
) -> Result<u8, String> {
    let phi = parse(symbol).map_err(|e| e.to_string())?;
    let lambda = parse_float_pair(lambda)?;
    let g = parse_test_function(g)?;
    let nodes = parse_grid(grid)?;
    let (f, m_star) = resolvent_apply(&phi, lambda, &g, &nodes, tol).map_err(|e| e.to_string())?;
    let r = residual(&phi, lambda, &f, &g, &nodes, tol).map_err(|e| e.to_string())?;

    if let Some(path) = out {
        let mut csv = String::from("x,re_f,im_f\n");
        for (x, v) in f.grid.iter().zip(&f.values) {
            let _ = writeln!(csv, "{},{},{}", csv_float(*x), csv_float(v.re), csv_float(v.im));
        }
        std::fs::write(path, csv).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    }
    if json_out {
        let report = json!({
            "symbol": format!("{phi}"),
            "lambda": [lambda.re, lambda.im],
            "terms": m_star,
            "max_residual": r,
        });
        println!("{}", serde_json::to_string_pretty(&report).unwrap());
    } else {
        println!("terms: {m_star}");
        println!("max_residual: {r:.3e}");
    }
    Ok(0)
}

fn cmd_witness(
    symbol: &str,
    lambda: &str,
    mmax: usize,
    json_out: bool,
    out: Option<&PathBuf>,
) -> Result<u8, String> {
    let phi = parse(symbol).map_err(|e| e.to_string())?;
    let lambda = parse_float_pair(lambda)?;
    let w = spectral_witness(&phi, lambda, mmax).map_err(|e| e.to_string())?;

    let mut csv = String::from("m,y_m,re_f,im_f,abs_f\n");
    for (m, (y, v)) in w.y_m.iter().zip(&w.candidate_values).enumerate() {
        let _ = writeln!(
            csv,
            "{m},{},{},{},{}",
            csv_float(*y),
            csv_float(v.re),
            csv_float(v.im),
            csv_float(v.norm())
        );
    }
    if let Some(path) = out {
        std::fs::write(path, &csv).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    }
    if json_out {
        let rows: Vec<Value> = w
            .y_m
            .iter()
            .zip(&w.candidate_values)
            .enumerate()
            .map(|(m, (y, v))| json!({"m": m, "y": y, "f": [v.re, v.im], "abs": v.norm()}))
            .collect();
        let report = json!({
            "symbol": format!("{phi}"),
            "lambda": [lambda.re, lambda.im],
            "case": format!("{:?}", w.case),
            "fixed_point": w.fixed_point,
            "divergent": w.divergence_flag,
            "values": rows,
        });
        println!("{}", serde_json::to_string_pretty(&report).unwrap());
    } else {
        println!(
            "case {:?}, fixed point {:.6}, divergent: {}",
            w.case, w.fixed_point, w.divergence_flag
        );
        print!("{csv}");
    }
    Ok(0)
}

fn cmd_dynamics(
    symbol: &str,
    k: Option<&str>,
    r: Option<&str>,
    n: usize,
    mmax: usize,
    json_out: bool,
) -> Result<u8, String> {
    let phi = parse(symbol).map_err(|e| e.to_string())?;
    let mut report = Map::new();
    report.insert("symbol".into(), json!(format!("{phi}")));
    let mut lines: Vec<String> = Vec::new();

    if let Some(ks) = k {
        let kq = parse_rational(ks)?;
        let (big_n, a) = find_squaring_iterate(&phi, &kq).map_err(|e| e.to_string())?;
        lines.push(format!("N={big_n}, a={a}"));
        report.insert(
            "squaring_iterate".into(),
            json!({"N": big_n, "a": rational_str(&a)}),
        );
    }
    if let Some(rs) = r {
        let rq = parse_rational(rs)?;
        let grid = GridSpec::default_for(&phi);
        let cert = growth_certificate(&phi, n, &rq, mmax, &grid).map_err(|e| e.to_string())?;
        lines.push(format!("growth certificate: q={}, C={:.6e}", cert.q, cert.c));
        report.insert(
            "growth_certificate".into(),
            json!({"n": cert.n, "r": rational_str(&cert.r), "q": cert.q, "C": cert.c, "m_max": cert.m_max}),
        );
    }
    if k.is_none() && r.is_none() {
        let class = symbol_class(&phi).map_err(|e| e.to_string())?;
        lines.push(format!(
            "degree {}, {} real fixed point(s), mean ergodic: {}",
            class.degree,
            class.fixed_points.len(),
            class.mean_ergodic
        ));
        report.insert("degree".into(), json!(class.degree));
        report.insert("fixed_point_count".into(), json!(class.fixed_points.len()));
        report.insert("mean_ergodic".into(), json!(class.mean_ergodic));
    }

    if json_out {
        println!("{}", serde_json::to_string_pretty(&Value::Object(report)).unwrap());
    } else {
        for l in lines {
            println!("{l}");
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if e.use_stderr() => {
            eprint!("{e}");
            return ExitCode::from(1);
        }
        Err(e) => {
            // --help / --version
            print!("{e}");
            return ExitCode::from(0);
        }
    };
    let result = match &cli.cmd {
        Cmd::Classify {
            symbol,
            json,
            plot_data,
        } => cmd_classify(symbol, *json, plot_data.as_ref()),
        Cmd::Member { symbol, lambda } => cmd_member(symbol, lambda),
        Cmd::Resolvent {
            symbol,
            lambda,
            g,
            grid,
            tol,
            json,
            out,
        } => cmd_resolvent(symbol, lambda, g, grid, *tol, *json, out.as_ref()),
        Cmd::Witness {
            symbol,
            lambda,
            mmax,
            json,
            out,
        } => cmd_witness(symbol, lambda, *mmax, *json, out.as_ref()),
        Cmd::Dynamics {
            symbol,
            k,
            r,
            n,
            mmax,
            json,
        } => cmd_dynamics(symbol, k.as_deref(), r.as_deref(), *n, *mmax, *json),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}
