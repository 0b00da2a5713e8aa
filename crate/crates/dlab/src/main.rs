use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use dlab::diag::{self, Verdict};
use dlab::error::Error;
use dlab::jsonfmt;
use dlab::renorm::RenormedSpace;
use dlab::space::{PExp, SpaceDescriptor};
use dlab::vector::SparseVector;
use dlab::{verify, TOL};

#[derive(Parser)]
#[command(
    name = "dlab",
    about = "Renorming constructions and diametral-point diagnostics on finite-dimensional unit balls"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate the norm of a vector in a space described by a JSON file.
    Norm {
        space: PathBuf,
        /// Dense "1,0,2" or sparse JSON {"1":1} vector.
        #[arg(long)]
        vector: String,
    },
    /// Run a diametral diagnostic and print the report as JSON.
    Diag {
        space: PathBuf,
        /// One of: nabla, dpoint, daugavet, exposed.
        #[arg(long)]
        check: String,
        #[arg(long)]
        point: String,
        /// Slice depth for dpoint/daugavet checks.
        #[arg(long, default_value_t = 0.1)]
        alpha: f64,
        /// Distance slack accepted as "equal to 2".
        #[arg(long, default_value_t = diag::DEFAULT_EPS)]
        eps: f64,
    },
    /// Recompute every pinned identity of the built-in suite.
    VerifyPaper {
        /// Keep only rows whose id starts with this prefix.
        #[arg(long)]
        only: Option<String>,
        /// Emit machine-readable results instead of a table.
        #[arg(long)]
        json: bool,
    },
    /// Deficiency curves for the renormed construction, as CSV.
    Sweep {
        #[arg(long, default_value = "renorm-l2")]
        construction: String,
        /// Inclusive dimension range "lo..hi".
        #[arg(long, default_value = "2..12")]
        dims: String,
        /// Comma-separated slice depths.
        #[arg(long, default_value = "0.5,0.25,0.1,0.01")]
        alpha: String,
    },
    /// Direct access to the LP oracles.
    Oracle {
        #[command(subcommand)]
        cmd: OracleCmd,
    },
}

#[derive(Subcommand)]
enum OracleCmd {
    /// Minkowski-functional LP over the vertex model of the unit ball.
    Gauge {
        space: PathBuf,
        #[arg(long)]
        vector: String,
    },
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

fn error_exit(e: &Error) -> ExitCode {
    let code = match e {
        Error::OutOfDimension { .. } => 3,
        _ => 2,
    };
    fail(code, e)
}

fn load_space(path: &PathBuf) -> Result<SpaceDescriptor, ExitCode> {
    let text = fs::read_to_string(path).map_err(|e| fail(2, format!("{}: {e}", path.display())))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| fail(2, format!("{}: {e}", path.display())))?;
    jsonfmt::space_from_json(&value).map_err(|e| error_exit(&e))
}

fn parse_vector(s: &str) -> Result<SparseVector, ExitCode> {
    jsonfmt::vector_from_arg(s).map_err(|e| error_exit(&e))
}

/// %.12g: 12 significant digits, trailing zeros trimmed.
fn fmt_g(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let exp = v.abs().log10().floor() as i32;
    let trim = |s: String| {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    };
    if exp < -4 || exp >= 12 {
        let mantissa = trim(format!("{:.11}", v / 10f64.powi(exp)));
        format!(
            "{mantissa}e{}{:02}",
            if exp < 0 { '-' } else { '+' },
            exp.abs()
        )
    } else {
        trim(format!("{:.*}", (11 - exp).max(0) as usize, v))
    }
}

fn cmd_norm(space: &PathBuf, vector: &str) -> ExitCode {
    let space = match load_space(space) {
        Ok(s) => s,
        Err(c) => return c,
    };
    let x = match parse_vector(vector) {
        Ok(x) => x,
        Err(c) => return c,
    };
    match space.norm(&x) {
        Ok(v) => {
            println!("{v:.12}");
            ExitCode::SUCCESS
        }
        Err(e) => error_exit(&e),
    }
}

fn cmd_diag(space: &PathBuf, check: &str, point: &str, alpha: f64, eps: f64) -> ExitCode {
    let space = match load_space(space) {
        Ok(s) => s,
        Err(c) => return c,
    };
    let x = match parse_vector(point) {
        Ok(x) => x,
        Err(c) => return c,
    };
    let report = match check {
        "nabla" => diag::nabla_check(&space, &x, eps),
        "dpoint" => diag::dpoint_deficiency(&space, &x, alpha),
        "daugavet" => diag::daugavet_check(&space, &x, alpha, eps),
        "exposed" => diag::strongly_exposed_check(&space, &x),
        other => return fail(2, format!("unknown check {other:?}")),
    };
    match report {
        Ok(r) => {
            println!("{}", jsonfmt::report_to_json(&r));
            match r.verdict {
                Verdict::Holds => ExitCode::SUCCESS,
                Verdict::Fails => ExitCode::from(1),
                Verdict::LowerBoundOnly => ExitCode::from(4),
            }
        }
        Err(e) => error_exit(&e),
    }
}

fn cmd_verify(only: Option<&str>, as_json: bool) -> ExitCode {
    let rows = verify::run_suite(only);
    if rows.is_empty() {
        return fail(2, "no identity rows match the filter");
    }
    let all_pass = rows.iter().all(|r| r.pass);
    if as_json {
        let out: Vec<_> = rows
            .iter()
            .map(|r| {
                json!({
                    "id": r.id,
                    "anchor": r.anchor,
                    "expected": r.expected,
                    "computed": r.computed,
                    "pass": r.pass,
                })
            })
            .collect();
        println!("{}", serde_json::Value::Array(out));
    } else {
        for r in &rows {
            println!(
                "{} {:42} expected {:>14} computed {:>14}  {}",
                if r.pass { "PASS" } else { "FAIL" },
                r.id,
                fmt_g(r.expected),
                fmt_g(r.computed),
                r.anchor,
            );
        }
        let passed = rows.iter().filter(|r| r.pass).count();
        println!("{passed}/{} identities hold", rows.len());
    }
    if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn parse_dims(s: &str) -> Result<(usize, usize), Error> {
    let parts: Vec<&str> = s.split("..").collect();
    let bad = || Error::InvalidDescriptor(format!("bad dimension range {s:?}"));
    if parts.len() != 2 {
        return Err(bad());
    }
    let lo: usize = parts[0].trim().parse().map_err(|_| bad())?;
    let hi: usize = parts[1].trim().parse().map_err(|_| bad())?;
    if lo < 2 || hi < lo {
        return Err(bad());
    }
    if hi > 16 {
        return Err(Error::SizeLimit(format!("sweep dimension {hi} (cap 16)")));
    }
    Ok((lo, hi))
}

/// One deficiency-curve row for the renormed ℓ₂ construction.
///
/// Columns: a sampled lower-bound proxy for the supporting-slice
/// deficiency of e₁ (0 whenever the deterministic in-slice grid already
/// reaches distance 2), the separation margin of the exposing functional
/// e₁* − c·Σe_j* with c = 1/(1+√(n−1)) against the antipodal face, and
/// the renormed distance from e₁ to the constructed witness.
fn sweep_row(n: usize, alpha: f64) -> Result<(f64, f64, f64), Error> {
    let space = RenormedSpace::new(PExp::Finite(2.0), n)?;
    let e1 = SparseVector::unit(1);

    // Witness column: distance from e1 to its completed witness.
    let w = space.primal_witness(&e1, n as u32)?;
    let witness_dist = space.rnorm(&e1.sub(&w))?;

    // Exposure margin: f is norm-one, attains 1 at e1, and stays at least
    // `margin` below 1 on the antipodal generator face, whose f-maximum
    // is attained at the uniform direction u.
    let k = (n - 1) as f64;
    let c = 1.0 / (1.0 + k.sqrt());
    let f = e1.sub(&SparseVector::from_entries(
        (2..=n as u32).map(|j| (j, c)),
    ));
    if (space.rnorm_dual(&f)? - 1.0).abs() > TOL || (f.pairing(&e1) - 1.0).abs() > TOL {
        return Err(Error::Numerical("exposing functional failed validation".into()));
    }
    let u = SparseVector::from_entries((2..=n as u32).map(|j| (j, 1.0 / k.sqrt())));
    let antipode = e1.add(&u.scale(2.0)).neg();
    let margin = 1.0 - f.pairing(&antipode);

    // Slice proxy: deterministic sphere points inside S(e1*, alpha).
    let lambda = 1.0 - alpha / 2.0;
    let gen2 = e1.add(&SparseVector::unit(2).scale(2.0));
    let mut probes = vec![gen2.scale(lambda).sub(&e1.scale(1.0 - lambda))];
    if n >= 3 {
        let gen3 = e1.add(&SparseVector::unit(3).scale(2.0));
        probes.push(gen2.scale(lambda).sub(&gen3.scale(1.0 - lambda)));
    }
    let mut far = 0.0f64;
    for y in &probes {
        if space.rnorm(y)? > 1.0 + TOL || y.get(1) < 1.0 - alpha - TOL {
            return Err(Error::Numerical("sweep probe left the slice".into()));
        }
        far = far.max(space.rnorm(&e1.sub(y))?);
    }
    let proxy = (2.0 - far).max(0.0);
    Ok((proxy, margin, witness_dist))
}

fn cmd_sweep(construction: &str, dims: &str, alphas: &str) -> ExitCode {
    if construction != "renorm-l2" {
        return fail(2, format!("unknown construction {construction:?}"));
    }
    let (lo, hi) = match parse_dims(dims) {
        Ok(r) => r,
        Err(e) => return error_exit(&e),
    };
    let mut depths = Vec::new();
    for part in alphas.split(',') {
        match part.trim().parse::<f64>() {
            Ok(a) if a > 0.0 && a < 1.0 => depths.push(a),
            _ => return fail(2, format!("bad slice depth {part:?}")),
        }
    }
    let mut out = String::from("n,alpha,dpoint_proxy,exposure_margin,witness_distance\n");
    for n in lo..=hi {
        for &alpha in &depths {
            match sweep_row(n, alpha) {
                Ok((proxy, margin, dist)) => {
                    out.push_str(&format!(
                        "{n},{},{},{},{}\n",
                        fmt_g(alpha),
                        fmt_g(proxy),
                        fmt_g(margin),
                        fmt_g(dist)
                    ));
                }
                Err(e) => return error_exit(&e),
            }
        }
    }
    print!("{out}");
    ExitCode::SUCCESS
}

fn cmd_gauge(space: &PathBuf, vector: &str) -> ExitCode {
    let space = match load_space(space) {
        Ok(s) => s,
        Err(c) => return c,
    };
    let x = match parse_vector(vector) {
        Ok(x) => x,
        Err(c) => return c,
    };
    let ball = match space.to_vball() {
        Ok(b) => b,
        Err(e) => return error_exit(&e),
    };
    match ball.gauge(&x) {
        Ok(v) => {
            println!("{v:.12}");
            ExitCode::SUCCESS
        }
        Err(e) => error_exit(&e),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Norm { space, vector } => cmd_norm(&space, &vector),
        Cmd::Diag {
            space,
            check,
            point,
            alpha,
            eps,
        } => cmd_diag(&space, &check, &point, alpha, eps),
        Cmd::VerifyPaper { only, json } => cmd_verify(only.as_deref(), json),
        Cmd::Sweep {
            construction,
            dims,
            alpha,
        } => cmd_sweep(&construction, &dims, &alpha),
        Cmd::Oracle { cmd } => match cmd {
            OracleCmd::Gauge { space, vector } => cmd_gauge(&space, &vector),
        },
    }
}
