//! Command-line front end.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use serde_json::{json, Value};

use crate::arith::twisted_sum;
use crate::basis::{canonical_basis, Cusp};
use crate::cyclo::{parse_rational64, ratio_string, CycNum};
use crate::error::{Error, Result};
use crate::eta::{generator, theta_series, EtaQuotient, Generator, SL2Matrix, ThetaKind};
use crate::lift::{constant_term_formula, gamma0_lift, DiscClass};
use crate::product::{borcherds_product, boundary_limit, product_weight, FJSeries};
use crate::series::QSeries;
use crate::weyl::{heegner_solutions, weyl_vector};

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser, Debug)]
#[command(name = "borcherds", version, about = "Exact Borcherds products on U(2,1) over Q(i)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct Output {
    /// Emit a JSON envelope instead of text.
    #[arg(long)]
    pub json: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Canonical basis element F_{k,m} at a cusp of Gamma0(4).
    Basis {
        #[arg(long, default_value = "inf")]
        cusp: Cusp,
        #[arg(short = 'k')]
        k: u32,
        #[arg(short = 'm')]
        m: u32,
        #[arg(long, default_value = "20", value_parser = parse_rational64)]
        prec: Rational64,
        #[command(flatten)]
        out: Output,
    },
    /// Gamma0(4)-lift of F_{k,m} to the Weil representation.
    Lift {
        #[arg(short = 'k')]
        k: u32,
        #[arg(short = 'm')]
        m: u32,
        #[arg(long, default_value = "20", value_parser = parse_rational64)]
        prec: Rational64,
        #[command(flatten)]
        out: Output,
    },
    /// Weyl vector of the chamber W_m.
    Weyl {
        #[arg(short = 'm')]
        m: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Components of the Heegner divisor H(m, 0) up to a height.
    Divisor {
        #[arg(short = 'm')]
        m: u64,
        #[arg(long)]
        height: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Truncated Fourier-Jacobi expansion of Psi(tau, sigma; F_m).
    Product {
        #[arg(short = 'm')]
        m: u64,
        #[arg(long = "prec-q", default_value = "6", value_parser = parse_rational64)]
        prec_q: Rational64,
        #[arg(long = "prec-t", default_value = "6", value_parser = parse_rational64)]
        prec_t: Rational64,
        #[command(flatten)]
        out: Output,
    },
    /// Golden checks.
    Selftest {
        #[command(flatten)]
        out: Output,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Basis { .. } => "basis",
            Command::Lift { .. } => "lift",
            Command::Weyl { .. } => "weyl",
            Command::Divisor { .. } => "divisor",
            Command::Product { .. } => "product",
            Command::Selftest { .. } => "selftest",
        }
    }

    fn json(&self) -> bool {
        match self {
            Command::Basis { out, .. }
            | Command::Lift { out, .. }
            | Command::Weyl { out, .. }
            | Command::Divisor { out, .. }
            | Command::Product { out, .. }
            | Command::Selftest { out } => out.json,
        }
    }

    fn params(&self) -> Value {
        match self {
            Command::Basis { cusp, k, m, prec, .. } => {
                json!({"cusp": cusp.name(), "k": k, "m": m, "prec": ratio_string(prec)})
            }
            Command::Lift { k, m, prec, .. } => json!({"k": k, "m": m, "prec": ratio_string(prec)}),
            Command::Weyl { m, .. } => json!({"m": m}),
            Command::Divisor { m, height, .. } => json!({"m": m, "height": height}),
            Command::Product { m, prec_q, prec_t, .. } => {
                json!({"m": m, "prec_q": ratio_string(prec_q), "prec_t": ratio_string(prec_t)})
            }
            Command::Selftest { .. } => json!({}),
        }
    }
}

/// Result of a command: JSON payload, text lines, success flag.
struct Report {
    results: Value,
    text: Vec<(String, String)>,
    ok: bool,
}

impl Report {
    fn new(results: Value) -> Self {
        Report { results, text: Vec::new(), ok: true }
    }

    fn line(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.text.push((key.into(), value.to_string()));
        self
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn basis_cmd(cusp: Cusp, k: u32, m: u32, prec: Rational64) -> Result<Report> {
    let f = canonical_basis(cusp, k, m, prec)?;
    f.check_shape()?;
    let results = json!({
        "k": k,
        "m": m,
        "cusp": cusp.name(),
        "poly": to_value(&f.poly),
        "lead": to_value(&f.lead),
        "principal_exponent": ratio_string(&f.principal_exponent()),
        "expansion": to_value(&f.expansion),
        "cusp_expansion": to_value(&f.cusp_expansion),
    });
    Ok(Report::new(results)
        .line("element", format!("F_{{{k},{m}}} at cusp {}", cusp.name()))
        .line("polynomial", &f.poly)
        .line("leading coefficient", &f.lead)
        .line("expansion", &f.expansion)
        .line("at cusp", &f.cusp_expansion))
}

fn lift_cmd(k: u32, m: u32, prec: Rational64) -> Result<Report> {
    let f = canonical_basis(Cusp::Inf, k, m, prec)?;
    let v = gamma0_lift(&f, prec)?;
    let c0 = v.coeff(Rational64::from_integer(0), DiscClass::Zero)?;
    let principal: std::collections::BTreeMap<u64, CycNum> = f
        .expansion
        .terms()
        .take_while(|(e, _)| *e < Rational64::from_integer(0))
        .filter(|(e, _)| e.is_integer())
        .map(|(e, c)| ((-e.to_integer()) as u64, c.clone()))
        .collect();
    let own_c0 = f.expansion.coeff(Rational64::from_integer(0))?;
    let predicted = constant_term_formula(k, &principal, &own_c0)?;
    let principal_json: Vec<Value> = v
        .principal_part()
        .into_iter()
        .map(|(mu, e, c)| json!({"class": mu.name(), "exp": ratio_string(&e), "coeff": to_value(&c)}))
        .collect();
    let results = json!({
        "components": to_value(&v),
        "principal_part": principal_json,
        "c0_phi0": to_value(&c0),
        "c0_formula": to_value(&predicted),
        "support_ok": v.support_ok(),
    });
    let mut rep = Report::new(results);
    for mu in DiscClass::ALL {
        rep = rep.line(format!("phi_{}", mu.name()), v.comp(mu));
    }
    rep = rep.line("c(0, phi_0)", &c0).line("constant term formula", &predicted);
    rep.ok = predicted == c0;
    Ok(rep)
}

fn weyl_cmd(m: u64) -> Result<Report> {
    let w = weyl_vector(m)?;
    Ok(Report::new(to_value(&w))
        .line("rho_e3", w.rho_e3)
        .line("rho_e4", w.rho_e4)
        .line("rho", w.rho_v0))
}

fn divisor_cmd(m: u64, height: u64) -> Result<Report> {
    let sols = heegner_solutions(m, height);
    let mut rep = Report::new(json!({"count": sols.len(), "components": to_value(&sols)}));
    rep = rep.line("count", sols.len());
    for s in &sols {
        rep = rep.line(format!("{:?}", s.tuple), format!("re {:?}  im {:?}", s.eq_re, s.eq_im));
    }
    Ok(rep)
}

fn product_cmd(m: u64, prec_q: Rational64, prec_t: Rational64) -> Result<Report> {
    let psi: FJSeries = borcherds_product(m, prec_q, prec_t)?;
    let weight = product_weight(m);
    let results = json!({
        "weight": weight,
        "normalization_constant": "1",
        "weyl": to_value(&weyl_vector(m)?),
        "series": to_value(&psi),
    });
    let mut rep = Report::new(results).line("weight", weight).line("terms", psi.num_terms());
    for (x, c) in psi.terms() {
        rep = rep.line(x.to_string(), c);
    }
    Ok(rep)
}

/// One golden check.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

fn int(n: i64) -> Rational64 {
    Rational64::from_integer(n)
}

fn golden_series(scale: CycNum, terms: &[(Rational64, i64)], prec: Rational64) -> QSeries {
    QSeries::from_terms(terms.iter().map(|&(e, c)| (e, &scale * &CycNum::from_int(c))), prec)
}

fn f11_quotient() -> Result<EtaQuotient> {
    Ok(Generator::Theta2.eta_quotient().mul(&Generator::Theta1.eta_quotient().pow(-1)?))
}

fn check_s_slash() -> Result<bool> {
    let got = f11_quotient()?.slash(-1, &SL2Matrix::S, int(2))?;
    let c = CycNum::i().scale(&BigRational::from_integer(BigInt::from(32)));
    let r = |n, d| Rational64::new(n, d);
    let want = golden_series(
        c,
        &[
            (int(0), 1),
            (r(1, 4), 12),
            (r(1, 2), 76),
            (r(3, 4), 352),
            (int(1), 1356),
            (r(5, 4), 4600),
            (r(3, 2), 14176),
            (r(7, 4), 40512),
        ],
        int(2),
    );
    Ok(got == want)
}

fn check_delta_slash() -> Result<bool> {
    let got = f11_quotient()?.slash(-1, &SL2Matrix::DELTA, int(3))?;
    let r = |n, d| Rational64::new(n, d);
    let want = golden_series(CycNum::from_int(64), &[(r(1, 2), 1), (r(3, 2), -8), (r(5, 2), 42)], int(3));
    Ok(got == want)
}

fn check_c0() -> Result<bool> {
    let f = canonical_basis(Cusp::Inf, 1, 1, int(2))?;
    let v = gamma0_lift(&f, int(2))?;
    Ok(v.coeff(int(0), DiscClass::Zero)? == CycNum::from_int(68) && twisted_sum(1, 64, 4) == 68)
}

fn check_jacobi() -> Result<bool> {
    let prec = int(50);
    let t00 = theta_series(ThetaKind::T00, prec);
    let t01 = theta_series(ThetaKind::T01, prec);
    let t10 = theta_series(ThetaKind::T10, prec);
    let lhs = t00.pow(4)?;
    let rhs = t01.pow(4)?.add(&t10.pow(4)?);
    Ok(lhs == rhs && generator(Generator::Theta2, prec)?.agrees_with(&t00.pow(2)?))
}

fn check_weyl() -> Result<bool> {
    let w = weyl_vector(1)?;
    Ok(w.rho_e3 == Rational64::new(-23, 8) && w.rho_e4 == int(2) && w.rho_v0.re == int(-1))
}

fn check_boundary() -> Result<bool> {
    let lim = boundary_limit(1, int(2))?;
    let s = lim.t_slice(0, 0, 0);
    Ok(s.get(&-69) == Some(&BigInt::from(1)) && s.get(&-45) == Some(&BigInt::from(-68)))
}

pub fn golden_checks() -> Vec<Check> {
    let run = |name: &'static str, f: fn() -> Result<bool>| match f() {
        Ok(pass) => Check { name, pass, detail: String::new() },
        Err(e) => Check { name, pass: false, detail: e.to_string() },
    };
    vec![
        run("s_slash_expansion", check_s_slash),
        run("delta_slash_expansion", check_delta_slash),
        run("lift_constant_term_68", check_c0),
        run("jacobi_identity_q50", check_jacobi),
        run("weyl_vector_m1", check_weyl),
        run("boundary_limit_m1", check_boundary),
    ]
}

fn selftest_cmd() -> Report {
    let checks = golden_checks();
    let ok = checks.iter().all(|c| c.pass);
    let results = Value::Array(
        checks
            .iter()
            .map(|c| json!({"name": c.name, "pass": c.pass, "detail": c.detail}))
            .collect(),
    );
    let mut rep = Report::new(json!({"checks": results, "all_pass": ok}));
    for c in &checks {
        let status = if c.pass { "pass" } else { "FAIL" };
        rep = rep.line(c.name, if c.detail.is_empty() { status.to_string() } else { format!("{status} ({})", c.detail) });
    }
    rep.ok = ok;
    rep
}

fn execute(cmd: &Command) -> Result<Report> {
    match *cmd {
        Command::Basis { cusp, k, m, prec, .. } => basis_cmd(cusp, k, m, prec),
        Command::Lift { k, m, prec, .. } => lift_cmd(k, m, prec),
        Command::Weyl { m, .. } => weyl_cmd(m),
        Command::Divisor { m, height, .. } => divisor_cmd(m, height),
        Command::Product { m, prec_q, prec_t, .. } => product_cmd(m, prec_q, prec_t),
        Command::Selftest { .. } => Ok(selftest_cmd()),
    }
}

/// The envelope printed with `--json`; keys come out sorted.
pub fn envelope(cmd: &Command, results: Value) -> Value {
    json!({
        "command": cmd.name(),
        "params": cmd.params(),
        "engine_version": ENGINE_VERSION,
        "results": results,
    })
}

fn render_text(rep: &Report) -> String {
    let width = rep.text.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
    let mut s = String::new();
    for (k, v) in &rep.text {
        s.push_str(&format!("{k:<width$}  {v}\n"));
    }
    s
}

/// Runs the CLI on `argv`, writing to `out` and `err`; returns the exit code.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(rep) => {
            let body = if cli.command.json() {
                let v = envelope(&cli.command, rep.results.clone());
                serde_json::to_string_pretty(&v).expect("json") + "\n"
            } else {
                render_text(&rep)
            };
            let _ = out.write_all(body.as_bytes());
            if rep.ok {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::InvalidArgument(_) => 2,
                _ => 1,
            }
        }
    }
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}
