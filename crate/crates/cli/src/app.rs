//! Argument parsing and dispatch.
//!
//! Exit codes: 0 success, 2 parse/usage error (bad flags or unparseable
//! polynomials/vectors), 3 domain error (valid syntax, invalid
//! mathematics — e.g. a nonzero-degree divisor handed to `bridge`), 4
//! internal consistency error (a theory-guaranteed identity failed,
//! which means a defect in the toolkit itself, never in the input).
//! Results go to standard out, diagnostics to standard error.

use std::ffi::OsString;

use clap::{Args, Parser, Subcommand, ValueEnum};
use deltaquot_core::matrix::ExactMatrix;
use deltaquot_core::{
    bridge, orders, poly, units, CuspidalDivisor, Error, FieldSpec, LevelContext, Poly,
};
use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::{json, Map, Value};

use crate::output::{bigint_list, bigint_value, csv_row, rational_str, Envelope, Format};
use crate::selftest::{self, Scale};

#[derive(Parser)]
#[command(
    name = "deltaquot",
    version,
    about = "Exact arithmetic for Delta-quotient modular units and rational \
             cuspidal divisor class groups on Drinfeld modular curves over F_q[T]"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
    Csv,
}

impl FormatArg {
    fn as_format(self) -> Format {
        match self {
            FormatArg::Text => Format::Text,
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        }
    }
}

#[derive(Args)]
struct FieldOpts {
    /// Field size q (a prime power)
    #[arg(long)]
    q: u64,
    /// Extension modulus as comma-separated F_p coefficients, constant
    /// term first (e.g. "1,1,1" for u^2+u+1 over F_2); defaults to a
    /// built-in Conway-style table
    #[arg(long)]
    modulus: Option<String>,
}

#[derive(Args)]
struct LevelOpts {
    #[command(flatten)]
    field: FieldOpts,
    /// Level polynomial n in F_q[T] (monic; non-monic input is
    /// normalized with a warning)
    #[arg(long)]
    n: String,
    /// Override the canonical prime order: comma-separated monic primes
    #[arg(long = "prime-order")]
    prime_order: Option<String>,
}

#[derive(Args)]
struct FormatOpt {
    /// Output format
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
}

#[derive(Subcommand)]
enum Cmd {
    /// Describe the coefficient field F_q
    Field {
        #[command(flatten)]
        field: FieldOpts,
        #[command(flatten)]
        fmt: FormatOpt,
    },
    /// Factor a polynomial over F_q into monic primes
    Factor {
        #[command(flatten)]
        field: FieldOpts,
        /// Polynomial to factor
        poly: String,
        #[command(flatten)]
        fmt: FormatOpt,
    },
    /// List the divisors of n in the canonical order
    Divisors {
        #[command(flatten)]
        level: LevelOpts,
        #[command(flatten)]
        fmt: FormatOpt,
    },
    /// Print (d, rho(d), deg_P(d)) for every cusp height d | n
    CuspDegrees {
        #[command(flatten)]
        level: LevelOpts,
        #[command(flatten)]
        fmt: FormatOpt,
    },
    /// Print the cusp-order matrix Lambda (rows: heights d, columns:
    /// divisors a)
    Orders {
        #[command(flatten)]
        level: LevelOpts,
        /// Print the exact inverse instead
        #[arg(long)]
        inverse: bool,
        #[command(flatten)]
        fmt: FormatOpt,
    },
    /// Check an exponent vector against the modular-unit criteria
    CheckUnit {
        #[command(flatten)]
        level: LevelOpts,
        /// Comma-separated integers, one per divisor, canonical order
        #[arg(long)]
        exponents: String,
        #[command(flatten)]
        fmt: FormatOpt,
    },
    /// Map a degree-0 cuspidal divisor to Delta-quotient exponents
    Bridge {
        #[command(flatten)]
        level: LevelOpts,
        /// Divisor as "height:coeff,height:coeff,..." with heights
        /// dividing n (e.g. "1:1,T^2+T:-1")
        #[arg(long)]
        divisor: String,
        #[command(flatten)]
        fmt: FormatOpt,
    },
    /// Conjectural order of the class of a degree-0 cuspidal divisor
    Order {
        #[command(flatten)]
        level: LevelOpts,
        /// Divisor as "height:coeff,height:coeff,..."
        #[arg(long)]
        divisor: String,
        #[command(flatten)]
        fmt: FormatOpt,
    },
    /// Exponent bound N(n)/(q-1) for the cuspidal divisor class group
    ExponentBound {
        #[command(flatten)]
        level: LevelOpts,
        #[command(flatten)]
        fmt: FormatOpt,
    },
    /// Run the built-in verification battery at reduced sizes
    Selftest {
        /// Run the full acceptance-scale battery instead
        #[arg(long)]
        full: bool,
        #[command(flatten)]
        fmt: FormatOpt,
    },
}

/// Parse `args` and run; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.cmd) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("deltaquot: {e}");
            match e {
                Error::Parse(_) => 2,
                Error::Domain(_) => 3,
                Error::Inconsistency(_) => 4,
            }
        }
    }
}

fn dispatch(cmd: Cmd) -> deltaquot_core::Result<i32> {
    match cmd {
        Cmd::Field { field, fmt } => cmd_field(&field, fmt.format.as_format()),
        Cmd::Factor { field, poly, fmt } => cmd_factor(&field, &poly, fmt.format.as_format()),
        Cmd::Divisors { level, fmt } => cmd_divisors(&level, fmt.format.as_format()),
        Cmd::CuspDegrees { level, fmt } => cmd_cusp_degrees(&level, fmt.format.as_format()),
        Cmd::Orders {
            level,
            inverse,
            fmt,
        } => cmd_orders(&level, inverse, fmt.format.as_format()),
        Cmd::CheckUnit {
            level,
            exponents,
            fmt,
        } => cmd_check_unit(&level, &exponents, fmt.format.as_format()),
        Cmd::Bridge {
            level,
            divisor,
            fmt,
        } => cmd_bridge(&level, &divisor, fmt.format.as_format()),
        Cmd::Order {
            level,
            divisor,
            fmt,
        } => cmd_order(&level, &divisor, fmt.format.as_format()),
        Cmd::ExponentBound { level, fmt } => cmd_exponent_bound(&level, fmt.format.as_format()),
        Cmd::Selftest { full, fmt } => Ok(cmd_selftest(full, fmt.format.as_format())),
    }
}

// ---------------------------------------------------------------------
// input construction
// ---------------------------------------------------------------------

/// Integer e-th root when exact: the p with p^e = q.
fn exact_root(q: u64, e: u32) -> Option<u64> {
    if e == 0 {
        return None;
    }
    if e == 1 {
        return Some(q);
    }
    let mut lo = 2u64;
    let mut hi = 1u64 << (64 / e).min(63);
    while lo <= hi {
        let mid = lo + (hi - lo) / 2;
        match mid.checked_pow(e) {
            Some(v) if v == q => return Some(mid),
            Some(v) if v < q => lo = mid + 1,
            _ => {
                if mid == 0 {
                    break;
                }
                hi = mid - 1;
            }
        }
    }
    None
}

fn build_spec(opts: &FieldOpts) -> deltaquot_core::Result<FieldSpec> {
    match &opts.modulus {
        None => FieldSpec::from_q(opts.q),
        Some(text) => {
            let coeffs: Vec<u64> = text
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<u64>()
                        .map_err(|_| Error::Parse(format!("bad modulus coefficient {s:?}")))
                })
                .collect::<Result<_, _>>()?;
            if coeffs.len() < 3 {
                return Err(Error::Domain(
                    "modulus must have degree at least 2 (at least 3 coefficients)".into(),
                ));
            }
            let e = (coeffs.len() - 1) as u32;
            let p = exact_root(opts.q, e).ok_or_else(|| {
                Error::Domain(format!(
                    "q = {} is not a p^{e} matching the degree-{e} modulus",
                    opts.q
                ))
            })?;
            let spec = FieldSpec::with_modulus(p, coeffs)?;
            if spec.q() != opts.q {
                return Err(Error::Domain(format!(
                    "modulus yields q = {}, not {}",
                    spec.q(),
                    opts.q
                )));
            }
            Ok(spec)
        }
    }
}

fn build_ctx(opts: &LevelOpts) -> deltaquot_core::Result<(FieldSpec, LevelContext)> {
    let spec = build_spec(&opts.field)?;
    let mut n = poly::parse(&spec, &opts.n)?;
    if !n.is_zero() && !n.is_monic() {
        let monic = poly::monic(&spec, &n)?;
        eprintln!(
            "warning: level {} is not monic; using {}",
            poly::display(&spec, &n),
            poly::display(&spec, &monic)
        );
        n = monic;
    }
    let ctx = match &opts.prime_order {
        None => LevelContext::new(&spec, &n)?,
        Some(text) => {
            let primes: Vec<Poly> = text
                .split(',')
                .map(|s| poly::parse(&spec, s))
                .collect::<deltaquot_core::Result<_>>()?;
            LevelContext::with_prime_order(&spec, &n, &primes)?
        }
    };
    Ok((spec, ctx))
}

fn parse_exponents(ctx: &LevelContext, text: &str) -> deltaquot_core::Result<Vec<BigInt>> {
    let vals: Vec<BigInt> = text
        .split(',')
        .map(|s| poly::parse_bigint(s.trim()))
        .collect::<deltaquot_core::Result<_>>()?;
    if vals.len() != ctx.num_divisors() {
        return Err(Error::Domain(format!(
            "expected {} exponents (one per divisor), got {}",
            ctx.num_divisors(),
            vals.len()
        )));
    }
    Ok(vals)
}

/// Parse "height:coeff,height:coeff,..." into a coefficient vector in
/// canonical divisor order; repeated heights accumulate.
fn parse_divisor(
    spec: &FieldSpec,
    ctx: &LevelContext,
    text: &str,
) -> deltaquot_core::Result<CuspidalDivisor> {
    let mut coeffs = vec![BigInt::zero(); ctx.num_divisors()];
    for item in text.split(',') {
        let (height_str, coeff_str) = item.rsplit_once(':').ok_or_else(|| {
            Error::Parse(format!("divisor term {item:?} is not \"height:coeff\""))
        })?;
        let height_raw = poly::parse(spec, height_str)?;
        if height_raw.is_zero() {
            return Err(Error::Domain("zero is not a divisor height".into()));
        }
        let height = poly::monic(spec, &height_raw)?;
        let idx = ctx.index_of(&height)?;
        coeffs[idx] += poly::parse_bigint(coeff_str.trim())?;
    }
    CuspidalDivisor::from_coeffs(ctx, coeffs)
}

// ---------------------------------------------------------------------
// output helpers
// ---------------------------------------------------------------------

/// Write to stdout, exiting quietly if the downstream consumer closed
/// the pipe (`deltaquot ... | head` must not panic).
fn write_stdout(s: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if out.write_all(s.as_bytes()).is_err() || out.flush().is_err() {
        std::process::exit(0);
    }
}

fn emit(fmt: Format, env: &Envelope, payload: Map<String, Value>, text: String, csv: String) {
    match fmt {
        Format::Json => {
            let value = env.wrap(payload);
            let mut rendered =
                serde_json::to_string_pretty(&value).expect("serializable payload");
            rendered.push('\n');
            write_stdout(&rendered);
        }
        Format::Text => write_stdout(&text),
        Format::Csv => write_stdout(&csv),
    }
}

fn obj(pairs: Vec<(&str, Value)>) -> Map<String, Value> {
    let mut m = Map::new();
    for (k, v) in pairs {
        m.insert(k.to_string(), v);
    }
    m
}

/// Render a square matrix as aligned text with divisor labels.
fn matrix_text(labels: &[String], m: &ExactMatrix) -> String {
    let n = m.size();
    let mut cells: Vec<Vec<String>> = Vec::with_capacity(n + 1);
    let mut header: Vec<String> = vec!["d\\a".to_string()];
    header.extend(labels.iter().cloned());
    cells.push(header);
    for i in 0..n {
        let mut row = vec![labels[i].clone()];
        for j in 0..n {
            row.push(rational_str(m.get(i, j)));
        }
        cells.push(row);
    }
    let mut widths = vec![0usize; n + 1];
    for row in &cells {
        for (j, cell) in row.iter().enumerate() {
            widths[j] = widths[j].max(cell.chars().count());
        }
    }
    let mut out = String::new();
    for row in &cells {
        let mut line = String::new();
        for (j, cell) in row.iter().enumerate() {
            if j > 0 {
                line.push_str("  ");
            }
            let pad = widths[j] - cell.chars().count();
            for _ in 0..pad {
                line.push(' ');
            }
            line.push_str(cell);
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

fn divisor_labels(ctx: &LevelContext) -> Vec<String> {
    let k = ctx.spec();
    ctx.divisors()
        .iter()
        .map(|d| poly::display(k, d))
        .collect()
}

// ---------------------------------------------------------------------
// subcommands
// ---------------------------------------------------------------------

fn cmd_field(opts: &FieldOpts, fmt: Format) -> deltaquot_core::Result<i32> {
    let spec = build_spec(opts)?;
    let env = Envelope::bare(spec.q());
    let show_elements = spec.q() <= 4096;
    let elements: Option<Vec<String>> = show_elements.then(|| {
        spec.elements()
            .iter()
            .map(|a| poly::display_elem(&spec, a))
            .collect()
    });
    let generator = spec.generator().ok().map(|g| poly::display_elem(&spec, &g));
    let payload = obj(vec![
        ("p", json!(spec.p())),
        ("extension_degree", json!(spec.extension_degree())),
        (
            "modulus",
            spec.modulus().map_or(Value::Null, |m| json!(m)),
        ),
        (
            "generator",
            generator
                .as_ref()
                .map_or(Value::Null, |g| Value::String(g.clone())),
        ),
        (
            "elements",
            elements
                .as_ref()
                .map_or(Value::Null, |es| json!(es)),
        ),
    ]);
    let mut text = if spec.extension_degree() == 1 {
        format!("q = {} (prime)\n", spec.q())
    } else {
        format!(
            "q = {} = {}^{}\nmodulus (constant first): {}\ngenerator: {}\n",
            spec.q(),
            spec.p(),
            spec.extension_degree(),
            spec.modulus()
                .map(|m| m
                    .iter()
                    .map(|c| c.to_string())
                    .collect::<Vec<_>>()
                    .join(","))
                .unwrap_or_default(),
            generator.clone().unwrap_or_default()
        )
    };
    let mut csv = format!(
        "key,value\nq,{}\np,{}\nextension_degree,{}\n",
        spec.q(),
        spec.p(),
        spec.extension_degree()
    );
    if let Some(m) = spec.modulus() {
        csv.push_str(&format!(
            "modulus,{}\n",
            m.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(";")
        ));
    }
    if let Some(es) = &elements {
        text.push_str(&format!("elements: {}\n", es.join(", ")));
        csv.push_str(&csv_row(&["elements".to_string(), es.join(";")]));
        csv.push('\n');
    } else {
        text.push_str("elements: omitted (q > 4096)\n");
    }
    emit(fmt, &env, payload, text, csv);
    Ok(0)
}

fn cmd_factor(opts: &FieldOpts, input: &str, fmt: Format) -> deltaquot_core::Result<i32> {
    let spec = build_spec(opts)?;
    let f = poly::parse(&spec, input)?;
    let fac = poly::factor(&spec, &f)?;
    let env = Envelope::bare(spec.q());
    let display = poly::display_factorization(&spec, &fac);
    let factors_json: Vec<Value> = fac
        .factors
        .iter()
        .map(|(p, e)| {
            json!({
                "prime": poly::display(&spec, p),
                "exponent": e,
            })
        })
        .collect();
    let payload = obj(vec![
        ("input", json!(poly::display(&spec, &f))),
        ("unit", json!(poly::display_elem(&spec, &fac.unit))),
        ("factors", Value::Array(factors_json)),
        ("factorization", json!(display)),
    ]);
    let text = format!("{display}\n");
    let mut csv = String::from("factor,exponent\n");
    csv.push_str(&csv_row(&[
        "unit".to_string(),
        poly::display_elem(&spec, &fac.unit),
    ]));
    csv.push('\n');
    for (p, e) in &fac.factors {
        csv.push_str(&csv_row(&[poly::display(&spec, p), e.to_string()]));
        csv.push('\n');
    }
    emit(fmt, &env, payload, text, csv);
    Ok(0)
}

fn cmd_divisors(opts: &LevelOpts, fmt: Format) -> deltaquot_core::Result<i32> {
    let (_, ctx) = build_ctx(opts)?;
    let env = Envelope::for_level(&ctx);
    let labels = divisor_labels(&ctx);
    let payload = obj(vec![("order", json!(labels))]);
    let mut text = String::new();
    let mut csv = String::from("index,divisor\n");
    for (i, d) in labels.iter().enumerate() {
        text.push_str(d);
        text.push('\n');
        csv.push_str(&csv_row(&[i.to_string(), d.clone()]));
        csv.push('\n');
    }
    emit(fmt, &env, payload, text, csv);
    Ok(0)
}

fn cmd_cusp_degrees(opts: &LevelOpts, fmt: Format) -> deltaquot_core::Result<i32> {
    let (_, ctx) = build_ctx(opts)?;
    let env = Envelope::for_level(&ctx);
    let labels = divisor_labels(&ctx);
    let mut rows: Vec<(String, BigInt, BigInt)> = Vec::new();
    for (i, label) in labels.iter().enumerate() {
        rows.push((label.clone(), ctx.rho(i), ctx.deg_p(i)?));
    }
    let cusps: Vec<Value> = rows
        .iter()
        .map(|(d, rho, deg)| {
            json!({
                "d": d,
                "rho": rho.to_string(),
                "deg_p": deg.to_string(),
            })
        })
        .collect();
    let payload = obj(vec![("cusps", Value::Array(cusps))]);
    let width = rows
        .iter()
        .map(|(d, _, _)| d.chars().count())
        .max()
        .unwrap_or(1)
        .max(1);
    let mut text = format!("{:>width$}  rho  deg_P\n", "d");
    let mut csv = String::from("d,rho,deg_P\n");
    for (d, rho, deg) in &rows {
        text.push_str(&format!(
            "{:>width$}  {:>3}  {:>5}\n",
            d,
            rho.to_string(),
            deg.to_string()
        ));
        csv.push_str(&csv_row(&[d.clone(), rho.to_string(), deg.to_string()]));
        csv.push('\n');
    }
    emit(fmt, &env, payload, text, csv);
    Ok(0)
}

fn cmd_orders(opts: &LevelOpts, inverse: bool, fmt: Format) -> deltaquot_core::Result<i32> {
    let (_, ctx) = build_ctx(opts)?;
    let env = Envelope::for_level(&ctx);
    let labels = divisor_labels(&ctx);
    let m = if inverse {
        orders::lambda_inverse(&ctx)?
    } else {
        orders::lambda(&ctx)?
    };
    let n = m.size();
    let entries: Vec<Value> = (0..n)
        .map(|i| {
            Value::Array(
                (0..n)
                    .map(|j| Value::String(rational_str(m.get(i, j))))
                    .collect(),
            )
        })
        .collect();
    let payload = obj(vec![
        (
            "matrix",
            json!(if inverse { "lambda_inverse" } else { "lambda" }),
        ),
        ("entries", Value::Array(entries)),
    ]);
    let text = matrix_text(&labels, &m);
    let mut csv = String::new();
    let mut header = vec!["d\\a".to_string()];
    header.extend(labels.iter().cloned());
    csv.push_str(&csv_row(&header));
    csv.push('\n');
    for i in 0..n {
        let mut row = vec![labels[i].clone()];
        for j in 0..n {
            row.push(rational_str(m.get(i, j)));
        }
        csv.push_str(&csv_row(&row));
        csv.push('\n');
    }
    emit(fmt, &env, payload, text, csv);
    Ok(0)
}

fn cmd_check_unit(opts: &LevelOpts, exponents: &str, fmt: Format) -> deltaquot_core::Result<i32> {
    let (spec, ctx) = build_ctx(opts)?;
    let r = parse_exponents(&ctx, exponents)?;
    let rep = units::check_theorem(&ctx, &r)?;
    let env = Envelope::for_level(&ctx);
    let prime_labels: Vec<String> = ctx
        .primes()
        .iter()
        .map(|(p, _)| poly::display(&spec, p))
        .collect();
    let valuations: Vec<Value> = prime_labels
        .iter()
        .zip(rep.prime_valuations.iter())
        .map(|(p, v)| json!({"p": p, "sum": v.to_string()}))
        .collect();
    let payload = obj(vec![
        ("exponents", bigint_list(&r)),
        ("S0", bigint_value(&rep.s0)),
        ("S1", bigint_value(&rep.s1)),
        ("S2", bigint_value(&rep.s2)),
        ("Sdeg", bigint_value(&rep.s_deg)),
        ("m", bigint_value(&rep.m)),
        ("valuations", Value::Array(valuations)),
        ("T", json!(rep.theorem)),
        ("L", json!(rep.lemma)),
        ("verdict", json!(rep.verdict)),
    ]);
    let join = |v: &[BigInt]| {
        v.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    };
    let val_text = prime_labels
        .iter()
        .zip(rep.prime_valuations.iter())
        .map(|(p, v)| format!("{p}: {v}"))
        .collect::<Vec<_>>()
        .join(", ");
    let text = format!(
        "exponents: {}\nS0 = {}\nS1 = {}\nS2 = {}\nSdeg = {}\nm = {}\nvaluations: {}\nT = [{}]\nL = [{}]\nverdict = {}\n",
        join(&r),
        rep.s0,
        rep.s1,
        rep.s2,
        rep.s_deg,
        rep.m,
        val_text,
        rep.theorem
            .iter()
            .map(|b| b.to_string())
            .collect::<Vec<_>>()
            .join(", "),
        rep.lemma
            .iter()
            .map(|b| b.to_string())
            .collect::<Vec<_>>()
            .join(", "),
        rep.verdict
    );
    let mut csv = String::from("key,value\n");
    let mut push = |k: &str, v: String| {
        csv.push_str(&csv_row(&[k.to_string(), v]));
        csv.push('\n');
    };
    push(
        "exponents",
        r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";"),
    );
    push("S0", rep.s0.to_string());
    push("S1", rep.s1.to_string());
    push("S2", rep.s2.to_string());
    push("Sdeg", rep.s_deg.to_string());
    push("m", rep.m.to_string());
    for (p, v) in prime_labels.iter().zip(rep.prime_valuations.iter()) {
        push(&format!("valuation({p})"), v.to_string());
    }
    for (i, b) in rep.theorem.iter().enumerate() {
        push(&format!("T{}", i + 1), b.to_string());
    }
    for (i, b) in rep.lemma.iter().enumerate() {
        push(&format!("L{}", i + 1), b.to_string());
    }
    push("verdict", rep.verdict.to_string());
    emit(fmt, &env, payload, text, csv);
    Ok(0)
}

fn cmd_bridge(opts: &LevelOpts, divisor: &str, fmt: Format) -> deltaquot_core::Result<i32> {
    let (spec, ctx) = build_ctx(opts)?;
    let div = parse_divisor(&spec, &ctx, divisor)?;
    let img = bridge::bridge_g(&ctx, &div)?;
    let env = Envelope::for_level(&ctx);
    let payload = obj(vec![
        ("divisor", bigint_list(div.coeffs())),
        (
            "raw",
            json!({
                "exponents": img.r.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                "N": img.n_scale.to_string(),
            }),
        ),
        (
            "reduced",
            json!({
                "exponents": img.reduced_r.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                "N": img.reduced_n.to_string(),
            }),
        ),
    ]);
    let join = |v: &[BigInt]| {
        v.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    };
    let text = format!(
        "divisor: [{}]\nraw: [{}] / N = {}\nreduced: [{}] / N = {}\n",
        join(div.coeffs()),
        join(&img.r),
        img.n_scale,
        join(&img.reduced_r),
        img.reduced_n
    );
    let semi = |v: &[BigInt]| {
        v.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(";")
    };
    let csv = format!(
        "part,exponents,N\ndivisor,{},\nraw,{},{}\nreduced,{},{}\n",
        semi(div.coeffs()),
        semi(&img.r),
        img.n_scale,
        semi(&img.reduced_r),
        img.reduced_n
    );
    emit(fmt, &env, payload, text, csv);
    Ok(0)
}

fn cmd_order(opts: &LevelOpts, divisor: &str, fmt: Format) -> deltaquot_core::Result<i32> {
    let (spec, ctx) = build_ctx(opts)?;
    let div = parse_divisor(&spec, &ctx, divisor)?;
    let t = bridge::conjectural_order(&ctx, &div)?;
    let env = Envelope::for_level(&ctx);
    let payload = obj(vec![("order", bigint_value(&t))]);
    emit(
        fmt,
        &env,
        payload,
        format!("{t}\n"),
        format!("order\n{t}\n"),
    );
    Ok(0)
}

fn cmd_exponent_bound(opts: &LevelOpts, fmt: Format) -> deltaquot_core::Result<i32> {
    let (_, ctx) = build_ctx(opts)?;
    let bound = bridge::exponent_bound(&ctx);
    let env = Envelope::for_level(&ctx);
    let payload = obj(vec![("bound", bigint_value(&bound))]);
    emit(
        fmt,
        &env,
        payload,
        format!("{bound}\n"),
        format!("bound\n{bound}\n"),
    );
    Ok(0)
}

fn cmd_selftest(full: bool, fmt: Format) -> i32 {
    let scale = if full { Scale::Full } else { Scale::Reduced };
    let outcomes = selftest::run_all(scale);
    let all_passed = outcomes.iter().all(|o| o.passed);
    let env = Envelope::none();
    let groups: Vec<Value> = outcomes
        .iter()
        .map(|o| {
            json!({
                "name": o.name,
                "passed": o.passed,
                "millis": o.millis as u64,
                "detail": o.detail,
            })
        })
        .collect();
    let payload = obj(vec![
        (
            "scale",
            json!(if full { "full" } else { "reduced" }),
        ),
        ("groups", Value::Array(groups)),
        ("passed", json!(all_passed)),
    ]);
    let mut text = String::new();
    for o in &outcomes {
        text.push_str(&format!(
            "{} {} ({} ms): {}\n",
            if o.passed { "PASS" } else { "FAIL" },
            o.name,
            o.millis,
            o.detail
        ));
    }
    text.push_str(&format!(
        "{}\n",
        if all_passed {
            "all groups passed"
        } else {
            "FAILURES present"
        }
    ));
    let mut csv = String::from("group,passed,millis,detail\n");
    for o in &outcomes {
        csv.push_str(&csv_row(&[
            o.name.to_string(),
            o.passed.to_string(),
            o.millis.to_string(),
            o.detail.clone(),
        ]));
        csv.push('\n');
    }
    emit(fmt, &env, payload, text, csv);
    if all_passed {
        0
    } else {
        4
    }
}
