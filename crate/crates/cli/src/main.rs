use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use quiver_count::counting::{
    f1_conjecture_series, latex_poly, necklace_count, positivity_report, q1_expansion, s_of_dim,
    scaled_degree_report, CountTable, CountingContext, CountingError,
};
use quiver_count::oracle::{OracleConfig, OracleError};
use quiver_count::qfield::{parse_rational, QPoly};
use quiver_count::quiver::{Quiver, Stability};
use quiver_count::series::{univariate_string, DimVector, Series};
use quiver_count::verify::{verify, VerifyError, VerifyPlan};

#[derive(Parser)]
#[command(name = "quiver-count", version, about = "Counting polynomials of stable quiver representations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// a_α for every α in the cone, in powers of q and of q-1
    ASeries(Common),
    /// r_α = #R^ss_α / #GL_α as rational functions of q
    RSeries(Common),
    /// Stable classes of dimension α with endomorphism field of degree r
    SCount(Common),
    /// f = Σ f_n (q-1)^n around q = 1, with positivity and degree reports
    #[command(alias = "expand")]
    FExpand(Common),
    /// Compare the formulas with brute-force counts over F_p
    Verify(VerifyArgs),
    /// Linear (q-1)-coefficient of a_d against primitive necklace counts
    Necklaces(Common),
}

#[derive(Args, Clone)]
struct Common {
    /// Quiver description (JSON with "arrows" or "matrix")
    #[arg(long)]
    quiver: PathBuf,
    /// Stability weights, comma separated
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    theta: Option<Vec<i64>>,
    /// Slope of interest, as P/Q
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    slope: String,
    #[arg(long, default_value_t = 4)]
    max_height: u32,
    #[arg(long, value_delimiter = ',', default_value = "2,3")]
    primes: Vec<u32>,
    #[arg(long, default_value_t = 2)]
    q1_order: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Maximum number of points enumerated per dimension vector
    #[arg(long, default_value_t = 1 << 24)]
    budget: u64,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: Common,
    /// Adds 1 to a_α at this dimension vector before comparing
    #[arg(long, value_delimiter = ',', hide = true)]
    corrupt: Option<Vec<u32>>,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Latex,
    Text,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Self {
        Failure { code: 1, message: message.into() }
    }

    fn invariant(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }

    fn mismatch(message: impl Into<String>) -> Self {
        Failure { code: 3, message: message.into() }
    }
}

impl From<CountingError> for Failure {
    fn from(e: CountingError) -> Self {
        match e {
            CountingError::NotIntegral { .. }
            | CountingError::PoleAtOne { .. }
            | CountingError::NotACount { .. }
            | CountingError::QField(_) => Failure::invariant(e.to_string()),
            _ => Failure::invalid(e.to_string()),
        }
    }
}

impl From<VerifyError> for Failure {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::Counting(c) => c.into(),
            VerifyError::Oracle(o @ OracleError::NotDivisible { .. }) => Failure::invariant(o.to_string()),
            VerifyError::Oracle(o) => Failure::invalid(o.to_string()),
        }
    }
}

/// A validated configuration.
struct RunConfig {
    quiver: Quiver,
    theta: Stability,
    slope: BigRational,
    max_height: u32,
    primes: Vec<u32>,
    q1_order: usize,
    format: Format,
    budget: u64,
}

impl RunConfig {
    fn from_args(c: &Common) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(&c.quiver)
            .map_err(|e| Failure::invalid(format!("cannot read {}: {e}", c.quiver.display())))?;
        let quiver = Quiver::from_json_str(&text)
            .map_err(|e| Failure::invalid(format!("{}: {e}", c.quiver.display())))?;
        let n = quiver.num_vertices();
        let theta = Stability::new(c.theta.clone().unwrap_or_else(|| vec![0; n]));
        theta.check_for(&quiver).map_err(|e| Failure::invalid(format!("--theta: {e}")))?;
        let slope = parse_rational(&c.slope).map_err(|e| Failure::invalid(format!("--slope: {e}")))?;
        if c.max_height == 0 {
            return Err(Failure::invalid("--max-height must be at least 1"));
        }
        if let Some(p) = c.primes.iter().find(|&&p| !quiver_count::arith::is_prime(p as u64)) {
            return Err(Failure::invalid(format!("--primes: {p} is not prime")));
        }
        Ok(RunConfig {
            quiver,
            theta,
            slope,
            max_height: c.max_height,
            primes: c.primes.clone(),
            q1_order: c.q1_order,
            format: c.format,
            budget: c.budget,
        })
    }

    fn context(&self) -> Result<CountingContext, Failure> {
        Ok(CountingContext::new(self.quiver.clone(), self.theta.clone(), self.slope.clone(), self.max_height)?)
    }

    /// `m` if the quiver is a single vertex with `m` loops.
    fn loops(&self) -> Option<u32> {
        (self.quiver.num_vertices() == 1).then(|| self.quiver.arrow_count(0, 0))
    }
}

fn render_table(table: &CountTable, name: &str, format: Format) -> String {
    match format {
        Format::Json => format!("{:#}\n", table.to_json()),
        Format::Latex => table.to_latex(name),
        Format::Text => table.to_text(name),
    }
}

fn cmd_a_series(cfg: &RunConfig) -> Result<String, Failure> {
    let table = cfg.context()?.a_series()?;
    Ok(render_table(&table, "a", cfg.format))
}

fn cmd_r_series(cfg: &RunConfig) -> Result<String, Failure> {
    let ctx = cfg.context()?;
    let mut rows = Vec::new();
    for alpha in ctx.cone() {
        let r = ctx.r_alpha(&alpha)?;
        rows.push((alpha, r));
    }
    Ok(match cfg.format {
        Format::Json => {
            let entries: Vec<Value> =
                rows.iter().map(|(a, r)| json!({ "alpha": a, "r": r, "display": r.to_string() })).collect();
            format!("{:#}\n", json!({ "theta": cfg.theta.theta, "slope": cfg.slope.to_string(), "entries": entries }))
        }
        Format::Latex => {
            let mut out = String::from("\\begin{tabular}{ll}\n$\\alpha$ & $r_\\alpha(q)$ \\\\\n\\hline\n");
            for (a, r) in &rows {
                let num = latex_poly(r.numer().coeffs(), "q");
                let body = if r.denom().coeffs() == [BigRational::one()] {
                    num
                } else {
                    format!("\\frac{{{num}}}{{{}}}", latex_poly(r.denom().coeffs(), "q"))
                };
                writeln!(out, "${a}$ & ${body}$ \\\\").unwrap();
            }
            out.push_str("\\end{tabular}\n");
            out
        }
        Format::Text => rows.iter().map(|(a, r)| format!("r{a} = {r}\n")).collect(),
    })
}

fn cmd_s_count(cfg: &RunConfig) -> Result<String, Failure> {
    let ctx = cfg.context()?;
    let table = ctx.a_series()?;
    let mut entries = Vec::new();
    for alpha in ctx.cone() {
        for r in 1..=alpha.height() {
            if alpha.entries().iter().all(|&x| x % r == 0) {
                entries.push((alpha.clone(), r, s_of_dim(&table, &alpha, r)?));
            }
        }
    }
    Ok(match cfg.format {
        Format::Json => {
            let rows: Vec<Value> = entries
                .iter()
                .map(|(a, r, s)| json!({ "alpha": a, "r": r, "poly_q": s, "display": s.to_string() }))
                .collect();
            format!("{:#}\n", json!({ "entries": rows }))
        }
        Format::Latex => {
            let mut out = String::from("\\begin{tabular}{lll}\n$\\alpha$ & $r$ & $s_{\\alpha,r}(q)$ \\\\\n\\hline\n");
            for (a, r, s) in &entries {
                writeln!(out, "${a}$ & ${r}$ & ${}$ \\\\", latex_poly(s.coeffs(), "q")).unwrap();
            }
            out.push_str("\\end{tabular}\n");
            out
        }
        Format::Text => entries.iter().map(|(a, r, s)| format!("s{a}, r={r} = {s}\n")).collect(),
    })
}

fn series_line(s: &Series<BigRational>, one_vertex: bool) -> String {
    if one_vertex {
        return univariate_string(s, "t");
    }
    let mut terms: Vec<(&DimVector, &BigRational)> = s.terms().filter(|(_, c)| !c.is_zero()).collect();
    terms.sort_by(|(a, _), (b, _)| a.height().cmp(&b.height()).then_with(|| a.cmp(b)));
    let mut out = String::new();
    for (i, (alpha, c)) in terms.into_iter().enumerate() {
        let neg = c < &BigRational::zero();
        let mag = if neg { -c.clone() } else { c.clone() };
        match (i, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        if alpha.is_zero() {
            write!(out, "{mag}").unwrap();
        } else if mag.is_one() {
            out.push_str(&alpha.monomial_string());
        } else {
            write!(out, "{mag}*{}", alpha.monomial_string()).unwrap();
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn cmd_expand(cfg: &RunConfig) -> Result<String, Failure> {
    if !cfg.theta.is_zero() || !cfg.slope.is_zero() {
        return Err(Failure::invalid("f-expand needs the zero stability and slope 0"));
    }
    let ctx = cfg.context()?;
    let slices = q1_expansion(&ctx, cfg.q1_order)?;
    let table = ctx.a_series()?;
    let loops = cfg.loops();
    let positivity = positivity_report(&table, loops);
    let one_vertex = cfg.quiver.num_vertices() == 1;

    let mut degrees = Vec::new();
    let mut f1_check = None;
    if let Some(m) = loops.filter(|&m| m >= 1) {
        for (n, f) in slices.iter().enumerate().take(3) {
            degrees.push(scaled_degree_report(f, m as u64, n));
        }
        if let Some(f1) = slices.get(1) {
            let expected = f1_conjecture_series(m as u64, ctx.trunc());
            f1_check = Some((expected.clone(), &expected == f1));
        }
    }

    Ok(match cfg.format {
        Format::Json => {
            let f: Vec<Value> = slices
                .iter()
                .enumerate()
                .map(|(n, s)| json!({ "n": n, "series": s.to_json(), "display": series_line(s, one_vertex) }))
                .collect();
            let f1 = f1_check.as_ref().map(|(e, ok)| json!({ "expected": e.to_json(), "match": ok }));
            format!(
                "{:#}\n",
                json!({
                    "f": f,
                    "a": table.to_json(),
                    "positivity": positivity,
                    "f1_conjecture": f1,
                    "degrees": degrees,
                })
            )
        }
        Format::Latex => {
            let mut out = render_table(&table, "a", Format::Latex);
            out.push_str("\\begin{align*}\n");
            for (n, s) in slices.iter().enumerate() {
                writeln!(out, "f_{{{n}}} &= {} \\\\", series_line(s, one_vertex).replace('*', "")).unwrap();
            }
            out.push_str("\\end{align*}\n");
            out
        }
        Format::Text => {
            let mut out = String::new();
            for (n, s) in slices.iter().enumerate() {
                writeln!(out, "f_{n} = {}", series_line(s, one_vertex)).unwrap();
            }
            out.push('\n');
            out.push_str(&table.to_text("a"));
            out.push('\n');
            out.push_str(&positivity.to_text());
            if let Some((e, ok)) = &f1_check {
                writeln!(out, "\nf_1 against C(m,2) t(t-1)/(1-mt)^2 = {}: {}", series_line(e, true), if *ok { "match" } else { "differs" }).unwrap();
            }
            for d in &degrees {
                let seen = match d.observed_degree {
                    Some(k) => k.to_string(),
                    None => "none (zero)".to_string(),
                };
                writeln!(
                    out,
                    "f_{} (1-mt)^{}: highest nonzero power t^{} within height {}{}",
                    d.n,
                    d.exponent,
                    seen,
                    d.max_height,
                    if d.below_truncation { "" } else { " (at the truncation)" }
                )
                .unwrap();
            }
            out
        }
    })
}

fn cmd_verify(cfg: &RunConfig, corrupt: Option<&[u32]>) -> Result<String, Failure> {
    let corrupt = match corrupt {
        Some(v) => {
            let alpha = DimVector::new(v.to_vec());
            if alpha.len() != cfg.quiver.num_vertices() {
                return Err(Failure::invalid("--corrupt has the wrong number of entries"));
            }
            let ctx = cfg.context()?;
            let table = ctx.a_series()?;
            let old = table.get(&alpha).cloned().unwrap_or_else(QPoly::zero);
            Some((alpha, old.add(&QPoly::one())))
        }
        None => None,
    };
    let plan = VerifyPlan {
        max_height: cfg.max_height,
        primes: cfg.primes.clone(),
        oracle: OracleConfig { point_budget: cfg.budget, ..OracleConfig::default() },
        corrupt,
    };
    let report = verify(&cfg.quiver, &cfg.theta, &cfg.slope, &plan)?;
    let out = match cfg.format {
        Format::Json => format!("{:#}\n", report.to_json()),
        Format::Latex | Format::Text => report.to_text(),
    };
    if report.all_match() {
        Ok(out)
    } else {
        let listed: Vec<String> = report
            .mismatches()
            .map(|e| format!("{} at {} over F_{}: formula {} oracle {}", e.quantity, e.alpha, e.p, e.formula, e.oracle))
            .collect();
        print!("{out}");
        Err(Failure::mismatch(format!("verification mismatch:\n{}", listed.join("\n"))))
    }
}

fn cmd_necklaces(cfg: &RunConfig) -> Result<String, Failure> {
    let Some(m) = cfg.loops().filter(|&m| m >= 1) else {
        return Err(Failure::invalid("necklaces needs a quiver with one vertex and at least one loop"));
    };
    let ctx = CountingContext::unstable(cfg.quiver.clone(), cfg.max_height)?;
    let report = positivity_report(&ctx.a_series()?, Some(m));
    let rows: Vec<_> = report.entries.iter().filter(|e| e.necklace.is_some()).collect();
    let all_match = rows.iter().all(|e| e.linear_matches_necklace == Some(true));
    let out = match cfg.format {
        Format::Json => {
            let v: Vec<Value> = rows
                .iter()
                .map(|e| {
                    json!({
                        "d": e.alpha.height(),
                        "necklaces": necklace_count(m as u64, e.alpha.height()).to_string(),
                        "linear_term": e.linear_term.to_string(),
                        "constant_term": e.constant_term.to_string(),
                        "match": e.linear_matches_necklace,
                    })
                })
                .collect();
            format!("{:#}\n", json!({ "m": m, "entries": v }))
        }
        Format::Latex => {
            let mut out = String::from("\\begin{tabular}{lll}\n$d$ & necklaces & $(q-1)$-coefficient \\\\\n\\hline\n");
            for e in &rows {
                writeln!(out, "{} & {} & {} \\\\", e.alpha.height(), e.necklace.as_deref().unwrap_or(""), e.linear_term).unwrap();
            }
            out.push_str("\\end{tabular}\n");
            out
        }
        Format::Text => rows
            .iter()
            .map(|e| {
                format!(
                    "d={}: necklaces {}, linear term {}, constant term {}, {}\n",
                    e.alpha.height(),
                    e.necklace.as_deref().unwrap_or(""),
                    e.linear_term,
                    e.constant_term,
                    if e.linear_matches_necklace == Some(true) { "match" } else { "MISMATCH" }
                )
            })
            .collect(),
    };
    if all_match {
        Ok(out)
    } else {
        print!("{out}");
        Err(Failure::mismatch("linear term differs from the necklace count"))
    }
}

fn run(cli: Cli) -> Result<String, Failure> {
    match &cli.command {
        Command::ASeries(c) => cmd_a_series(&RunConfig::from_args(c)?),
        Command::RSeries(c) => cmd_r_series(&RunConfig::from_args(c)?),
        Command::SCount(c) => cmd_s_count(&RunConfig::from_args(c)?),
        Command::FExpand(c) => cmd_expand(&RunConfig::from_args(c)?),
        Command::Verify(v) => cmd_verify(&RunConfig::from_args(&v.common)?, v.corrupt.as_deref()),
        Command::Necklaces(c) => cmd_necklaces(&RunConfig::from_args(c)?),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
