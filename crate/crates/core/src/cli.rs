//! Command-line front end. [`run`] parses arguments, computes, and writes
//! the result; it returns the process exit code: 0 on success, 1 when a
//! check reports a finding or the computation fails, 2 on usage errors.

use crate::error::{Error, Result};
use crate::gf::{self, FieldCtx};
use crate::niho::{self, NihoParams};
use crate::spectra::{self, Method, SpectrumTable};
use crate::{arith, codes, expsums, families, lfsr, search};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

/// Exact crosscorrelation spectra of p-ary m-sequences and their decimations.
#[derive(Debug, Parser)]
#[command(name = "mseqcorr", version)]
pub struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// File of `p n c_0 … c_{n-1}` lines overriding the default moduli.
    #[arg(long, global = true)]
    modulus_file: Option<PathBuf>,
    /// Directory for cached class spectra.
    #[arg(long, global = true, env = "MSEQCORR_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Text)]
    out: OutFormat,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Text,
    Json,
    /// `value,count` rows; spectrum and code-weights only.
    Csv,
}

#[derive(Debug, Args)]
struct FieldArgs {
    #[arg(long)]
    p: u32,
    #[arg(long)]
    n: u32,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SeqFormat {
    Digits,
    Raw,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Naive,
    Fast,
    Coset,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SumKind {
    Kloosterman,
    Cubic,
    G,
    R,
    Op6,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Conjecture {
    MinusOne,
    ThreeValued,
    Op6,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Modulus and group order of GF(p^n).
    Field(FieldArgs),
    /// One period of the m-sequence, optionally decimated.
    Seq {
        #[command(flatten)]
        field: FieldArgs,
        /// Generate by recursion from this initial state (digits).
        #[arg(long)]
        initial_state: Option<String>,
        #[arg(long)]
        d: Option<String>,
        #[arg(long, value_enum, default_value_t = SeqFormat::Digits)]
        format: SeqFormat,
        /// Report the Golomb checks instead of the symbols.
        #[arg(long)]
        golomb: bool,
    },
    /// Value distribution of C_d(τ).
    Spectrum {
        #[command(flatten)]
        field: FieldArgs,
        /// Decimation, `d` or `d1/d2`.
        #[arg(long)]
        d: String,
        #[arg(long, value_enum, default_value_t = MethodArg::Fast)]
        method: MethodArg,
        /// Coset count for `--method coset`.
        #[arg(long)]
        coset_n: Option<u64>,
    },
    /// Moment identities for one decimation.
    Moments {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        d: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Catalog predictions against computed spectra.
    Verify {
        /// Family id, or `all`.
        #[arg(long)]
        family: String,
        #[command(flatten)]
        field: FieldArgs,
        /// `name=value,…`; omitted means every admissible point.
        #[arg(long)]
        params: Option<String>,
    },
    /// Unit-circle root counts for d = s(p^m - 1) + 1 over GF(p^{2m}).
    Niho {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        m: u32,
        #[arg(long, allow_hyphen_values = true)]
        s: i64,
        #[arg(long)]
        check_identity: bool,
    },
    /// Exponential sums over GF(p^n).
    Expsum {
        #[arg(long, value_enum)]
        kind: SumKind,
        #[arg(long, default_value_t = 2)]
        p: u32,
        #[arg(long)]
        n: u32,
        /// Field element in packed base-p form.
        #[arg(long)]
        a: Option<u32>,
        #[arg(long)]
        b: Option<u32>,
        #[arg(long)]
        k: Option<u32>,
    },
    /// Weight distribution of the two-nonzero cyclic code.
    CodeWeights {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        d: String,
        /// Enumerate every codeword instead of using the Walsh table.
        #[arg(long)]
        brute: bool,
    },
    /// Decimation classes bucketed by number of values.
    Classify {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        min_n: Option<u32>,
        #[arg(long)]
        max_n: Option<u32>,
    },
    /// Finite evidence for an open conjecture.
    Conjecture {
        #[arg(long, value_enum)]
        which: Conjecture,
        #[arg(long, default_value_t = 2)]
        p: u32,
        #[arg(long, default_value_t = 3)]
        min_n: u32,
        #[arg(long)]
        max_n: u32,
    },
}

/// What a command produced.
struct Report {
    json: Value,
    text: String,
    rows: Option<Vec<(String, u64)>>,
    finding: bool,
}

impl Report {
    fn new(json: Value) -> Self {
        let text = serde_json::to_string_pretty(&json).unwrap_or_default();
        Report {
            json,
            text,
            rows: None,
            finding: false,
        }
    }

    fn text(mut self, text: String) -> Self {
        self.text = text;
        self
    }

    fn finding(mut self, finding: bool) -> Self {
        self.finding = finding;
        self
    }
}

/// Entry point shared by the binary and the tests.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    if let Err(e) = validate(&cli) {
        let _ = writeln!(err, "error: {e}");
        return 2;
    }
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads.unwrap_or(0))
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 1;
        }
    };
    let done = pool.install(|| execute(&cli)).and_then(|o| match o {
        Output::Raw(bytes) => Ok(out.write_all(&bytes).map(|_| 0)?),
        Output::Report(r) => {
            emit(cli.out, &r, out)?;
            Ok(i32::from(r.finding))
        }
    });
    match done {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_usage() {
                2
            } else {
                1
            }
        }
    }
}

/// Flag combinations that are rejected before any computation.
fn validate(cli: &Cli) -> Result<()> {
    let usage = |m: &str| Err(Error::Parse(m.to_string()));
    if cli.threads == Some(0) {
        return usage("--threads must be positive");
    }
    let csv_ok = matches!(cli.command, Command::Spectrum { .. } | Command::CodeWeights { .. });
    if cli.out == OutFormat::Csv && !csv_ok {
        return usage("--out csv is available for spectrum and code-weights only");
    }
    match &cli.command {
        Command::Spectrum { method, coset_n, .. } => {
            if matches!(method, MethodArg::Coset) != coset_n.is_some() {
                return usage("--coset-n goes with --method coset");
            }
        }
        Command::Seq { golomb, format, d, .. } => {
            if *golomb && (matches!(format, SeqFormat::Raw) || d.is_some()) {
                return usage("--golomb takes neither --format raw nor --d");
            }
        }
        Command::Expsum { kind, a, b, k, .. } => {
            let ok = match kind {
                SumKind::Kloosterman => b.is_none() && k.is_none(),
                SumKind::Cubic | SumKind::G => a.is_some() && b.is_some() && k.is_none(),
                SumKind::R => a.is_none() && b.is_none() && k.is_none(),
                SumKind::Op6 => k.is_some() && a.is_none() && b.is_none(),
            };
            if !ok {
                return usage("flags do not match --kind (kloosterman: [--a]; cubic, g: --a --b; r: none; op6: --k)");
            }
        }
        Command::Classify { n, min_n, max_n, .. } => {
            if n.is_some() == max_n.is_some() || (n.is_some() && min_n.is_some()) {
                return usage("give either --n or --max-n [--min-n]");
            }
        }
        Command::Conjecture { min_n, max_n, .. }
            if min_n > max_n => {
                return usage("--min-n exceeds --max-n");
            }
        _ => {}
    }
    Ok(())
}

fn field(cli: &Cli, p: u32, n: u32) -> Result<FieldCtx> {
    let overrides = match &cli.modulus_file {
        Some(path) => gf::load_modulus_overrides(path)?,
        None => vec![],
    };
    FieldCtx::new(gf::resolve_spec(p, n, &overrides)?)
}

fn decimation(ctx: &FieldCtx, text: &str) -> Result<u64> {
    niho::parse_decimation(text, ctx.group_order() as u64)
}

enum Output {
    Report(Report),
    Raw(Vec<u8>),
}

fn execute(cli: &Cli) -> Result<Output> {
    let report = match &cli.command {
        Command::Field(f) => cmd_field(&field(cli, f.p, f.n)?)?,
        Command::Seq {
            field: f,
            initial_state,
            d,
            format,
            golomb,
        } => {
            let ctx = field(cli, f.p, f.n)?;
            let mut seq = match initial_state {
                Some(s) => lfsr::generate_recursion(ctx.spec(), &parse_digits(s, f.p)?)?,
                None => lfsr::generate_trace(&ctx),
            };
            if *golomb {
                let r = lfsr::check_golomb(&seq);
                Report::new(serde_json::to_value(&r)?).finding(!r.all_hold())
            } else {
                if let Some(d) = d {
                    seq = lfsr::decimate(&seq, decimation(&ctx, d)?)?;
                }
                if matches!(format, SeqFormat::Raw) && cli.out != OutFormat::Json {
                    return Ok(Output::Raw(seq.symbols));
                }
                Report::new(json!({"p": seq.p, "n": seq.n, "symbols": seq.to_digits()})).text(seq.to_digits())
            }
        }
        Command::Spectrum {
            field: f,
            d,
            method,
            coset_n,
        } => {
            let ctx = field(cli, f.p, f.n)?;
            let d = decimation(&ctx, d)?;
            let table = match method {
                MethodArg::Naive => spectra::spectrum_with(&ctx, d, Method::Naive)?,
                MethodArg::Fast => spectra::spectrum_with(&ctx, d, Method::Fast)?,
                MethodArg::Coset => families::coset_spectrum_method(&ctx, d, coset_n.unwrap_or(0))?,
            };
            spectrum_report(&table)
        }
        Command::Moments { field: f, d, seed } => {
            let ctx = field(cli, f.p, f.n)?;
            let r = spectra::moment_identity_check(&ctx, decimation(&ctx, d)?, *seed)?;
            let text = r
                .checks
                .iter()
                .map(|c| format!("{:<24} {} {} = {}", c.label, verdict(c.holds), c.lhs, c.rhs))
                .collect::<Vec<_>>()
                .join("\n");
            Report::new(serde_json::to_value(&r)?).text(text).finding(!r.all_hold())
        }
        Command::Verify { family, field: f, params } => {
            let ctx = field(cli, f.p, f.n)?;
            cmd_verify(&ctx, family, params.as_deref())?
        }
        Command::Niho { p, m, s, check_identity } => {
            let ctx = field(cli, *p, 2 * m)?;
            cmd_niho(&ctx, *s, *check_identity)?
        }
        Command::Expsum { kind, p, n, a, b, k } => {
            let ctx = field(cli, *p, *n)?;
            cmd_expsum(&ctx, *kind, *a, *b, *k)?
        }
        Command::CodeWeights { field: f, d, brute } => {
            let ctx = field(cli, f.p, f.n)?;
            let d = decimation(&ctx, d)?;
            let dist = if *brute {
                spectra::coprime_decimation(&ctx, d)?;
                codes::weight_distribution_brute(&ctx, d)
            } else {
                codes::weight_distribution_via_walsh(&ctx, d)?
            };
            let text = dist.0.iter().map(|(w, c)| format!("{w:>8} {c}")).collect::<Vec<_>>().join("\n");
            let mut r = Report::new(dist.to_json()).text(text);
            r.rows = Some(dist.0.iter().map(|(w, c)| (w.to_string(), *c)).collect());
            r
        }
        Command::Classify { p, n, min_n, max_n } => {
            let range = match (n, max_n) {
                (Some(n), _) => *n..=*n,
                (None, Some(hi)) => min_n.unwrap_or(2)..=*hi,
                _ => unreachable!("validated"),
            };
            cmd_classify(cli, *p, range)?
        }
        Command::Conjecture { which, p, min_n, max_n } => cmd_conjecture(cli, *which, *p, *min_n..=*max_n)?,
    };
    Ok(Output::Report(report))
}

fn emit(format: OutFormat, report: &Report, out: &mut dyn Write) -> Result<()> {
    match format {
        OutFormat::Json => {
            serde_json::to_writer_pretty(&mut *out, &report.json)?;
            writeln!(out)?;
        }
        OutFormat::Text => writeln!(out, "{}", report.text)?,
        OutFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            let header = if report.json.get("weights").is_some() { "weight" } else { "value" };
            w.write_record([header, "count"]).map_err(csv_error)?;
            for (v, c) in report.rows.iter().flatten() {
                w.write_record([v.as_str(), &c.to_string()]).map_err(csv_error)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

fn parse_digits(s: &str, p: u32) -> Result<Vec<u8>> {
    s.chars()
        .filter(|c| !c.is_whitespace() && *c != ',')
        .map(|c| {
            c.to_digit(36)
                .filter(|&v| v < p)
                .map(|v| v as u8)
                .ok_or_else(|| Error::Parse(format!("`{c}` is not a digit mod {p}")))
        })
        .collect()
}

fn cmd_field(ctx: &FieldCtx) -> Result<Report> {
    let q1 = ctx.group_order() as u64;
    let factors = arith::factor(q1)?;
    let fact: Vec<String> = factors
        .iter()
        .map(|&(q, e)| if e == 1 { q.to_string() } else { format!("{q}^{e}") })
        .collect();
    let text = format!(
        "GF({}^{}) modulus c_0..c_{{n-1}} = {:?}, order {}, p^n - 1 = {}",
        ctx.p(),
        ctx.n(),
        ctx.spec().coeffs(),
        ctx.order(),
        fact.join(" * ")
    );
    Ok(Report::new(json!({
        "p": ctx.p(),
        "n": ctx.n(),
        "modulus": ctx.spec().coeffs(),
        "order": ctx.order(),
        "group_order": q1,
        "factorization": factors.iter().map(|&(q, e)| json!([q, e])).collect::<Vec<_>>(),
    }))
    .text(text))
}

fn spectrum_report(table: &SpectrumTable) -> Report {
    let text = table
        .entries()
        .iter()
        .map(|(v, c)| format!("{v:>12} {c}"))
        .collect::<Vec<_>>()
        .join("\n");
    let mut r = Report::new(table.to_json()).text(text);
    r.rows = Some(table.entries().iter().map(|(v, c)| (v.to_string(), *c)).collect());
    r
}

fn cmd_verify(ctx: &FieldCtx, family: &str, params: Option<&str>) -> Result<Report> {
    let verdicts = match (family, params) {
        ("all", Some(_)) => return Err(Error::Parse("--params needs a single --family".into())),
        ("all", None) => {
            let all: Vec<&families::FamilyDescriptor> = families::catalog().iter().collect();
            families::verify_all(ctx, &all)?
        }
        (id, None) => families::verify_all(ctx, &[families::find(id)?])?,
        (id, Some(ps)) => vec![families::verify_point(ctx, families::find(id)?, &families::parse_params(ps)?)?],
    };
    if verdicts.is_empty() && family != "all" {
        return Err(Error::OutOfDomain(format!("{family} has no admissible point at p={} n={}", ctx.p(), ctx.n())));
    }
    let text = verdicts
        .iter()
        .map(|v| {
            let ps: Vec<String> = v.params.iter().map(|(k, x)| format!("{k}={x}")).collect();
            format!("{:<20} {:<12} d={:<10} {}", v.family, ps.join(","), v.d, verdict(v.pass))
        })
        .collect::<Vec<_>>()
        .join("\n");
    let failed = verdicts.iter().any(|v| !v.pass);
    Ok(Report::new(Value::Array(verdicts.iter().map(|v| v.to_json()).collect()))
        .text(text)
        .finding(failed))
}

fn cmd_niho(ctx: &FieldCtx, s: i64, check: bool) -> Result<Report> {
    let m = ctx.n() / 2;
    let params = NihoParams::new(ctx.p(), m, s);
    let hist = niho::root_histogram(ctx, s)?;
    let values = niho::niho_value_set(ctx, s)?;
    let mut json = json!({
        "p": ctx.p(),
        "m": m,
        "s": params.s(),
        "d": params.decimation(),
        "value_set": values,
        "histogram": hist.iter().map(|(k, c)| json!({"roots": k, "count": c})).collect::<Vec<_>>(),
    });
    let mut text = format!(
        "d = {}, W values {:?}, root counts {:?}",
        params.decimation(),
        values,
        hist
    );
    let mut finding = false;
    if check {
        let r = niho::check_identity(ctx, s)?;
        finding = !r.holds();
        json["identity"] = json!({
            "holds": r.holds(),
            "points_checked": r.points_checked,
            "mismatches": r.mismatches.len(),
        });
        text.push_str(&format!("\nidentity {} on {} points", verdict(r.holds()), r.points_checked));
    }
    Ok(Report::new(json).text(text).finding(finding))
}

fn element(ctx: &FieldCtx, v: u32) -> Result<gf::Elem> {
    if v >= ctx.order() {
        return Err(Error::Parse(format!("{v} is not an element of GF({}^{})", ctx.p(), ctx.n())));
    }
    Ok(gf::Elem(v))
}

fn cmd_expsum(ctx: &FieldCtx, kind: SumKind, a: Option<u32>, b: Option<u32>, k: Option<u32>) -> Result<Report> {
    let scalar = |name: &str, v: i64| Report::new(json!({"kind": name, "value": v})).text(v.to_string());
    Ok(match kind {
        SumKind::Kloosterman => match a {
            Some(a) => {
                let v = expsums::kloosterman_cyc(ctx, element(ctx, a)?);
                Report::new(json!({"kind": "kloosterman", "value": v.to_json()})).text(v.to_string())
            }
            None => {
                let r = expsums::kloosterman_check(ctx);
                let text = format!(
                    "K(a) = 0 mod {} for all a != 0: {}; Weil range: {}",
                    r.modulus,
                    verdict(r.not_divisible.is_empty()),
                    verdict(r.outside_weil.is_empty())
                );
                Report::new(serde_json::to_value(&r)?).text(text).finding(!r.holds())
            }
        },
        SumKind::Cubic => scalar(
            "cubic",
            expsums::cubic_sum(ctx, element(ctx, b.unwrap_or(0))?, element(ctx, a.unwrap_or(0))?)?,
        ),
        SumKind::G => scalar(
            "g",
            expsums::g_sum(ctx, element(ctx, b.unwrap_or(0))?, element(ctx, a.unwrap_or(0))?)?,
        ),
        SumKind::R => scalar("r", expsums::r_sum(ctx)?),
        SumKind::Op6 => {
            let r = expsums::op6_check(ctx, k.unwrap_or(0))?;
            let text = format!(
                "first {} = {} {}; second {} = {} {}",
                r.first.0,
                r.first.1,
                verdict(r.first_holds()),
                r.second.0,
                r.second.1,
                verdict(r.second_holds())
            );
            Report::new(serde_json::to_value(&r)?).text(text).finding(!r.holds())
        }
    })
}

fn classes(cli: &Cli, ctx: &FieldCtx) -> Result<Vec<search::DecimationClass>> {
    let cache = cli.cache_dir.as_ref().map(search::SpectrumCache::new);
    search::canonical_classes(ctx, cache.as_ref())
}

fn cmd_classify(cli: &Cli, p: u32, range: std::ops::RangeInclusive<u32>) -> Result<Report> {
    let mut json = Vec::new();
    let mut text = Vec::new();
    for n in range {
        let ctx = field(cli, p, n)?;
        let buckets = search::classify_by_value_count(classes(cli, &ctx)?);
        let summary: BTreeMap<usize, Vec<u64>> = buckets
            .iter()
            .map(|(t, cs)| (*t, cs.iter().map(|c| c.representative).collect()))
            .collect();
        text.push(format!("p={p} n={n}: {summary:?}"));
        json.push(json!({
            "p": p,
            "n": n,
            "buckets": buckets.iter().map(|(t, cs)| json!({
                "t": t,
                "classes": cs.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        }));
    }
    Ok(Report::new(Value::Array(json)).text(text.join("\n")))
}

fn cmd_conjecture(cli: &Cli, which: Conjecture, p: u32, range: std::ops::RangeInclusive<u32>) -> Result<Report> {
    let mut json = Vec::new();
    let mut text = Vec::new();
    let mut finding = false;
    for n in range {
        let ctx = field(cli, p, n)?;
        match which {
            Conjecture::MinusOne => {
                let r = search::check_minus_one(&ctx, &classes(cli, &ctx)?);
                finding |= !r.holds();
                text.push(format!("p={p} n={n}: {} decimations, {}", r.decimations, verdict(r.holds())));
                json.push(serde_json::to_value(&r)?);
            }
            Conjecture::ThreeValued => {
                let r = search::three_valued_completeness(&ctx, &classes(cli, &ctx)?);
                finding |= !r.exact();
                text.push(format!(
                    "p={p} n={n}: observed {:?}, unexplained {:?}, missing {:?}",
                    r.observed, r.unexplained, r.missing
                ));
                json.push(serde_json::to_value(&r)?);
            }
            Conjecture::Op6 => {
                if n % 2 == 0 || p != 2 {
                    continue;
                }
                for k in (1..n).filter(|&k| arith::gcd(k as u64, n as u64) == 1) {
                    let r = expsums::op6_check(&ctx, k)?;
                    finding |= !r.holds();
                    text.push(format!("n={n} k={k}: {:?} {:?} {}", r.first, r.second, verdict(r.holds())));
                    json.push(serde_json::to_value(&r)?);
                }
            }
        }
    }
    Ok(Report::new(Value::Array(json)).text(text.join("\n")).finding(finding))
}
