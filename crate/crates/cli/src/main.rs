//! `zdgq` command-line front end.

mod document;

use std::io::{self, Write};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use zdgq::arithmetic::is_prime;
use zdgq::checks::{self, CheckParams, CHECK_IDS};
use zdgq::classify::{analyze, dense_cap_from_env, AnalysisOptions, NumericContext, Report};
use zdgq::Error;

use document::{decimal, ReportDocument, ScanRow, TimingDoc};

#[derive(Parser)]
#[command(name = "zdgq", version, about = "Spectra and quantum-walk transfer on zero-divisor graphs of Z_n")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full analysis of one modulus.
    Analyze {
        n: u64,
        /// Emit the JSON report document.
        #[arg(long)]
        json: bool,
        /// Skip dense walk confirmation.
        #[arg(long)]
        no_numeric: bool,
        /// Include wall-clock timing in the report.
        #[arg(long)]
        timing: bool,
    },
    /// Summarize every composite modulus in a range.
    Scan {
        from: u64,
        to: u64,
        #[arg(long, value_enum, default_value_t = Filter::All)]
        filter: Filter,
        /// Worker threads; defaults to the number of CPUs.
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long, conflicts_with = "json")]
        csv: bool,
        #[arg(long)]
        json: bool,
        /// Skip dense walk confirmation.
        #[arg(long)]
        no_numeric: bool,
    },
    /// Run a named verification sweep.
    Verify {
        check: String,
        #[arg(long)]
        nmax: Option<u64>,
        #[arg(long)]
        pmax: Option<u64>,
        #[arg(long)]
        qmax: Option<u64>,
    },
    /// Raw walk amplitudes between two residues at one time.
    Walk {
        n: u64,
        /// Residues `u,v`.
        #[arg(long, value_parser = parse_pair)]
        pair: (u64, u64),
        #[arg(long)]
        time: f64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Filter {
    /// Some pair has perfect state transfer.
    Pst,
    /// Some pair has proper fractional revival (PST included).
    Fr,
    /// The whole graph is periodic.
    Periodic,
    All,
}

fn parse_pair(s: &str) -> Result<(u64, u64), String> {
    let (u, v) = s.split_once(',').ok_or("expected u,v")?;
    let parse = |x: &str| x.trim().parse::<u64>().map_err(|e| format!("{x:?}: {e}"));
    Ok((parse(u)?, parse(v)?))
}

/// Failure with its exit code: 1 for verification failures, 2 for usage.
struct Failure(u8, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::PrimeModulus { .. }
            | Error::InvalidModulus(..)
            | Error::NotAVertex { .. }
            | Error::SameVertex(_) => Failure(2, e.to_string()),
            e => Failure(1, e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        // A closed downstream pipe (`| head`) is not an error.
        let code = if e.kind() == io::ErrorKind::BrokenPipe { 0 } else { 1 };
        Failure(code, e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure(2, msg.into())
}

fn check_modulus(n: u64) -> Result<(), Failure> {
    if n < 4 {
        Err(usage(format!("n = {n} must be at least 4")))
    } else if is_prime(n) {
        Err(usage(format!("n = {n} is prime, so the zero-divisor graph is empty")))
    } else {
        Ok(())
    }
}

fn options(no_numeric: bool) -> AnalysisOptions {
    AnalysisOptions { numeric: !no_numeric, dense_cap: dense_cap_from_env() }
}

fn print_table(out: &mut impl Write, r: &Report) -> io::Result<()> {
    writeln!(out, "n = {}: {} vertices, {} cells, family {}", r.n, r.vertex_count, r.xi(), r.family.family.name())?;
    writeln!(out, "quotient charpoly: {}", r.quotient.charpoly())?;
    let spectrum: Vec<String> =
        r.spectrum.entries().iter().map(|(v, m)| if *m == 1 { v.to_string() } else { format!("{v} (x{m})") }).collect();
    writeln!(out, "spectrum: {}", spectrum.join(", "))?;
    writeln!(out, "{:>8} {:>6} {:>9}  period", "cell", "size", "kind")?;
    for c in &r.cells {
        let period = match c.periodicity.period() {
            Some(t) => format!("{t} ~ {}", decimal(t.value())),
            None if c.periodicity.is_periodic() => "every time".into(),
            None => "not periodic".into(),
        };
        writeln!(out, "{:>8} {:>6} {:>9}  {period}", c.divisor, c.size, format!("{:?}", c.kind).to_lowercase())?;
    }
    if r.pairs.is_empty() {
        writeln!(out, "no candidate pairs")?;
    }
    for p in &r.pairs {
        let (x, y) = p.pair.unwrap_or_default();
        let tau = p.verdict.tau().map(|t| format!(" at tau = {t} ~ {}", decimal(t.value()))).unwrap_or_default();
        writeln!(out, "pair ({x}, {y}): {}{tau}", p.verdict.label())?;
        for j in &p.justification {
            writeln!(out, "    {j}")?;
        }
        if let Some(o) = &p.numeric {
            let confirmed = match p.confirmed {
                Some(true) => "confirmed",
                Some(false) => "DISAGREES",
                None => "unchecked",
            };
            writeln!(
                out,
                "    walk: |alpha| = {}, |beta| = {} ({confirmed})",
                decimal(o.alpha.norm()),
                decimal(o.beta.norm())
            )?;
        }
    }
    writeln!(out, "summary: {}", r.summary().label())?;
    Ok(())
}

fn cmd_analyze(n: u64, json: bool, no_numeric: bool, timing: bool) -> Result<(), Failure> {
    check_modulus(n)?;
    let start = Instant::now();
    let report = analyze(n, options(no_numeric))?;
    let mut out = io::stdout().lock();
    if json {
        let mut doc = ReportDocument::from(&report);
        if timing {
            doc.timing = Some(TimingDoc { total_seconds: decimal(start.elapsed().as_secs_f64()) });
        }
        writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("serializable"))?;
    } else {
        print_table(&mut out, &report)?;
        if timing {
            writeln!(out, "time: {:.3}s", start.elapsed().as_secs_f64())?;
        }
    }
    if report.numerics_agree() {
        Ok(())
    } else {
        Err(Failure(1, format!("n = {n}: numeric walk disagrees with the symbolic verdict")))
    }
}

fn keep(row: &ScanRow, filter: Filter) -> bool {
    match filter {
        Filter::Pst => row.verdict == "PST",
        Filter::Fr => row.has_fr,
        Filter::Periodic => row.graph_periodic,
        Filter::All => true,
    }
}

fn cmd_scan(
    from: u64,
    to: u64,
    filter: Filter,
    jobs: Option<usize>,
    json: bool,
    no_numeric: bool,
) -> Result<(), Failure> {
    if from < 4 || from > to {
        return Err(usage(format!("invalid range {from}..{to}: need 4 <= from <= to")));
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        if j == 0 {
            return Err(usage("--jobs must be positive"));
        }
        builder = builder.num_threads(j);
    }
    let pool = builder.build().map_err(|e| Failure(1, e.to_string()))?;
    let opts = options(no_numeric);
    let moduli: Vec<u64> = (from..=to).filter(|&n| !is_prime(n)).collect();
    let chunk = 64 * pool.current_num_threads();

    let mut out = io::stdout().lock();
    if json {
        write!(out, "[")?;
    } else {
        writeln!(out, "{}", ScanRow::CSV_HEADER)?;
    }
    let mut first = true;
    let mut disagreements = Vec::new();
    for block in moduli.chunks(chunk) {
        let rows: Vec<zdgq::Result<ScanRow>> =
            pool.install(|| block.par_iter().map(|&n| analyze(n, opts).map(|r| ScanRow::from(&r))).collect());
        for row in rows {
            let row = row?;
            if !row.numerics_agree {
                disagreements.push(row.n);
            }
            if !keep(&row, filter) {
                continue;
            }
            if json {
                let sep = if first { "\n  " } else { ",\n  " };
                write!(out, "{sep}{}", serde_json::to_string(&row).expect("serializable"))?;
            } else {
                writeln!(out, "{}", row.csv())?;
            }
            first = false;
        }
        out.flush()?;
    }
    if json {
        writeln!(out, "{}]", if first { "" } else { "\n" })?;
    }
    if disagreements.is_empty() {
        Ok(())
    } else {
        Err(Failure(1, format!("numeric walk disagrees with the symbolic verdict for n in {disagreements:?}")))
    }
}

fn cmd_verify(check: &str, nmax: Option<u64>, pmax: Option<u64>, qmax: Option<u64>) -> Result<(), Failure> {
    let params = CheckParams { nmax, pmax, qmax, dense_cap: Some(dense_cap_from_env()) };
    let start = Instant::now();
    let report = checks::run(check, params)
        .ok_or_else(|| usage(format!("unknown check {check:?}; known: {}", CHECK_IDS.join(", "))))??;
    let mut out = io::stdout().lock();
    for f in &report.failures {
        writeln!(out, "  failed: {f}")?;
    }
    let status = if report.passed() { "pass" } else { "FAIL" };
    writeln!(
        out,
        "{}: {status} ({} cases, {} failures, {:.3}s)",
        report.id,
        report.cases,
        report.failures.len(),
        start.elapsed().as_secs_f64()
    )?;
    if report.passed() {
        Ok(())
    } else {
        Err(Failure(1, format!("{check} failed")))
    }
}

fn cmd_walk(n: u64, (u, v): (u64, u64), t: f64) -> Result<(), Failure> {
    check_modulus(n)?;
    if !t.is_finite() {
        return Err(usage("--time must be finite"));
    }
    let cap = dense_cap_from_env();
    let ctx = NumericContext::within_cap(n, cap)?
        .ok_or_else(|| usage(format!("n = {n} exceeds the dense cap of {cap} vertices (set ZDGQ_DENSE_CAP)")))?;
    let o = ctx.fr_test(u, v, t)?;
    let mut out = io::stdout().lock();
    let complex = |z: num_complex::Complex64| {
        let im = decimal(z.im.abs());
        format!("{} {} {im}i", decimal(z.re), if z.im < 0.0 { "-" } else { "+" })
    };
    writeln!(out, "H({t})[{u},{u}] = {}", complex(o.alpha))?;
    writeln!(out, "H({t})[{u},{v}] = {}", complex(o.beta))?;
    writeln!(
        out,
        "|alpha| = {}, |beta| = {}, residual = {}",
        decimal(o.alpha.norm()),
        decimal(o.beta.norm()),
        decimal(o.residual)
    )?;
    writeln!(out, "kind: {}", o.kind)?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze { n, json, no_numeric, timing } => cmd_analyze(n, json, no_numeric, timing),
        Command::Scan { from, to, filter, jobs, csv: _, json, no_numeric } => {
            cmd_scan(from, to, filter, jobs, json, no_numeric)
        }
        Command::Verify { check, nmax, pmax, qmax } => cmd_verify(&check, nmax, pmax, qmax),
        Command::Walk { n, pair, time } => cmd_walk(n, pair, time),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(0, _)) => ExitCode::SUCCESS,
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
