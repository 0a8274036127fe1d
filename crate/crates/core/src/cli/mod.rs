//! Command-line front end.
//!
//! [`run`] parses arguments, dispatches to the library and writes a table to
//! `stdout`. Exit codes: 0 success, 1 usage error, 2 domain error. Errors are
//! reported on `stderr` as `error: <CODE>: <message>`.

mod output;

use std::ffi::OsString;
use std::io::{self, Write};
use std::ops::RangeInclusive;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::Value;

use crate::child_set::ChildSet;
use crate::error::Error;
use crate::exact::{fraction_string, render_rational};
use crate::gauss::{normal_mixed_moment_poly, normality_gap_report_from};
use crate::lagrange::{count_trees, numerator_sequence, NumeratorEngine, NumeratorQuery};
use crate::moments::{MomentLab, MomentSpec};
use crate::oracle::{for_each_tree, OracleLimits, TreeCode, UniformSampler};
use crate::recurrence::{guess_recurrence_with, GuessOptions, Sequence};

pub use output::{json_int, Cell, Format, Table};

/// Environment variable that overrides the default enumeration cap.
pub const ENUM_CAP_VAR: &str = "CHILDSTATS_ENUM_CAP";

#[derive(Debug, Parser)]
#[command(
    name = "childstats",
    version,
    about = "Exact child-count statistics of ordered rooted trees with restricted out-degrees"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Number of trees on n vertices.
    Count(CountArgs),
    /// Numerator N = sum over trees of X_{s1}^p1 X_{s2}^p2.
    Numerator(NumeratorArgs),
    /// Raw, central and scaled mixed moments over a power grid.
    Moments(GridArgs),
    /// One scaled mixed moment.
    Scaled(ScaledArgs),
    /// Scaled mixed moments against the bivariate normal at the same correlation.
    NormalCompare(GridArgs),
    /// Guess a linear recurrence with polynomial coefficients for a count or numerator sequence.
    GuessRec(GuessArgs),
    /// List every tree on n vertices as its preorder child counts.
    Enumerate(EnumerateArgs),
    /// Draw uniformly random trees.
    Sample(SampleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct NRange {
    start: u64,
    end: u64,
    single: bool,
}

impl NRange {
    fn iter(&self) -> RangeInclusive<u64> {
        self.start..=self.end
    }
}

fn parse_n(s: &str) -> Result<NRange, String> {
    let num = |t: &str| {
        t.trim()
            .parse::<u64>()
            .map_err(|_| format!("{t:?} is not a nonnegative integer"))
    };
    let range = match s.split_once("..") {
        None => {
            let n = num(s)?;
            NRange { start: n, end: n, single: true }
        }
        Some((a, b)) => NRange {
            start: num(a)?,
            end: num(b.strip_prefix('=').unwrap_or(b))?,
            single: false,
        },
    };
    if range.start == 0 {
        return Err("n must be at least 1".into());
    }
    if range.start > range.end {
        return Err(format!("empty range {s:?}"));
    }
    Ok(range)
}

fn parse_pair(s: &str) -> Result<(u32, Option<u32>), String> {
    let num = |t: &str| {
        t.trim()
            .parse::<u32>()
            .map_err(|_| format!("{t:?} is not a nonnegative integer"))
    };
    match s.split_once(',') {
        None => Ok((num(s)?, None)),
        Some((a, b)) => Ok((num(a)?, Some(num(b)?))),
    }
}

fn parse_set(s: &str) -> Result<ChildSet, String> {
    s.parse::<ChildSet>().map_err(|e| e.to_string())
}

#[derive(Debug, Args)]
struct Common {
    /// Allowed child counts, comma separated; must contain 0.
    #[arg(short = 'S', long = "set", value_name = "S", value_parser = parse_set)]
    set: ChildSet,
    /// Vertex count, or an inclusive range such as 1..60.
    #[arg(short = 'n', value_name = "N", value_parser = parse_n)]
    n: NRange,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Args)]
struct CountArgs {
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct NumeratorArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    s1: u32,
    #[arg(long)]
    s2: Option<u32>,
    /// Powers p1[,p2].
    #[arg(long = "p", value_name = "P1[,P2]", value_parser = parse_pair, default_value = "1")]
    p: (u32, Option<u32>),
}

#[derive(Debug, Args)]
struct Digits {
    /// Fractional digits of decimal renderings.
    #[arg(long, default_value_t = 30, value_parser = clap::value_parser!(u32).range(1..=10_000))]
    digits: u32,
}

#[derive(Debug, Args)]
struct GridArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    s1: u32,
    #[arg(long)]
    s2: u32,
    /// Largest powers p1,p2.
    #[arg(long = "max-p", value_name = "P1,P2", value_parser = parse_pair, default_value = "4,4")]
    max_p: (u32, Option<u32>),
    #[command(flatten)]
    digits: Digits,
}

#[derive(Debug, Args)]
struct ScaledArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    s1: u32,
    #[arg(long)]
    s2: u32,
    #[arg(long = "p", value_name = "P1,P2", value_parser = parse_pair)]
    p: (u32, Option<u32>),
    #[command(flatten)]
    digits: Digits,
}

#[derive(Debug, Args)]
struct GuessArgs {
    #[arg(short = 'S', long = "set", value_name = "S", value_parser = parse_set)]
    set: ChildSet,
    /// Statistic index; without it the sequence is the tree count.
    #[arg(long)]
    s1: Option<u32>,
    #[arg(long, requires = "s1")]
    s2: Option<u32>,
    #[arg(long = "p", value_name = "P1[,P2]", value_parser = parse_pair, default_value = "1")]
    p: (u32, Option<u32>),
    /// Terms a(1..=terms) used for the fit and the held-out check.
    #[arg(long, default_value_t = 40)]
    terms: u64,
    #[arg(long, default_value_t = 4)]
    max_order: usize,
    #[arg(long, default_value_t = 4)]
    max_degree: usize,
    /// Trailing terms kept out of the fit.
    #[arg(long, default_value_t = 8)]
    margin: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Args)]
struct EnumerateArgs {
    #[command(flatten)]
    common: Common,
    /// Largest n to enumerate (default 18, or $CHILDSTATS_ENUM_CAP).
    #[arg(long)]
    cap: Option<u64>,
}

#[derive(Debug, Args)]
struct SampleArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of trees to draw.
    #[arg(long, default_value_t = 1)]
    count: u64,
}

enum Failure {
    Usage(String),
    Domain(Error),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidChildSet(_)
            | Error::InvalidQuery(_)
            | Error::InvalidCorrelation(_)
            | Error::NonUnitConstantTerm => Failure::Usage(format!("{}: {e}", e.code())),
            other => Failure::Domain(other),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

type CliResult = Result<(), Failure>;

/// Runs one command line (including the program name) and returns the exit code.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return 0;
            }
            let text = e.to_string();
            let mut lines = text.lines();
            let first = lines.next().unwrap_or_default();
            let first = first.strip_prefix("error: ").unwrap_or(first);
            let _ = writeln!(stderr, "error: USAGE: {first}");
            for line in lines.filter(|l| !l.trim().is_empty()) {
                let _ = writeln!(stderr, "{line}");
            }
            return 1;
        }
    };
    let outcome = match cli.command {
        Command::Count(a) => count(a, stdout),
        Command::Numerator(a) => numerator(a, stdout),
        Command::Moments(a) => moments(a, stdout),
        Command::Scaled(a) => scaled(a, stdout),
        Command::NormalCompare(a) => normal_compare(a, stdout),
        Command::GuessRec(a) => guess_rec(a, stdout),
        Command::Enumerate(a) => enumerate(a, stdout),
        Command::Sample(a) => sample(a, stdout),
    };
    match outcome {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: USAGE: {msg}");
            1
        }
        Err(Failure::Domain(e)) => {
            let _ = writeln!(stderr, "error: {}: {e}", e.code());
            2
        }
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => 0,
        Err(Failure::Io(e)) => {
            let _ = writeln!(stderr, "error: IO: {e}");
            2
        }
    }
}

/// Computes rows for every `n` of the range in parallel batches and emits
/// them in ascending `n`. Within a range, `n` for which `compute` reports
/// [`Error::NoTrees`] or [`Error::DegenerateVariance`] produce no rows; for a
/// single `n` those errors are returned.
fn for_each_n<R: Send>(
    range: NRange,
    table: &mut Table<'_>,
    compute: impl Fn(u64) -> crate::error::Result<R> + Sync,
    mut emit: impl FnMut(&mut Table<'_>, u64, R) -> CliResult,
) -> CliResult {
    let batch = (rayon::current_num_threads() * 2).max(1) as u64;
    let mut lo = range.start;
    while lo <= range.end {
        let hi = range.end.min(lo.saturating_add(batch - 1));
        let results: Vec<_> = (lo..=hi).into_par_iter().map(|n| (n, compute(n))).collect();
        for (n, r) in results {
            match r {
                Ok(v) => emit(table, n, v)?,
                Err(Error::NoTrees { .. } | Error::DegenerateVariance) if !range.single => {}
                Err(e) => return Err(e.into()),
            }
        }
        table.flush()?;
        if hi == u64::MAX {
            break;
        }
        lo = hi + 1;
    }
    Ok(())
}

fn count(a: CountArgs, out: &mut dyn Write) -> CliResult {
    let c = a.common;
    if c.n.single && c.format == Format::Text {
        writeln!(out, "{}", count_trees(&c.set, c.n.start))?;
        return Ok(());
    }
    let mut table = Table::new(c.format, &["n", "count"], out);
    for_each_n(
        c.n,
        &mut table,
        |n| Ok(count_trees(&c.set, n)),
        |t, n, v| Ok(t.row(vec![n.into(), v.into()])?),
    )?;
    Ok(table.finish()?)
}

fn numerator(a: NumeratorArgs, out: &mut dyn Write) -> CliResult {
    let c = a.common;
    let (p1, p2) = (a.p.0, a.p.1.unwrap_or(0));
    NumeratorQuery {
        child_set: c.set.clone(),
        n: c.n.start,
        s1: a.s1,
        s2: a.s2,
        p1,
        p2,
    }
    .validate()?;
    let compute = |n| NumeratorEngine::new(&c.set, n, p1 + p2)?.numerator(a.s1, a.s2, p1, p2);
    if c.n.single && c.format == Format::Text {
        writeln!(out, "{}", compute(c.n.start)?)?;
        return Ok(());
    }
    let mut table = Table::new(c.format, &["n", "s1", "s2", "p1", "p2", "value"], out);
    for_each_n(c.n, &mut table, compute, |t, n, v| {
        Ok(t.row(vec![
            n.into(),
            a.s1.into(),
            a.s2.into(),
            p1.into(),
            p2.into(),
            v.into(),
        ])?)
    })?;
    Ok(table.finish()?)
}

fn grid_spec(c: &Common, s1: u32, s2: u32, (max_p1, max_p2): (u32, Option<u32>)) -> Result<MomentSpec, Failure> {
    let max_p2 = max_p2.ok_or_else(|| Failure::Usage("power bounds must be given as P1,P2".into()))?;
    Ok(MomentSpec::new(c.set.clone(), c.n.start, (s1, s2), (max_p1, max_p2))?)
}

fn lab_at(spec: &MomentSpec, n: u64) -> crate::error::Result<MomentLab> {
    let mut spec = spec.clone();
    spec.n = n;
    MomentLab::new(&spec)
}

fn moments(a: GridArgs, out: &mut dyn Write) -> CliResult {
    let c = &a.common;
    let spec = grid_spec(c, a.s1, a.s2, a.max_p)?;
    let digits = a.digits.digits;
    let columns = [
        "n", "p1", "p2", "raw", "raw_decimal", "central", "central_decimal", "scaled", "scaled_exact",
    ];
    let mut table = Table::new(c.format, &columns, out);
    for_each_n(
        c.n,
        &mut table,
        |n| lab_at(&spec, n)?.report(digits),
        |t, n, report| {
            for (&(p1, p2), raw) in &report.raw {
                let central = &report.central[&(p1, p2)];
                let scaled = report.scaled.get(&(p1, p2));
                t.row(vec![
                    n.into(),
                    p1.into(),
                    p2.into(),
                    fraction_string(raw).into(),
                    render_rational(raw, digits).into(),
                    fraction_string(central).into(),
                    render_rational(central, digits).into(),
                    scaled.map(|s| s.render(digits)).into(),
                    scaled.and_then(|s| s.exact.as_ref().map(fraction_string)).into(),
                ])?;
            }
            Ok(())
        },
    )?;
    Ok(table.finish()?)
}

fn scaled(a: ScaledArgs, out: &mut dyn Write) -> CliResult {
    let c = &a.common;
    let (p1, p2) = (a.p.0, a.p.1.ok_or_else(|| Failure::Usage("--p needs P1,P2".into()))?);
    let spec = grid_spec(c, a.s1, a.s2, (p1, Some(p2)))?;
    let digits = a.digits.digits;
    let mut table = Table::new(c.format, &["n", "p1", "p2", "scaled", "exact"], out);
    for_each_n(
        c.n,
        &mut table,
        |n| lab_at(&spec, n)?.scaled(p1, p2),
        |t, n, s| {
            Ok(t.row(vec![
                n.into(),
                p1.into(),
                p2.into(),
                s.render(digits).into(),
                s.exact.as_ref().map(fraction_string).into(),
            ])?)
        },
    )?;
    Ok(table.finish()?)
}

fn normal_compare(a: GridArgs, out: &mut dyn Write) -> CliResult {
    let c = &a.common;
    let spec = grid_spec(c, a.s1, a.s2, a.max_p)?;
    let digits = a.digits.digits;
    let columns = ["n", "p1", "p2", "rho", "scaled", "normal_poly", "normal", "gap"];
    let mut table = Table::new(c.format, &columns, out);
    for_each_n(
        c.n,
        &mut table,
        |n| normality_gap_report_from(&lab_at(&spec, n)?),
        |t, n, report| {
            let rho = report.rho.render(digits);
            for row in &report.rows {
                t.row(vec![
                    n.into(),
                    row.p1.into(),
                    row.p2.into(),
                    rho.clone().into(),
                    row.scaled.render(digits).into(),
                    normal_mixed_moment_poly(row.p1, row.p2).to_string().into(),
                    row.reference.render(digits).into(),
                    row.gap.render(digits).into(),
                ])?;
            }
            Ok(())
        },
    )?;
    Ok(table.finish()?)
}

fn guess_rec(a: GuessArgs, out: &mut dyn Write) -> CliResult {
    let (p1, p2) = (a.p.0, a.p.1.unwrap_or(0));
    if a.terms == 0 {
        return Err(Failure::Usage("--terms must be at least 1".into()));
    }
    let terms: Vec<BigInt> = match a.s1 {
        None => (1..=a.terms).into_par_iter().map(|n| count_trees(&a.set, n)).collect(),
        Some(s1) => numerator_sequence(&a.set, s1, a.s2, p1, p2, a.terms)?.column(p1, p2),
    };
    let opts = GuessOptions {
        max_order: a.max_order,
        max_degree: a.max_degree,
        margin: a.margin,
    };
    let rec = guess_recurrence_with(&Sequence::new(1, terms), &opts)?;
    if a.format == Format::Text {
        match &rec {
            Some(r) => writeln!(out, "{r}")?,
            None => writeln!(out, "none")?,
        }
        return Ok(());
    }
    let columns = [
        "child_set", "s1", "s2", "p1", "p2", "terms", "order", "degree", "verified_from", "verified_to",
        "recurrence", "coefficients",
    ];
    let mut table = Table::new(a.format, &columns, out);
    let (s1, s2) = (a.s1, a.s2);
    let powers = |p: u32| a.s1.map(|_| p);
    let mut cells = vec![
        a.set.to_string().into(),
        s1.into(),
        s2.into(),
        powers(p1).into(),
        s2.map(|_| p2).into(),
        a.terms.into(),
    ];
    match &rec {
        Some(r) => {
            let (from, to) = r.verified_range.unwrap_or_default();
            let coeffs = Value::Array(
                r.coefficients()
                    .iter()
                    .map(|q| Value::Array(q.iter().map(json_int).collect()))
                    .collect(),
            );
            cells.extend([
                (r.order() as u64).into(),
                (r.degree() as u64).into(),
                Cell::Int(from.into()),
                Cell::Int(to.into()),
                r.render().into(),
                Cell::Json(coeffs),
            ]);
        }
        None => cells.extend(std::iter::repeat_n(Cell::Null, 6)),
    }
    table.row(cells)?;
    Ok(table.finish()?)
}

fn code_cell(code: &[u32], format: Format) -> Cell {
    match format {
        Format::Json => Cell::Json(Value::Array(code.iter().map(|&c| Value::from(c)).collect())),
        _ => Cell::Str(TreeCode(code.to_vec()).to_string()),
    }
}

fn enum_limits(cap: Option<u64>) -> Result<OracleLimits, Failure> {
    let mut limits = OracleLimits::default();
    let cap = match cap {
        Some(c) => Some(c),
        None => match std::env::var(ENUM_CAP_VAR) {
            Ok(v) => Some(
                v.trim()
                    .parse()
                    .map_err(|_| Failure::Usage(format!("{ENUM_CAP_VAR}={v:?} is not an integer")))?,
            ),
            Err(_) => None,
        },
    };
    if let Some(c) = cap {
        limits.enumeration_max_n = c;
    }
    Ok(limits)
}

fn enumerate(a: EnumerateArgs, out: &mut dyn Write) -> CliResult {
    let c = a.common;
    let limits = enum_limits(a.cap)?;
    if c.format == Format::Text {
        // plain listing, one tree per line
        let mut w = io::BufWriter::new(out);
        for n in c.n.iter() {
            let mut err = None;
            for_each_tree(&c.set, n, &limits, |code| {
                if err.is_none() {
                    err = writeln!(w, "{}", TreeCode(code.to_vec())).err();
                }
            })?;
            if let Some(e) = err {
                return Err(e.into());
            }
        }
        return Ok(w.flush()?);
    }
    let mut table = Table::new(c.format, &["n", "tree"], out);
    for n in c.n.iter() {
        let mut err = None;
        for_each_tree(&c.set, n, &limits, |code| {
            if err.is_none() {
                err = table.row(vec![n.into(), code_cell(code, c.format)]).err();
            }
        })?;
        if let Some(e) = err {
            return Err(e.into());
        }
    }
    Ok(table.finish()?)
}

fn sample(a: SampleArgs, out: &mut dyn Write) -> CliResult {
    let c = a.common;
    if !c.n.single {
        return Err(Failure::Usage("sample takes a single n".into()));
    }
    let sampler = UniformSampler::new(&c.set, c.n.start)?;
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    if c.format == Format::Text {
        let mut w = io::BufWriter::new(out);
        for _ in 0..a.count {
            writeln!(w, "{}", sampler.sample(&mut rng))?;
        }
        return Ok(w.flush()?);
    }
    let mut table = Table::new(c.format, &["index", "n", "seed", "tree"], out);
    for i in 0..a.count {
        let t = sampler.sample(&mut rng);
        table.row(vec![i.into(), c.n.start.into(), a.seed.into(), code_cell(&t.0, c.format)])?;
    }
    Ok(table.finish()?)
}
