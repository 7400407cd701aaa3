mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use leaky_hurwitz::acceptance;
use leaky_hurwitz::chambers::{
    fit_chamber_polynomial_with, sign_vector, straddle, wall_crossing_genus0, wall_crossing_series, FitOptions,
    LatticePoint, Wall,
};
use leaky_hurwitz::cutjoin::verify_cut_and_join;
use leaky_hurwitz::fock::{
    connected_vev_series, disconnected_vev_series, insertion_caps, tree_to_dot, OpSequence,
};
use leaky_hurwitz::hurwitz::{
    compute, disconnected_hurwitz, insertions_for_genus, HurwitzCache, HurwitzQuery, HurwitzResult, Method,
};
use leaky_hurwitz::oracle::oracle_disconnected;
use leaky_hurwitz::partition::{partitions_of, Partition};
use leaky_hurwitz::rational::display;
use leaky_hurwitz::series::CapVector;
use leaky_hurwitz::{HurwitzError, Rational};

use output::{Format, Printer, ValueRecord};

const CACHE_ENV: &str = "HURWITZ_CACHE";

#[derive(Parser, Debug)]
#[command(name = "leaky-hurwitz", version, about = "Exact leaky completed-cycles double Hurwitz numbers")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Plain, global = true)]
    format: Format,
    /// Worker threads; defaults to the number of logical cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Report wall-clock milliseconds instead of 0.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// A single number.
    Compute(ComputeArgs),
    /// Every number over a range of sizes and leaks.
    Table(TableArgs),
    /// Interpolate the polynomial on the chamber of a point.
    ChamberFit(ChamberArgs),
    /// Evaluate the wall-crossing formula at a point.
    WallCross(WallArgs),
    /// Check dG/dβ = Q G on a grid.
    CutjoinVerify(CutJoinArgs),
    /// Compare engine values with the fermionic state-space evaluation.
    OracleVerify(OracleArgs),
    /// Commutation tree as a DOT digraph.
    TreeDump(TreeArgs),
    /// Run the acceptance checks.
    Selftest(SelftestArgs),
}

#[derive(Args, Debug)]
struct QueryArgs {
    /// Parts of mu, e.g. 5,2,2.
    #[arg(long, value_parser = parse_partition, default_value = "")]
    mu: Partition,
    /// Parts of nu.
    #[arg(long, value_parser = parse_partition, default_value = "")]
    nu: Partition,
    #[arg(long, allow_hyphen_values = true)]
    k: i64,
    #[arg(long, default_value_t = 1)]
    r: u32,
    /// Number of insertions, or `auto` together with --g.
    #[arg(long, default_value = "auto")]
    s: String,
    /// Genus, used when --s is auto.
    #[arg(long)]
    g: Option<u32>,
    #[arg(long)]
    connected: bool,
}

#[derive(Args, Debug)]
struct ComputeArgs {
    #[command(flatten)]
    query: QueryArgs,
    /// Cache file (JSON lines); defaults to $HURWITZ_CACHE.
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Extract [z_1^c_1 .. z_s^c_s] instead of the (r+1)-th powers.
    #[arg(long, value_parser = parse_caps)]
    caps: Option<::std::vec::Vec<u32>>,
}

#[derive(Args, Debug)]
struct TableArgs {
    /// Largest |mu| and |nu|.
    #[arg(long)]
    max_size: u32,
    #[arg(long, allow_hyphen_values = true, default_value_t = -1)]
    k_min: i64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 1)]
    k_max: i64,
    #[arg(long, default_value_t = 1)]
    r: u32,
    #[arg(long, default_value = "auto")]
    s: String,
    #[arg(long)]
    g: Option<u32>,
    #[arg(long)]
    connected: bool,
    /// Leave out zero values.
    #[arg(long)]
    nonzero: bool,
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ChamberArgs {
    /// Ordered parts of mu.
    #[arg(long, value_parser = parse_ordered)]
    mu: ::std::vec::Vec<u32>,
    #[arg(long, value_parser = parse_ordered)]
    nu: ::std::vec::Vec<u32>,
    #[arg(long, default_value_t = 1)]
    r: u32,
    #[arg(long)]
    s: usize,
    #[arg(long, default_value_t = 0x5eed)]
    seed: u64,
    #[arg(long, default_value_t = 5)]
    held_out: usize,
}

#[derive(Args, Debug)]
struct WallArgs {
    #[arg(long, value_parser = parse_ordered)]
    mu: ::std::vec::Vec<u32>,
    #[arg(long, value_parser = parse_ordered)]
    nu: ::std::vec::Vec<u32>,
    #[arg(long, default_value_t = 1)]
    r: u32,
    #[arg(long)]
    s: usize,
    /// 1-based indices into mu.
    #[arg(long, value_parser = parse_indices, default_value = "")]
    i: ::std::vec::Vec<usize>,
    /// 1-based indices into nu.
    #[arg(long, value_parser = parse_indices, default_value = "")]
    j: ::std::vec::Vec<usize>,
    #[arg(long)]
    t: usize,
}

#[derive(Args, Debug)]
struct CutJoinArgs {
    /// Largest |nu|.
    #[arg(long, default_value_t = 5)]
    max_size: u32,
    #[arg(long, value_parser = parse_signed_list, default_value = "-1,0,1,2", allow_hyphen_values = true)]
    k: ::std::vec::Vec<i64>,
    #[arg(long, value_parser = parse_indices, default_value = "1,2")]
    r: ::std::vec::Vec<usize>,
    #[arg(long, value_parser = parse_indices, default_value = "1,2")]
    s: ::std::vec::Vec<usize>,
}

#[derive(Args, Debug)]
struct OracleArgs {
    /// Largest |mu|.
    #[arg(long, default_value_t = 6)]
    max_size: u32,
    #[arg(long, default_value_t = 3)]
    max_s: usize,
    #[arg(long, default_value_t = 2)]
    max_r: u32,
    #[arg(long, default_value_t = 3)]
    max_k: i64,
}

#[derive(Args, Debug)]
struct TreeArgs {
    #[arg(long, value_parser = parse_partition, default_value = "")]
    mu: Partition,
    #[arg(long, value_parser = parse_partition, default_value = "")]
    nu: Partition,
    #[arg(long, allow_hyphen_values = true)]
    k: i64,
    #[arg(long)]
    s: usize,
    #[arg(long, default_value_t = 10_000)]
    max_nodes: usize,
}

#[derive(Args, Debug)]
struct SelftestArgs {
    /// Run a single criterion.
    #[arg(long)]
    only: Option<u8>,
}

fn parse_partition(text: &str) -> Result<Partition, String> {
    text.parse::<Partition>().map_err(|e| e.to_string())
}

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> Result<Vec<T>, String> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .enumerate()
        .map(|(i, piece)| {
            piece
                .trim()
                .parse()
                .map_err(|_| format!("entry {} ({:?}) is not {what}", i + 1, piece.trim()))
        })
        .collect()
}

fn parse_ordered(text: &str) -> Result<Vec<u32>, String> {
    let parts: Vec<u32> = parse_list(text, "a positive integer")?;
    if let Some(pos) = parts.iter().position(|&p| p == 0) {
        return Err(format!("part {} is zero; parts must be positive", pos + 1));
    }
    Ok(parts)
}

fn parse_indices(text: &str) -> Result<Vec<usize>, String> {
    let ix: Vec<usize> = parse_list(text, "a positive integer")?;
    if let Some(pos) = ix.iter().position(|&p| p == 0) {
        return Err(format!("entry {} is zero; indices start at 1", pos + 1));
    }
    Ok(ix)
}

fn parse_signed_list(text: &str) -> Result<Vec<i64>, String> {
    parse_list(text, "an integer")
}

fn parse_caps(text: &str) -> Result<Vec<u32>, String> {
    parse_list(text, "a non-negative integer")
}

/// Failures mapped onto exit codes.
enum Failure {
    Usage(String),
    Verification(String),
}

impl From<HurwitzError> for Failure {
    fn from(e: HurwitzError) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn resolve_s(s: &str, g: Option<u32>, r: u32, m: usize, n: usize) -> Result<usize, Failure> {
    if s != "auto" {
        return s
            .parse()
            .map_err(|_| Failure::Usage(format!("--s: {s:?} is neither a count nor `auto`")));
    }
    let Some(g) = g else {
        return Err(Failure::Usage("--s auto needs --g".into()));
    };
    insertions_for_genus(g, r, m, n).ok_or_else(|| {
        Failure::Usage(format!(
            "--g {g}: 2g - 2 + m + n = {} is not a non-negative multiple of r = {r}",
            2 * i64::from(g) - 2 + (m + n) as i64
        ))
    })
}

fn open_cache(path: Option<PathBuf>) -> Result<Option<HurwitzCache>, Failure> {
    let path = path.or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from));
    path.map(|p| HurwitzCache::open(&p).map_err(|e| Failure::Usage(format!("--cache {}: {e}", p.display()))))
        .transpose()
}

fn evaluate(query: &HurwitzQuery, cache: Option<&HurwitzCache>) -> Result<HurwitzResult, HurwitzError> {
    match cache {
        Some(cache) => cache.compute(query),
        None => compute(query),
    }
}

fn run_compute(args: ComputeArgs, printer: &Printer) -> Outcome {
    let q = &args.query;
    let s = resolve_s(&q.s, q.g, q.r, q.mu.len(), q.nu.len())?;
    let query = HurwitzQuery::new(q.mu.clone(), q.nu.clone(), q.k, q.r, s, q.connected)?;
    if let Some(caps) = args.caps {
        if caps.len() != s {
            return Err(Failure::Usage(format!("--caps has {} entries, expected s = {s}", caps.len())));
        }
        insertion_caps(q.r, s)?;
        let start = Instant::now();
        let caps = CapVector::new(caps);
        let ops = OpSequence::hurwitz(&q.mu, &q.nu, q.k, s);
        let series = if q.connected {
            connected_vev_series(&ops, &caps)
        } else {
            disconnected_vev_series(&ops, &caps)
        };
        let value = series.coefficient_at(caps.as_slice())?
            / Rational::from_integer(q.mu.product() * q.nu.product());
        let result = HurwitzResult {
            value,
            query,
            method: Method::Engine,
            millis: start.elapsed().as_millis(),
        };
        printer.header();
        printer.value(&ValueRecord::new(&result, printer.timing));
        return Ok(());
    }
    let cache = open_cache(args.cache)?;
    let result = evaluate(&query, cache.as_ref())?;
    printer.header();
    printer.value(&ValueRecord::new(&result, printer.timing));
    Ok(())
}

fn run_table(args: TableArgs, printer: &Printer) -> Outcome {
    if args.k_min > args.k_max {
        return Err(Failure::Usage(format!("--k-min {} exceeds --k-max {}", args.k_min, args.k_max)));
    }
    let cache = open_cache(args.cache)?;
    let mut queries = Vec::new();
    for mu in (1..=args.max_size).flat_map(partitions_of) {
        for nu in (1..=args.max_size).flat_map(partitions_of) {
            let s = match resolve_s(&args.s, args.g, args.r, mu.len(), nu.len()) {
                Ok(s) => s,
                Err(_) if args.s == "auto" && args.g.is_some() => continue,
                Err(e) => return Err(e),
            };
            for k in args.k_min..=args.k_max {
                let balanced = mu.size() == nu.size() + s as i64 * k;
                // Unbalanced queries are zero; skip them unless s = 0 leaves k free.
                if balanced && (s > 0 || k == args.k_min) {
                    queries.push(HurwitzQuery::new(mu.clone(), nu.clone(), k, args.r, s, args.connected)?);
                }
            }
        }
    }
    let results: Vec<HurwitzResult> = queries
        .par_iter()
        .map(|q| evaluate(q, cache.as_ref()))
        .collect::<Result<_, _>>()?;
    printer.header();
    for result in results.iter().filter(|r| !args.nonzero || r.value != Rational::default()) {
        printer.value(&ValueRecord::new(result, printer.timing));
    }
    Ok(())
}

fn lattice_point(mu: &[u32], nu: &[u32], s: usize) -> Result<LatticePoint, Failure> {
    let to = |v: &[u32]| v.iter().map(|&x| i64::from(x)).collect();
    LatticePoint::new(to(mu), to(nu), s).map_err(|e| Failure::Usage(format!("--mu/--nu: {e}")))
}

fn run_chamber_fit(args: ChamberArgs, printer: &Printer) -> Outcome {
    let base = lattice_point(&args.mu, &args.nu, args.s)?;
    let options = FitOptions {
        seed: args.seed,
        held_out: args.held_out,
        ..FitOptions::default()
    };
    match fit_chamber_polynomial_with(&base, args.r, args.s, &options) {
        Ok(fit) => {
            printer.chamber(&base, args.r, args.s, &fit);
            Ok(())
        }
        Err(e @ HurwitzError::HeldOutMismatch { .. }) => Err(Failure::Verification(e.to_string())),
        Err(e) => Err(e.into()),
    }
}

fn run_wall_cross(args: WallArgs, printer: &Printer) -> Outcome {
    let point = lattice_point(&args.mu, &args.nu, args.s)?;
    if let Some(&bad) = args.i.iter().find(|&&i| i > point.m()) {
        return Err(Failure::Usage(format!("--i: index {bad} exceeds m = {}", point.m())));
    }
    if let Some(&bad) = args.j.iter().find(|&&j| j > point.n()) {
        return Err(Failure::Usage(format!("--j: index {bad} exceeds n = {}", point.n())));
    }
    if args.t > args.s {
        return Err(Failure::Usage(format!("--t {} exceeds s = {}", args.t, args.s)));
    }
    let wall = Wall::new(&args.i, &args.j, args.t);
    let genus_zero = args.r == 1 && args.s + 2 == point.m() + point.n();
    let delta = wall.delta(&point);
    if delta < 0 {
        return Err(Failure::Usage(format!(
            "delta = {delta} < 0: pass a point on the positive side of {wall} or on it"
        )));
    }
    if delta > 0 {
        let value = wall_crossing_series(&wall, &point, args.r, args.s)?;
        let g0 = genus_zero.then(|| wall_crossing_genus0(&wall, &point)).transpose()?;
        printer.wall(&wall, &point, delta, &value, g0.as_ref(), None);
        return Ok(());
    }
    // On the wall: fit both neighbouring chambers and compare.
    let Some((up, down)) = straddle(&wall, &point, args.s) else {
        return Err(Failure::Usage(format!(
            "{point} lies on further walls ({} zero signs); no generic neighbours one step away",
            sign_vector(&point, args.s).zeros().len()
        )));
    };
    let upper = fit_chamber_polynomial_with(&up, args.r, args.s, &FitOptions::default())?;
    let lower = fit_chamber_polynomial_with(&down, args.r, args.s, &FitOptions::default())?;
    let jump = upper.poly.sub(&lower.poly);
    let mut mismatches = Vec::new();
    let mut checked = 0;
    for q in std::iter::once(&up).chain(upper.held_out.iter().map(|(q, _)| q)) {
        let value = wall_crossing_series(&wall, q, args.r, args.s)?;
        let expected = jump.eval(&q.coordinates());
        let g0 = genus_zero.then(|| wall_crossing_genus0(&wall, q)).transpose()?;
        if value != expected || g0.as_ref().is_some_and(|g| g != &value) {
            mismatches.push(format!("{q}: formula {} vs chambers {}", display(&value), display(&expected)));
        }
        printer.wall(&wall, q, wall.delta(q), &value, g0.as_ref(), Some(&expected));
        checked += 1;
    }
    if mismatches.is_empty() {
        printer.note(&format!("{wall}: {checked} points agree"));
        Ok(())
    } else {
        Err(Failure::Verification(mismatches.into_iter().take(10).collect::<Vec<_>>().join("\n")))
    }
}

fn run_cutjoin(args: CutJoinArgs, printer: &Printer) -> Outcome {
    let mut grid = Vec::new();
    for size in 0..=args.max_size {
        for nu in partitions_of(size) {
            for &k in &args.k {
                for &r in &args.r {
                    for &s in &args.s {
                        grid.push((nu.clone(), k, r as u32, s));
                    }
                }
            }
        }
    }
    let reports = grid
        .par_iter()
        .map(|(nu, k, r, s)| verify_cut_and_join(nu, *k, *r, *s))
        .collect::<Result<Vec<_>, _>>()?;
    for report in &reports {
        printer.cutjoin(report);
    }
    let failed: Vec<String> = reports.iter().filter(|r| !r.passed()).map(|r| r.to_string()).collect();
    printer.note(&format!("{} equations, {} failing", reports.len(), failed.len()));
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verification(failed.into_iter().take(10).collect::<Vec<_>>().join("\n")))
    }
}

fn run_oracle(args: OracleArgs, printer: &Printer) -> Outcome {
    let mut grid = Vec::new();
    for size in 0..=args.max_size {
        for mu in partitions_of(size) {
            for s in 0..=args.max_s {
                for k in -args.max_k..=args.max_k {
                    let nu_size = i64::from(size) - s as i64 * k;
                    if nu_size < 0 {
                        continue;
                    }
                    for nu in partitions_of(nu_size as u32) {
                        for r in 1..=args.max_r {
                            grid.push((mu.clone(), nu.clone(), k, r, s));
                        }
                    }
                }
            }
        }
    }
    let mismatches: Vec<String> = grid
        .par_iter()
        .map(|(mu, nu, k, r, s)| -> Result<Option<String>, HurwitzError> {
            let engine = disconnected_hurwitz(mu, nu, *k, *r, *s)?;
            let oracle = oracle_disconnected(mu, nu, *k, *r, *s)?;
            Ok((engine != oracle).then(|| {
                format!("mu={mu} nu={nu} k={k} r={r} s={s}: engine {} oracle {}", display(&engine), display(&oracle))
            }))
        })
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .flatten()
        .collect();
    printer.note(&format!(
        "{} queries, {} pass, {} mismatches",
        grid.len(),
        grid.len() - mismatches.len(),
        mismatches.len()
    ));
    if mismatches.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verification(mismatches.into_iter().take(10).collect::<Vec<_>>().join("\n")))
    }
}

fn run_tree(args: TreeArgs) -> Outcome {
    let ops = OpSequence::hurwitz(&args.mu, &args.nu, args.k, args.s);
    print!("{}", tree_to_dot(&ops, args.max_nodes)?);
    Ok(())
}

fn run_selftest(args: SelftestArgs, printer: &Printer) -> Outcome {
    let reports = match args.only {
        Some(n) => vec![acceptance::run_one(n).ok_or_else(|| Failure::Usage(format!("--only {n}: criteria are 1..=10")))?],
        None => acceptance::run_all(),
    };
    for report in &reports {
        printer.criterion(report);
    }
    let failed: Vec<String> = reports.iter().filter(|r| !r.passed).map(|r| r.to_string()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verification(failed.join("\n")))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if threads == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .expect("thread pool is configured once");
    }
    let printer = Printer {
        format: cli.format,
        timing: cli.timing,
    };
    let outcome = match cli.command {
        Command::Compute(args) => run_compute(args, &printer),
        Command::Table(args) => run_table(args, &printer),
        Command::ChamberFit(args) => run_chamber_fit(args, &printer),
        Command::WallCross(args) => run_wall_cross(args, &printer),
        Command::CutjoinVerify(args) => run_cutjoin(args, &printer),
        Command::OracleVerify(args) => run_oracle(args, &printer),
        Command::TreeDump(args) => run_tree(args),
        Command::Selftest(args) => run_selftest(args, &printer),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(message)) => {
            eprintln!("verification failed:\n{message}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
