//! Command-line front end: analyze a square file, verify claim suites over
//! corpora, run residue searches, generate seeded random squares, and emit
//! the bundled fixtures.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{ArgGroup, Args, Parser, Subcommand};

use lparity_core::claims::{self, ClaimKind, ClaimReport, Subject};
use lparity_core::latin::{parse_square, Cells, LatinSquare, Parsed};
use lparity_core::search::{self, Corpus};
use lparity_core::spectrum::{
    self, count_transversals, depleted_counts, parity_type_counts, r_sequence, row_dup_from_t,
    signed_count, spectrum_from_r, t_table, AnalysisReport, RMode, MAX_ENUM_ORDER, MAX_R_ORDER,
};

/// Orders above this skip DFS-based counts in `analyze`.
const MAX_ANALYZE_DFS: usize = 14;

#[derive(Parser)]
#[command(name = "lparity", version, about = "Transversal counts of Latin squares: analysis, congruence verification and residue search")]
struct Cli {
    /// Worker threads for `verify` (falls back to LPARITY_THREADS, then 1)
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print counting invariants of one square file
    Analyze(AnalyzeArgs),
    /// Check claim suites over a corpus of squares
    Verify(VerifyArgs),
    /// Hunt a transversal-count residue class by turning intercalates
    Search(SearchArgs),
    /// Generate a seeded random Latin square
    Gen(GenArgs),
    /// List or emit the bundled reference squares
    Fixtures(FixturesArgs),
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Input file in .lsq format
    file: PathBuf,
    /// Weight spectrum E_1..E_n
    #[arg(long)]
    spectrum: bool,
    /// Signed transversal count alongside E_n
    #[arg(long)]
    signed: bool,
    /// Parity-type counts w, x, y, z
    #[arg(long)]
    types: bool,
    /// Deletion table t_ij and the N_r vector
    #[arg(long)]
    depleted: bool,
    /// Even-diagonal spectrum
    #[arg(long)]
    ev: bool,
    /// Subset-permanent sums R_1..R_n
    #[arg(long = "r-seq")]
    r_seq: bool,
    /// Emit one JSON object instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
#[command(group(ArgGroup::new("corpus").required(true).args(["exhaustive", "random", "fixtures"])))]
#[command(group(ArgGroup::new("claimset").required(true).args(["claims", "all_theorems", "conjectures"])))]
struct VerifyArgs {
    /// Every reduced square of this order
    #[arg(long, value_name = "N")]
    exhaustive: Option<usize>,
    /// Seeded random squares: order, count, seed
    #[arg(long, num_args = 3, value_names = ["N", "COUNT", "SEED"])]
    random: Option<Vec<u64>>,
    /// The bundled reference squares
    #[arg(long)]
    fixtures: bool,
    /// Comma-separated claim keys
    #[arg(long, value_delimiter = ',', value_name = "KEYS")]
    claims: Option<Vec<String>>,
    /// Every theorem-class claim
    #[arg(long)]
    all_theorems: bool,
    /// Every conjecture claim
    #[arg(long)]
    conjectures: bool,
}

#[derive(Args)]
#[command(group(ArgGroup::new("start").required(true).args(["order_fixture", "input"])))]
struct SearchArgs {
    /// Start from the bundled square of this order (9, 10 or 11)
    #[arg(long, value_name = "ORDER")]
    order_fixture: Option<usize>,
    /// Start from a .lsq file
    #[arg(long)]
    input: Option<PathBuf>,
    /// Target residue k
    #[arg(long, value_name = "K")]
    target: u64,
    /// Modulus m
    #[arg(long = "mod", value_name = "M")]
    modulus: u64,
    /// Maximum number of intercalate turns
    #[arg(long, default_value_t = 1_000_000)]
    budget: u64,
    /// Walk seed (randomized commands always take an explicit seed)
    #[arg(long)]
    seed: u64,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    order: usize,
    /// Walk seed (randomized commands always take an explicit seed)
    #[arg(long)]
    seed: u64,
}

#[derive(Args)]
#[command(group(ArgGroup::new("action").required(true).args(["list", "emit"])))]
struct FixturesArgs {
    /// Print fixture names and shapes
    #[arg(long)]
    list: bool,
    /// Write all fixtures as .lsq files into this directory
    #[arg(long, value_name = "DIR")]
    emit: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli
        .threads
        .or_else(|| {
            std::env::var("LPARITY_THREADS")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(1)
        .max(1);
    let result = match cli.command {
        Command::Analyze(args) => analyze(args),
        Command::Verify(args) => verify(args, threads),
        Command::Search(args) => run_search(args),
        Command::Gen(args) => gen(args),
        Command::Fixtures(args) => fixtures_cmd(args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

// ---------------------------------------------------------------------
// analyze
// ---------------------------------------------------------------------

fn analyze(args: AnalyzeArgs) -> Result<ExitCode> {
    let text = std::fs::read_to_string(&args.file)
        .with_context(|| format!("reading {}", args.file.display()))?;
    let parsed = parse_square(&text).map_err(|e| anyhow!("{}: {e}", args.file.display()))?;

    let mut rep = AnalysisReport {
        class: Some(parsed.class_name().to_string()),
        ..Default::default()
    };
    match &parsed {
        Parsed::Latin(l) => analyze_latin(l, &args, &mut rep),
        Parsed::RowLatin(l) => {
            rep.order = l.order();
            rep.transversals = Some(count_transversals(l));
            if args.spectrum || args.signed || args.types || args.ev || args.r_seq {
                rep.skipped
                    .push("spectrum/signed/types/ev/r-seq need a Latin square".into());
            }
            if args.depleted {
                let t = spectrum::t_table_row_latin(l);
                rep.t = Some(rows_of(&t, l.order()));
            }
        }
        Parsed::Array(a) => {
            rep.order = a.rows();
            rep.transversals = Some(count_transversals(a));
            if args.spectrum || args.signed || args.types || args.ev || args.r_seq || args.depleted
            {
                rep.skipped
                    .push("requested quantities need a Latin square".into());
            }
        }
    }

    if args.json {
        println!("{}", serde_json::to_string(&rep)?);
    } else {
        print_report(&parsed, &rep);
    }
    Ok(ExitCode::SUCCESS)
}

fn analyze_latin(l: &LatinSquare, args: &AnalyzeArgs, rep: &mut AnalysisReport) {
    let n = l.order();
    rep.order = n;
    if n <= MAX_ANALYZE_DFS {
        rep.transversals = Some(count_transversals(l));
    } else {
        rep.skipped
            .push(format!("transversals: order above {MAX_ANALYZE_DFS}"));
    }
    if args.spectrum || args.ev {
        match scan_or_r(l, args.spectrum, args.ev) {
            Ok(spectra) => {
                if args.spectrum {
                    rep.e = spectra.e;
                }
                if args.ev {
                    rep.e_ev = spectra.ev;
                }
            }
            Err(msg) => rep.skipped.push(msg),
        }
    }
    if args.signed {
        if n <= MAX_ANALYZE_DFS {
            rep.signed = Some(signed_count(l));
        } else {
            rep.skipped
                .push(format!("signed: order above {MAX_ANALYZE_DFS}"));
        }
    }
    if args.types {
        if n <= MAX_ANALYZE_DFS {
            rep.types = Some(parity_type_counts(l));
        } else {
            rep.skipped
                .push(format!("types: order above {MAX_ANALYZE_DFS}"));
        }
    }
    if args.depleted {
        if n <= MAX_ENUM_ORDER {
            let d = depleted_counts(l).expect("guarded");
            rep.t = Some(rows_of(d.t_flat(), n));
            rep.n_rows = Some(d.n_all().to_vec());
        } else if n <= MAX_ANALYZE_DFS {
            let t = t_table(l);
            let e_n = count_transversals(l);
            rep.n_rows = Some(row_dup_from_t(&t, e_n, n));
            rep.t = Some(rows_of(&t, n));
            rep.skipped
                .push("N derived from the deletion table (enumeration guard)".into());
        } else {
            rep.skipped
                .push(format!("depleted: order above {MAX_ANALYZE_DFS}"));
        }
    }
    if args.r_seq {
        if n <= MAX_R_ORDER {
            let r = r_sequence(l, RMode::Plain).expect("guarded");
            rep.r = Some(
                r.values()
                    .iter()
                    .map(|v| u64::try_from(v).expect("fits under order guard"))
                    .collect(),
            );
        } else {
            rep.skipped.push(format!("r-seq: order above {MAX_R_ORDER}"));
        }
    }
}

struct Spectra {
    e: Option<Vec<u64>>,
    ev: Option<Vec<u64>>,
}

/// Spectrum and even-spectrum through whichever route the order allows.
fn scan_or_r(l: &LatinSquare, want_e: bool, want_ev: bool) -> std::result::Result<Spectra, String> {
    let n = l.order();
    if n <= MAX_ENUM_ORDER {
        let scan = spectrum::scan_diagonals(l).expect("guarded");
        Ok(Spectra {
            e: want_e.then(|| scan.spectrum.counts().to_vec()),
            ev: want_ev.then(|| scan.ev_spectrum.counts().to_vec()),
        })
    } else if n <= MAX_R_ORDER {
        Ok(Spectra {
            e: want_e
                .then(|| spectrum_from_r(&r_sequence(l, RMode::Plain).unwrap()).counts().to_vec()),
            ev: want_ev
                .then(|| spectrum_from_r(&r_sequence(l, RMode::Even).unwrap()).counts().to_vec()),
        })
    } else {
        Err(format!("spectrum: order above {MAX_R_ORDER}"))
    }
}

fn rows_of(flat: &[u64], n: usize) -> Vec<Vec<u64>> {
    (0..n).map(|r| flat[r * n..(r + 1) * n].to_vec()).collect()
}

fn print_report(parsed: &Parsed, rep: &AnalysisReport) {
    println!("class: {}", parsed.class_name());
    match parsed {
        Parsed::Array(a) => println!("shape: {} x {} over {} symbols", a.rows(), a.cols(), a.symbols()),
        _ => println!("order: {}", rep.order),
    }
    if let Some(t) = rep.transversals {
        println!("transversals: {t}");
    }
    if let Some(s) = rep.signed {
        println!("signed: {s}");
    }
    if let Some(e) = &rep.e {
        println!("E: {e:?}");
    }
    if let Some(ev) = &rep.e_ev {
        println!("E_ev: {ev:?}");
    }
    if let Some(types) = &rep.types {
        println!(
            "types: w={} x={} y={} z={}",
            types.w, types.x, types.y, types.z
        );
    }
    if let Some(t) = &rep.t {
        println!("t:");
        for row in t {
            println!("  {row:?}");
        }
    }
    if let Some(nr) = &rep.n_rows {
        println!("N: {nr:?}");
    }
    if let Some(r) = &rep.r {
        println!("R: {r:?}");
    }
    for s in &rep.skipped {
        println!("skipped-cost: {s}");
    }
}

// ---------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------

fn verify(args: VerifyArgs, threads: usize) -> Result<ExitCode> {
    let corpus = if let Some(n) = args.exhaustive {
        Corpus::ExhaustiveReduced { n }
    } else if let Some(spec) = &args.random {
        Corpus::Random {
            n: spec[0] as usize,
            count: spec[1] as usize,
            seed: spec[2],
        }
    } else {
        Corpus::Fixtures
    };

    let keys: Vec<String> = if let Some(list) = &args.claims {
        for k in list {
            claims::claim(k)?; // unknown keys fail before any computation
        }
        list.clone()
    } else if args.all_theorems {
        claims::theorem_keys().iter().map(|s| s.to_string()).collect()
    } else {
        claims::conjecture_keys().iter().map(|s| s.to_string()).collect()
    };
    let key_refs: Vec<&str> = keys.iter().map(String::as_str).collect();

    let subjects = corpus.subjects()?;
    let stdout = std::io::stdout();
    let mut out = std::io::BufWriter::new(stdout.lock());
    let mut suite = lparity_core::SuiteReport::default();

    let mut emit = |subject: &Subject, reports: &[ClaimReport]| -> Result<()> {
        suite.absorb(subject, reports);
        for r in reports {
            writeln!(out, "{}", serde_json::to_string(r)?)?;
        }
        Ok(())
    };

    if threads <= 1 {
        for subject in subjects {
            let reports = claims::evaluate_subject(&subject, &key_refs)?;
            emit(&subject, &reports)?;
        }
    } else {
        use rayon::prelude::*;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .context("building thread pool")?;
        let mut subjects = subjects.peekable();
        while subjects.peek().is_some() {
            let chunk: Vec<Subject> = subjects.by_ref().take(256).collect();
            let evaluated: Vec<(Subject, Vec<ClaimReport>)> = pool.install(|| {
                chunk
                    .into_par_iter()
                    .map(|s| {
                        let r = claims::evaluate_subject(&s, &key_refs)?;
                        Ok((s, r))
                    })
                    .collect::<Result<_>>()
            })?;
            for (subject, reports) in &evaluated {
                emit(subject, reports)?;
            }
        }
    }
    suite.finish();
    drop(out);

    println!("{}", suite.summary_table());
    let mut wrote = Vec::new();
    for ce in &suite.counterexamples {
        if ce.kind == ClaimKind::Conjecture {
            let path = PathBuf::from(format!(
                "counterexample-{}-{}.lsq",
                ce.claim,
                ce.subject_id.replace(':', "-")
            ));
            std::fs::write(&path, &ce.subject_text)?;
            wrote.push(path);
        }
    }
    if !wrote.is_empty() {
        eprintln!("================================================================");
        eprintln!("CONJECTURE COUNTEREXAMPLE(S) FOUND - preserved for inspection:");
        for p in &wrote {
            eprintln!("  {}", p.display());
        }
        eprintln!("================================================================");
    }
    if suite.theorem_failures() > 0 {
        eprintln!("{} theorem-class failure(s)", suite.theorem_failures());
        return Ok(ExitCode::FAILURE);
    }
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------
// search / gen / fixtures
// ---------------------------------------------------------------------

fn run_search(args: SearchArgs) -> Result<ExitCode> {
    let start = if let Some(order) = args.order_fixture {
        let name = match order {
            9 => "order9",
            10 => "order10",
            11 => "order11",
            other => bail!("no bundled square of order {other}; use 9, 10 or 11"),
        };
        search::fixture_square(name).expect("bundled square exists")
    } else {
        let path = args.input.as_ref().expect("clap group guarantees input");
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        match parse_square(&text).map_err(|e| anyhow!("{}: {e}", path.display()))? {
            Parsed::Latin(l) => l,
            other => bail!("search needs a Latin square, got a {}", other.class_name()),
        }
    };
    let result = search::residue_search(&start, args.target, args.modulus, args.budget, args.seed)?;
    println!("{}", serde_json::to_string_pretty(&result)?);
    Ok(ExitCode::SUCCESS)
}

fn gen(args: GenArgs) -> Result<ExitCode> {
    if args.order == 0 {
        bail!("order must be positive");
    }
    let l = search::random_square(args.order, args.seed);
    print!("{}", l.to_lsq());
    Ok(ExitCode::SUCCESS)
}

fn fixtures_cmd(args: FixturesArgs) -> Result<ExitCode> {
    if let Some(dir) = args.emit {
        let files = lparity_core::fixtures::emit_all(&dir)?;
        for f in files {
            println!("{}", f.display());
        }
        return Ok(ExitCode::SUCCESS);
    }
    for f in lparity_core::fixtures::FIXTURES {
        let parsed = parse_square(f.lsq).expect("fixtures parse");
        let order = match &parsed {
            Parsed::Latin(l) => l.order(),
            Parsed::RowLatin(l) => l.order(),
            Parsed::Array(a) => a.rows(),
        };
        println!("{:<10} order {:>2}  {}", f.name, order, parsed.class_name());
    }
    Ok(ExitCode::SUCCESS)
}
