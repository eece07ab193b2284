use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use sdc::advgen::{gen_candidate_queries, gen_random_instance, sample_d, DParams};
use sdc::eval::{expected_ratio_over_seeds, space_report, Reference};
use sdc::persist::{read_sketch, write_sketch};
use sdc::setsystem::{ingest_edge_list, parse_queries, write_edge_list};
use sdc::{Error, Oracle, OracleKind, Query, SetSystem};

#[derive(Parser, Debug)]
#[command(
    name = "sdc",
    version,
    about = "Build and query space-budgeted coverage oracles"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a sketch from an edge list and print its space report.
    Build {
        #[arg(long)]
        oracle: OracleArg,
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 0.5)]
        epsilon: f64,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Answer every query in a file from a sketch.
    Query {
        #[arg(long)]
        sketch: PathBuf,
        #[arg(long)]
        queries: PathBuf,
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
    /// Measure approximation ratios against a reference solver.
    Eval {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        oracle: OracleArg,
        /// A query file, or `candidates:N` for N unions of two distinct sets.
        #[arg(long)]
        queries: String,
        #[arg(long, value_enum, default_value_t = ReferenceArg::Exact)]
        reference: ReferenceArg,
        /// Static-stage seeds: `a..b` (inclusive) or a comma list.
        #[arg(long, default_value = "0")]
        seeds: String,
        #[arg(long, default_value_t = 0.5)]
        epsilon: f64,
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Seed for `candidates:N` query generation.
        #[arg(long, default_value_t = 0)]
        query_seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Generate an instance file.
    Gen {
        #[arg(value_enum)]
        family: GenFamily,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0.0)]
        epsilon: f64,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long)]
        density: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output path; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the space report of a sketch file.
    Stats {
        #[arg(long)]
        sketch: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OracleArg {
    Full,
    Simple,
    GreedyPartition,
    Sparse,
    Combined,
}

impl From<OracleArg> for OracleKind {
    fn from(o: OracleArg) -> Self {
        match o {
            OracleArg::Full => OracleKind::Full,
            OracleArg::Simple => OracleKind::Simple,
            OracleArg::GreedyPartition => OracleKind::GreedyPartition,
            OracleArg::Sparse => OracleKind::Sparse,
            OracleArg::Combined => OracleKind::Combined,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ReferenceArg {
    Exact,
    Greedy,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Records,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GenFamily {
    DDist,
    Random,
}

fn open_system(path: &Path) -> Result<SetSystem, Error> {
    ingest_edge_list(BufReader::new(File::open(path)?))
}

fn parse_seeds(spec: &str) -> Result<Vec<u64>, Error> {
    let bad = || Error::Parameter(format!("bad seed list {spec:?}; use a..b or a,b,c"));
    if let Some((a, b)) = spec.split_once("..") {
        let (a, b): (u64, u64) = (
            a.trim().parse().map_err(|_| bad())?,
            b.trim().parse().map_err(|_| bad())?,
        );
        if a > b {
            return Err(bad());
        }
        return Ok((a..=b).collect());
    }
    spec.split(',')
        .map(|s| s.trim().parse().map_err(|_| bad()))
        .collect()
}

fn run(cli: Cli, out: &mut impl Write) -> Result<(), Error> {
    match cli.cmd {
        Command::Build {
            oracle,
            input,
            epsilon,
            k,
            seed,
            out: path,
        } => {
            let mut sys = open_system(&input)?;
            let sketch = OracleKind::from(oracle).build(&sys, epsilon, k, seed)?;
            let labels = sys.take_labels();
            write_sketch(
                &sketch,
                labels.as_ref(),
                BufWriter::new(File::create(&path)?),
            )?;
            write!(out, "{}", space_report(&sketch).to_text())?;
        }
        Command::Query { sketch, queries, k } => {
            let file = read_sketch(BufReader::new(File::open(&sketch)?))?;
            let oracle = &file.sketch;
            let qs = parse_queries(
                BufReader::new(File::open(&queries)?),
                oracle.n(),
                file.labels.as_ref(),
            )?;
            for q in &qs {
                let sol = oracle.answer(q, k)?;
                if sol.set_ids.is_empty() {
                    writeln!(out, "(none) {}", sol.sketch_coverage)?;
                    continue;
                }
                let names: Vec<String> = sol
                    .set_ids
                    .iter()
                    .map(|&s| match &file.labels {
                        Some(l) => l.set_name(s as usize),
                        None => s.to_string(),
                    })
                    .collect();
                writeln!(out, "{} {}", names.join(" "), sol.sketch_coverage)?;
            }
        }
        Command::Eval {
            input,
            oracle,
            queries,
            reference,
            seeds,
            epsilon,
            k,
            query_seed,
            format,
        } => {
            let sys = open_system(&input)?;
            let qs: Vec<Query> = match queries.strip_prefix("candidates:") {
                Some(count) => {
                    let count = count
                        .parse()
                        .map_err(|_| Error::Parameter(format!("bad candidate count {count:?}")))?;
                    gen_candidate_queries(&sys, &sys, count, query_seed)?
                }
                None => {
                    parse_queries(BufReader::new(File::open(&queries)?), sys.n(), sys.labels())?
                }
            };
            let kind = OracleKind::from(oracle);
            let seeds = if kind.is_randomized() {
                parse_seeds(&seeds)?
            } else {
                vec![0]
            };
            let reference = match reference {
                ReferenceArg::Exact => Reference::Exact,
                ReferenceArg::Greedy => Reference::GreedyFull,
            };
            let report = expected_ratio_over_seeds(
                &sys,
                |s| kind.build(&sys, epsilon, k, s),
                &qs,
                k,
                &seeds,
                reference,
            )?;
            match format {
                Format::Text => {
                    writeln!(out, "oracle={kind}")?;
                    if kind.is_randomized() {
                        writeln!(out, "epsilon={epsilon}")?;
                    }
                    write!(out, "{}", report.to_text())?;
                }
                Format::Records => write!(out, "{}", report.to_records())?,
            }
        }
        Command::Gen {
            family,
            n,
            m,
            epsilon,
            k,
            density,
            seed,
            out: path,
        } => {
            let sys = match family {
                GenFamily::DDist => {
                    if density.is_some() {
                        return Err(Error::Parameter(
                            "--density applies to `gen random` only".into(),
                        ));
                    }
                    sample_d(&DParams {
                        n,
                        m,
                        epsilon,
                        k,
                        seed,
                    })?
                }
                GenFamily::Random => {
                    let density = density
                        .ok_or_else(|| Error::Parameter("`gen random` needs --density".into()))?;
                    gen_random_instance(n, m, density, seed)?
                }
            };
            let text = write_edge_list(&sys);
            match path {
                Some(p) => fs::write(p, text)?,
                None => out.write_all(text.as_bytes())?,
            }
        }
        Command::Stats { sketch } => {
            let file = read_sketch(BufReader::new(File::open(&sketch)?))?;
            write!(out, "{}", space_report(&file.sketch).to_text())?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();

    if let Some(threads) = std::env::var("SDC_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("sdc: cannot size the worker pool: {e}");
        }
    }

    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let res = run(cli, &mut out).and_then(|()| out.flush().map_err(Error::from));
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("sdc: {e}");
            ExitCode::from(1)
        }
    }
}
