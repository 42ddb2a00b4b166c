//! Command-line front end of the `lrmkit` binary.
//!
//! Exit codes: 0 on success, 1 when a request violates a contract (bad ranges,
//! missing capabilities, invalid permutations), 2 on I/O, parse, format and usage
//! errors.

use std::collections::VecDeque;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand, ValueEnum};
use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::container::{peek_tag, Persist, Tag};
use crate::lrm::{run_count, Counter, InputArray};
use crate::partition_sort::{measures, sort_lrm, sort_runs_baseline, MeasureReport, SortStats};
use crate::permcode::{PermCode, PermSize};
use crate::rmq::{PlainRmqIndex, RmqSize, RunsRmqIndex, StrictRunsRmqIndex};
use crate::{Error, Result};

#[derive(Debug, Parser)]
#[command(name = "lrmkit", version, about = "LRM-tree indices, adaptive sorting and compressed permutations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a random permutation of 1..=n with exactly `runs` ascending runs.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        runs: usize,
        #[arg(long, env = "LRMKIT_SEED", default_value_t = 0)]
        seed: u64,
        /// Output file (stdout when absent).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print disorder measures of an array as JSON.
    Stats {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Sort an array and optionally write the comparison counters as JSON.
    Sort {
        #[arg(long, value_enum, default_value_t = SortAlgo::Lrm)]
        algo: SortAlgo,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        stats: Option<PathBuf>,
    },
    /// Range-minimum indices.
    #[command(subcommand)]
    Rmq(RmqCommand),
    /// Compressed permutations.
    #[command(subcommand)]
    Perm(PermCommand),
    /// Sweep the run count and report counters and sizes.
    Bench {
        #[arg(long, default_value_t = 1024)]
        n: usize,
        #[arg(long, env = "LRMKIT_SEED", default_value_t = 0)]
        seed: u64,
        /// Random range queries per index.
        #[arg(long, default_value_t = 1000)]
        queries: usize,
        #[arg(long)]
        json: bool,
        /// Leave out the timestamp and version block.
        #[arg(long)]
        no_meta: bool,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SortAlgo {
    Lrm,
    Runs,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum IndexKind {
    Plain,
    Sruns,
    Runs,
}

#[derive(Debug, Subcommand)]
enum RmqCommand {
    /// Build an index over an array.
    Build {
        #[arg(long, value_enum)]
        index: IndexKind,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Position of the leftmost minimum of A[i..=j].
    Query {
        #[arg(long)]
        idx: PathBuf,
        /// The indexed array; required by the runs index.
        #[arg(long)]
        data: Option<PathBuf>,
        i: usize,
        j: usize,
        /// Also report the data comparisons made.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Subcommand)]
enum PermCommand {
    /// Encode a permutation of 1..=n.
    Encode {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Keep the LRM-tree for psv and rmq queries.
        #[arg(long)]
        with_index: bool,
    },
    /// π(i).
    Apply {
        #[arg(long)]
        code: PathBuf,
        i: usize,
    },
    /// π⁻¹(v).
    Inverse {
        #[arg(long)]
        code: PathBuf,
        v: usize,
    },
    /// Part and offset of position i.
    Map {
        #[arg(long)]
        code: PathBuf,
        i: usize,
    },
    /// Position of the p-th element of part s.
    Unmap {
        #[arg(long)]
        code: PathBuf,
        s: usize,
        p: usize,
    },
    /// Previous smaller value of position i (needs --with-index).
    Psv {
        #[arg(long)]
        code: PathBuf,
        i: usize,
    },
    /// Leftmost minimum of π[i..=j] (needs --with-index).
    Rmq {
        #[arg(long)]
        code: PathBuf,
        i: usize,
        j: usize,
    },
    /// Itemized size of a code.
    Size {
        #[arg(long)]
        code: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

/// Exit code for an error.
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Range(_) | Error::Contract(_) | Error::Structure(_) | Error::Capability(_) => 1,
        Error::Io(_) | Error::Parse { .. } | Error::Format(_) => 2,
    }
}

/// A permutation of `1..=n` with exactly `runs` ascending runs, deterministic in `seed`.
///
/// Run boundaries are drawn uniformly without replacement. The values are dealt
/// into the blocks at random and each block is sorted. While some boundary is not
/// a descent, the largest value of the left block is swapped with the smallest of
/// the right block; each swap moves a larger value to an earlier block, so this
/// terminates.
pub fn gen(n: usize, runs: usize, seed: u64) -> Result<Vec<i64>> {
    if runs == 0 || runs > n {
        return Err(Error::contract(format!("run count {runs} outside [1, {n}]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cuts: Vec<usize> = sample(&mut rng, n - 1, runs - 1)
        .into_iter()
        .map(|c| c + 1)
        .collect();
    cuts.sort_unstable();
    let mut values: Vec<i64> = (1..=n as i64).collect();
    values.shuffle(&mut rng);
    let mut blocks: Vec<VecDeque<i64>> = Vec::with_capacity(runs);
    let mut start = 0;
    for end in cuts.into_iter().chain(std::iter::once(n)) {
        let mut b = values[start..end].to_vec();
        b.sort_unstable();
        blocks.push(b.into());
        start = end;
    }
    loop {
        let mut clean = true;
        for k in 1..blocks.len() {
            let x = *blocks[k - 1].back().expect("nonempty block");
            let y = *blocks[k].front().expect("nonempty block");
            if x < y {
                clean = false;
                blocks[k - 1].pop_back();
                blocks[k - 1].push_back(y);
                blocks[k].pop_front();
                blocks[k].push_front(x);
            }
        }
        if clean {
            break;
        }
    }
    Ok(blocks.into_iter().flatten().collect())
}

fn read_array(path: &Path) -> Result<Vec<i64>> {
    let text = fs::read_to_string(path)?;
    Ok(text.parse::<InputArray>()?.values().to_vec())
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("plain data serializes")
}

fn line(out: &mut dyn Write, s: impl std::fmt::Display) -> Result<()> {
    writeln!(out, "{s}")?;
    Ok(())
}

/// Input descriptor of one bench point.
#[derive(Debug, Clone, Serialize)]
pub struct BenchInput {
    pub n: usize,
    pub seed: u64,
    pub requested_rho: usize,
    pub achieved_rho: usize,
}

/// Data comparisons over a batch of random queries.
#[derive(Debug, Clone, Serialize)]
pub struct QueryAccesses {
    pub queries: usize,
    pub plain: u64,
    pub strict_runs: u64,
    pub runs: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchCounters {
    pub cmp_build: u64,
    pub cmp_merge: u64,
    pub cmp_total: u64,
    pub internal_ops: u64,
    pub runs_baseline_cmp_total: u64,
    pub data_accesses: QueryAccesses,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchSizes {
    pub plain_index: RmqSize,
    pub strict_runs_index: RmqSize,
    pub runs_index: RmqSize,
    pub permcode: PermSize,
}

/// One point of the bench sweep.
#[derive(Debug, Clone, Serialize)]
pub struct BenchReport {
    pub input: BenchInput,
    pub measures: MeasureReport,
    pub counters: BenchCounters,
    pub sizes: BenchSizes,
}

#[derive(Debug, Serialize)]
struct BenchMeta {
    version: &'static str,
    unix_time: u64,
}

#[derive(Debug, Serialize)]
struct BenchOutput {
    #[serde(skip_serializing_if = "Option::is_none")]
    meta: Option<BenchMeta>,
    reports: Vec<BenchReport>,
}

/// Run counts `1, 2, 4, …` up to `n`, with `n` itself as the last point.
pub fn sweep(n: usize) -> Vec<usize> {
    let mut rhos: Vec<usize> = std::iter::successors(Some(1usize), |&r| r.checked_mul(2))
        .take_while(|&r| r <= n)
        .collect();
    if rhos.last() != Some(&n) {
        rhos.push(n);
    }
    rhos
}

/// Bench report for one generated input.
pub fn bench_point(n: usize, rho: usize, seed: u64, queries: usize) -> Result<BenchReport> {
    let values = gen(n, rho, seed)?;
    let m = measures(&values)?;
    let (_, stats): (_, SortStats) = sort_lrm(&values);
    let (_, baseline) = sort_runs_baseline(&values);
    let (plain, _) = PlainRmqIndex::build(&values)?;
    let (strict, _) = StrictRunsRmqIndex::build(&values)?;
    let (runs, _) = RunsRmqIndex::build(&values)?;
    let code = PermCode::encode(&values, false)?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut counter = Counter::new();
    for _ in 0..queries {
        let a = rng.gen_range(1..=n);
        let b = rng.gen_range(1..=n);
        let (i, j) = (a.min(b), a.max(b));
        let want = plain.query(i, j)?;
        let got = (strict.query(i, j)?, runs.query(&values, i, j, &mut counter)?);
        debug_assert_eq!(got, (want, want));
    }
    Ok(BenchReport {
        input: BenchInput {
            n,
            seed,
            requested_rho: rho,
            achieved_rho: run_count(&values, false),
        },
        measures: m,
        counters: BenchCounters {
            cmp_build: stats.cmp_build,
            cmp_merge: stats.cmp_merge,
            cmp_total: stats.cmp_total,
            internal_ops: stats.internal_ops,
            runs_baseline_cmp_total: baseline.cmp_total,
            data_accesses: QueryAccesses {
                queries,
                plain: 0,
                strict_runs: 0,
                runs: counter.get(),
            },
        },
        sizes: BenchSizes {
            plain_index: plain.size(),
            strict_runs_index: strict.size(),
            runs_index: runs.size(),
            permcode: code.size_report(),
        },
    })
}

fn run_command(cmd: Command, out: &mut dyn Write) -> Result<()> {
    match cmd {
        Command::Gen { n, runs, seed, out: path } => {
            let text = InputArray::new(gen(n, runs, seed)?).to_text();
            match path {
                Some(p) => fs::write(p, text)?,
                None => out.write_all(text.as_bytes())?,
            }
        }
        Command::Stats { input } => {
            line(out, to_json(&measures(&read_array(&input)?)?))?;
        }
        Command::Sort { algo, input, stats } => {
            let values = read_array(&input)?;
            let (sorted, s) = match algo {
                SortAlgo::Lrm => sort_lrm(&values),
                SortAlgo::Runs => sort_runs_baseline(&values),
            };
            out.write_all(InputArray::new(sorted).to_text().as_bytes())?;
            if let Some(p) = stats {
                fs::write(p, to_json(&s) + "\n")?;
            }
        }
        Command::Rmq(RmqCommand::Build { index, input, out: path }) => {
            let values = read_array(&input)?;
            let (bytes, size) = match index {
                IndexKind::Plain => {
                    let (idx, _) = PlainRmqIndex::build(&values)?;
                    (idx.to_bytes(), idx.size())
                }
                IndexKind::Sruns => {
                    let (idx, _) = StrictRunsRmqIndex::build(&values)?;
                    (idx.to_bytes(), idx.size())
                }
                IndexKind::Runs => {
                    let (idx, _) = RunsRmqIndex::build(&values)?;
                    (idx.to_bytes(), idx.size())
                }
            };
            fs::write(path, bytes)?;
            line(out, to_json(&size))?;
        }
        Command::Rmq(RmqCommand::Query { idx, data, i, j, json }) => {
            let bytes = fs::read(&idx)?;
            let mut counter = Counter::new();
            let pos = match peek_tag(&bytes)? {
                Tag::PlainRmqIndex => PlainRmqIndex::from_bytes(&bytes)?.query(i, j)?,
                Tag::StrictRunsRmqIndex => StrictRunsRmqIndex::from_bytes(&bytes)?.query(i, j)?,
                Tag::RunsRmqIndex => {
                    let index = RunsRmqIndex::from_bytes(&bytes)?;
                    let Some(data) = data else {
                        return Err(Error::Capability(
                            "the runs index reads the array: pass --data".into(),
                        ));
                    };
                    let values = read_array(&data)?;
                    index.query(&values, i, j, &mut counter)?
                }
                other => {
                    return Err(Error::format(format!("{other:?} is not an RMQ index")));
                }
            };
            if json {
                let v = serde_json::json!({ "position": pos, "data_comparisons": counter.get() });
                line(out, v)?;
            } else {
                line(out, pos)?;
            }
        }
        Command::Perm(cmd) => run_perm(cmd, out)?,
        Command::Bench { n, seed, queries, json, no_meta } => {
            if n == 0 {
                return Err(Error::contract("bench needs n >= 1"));
            }
            let reports = sweep(n)
                .into_iter()
                .map(|rho| bench_point(n, rho, seed, queries))
                .collect::<Result<Vec<_>>>()?;
            if json {
                let meta = (!no_meta).then(|| BenchMeta {
                    version: env!("CARGO_PKG_VERSION"),
                    unix_time: SystemTime::now()
                        .duration_since(UNIX_EPOCH)
                        .map_or(0, |d| d.as_secs()),
                });
                line(out, to_json(&BenchOutput { meta, reports }))?;
            } else {
                line(out, format_args!(
                    "{:>8} {:>8} {:>8} {:>8} {:>10} {:>10} {:>12} {:>12}",
                    "rho", "rho'", "h_lrm", "h_runs", "cmp_total", "baseline", "sruns_bits", "perm_bits"
                ))?;
                for r in &reports {
                    line(out, format_args!(
                        "{:>8} {:>8} {:>8.4} {:>8.4} {:>10} {:>10} {:>12} {:>12}",
                        r.input.achieved_rho,
                        r.measures.rho_strict,
                        r.measures.h_lrm,
                        r.measures.h_runs,
                        r.counters.cmp_total,
                        r.counters.runs_baseline_cmp_total,
                        r.sizes.strict_runs_index.total_bits,
                        r.sizes.permcode.total_bits
                    ))?;
                }
            }
        }
    }
    Ok(())
}

fn run_perm(cmd: PermCommand, out: &mut dyn Write) -> Result<()> {
    match cmd {
        PermCommand::Encode { input, out: path, with_index } => {
            let code = PermCode::encode(&read_array(&input)?, with_index)?;
            code.save(path)?;
            line(out, to_json(&code.size_report()))?;
        }
        PermCommand::Apply { code, i } => line(out, PermCode::load(code)?.apply(i)?)?,
        PermCommand::Inverse { code, v } => line(out, PermCode::load(code)?.inverse(v)?)?,
        PermCommand::Map { code, i } => {
            let (s, p) = PermCode::load(code)?.map(i)?;
            line(out, format_args!("{s} {p}"))?;
        }
        PermCommand::Unmap { code, s, p } => line(out, PermCode::load(code)?.unmap(s, p)?)?,
        PermCommand::Psv { code, i } => line(out, PermCode::load(code)?.psv_query(i)?)?,
        PermCommand::Rmq { code, i, j } => line(out, PermCode::load(code)?.rmq_query(i, j)?)?,
        PermCommand::Size { code, json } => {
            let s = PermCode::load(code)?.size_report();
            if json {
                line(out, to_json(&s))?;
            } else {
                let v = serde_json::to_value(s).expect("plain data serializes");
                for (k, x) in v.as_object().expect("struct serializes to an object") {
                    line(out, format_args!("{k:<22} {x}"))?;
                }
            }
        }
    }
    Ok(())
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match run_command(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

/// Entry point of the binary.
pub fn main() -> ExitCode {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let code = run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock());
    ExitCode::from(code)
}
