use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use sds_core::catalog::{
    feasible_params, parse_params, read_witnesses, registry, render_tables, write_witnesses, ParamStatus,
    WitnessRecord, WitnessSource,
};
use sds_core::compress::{compress, CompressionSpec};
use sds_core::enumerate::ClassStream;
use sds_core::search::{decide_seeded, decide_two_block, SearchOptions, Status, Strategy};
use sds_core::seqcore::{associated_sequence, complementary_constants};
use sds_core::{Content, EquivMode, SdsError};

const EXIT_NOT_EXISTS: u8 = 1;
const EXIT_UNKNOWN: u8 = 2;
const EXIT_INPUT: u8 = 3;

#[derive(Parser)]
#[command(name = "sds", version, about = "Supplementary difference sets over Z_v")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List normalized two-block parameter sets (v;r,s;lambda).
    Params {
        #[arg(long)]
        vmax: usize,
        /// exists, not-exists, open or settled
        #[arg(long)]
        status: Option<ParamStatus>,
        /// Only the fifteen previously undecided sets.
        #[arg(long)]
        listed: bool,
    },
    /// Verify every witness in a JSON-lines file.
    Verify { file: PathBuf },
    /// Print the m-compressions of every witness in a file.
    Compress {
        file: PathBuf,
        #[arg(long)]
        m: usize,
    },
    /// Enumerate orbit representatives of a fixed content.
    Enumerate {
        #[arg(long)]
        length: usize,
        /// value:count pairs, e.g. -2:3,0:6,2:14
        #[arg(long, allow_hyphen_values = true)]
        content: Content,
        #[arg(long, default_value = "necklace")]
        mode: EquivMode,
        #[arg(long)]
        count_only: bool,
    },
    /// Decide existence of a two-block SDS.
    Search {
        /// "v;r,s;lambda"
        #[arg(long)]
        params: String,
        /// direct, compress2 or compress3
        #[arg(long, default_value = "compress2")]
        strategy: Strategy,
        #[arg(long)]
        jobs: Option<usize>,
        /// Write witnesses here and the JSON report to FILE.report.json.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Seed candidates from known witnesses (a file, or "registry")
        /// instead of enumerating; can confirm existence only.
        #[arg(long)]
        seeds: Option<String>,
    },
    /// Print the shipped witnesses.
    Registry {
        #[arg(long)]
        verify: bool,
    },
}

/// Maps library errors to exit codes: guards are 2, everything else 3.
fn fail(err: SdsError) -> ExitCode {
    eprintln!("error: {err}");
    match err {
        SdsError::TooLarge { .. } => ExitCode::from(EXIT_UNKNOWN),
        _ => ExitCode::from(EXIT_INPUT),
    }
}

fn load(path: &Path) -> Result<Vec<WitnessRecord>, SdsError> {
    let file = File::open(path)?;
    read_witnesses(BufReader::new(file), WitnessSource::Search)
}

fn run(cli: Cli) -> Result<ExitCode, SdsError> {
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    match cli.command {
        Command::Params { vmax, status, listed } => {
            for rec in feasible_params(vmax) {
                if status.is_some_and(|s| s != rec.status) || (listed && !rec.listed) {
                    continue;
                }
                writeln!(
                    out,
                    "{}\tn={}\t{}\t{}",
                    rec.params,
                    rec.params.n(),
                    rec.status,
                    rec.provenance
                )?;
            }
        }
        Command::Verify { file } => {
            let records = load(&file)?;
            let mut failed = 0;
            for (i, rec) in records.iter().enumerate() {
                let verdict = if rec.verified { "ok" } else { "FAIL" };
                writeln!(out, "{}\t{}\t{verdict}", i + 1, rec.params)?;
                failed += usize::from(!rec.verified);
            }
            writeln!(out, "{} of {} verified", records.len() - failed, records.len())?;
            if failed > 0 {
                out.flush()?;
                return Ok(ExitCode::from(EXIT_NOT_EXISTS));
            }
        }
        Command::Compress { file, m } => {
            for rec in load(&file)? {
                let spec = CompressionSpec::from_factor(rec.params.v(), m)?;
                let seqs = rec
                    .blocks
                    .iter()
                    .map(|b| compress(&associated_sequence(b), spec.d))
                    .collect::<Result<Vec<_>, _>>()?;
                let constants = complementary_constants(&seqs);
                let line = json!({
                    "v": rec.params.v(),
                    "m": m,
                    "d": spec.d,
                    "sequences": seqs.iter().map(|s| s.values()).collect::<Vec<_>>(),
                    "alpha0": constants.map(|c| c.0),
                    "alpha": constants.map(|c| c.1),
                });
                writeln!(out, "{line}")?;
            }
        }
        Command::Enumerate {
            length,
            content,
            mode,
            count_only,
        } => {
            if content.len() != length {
                return Err(SdsError::LengthMismatch {
                    expected: length,
                    found: content.len(),
                });
            }
            let mut stream = ClassStream::new(&content, mode);
            if count_only {
                writeln!(out, "{}", stream.count_remaining())?;
            } else {
                for seq in stream {
                    let cells: Vec<String> = seq.values().iter().map(i32::to_string).collect();
                    writeln!(out, "{}", cells.join(","))?;
                }
            }
        }
        Command::Search {
            params,
            strategy,
            jobs,
            out: target,
            seeds,
        } => {
            let params = parse_params(&params)?;
            let mut opts = SearchOptions::default();
            if let Some(jobs) = jobs {
                opts.jobs = jobs;
            }
            let result = match seeds {
                None => decide_two_block(&params, strategy, &opts)?,
                Some(source) => {
                    let Strategy::Compress(m) = strategy else {
                        return Err(SdsError::Unsupported("seeded search needs a compress strategy".into()));
                    };
                    let known = if source == "registry" {
                        registry()?
                    } else {
                        load(Path::new(&source))?
                    };
                    let seeds: Vec<_> = known
                        .into_iter()
                        .filter(|r| r.params == params)
                        .map(|r| r.blocks)
                        .collect();
                    decide_seeded(&params, m, &seeds, &opts)?
                }
            };
            write!(out, "{}", render_tables(&result.report))?;
            writeln!(out, "status: {}", result.status)?;
            writeln!(out, "witness classes: {}", result.witnesses.len())?;
            if let Some(path) = target {
                let records = result
                    .witnesses
                    .iter()
                    .map(|w| WitnessRecord::new(params.clone(), w.clone(), WitnessSource::Search))
                    .collect::<Result<Vec<_>, _>>()?;
                write_witnesses(BufWriter::new(File::create(&path)?), &records)?;
                let mut sidecar = path.into_os_string();
                sidecar.push(".report.json");
                let file = BufWriter::new(File::create(&sidecar)?);
                serde_json::to_writer_pretty(file, &result)?;
            }
            out.flush()?;
            return Ok(match result.status {
                Status::Exists => ExitCode::SUCCESS,
                Status::NotExists => ExitCode::from(EXIT_NOT_EXISTS),
                Status::Unknown => ExitCode::from(EXIT_UNKNOWN),
            });
        }
        Command::Registry { verify } => {
            let records = registry()?;
            if verify {
                for (i, rec) in records.iter().enumerate() {
                    writeln!(out, "{}\t{}\tok", i + 1, rec.params)?;
                }
                writeln!(out, "{} of {} verified", records.len(), records.len())?;
            } else {
                write_witnesses(&mut out, &records)?;
            }
        }
    }
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_INPUT)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    run(cli).unwrap_or_else(fail)
}
