use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use grs_chase::{Decoder, KernelKind, ReliabilityInfo};
use grs_chase_cli::bench::{bench_rows, render};
use grs_chase_cli::config::{ChannelKind, ChaseArgs, CodeArgs, Config};
use grs_chase_cli::decode::{decode_report, parse_alternative, parse_reliabilities, parse_symbols};
use grs_chase_cli::sim::{run_sim, SimError};

const EXIT_DECODE_FAILURE: u8 = 1;
const EXIT_CONFIG: u8 = 2;

#[derive(Parser)]
#[command(name = "grs-chase", version, about = "Chase decoding of GRS codes")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Simulate frame and symbol error rates over a channel sweep; writes CSV.
    Sim {
        #[command(flatten)]
        code: CodeArgs,
        #[command(flatten)]
        chase: ChaseArgs,
        #[arg(long, value_enum)]
        channel: Option<ChannelKind>,
        /// Comma separated channel parameters.
        #[arg(long, value_delimiter = ',')]
        sweep: Option<Vec<f64>>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads; defaults to the number of CPUs.
        #[arg(long)]
        jobs: Option<usize>,
        /// Write the CSV here instead of stdout.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Decode one received word.
    Decode {
        #[command(flatten)]
        code: CodeArgs,
        #[command(flatten)]
        chase: ChaseArgs,
        /// Received symbols, decimal or 0x hex, separated by commas or spaces.
        #[arg(long)]
        received: String,
        /// Probability of each received symbol.
        #[arg(long)]
        reliability: String,
        /// Ranked alternatives for a coordinate, POS=SYM/SYM. Repeatable.
        #[arg(long = "alt")]
        alternatives: Vec<String>,
    },
    /// Measure multiplications per edge against the closed-form bounds.
    Bench {
        #[command(flatten)]
        code: CodeArgs,
        /// Kernels to measure (A2, B, C).
        #[arg(long, value_delimiter = ',', default_value = "A2,B,C")]
        kernel: Vec<String>,
        #[arg(long, default_value_t = 3)]
        r_max: usize,
        #[arg(long, default_value_t = 5)]
        eta: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

fn main() -> ExitCode {
    match Cli::parse().cmd {
        Cmd::Sim {
            code,
            chase,
            channel,
            sweep,
            trials,
            seed,
            jobs,
            output,
        } => {
            let mut cfg = match code.base() {
                Ok(c) => c,
                Err(e) => return fail(EXIT_CONFIG, e),
            };
            code.apply(&mut cfg);
            chase.apply(&mut cfg);
            if let Some(k) = channel {
                cfg.channel.kind = k;
            }
            if let Some(s) = sweep {
                cfg.channel.sweep = s;
            }
            if let Some(t) = trials {
                cfg.sim.trials = t;
            }
            if let Some(s) = seed {
                cfg.sim.seed = s;
            }
            if jobs == Some(0) {
                return fail(EXIT_CONFIG, "jobs: must be at least 1");
            }
            let csv = match run_sim(&cfg, jobs) {
                Ok(csv) => csv,
                Err(e @ SimError::Config(_)) => return fail(EXIT_CONFIG, e),
                Err(e) => return fail(EXIT_CONFIG, e),
            };
            match output {
                Some(p) => {
                    if let Err(e) = std::fs::write(&p, csv) {
                        return fail(EXIT_CONFIG, format!("{}: {e}", p.display()));
                    }
                }
                None => print!("{csv}"),
            }
            ExitCode::SUCCESS
        }
        Cmd::Decode {
            code,
            chase,
            received,
            reliability,
            alternatives,
        } => {
            let mut cfg = match code.base() {
                Ok(c) => c,
                Err(e) => return fail(EXIT_CONFIG, e),
            };
            code.apply(&mut cfg);
            chase.apply(&mut cfg);
            match decode_cmd(&cfg, &received, &reliability, &alternatives) {
                Ok((report, ok)) => {
                    print!("{report}");
                    if ok {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(EXIT_DECODE_FAILURE)
                    }
                }
                Err(e) => fail(EXIT_CONFIG, e),
            }
        }
        Cmd::Bench {
            code,
            kernel,
            r_max,
            eta,
            trials,
            seed,
        } => {
            let mut cfg = match code.base() {
                Ok(c) => c,
                Err(e) => return fail(EXIT_CONFIG, e),
            };
            code.apply(&mut cfg);
            let c = match cfg.build_code() {
                Ok(c) => c,
                Err(e) => return fail(EXIT_CONFIG, e),
            };
            let mut kinds = Vec::new();
            for k in &kernel {
                match k.parse::<KernelKind>() {
                    Ok(KernelKind::A) => return fail(EXIT_CONFIG, "kernel: A has no per-edge bound; use A2, B or C"),
                    Ok(k) => kinds.push(k),
                    Err(e) => return fail(EXIT_CONFIG, format!("kernel: {e}")),
                }
            }
            match bench_rows(&c, &kinds, r_max, eta, trials, seed) {
                Ok(rows) => {
                    print!("{}", render(&c, &rows));
                    ExitCode::SUCCESS
                }
                Err(e) => fail(EXIT_CONFIG, e),
            }
        }
    }
}

fn decode_cmd(cfg: &Config, received: &str, reliability: &str, alts: &[String]) -> Result<(String, bool), String> {
    let (code, chase) = cfg.validate().map_err(|e| e.to_string())?;
    let q = code.field().q();
    let y = parse_symbols(received, q)?;
    if y.len() != code.n() {
        return Err(format!("received: expected {} symbols, got {}", code.n(), y.len()));
    }
    let probs = parse_reliabilities(reliability)?;
    let mut alternatives = Vec::new();
    if !alts.is_empty() {
        alternatives = vec![Vec::new(); code.n()];
        for a in alts {
            let (pos, vals) = parse_alternative(a, q)?;
            if pos >= code.n() {
                return Err(format!("alternative {a:?}: position out of range"));
            }
            alternatives[pos] = vals;
        }
    }
    let info = ReliabilityInfo::from_scores(q, &y, &probs, &alternatives).map_err(|e| format!("reliability: {e}"))?;
    let dec = Decoder::new(code, chase).map_err(|e| e.to_string())?;
    let (report, r) = decode_report(&dec, &info).map_err(|e| e.to_string())?;
    Ok((report, r.success()))
}
