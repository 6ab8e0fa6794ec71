//! Frame-error simulation over a channel parameter sweep.

use std::fmt::Write as _;
use std::time::Instant;

use grs_chase::{transmit, ChannelModel, Decoder, Gf, GrsCode};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::{Config, ConfigError};

pub const CSV_HEADER: &str = "sweep_param,fer,ser,avg_candidates,avg_edges,avg_mults,wall_ms";

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PointStats {
    pub frames: u64,
    pub frame_errors: u64,
    pub symbol_errors: u64,
    pub candidates: u64,
    pub edges: u64,
    pub mults: u64,
}

#[derive(Clone, Copy, Debug)]
struct FrameOutcome {
    frame_error: bool,
    symbol_errors: u64,
    candidates: u64,
    edges: u64,
    mults: u64,
}

fn run_frame(code: &GrsCode, dec: &Decoder, model: ChannelModel, seed: u64, trial: u64) -> grs_chase::Result<FrameOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let q = code.field().q();
    let msg: Vec<Gf> = (0..code.k()).map(|_| Gf(rng.random_range(0..q as u16))).collect();
    let x = code.encode(&msg)?;
    let info = transmit(&x, q, model, &mut rng);
    let r = dec.decode(&info)?;
    // A decoding failure leaves the hard decisions in place.
    let out = r.codeword.clone().unwrap_or_else(|| info.hard());
    let symbol_errors = out.iter().zip(&x).filter(|(a, b)| a != b).count() as u64;
    Ok(FrameOutcome {
        frame_error: out != x,
        symbol_errors,
        candidates: r.candidates.len() as u64,
        edges: r.stats.edges,
        mults: r.stats.ops.mults,
    })
}

/// Runs all trials of one sweep point on the current rayon pool. Frames are
/// merged in trial order, so the totals do not depend on the pool size.
pub fn run_point(code: &GrsCode, dec: &Decoder, model: ChannelModel, seed: u64, trials: usize) -> grs_chase::Result<PointStats> {
    let frames: Vec<FrameOutcome> = (0..trials as u64)
        .into_par_iter()
        .map(|i| run_frame(code, dec, model, seed, i))
        .collect::<grs_chase::Result<_>>()?;
    let mut s = PointStats::default();
    for f in frames {
        s.frames += 1;
        s.frame_errors += f.frame_error as u64;
        s.symbol_errors += f.symbol_errors;
        s.candidates += f.candidates;
        s.edges += f.edges;
        s.mults += f.mults;
    }
    Ok(s)
}

#[derive(Debug)]
pub enum SimError {
    Config(ConfigError),
    Decode(grs_chase::Error),
}

impl std::fmt::Display for SimError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SimError::Config(e) => write!(f, "{e}"),
            SimError::Decode(e) => write!(f, "decoding: {e}"),
        }
    }
}

impl std::error::Error for SimError {}

/// Full CSV report. With zero trials only the config line and header are
/// written.
pub fn run_sim(cfg: &Config, jobs: Option<usize>) -> Result<String, SimError> {
    let (code, chase) = cfg.validate().map_err(SimError::Config)?;
    let points = cfg.channel_points().map_err(SimError::Config)?;
    let dec = Decoder::new(code.clone(), chase).map_err(|e| SimError::Config(ConfigError(format!("chase: {e}"))))?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| SimError::Config(ConfigError(format!("jobs: {e}"))))?;
    let mut out = String::new();
    writeln!(out, "# config: {}", cfg.canonical()).unwrap();
    writeln!(out, "{CSV_HEADER}").unwrap();
    if cfg.sim.trials == 0 {
        return Ok(out);
    }
    let n = code.n() as f64;
    for (idx, (param, model)) in points.into_iter().enumerate() {
        let start = Instant::now();
        let seed = cfg.sim.seed.wrapping_add(idx as u64);
        let s = pool
            .install(|| run_point(&code, &dec, model, seed, cfg.sim.trials))
            .map_err(SimError::Decode)?;
        let ms = start.elapsed().as_secs_f64() * 1e3;
        let f = s.frames as f64;
        writeln!(
            out,
            "{param},{:.6e},{:.6e},{:.4},{:.4},{:.2},{ms:.1}",
            s.frame_errors as f64 / f,
            s.symbol_errors as f64 / (f * n),
            s.candidates as f64 / f,
            s.edges as f64 / f,
            s.mults as f64 / f,
        )
        .unwrap();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> Config {
        let mut c = Config::default();
        c.channel.sweep = vec![0.05, 0.12];
        c.sim.trials = 40;
        c.sim.seed = 9;
        c
    }

    fn strip_wall(csv: &str) -> Vec<String> {
        csv.lines().map(|l| l.rsplit_once(',').map_or(l, |(a, _)| a).to_string()).collect()
    }

    #[test]
    fn header_and_rows() {
        let csv = run_sim(&small(), Some(2)).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert!(lines[0].starts_with("# config: {"));
        assert_eq!(lines[1], CSV_HEADER);
        assert_eq!(lines.len(), 4);
        assert!(lines[2].starts_with("0.05,"));
    }

    #[test]
    fn deterministic_across_job_counts() {
        let a = run_sim(&small(), Some(1)).unwrap();
        let b = run_sim(&small(), Some(3)).unwrap();
        assert_eq!(strip_wall(&a), strip_wall(&b));
    }

    #[test]
    fn zero_trials_gives_header_only() {
        let mut c = small();
        c.sim.trials = 0;
        assert_eq!(run_sim(&c, None).unwrap().lines().count(), 2);
    }

    #[test]
    fn clean_channel_has_no_errors() {
        let mut c = small();
        c.channel.sweep = vec![0.0];
        let (code, chase) = c.validate().unwrap();
        let dec = Decoder::new(code.clone(), chase).unwrap();
        let s = run_point(&code, &dec, ChannelModel::Symmetric { p: 0.0 }, 1, 20).unwrap();
        assert_eq!((s.frames, s.frame_errors, s.symbol_errors, s.edges), (20, 0, 0, 0));
    }
}
