//! Monte Carlo BLER estimation and schedule tooling.
//!
//! Blocks are simulated in fixed-size batches on a worker pool and then
//! reduced in block-index order, so results depend on the seed but not on
//! the number of workers. Block `b` draws its message and noise from its own
//! stream; with paired noise every schedule sees the same draws.

use std::collections::HashMap;
use std::io::Write;
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;

use crate::channel::{block_rng, hard_decision, noise_variance, reliability_permutation, transmit};
use crate::code::{Code, CodeChecker};
use crate::decoder::decode;
use crate::error::{GrandError, Result};
use crate::pattern::{upo_leq, write_patterns, ErrorPattern};
use crate::schedule::Schedule;

pub const CSV_HEADER: &str =
    "code,schedule,ebn0_db,qmax,hmax,blocks,block_errors,undetected,bler,mean_queries,max_queries,seed";

const BATCH: u64 = 1024;

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub schedule: Schedule,
    pub ebn0_list: Vec<f64>,
    pub q_max: u64,
    pub h_max: Option<usize>,
    pub min_block_errors: u64,
    pub max_blocks: u64,
    pub seed: u64,
    pub workers: usize,
    pub paired_noise: bool,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(GrandError::Config(msg.into()));
        if self.min_block_errors == 0 {
            return bad("min_block_errors must be at least 1");
        }
        if self.max_blocks == 0 {
            return bad("max_blocks must be at least 1");
        }
        if self.q_max == 0 {
            return bad("q_max must be at least 1");
        }
        if self.workers == 0 {
            return bad("workers must be at least 1");
        }
        if self.ebn0_list.is_empty() {
            return bad("no Eb/N0 points");
        }
        if self.ebn0_list.iter().any(|x| !x.is_finite()) {
            return bad("Eb/N0 values must be finite");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    MinErrors,
    MaxBlocks,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub ebn0_db: f64,
    pub blocks: u64,
    /// Wrong decisions plus abandonments.
    pub block_errors: u64,
    /// Decoded to a valid codeword other than the one sent.
    pub undetected_errors: u64,
    pub bler: f64,
    pub mean_queries: f64,
    pub max_queries: u64,
    pub wall_seconds: f64,
    pub stop: StopReason,
}

/// A schedule truncated to its query budget, ready to be shared by workers.
#[derive(Debug, Clone)]
pub struct DecoderSetup {
    pub schedule: Schedule,
    pub q_max: u64,
    pub h_max: Option<usize>,
    patterns: Vec<ErrorPattern>,
}

impl DecoderSetup {
    pub fn new(n: usize, schedule: Schedule, q_max: u64, h_max: Option<usize>) -> Result<Self> {
        if q_max == 0 {
            return Err(GrandError::Config("q_max must be at least 1".into()));
        }
        let patterns = schedule.materialize(n, q_max as usize, h_max)?;
        Ok(Self {
            schedule,
            q_max,
            h_max,
            patterns,
        })
    }

    pub fn patterns(&self) -> &[ErrorPattern] {
        &self.patterns
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct BlockOutcome {
    error: bool,
    undetected: bool,
    queries: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DecoderTally {
    pub block_errors: u64,
    pub undetected: u64,
    pub total_queries: u64,
    pub max_queries: u64,
}

/// Outcome of decoding the same blocks with several schedules.
#[derive(Debug, Clone, PartialEq)]
pub struct PairedReport {
    pub ebn0_db: f64,
    pub blocks: u64,
    pub tallies: Vec<DecoderTally>,
    /// `discordant[i][j]`: blocks where decoder `i` failed and `j` succeeded.
    pub discordant: Vec<Vec<u64>>,
    pub stop: StopReason,
}

impl PairedReport {
    pub fn bler(&self, i: usize) -> f64 {
        self.tallies[i].block_errors as f64 / self.blocks as f64
    }
}

#[derive(Debug, Clone, Copy)]
pub struct StopRule {
    pub min_block_errors: u64,
    pub max_blocks: u64,
    /// Decoder whose errors drive `min_block_errors`.
    pub reference: usize,
}

fn mix64(mut x: u64) -> u64 {
    // splitmix64 finalizer
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Stream for one Eb/N0 point; an unpaired run also mixes in a schedule tag.
pub fn noise_stream_id(ebn0_db: f64, tag: Option<&str>) -> u64 {
    let base = mix64(ebn0_db.to_bits());
    match tag {
        None => base,
        Some(t) => {
            let h = t
                .bytes()
                .fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3));
            mix64(base ^ h)
        }
    }
}

fn simulate_block(
    code: &Code,
    decoders: &[DecoderSetup],
    sigma2: f64,
    seed: u64,
    stream: u64,
    block: u64,
) -> Result<Vec<BlockOutcome>> {
    let mut rng = block_rng(seed, stream, block);
    let msg: Vec<u8> = (0..code.k()).map(|_| rng.random_range(0..2u8)).collect();
    let sent = code.encode(&msg)?;
    let soft = transmit(&sent, sigma2, &mut rng);
    decoders
        .iter()
        .map(|d| {
            let out = decode(&soft, code, d.patterns(), d.q_max, None)?;
            let wrong = out.codeword.as_ref().is_some_and(|c| *c != sent);
            Ok(BlockOutcome {
                error: !out.is_decoded() || wrong,
                undetected: wrong,
                queries: out.queries_used,
            })
        })
        .collect()
}

fn build_pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| GrandError::Config(format!("thread pool: {e}")))
}

/// Decode identical blocks with every decoder until the stop rule fires.
#[allow(clippy::too_many_arguments)]
fn run_point(
    code: &Code,
    ebn0_db: f64,
    decoders: &[DecoderSetup],
    stop: StopRule,
    seed: u64,
    stream: u64,
    pool: &rayon::ThreadPool,
) -> Result<PairedReport> {
    let sigma2 = noise_variance(ebn0_db, code.rate());
    let d = decoders.len();
    let mut tallies = vec![DecoderTally::default(); d];
    let mut discordant = vec![vec![0u64; d]; d];
    let mut blocks = 0u64;

    loop {
        let end = (blocks + BATCH).min(stop.max_blocks);
        let batch: Vec<Vec<BlockOutcome>> = pool.install(|| {
            (blocks..end)
                .into_par_iter()
                .map(|b| simulate_block(code, decoders, sigma2, seed, stream, b))
                .collect::<Result<_>>()
        })?;
        for outcomes in batch {
            blocks += 1;
            for (t, o) in tallies.iter_mut().zip(&outcomes) {
                t.block_errors += o.error as u64;
                t.undetected += o.undetected as u64;
                t.total_queries += o.queries;
                t.max_queries = t.max_queries.max(o.queries);
            }
            for i in 0..d {
                for j in 0..d {
                    if outcomes[i].error && !outcomes[j].error {
                        discordant[i][j] += 1;
                    }
                }
            }
            let reason = if tallies[stop.reference].block_errors >= stop.min_block_errors {
                Some(StopReason::MinErrors)
            } else if blocks >= stop.max_blocks {
                Some(StopReason::MaxBlocks)
            } else {
                None
            };
            if let Some(stop) = reason {
                return Ok(PairedReport {
                    ebn0_db,
                    blocks,
                    tallies,
                    discordant,
                    stop,
                });
            }
        }
    }
}

/// Paired comparison of several decoders at one Eb/N0.
pub fn run_paired(
    code: &Code,
    ebn0_db: f64,
    decoders: &[DecoderSetup],
    stop: StopRule,
    seed: u64,
    workers: usize,
) -> Result<PairedReport> {
    if decoders.is_empty() || stop.reference >= decoders.len() {
        return Err(GrandError::Config("reference decoder out of range".into()));
    }
    if stop.min_block_errors == 0 || stop.max_blocks == 0 || workers == 0 {
        return Err(GrandError::Config("stop rule and workers must be positive".into()));
    }
    let pool = build_pool(workers)?;
    run_point(code, ebn0_db, decoders, stop, seed, noise_stream_id(ebn0_db, None), &pool)
}

/// BLER curve for one schedule.
pub fn run_bler(code: &Code, cfg: &SimConfig) -> Result<Vec<SimResult>> {
    cfg.validate()?;
    let pool = build_pool(cfg.workers)?;
    let setup = DecoderSetup::new(code.n(), cfg.schedule.clone(), cfg.q_max, cfg.h_max)?;
    let stop = StopRule {
        min_block_errors: cfg.min_block_errors,
        max_blocks: cfg.max_blocks,
        reference: 0,
    };
    let tag = (!cfg.paired_noise).then(|| cfg.schedule.label());
    cfg.ebn0_list
        .iter()
        .map(|&ebn0| {
            let start = Instant::now();
            let stream = noise_stream_id(ebn0, tag);
            let report = run_point(code, ebn0, std::slice::from_ref(&setup), stop, cfg.seed, stream, &pool)?;
            let t = &report.tallies[0];
            Ok(SimResult {
                ebn0_db: ebn0,
                blocks: report.blocks,
                block_errors: t.block_errors,
                undetected_errors: t.undetected,
                bler: t.block_errors as f64 / report.blocks as f64,
                mean_queries: t.total_queries as f64 / report.blocks as f64,
                max_queries: t.max_queries,
                wall_seconds: start.elapsed().as_secs_f64(),
                stop: report.stop,
            })
        })
        .collect()
}

/// `start:step:stop` (inclusive), a comma list, or a single value.
pub fn parse_ebn0_list(text: &str) -> Result<Vec<f64>> {
    let num = |s: &str| -> Result<f64> {
        s.trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| GrandError::Config(format!("bad Eb/N0 value {s:?}")))
    };
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [start, step, stop] => {
            let (start, step, stop) = (num(start)?, num(step)?, num(stop)?);
            if step <= 0.0 || stop < start {
                return Err(GrandError::Config(format!("bad Eb/N0 range {text:?}")));
            }
            let count = ((stop - start) / step + 1e-9).floor() as u64 + 1;
            Ok((0..count)
                .map(|i| ((start + i as f64 * step) * 1e9).round() / 1e9)
                .collect())
        }
        [list] => list.split(',').map(num).collect(),
        _ => Err(GrandError::Config(format!("bad Eb/N0 list {text:?}"))),
    }
}

fn fmt_hmax(h_max: Option<usize>) -> String {
    h_max.map_or_else(|| "none".to_string(), |h| h.to_string())
}

pub fn csv_row(code: &str, cfg: &SimConfig, r: &SimResult) -> String {
    format!(
        "{code},{},{:.2},{},{},{},{},{},{:.6e},{:.4},{},{}",
        cfg.schedule.label(),
        r.ebn0_db,
        cfg.q_max,
        fmt_hmax(cfg.h_max),
        r.blocks,
        r.block_errors,
        r.undetected_errors,
        r.bler,
        r.mean_queries,
        r.max_queries,
        cfg.seed
    )
}

/// Most frequent true error patterns in sorted-reliability space.
///
/// The all-zero pattern always comes first; the rest follow by descending
/// count, then ascending iLW, then lexicographic support.
pub fn estimate_empirical_schedule(
    code: &Code,
    ebn0_db: f64,
    num_blocks: u64,
    q_out: usize,
    seed: u64,
    workers: usize,
) -> Result<Vec<ErrorPattern>> {
    if num_blocks == 0 {
        return Err(GrandError::Config("num_blocks must be at least 1".into()));
    }
    let pool = build_pool(workers.max(1))?;
    let n = code.n();
    let sigma2 = noise_variance(ebn0_db, code.rate());
    let stream = noise_stream_id(ebn0_db, Some("empirical"));

    let counts: HashMap<Vec<usize>, u64> = pool.install(|| {
        (0..num_blocks)
            .into_par_iter()
            .map(|b| -> Result<Vec<usize>> {
                let mut rng = block_rng(seed, stream, b);
                let msg: Vec<u8> = (0..code.k()).map(|_| rng.random_range(0..2u8)).collect();
                let sent = code.encode(&msg)?;
                let soft = transmit(&sent, sigma2, &mut rng);
                let hard = hard_decision(&soft);
                let pi = reliability_permutation(&soft);
                Ok((0..n).filter(|&j| hard[pi[j]] != sent[pi[j]]).collect())
            })
            .try_fold(HashMap::new, |mut acc: HashMap<Vec<usize>, u64>, s| {
                *acc.entry(s?).or_default() += 1;
                Ok::<_, GrandError>(acc)
            })
            .try_reduce(HashMap::new, |mut a, b| {
                for (k, v) in b {
                    *a.entry(k).or_default() += v;
                }
                Ok(a)
            })
    })?;

    let mut ranked: Vec<(ErrorPattern, u64)> = counts
        .into_iter()
        .filter(|(s, _)| !s.is_empty())
        .map(|(s, c)| (ErrorPattern::from_sorted_unchecked(n, s), c))
        .collect();
    ranked.sort_by(|(a, ca), (b, cb)| cb.cmp(ca).then_with(|| crate::pattern::ilwo_cmp(a, b)));
    Ok(std::iter::once(ErrorPattern::zero(n))
        .chain(ranked.into_iter().map(|(p, _)| p))
        .take(q_out.max(1))
        .collect())
}

pub fn dump_patterns<W: Write>(
    writer: W,
    schedule: &Schedule,
    n: usize,
    q: usize,
    h_max: Option<usize>,
) -> Result<()> {
    let patterns = schedule.materialize(n, q, h_max)?;
    write_patterns(writer, &patterns)
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ScheduleReport {
    /// (first line, repeated line), 1-based.
    pub duplicates: Vec<(usize, usize)>,
    /// (earlier line, later line) where the later pattern strictly precedes
    /// the earlier one in the UPO.
    pub violations: Vec<(usize, usize)>,
}

impl ScheduleReport {
    pub fn is_compliant(&self) -> bool {
        self.duplicates.is_empty() && self.violations.is_empty()
    }
}

pub fn verify_schedule(patterns: &[ErrorPattern]) -> ScheduleReport {
    let mut report = ScheduleReport::default();
    let mut first_seen: HashMap<&[usize], usize> = HashMap::new();
    for (i, p) in patterns.iter().enumerate() {
        if let Some(&first) = first_seen.get(p.support()) {
            report.duplicates.push((first + 1, i + 1));
        } else {
            first_seen.insert(p.support(), i);
        }
    }
    // A strict UPO predecessor has strictly smaller LW and iLW.
    let weights: Vec<(u64, u64)> = patterns
        .iter()
        .map(|p| (p.logistic_weight(), p.improved_logistic_weight()))
        .collect();
    for (i, early) in patterns.iter().enumerate() {
        let (lw_e, ilw_e) = weights[i];
        for (j, late) in patterns.iter().enumerate().skip(i + 1) {
            let (lw_l, ilw_l) = weights[j];
            if lw_l < lw_e && ilw_l < ilw_e && upo_leq(late.support(), early.support()) {
                report.violations.push((i + 1, j + 1));
            }
        }
    }
    report
}
