//! ORBGRAND decode loop.
//!
//! Patterns live in sorted-reliability space; pattern index `j` flips the
//! received position `pi[j]`, where `pi` lists positions by ascending |LLR|.
//! Every pattern tried, the all-zero one included, costs one query.

use std::borrow::Borrow;

use crate::channel::{hard_decision, reliability_permutation, SoftVector};
use crate::code::CodeChecker;
use crate::error::{GrandError, Result};
use crate::pattern::ErrorPattern;
use crate::schedule::Schedule;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeConfig {
    /// Abandonment budget Q.
    pub q_max: u64,
    pub h_max: Option<usize>,
    pub schedule: Schedule,
}

impl DecodeConfig {
    pub fn new(schedule: Schedule, q_max: u64, h_max: Option<usize>) -> Result<Self> {
        if q_max == 0 {
            return Err(GrandError::Config("q_max must be at least 1".into()));
        }
        Ok(Self {
            q_max,
            h_max,
            schedule,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecodeStatus {
    Decoded,
    Abandoned,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeOutcome {
    pub status: DecodeStatus,
    pub codeword: Option<Vec<u8>>,
    pub queries_used: u64,
    /// Hamming weight of the accepted pattern.
    pub pattern_hw: Option<usize>,
}

impl DecodeOutcome {
    pub fn is_decoded(&self) -> bool {
        self.status == DecodeStatus::Decoded
    }
}

/// Flip `hard` at `pi[j]` for every `j` in the support. Self-inverse.
pub fn apply_pattern(hard: &[u8], pi: &[usize], e: &ErrorPattern) -> Result<Vec<u8>> {
    let mut out = hard.to_vec();
    flip_in_place(&mut out, pi, e.support())?;
    Ok(out)
}

fn flip_in_place(bits: &mut [u8], pi: &[usize], support: &[usize]) -> Result<()> {
    for &j in support {
        let &pos = pi.get(j).ok_or(GrandError::IndexOutOfRange {
            index: j,
            n: pi.len(),
        })?;
        bits[pos] ^= 1;
    }
    Ok(())
}

/// Try patterns in schedule order until the checker accepts or `q_max`
/// queries are spent. Running out of patterns abandons.
pub fn decode<C, I>(
    soft: &SoftVector,
    checker: &C,
    patterns: I,
    q_max: u64,
    h_max: Option<usize>,
) -> Result<DecodeOutcome>
where
    C: CodeChecker + ?Sized,
    I: IntoIterator,
    I::Item: Borrow<ErrorPattern>,
{
    let n = checker.n();
    if soft.len() != n {
        return Err(GrandError::LengthMismatch {
            expected: n,
            actual: soft.len(),
        });
    }
    let mut hard = hard_decision(soft);
    let pi = reliability_permutation(soft);
    let mut queries = 0u64;

    let candidates = patterns
        .into_iter()
        .filter(|p| h_max.is_none_or(|h| p.borrow().hamming_weight() <= h));

    match checker.syndrome_columns() {
        Some(columns) => {
            let base = hard
                .iter()
                .zip(columns)
                .filter(|(&b, _)| b == 1)
                .fold(0u64, |acc, (_, &c)| acc ^ c);
            for p in candidates {
                if queries >= q_max {
                    break;
                }
                let support = p.borrow().support();
                queries += 1;
                let mut s = base;
                for &j in support {
                    let &pos = pi.get(j).ok_or(GrandError::IndexOutOfRange { index: j, n })?;
                    s ^= columns[pos];
                }
                if s == 0 {
                    flip_in_place(&mut hard, &pi, support)?;
                    debug_assert!(checker.is_codeword(&hard));
                    return Ok(decoded(hard, queries, support.len()));
                }
            }
        }
        None => {
            for p in candidates {
                if queries >= q_max {
                    break;
                }
                let support = p.borrow().support();
                queries += 1;
                flip_in_place(&mut hard, &pi, support)?;
                if checker.is_codeword(&hard) {
                    return Ok(decoded(hard, queries, support.len()));
                }
                flip_in_place(&mut hard, &pi, support)?;
            }
        }
    }
    Ok(DecodeOutcome {
        status: DecodeStatus::Abandoned,
        codeword: None,
        queries_used: queries,
        pattern_hw: None,
    })
}

fn decoded(codeword: Vec<u8>, queries: u64, hw: usize) -> DecodeOutcome {
    DecodeOutcome {
        status: DecodeStatus::Decoded,
        codeword: Some(codeword),
        queries_used: queries,
        pattern_hw: Some(hw),
    }
}

/// Decode with a fresh generator for `cfg.schedule`.
pub fn decode_with_schedule<C>(soft: &SoftVector, checker: &C, cfg: &DecodeConfig) -> Result<DecodeOutcome>
where
    C: CodeChecker + ?Sized,
{
    let generator = cfg.schedule.generator(checker.n(), cfg.h_max)?;
    decode(soft, checker, generator, cfg.q_max, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::Code;
    use crate::lwo::lwo_sequence;
    use std::sync::Mutex;

    struct Recorder<'a> {
        inner: &'a Code,
        seen: Mutex<Vec<Vec<u8>>>,
    }

    impl CodeChecker for Recorder<'_> {
        fn name(&self) -> &str {
            "recorder"
        }
        fn n(&self) -> usize {
            self.inner.n()
        }
        fn k(&self) -> usize {
            self.inner.k()
        }
        fn encode(&self, msg: &[u8]) -> Result<Vec<u8>> {
            self.inner.encode(msg)
        }
        fn is_codeword(&self, word: &[u8]) -> bool {
            self.seen.lock().unwrap().push(word.to_vec());
            self.inner.is_codeword(word)
        }
    }

    fn soft_from(bits: &[u8], mags: &[f64]) -> SoftVector {
        SoftVector(
            bits.iter()
                .zip(mags)
                .map(|(&b, &m)| if b == 1 { -m } else { m })
                .collect(),
        )
    }

    #[test]
    fn apply_pattern_basics() {
        let hard = vec![0, 1, 0, 1, 1];
        let id: Vec<usize> = (0..5).collect();
        let e = ErrorPattern::new(5, vec![0, 2]).unwrap();
        assert_eq!(apply_pattern(&hard, &id, &ErrorPattern::zero(5)).unwrap(), hard);
        assert_eq!(apply_pattern(&hard, &id, &e).unwrap(), vec![1, 1, 1, 1, 1]);
        let pi = vec![4, 3, 2, 1, 0];
        let once = apply_pattern(&hard, &pi, &e).unwrap();
        assert_eq!(once, vec![0, 1, 1, 1, 0]);
        assert_eq!(apply_pattern(&once, &pi, &e).unwrap(), hard);
        let far = ErrorPattern::new(9, vec![7]).unwrap();
        assert!(apply_pattern(&hard, &id, &far).is_err());
    }

    #[test]
    fn schedule_order_is_query_order() {
        let code = Code::bch127();
        let rec = Recorder {
            inner: &code,
            seen: Mutex::new(Vec::new()),
        };
        let mags: Vec<f64> = (0..127).map(|i| 1.0 + i as f64 * 0.1).collect();
        // Three errors among the most reliable positions: ORBGRAND will not
        // find them in 50 queries.
        let mut bits = vec![0u8; 127];
        bits[120] = 1;
        bits[121] = 1;
        bits[126] = 1;
        let soft = soft_from(&bits, &mags);
        let schedule = lwo_sequence(127, 50, None);
        let out = decode(&soft, &rec, &schedule, 50, None).unwrap();
        assert_eq!(out.status, DecodeStatus::Abandoned);
        assert_eq!(out.queries_used, 50);
        let seen = rec.seen.lock().unwrap();
        assert_eq!(seen.len(), 50);
        let pi = reliability_permutation(&soft);
        for (word, p) in seen.iter().zip(&schedule) {
            assert_eq!(*word, apply_pattern(&bits, &pi, p).unwrap());
        }
    }

    #[test]
    fn fast_and_slow_paths_agree() {
        use crate::channel::{block_rng, noise_variance, transmit};
        use rand::Rng;
        for code in [Code::bch127(), Code::polar128()] {
            let rec = Recorder {
                inner: &code,
                seen: Mutex::new(Vec::new()),
            };
            let schedule = lwo_sequence(code.n(), 300, None);
            for b in 0..200 {
                let mut rng = block_rng(5, 0, b);
                let msg: Vec<u8> = (0..code.k()).map(|_| rng.random_range(0..2)).collect();
                let cw = code.encode(&msg).unwrap();
                let soft = transmit(&cw, noise_variance(4.0, code.rate()), &mut rng);
                let fast = decode(&soft, &code, &schedule, 300, None).unwrap();
                let slow = decode(&soft, &rec, &schedule, 300, None).unwrap();
                assert_eq!(fast, slow);
                if let Some(w) = &fast.codeword {
                    assert!(code.is_codeword(w));
                }
            }
        }
    }

    #[test]
    fn micro_contracts() {
        let code = Code::bch127();
        let msg: Vec<u8> = (0..113).map(|i| (i * 7 % 3 == 0) as u8).collect();
        let cw = code.encode(&msg).unwrap();
        let mags: Vec<f64> = (0..127).map(|i| 2.0 + (i * 37 % 127) as f64 * 0.05).collect();

        for schedule in [Schedule::Lwo, Schedule::Ilwo, Schedule::IlwoApprox] {
            let cfg = DecodeConfig::new(schedule, 1000, None).unwrap();
            let clean = decode_with_schedule(&soft_from(&cw, &mags), &code, &cfg).unwrap();
            assert_eq!(clean.queries_used, 1);
            assert_eq!(clean.codeword.as_ref(), Some(&cw));
            assert_eq!(clean.pattern_hw, Some(0));

            let mut noisy_mags = mags.clone();
            noisy_mags[40] = 0.01;
            let mut rx = cw.clone();
            rx[40] ^= 1;
            let out = decode_with_schedule(&soft_from(&rx, &noisy_mags), &code, &cfg).unwrap();
            assert_eq!(out.status, DecodeStatus::Decoded);
            assert_eq!(out.queries_used, 2);
            assert_eq!(out.codeword.as_ref(), Some(&cw));

            let one = DecodeConfig::new(cfg.schedule.clone(), 1, None).unwrap();
            let out = decode_with_schedule(&soft_from(&rx, &noisy_mags), &code, &one).unwrap();
            assert_eq!(out.status, DecodeStatus::Abandoned);
            assert_eq!(out.queries_used, 1);
        }
        assert!(DecodeConfig::new(Schedule::Lwo, 0, None).is_err());
    }

    #[test]
    fn exhaustion_abandons() {
        let code = Code::bch127();
        let mut rx = vec![0u8; 127];
        rx[3] = 1;
        rx[90] = 1;
        rx[100] = 1;
        let soft = soft_from(&rx, &vec![1.0; 127]);
        let few = lwo_sequence(127, 5, None);
        let out = decode(&soft, &code, &few, 1000, None).unwrap();
        assert_eq!(out.status, DecodeStatus::Abandoned);
        assert_eq!(out.queries_used, 5);
        let bad = SoftVector(vec![1.0; 10]);
        assert!(decode(&bad, &code, &few, 10, None).is_err());
    }
}
