//! Error patterns in sorted-reliability index space.
//!
//! Index 0 is the least reliable bit after sorting. A pattern is stored as its
//! support (the flipped positions) in ascending order; experiments never go
//! beyond a handful of flipped bits, so a dense bit vector would be wasteful.
//!
//! Text format, shared by every dump and fixture file: one pattern per line,
//! ascending indices separated by single spaces, the empty line standing for
//! the all-zero pattern.

use std::cmp::Ordering;
use std::fmt;
use std::io::{BufRead, Write};

use crate::error::{GrandError, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ErrorPattern {
    support: Vec<usize>,
    n: usize,
}

impl ErrorPattern {
    pub fn new(n: usize, support: Vec<usize>) -> Result<Self> {
        if support.windows(2).any(|w| w[0] >= w[1]) {
            return Err(GrandError::UnsortedSupport);
        }
        if let Some(&last) = support.last() {
            if last >= n {
                return Err(GrandError::IndexOutOfRange { index: last, n });
            }
        }
        Ok(Self { support, n })
    }

    /// Caller guarantees a strictly ascending support below `n`.
    pub(crate) fn from_sorted_unchecked(n: usize, support: Vec<usize>) -> Self {
        debug_assert!(support.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(support.last().is_none_or(|&j| j < n));
        Self { support, n }
    }

    pub fn zero(n: usize) -> Self {
        Self { support: Vec::new(), n }
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let support = bits
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
            .collect();
        Self { support, n: bits.len() }
    }

    pub fn to_bits(&self) -> Vec<bool> {
        let mut bits = vec![false; self.n];
        for &j in &self.support {
            bits[j] = true;
        }
        bits
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn len_n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn hamming_weight(&self) -> usize {
        self.support.len()
    }

    pub fn logistic_weight(&self) -> u64 {
        logistic_weight(&self.support)
    }

    pub fn improved_logistic_weight(&self) -> u64 {
        improved_logistic_weight(&self.support)
    }

    pub fn upo_compare(&self, other: &Self) -> Result<UpoOrdering> {
        if self.n != other.n {
            return Err(GrandError::LengthMismatch {
                expected: self.n,
                actual: other.n,
            });
        }
        Ok(upo_compare(&self.support, &other.support))
    }

    /// Sort key of the exact iLWO schedule: (iLW, h, lexicographic support).
    pub fn ilwo_key(&self) -> (u64, usize, &[usize]) {
        (
            self.improved_logistic_weight(),
            self.hamming_weight(),
            &self.support,
        )
    }
}

impl fmt::Display for ErrorPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, j) in self.support.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{j}")?;
        }
        Ok(())
    }
}

/// Sum of the 1-based positions of the flipped bits.
pub fn logistic_weight(support: &[usize]) -> u64 {
    support.iter().map(|&j| j as u64 + 1).sum()
}

/// Each flipped position (1-based) multiplied by its rank among the flipped bits.
pub fn improved_logistic_weight(support: &[usize]) -> u64 {
    support
        .iter()
        .enumerate()
        .map(|(i, &j)| (i as u64 + 1) * (j as u64 + 1))
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UpoOrdering {
    LessOrEqual,
    Greater,
    Incomparable,
}

/// `a <= b` under the order generated by the addition and right-swap rules.
///
/// Holds iff `b` has at least as many flipped bits as `a` at or above every
/// threshold, i.e. the k-th largest index of `a` never exceeds the k-th
/// largest index of `b`.
pub fn upo_leq(a: &[usize], b: &[usize]) -> bool {
    a.len() <= b.len() && a.iter().rev().zip(b.iter().rev()).all(|(x, y)| x <= y)
}

pub fn upo_compare(a: &[usize], b: &[usize]) -> UpoOrdering {
    if upo_leq(a, b) {
        UpoOrdering::LessOrEqual
    } else if upo_leq(b, a) {
        UpoOrdering::Greater
    } else {
        UpoOrdering::Incomparable
    }
}

/// Total order used by the exact iLWO schedule.
pub fn ilwo_cmp(a: &ErrorPattern, b: &ErrorPattern) -> Ordering {
    a.ilwo_key().cmp(&b.ilwo_key())
}

pub fn parse_pattern_line(line: &str, n: usize, line_no: usize) -> Result<ErrorPattern> {
    let line = line.strip_suffix('\r').unwrap_or(line);
    let support = if line.is_empty() {
        Vec::new()
    } else {
        line.split(' ')
            .map(|tok| {
                tok.parse::<usize>().map_err(|e| GrandError::Parse {
                    line: line_no,
                    msg: format!("bad index {tok:?}: {e}"),
                })
            })
            .collect::<Result<Vec<_>>>()?
    };
    ErrorPattern::new(n, support).map_err(|e| GrandError::Parse {
        line: line_no,
        msg: e.to_string(),
    })
}

pub fn read_patterns<R: BufRead>(reader: R, n: usize) -> Result<Vec<ErrorPattern>> {
    reader
        .lines()
        .enumerate()
        .map(|(i, line)| parse_pattern_line(&line?, n, i + 1))
        .collect()
}

pub fn write_patterns<'a, W, I>(mut writer: W, patterns: I) -> Result<()>
where
    W: Write,
    I: IntoIterator<Item = &'a ErrorPattern>,
{
    for p in patterns {
        writeln!(writer, "{p}")?;
    }
    writer.flush()?;
    Ok(())
}
