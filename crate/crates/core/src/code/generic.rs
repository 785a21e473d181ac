use std::io::BufRead;

use super::{check_len, CodeChecker};
use crate::error::{GrandError, Result};

/// Binary linear code given by a full-rank parity-check matrix.
#[derive(Debug, Clone)]
pub struct GenericLinearCode {
    n: usize,
    h: Vec<Vec<u8>>,
    /// Reduced row echelon form of `h`, with its pivot columns.
    rref: Vec<Vec<u8>>,
    pivots: Vec<usize>,
    free: Vec<usize>,
    columns: Option<Vec<u64>>,
}

impl GenericLinearCode {
    pub fn new(h: Vec<Vec<u8>>) -> Result<Self> {
        let n = h.first().map_or(0, Vec::len);
        if n == 0 {
            return Err(GrandError::Config("empty parity-check matrix".into()));
        }
        if h.iter().any(|r| r.len() != n) {
            return Err(GrandError::Config("ragged parity-check matrix".into()));
        }
        if h.iter().flatten().any(|&b| b > 1) {
            return Err(GrandError::Config("parity-check entries must be 0 or 1".into()));
        }

        let mut rref = h.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..n {
            let Some(p) = (row..rref.len()).find(|&r| rref[r][col] == 1) else {
                continue;
            };
            rref.swap(row, p);
            for r in 0..rref.len() {
                if r != row && rref[r][col] == 1 {
                    let pivot_row = rref[row].clone();
                    for (x, y) in rref[r].iter_mut().zip(pivot_row) {
                        *x ^= y;
                    }
                }
            }
            pivots.push(col);
            row += 1;
            if row == rref.len() {
                break;
            }
        }
        if pivots.len() != h.len() {
            return Err(GrandError::Config(format!(
                "parity-check matrix has rank {} < {} rows",
                pivots.len(),
                h.len()
            )));
        }
        if pivots.len() == n {
            return Err(GrandError::Config("code has dimension 0".into()));
        }
        let free = (0..n).filter(|c| !pivots.contains(c)).collect();
        let columns = (h.len() <= 64).then(|| {
            (0..n)
                .map(|c| {
                    h.iter()
                        .enumerate()
                        .fold(0u64, |acc, (r, row)| acc | (row[c] as u64) << r)
                })
                .collect()
        });
        Ok(Self {
            n,
            h,
            rref,
            pivots,
            free,
            columns,
        })
    }

    /// Matrix text: one row per line, `0`/`1` characters; blank lines and
    /// `#` comments ignored.
    pub fn read_matrix<R: BufRead>(reader: R) -> Result<Vec<Vec<u8>>> {
        let mut rows = Vec::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let row = line
                .chars()
                .filter(|c| !c.is_whitespace())
                .map(|c| match c {
                    '0' => Ok(0u8),
                    '1' => Ok(1u8),
                    _ => Err(GrandError::Parse {
                        line: i + 1,
                        msg: format!("unexpected character {c:?}"),
                    }),
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        Ok(rows)
    }

    pub fn parity_check_matrix(&self) -> &[Vec<u8>] {
        &self.h
    }

    /// H * v^T = 0.
    pub fn check(&self, word: &[u8]) -> Result<bool> {
        check_len(self.n, word.len())?;
        Ok(self
            .h
            .iter()
            .all(|row| row.iter().zip(word).fold(0u8, |acc, (a, b)| acc ^ (a & b)) == 0))
    }
}

impl CodeChecker for GenericLinearCode {
    fn name(&self) -> &str {
        "generic"
    }

    fn n(&self) -> usize {
        self.n
    }

    fn k(&self) -> usize {
        self.free.len()
    }

    /// Message bits go to the non-pivot columns; pivot bits are solved from
    /// the reduced parity checks.
    fn encode(&self, msg: &[u8]) -> Result<Vec<u8>> {
        check_len(self.free.len(), msg.len())?;
        let mut word = vec![0u8; self.n];
        for (&c, &b) in self.free.iter().zip(msg) {
            word[c] = b;
        }
        for (row, &p) in self.rref.iter().zip(&self.pivots) {
            word[p] = self.free.iter().fold(0u8, |acc, &c| acc ^ (row[c] & word[c]));
        }
        Ok(word)
    }

    fn is_codeword(&self, word: &[u8]) -> bool {
        self.check(word).unwrap_or(false)
    }

    fn syndrome_columns(&self) -> Option<&[u64]> {
        self.columns.as_deref()
    }
}
