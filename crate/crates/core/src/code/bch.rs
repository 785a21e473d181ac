use super::gf::GaloisField;
use super::{check_len, CodeChecker};
use crate::error::{GrandError, Result};

/// Narrow-sense binary BCH code of length 2^m - 1 correcting `t` errors.
///
/// Bit `i` of a word is the coefficient of x^i. Encoding is systematic with
/// the message in the high positions `n - k .. n`.
#[derive(Debug, Clone)]
pub struct BchCode {
    gf: GaloisField,
    t: usize,
    n: usize,
    k: usize,
    name: String,
    /// Bit d = coefficient of x^d.
    generator: Vec<u8>,
    /// Per position, the packed syndromes alpha^(i*j) for odd j < 2t.
    columns: Vec<u64>,
}

impl BchCode {
    pub fn new(gf: GaloisField, t: usize) -> Result<Self> {
        let m = gf.degree() as usize;
        if t == 0 || t * m > 64 {
            return Err(GrandError::Config(format!(
                "unsupported BCH parameters m={m}, t={t}"
            )));
        }
        let n = gf.order();

        let mut cosets: Vec<Vec<usize>> = Vec::new();
        let mut generator = vec![1u8];
        for i in (1..2 * t).step_by(2) {
            if cosets.iter().any(|c| c.contains(&i)) {
                continue;
            }
            let mut coset = vec![i];
            let mut x = i * 2 % n;
            while x != i {
                coset.push(x);
                x = x * 2 % n;
            }
            cosets.push(coset);
            generator = poly_mul(&generator, &mask_to_poly(gf.minimal_polynomial(i)));
        }
        let deg = generator.len() - 1;
        if deg >= n {
            return Err(GrandError::Config(format!("BCH code with t={t} has no information bits")));
        }

        let columns = (0..n)
            .map(|pos| {
                (1..2 * t).step_by(2).enumerate().fold(0u64, |acc, (s, j)| {
                    acc | (gf.alpha_pow(pos * j) as u64) << (s * m)
                })
            })
            .collect();
        Ok(Self {
            gf,
            t,
            n,
            k: n - deg,
            name: format!("bch{n}"),
            generator,
            columns,
        })
    }

    pub fn field(&self) -> &GaloisField {
        &self.gf
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn generator_poly(&self) -> &[u8] {
        &self.generator
    }

    /// Odd syndromes S_1, S_3, ..., S_{2t-1}, i.e. evaluations of the word at
    /// the corresponding powers of alpha.
    pub fn syndromes(&self, word: &[u8]) -> Vec<u16> {
        (1..2 * self.t)
            .step_by(2)
            .map(|j| {
                word.iter()
                    .enumerate()
                    .filter(|(_, &b)| b != 0)
                    .fold(0u16, |acc, (i, _)| acc ^ self.gf.alpha_pow(i * j))
            })
            .collect()
    }

    /// Parity-check matrix whose rows are the bits of alpha^(i*j), odd j < 2t.
    pub fn parity_check_matrix(&self) -> Vec<Vec<u8>> {
        let rows = self.t * self.gf.degree() as usize;
        (0..rows)
            .map(|r| self.columns.iter().map(|&c| (c >> r & 1) as u8).collect())
            .collect()
    }
}

impl CodeChecker for BchCode {
    fn name(&self) -> &str {
        &self.name
    }

    fn n(&self) -> usize {
        self.n
    }

    fn k(&self) -> usize {
        self.k
    }

    fn encode(&self, msg: &[u8]) -> Result<Vec<u8>> {
        check_len(self.k, msg.len())?;
        let r = self.n - self.k;
        let mut word = vec![0u8; self.n];
        word[r..].copy_from_slice(msg);
        let rem = poly_rem(&word, &self.generator);
        word[..r].copy_from_slice(&rem);
        Ok(word)
    }

    fn is_codeword(&self, word: &[u8]) -> bool {
        word.len() == self.n && self.syndromes(word).iter().all(|&s| s == 0)
    }

    fn syndrome_columns(&self) -> Option<&[u64]> {
        Some(&self.columns)
    }
}

fn mask_to_poly(mask: u64) -> Vec<u8> {
    let deg = 63 - mask.leading_zeros() as usize;
    (0..=deg).map(|d| (mask >> d & 1) as u8).collect()
}

fn poly_mul(a: &[u8], b: &[u8]) -> Vec<u8> {
    let mut out = vec![0u8; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x != 0 {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] ^= y;
            }
        }
    }
    out
}

/// Remainder of `a` modulo monic `g`, as `deg(g)` coefficients.
fn poly_rem(a: &[u8], g: &[u8]) -> Vec<u8> {
    let deg = g.len() - 1;
    let mut r = a.to_vec();
    for top in (deg..r.len()).rev() {
        if r[top] != 0 {
            for (d, &c) in g.iter().enumerate() {
                r[top - deg + d] ^= c;
            }
        }
    }
    r.truncate(deg);
    r.resize(deg, 0);
    r
}
