use super::{check_len, CodeChecker};
use crate::error::{GrandError, Result};

/// CRC over a bit sequence, most significant (first) bit first, zero initial
/// register, no final XOR.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Crc {
    /// Generator including the leading coefficient, e.g. `0x61` for x^6 + x^5 + 1.
    poly: u64,
    width: usize,
}

impl Crc {
    pub fn new(poly: u64) -> Result<Self> {
        if poly < 2 {
            return Err(GrandError::Config(format!("CRC polynomial {poly:#x} has degree 0")));
        }
        let width = 63 - poly.leading_zeros() as usize;
        if width > 32 {
            return Err(GrandError::Config(format!("CRC width {width} too large")));
        }
        Ok(Self { poly, width })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn poly(&self) -> u64 {
        self.poly
    }

    /// Remainder of bits(x) * x^width modulo the generator.
    pub fn remainder(&self, bits: &[u8]) -> u64 {
        let mask = (1u64 << self.width) - 1;
        let top = self.width - 1;
        bits.iter().fold(0u64, |reg, &b| {
            let feedback = (b as u64 & 1) ^ (reg >> top & 1);
            let reg = (reg << 1) & mask;
            if feedback == 1 {
                reg ^ (self.poly & mask)
            } else {
                reg
            }
        })
    }

    /// CRC bits, most significant first.
    pub fn checksum(&self, bits: &[u8]) -> Vec<u8> {
        let rem = self.remainder(bits);
        (0..self.width)
            .rev()
            .map(|i| (rem >> i & 1) as u8)
            .collect()
    }
}

/// In-place x = u * F^{(x)log2 n} over GF(2) with F = [[1, 0], [1, 1]].
/// The transform is its own inverse.
pub fn polar_transform(bits: &mut [u8]) {
    let n = bits.len();
    assert!(n.is_power_of_two(), "polar length {n} is not a power of two");
    let mut half = 1;
    while half < n {
        for block in (0..n).step_by(2 * half) {
            for i in block..block + half {
                bits[i] ^= bits[i + half];
            }
        }
        half *= 2;
    }
}

/// CRC-aided polar code: `k` message bits plus CRC on the unfrozen positions
/// (ascending index order), zeros on the frozen set.
#[derive(Debug, Clone)]
pub struct PolarCode {
    n: usize,
    k: usize,
    name: String,
    frozen: Vec<usize>,
    info_positions: Vec<usize>,
    crc: Crc,
    columns: Vec<u64>,
}

impl PolarCode {
    pub fn new(n: usize, frozen_set: &[usize], crc: Crc) -> Result<Self> {
        if !n.is_power_of_two() || n < 2 {
            return Err(GrandError::Config(format!("polar length {n} is not a power of two")));
        }
        let mut frozen = frozen_set.to_vec();
        frozen.sort_unstable();
        frozen.dedup();
        if frozen.len() != frozen_set.len() {
            return Err(GrandError::Config("duplicate frozen index".into()));
        }
        if let Some(&bad) = frozen.iter().find(|&&j| j >= n) {
            return Err(GrandError::Config(format!("frozen index {bad} >= {n}")));
        }
        let info_positions: Vec<usize> = (0..n).filter(|j| frozen.binary_search(j).is_err()).collect();
        if info_positions.len() <= crc.width() {
            return Err(GrandError::Config("no room for message bits".into()));
        }
        if frozen.len() + crc.width() > 64 {
            return Err(GrandError::Config("too many parity constraints".into()));
        }
        let k = info_positions.len() - crc.width();
        let mut code = Self {
            n,
            k,
            name: format!("polar{n}"),
            frozen,
            info_positions,
            crc,
            columns: Vec::new(),
        };
        code.columns = (0..n)
            .map(|i| {
                let mut e = vec![0u8; n];
                e[i] = 1;
                code.syndrome(&e)
            })
            .collect();
        Ok(code)
    }

    pub fn frozen_set(&self) -> &[usize] {
        &self.frozen
    }

    pub fn crc(&self) -> &Crc {
        &self.crc
    }

    /// Frozen bits of the transform in the low bits, CRC mismatch above them.
    /// Zero iff the word is a codeword; linear in the word.
    pub fn syndrome(&self, word: &[u8]) -> u64 {
        let mut u = word.to_vec();
        polar_transform(&mut u);
        let frozen = self
            .frozen
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &j)| acc | (u[j] as u64) << i);
        let info: Vec<u8> = self.info_positions.iter().map(|&j| u[j]).collect();
        let tail = info[self.k..].iter().fold(0u64, |acc, &b| acc << 1 | b as u64);
        let crc = self.crc.remainder(&info[..self.k]) ^ tail;
        frozen | crc << self.frozen.len()
    }
}

impl CodeChecker for PolarCode {
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
        let mut u = vec![0u8; self.n];
        let checksum = self.crc.checksum(msg);
        for (&pos, &b) in self.info_positions.iter().zip(msg.iter().chain(&checksum)) {
            u[pos] = b;
        }
        polar_transform(&mut u);
        Ok(u)
    }

    fn is_codeword(&self, word: &[u8]) -> bool {
        if word.len() != self.n {
            return false;
        }
        let mut u = word.to_vec();
        polar_transform(&mut u);
        if self.frozen.iter().any(|&j| u[j] != 0) {
            return false;
        }
        let info: Vec<u8> = self.info_positions.iter().map(|&j| u[j]).collect();
        self.crc.checksum(&info[..self.k]) == info[self.k..]
    }

    fn syndrome_columns(&self) -> Option<&[u64]> {
        Some(&self.columns)
    }
}
