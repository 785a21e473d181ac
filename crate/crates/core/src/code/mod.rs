//! Codebook-membership checkers.
//!
//! Config files are plain `key = value` lines (`#` starts a comment):
//!
//! ```text
//! code = bch127 | polar128 | generic
//! primitive_poly = 0x89          # bch: GF(2^m) polynomial, leading coefficient included
//! t = 2                          # bch: designed correction capability
//! n = 128                        # polar: block length
//! frozen_set = 0,1,2,3,4,8,16,32 # polar
//! crc_poly = 0x61                # polar: MSB-first, leading coefficient included
//! matrix = h.txt                 # generic: rows of 0/1, relative to the config file
//! ```

mod bch;
mod generic;
mod gf;
mod polar;

use std::collections::BTreeMap;
use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

pub use bch::BchCode;
pub use generic::GenericLinearCode;
pub use gf::GaloisField;
pub use polar::{polar_transform, Crc, PolarCode};

use crate::error::{GrandError, Result};

pub const BCH127_CONFIG: &str = include_str!("../../configs/bch127.conf");
pub const POLAR128_CONFIG: &str = include_str!("../../configs/polar128.conf");

/// Encoder plus codebook-membership predicate for one (n, k) code.
pub trait CodeChecker: Send + Sync {
    fn name(&self) -> &str;
    fn n(&self) -> usize;
    fn k(&self) -> usize;
    fn encode(&self, msg: &[u8]) -> Result<Vec<u8>>;
    /// Words of the wrong length are never codewords.
    fn is_codeword(&self, word: &[u8]) -> bool;

    /// Per-position syndrome contributions for linear checks: a word is a
    /// codeword iff the XOR of the columns at its set bits is zero.
    fn syndrome_columns(&self) -> Option<&[u64]> {
        None
    }

    fn rate(&self) -> f64 {
        self.k() as f64 / self.n() as f64
    }
}

pub(crate) fn check_len(expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(GrandError::LengthMismatch { expected, actual })
    }
}

#[derive(Debug, Clone)]
pub enum Code {
    Bch(BchCode),
    Polar(PolarCode),
    Generic(GenericLinearCode),
}

impl Code {
    pub fn bch127() -> Self {
        Self::from_config_str(BCH127_CONFIG, Path::new(".")).expect("built-in config")
    }

    pub fn polar128() -> Self {
        Self::from_config_str(POLAR128_CONFIG, Path::new(".")).expect("built-in config")
    }

    /// A built-in name (`bch127`, `polar128`) or a path to a config file.
    pub fn load(name_or_path: &str) -> Result<Self> {
        match name_or_path {
            "bch127" => Ok(Self::bch127()),
            "polar128" => Ok(Self::polar128()),
            path => Self::from_config_file(Path::new(path)),
        }
    }

    pub fn from_config_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| GrandError::File {
            path: path.to_path_buf(),
            source,
        })?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::from_config_str(&text, base)
    }

    pub fn from_config_str(text: &str, base_dir: &Path) -> Result<Self> {
        let cfg = parse_config(text)?;
        let get = |key: &str| cfg.get(key).map(String::as_str);
        let kind = get("code").ok_or_else(|| GrandError::Config("missing `code` key".into()))?;
        match kind {
            "bch127" | "bch" => {
                let poly = parse_int(get("primitive_poly").unwrap_or("0x89"))? as u32;
                let t = parse_int(get("t").unwrap_or("2"))? as usize;
                Ok(Code::Bch(BchCode::new(GaloisField::new(poly)?, t)?))
            }
            "polar128" | "polar" => {
                let n = parse_int(get("n").unwrap_or("128"))? as usize;
                let frozen = get("frozen_set")
                    .ok_or_else(|| GrandError::Config("polar code needs `frozen_set`".into()))?
                    .split(',')
                    .map(|s| parse_int(s.trim()).map(|v| v as usize))
                    .collect::<Result<Vec<_>>>()?;
                let crc = Crc::new(parse_int(get("crc_poly").unwrap_or("0x61"))?)?;
                Ok(Code::Polar(PolarCode::new(n, &frozen, crc)?))
            }
            "generic" => {
                let rel = get("matrix")
                    .ok_or_else(|| GrandError::Config("generic code needs `matrix`".into()))?;
                let path: PathBuf = base_dir.join(rel);
                let file = File::open(&path).map_err(|source| GrandError::File {
                    path: path.clone(),
                    source,
                })?;
                let h = GenericLinearCode::read_matrix(BufReader::new(file))?;
                Ok(Code::Generic(GenericLinearCode::new(h)?))
            }
            other => Err(GrandError::Config(format!("unknown code {other:?}"))),
        }
    }

    fn inner(&self) -> &dyn CodeChecker {
        match self {
            Code::Bch(c) => c,
            Code::Polar(c) => c,
            Code::Generic(c) => c,
        }
    }
}

impl CodeChecker for Code {
    fn name(&self) -> &str {
        self.inner().name()
    }

    fn n(&self) -> usize {
        self.inner().n()
    }

    fn k(&self) -> usize {
        self.inner().k()
    }

    fn encode(&self, msg: &[u8]) -> Result<Vec<u8>> {
        self.inner().encode(msg)
    }

    fn is_codeword(&self, word: &[u8]) -> bool {
        self.inner().is_codeword(word)
    }

    fn syndrome_columns(&self) -> Option<&[u64]> {
        self.inner().syndrome_columns()
    }
}

fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| GrandError::Parse {
            line: i + 1,
            msg: format!("expected `key = value`, got {line:?}"),
        })?;
        out.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(out)
}

fn parse_int(s: &str) -> Result<u64> {
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    parsed.map_err(|e| GrandError::Config(format!("bad integer {s:?}: {e}")))
}
