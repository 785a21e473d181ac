//! Schedule selection shared by the decoder, the simulator and the CLI.

use std::fmt;
use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{GrandError, Result};
use crate::ilwo::{ApproxIlwoGenerator, IlwoExactGenerator};
use crate::lwo::LwoGenerator;
use crate::pattern::{read_patterns, ErrorPattern};

/// A source of error patterns, consumed in order by the decoder.
pub type ScheduleGenerator = Box<dyn Iterator<Item = ErrorPattern> + Send>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Schedule {
    Lwo,
    Ilwo,
    IlwoApprox,
    /// Replays a pattern file.
    File(PathBuf),
}

impl Schedule {
    pub fn label(&self) -> &'static str {
        match self {
            Schedule::Lwo => "lwo",
            Schedule::Ilwo => "ilwo",
            Schedule::IlwoApprox => "ilwo-approx",
            Schedule::File(_) => "file",
        }
    }

    /// Fresh generator; patterns above `h_max` are skipped without being counted.
    pub fn generator(&self, n: usize, h_max: Option<usize>) -> Result<ScheduleGenerator> {
        let keep = move |p: &ErrorPattern| h_max.is_none_or(|h| p.hamming_weight() <= h);
        Ok(match self {
            Schedule::Lwo => Box::new(LwoGenerator::new(n).filter(keep)),
            Schedule::Ilwo => Box::new(IlwoExactGenerator::with_h_max(n, h_max)),
            Schedule::IlwoApprox => Box::new(ApproxIlwoGenerator::new(n).filter(keep)),
            Schedule::File(path) => Box::new(load_pattern_file(path, n)?.into_iter().filter(keep)),
        })
    }

    /// First `q` patterns of the schedule.
    pub fn materialize(&self, n: usize, q: usize, h_max: Option<usize>) -> Result<Vec<ErrorPattern>> {
        Ok(self.generator(n, h_max)?.take(q).collect())
    }
}

impl fmt::Display for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Schedule {
    type Err = GrandError;

    /// `lwo`, `ilwo`, `ilwo-approx`, or `file:<path>`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lwo" => Ok(Schedule::Lwo),
            "ilwo" => Ok(Schedule::Ilwo),
            "ilwo-approx" => Ok(Schedule::IlwoApprox),
            _ => match s.strip_prefix("file:") {
                Some(path) if !path.is_empty() => Ok(Schedule::File(path.into())),
                _ => Err(GrandError::Config(format!("unknown schedule {s:?}"))),
            },
        }
    }
}

pub fn load_pattern_file(path: &Path, n: usize) -> Result<Vec<ErrorPattern>> {
    let file = File::open(path).map_err(|source| GrandError::File {
        path: path.to_path_buf(),
        source,
    })?;
    read_patterns(BufReader::new(file), n)
}
