//! Three-line code files: ball, group, sequence. Blank lines and lines
//! starting with `#` are ignored.

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use burstlattice::{AbelianGroup, BallSpec, Error, Result, SplittingSequence};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeSpecFile {
    pub ball: BallSpec,
    pub sequence: SplittingSequence,
}

impl CodeSpecFile {
    pub fn new(ball: BallSpec, sequence: SplittingSequence) -> Result<Self> {
        if sequence.len() != ball.n {
            return Err(Error::Parse(format!(
                "sequence has {} elements, ball has n={}",
                sequence.len(),
                ball.n
            )));
        }
        Ok(CodeSpecFile { ball, sequence })
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.sequence.group
    }

    pub fn load(path: &Path) -> Result<Self> {
        fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("reading {}: {e}", path.display())))?
            .parse()
    }
}

impl fmt::Display for CodeSpecFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.ball)?;
        writeln!(f, "{}", self.sequence.group)?;
        writeln!(f, "{}", self.sequence.format_elems())
    }
}

impl FromStr for CodeSpecFile {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let lines: Vec<&str> = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .collect();
        let [ball, group, seq] = lines.as_slice() else {
            return Err(Error::Parse(format!(
                "code file needs 3 non-empty lines (ball, group, sequence), found {}",
                lines.len()
            )));
        };
        if !ball.starts_with("ball") {
            return Err(Error::Parse(format!("first line must start with `ball`, got {ball:?}")));
        }
        let ball: BallSpec = ball.parse()?;
        let group: AbelianGroup = group.parse()?;
        let sequence = SplittingSequence::parse_elems(group, seq)?;
        CodeSpecFile::new(ball, sequence)
    }
}
