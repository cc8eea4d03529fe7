//! Ordered report lines, optional file output and the exit status.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

/// Inclusive order range written `a..b`; a bare `a` means `a..a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NRange {
    pub lo: i64,
    pub hi: i64,
}

impl NRange {
    pub fn iter(self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi
    }
}

impl FromStr for NRange {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let parse = |t: &str| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| format!("bad order `{t}` in `{s}`"))
        };
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
            None => {
                let v = parse(s)?;
                (v, v)
            }
        };
        if lo > hi {
            return Err(format!("empty range `{s}`"));
        }
        Ok(NRange { lo, hi })
    }
}

impl fmt::Display for NRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.lo, self.hi)
    }
}

/// Lines go to stdout as they are produced; the file copy, if any, is written at the end.
pub struct Report {
    out: Option<(PathBuf, String)>,
    failures: usize,
}

impl Report {
    pub fn new(out: Option<PathBuf>, header: Option<&str>) -> Self {
        let out = out.map(|p| {
            let mut body = String::new();
            if let Some(h) = header {
                body.push_str(h);
                body.push('\n');
            }
            (p, body)
        });
        Report { out, failures: 0 }
    }

    /// Prints a line; `row` is the matching CSV record for the file copy.
    pub fn line(&mut self, text: &str, row: Option<&str>) {
        println!("{text}");
        if let Some((_, body)) = &mut self.out {
            body.push_str(row.unwrap_or(text));
            body.push('\n');
        }
    }

    /// Writes raw text to stdout and the file copy.
    pub fn raw(&mut self, text: &str) {
        print!("{text}");
        if let Some((_, body)) = &mut self.out {
            body.push_str(text);
        }
    }

    pub fn fail(&mut self) {
        self.failures += 1;
    }

    pub fn check(&mut self, ok: bool) -> &'static str {
        if ok {
            "PASS"
        } else {
            self.fail();
            "FAIL"
        }
    }

    pub fn finish(self) -> ExitCode {
        let _ = std::io::stdout().flush();
        if let Some((path, body)) = &self.out {
            if let Err(e) = fs::write(path, body) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        if self.failures == 0 {
            ExitCode::SUCCESS
        } else {
            eprintln!("{} check(s) failed", self.failures);
            ExitCode::FAILURE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!("2..8".parse::<NRange>().unwrap(), NRange { lo: 2, hi: 8 });
        assert_eq!("2..=8".parse::<NRange>().unwrap(), NRange { lo: 2, hi: 8 });
        assert_eq!("5".parse::<NRange>().unwrap(), NRange { lo: 5, hi: 5 });
        assert!("8..2".parse::<NRange>().is_err());
        assert!("a..2".parse::<NRange>().is_err());
        assert_eq!("1..3".parse::<NRange>().unwrap().iter().count(), 3);
    }
}
