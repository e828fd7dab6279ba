use std::fmt;
use std::path::Path;
use std::process::ExitCode;

/// A failure with its exit code.
#[derive(Debug)]
pub enum Fail {
    /// Verification or bound failure.
    Check(String),
    /// Unreadable or malformed input, or a parameter over the desk caps.
    Parse(String),
    /// Invalid witness, dependent slots, or no witness within search bounds.
    Witness(String),
    /// Search space above the cap.
    Cap(String),
}

impl Fail {
    pub fn code(&self) -> u8 {
        match self {
            Fail::Check(_) => 1,
            Fail::Parse(_) => 2,
            Fail::Witness(_) => 3,
            Fail::Cap(_) => 4,
        }
    }

    pub fn exit(&self) -> ExitCode {
        ExitCode::from(self.code())
    }
}

impl fmt::Display for Fail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (kind, msg) = match self {
            Fail::Check(m) => ("check", m),
            Fail::Parse(m) => ("parse", m),
            Fail::Witness(m) => ("witness", m),
            Fail::Cap(m) => ("cap", m),
        };
        write!(f, "error={kind}\nmessage={msg}")
    }
}

impl From<symlen::text::TextError> for Fail {
    fn from(e: symlen::text::TextError) -> Self {
        Fail::Parse(e.to_string())
    }
}

/// `key=value` lines in insertion order.
#[derive(Default)]
pub struct Report {
    lines: Vec<(String, String)>,
}

impl Report {
    pub fn put(&mut self, key: &str, value: impl fmt::Display) -> &mut Self {
        self.lines.push((key.to_string(), value.to_string()));
        self
    }

    pub fn pass(ok: bool) -> &'static str {
        if ok {
            "PASS"
        } else {
            "FAIL"
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in &self.lines {
            writeln!(f, "{k}={v}")?;
        }
        Ok(())
    }
}

pub fn read(path: &Path) -> Result<String, Fail> {
    std::fs::read_to_string(path).map_err(|e| Fail::Parse(format!("{}: {e}", path.display())))
}

/// Write through a temporary file in the same directory, then rename.
pub fn write_atomic(path: &Path, text: &str) -> Result<(), Fail> {
    let io = |e: std::io::Error| Fail::Parse(format!("{}: {e}", path.display()));
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    std::fs::write(&tmp, text).map_err(io)?;
    std::fs::rename(&tmp, path).map_err(io)
}
