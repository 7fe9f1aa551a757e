//! Deterministic artifact formatting and routing.
//!
//! All numeric output uses the shortest decimal expansion that parses back to
//! the same `f64` (never more than 17 significant digits), so identical
//! configurations produce byte-identical files regardless of scheduling.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

/// Shortest round-trip decimal form of `x`; at most 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x}")
}

/// Assemble a CSV artifact from a header line and all-numeric rows.
pub fn csv<R>(header: &str, rows: R) -> String
where
    R: IntoIterator<Item = Vec<f64>>,
{
    let mut s = String::with_capacity(256);
    s.push_str(header);
    s.push('\n');
    for row in rows {
        let mut first = true;
        for x in row {
            if !first {
                s.push(',');
            }
            let _ = write!(s, "{x}");
            first = false;
        }
        s.push('\n');
    }
    s
}

/// Pretty JSON with a trailing newline; field order follows the record type.
pub fn json<T: Serialize>(record: &T) -> Result<String, serde_json::Error> {
    let mut s = serde_json::to_string_pretty(record)?;
    s.push('\n');
    Ok(s)
}

/// Where an artifact goes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Dest {
    Stdout,
    File(PathBuf),
}

impl Dest {
    /// Resolve the primary artifact destination: `--out` wins (with `-`
    /// meaning stdout), then the configured output directory under the
    /// artifact's default name, then stdout.
    pub fn primary(out: Option<&Path>, dir: Option<&str>, name: &str) -> Dest {
        match out {
            Some(p) if p.as_os_str() == "-" => Dest::Stdout,
            Some(p) => Dest::File(p.to_path_buf()),
            None => match dir {
                Some(d) => Dest::File(Path::new(d).join(name)),
                None => Dest::Stdout,
            },
        }
    }

    /// Resolve a secondary artifact destination: the dedicated flag wins
    /// (with `-` meaning stdout), then the output directory; otherwise the
    /// artifact is skipped.
    pub fn secondary(flag: Option<&Path>, dir: Option<&str>, name: &str) -> Option<Dest> {
        match flag {
            Some(p) if p.as_os_str() == "-" => Some(Dest::Stdout),
            Some(p) => Some(Dest::File(p.to_path_buf())),
            None => dir.map(|d| Dest::File(Path::new(d).join(name))),
        }
    }

    /// Write `content`, creating parent directories for file destinations.
    pub fn write(&self, content: &str) -> std::io::Result<()> {
        match self {
            Dest::Stdout => {
                let stdout = std::io::stdout();
                let mut lock = stdout.lock();
                lock.write_all(content.as_bytes())?;
                lock.flush()
            }
            Dest::File(path) => {
                if let Some(parent) = path.parent() {
                    if !parent.as_os_str().is_empty() {
                        std::fs::create_dir_all(parent)?;
                    }
                }
                std::fs::write(path, content)
            }
        }
    }
}
