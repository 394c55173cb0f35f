//! Deterministic text assembly shared by the subcommands.
//!
//! Every value is formatted through one routine so that repeated runs with
//! identical flags emit byte-identical output.

use std::io::Write;
use std::path::Path;

use crate::Failure;

/// Scientific notation with 12 significant digits. Infinite values print
/// as `inf`, which keeps zero-temperature metadata readable.
pub fn sci(x: f64) -> String {
    format!("{x:.11e}")
}

/// Accumulates output lines with `\n` endings.
pub struct Report {
    text: String,
}

impl Report {
    pub fn new() -> Self {
        Report {
            text: String::new(),
        }
    }

    pub fn line(&mut self, line: impl AsRef<str>) {
        self.text.push_str(line.as_ref());
        self.text.push('\n');
    }

    /// Comment line for CSV metadata.
    pub fn comment(&mut self, line: impl AsRef<str>) {
        self.text.push_str("# ");
        self.text.push_str(line.as_ref());
        self.text.push('\n');
    }

    /// Writes the accumulated text to `out`, or to standard output when no
    /// path was given.
    pub fn deliver(self, out: Option<&Path>) -> Result<(), Failure> {
        match out {
            None => std::io::stdout()
                .write_all(self.text.as_bytes())
                .map_err(|e| Failure::runtime(format!("cannot write to stdout: {e}"))),
            Some(path) => std::fs::write(path, self.text.as_bytes())
                .map_err(|e| Failure::runtime(format!("cannot write {}: {e}", path.display()))),
        }
    }
}
