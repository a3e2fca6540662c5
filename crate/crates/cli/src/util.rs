//! Small file and CSV helpers shared by the subcommands.

use std::borrow::Cow;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use cooc_core::error::io_data;
use cooc_core::Result;

/// Reads surface forms one per line: lossy UTF-8, CR trimmed, blank lines
/// skipped.
pub fn read_surface_lines(path: &Path) -> Result<Vec<String>> {
    let bytes = std::fs::read(path).map_err(|e| io_data(path, e))?;
    let text = String::from_utf8_lossy(&bytes);
    Ok(text
        .lines()
        .map(|l| l.trim_end_matches('\r'))
        .filter(|l| !l.is_empty())
        .map(str::to_string)
        .collect())
}

/// Quotes a CSV field when it contains a delimiter, quote, or newline.
pub fn csv_field(s: &str) -> Cow<'_, str> {
    if s.contains([',', '"', '\n', '\r']) {
        Cow::Owned(format!("\"{}\"", s.replace('"', "\"\"")))
    } else {
        Cow::Borrowed(s)
    }
}

pub fn create_file(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path).map_err(|e| io_data(path, e))?))
}

/// Flushes and syncs a writer created by `create_file`.
pub fn finish_file(mut w: BufWriter<File>, path: &Path) -> Result<()> {
    w.flush().map_err(|e| io_data(path, e))
}
