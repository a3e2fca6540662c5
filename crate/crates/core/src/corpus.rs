//! Streaming reader for JSONL corpora.
//!
//! Each line is one document object with a `text` field. Lines that fail to
//! parse are reported as `Malformed` so the counter can tally them without
//! aborting; I/O failures are real errors and do abort.

use std::fs::File;
use std::io::{self, BufRead, BufReader};
use std::path::Path;

use serde::Deserialize;

use crate::error::{io_data, Result};

/// One corpus line: a document's text, or a marker for an unusable record.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DocLine {
    Text(String),
    Malformed,
}

#[derive(Deserialize)]
struct DocRecord {
    text: String,
}

pub struct JsonlDocs<R> {
    reader: R,
    buf: Vec<u8>,
}

impl<R: BufRead> JsonlDocs<R> {
    pub fn new(reader: R) -> Self {
        JsonlDocs { reader, buf: Vec::new() }
    }
}

impl<R: BufRead> Iterator for JsonlDocs<R> {
    type Item = io::Result<DocLine>;

    fn next(&mut self) -> Option<Self::Item> {
        self.buf.clear();
        match self.reader.read_until(b'\n', &mut self.buf) {
            Err(e) => Some(Err(e)),
            Ok(0) => None,
            Ok(_) => {
                while matches!(self.buf.last(), Some(b'\n') | Some(b'\r')) {
                    self.buf.pop();
                }
                // Invalid UTF-8 is replaced rather than fatal; if the JSON
                // structure survives, the document still counts.
                let line = String::from_utf8_lossy(&self.buf);
                match serde_json::from_str::<DocRecord>(&line) {
                    Ok(rec) => Some(Ok(DocLine::Text(rec.text))),
                    Err(_) => Some(Ok(DocLine::Malformed)),
                }
            }
        }
    }
}

pub fn open_jsonl(path: &Path) -> Result<JsonlDocs<BufReader<File>>> {
    let file = File::open(path).map_err(|e| io_data(path, e))?;
    Ok(JsonlDocs::new(BufReader::new(file)))
}
