use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use crate::Format;

/// Where command output goes. Each CSV row is encoded on its own, so rows
/// may have different lengths, which the coefficient tables need.
pub struct Sink {
    pub format: Format,
    writer: Box<dyn Write>,
}

impl Sink {
    pub fn open(path: Option<&Path>, format: Format) -> io::Result<Self> {
        let inner: Box<dyn Write> = match path {
            Some(p) => Box::new(BufWriter::new(File::create(p)?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        };
        Ok(Sink { format, writer: inner })
    }

    pub fn line(&mut self, text: &str) -> io::Result<()> {
        writeln!(self.writer, "{text}")
    }

    pub fn row<I, S>(&mut self, fields: I) -> io::Result<()>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        let mut record = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
        record.write_record(fields).map_err(io::Error::other)?;
        let bytes = record.into_inner().map_err(|e| io::Error::other(e.to_string()))?;
        self.writer.write_all(&bytes)
    }

    pub fn json(&mut self, value: &serde_json::Value) -> io::Result<()> {
        let text = serde_json::to_string_pretty(value).map_err(io::Error::other)?;
        self.line(&text)
    }

    pub fn finish(mut self) -> io::Result<()> {
        self.writer.flush()
    }
}
