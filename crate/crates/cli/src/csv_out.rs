//! CSV emission: RFC-4180-style, UTF-8, LF line endings, one `#` metadata
//! comment line before the header carrying config hash, seed, trials and
//! artifact version. Numbers use Rust's shortest-roundtrip formatting so
//! identical runs produce identical bytes.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};

pub struct CsvSink {
    writer: csv::Writer<File>,
}

impl CsvSink {
    /// Opens `path`, writes the metadata comment and the header row.
    pub fn create(path: &Path, metadata: &str, header: &[&str]) -> Result<Self> {
        let mut file =
            File::create(path).with_context(|| format!("creating {}", path.display()))?;
        writeln!(file, "# {metadata}")?;
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(file);
        writer.write_record(header)?;
        Ok(Self { writer })
    }

    pub fn row(&mut self, fields: &[String]) -> Result<()> {
        self.writer.write_record(fields)?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<()> {
        self.writer.flush()?;
        Ok(())
    }
}

/// Shortest-roundtrip decimal form of a float.
pub fn fmt(v: f64) -> String {
    format!("{v}")
}

/// Standard metadata line content shared by all output files.
pub fn metadata(config_hash: &str, seed: u64, trials: u64) -> String {
    format!(
        "config_hash={config_hash} seed={seed} trials={trials} version={}",
        env!("CARGO_PKG_VERSION")
    )
}
