//! Raw stream files and readable text samples.
//!
//! A stream file has no header: just records back to back, little-endian,
//! 4 bytes per `u32` and 8 bytes (IEEE-754 binary64) per `f64`. The kind
//! travels out of band, by convention as the file extension (`.u32`/`.f64`).
//! Text samples hold one value per line: `u32` in decimal, `f64` in the
//! shortest decimal that parses back to the same bits.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::{Block, OutputKind, Stream, Value};
use crate::source::{BlockSource, ValueSource};

const CHUNK_BYTES: usize = 1 << 16;

/// Kind implied by a `.u32` / `.f64` extension, if any.
pub fn kind_from_path(path: &Path) -> Option<OutputKind> {
    match path.extension()?.to_str()? {
        "u32" => Some(OutputKind::U32),
        "f64" => Some(OutputKind::F64),
        _ => None,
    }
}

/// Incremental writer for large streams.
pub struct StreamWriter {
    path: PathBuf,
    kind: OutputKind,
    out: BufWriter<File>,
    written: u64,
}

impl StreamWriter {
    pub fn create(path: impl AsRef<Path>, kind: OutputKind) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let file = File::create(&path).map_err(|e| Error::io(&path, e))?;
        Ok(StreamWriter {
            path,
            kind,
            out: BufWriter::with_capacity(CHUNK_BYTES, file),
            written: 0,
        })
    }

    pub fn kind(&self) -> OutputKind {
        self.kind
    }

    pub fn write_u32s(&mut self, values: &[u32]) -> Result<()> {
        self.expect(OutputKind::U32)?;
        let mut buf = Vec::with_capacity(values.len() * 4);
        for v in values {
            buf.extend_from_slice(&v.to_le_bytes());
        }
        self.write_bytes(&buf)
    }

    pub fn write_f64s(&mut self, values: &[f64]) -> Result<()> {
        self.expect(OutputKind::F64)?;
        let mut buf = Vec::with_capacity(values.len() * 8);
        for v in values {
            buf.extend_from_slice(&v.to_bits().to_le_bytes());
        }
        self.write_bytes(&buf)
    }

    pub fn write_block(&mut self, block: &Block) -> Result<()> {
        match block {
            Block::U32(v) => self.write_u32s(v),
            Block::F64(v) => self.write_f64s(v),
        }
    }

    pub fn write_value(&mut self, value: Value) -> Result<()> {
        match value {
            Value::U32(v) => self.write_u32s(&[v]),
            Value::F64(v) => self.write_f64s(&[v]),
        }
    }

    /// Flushes and returns the number of bytes written.
    pub fn finish(mut self) -> Result<u64> {
        self.out.flush().map_err(|e| Error::io(&self.path, e))?;
        Ok(self.written)
    }

    fn expect(&self, kind: OutputKind) -> Result<()> {
        if kind != self.kind {
            return Err(Error::KindMismatch {
                expected: self.kind,
                found: kind,
            });
        }
        Ok(())
    }

    fn write_bytes(&mut self, bytes: &[u8]) -> Result<()> {
        self.out
            .write_all(bytes)
            .map_err(|e| Error::io(&self.path, e))?;
        self.written += bytes.len() as u64;
        Ok(())
    }
}

/// Writes `values` as a stream file; returns bytes written (4n or 8n).
pub fn write_stream(path: impl AsRef<Path>, values: &Block) -> Result<u64> {
    let mut w = StreamWriter::create(path, values.kind())?;
    w.write_block(values)?;
    w.finish()
}

/// Chunked sequential reader over a stream file.
pub struct StreamReader {
    path: PathBuf,
    kind: OutputKind,
    count: u64,
    consumed: u64,
    input: BufReader<File>,
}

impl StreamReader {
    pub fn open(path: impl AsRef<Path>, kind: OutputKind) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let file = File::open(&path).map_err(|e| Error::io(&path, e))?;
        let len = file.metadata().map_err(|e| Error::io(&path, e))?.len();
        let record = kind.record_size() as u64;
        if len % record != 0 {
            return Err(Error::TruncatedFile { path, len, record });
        }
        Ok(StreamReader {
            count: len / record,
            consumed: 0,
            kind,
            input: BufReader::with_capacity(CHUNK_BYTES, file),
            path,
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Total records in the file.
    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn remaining(&self) -> u64 {
        self.count - self.consumed
    }

    /// Reads everything that is left into memory.
    pub fn read_all(mut self) -> Result<Block> {
        let n = self.remaining() as usize;
        crate::source::collect(&mut self, n)
    }
}

impl ValueSource for StreamReader {
    fn kind(&self) -> OutputKind {
        self.kind
    }

    fn next_value(&mut self) -> Result<Value> {
        if self.consumed >= self.count {
            return Err(Error::Exhausted {
                consumed: self.consumed,
            });
        }
        let value = match self.kind {
            OutputKind::U32 => {
                let mut b = [0u8; 4];
                self.input
                    .read_exact(&mut b)
                    .map_err(|e| Error::io(&self.path, e))?;
                Value::U32(u32::from_le_bytes(b))
            }
            OutputKind::F64 => {
                let mut b = [0u8; 8];
                self.input
                    .read_exact(&mut b)
                    .map_err(|e| Error::io(&self.path, e))?;
                Value::F64(f64::from_bits(u64::from_le_bytes(b)))
            }
        };
        self.consumed += 1;
        Ok(value)
    }

    fn consumed(&self) -> u64 {
        self.consumed
    }
}

pub fn read_stream(path: impl AsRef<Path>, kind: OutputKind) -> Result<StreamReader> {
    StreamReader::open(path, kind)
}

pub fn format_value(value: Value) -> String {
    value.to_string()
}

/// Writes the next `n` values of `stream` (its own kind), one per line.
pub fn write_text_sample(stream: &mut Stream, path: impl AsRef<Path>, n: usize) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    for _ in 0..n {
        let v = stream.next_value()?;
        writeln!(out, "{v}").map_err(|e| Error::io(path, e))?;
    }
    out.flush().map_err(|e| Error::io(path, e))
}

/// Parses a text sample back into values.
pub fn read_text_sample(path: impl AsRef<Path>, kind: OutputKind) -> Result<BlockSource> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let parse_err = |line_no: usize, line: &str| Error::Parse {
        what: format!("{}:{}", path.display(), line_no + 1),
        detail: format!("not a {kind} value: {line:?}"),
    };
    let mut u = Vec::new();
    let mut f = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let t = line.trim();
        match kind {
            OutputKind::U32 => u.push(t.parse::<u32>().map_err(|_| parse_err(i, t))?),
            OutputKind::F64 => f.push(t.parse::<f64>().map_err(|_| parse_err(i, t))?),
        }
    }
    Ok(match kind {
        OutputKind::U32 => BlockSource::u32s(u),
        OutputKind::F64 => BlockSource::f64s(f),
    })
}

/// Sidecar written next to externally produced stream files
/// (`<file>.meta.json`): where the numbers came from and how the
/// generator was seeded.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SidecarMeta {
    pub ecosystem: String,
    pub version: String,
    pub seed: u64,
    /// The exact seeding call, e.g. `numpy.random.seed(0)`.
    pub seeding_call: String,
    pub kind: OutputKind,
    pub n: u64,
    #[serde(flatten)]
    pub extra: BTreeMap<String, serde_json::Value>,
}

impl SidecarMeta {
    pub fn path_for(stream_path: &Path) -> PathBuf {
        let mut name = stream_path.as_os_str().to_owned();
        name.push(".meta.json");
        PathBuf::from(name)
    }

    /// Loads the sidecar of `stream_path`, or `None` if there is none.
    pub fn load_for(stream_path: &Path) -> Result<Option<SidecarMeta>> {
        let path = Self::path_for(stream_path);
        let text = match std::fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(Error::io(&path, e)),
        };
        serde_json::from_str(&text)
            .map(Some)
            .map_err(|e| Error::Parse {
                what: path.display().to_string(),
                detail: e.to_string(),
            })
    }

    /// Checks the sidecar against the stream file it describes.
    pub fn validate_against(&self, stream_path: &Path) -> Result<StreamReader> {
        let reader = StreamReader::open(stream_path, self.kind)?;
        if reader.count() != self.n {
            return Err(Error::Parse {
                what: Self::path_for(stream_path).display().to_string(),
                detail: format!(
                    "sidecar says {} values, file holds {}",
                    self.n,
                    reader.count()
                ),
            });
        }
        Ok(reader)
    }

    pub fn save_for(&self, stream_path: &Path) -> Result<()> {
        let path = Self::path_for(stream_path);
        let text = serde_json::to_string_pretty(self).expect("sidecar serializes");
        std::fs::write(&path, text).map_err(|e| Error::io(&path, e))
    }
}
