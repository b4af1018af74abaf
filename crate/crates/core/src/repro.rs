//! Bitwise reproducibility: stream comparison and golden-vector checks.
//!
//! The golden corpus is a directory of stream files plus `manifest.json`:
//! one entry per vector with `{algo, seed, sequence, kind, file, count,
//! provenance}` and, optionally, `deep_count`/`deep_sha256`: the SHA-256 of
//! the first `deep_count` values in stream-file layout, for conformance runs
//! too long to commit verbatim.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::generators::{AlgorithmId, Block, OutputKind, Value};
use crate::seeding::{make_stream, StreamSpec};
use crate::source::{BlockSource, ValueSource};
use crate::streamio::read_stream;

/// The comparison length of the readable-file protocol.
pub const DEFAULT_COMPARE_LEN: u64 = 100;
/// Deep conformance length.
pub const DEEP_COMPARE_LEN: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Identical { compared: u64 },
    Differs { index: u64, a: Value, b: Value },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Divergence {
    pub kind: OutputKind,
    pub outcome: Outcome,
}

impl Divergence {
    pub fn is_identical(&self) -> bool {
        matches!(self.outcome, Outcome::Identical { .. })
    }

    pub fn first_difference(&self) -> Option<u64> {
        match self.outcome {
            Outcome::Differs { index, .. } => Some(index),
            Outcome::Identical { .. } => None,
        }
    }
}

impl fmt::Display for Divergence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.outcome {
            Outcome::Identical { compared } => write!(f, "IDENTICAL({compared})"),
            Outcome::Differs { index, a, b } => write!(f, "DIFFERS({index}, {a}, {b})"),
        }
    }
}

/// Compares the first `limit` values of two sources bit for bit.
pub fn compare_streams(
    a: &mut dyn ValueSource,
    b: &mut dyn ValueSource,
    limit: u64,
) -> Result<Divergence> {
    let kind = a.kind();
    if b.kind() != kind {
        return Err(Error::KindMismatch {
            expected: kind,
            found: b.kind(),
        });
    }
    for index in 0..limit {
        let va = a.next_value()?;
        let vb = b.next_value()?;
        if va.bits() != vb.bits() {
            return Ok(Divergence {
                kind,
                outcome: Outcome::Differs {
                    index,
                    a: va,
                    b: vb,
                },
            });
        }
    }
    Ok(Divergence {
        kind,
        outcome: Outcome::Identical { compared: limit },
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub algo: AlgorithmId,
    pub seed: u64,
    #[serde(default)]
    pub sequence: Option<u128>,
    pub kind: OutputKind,
    pub file: String,
    pub count: u64,
    #[serde(default)]
    pub deep_count: Option<u64>,
    #[serde(default)]
    pub deep_sha256: Option<String>,
    pub provenance: String,
}

impl ManifestEntry {
    pub fn spec(&self) -> StreamSpec {
        let spec = StreamSpec::new(self.algo, self.seed, self.kind);
        match self.sequence {
            Some(seq) => spec.with_sequence(seq),
            None => spec,
        }
    }

    pub fn name(&self) -> String {
        match self.sequence {
            Some(seq) => format!("{} seed={} seq={} {}", self.algo, self.seed, seq, self.kind),
            None => format!("{} seed={} {}", self.algo, self.seed, self.kind),
        }
    }
}

/// Expected output of a reference implementation for one stream spec.
#[derive(Clone, Debug, PartialEq)]
pub struct GoldenVector {
    pub spec: StreamSpec,
    pub expected: Block,
    pub provenance: String,
}

impl GoldenVector {
    /// Negative control: the same vector with one bit of `expected[index]` flipped.
    pub fn with_flipped_bit(&self, index: usize, bit: u32) -> GoldenVector {
        let mut out = self.clone();
        match &mut out.expected {
            Block::U32(v) => v[index] ^= 1 << (bit % 32),
            Block::F64(v) => v[index] = f64::from_bits(v[index].to_bits() ^ (1 << (bit % 64))),
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GoldenVerdict {
    Conforms { compared: u64 },
    Violates(Divergence),
}

impl GoldenVerdict {
    pub fn conforms(&self) -> bool {
        matches!(self, GoldenVerdict::Conforms { .. })
    }
}

impl fmt::Display for GoldenVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GoldenVerdict::Conforms { compared } => write!(f, "CONFORMS({compared})"),
            GoldenVerdict::Violates(d) => write!(f, "VIOLATES({d})"),
        }
    }
}

/// Regenerates the vector's stream and compares every expected value.
pub fn check_golden(vector: &GoldenVector) -> Result<GoldenVerdict> {
    let mut stream = make_stream(vector.spec.clone())?;
    let mut expected = BlockSource::new(vector.expected.clone());
    let n = vector.expected.len() as u64;
    let d = compare_streams(&mut stream, &mut expected, n)?;
    Ok(match d.outcome {
        Outcome::Identical { compared } => GoldenVerdict::Conforms { compared },
        Outcome::Differs { .. } => GoldenVerdict::Violates(d),
    })
}

/// SHA-256 over the first `n` values of `spec`, in stream-file byte layout.
pub fn stream_digest(spec: &StreamSpec, n: u64) -> Result<String> {
    const CHUNK: usize = 1 << 16;
    let mut stream = make_stream(spec.clone())?;
    let mut hasher = Sha256::new();
    let mut left = n;
    match spec.kind {
        OutputKind::U32 => {
            let mut buf = vec![0u32; CHUNK];
            let mut bytes = Vec::with_capacity(CHUNK * 4);
            while left > 0 {
                let take = left.min(CHUNK as u64) as usize;
                stream.fill_u32(&mut buf[..take])?;
                bytes.clear();
                buf[..take]
                    .iter()
                    .for_each(|v| bytes.extend_from_slice(&v.to_le_bytes()));
                hasher.update(&bytes);
                left -= take as u64;
            }
        }
        OutputKind::F64 => {
            let mut buf = vec![0f64; CHUNK];
            let mut bytes = Vec::with_capacity(CHUNK * 8);
            while left > 0 {
                let take = left.min(CHUNK as u64) as usize;
                stream.fill_f64(&mut buf[..take]);
                bytes.clear();
                buf[..take]
                    .iter()
                    .for_each(|v| bytes.extend_from_slice(&v.to_bits().to_le_bytes()));
                hasher.update(&bytes);
                left -= take as u64;
            }
        }
    }
    Ok(hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DeepVerdict {
    Conforms { compared: u64 },
    DigestMismatch { expected: String, actual: String },
    NotRecorded,
}

#[derive(Clone, Debug)]
pub struct GoldenCorpus {
    dir: PathBuf,
    entries: Vec<ManifestEntry>,
}

impl GoldenCorpus {
    /// The corpus shipped with this crate.
    pub fn default_dir() -> PathBuf {
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("golden")
    }

    pub fn load(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref().to_path_buf();
        let path = dir.join("manifest.json");
        let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        let entries: Vec<ManifestEntry> =
            serde_json::from_str(&text).map_err(|e| Error::Parse {
                what: path.display().to_string(),
                detail: e.to_string(),
            })?;
        Ok(GoldenCorpus { dir, entries })
    }

    pub fn load_default() -> Result<Self> {
        Self::load(Self::default_dir())
    }

    pub fn entries(&self) -> &[ManifestEntry] {
        &self.entries
    }

    pub fn find(
        &self,
        algo: AlgorithmId,
        seed: u64,
        kind: OutputKind,
        sequence: Option<u128>,
    ) -> Result<&ManifestEntry> {
        self.entries
            .iter()
            .find(|e| e.algo == algo && e.seed == seed && e.kind == kind && e.sequence == sequence)
            .ok_or_else(|| {
                Error::UnknownVector(format!(
                    "{algo} seed={seed} kind={kind} sequence={sequence:?}"
                ))
            })
    }

    pub fn vector(&self, entry: &ManifestEntry) -> Result<GoldenVector> {
        let reader = read_stream(self.dir.join(&entry.file), entry.kind)?;
        if reader.count() != entry.count {
            return Err(Error::Parse {
                what: entry.file.clone(),
                detail: format!(
                    "manifest says {} values, file has {}",
                    entry.count,
                    reader.count()
                ),
            });
        }
        Ok(GoldenVector {
            spec: entry.spec(),
            expected: reader.read_all()?,
            provenance: entry.provenance.clone(),
        })
    }

    pub fn check_deep(&self, entry: &ManifestEntry) -> Result<DeepVerdict> {
        let (Some(count), Some(expected)) = (entry.deep_count, entry.deep_sha256.as_ref()) else {
            return Ok(DeepVerdict::NotRecorded);
        };
        let actual = stream_digest(&entry.spec(), count)?;
        Ok(if &actual == expected {
            DeepVerdict::Conforms { compared: count }
        } else {
            DeepVerdict::DigestMismatch {
                expected: expected.clone(),
                actual,
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::source::BlockSource;

    #[test]
    fn differs_at_first_mismatch() {
        let mut a = BlockSource::u32s(vec![1, 2, 3]);
        let mut b = BlockSource::u32s(vec![1, 2, 4]);
        let d = compare_streams(&mut a, &mut b, 3).unwrap();
        assert_eq!(
            d.outcome,
            Outcome::Differs {
                index: 2,
                a: Value::U32(3),
                b: Value::U32(4)
            }
        );
        assert_eq!(d.to_string(), "DIFFERS(2, 3, 4)");
    }

    #[test]
    fn exhausted_before_limit() {
        let mut a = BlockSource::u32s(vec![1, 2]);
        let mut b = BlockSource::u32s(vec![1, 2, 3]);
        assert!(matches!(
            compare_streams(&mut a, &mut b, 3),
            Err(Error::Exhausted { .. })
        ));
    }

    #[test]
    fn mismatch_wins_over_exhaustion() {
        let mut a = BlockSource::u32s(vec![9]);
        let mut b = BlockSource::u32s(vec![1, 2, 3]);
        let d = compare_streams(&mut a, &mut b, 3).unwrap();
        assert_eq!(d.first_difference(), Some(0));
    }

    #[test]
    fn nan_payloads_compare_by_bits() {
        let x = f64::from_bits(0x7ff8_0000_0000_0001);
        let y = f64::from_bits(0x7ff8_0000_0000_0002);
        let mut a = BlockSource::f64s(vec![x, x]);
        let mut b = BlockSource::f64s(vec![x, y]);
        let d = compare_streams(&mut a, &mut b, 2).unwrap();
        assert_eq!(d.first_difference(), Some(1));
        let mut a = BlockSource::f64s(vec![x]);
        let mut b = BlockSource::f64s(vec![x]);
        assert!(compare_streams(&mut a, &mut b, 1).unwrap().is_identical());
    }

    #[test]
    fn signed_zeros_differ() {
        let mut a = BlockSource::f64s(vec![0.0]);
        let mut b = BlockSource::f64s(vec![-0.0]);
        assert!(!compare_streams(&mut a, &mut b, 1).unwrap().is_identical());
    }

    #[test]
    fn kind_mismatch_rejected() {
        let mut a = BlockSource::u32s(vec![1]);
        let mut b = BlockSource::f64s(vec![1.0]);
        assert!(matches!(
            compare_streams(&mut a, &mut b, 1),
            Err(Error::KindMismatch { .. })
        ));
    }

    #[test]
    fn unknown_vector() {
        let corpus = GoldenCorpus::load_default().unwrap();
        assert!(matches!(
            corpus.find(AlgorithmId::Mt19937, 777, OutputKind::U32, None),
            Err(Error::UnknownVector(_))
        ));
    }

    #[test]
    fn corrupted_vector_violates_at_index() {
        let corpus = GoldenCorpus::load_default().unwrap();
        let entry = corpus
            .find(AlgorithmId::Mt19937, 5489, OutputKind::U32, None)
            .unwrap();
        let v = corpus.vector(entry).unwrap();
        assert!(check_golden(&v).unwrap().conforms());
        match check_golden(&v.with_flipped_bit(7, 0)).unwrap() {
            GoldenVerdict::Violates(d) => assert_eq!(d.first_difference(), Some(7)),
            other => panic!("expected violation, got {other}"),
        }
    }
}
