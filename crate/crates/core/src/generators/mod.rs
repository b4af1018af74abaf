//! Bit-exact generator implementations behind a uniform stream abstraction.
//!
//! Every algorithm exposes a 32-bit integer path (except MRG32k3a, whose
//! reference form emits doubles only) and a double path in `[0, 1)`:
//!
//! | algorithm     | `u32`                         | `f64`                                 |
//! |---------------|-------------------------------|---------------------------------------|
//! | MT19937       | tempered word                 | `((a>>5)·2^26 + (b>>6))·2^-53`        |
//! | PCG64 XSL-RR  | halves of a 64-bit output     | `(u64 >> 11)·2^-53`                   |
//! | PCG32 XSH-RR  | native                        | two words, low first, `(u64>>11)·2^-53` |
//! | Philox4x32-10 | block words, word 0 first     | two words, low first, `(u64>>11)·2^-53` |
//! | MRG32k3a      | unsupported                   | native combined recurrence            |
//! | WELL19937a    | state word                    | two words, low first, `(u64>>11)·2^-53` |

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seeding::{SeedWarning, StreamSpec};

pub mod mrg32k3a;
pub mod mt19937;
pub mod pcg;
pub mod philox;
pub mod well19937a;

pub use mrg32k3a::Mrg32k3a;
pub use mt19937::Mt19937;
pub use pcg::{Pcg32, Pcg64};
pub use philox::Philox4x32;
pub use well19937a::Well19937a;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum AlgorithmId {
    Mt19937,
    Pcg64XslRr,
    Pcg32XshRr,
    Philox4x32_10,
    Mrg32k3a,
    Well19937a,
}

impl AlgorithmId {
    pub const ALL: [AlgorithmId; 6] = [
        AlgorithmId::Mt19937,
        AlgorithmId::Pcg64XslRr,
        AlgorithmId::Pcg32XshRr,
        AlgorithmId::Philox4x32_10,
        AlgorithmId::Mrg32k3a,
        AlgorithmId::Well19937a,
    ];

    /// Short name used on the command line, in file names and manifests.
    pub fn name(self) -> &'static str {
        match self {
            AlgorithmId::Mt19937 => "mt19937",
            AlgorithmId::Pcg64XslRr => "pcg64",
            AlgorithmId::Pcg32XshRr => "pcg32",
            AlgorithmId::Philox4x32_10 => "philox4x32_10",
            AlgorithmId::Mrg32k3a => "mrg32k3a",
            AlgorithmId::Well19937a => "well19937a",
        }
    }

    pub fn supports(self, kind: OutputKind) -> bool {
        !(self == AlgorithmId::Mrg32k3a && kind == OutputKind::U32)
    }

    pub fn supported_kinds(self) -> Vec<OutputKind> {
        OutputKind::ALL
            .into_iter()
            .filter(|&k| self.supports(k))
            .collect()
    }
}

impl fmt::Display for AlgorithmId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl From<AlgorithmId> for String {
    fn from(a: AlgorithmId) -> String {
        a.name().to_string()
    }
}

impl TryFrom<String> for AlgorithmId {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl FromStr for AlgorithmId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.to_ascii_lowercase().replace('-', "_");
        Ok(match norm.as_str() {
            "mt19937" | "mt" => AlgorithmId::Mt19937,
            "pcg64" | "pcg64_xsl_rr" => AlgorithmId::Pcg64XslRr,
            "pcg32" | "pcg32_xsh_rr" => AlgorithmId::Pcg32XshRr,
            "philox" | "philox4x32_10" | "philox4x32" => AlgorithmId::Philox4x32_10,
            "mrg32k3a" | "mrg" => AlgorithmId::Mrg32k3a,
            "well19937a" | "well" => AlgorithmId::Well19937a,
            _ => {
                return Err(Error::Parse {
                    what: "algorithm".into(),
                    detail: format!("unknown algorithm {s:?}"),
                })
            }
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputKind {
    U32,
    F64,
}

impl OutputKind {
    pub const ALL: [OutputKind; 2] = [OutputKind::U32, OutputKind::F64];

    pub fn record_size(self) -> usize {
        match self {
            OutputKind::U32 => 4,
            OutputKind::F64 => 8,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            OutputKind::U32 => "u32",
            OutputKind::F64 => "f64",
        }
    }
}

impl fmt::Display for OutputKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OutputKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "u32" | "int32" => Ok(OutputKind::U32),
            "f64" | "double" | "real" => Ok(OutputKind::F64),
            _ => Err(Error::Parse {
                what: "output kind".into(),
                detail: format!("unknown kind {s:?} (expected u32 or f64)"),
            }),
        }
    }
}

/// One generated value, compared bitwise.
#[derive(Clone, Copy, Debug)]
pub enum Value {
    U32(u32),
    F64(f64),
}

impl Value {
    pub fn kind(self) -> OutputKind {
        match self {
            Value::U32(_) => OutputKind::U32,
            Value::F64(_) => OutputKind::F64,
        }
    }

    /// Raw bit pattern (zero-extended for `u32`).
    pub fn bits(self) -> u64 {
        match self {
            Value::U32(v) => v as u64,
            Value::F64(v) => v.to_bits(),
        }
    }
}

impl PartialEq for Value {
    fn eq(&self, other: &Self) -> bool {
        self.kind() == other.kind() && self.bits() == other.bits()
    }
}

impl Eq for Value {}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::U32(v) => write!(f, "{v}"),
            Value::F64(v) => write!(f, "{v:?}"),
        }
    }
}

/// A buffer of generated values of one kind.
#[derive(Clone, Debug, PartialEq)]
pub enum Block {
    U32(Vec<u32>),
    F64(Vec<f64>),
}

impl Block {
    pub fn len(&self) -> usize {
        match self {
            Block::U32(v) => v.len(),
            Block::F64(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn kind(&self) -> OutputKind {
        match self {
            Block::U32(_) => OutputKind::U32,
            Block::F64(_) => OutputKind::F64,
        }
    }

    pub fn get(&self, i: usize) -> Option<Value> {
        match self {
            Block::U32(v) => v.get(i).copied().map(Value::U32),
            Block::F64(v) => v.get(i).copied().map(Value::F64),
        }
    }

    /// Bitwise equality (NaN-safe for doubles).
    pub fn bitwise_eq(&self, other: &Block) -> bool {
        match (self, other) {
            (Block::U32(a), Block::U32(b)) => a == b,
            (Block::F64(a), Block::F64(b)) => {
                a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.to_bits() == y.to_bits())
            }
            _ => false,
        }
    }
}

/// `(u64 >> 11)·2^-53`: exact, always in `[0, 1)`.
#[inline(always)]
pub fn u64_to_unit_f64(v: u64) -> f64 {
    (v >> 11) as f64 * (1.0 / 9_007_199_254_740_992.0)
}

#[inline(always)]
fn compose_f64(lo: u32, hi: u32) -> f64 {
    u64_to_unit_f64(((hi as u64) << 32) | lo as u64)
}

/// Per-algorithm internal state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeneratorState {
    Mt19937(Box<Mt19937>),
    Pcg64XslRr(Pcg64),
    Pcg32XshRr(Pcg32),
    Philox4x32_10(Philox4x32),
    Mrg32k3a(Mrg32k3a),
    Well19937a(Box<Well19937a>),
}

impl GeneratorState {
    pub fn algorithm(&self) -> AlgorithmId {
        match self {
            GeneratorState::Mt19937(_) => AlgorithmId::Mt19937,
            GeneratorState::Pcg64XslRr(_) => AlgorithmId::Pcg64XslRr,
            GeneratorState::Pcg32XshRr(_) => AlgorithmId::Pcg32XshRr,
            GeneratorState::Philox4x32_10(_) => AlgorithmId::Philox4x32_10,
            GeneratorState::Mrg32k3a(_) => AlgorithmId::Mrg32k3a,
            GeneratorState::Well19937a(_) => AlgorithmId::Well19937a,
        }
    }

    #[inline]
    pub fn next_u32(&mut self) -> Result<u32> {
        Ok(match self {
            GeneratorState::Mt19937(g) => g.next_u32(),
            GeneratorState::Pcg64XslRr(g) => g.next_u32(),
            GeneratorState::Pcg32XshRr(g) => g.next_u32(),
            GeneratorState::Philox4x32_10(g) => g.next_u32(),
            GeneratorState::Well19937a(g) => g.next_u32(),
            GeneratorState::Mrg32k3a(_) => {
                return Err(Error::UnsupportedOutput {
                    algo: AlgorithmId::Mrg32k3a,
                    kind: OutputKind::U32,
                })
            }
        })
    }

    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        match self {
            GeneratorState::Mt19937(g) => g.next_f64(),
            GeneratorState::Pcg64XslRr(g) => g.next_f64(),
            GeneratorState::Mrg32k3a(g) => g.next_f64(),
            GeneratorState::Pcg32XshRr(g) => {
                let lo = g.next_u32();
                compose_f64(lo, g.next_u32())
            }
            GeneratorState::Philox4x32_10(g) => {
                let lo = g.next_u32();
                compose_f64(lo, g.next_u32())
            }
            GeneratorState::Well19937a(g) => {
                let lo = g.next_u32();
                compose_f64(lo, g.next_u32())
            }
        }
    }

    pub fn fill_u32(&mut self, out: &mut [u32]) -> Result<()> {
        match self {
            GeneratorState::Mt19937(g) => g.fill_u32(out),
            GeneratorState::Pcg64XslRr(g) => g.fill_u32(out),
            GeneratorState::Pcg32XshRr(g) => g.fill_u32(out),
            GeneratorState::Philox4x32_10(g) => g.fill_u32(out),
            GeneratorState::Well19937a(g) => g.fill_u32(out),
            GeneratorState::Mrg32k3a(_) if out.is_empty() => {}
            GeneratorState::Mrg32k3a(_) => {
                return Err(Error::UnsupportedOutput {
                    algo: AlgorithmId::Mrg32k3a,
                    kind: OutputKind::U32,
                })
            }
        }
        Ok(())
    }

    pub fn fill_f64(&mut self, out: &mut [f64]) {
        fn composed(out: &mut [f64], mut next: impl FnMut() -> u32) {
            for v in out {
                let lo = next();
                *v = compose_f64(lo, next());
            }
        }
        match self {
            GeneratorState::Mt19937(g) => g.fill_f64(out),
            GeneratorState::Pcg64XslRr(g) => g.fill_f64(out),
            GeneratorState::Mrg32k3a(g) => g.fill_f64(out),
            GeneratorState::Pcg32XshRr(g) => composed(out, || g.next_u32()),
            GeneratorState::Philox4x32_10(g) => composed(out, || g.next_u32()),
            GeneratorState::Well19937a(g) => composed(out, || g.next_u32()),
        }
    }
}

/// A seeded generator plus the spec that produced it.
///
/// Single-draw calls are deliberately kept out of line: they are the
/// per-number API boundary that the one-by-one benchmark mode measures.
#[derive(Clone, Debug)]
pub struct Stream {
    spec: StreamSpec,
    state: GeneratorState,
    drawn: u64,
    warnings: Vec<SeedWarning>,
}

impl Stream {
    pub(crate) fn from_parts(
        spec: StreamSpec,
        state: GeneratorState,
        warnings: Vec<SeedWarning>,
    ) -> Self {
        Stream {
            spec,
            state,
            drawn: 0,
            warnings,
        }
    }

    pub fn spec(&self) -> &StreamSpec {
        &self.spec
    }

    pub fn state(&self) -> &GeneratorState {
        &self.state
    }

    pub fn algorithm(&self) -> AlgorithmId {
        self.state.algorithm()
    }

    /// Number of outputs produced so far (of either kind).
    pub fn drawn(&self) -> u64 {
        self.drawn
    }

    pub fn warnings(&self) -> &[SeedWarning] {
        &self.warnings
    }

    #[inline(never)]
    pub fn next_u32(&mut self) -> Result<u32> {
        let v = self.state.next_u32()?;
        self.drawn += 1;
        Ok(v)
    }

    #[inline(never)]
    pub fn next_f64(&mut self) -> f64 {
        self.drawn += 1;
        self.state.next_f64()
    }

    /// Next value of the stream's own output kind.
    pub fn next_value(&mut self) -> Result<Value> {
        match self.spec.kind {
            OutputKind::U32 => self.next_u32().map(Value::U32),
            OutputKind::F64 => Ok(Value::F64(self.next_f64())),
        }
    }

    pub fn fill_u32(&mut self, out: &mut [u32]) -> Result<()> {
        self.state.fill_u32(out)?;
        self.drawn += out.len() as u64;
        Ok(())
    }

    pub fn fill_f64(&mut self, out: &mut [f64]) {
        self.state.fill_f64(out);
        self.drawn += out.len() as u64;
    }

    /// `n` values in one call; identical to `n` single draws.
    pub fn next_block(&mut self, n: usize, kind: OutputKind) -> Result<Block> {
        match kind {
            OutputKind::U32 => {
                let mut buf = vec![0u32; n];
                self.fill_u32(&mut buf)?;
                Ok(Block::U32(buf))
            }
            OutputKind::F64 => {
                let mut buf = vec![0f64; n];
                self.fill_f64(&mut buf);
                Ok(Block::F64(buf))
            }
        }
    }
}
