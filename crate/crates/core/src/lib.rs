//! A laboratory for pseudo-random number generators.
//!
//! - [`generators`]: bit-exact MT19937, PCG64 XSL-RR, PCG32 XSH-RR,
//!   Philox4x32-10, MRG32k3a and WELL19937a behind one [`Stream`] type.
//! - [`seeding`]: seed → state expansion per reference implementation.
//! - [`streamio`]: raw little-endian stream files and text samples.
//! - [`stattests`]: a desk-scale battery of eight statistical test families.
//! - [`bench`]: one-by-one vs block throughput with 95% confidence intervals.
//! - [`energy`]: powercap/RAPL energy metering with a simulated backend.
//! - [`repro`]: bitwise stream comparison and golden-vector conformance.

pub mod bench;
pub mod cli;
pub mod energy;
pub mod error;
pub mod generators;
pub mod repro;
pub mod seeding;
pub mod source;
pub mod stattests;
pub mod streamio;

pub use error::{Error, Result};
pub use generators::{AlgorithmId, Block, GeneratorState, OutputKind, Stream, Value};
pub use seeding::{expand_seed, make_stream, GenerationMode, SeedValue, StreamSpec};
pub use source::ValueSource;
