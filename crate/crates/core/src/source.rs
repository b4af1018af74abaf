//! Sequential value sources: generator streams, stream files, in-memory
//! buffers and a few degenerate sources used as negative controls.

use crate::error::{Error, Result};
use crate::generators::{Block, OutputKind, Stream, Value};

/// Anything that yields values of one kind, in order.
pub trait ValueSource {
    fn kind(&self) -> OutputKind;

    /// Next value, or `Error::Exhausted` once a finite source runs dry.
    fn next_value(&mut self) -> Result<Value>;

    /// Values yielded so far.
    fn consumed(&self) -> u64;
}

impl<S: ValueSource + ?Sized> ValueSource for &mut S {
    fn kind(&self) -> OutputKind {
        (**self).kind()
    }

    fn next_value(&mut self) -> Result<Value> {
        (**self).next_value()
    }

    fn consumed(&self) -> u64 {
        (**self).consumed()
    }
}

impl<S: ValueSource + ?Sized> ValueSource for Box<S> {
    fn kind(&self) -> OutputKind {
        (**self).kind()
    }

    fn next_value(&mut self) -> Result<Value> {
        (**self).next_value()
    }

    fn consumed(&self) -> u64 {
        (**self).consumed()
    }
}

impl ValueSource for Stream {
    fn kind(&self) -> OutputKind {
        self.spec().kind
    }

    fn next_value(&mut self) -> Result<Value> {
        Stream::next_value(self)
    }

    fn consumed(&self) -> u64 {
        self.drawn()
    }
}

/// An in-memory buffer.
#[derive(Clone, Debug)]
pub struct BlockSource {
    block: Block,
    pos: usize,
}

impl BlockSource {
    pub fn new(block: Block) -> Self {
        BlockSource { block, pos: 0 }
    }

    pub fn u32s(values: Vec<u32>) -> Self {
        Self::new(Block::U32(values))
    }

    pub fn f64s(values: Vec<f64>) -> Self {
        Self::new(Block::F64(values))
    }
}

impl ValueSource for BlockSource {
    fn kind(&self) -> OutputKind {
        self.block.kind()
    }

    fn next_value(&mut self) -> Result<Value> {
        let v = self.block.get(self.pos).ok_or(Error::Exhausted {
            consumed: self.pos as u64,
        })?;
        self.pos += 1;
        Ok(v)
    }

    fn consumed(&self) -> u64 {
        self.pos as u64
    }
}

/// Repeats one double forever.
#[derive(Clone, Debug)]
pub struct ConstantSource {
    value: f64,
    consumed: u64,
}

impl ConstantSource {
    pub fn new(value: f64) -> Self {
        ConstantSource { value, consumed: 0 }
    }
}

impl ValueSource for ConstantSource {
    fn kind(&self) -> OutputKind {
        OutputKind::F64
    }

    fn next_value(&mut self) -> Result<Value> {
        self.consumed += 1;
        Ok(Value::F64(self.value))
    }

    fn consumed(&self) -> u64 {
        self.consumed
    }
}

/// Emits 0, 1, 2, … as 32-bit words (wrapping).
#[derive(Clone, Debug, Default)]
pub struct CounterSource {
    next: u32,
    consumed: u64,
}

impl CounterSource {
    pub fn new() -> Self {
        Self::default()
    }
}

impl ValueSource for CounterSource {
    fn kind(&self) -> OutputKind {
        OutputKind::U32
    }

    fn next_value(&mut self) -> Result<Value> {
        let v = self.next;
        self.next = self.next.wrapping_add(1);
        self.consumed += 1;
        Ok(Value::U32(v))
    }

    fn consumed(&self) -> u64 {
        self.consumed
    }
}

/// Repeats one 32-bit word forever (`0xAAAA_AAAA` gives alternating bits).
#[derive(Clone, Debug)]
pub struct RepeatWordSource {
    word: u32,
    consumed: u64,
}

impl RepeatWordSource {
    pub fn new(word: u32) -> Self {
        RepeatWordSource { word, consumed: 0 }
    }

    pub fn alternating_bits() -> Self {
        Self::new(0xAAAA_AAAA)
    }

    pub fn zeros() -> Self {
        Self::new(0)
    }
}

impl ValueSource for RepeatWordSource {
    fn kind(&self) -> OutputKind {
        OutputKind::U32
    }

    fn next_value(&mut self) -> Result<Value> {
        self.consumed += 1;
        Ok(Value::U32(self.word))
    }

    fn consumed(&self) -> u64 {
        self.consumed
    }
}

/// Draws every value from `source` into a buffer of at most `limit` values.
pub fn collect(source: &mut dyn ValueSource, limit: usize) -> Result<Block> {
    match source.kind() {
        OutputKind::U32 => {
            let mut out = Vec::with_capacity(limit);
            for _ in 0..limit {
                match source.next_value()? {
                    Value::U32(v) => out.push(v),
                    other => {
                        return Err(Error::KindMismatch {
                            expected: OutputKind::U32,
                            found: other.kind(),
                        })
                    }
                }
            }
            Ok(Block::U32(out))
        }
        OutputKind::F64 => {
            let mut out = Vec::with_capacity(limit);
            for _ in 0..limit {
                match source.next_value()? {
                    Value::F64(v) => out.push(v),
                    other => {
                        return Err(Error::KindMismatch {
                            expected: OutputKind::F64,
                            found: other.kind(),
                        })
                    }
                }
            }
            Ok(Block::F64(out))
        }
    }
}
