//! Advice tape with exact bit accounting, and the self-delimiting integer code.
//!
//! A codeword for `x` has three parts, all written most-significant bit first:
//!
//! 1. the bit length of part 2 in unary (`1…1`), terminated by a `0`;
//! 2. the bit length of part 3 in binary;
//! 3. `x` in binary, `⌈log(x+1)⌉` bits (empty for `x = 0`).
//!
//! `enc(5)` is therefore `110 11 101`.

use std::fmt;
use std::str::FromStr;

use crate::error::TapeError;

/// Number of bits of `x` in binary, `⌈log2(x+1)⌉`; zero for zero.
#[inline]
pub fn bit_len(x: u64) -> u32 {
    u64::BITS - x.leading_zeros()
}

/// Length of `enc(x)` in bits.
pub fn enc_len(x: u64) -> usize {
    let last = bit_len(x);
    let middle = bit_len(u64::from(last));
    (middle as usize + 1) + middle as usize + last as usize
}

/// The self-delimiting codeword for `x`.
pub fn enc(x: u64) -> Vec<bool> {
    let mut out = Vec::with_capacity(enc_len(x));
    push_enc(&mut out, x);
    out
}

fn push_fixed(out: &mut Vec<bool>, value: u64, width: u32) {
    for i in (0..width).rev() {
        out.push((value >> i) & 1 == 1);
    }
}

fn push_enc(out: &mut Vec<bool>, x: u64) {
    let last = bit_len(x);
    let middle = bit_len(u64::from(last));
    out.extend(std::iter::repeat_n(true, middle as usize));
    out.push(false);
    push_fixed(out, u64::from(last), middle);
    push_fixed(out, x, last);
}

/// Decodes one codeword at the tape cursor.
pub fn dec(tape: &mut AdviceTape) -> Result<u64, TapeError> {
    let mut middle = 0u64;
    while tape.read_bit()? {
        middle += 1;
    }
    // 64 fits in 7 bits; longer middle parts cannot describe a u64.
    if middle > 7 {
        return Err(TapeError::Overflow(middle));
    }
    let last = tape.read_fixed(middle as u32)?;
    if last > 64 {
        return Err(TapeError::Overflow(last));
    }
    tape.read_fixed(last as u32)
}

/// A finite prefix of the conceptually infinite advice tape.
///
/// The oracle appends bits; the online player reads them front to back.
/// `high_water` counts every bit consumed, the advice complexity of a run.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AdviceTape {
    bits: Vec<bool>,
    cursor: usize,
    high_water: usize,
}

impl AdviceTape {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        Self {
            bits,
            cursor: 0,
            high_water: 0,
        }
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Number of bits written by the oracle.
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn cursor(&self) -> usize {
        self.cursor
    }

    pub fn high_water(&self) -> usize {
        self.high_water
    }

    /// True once every written bit has been consumed.
    pub fn is_exhausted(&self) -> bool {
        self.cursor == self.bits.len()
    }

    /// Rewinds the read position without touching the written bits.
    pub fn rewind(&mut self) {
        self.cursor = 0;
        self.high_water = 0;
    }

    pub fn push_bit(&mut self, bit: bool) {
        self.bits.push(bit);
    }

    /// Appends the low `width` bits of `value`, most significant first.
    pub fn push_fixed(&mut self, value: u64, width: u32) {
        debug_assert!(width == 64 || value < (1u64 << width));
        push_fixed(&mut self.bits, value, width);
    }

    pub fn push_enc(&mut self, x: u64) {
        push_enc(&mut self.bits, x);
    }

    pub fn read_bit(&mut self) -> Result<bool, TapeError> {
        let bit = *self.bits.get(self.cursor).ok_or(TapeError::Underrun {
            needed: self.cursor + 1,
            written: self.bits.len(),
        })?;
        self.cursor += 1;
        self.high_water = self.high_water.max(self.cursor);
        Ok(bit)
    }

    /// Reads a `width`-bit unsigned integer; `width = 0` reads nothing.
    pub fn read_fixed(&mut self, width: u32) -> Result<u64, TapeError> {
        assert!(width <= 64, "fixed-width reads are limited to 64 bits");
        let end = self.cursor + width as usize;
        if end > self.bits.len() {
            return Err(TapeError::Underrun {
                needed: end,
                written: self.bits.len(),
            });
        }
        let mut value = 0u64;
        for _ in 0..width {
            value = (value << 1) | u64::from(self.read_bit()?);
        }
        Ok(value)
    }

    pub fn read_enc(&mut self) -> Result<u64, TapeError> {
        dec(self)
    }
}

impl fmt::Display for AdviceTape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for AdviceTape {
    type Err = TapeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(TapeError::BadChar(other)),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(AdviceTape::from_bits)
    }
}

/// Renders a bit slice as a `0`/`1` string.
pub fn bits_to_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}
