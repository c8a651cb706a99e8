use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

/// Fixed-length bit sequence, filled MSB-first.
///
/// Bit `k` of the sequence lives in word `k / 64` at position `63 - k % 64`,
/// so a field of any width up to 64 is appended or read with at most two
/// word operations.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BitString {
    words: Vec<u64>,
    len: usize,
}

impl BitString {
    pub fn new() -> Self {
        BitString::default()
    }

    pub fn with_capacity(bits: usize) -> Self {
        BitString {
            words: Vec::with_capacity(bits.div_ceil(64)),
            len: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Appends the low `width` bits of `value`, most significant first.
    ///
    /// Panics if `width > 64` or `value` does not fit in `width` bits.
    pub fn push(&mut self, value: u64, width: u32) {
        assert!(width <= 64, "field width {width} exceeds 64");
        assert!(
            width == 64 || value >> width == 0,
            "value {value} does not fit in {width} bits"
        );
        if width == 0 {
            return;
        }
        let off = (self.len % 64) as u32;
        if off == 0 {
            self.words.push(0);
        }
        let free = 64 - off;
        let last = self.words.last_mut().expect("word pushed above");
        if width <= free {
            *last |= value << (free - width);
        } else {
            let spill = width - free;
            *last |= value >> spill;
            self.words.push(value << (64 - spill));
        }
        self.len += width as usize;
    }

    /// Reads the `width`-bit field starting at bit `pos`.
    ///
    /// Panics if the field runs past the end.
    pub fn read(&self, pos: usize, width: u32) -> u64 {
        assert!(width <= 64);
        assert!(pos + width as usize <= self.len, "field out of range");
        if width == 0 {
            return 0;
        }
        let w = pos / 64;
        let off = (pos % 64) as u32;
        let avail = 64 - off;
        let first = self.words[w] << off;
        if width <= avail {
            first >> (64 - width)
        } else {
            let spill = width - avail;
            (first >> (64 - width)) | (self.words[w + 1] >> (64 - spill))
        }
    }

    pub fn get(&self, pos: usize) -> bool {
        self.read(pos, 1) == 1
    }

    /// MSB-first packing into bytes, zero-padded at the tail.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out: Vec<u8> = self.words.iter().flat_map(|w| w.to_be_bytes()).collect();
        out.truncate(self.len.div_ceil(8));
        out
    }

    /// Inverse of [`BitString::to_bytes`]; `len` comes from the configuration.
    pub fn from_bytes(bytes: &[u8], len: usize) -> Result<Self> {
        if bytes.len() != len.div_ceil(8) {
            return Err(Error::MalformedCodeword(format!(
                "{} bytes cannot hold exactly {len} bits",
                bytes.len()
            )));
        }
        let mut words: Vec<u64> = bytes
            .chunks(8)
            .map(|chunk| {
                let mut buf = [0u8; 8];
                buf[..chunk.len()].copy_from_slice(chunk);
                u64::from_be_bytes(buf)
            })
            .collect();
        words.truncate(len.div_ceil(64));
        let tail = (len % 64) as u32;
        if tail != 0 {
            let last = *words.last().expect("len > 0 when tail != 0");
            if last << tail != 0 {
                return Err(Error::MalformedCodeword("nonzero padding bits".into()));
            }
        }
        Ok(BitString { words, len })
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.len)
            .map(|k| if self.get(k) { '1' } else { '0' })
            .collect();
        f.write_str(&s)
    }
}

/// Parses a `'0'`/`'1'` string; ASCII whitespace between digits is ignored.
impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut bits = BitString::with_capacity(s.len());
        for ch in s.chars().filter(|c| !c.is_ascii_whitespace()) {
            match ch {
                '0' => bits.push(0, 1),
                '1' => bits.push(1, 1),
                other => {
                    return Err(Error::Parse(format!(
                        "invalid codeword character {other:?}"
                    )))
                }
            }
        }
        Ok(bits)
    }
}
