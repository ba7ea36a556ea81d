//! `string(m)`: the index `m >= 1` written as the big-endian binary of
//! `m - 1` in exactly `⌈log2 m⌉` bits.
//!
//! For `m >= 2` the value `m - 1` has bit length exactly `⌈log2 m⌉`, so every
//! non-empty codeword starts with a one and the single bit `[0]` can only ever
//! be the flag.

use std::fmt;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct BitString {
    bits: Vec<bool>,
}

impl BitString {
    pub fn new(bits: Vec<bool>) -> Self {
        BitString { bits }
    }

    /// The one-bit message `[0]`.
    pub fn flag() -> Self {
        BitString { bits: vec![false] }
    }

    pub fn is_flag(&self) -> bool {
        self.bits == [false]
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

impl TryFrom<String> for BitString {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::MalformedMessage(format!("bit character {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(BitString::new)
    }
}

impl From<BitString> for String {
    fn from(b: BitString) -> Self {
        b.to_string()
    }
}

/// `⌈log2 m⌉` for `m >= 1`.
pub fn index_length(m: u64) -> u32 {
    if m <= 1 {
        0
    } else {
        64 - (m - 1).leading_zeros()
    }
}

pub fn string_encode(m: u64) -> Result<BitString> {
    if m == 0 {
        return Err(Error::Domain("message indices start at 1".into()));
    }
    let len = index_length(m);
    let v = m - 1;
    Ok(BitString {
        bits: (0..len).rev().map(|i| (v >> i) & 1 == 1).collect(),
    })
}

pub fn string_decode(b: &BitString) -> Result<u64> {
    if b.is_flag() {
        return Err(Error::MalformedMessage("[0] is the flag, not an index".into()));
    }
    if b.is_empty() {
        return Ok(1);
    }
    if b.len() > 64 {
        return Err(Error::MalformedMessage(format!("{} bits do not fit an index", b.len())));
    }
    if !b.bits[0] {
        return Err(Error::MalformedMessage(format!(
            "{b:?}: a {}-bit index must start with 1",
            b.len()
        )));
    }
    let v = b.bits.iter().fold(0u64, |acc, &bit| (acc << 1) | bit as u64);
    // len 64 with all ones would overflow m = v + 1
    v.checked_add(1)
        .ok_or_else(|| Error::MalformedMessage("index overflows u64".into()))
}

/// Writes one message as a 32-bit big-endian bit count followed by the bits
/// packed MSB-first and zero-padded to a byte boundary.
pub fn write_message<W: Write>(w: &mut W, msg: &BitString) -> Result<()> {
    let count = u32::try_from(msg.len())
        .map_err(|_| Error::MalformedMessage("message longer than 2^32 bits".into()))?;
    w.write_all(&count.to_be_bytes())?;
    let mut bytes = vec![0u8; msg.len().div_ceil(8)];
    for (i, &bit) in msg.bits.iter().enumerate() {
        if bit {
            bytes[i / 8] |= 0x80 >> (i % 8);
        }
    }
    w.write_all(&bytes)?;
    Ok(())
}

/// Reads one message written by [`write_message`]; `Ok(None)` at a clean end
/// of input.
pub fn read_message<R: Read>(r: &mut R) -> Result<Option<BitString>> {
    let mut head = [0u8; 4];
    let mut got = 0;
    while got < 4 {
        let k = r.read(&mut head[got..])?;
        if k == 0 {
            if got == 0 {
                return Ok(None);
            }
            return Err(Error::MalformedMessage("truncated length prefix".into()));
        }
        got += k;
    }
    let count = u32::from_be_bytes(head) as usize;
    let mut bytes = vec![0u8; count.div_ceil(8)];
    r.read_exact(&mut bytes)
        .map_err(|_| Error::MalformedMessage("truncated payload".into()))?;
    let bits = (0..count)
        .map(|i| bytes[i / 8] & (0x80 >> (i % 8)) != 0)
        .collect();
    Ok(Some(BitString { bits }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(s: &str) -> BitString {
        BitString::try_from(s.to_string()).unwrap()
    }

    #[test]
    fn encode_examples() {
        assert!(string_encode(1).unwrap().is_empty());
        assert_eq!(string_encode(2).unwrap(), bits("1"));
        assert_eq!(string_encode(5).unwrap(), bits("100"));
        assert_eq!(string_encode(8).unwrap(), bits("111"));
        assert_eq!(string_encode(9).unwrap(), bits("1000"));
        assert!(string_encode(0).is_err());
    }

    #[test]
    fn decode_examples() {
        assert_eq!(string_decode(&BitString::default()).unwrap(), 1);
        assert_eq!(string_decode(&bits("100")).unwrap(), 5);
        assert!(matches!(string_decode(&BitString::flag()), Err(Error::MalformedMessage(_))));
        assert!(string_decode(&bits("01")).is_err());
        assert_eq!(string_decode(&bits(&"1".repeat(63))).unwrap(), 1 << 63);
        assert!(string_decode(&bits(&"1".repeat(64))).is_err());
        assert!(string_decode(&bits(&"1".repeat(65))).is_err());
    }

    #[test]
    fn largest_indices() {
        let m = u64::MAX;
        let b = string_encode(m).unwrap();
        assert_eq!(b.len(), 64);
        assert_eq!(string_decode(&b).unwrap(), m);
    }

    #[test]
    fn wire_format_layout() {
        let mut buf = Vec::new();
        write_message(&mut buf, &bits("1011000011")).unwrap();
        write_message(&mut buf, &BitString::default()).unwrap();
        write_message(&mut buf, &BitString::flag()).unwrap();
        assert_eq!(
            buf,
            [0, 0, 0, 10, 0b1011_0000, 0b1100_0000, 0, 0, 0, 0, 0, 0, 0, 1, 0]
        );
        let mut r = &buf[..];
        assert_eq!(read_message(&mut r).unwrap().unwrap(), bits("1011000011"));
        assert_eq!(read_message(&mut r).unwrap().unwrap(), BitString::default());
        assert!(read_message(&mut r).unwrap().unwrap().is_flag());
        assert!(read_message(&mut r).unwrap().is_none());
        assert!(read_message(&mut &[0u8, 0, 0, 9, 0xff][..]).is_err());
    }

    #[test]
    fn json_as_bit_characters() {
        assert_eq!(serde_json::to_string(&bits("100")).unwrap(), "\"100\"");
        assert!(serde_json::from_str::<BitString>("\"10x\"").is_err());
    }
}
