//! Packed bit strings.
//!
//! Bits are stored MSB-first in a byte vector, which is also the payload
//! layout of the packed codeword file format, so serialization is a copy.
//! Unused low bits of the final byte are kept at zero; that invariant makes
//! the derived equality and hashing correct.

use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitString {
    bytes: Vec<u8>,
    len: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BitStringError {
    /// Text form contained something other than '0' or '1'.
    BadChar { position: usize, found: char },
    /// Packed record shorter than its declared bit count.
    Truncated,
}

impl fmt::Display for BitStringError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BitStringError::BadChar { position, found } => {
                write!(
                    f,
                    "expected '0' or '1' at position {position}, found {found:?}"
                )
            }
            BitStringError::Truncated => {
                write!(f, "packed record ends before its declared bit count")
            }
        }
    }
}

impl std::error::Error for BitStringError {}

impl BitString {
    pub fn new() -> BitString {
        BitString::default()
    }

    pub fn with_capacity(bits: usize) -> BitString {
        BitString {
            bytes: Vec::with_capacity(bits.div_ceil(8)),
            len: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn push(&mut self, bit: bool) {
        if self.len % 8 == 0 {
            self.bytes.push(0);
        }
        if bit {
            *self.bytes.last_mut().expect("byte just ensured") |= 0x80 >> (self.len % 8);
        }
        self.len += 1;
    }

    /// Append `count` copies of `bit`.
    pub fn push_run(&mut self, bit: bool, count: usize) {
        for _ in 0..count {
            self.push(bit);
        }
    }

    pub fn get(&self, index: usize) -> Option<bool> {
        if index < self.len {
            Some(self.bytes[index / 8] & (0x80 >> (index % 8)) != 0)
        } else {
            None
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i).expect("index in range"))
    }

    pub fn append(&mut self, other: &BitString) {
        for bit in other.iter() {
            self.push(bit);
        }
    }

    /// Parse a run of '0'/'1' characters.
    pub fn from_text(text: &str) -> Result<BitString, BitStringError> {
        let mut bits = BitString::with_capacity(text.len());
        for (position, ch) in text.chars().enumerate() {
            match ch {
                '0' => bits.push(false),
                '1' => bits.push(true),
                found => return Err(BitStringError::BadChar { position, found }),
            }
        }
        Ok(bits)
    }

    pub fn to_text(&self) -> String {
        self.iter().map(|b| if b { '1' } else { '0' }).collect()
    }

    /// Adopt `bit_len` bits from a packed buffer. Padding bits beyond
    /// `bit_len` in the final byte are cleared rather than trusted.
    pub fn from_bytes(bytes: &[u8], bit_len: usize) -> Result<BitString, BitStringError> {
        let need = bit_len.div_ceil(8);
        if bytes.len() < need {
            return Err(BitStringError::Truncated);
        }
        let mut owned = bytes[..need].to_vec();
        if bit_len % 8 != 0 {
            let keep = !(0xffu8 >> (bit_len % 8));
            *owned.last_mut().expect("bit_len > 0 here") &= keep;
        }
        Ok(BitString {
            bytes: owned,
            len: bit_len,
        })
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn is_prefix_of(&self, other: &BitString) -> bool {
        self.len <= other.len && self.iter().zip(other.iter()).all(|(a, b)| a == b)
    }

    /// Packed record: 8-byte little-endian bit count, then the payload
    /// bytes MSB-first with the final byte zero-padded.
    pub fn to_packed_record(&self) -> Vec<u8> {
        let mut record = Vec::with_capacity(8 + self.bytes.len());
        record.extend_from_slice(&(self.len as u64).to_le_bytes());
        record.extend_from_slice(&self.bytes);
        record
    }

    /// Read one packed record from the front of `bytes`; returns the bit
    /// string and the number of bytes consumed.
    pub fn from_packed_record(bytes: &[u8]) -> Result<(BitString, usize), BitStringError> {
        if bytes.len() < 8 {
            return Err(BitStringError::Truncated);
        }
        let declared = u64::from_le_bytes(bytes[..8].try_into().expect("eight bytes"));
        let bit_len = usize::try_from(declared).map_err(|_| BitStringError::Truncated)?;
        let bits = BitString::from_bytes(&bytes[8..], bit_len)?;
        Ok((bits, 8 + bit_len.div_ceil(8)))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for bit in self.iter() {
            f.write_str(if bit { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromIterator<bool> for BitString {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> BitString {
        let mut bits = BitString::new();
        for bit in iter {
            bits.push(bit);
        }
        bits
    }
}

/// Sequential reader over a [`BitString`].
pub struct BitReader<'a> {
    bits: &'a BitString,
    pos: usize,
}

impl<'a> BitReader<'a> {
    pub fn new(bits: &'a BitString) -> BitReader<'a> {
        BitReader { bits, pos: 0 }
    }

    /// Bits consumed so far.
    pub fn pos(&self) -> usize {
        self.pos
    }

    pub fn remaining(&self) -> usize {
        self.bits.len() - self.pos
    }

    /// Next bit, or `None` once the string is exhausted.
    pub fn read_bit(&mut self) -> Option<bool> {
        let bit = self.bits.get(self.pos)?;
        self.pos += 1;
        Some(bit)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn push_and_get_round_trip() {
        let pattern = [
            true, false, false, true, true, true, false, true, true, false,
        ];
        let mut bits = BitString::new();
        for &b in &pattern {
            bits.push(b);
        }
        assert_eq!(bits.len(), 10);
        for (i, &b) in pattern.iter().enumerate() {
            assert_eq!(bits.get(i), Some(b));
        }
        assert_eq!(bits.get(10), None);
        assert_eq!(bits.as_bytes(), &[0b1001_1101, 0b1000_0000]);
    }

    #[test]
    fn text_round_trip() {
        for text in ["", "0", "1", "0110001", "1011001001000001101"] {
            let bits = BitString::from_text(text).unwrap();
            assert_eq!(bits.len(), text.len());
            assert_eq!(bits.to_text(), text);
            assert_eq!(bits.to_string(), text);
        }
        assert_eq!(
            BitString::from_text("0120"),
            Err(BitStringError::BadChar {
                position: 2,
                found: '2'
            })
        );
        assert_eq!(
            BitString::from_text("01 0"),
            Err(BitStringError::BadChar {
                position: 2,
                found: ' '
            })
        );
    }

    #[test]
    fn equality_ignores_padding_history() {
        let a = BitString::from_text("101").unwrap();
        let mut b = BitString::new();
        b.push(true);
        b.push(false);
        b.push(true);
        assert_eq!(a, b);
        let longer = BitString::from_text("1010").unwrap();
        assert_ne!(a, longer);
    }

    #[test]
    fn append_and_run() {
        let mut bits = BitString::from_text("11").unwrap();
        bits.push_run(false, 3);
        bits.append(&BitString::from_text("101").unwrap());
        assert_eq!(bits.to_text(), "11000101");
    }

    #[test]
    fn prefix_relation() {
        let whole = BitString::from_text("10110").unwrap();
        assert!(BitString::from_text("101").unwrap().is_prefix_of(&whole));
        assert!(BitString::new().is_prefix_of(&whole));
        assert!(whole.is_prefix_of(&whole));
        assert!(!BitString::from_text("100").unwrap().is_prefix_of(&whole));
        assert!(!BitString::from_text("101101").unwrap().is_prefix_of(&whole));
    }

    #[test]
    fn packed_record_round_trip() {
        for text in ["", "1", "01100011000", "1111111100000000111"] {
            let bits = BitString::from_text(text).unwrap();
            let record = bits.to_packed_record();
            assert_eq!(record.len(), 8 + text.len().div_ceil(8));
            let (back, consumed) = BitString::from_packed_record(&record).unwrap();
            assert_eq!(back, bits);
            assert_eq!(consumed, record.len());
        }
    }

    #[test]
    fn packed_record_layout_is_fixed() {
        let bits = BitString::from_text("101000111").unwrap();
        let record = bits.to_packed_record();
        assert_eq!(&record[..8], &9u64.to_le_bytes());
        assert_eq!(&record[8..], &[0b1010_0011, 0b1000_0000]);
    }

    #[test]
    fn packed_record_rejects_truncation() {
        let record = BitString::from_text("110011001")
            .unwrap()
            .to_packed_record();
        assert_eq!(
            BitString::from_packed_record(&record[..7]),
            Err(BitStringError::Truncated)
        );
        assert_eq!(
            BitString::from_packed_record(&record[..record.len() - 1]),
            Err(BitStringError::Truncated)
        );
    }

    #[test]
    fn from_bytes_clears_padding() {
        let noisy = BitString::from_bytes(&[0xff, 0xff], 10).unwrap();
        assert_eq!(noisy.to_text(), "1111111111");
        let clean = BitString::from_text("1111111111").unwrap();
        assert_eq!(noisy, clean);
        assert_eq!(noisy.as_bytes(), clean.as_bytes());
    }

    #[test]
    fn reader_walks_and_reports_position() {
        let bits = BitString::from_text("1101").unwrap();
        let mut r = BitReader::new(&bits);
        assert_eq!(r.remaining(), 4);
        assert_eq!(r.read_bit(), Some(true));
        assert_eq!(r.read_bit(), Some(true));
        assert_eq!(r.read_bit(), Some(false));
        assert_eq!(r.pos(), 3);
        assert_eq!(r.read_bit(), Some(true));
        assert_eq!(r.read_bit(), None);
        assert_eq!(r.pos(), 4);
    }

    #[test]
    fn collects_from_iterator() {
        let bits: BitString = [true, false, true].into_iter().collect();
        assert_eq!(bits.to_text(), "101");
    }
}
