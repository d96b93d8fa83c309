//! Word-packed bit vectors.
//!
//! Bit `i` is the coefficient of `x^i`; within a byte, bit 0 is the least
//! significant bit. This layout is shared by the on-disk column format, so
//! [`Bits::to_le_bytes`] / [`Bits::from_le_bytes`] are bit-exact.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Bits {
    words: Vec<u64>,
    len: usize,
}

impl Bits {
    pub fn zeros(len: usize) -> Self {
        Bits {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    /// Builds a vector of `len` bits with the listed positions set.
    pub fn from_ones(len: usize, ones: &[usize]) -> Self {
        let mut b = Bits::zeros(len);
        for &i in ones {
            b.set(i, true);
        }
        b
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, v: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % 64);
        if v {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    #[inline]
    pub fn toggle(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &Bits) -> Result<()> {
        if self.len != other.len {
            return Err(Error::LengthMismatch {
                left: self.len,
                right: other.len,
            });
        }
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Indices of set bits, ascending.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + b)
                }
            })
        })
    }

    /// Cyclic left rotation: bit `i` moves to `(i + e) mod len`.
    pub fn rotated(&self, e: usize) -> Bits {
        if self.len == 0 {
            return self.clone();
        }
        let e = e % self.len;
        if e == 0 {
            return self.clone();
        }
        let mut out = Bits::zeros(self.len);
        for i in self.ones() {
            let j = i + e;
            out.toggle(if j >= self.len { j - self.len } else { j });
        }
        out
    }

    /// Packs to `ceil(len/8)` bytes, least-significant bit first.
    pub fn to_le_bytes(&self) -> Vec<u8> {
        let mut out = vec![0u8; self.len.div_ceil(8)];
        for (wi, &w) in self.words.iter().enumerate() {
            for (bi, byte) in w.to_le_bytes().iter().enumerate() {
                let pos = wi * 8 + bi;
                if pos < out.len() {
                    out[pos] = *byte;
                }
            }
        }
        out
    }

    /// Unpacks `len` bits from `ceil(len/8)` bytes; slack bits in the last
    /// byte must be zero.
    pub fn from_le_bytes(bytes: &[u8], len: usize) -> Result<Bits> {
        if bytes.len() != len.div_ceil(8) {
            return Err(Error::LengthMismatch {
                left: bytes.len(),
                right: len.div_ceil(8),
            });
        }
        let mut b = Bits::zeros(len);
        for (pos, &byte) in bytes.iter().enumerate() {
            b.words[pos / 8] |= (byte as u64) << (8 * (pos % 8));
        }
        if len % 64 != 0 {
            let tail = b.words.last().copied().unwrap_or(0);
            if tail >> (len % 64) != 0 {
                return Err(Error::TrailingBits { len });
            }
        }
        Ok(b)
    }
}

impl fmt::Debug for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bits[{}]{{", self.len)?;
        for (n, i) in self.ones().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn set_get_toggle() {
        let mut b = Bits::zeros(70);
        b.set(0, true);
        b.set(69, true);
        b.toggle(69);
        assert!(b.get(0));
        assert!(!b.get(69));
        assert_eq!(b.count_ones(), 1);
    }

    #[test]
    fn xor_and_zero() {
        let a = Bits::from_ones(12, &[0, 3, 11]);
        let mut c = a.clone();
        c.xor_assign(&a).unwrap();
        assert!(c.is_zero());
        assert!(a.clone().xor_assign(&Bits::zeros(13)).is_err());
    }

    #[test]
    fn rotate_identity_and_cycle() {
        let a = Bits::from_ones(12, &[0, 1, 5]);
        assert_eq!(a.rotated(0), a);
        assert_eq!(a.rotated(12), a);
        assert_eq!(a.rotated(2), Bits::from_ones(12, &[2, 3, 7]));
        assert_eq!(a.rotated(11), Bits::from_ones(12, &[11, 0, 4]));
    }

    #[test]
    fn le_bytes_round_trip_slack() {
        // 18 bits -> 3 bytes with 6 slack bits.
        let a = Bits::from_ones(18, &[0, 7, 8, 17]);
        let bytes = a.to_le_bytes();
        assert_eq!(bytes.len(), 3);
        assert_eq!(Bits::from_le_bytes(&bytes, 18).unwrap(), a);
        // Slack bits must be rejected.
        let mut bad = bytes.clone();
        bad[2] |= 0x80;
        assert!(Bits::from_le_bytes(&bad, 18).is_err());
    }

    proptest! {
        #[test]
        fn rotate_composes(len in 1usize..200, a in 0usize..400, b in 0usize..400, seed: u64) {
            let mut bits = Bits::zeros(len);
            let mut s = seed;
            for i in 0..len {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                bits.set(i, s >> 63 == 1);
            }
            prop_assert_eq!(bits.rotated(a).rotated(b), bits.rotated((a + b) % len));
            prop_assert_eq!(bits.rotated(a).count_ones(), bits.count_ones());
        }

        #[test]
        fn bytes_round_trip(len in 1usize..200, seed: u64) {
            let mut bits = Bits::zeros(len);
            let mut s = seed;
            for i in 0..len {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                bits.set(i, s >> 63 == 1);
            }
            prop_assert_eq!(Bits::from_le_bytes(&bits.to_le_bytes(), len).unwrap(), bits);
        }
    }
}
