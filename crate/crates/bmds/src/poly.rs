//! Dense polynomials over F2 of unbounded degree.
//!
//! Used for the residue arithmetic behind decoding and MDS certification:
//! long division, gcd, and modular inverse via the extended Euclidean
//! algorithm. Bit `i` of the backing words is the coefficient of `x^i`.

use std::fmt;

use crate::bits::Bits;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    /// Normalized: the top word is nonzero (zero polynomial is empty).
    words: Vec<u64>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { words: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { words: vec![1] }
    }

    pub fn monomial(e: usize) -> Self {
        let mut words = vec![0; e / 64 + 1];
        words[e / 64] = 1 << (e % 64);
        Poly { words }
    }

    pub fn from_exponents(exps: &[usize]) -> Self {
        let mut p = Poly::zero();
        for &e in exps {
            p.toggle(e);
        }
        p
    }

    pub fn from_bits(bits: &Bits) -> Self {
        let mut p = Poly::zero();
        for i in bits.ones() {
            p.toggle(i);
        }
        p
    }

    /// Low `len` coefficients as a bit vector; panics if the degree is too
    /// large to fit.
    pub fn to_bits(&self, len: usize) -> Bits {
        match self.degree() {
            Some(d) => assert!(d < len, "degree {d} does not fit in {len} bits"),
            None => return Bits::zeros(len),
        }
        let mut b = Bits::zeros(len);
        for e in self.ones() {
            b.set(e, true);
        }
        b
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.words.len() == 1 && self.words[0] == 1
    }

    pub fn degree(&self) -> Option<usize> {
        let w = *self.words.last()?;
        Some((self.words.len() - 1) * 64 + (63 - w.leading_zeros() as usize))
    }

    pub fn coeff(&self, i: usize) -> bool {
        self.words
            .get(i / 64)
            .is_some_and(|w| (w >> (i % 64)) & 1 == 1)
    }

    pub fn toggle(&mut self, e: usize) {
        if e / 64 >= self.words.len() {
            self.words.resize(e / 64 + 1, 0);
        }
        self.words[e / 64] ^= 1 << (e % 64);
        self.normalize();
    }

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

    pub fn term_count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn normalize(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let (long, short) = if self.words.len() >= other.words.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut words = long.words.clone();
        for (a, b) in words.iter_mut().zip(&short.words) {
            *a ^= b;
        }
        let mut p = Poly { words };
        p.normalize();
        p
    }

    /// Multiplies by `x^k`.
    pub fn shl(&self, k: usize) -> Poly {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        let (wk, bk) = (k / 64, k % 64);
        let mut words = vec![0u64; self.words.len() + wk + 1];
        for (i, &w) in self.words.iter().enumerate() {
            words[i + wk] |= w << bk;
            if bk > 0 {
                words[i + wk + 1] |= w >> (64 - bk);
            }
        }
        let mut p = Poly { words };
        p.normalize();
        p
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut acc = Poly::zero();
        for e in self.ones() {
            acc = acc.add(&other.shl(e));
        }
        acc
    }

    /// Long division: returns `(q, r)` with `self = q*divisor + r` and
    /// `deg r < deg divisor`. Panics on a zero divisor.
    pub fn divmod(&self, divisor: &Poly) -> (Poly, Poly) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let mut r = self.clone();
        let mut q = Poly::zero();
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let k = rd - dd;
            q.toggle(k);
            r = r.add(&divisor.shl(k));
        }
        (q, r)
    }

    pub fn rem(&self, modulus: &Poly) -> Poly {
        self.divmod(modulus).1
    }

    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a
    }

    /// Inverse of `self` modulo `m`, or `None` when gcd(self, m) != 1.
    pub fn inverse_mod(&self, m: &Poly) -> Option<Poly> {
        // Extended Euclid on (m, self mod m), tracking only the self-cofactor.
        let mut r0 = m.clone();
        let mut r1 = self.rem(m);
        let mut t0 = Poly::zero();
        let mut t1 = Poly::one();
        while !r1.is_zero() {
            let (q, r) = r0.divmod(&r1);
            let t = t0.add(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            t0 = t1;
            t1 = t;
        }
        if r0.is_one() {
            Some(t0.rem(m))
        } else {
            None
        }
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (n, e) in self.ones().enumerate() {
            if n > 0 {
                write!(f, "+")?;
            }
            match e {
                0 => write!(f, "1")?,
                1 => write!(f, "x")?,
                _ => write!(f, "x^{e}")?,
            }
        }
        Ok(())
    }
}
