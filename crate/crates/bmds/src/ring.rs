//! Arithmetic in `R = F2[x]/(1 + x^(p*tau))` and in its ideal `C` of
//! multiples of `1 + x^tau`.
//!
//! The check polynomial `h(x) = 1 + x^tau + ... + x^((p-1)tau)` annihilates
//! `C`, and `e(x) = 1 + h(x)` is the multiplicative identity of `C`. The
//! ring splits as `F2[x]/(1+x^tau) x F2[x]/(h(x))` via [`theta`]/[`phi`],
//! and `C` is isomorphic to `F2[x]/(h(x))`, which is what decoding and MDS
//! certification exploit.

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::poly::Poly;

/// A residue of `F2[x]/(1 + x^(p*tau))`: a dense vector of `p*tau`
/// coefficient bits, index `l` holding the coefficient of `x^l`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RingElement {
    bits: Bits,
}

impl RingElement {
    pub fn zero(modulus_len: usize) -> Self {
        RingElement {
            bits: Bits::zeros(modulus_len),
        }
    }

    pub fn monomial(e: usize, modulus_len: usize) -> Self {
        RingElement {
            bits: Bits::from_ones(modulus_len, &[e % modulus_len]),
        }
    }

    pub fn from_exponents(modulus_len: usize, exps: &[usize]) -> Self {
        let mut bits = Bits::zeros(modulus_len);
        for &e in exps {
            bits.toggle(e % modulus_len);
        }
        RingElement { bits }
    }

    pub fn from_bits(bits: Bits) -> Self {
        RingElement { bits }
    }

    /// Embeds a polynomial of degree `< modulus_len`.
    pub fn from_poly(p: &Poly, modulus_len: usize) -> Self {
        RingElement {
            bits: p.to_bits(modulus_len),
        }
    }

    pub fn bits(&self) -> &Bits {
        &self.bits
    }

    pub fn into_bits(self) -> Bits {
        self.bits
    }

    pub fn modulus_len(&self) -> usize {
        self.bits.len()
    }

    pub fn coeff(&self, i: usize) -> bool {
        self.bits.get(i)
    }

    pub fn is_zero(&self) -> bool {
        self.bits.is_zero()
    }

    pub fn to_poly(&self) -> Poly {
        Poly::from_bits(&self.bits)
    }

    /// Term-wise addition (XOR).
    pub fn add(&self, other: &RingElement) -> Result<RingElement> {
        let mut out = self.clone();
        out.bits.xor_assign(&other.bits)?;
        Ok(out)
    }

    /// Product modulo `1 + x^(p*tau)`: cyclic convolution of the
    /// coefficient vectors, implemented as rotate-and-XOR.
    pub fn mul(&self, other: &RingElement) -> Result<RingElement> {
        if self.modulus_len() != other.modulus_len() {
            return Err(Error::LengthMismatch {
                left: self.modulus_len(),
                right: other.modulus_len(),
            });
        }
        let mut acc = Bits::zeros(self.modulus_len());
        for e in self.bits.ones() {
            acc.xor_assign(&other.bits.rotated(e))?;
        }
        Ok(RingElement { bits: acc })
    }

    /// Multiplication by `x^e` (any integer `e`, reduced mod `p*tau`):
    /// a cyclic shift of the coefficients.
    pub fn shifted(&self, e: i64) -> RingElement {
        let n = self.modulus_len() as i64;
        RingElement {
            bits: self.bits.rotated(e.rem_euclid(n) as usize),
        }
    }
}

/// Fixed `(p, tau)` context: the check polynomial `h(x)` and the ideal
/// identity `e(x)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RingContext {
    p: usize,
    tau: usize,
    check_poly: RingElement,
    identity: RingElement,
}

impl RingContext {
    /// `p` must be an odd prime and `tau >= 1`.
    pub fn new(p: usize, tau: usize) -> Result<RingContext> {
        if !crate::code::is_prime(p) || p == 2 {
            return Err(Error::NotPrime(p));
        }
        if tau == 0 {
            return Err(Error::InvalidParams {
                violations: vec!["tau must be positive".into()],
            });
        }
        let len = p.checked_mul(tau).ok_or_else(|| Error::InvalidParams {
            violations: vec![format!("p*tau overflows: p={p}, tau={tau}")],
        })?;
        let check: Vec<usize> = (0..p).map(|i| i * tau).collect();
        let identity: Vec<usize> = (1..p).map(|i| i * tau).collect();
        Ok(RingContext {
            p,
            tau,
            check_poly: RingElement::from_exponents(len, &check),
            identity: RingElement::from_exponents(len, &identity),
        })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn tau(&self) -> usize {
        self.tau
    }

    pub fn modulus_len(&self) -> usize {
        self.p * self.tau
    }

    /// Stored bits per column: `(p-1)*tau`.
    pub fn stored_len(&self) -> usize {
        (self.p - 1) * self.tau
    }

    /// `h(x) = 1 + x^tau + ... + x^((p-1)tau)`.
    pub fn check_poly(&self) -> &RingElement {
        &self.check_poly
    }

    /// `e(x) = x^tau + ... + x^((p-1)tau) = 1 + h(x)`.
    pub fn identity(&self) -> &RingElement {
        &self.identity
    }

    pub fn check_as_poly(&self) -> Poly {
        self.check_poly.to_poly()
    }
}

/// Membership in the ideal `C`: for every `mu < tau` the `p` coefficients
/// at indices `mu, tau+mu, ..., (p-1)tau+mu` must XOR to zero.
pub fn in_ideal(a: &RingElement, ctx: &RingContext) -> bool {
    assert_eq!(a.modulus_len(), ctx.modulus_len(), "length mismatch");
    for mu in 0..ctx.tau {
        let mut acc = false;
        for m in 0..ctx.p {
            acc ^= a.coeff(m * ctx.tau + mu);
        }
        if acc {
            return false;
        }
    }
    true
}

/// The splitting map: remainders of `a` modulo `1 + x^tau` and modulo
/// `h(x)`.
pub fn theta(a: &RingElement, ctx: &RingContext) -> (Poly, Poly) {
    assert_eq!(a.modulus_len(), ctx.modulus_len(), "length mismatch");
    let f = a.to_poly();
    let binomial = Poly::from_exponents(&[0, ctx.tau]);
    (f.rem(&binomial), f.rem(&ctx.check_as_poly()))
}

/// Inverse of [`theta`]: `(a, b) -> a*h + b*e mod (1 + x^(p*tau))`.
/// Requires `deg a < tau` and `deg b < (p-1)tau`.
pub fn phi(a: &Poly, b: &Poly, ctx: &RingContext) -> RingElement {
    if let Some(d) = a.degree() {
        assert!(d < ctx.tau, "first residue degree {d} >= tau");
    }
    if let Some(d) = b.degree() {
        assert!(d < ctx.stored_len(), "second residue degree {d} too large");
    }
    let len = ctx.modulus_len();
    let ra = RingElement::from_poly(a, len);
    let rb = RingElement::from_poly(b, len);
    let t1 = ra.mul(ctx.check_poly()).expect("same context");
    let t2 = rb.mul(ctx.identity()).expect("same context");
    t1.add(&t2).expect("same context")
}

fn check_binomial_exponent(b: usize, ctx: &RingContext) -> Result<usize> {
    if b == 0 || b >= ctx.modulus_len() {
        return Err(Error::InvalidParams {
            violations: vec![format!(
                "binomial exponent {b} outside [1, {})",
                ctx.modulus_len()
            )],
        });
    }
    if gcd(b, ctx.p) != 1 {
        return Err(Error::NotInvertible { b, p: ctx.p });
    }
    Ok(gcd(b, ctx.tau))
}

pub(crate) fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// The e(x)-inverse of `1 + x^b`: the unique `g` with `(1+x^b) g = e(x)`,
/// given as the sum of `x^(i*b)` over the odd-numbered blocks
/// `i in [m*tau/a, (m+1)tau/a)`, `m = 1, 3, ..., p-2`, where
/// `a = gcd(b, tau)`. Requires `gcd(b, p) = 1`.
pub fn e_inverse_binomial(b: usize, ctx: &RingContext) -> Result<RingElement> {
    let a = check_binomial_exponent(b, ctx)?;
    let len = ctx.modulus_len();
    let block = ctx.tau / a;
    let mut out = Bits::zeros(len);
    let mut m = 1;
    while m <= ctx.p - 2 {
        for i in m * block..(m + 1) * block {
            out.toggle(mod_mul(i, b, len));
        }
        m += 2;
    }
    Ok(RingElement::from_bits(out))
}

#[inline]
pub(crate) fn mod_mul(a: usize, b: usize, m: usize) -> usize {
    ((a as u128 * b as u128) % m as u128) as usize
}

/// Solves `(1 + x^b) g = f` for `f` in the ideal `C`.
///
/// Two phases: the `a = gcd(b, tau)` seed coefficients `g_j` come from the
/// explicit e(x)-inverse sums, then the remaining coefficients follow from
/// `g_(b*l+j) = f_(b*l+j) + g_(b*(l-1)+j)` walking each residue class of
/// `b` once around the cycle.
pub fn divide_by_binomial(f: &RingElement, b: usize, ctx: &RingContext) -> Result<RingElement> {
    divide_by_binomial_counted(f, b, ctx).map(|(g, _)| g)
}

/// [`divide_by_binomial`] with an XOR counter. Under this (naive) schedule
/// the count is exactly `(3*p*tau - tau - 4a)/2`.
pub fn divide_by_binomial_counted(
    f: &RingElement,
    b: usize,
    ctx: &RingContext,
) -> Result<(RingElement, u64)> {
    let a = check_binomial_exponent(b, ctx)?;
    if f.modulus_len() != ctx.modulus_len() {
        return Err(Error::LengthMismatch {
            left: f.modulus_len(),
            right: ctx.modulus_len(),
        });
    }
    if !in_ideal(f, ctx) {
        return Err(Error::NotInIdeal);
    }
    let len = ctx.modulus_len();
    let block = ctx.tau / a;
    let mut xors = 0u64;
    let mut g = Bits::zeros(len);

    // Seed phase: g_j for j < a by the explicit sums over odd blocks.
    for j in 0..a {
        let mut acc = false;
        let mut first = true;
        let mut m = 1;
        while m <= ctx.p - 2 {
            for i in m * block..(m + 1) * block {
                let idx = (j + len - mod_mul(i, b, len) % len) % len;
                if first {
                    acc = f.coeff(idx);
                    first = false;
                } else {
                    acc ^= f.coeff(idx);
                    xors += 1;
                }
            }
            m += 2;
        }
        g.set(j, acc);
    }

    // Iterative phase: walk each residue class once around the cycle.
    let steps = len / a;
    for j in 0..a {
        let mut prev = j;
        for l in 1..steps {
            let idx = (mod_mul(b, l, len) + j) % len;
            g.set(idx, f.coeff(idx) ^ g.get(prev));
            xors += 1;
            prev = idx;
        }
    }

    Ok((RingElement::from_bits(g), xors))
}

/// Closed form for the XOR count of [`divide_by_binomial_counted`].
pub fn binomial_division_xor_count(b: usize, ctx: &RingContext) -> Result<u64> {
    let a = check_binomial_exponent(b, ctx)?;
    Ok(((3 * ctx.modulus_len() - ctx.tau - 4 * a) / 2) as u64)
}
