//! Binary MDS array codes over the quotient ring `F2[x]/(1 + x^(p*tau))`.
//!
//! Two code families are provided. Both store `(p-1)*tau` bits per column
//! and tolerate any `r` column erasures once certified MDS:
//!
//! * `C1(k, r, d, p)` with an odd number of parity columns, built from a
//!   `k x r` encoding matrix of monomials. A single information column is
//!   rebuilt from `d = k + (r-1)/2` helper columns with far less traffic
//!   than a full decode.
//! * `C2(k, r, d, p)` with an even number of parity columns, built from an
//!   `r x (k+r)` check matrix of monomials. Any single column (data or
//!   coded) is rebuilt from `d = k + r/2 - 1` helpers.
//!
//! All coding work reduces to cyclic shifts and XORs of bit vectors; the
//! only heavier machinery is polynomial gcd arithmetic used for decoding
//! and for certifying the MDS property.
//!
//! Module map:
//!
//! * [`bits`] - word-packed bit vectors with cyclic rotation
//! * [`poly`] - dense polynomials over F2 (division, gcd, modular inverse)
//! * [`ring`] - arithmetic in `R = F2[x]/(1+x^(p*tau))` and its ideal
//! * [`code`] - parameter validation and monomial matrix construction
//! * [`codec`] - encoding and any-k-of-n erasure decoding
//! * [`repair`] - single-column repair plans and bandwidth accounting
//! * [`mdscheck`] - MDS certification via sub-matrix determinants

pub mod bits;
pub mod code;
pub mod codec;
pub mod error;
pub mod mdscheck;
pub mod poly;
pub mod repair;
pub mod ring;

pub use bits::Bits;
pub use code::{CodeParams, Family, MonomialMatrix};
pub use codec::ColumnSet;
pub use error::{Error, Result};
pub use ring::{RingContext, RingElement};
