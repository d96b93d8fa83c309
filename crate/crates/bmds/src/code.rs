//! Code parameters and monomial matrix construction.
//!
//! `C1(k, r, d, p)` uses a `k x r` encoding matrix; `C2(k, r, d, p)` uses
//! an `r x (k+r)` check matrix. Every entry is either zero or a single
//! monomial `x^e` with the exponent already reduced mod `p*tau`, which is
//! what lets encoding run as pure shift-and-XOR.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::ring::{mod_mul, RingContext};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Family {
    C1,
    C2,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::C1 => write!(f, "c1"),
            Family::C2 => write!(f, "c2"),
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "c1" => Ok(Family::C1),
            "c2" => Ok(Family::C2),
            other => Err(Error::InvalidParams {
                violations: vec![format!("unknown family {other:?}, expected c1 or c2")],
            }),
        }
    }
}

/// Validated parameter bundle. All derived quantities are recomputed from
/// `(family, k, r, p)`, never stored independently.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CodeParams {
    pub family: Family,
    /// Information columns.
    pub k: usize,
    /// Parity columns.
    pub r: usize,
    /// Odd prime with 2 primitive mod p.
    pub p: usize,
    /// Helper count for single-column repair.
    pub d: usize,
    /// eta = d - k + 1.
    pub eta: usize,
    pub tau: usize,
    /// Total columns k + r.
    pub n: usize,
    /// Stored bits per column: L = (p-1) * tau.
    pub stored_bits: usize,
}

impl CodeParams {
    /// Full validation; `k >= 4` as the repair bandwidth guarantees demand.
    pub fn validate(family: Family, k: usize, r: usize, p: usize) -> Result<CodeParams> {
        Self::derive(family, k, r, p, 4)
    }

    /// Same derivation with `k >= 2`, for MDS certification of small-k
    /// tables. Codecs accept such parameters; repair does not.
    pub fn validate_relaxed(family: Family, k: usize, r: usize, p: usize) -> Result<CodeParams> {
        Self::derive(family, k, r, p, 2)
    }

    fn derive(family: Family, k: usize, r: usize, p: usize, min_k: usize) -> Result<CodeParams> {
        let mut violations = Vec::new();
        if k < min_k {
            violations.push(format!("k must be at least {min_k}, got {k}"));
        }
        match family {
            Family::C1 => {
                if r < 3 || r % 2 == 0 {
                    violations.push(format!("family c1 requires odd r >= 3, got {r}"));
                }
            }
            Family::C2 => {
                if r < 4 || r % 2 == 1 {
                    violations.push(format!("family c2 requires even r >= 4, got {r}"));
                }
            }
        }
        if !violations.is_empty() {
            return Err(Error::InvalidParams { violations });
        }

        let (d, eta, tau_exp) = match family {
            Family::C1 => {
                let d = k + (r - 1) / 2;
                (d, d - k + 1, k - 2)
            }
            Family::C2 => {
                let eta = r / 2;
                let d = k + eta - 1;
                (d, eta, d - 1)
            }
        };
        let p_floor = match family {
            Family::C1 => d - k, // p > d - k
            Family::C2 => eta,   // p > eta
        };

        if !is_prime(p) {
            violations.push(format!("p must be prime, got {p}"));
        } else {
            if p == 2 {
                violations.push("p must be an odd prime".into());
            }
            match is_two_primitive(p) {
                Ok(true) => {}
                Ok(false) => violations.push(format!("2 is not primitive mod {p}")),
                Err(_) => unreachable!("primality already checked"),
            }
        }
        if p <= p_floor {
            violations.push(format!("p must exceed {p_floor}, got {p}"));
        }

        let tau = (eta as u128).checked_pow(tau_exp as u32).and_then(|t| {
            if t <= usize::MAX as u128 / (p.max(2) as u128) {
                Some(t as usize)
            } else {
                None
            }
        });
        let tau = match tau {
            Some(t) => t,
            None => {
                violations.push(format!("tau = {eta}^{tau_exp} overflows the index space"));
                0
            }
        };

        if !violations.is_empty() {
            return Err(Error::InvalidParams { violations });
        }
        Ok(CodeParams {
            family,
            k,
            r,
            p,
            d,
            eta,
            tau,
            n: k + r,
            stored_bits: (p - 1) * tau,
        })
    }

    pub fn ring_context(&self) -> RingContext {
        RingContext::new(self.p, self.tau).expect("validated parameters")
    }

    pub fn modulus_len(&self) -> usize {
        self.p * self.tau
    }

    /// The `r x n` check matrix for either family. For C2 this is the
    /// defining matrix; for C1 it is `[P^T | I]`, row `j` stating that
    /// parity column `j` equals its combination of the data columns.
    pub fn check_matrix(&self) -> MonomialMatrix {
        match self.family {
            Family::C2 => build_check_matrix(self),
            Family::C1 => {
                let p_mat = build_encoding_matrix(self);
                let mut h = MonomialMatrix::zeros(self.r, self.n);
                for j in 0..self.r {
                    for i in 0..self.k {
                        h.set(j, i, p_mat.get(i, j));
                    }
                    h.set(j, self.k + j, Entry::Mono(0));
                }
                h
            }
        }
    }
}

pub fn is_prime(p: usize) -> bool {
    if p < 2 {
        return false;
    }
    let mut f = 2;
    while f * f <= p {
        if p % f == 0 {
            return false;
        }
        f += 1;
    }
    true
}

/// Whether the multiplicative order of 2 mod `p` is `p - 1`.
pub fn is_two_primitive(p: usize) -> Result<bool> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p == 2 {
        return Ok(false);
    }
    let mut pow = 1usize;
    for ord in 1..p {
        pow = pow * 2 % p;
        if pow == 1 {
            return Ok(ord == p - 1);
        }
    }
    unreachable!("order of 2 divides p-1")
}

/// A matrix whose entries are zero or a single monomial `x^e`, `e` reduced
/// mod `p*tau`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Entry {
    Zero,
    Mono(usize),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MonomialMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Entry>,
}

impl MonomialMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        MonomialMatrix {
            rows,
            cols,
            entries: vec![Entry::Zero; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> Entry {
        assert!(row < self.rows && col < self.cols, "index out of range");
        self.entries[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, e: Entry) {
        assert!(row < self.rows && col < self.cols, "index out of range");
        self.entries[row * self.cols + col] = e;
    }
}

/// `eta^exp mod m` without overflow.
fn pow_mod(eta: usize, exp: usize, m: usize) -> usize {
    let mut acc = 1usize % m;
    for _ in 0..exp {
        acc = mod_mul(acc, eta, m);
    }
    acc
}

/// The `k x r` encoding matrix of C1 (rows index data columns, columns
/// index parity columns; all indices here 0-based):
///
/// * column 0: all ones;
/// * columns `1..eta`: entry `(i, j) = x^(j * eta^i)` for `i < k-1`, ones
///   in the last row;
/// * columns `eta..r`: the 180-degree rotation of the previous block,
///   entry `(i, j) = x^((2*eta-1-j) * eta^(k-1-i))` for `i >= 1`, ones in
///   the first row.
pub fn build_encoding_matrix(params: &CodeParams) -> MonomialMatrix {
    assert_eq!(params.family, Family::C1, "encoding matrix is a c1 notion");
    let (k, r, eta) = (params.k, params.r, params.eta);
    let m = params.modulus_len();
    let mut p_mat = MonomialMatrix::zeros(k, r);
    for i in 0..k {
        p_mat.set(i, 0, Entry::Mono(0));
    }
    for j in 1..eta {
        for i in 0..k - 1 {
            p_mat.set(i, j, Entry::Mono(mod_mul(j, pow_mod(eta, i, m), m)));
        }
        p_mat.set(k - 1, j, Entry::Mono(0));
    }
    for j in eta..r {
        p_mat.set(0, j, Entry::Mono(0));
        for i in 1..k {
            let coeff = 2 * eta - 1 - j;
            p_mat.set(
                i,
                j,
                Entry::Mono(mod_mul(coeff, pow_mod(eta, k - 1 - i, m), m)),
            );
        }
    }
    p_mat
}

/// The `r x n` check matrix of C2 (0-based):
///
/// * rows `0..eta`: row `j` holds `x^(j * eta^i)` at columns `i < d`, a one
///   at column `d`, and zeros on the last `eta` columns;
/// * rows `eta..r-1`: zeros on the first `eta` columns, a one at column
///   `eta`, then `x^((r-1-j) * eta^(n-1-i))` at columns `i > eta`;
/// * last row: zeros, a one at column `eta`, then `x^((n-1-i) * tau)`.
pub fn build_check_matrix(params: &CodeParams) -> MonomialMatrix {
    assert_eq!(params.family, Family::C2, "check matrix is a c2 notion");
    let (r, n, d, eta) = (params.r, params.n, params.d, params.eta);
    let m = params.modulus_len();
    let mut h = MonomialMatrix::zeros(r, n);
    for j in 0..eta {
        for i in 0..d {
            h.set(j, i, Entry::Mono(mod_mul(j, pow_mod(eta, i, m), m)));
        }
        h.set(j, d, Entry::Mono(0));
    }
    for j in eta..r - 1 {
        h.set(j, eta, Entry::Mono(0));
        for i in eta + 1..n {
            let coeff = r - 1 - j;
            h.set(
                j,
                i,
                Entry::Mono(mod_mul(coeff, pow_mod(eta, n - 1 - i, m), m)),
            );
        }
    }
    h.set(r - 1, eta, Entry::Mono(0));
    for i in eta + 1..n {
        h.set(r - 1, i, Entry::Mono(mod_mul(n - 1 - i, params.tau, m)));
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validate_example_parameters() {
        let p1 = CodeParams::validate(Family::C1, 4, 3, 3).unwrap();
        assert_eq!((p1.d, p1.eta, p1.tau, p1.stored_bits), (5, 2, 4, 8));
        let p2 = CodeParams::validate(Family::C2, 4, 4, 3).unwrap();
        assert_eq!((p2.d, p2.eta, p2.tau, p2.stored_bits), (5, 2, 16, 32));
        assert_eq!(p2.n, 8);
    }

    #[test]
    fn validate_rejects_non_primitive() {
        let err = CodeParams::validate(Family::C1, 4, 3, 7).unwrap_err();
        match err {
            Error::InvalidParams { violations } => {
                assert!(violations.iter().any(|v| v.contains("not primitive")));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn validate_rejects_shape_errors() {
        assert!(CodeParams::validate(Family::C1, 4, 4, 3).is_err());
        assert!(CodeParams::validate(Family::C2, 4, 3, 3).is_err());
        assert!(CodeParams::validate(Family::C1, 3, 3, 3).is_err());
        assert!(CodeParams::validate_relaxed(Family::C2, 2, 4, 11).is_ok());
        assert!(CodeParams::validate(Family::C2, 4, 4, 9).is_err());
        // C2 requires p > r/2.
        assert!(CodeParams::validate(Family::C2, 4, 6, 3).is_err());
    }

    #[test]
    fn two_primitive_orders() {
        for p in [3, 5, 11, 13, 19, 29, 37] {
            assert!(is_two_primitive(p).unwrap(), "p={p}");
        }
        assert!(!is_two_primitive(7).unwrap()); // 2^3 = 1 mod 7
        assert!(!is_two_primitive(17).unwrap()); // order 8
        assert_eq!(is_two_primitive(9), Err(Error::NotPrime(9)));
    }

    #[test]
    fn encoding_matrix_example_1() {
        let params = CodeParams::validate(Family::C1, 4, 3, 3).unwrap();
        let p_mat = build_encoding_matrix(&params);
        let want = [
            [0, 1, 0], // 1, x,   1
            [0, 2, 4], // 1, x^2, x^4
            [0, 4, 2], // 1, x^4, x^2
            [0, 0, 1], // 1, 1,   x
        ];
        for i in 0..4 {
            for j in 0..3 {
                assert_eq!(p_mat.get(i, j), Entry::Mono(want[i][j]), "({i},{j})");
            }
        }
    }

    #[test]
    fn encoding_matrix_first_column_ones_and_rotation() {
        for (k, r, p) in [(4, 3, 3), (5, 3, 11), (4, 5, 3), (6, 3, 11)] {
            let params = CodeParams::validate(Family::C1, k, r, p).unwrap();
            let p_mat = build_encoding_matrix(&params);
            for i in 0..k {
                assert_eq!(p_mat.get(i, 0), Entry::Mono(0));
            }
            // The second block is the 180-degree rotation of the first:
            // entry (i, eta + j) = entry (k-1-i, eta-1-j) for the inner block.
            let eta = params.eta;
            for j in 1..eta {
                for i in 0..k {
                    let rotated = p_mat.get(k - 1 - i, eta - j + (eta - 1));
                    assert_eq!(p_mat.get(i, j), rotated, "k={k} r={r} ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn encoding_matrix_c1_5_3_11_entries() {
        // eta = 2: entry (row 1, col 1) = x^eta = x^2, (row 3, col 1) = x^8.
        let params = CodeParams::validate(Family::C1, 5, 3, 11).unwrap();
        let p_mat = build_encoding_matrix(&params);
        assert_eq!(p_mat.get(1, 1), Entry::Mono(2));
        assert_eq!(p_mat.get(3, 1), Entry::Mono(8));
    }

    /// Hand-coded literal of the r=4 check matrix, written directly from
    /// its displayed form (0-based indices).
    fn check4_literal(k: usize, p: usize) -> MonomialMatrix {
        let params = CodeParams::validate_relaxed(Family::C2, k, 4, p).unwrap();
        let m = params.modulus_len();
        let tau = params.tau; // 2^k
        let n = k + 4;
        let mut h = MonomialMatrix::zeros(4, n);
        for i in 0..n - 2 {
            h.set(0, i, Entry::Mono(0));
        }
        for i in 0..n - 3 {
            h.set(1, i, Entry::Mono((1usize << i) % m));
        }
        h.set(1, n - 3, Entry::Mono(0));
        h.set(2, 2, Entry::Mono(0));
        for i in 3..n {
            h.set(2, i, Entry::Mono((1usize << (n - 1 - i)) % m));
        }
        h.set(3, 2, Entry::Mono(0));
        for i in 3..n {
            h.set(3, i, Entry::Mono(mod_mul(n - 1 - i, tau, m)));
        }
        h
    }

    #[test]
    fn check_matrix_matches_literal_for_r4() {
        for k in 2..=8 {
            let p = match k {
                2..=4 => 3,
                _ => 5, // keep p > eta with 2 primitive; matrix shape is all that matters
            };
            let params = CodeParams::validate_relaxed(Family::C2, k, 4, p).unwrap();
            assert_eq!(build_check_matrix(&params), check4_literal(k, p), "k={k}");
        }
    }

    #[test]
    fn check_matrix_example_rows() {
        let params = CodeParams::validate(Family::C2, 4, 4, 3).unwrap();
        let h = build_check_matrix(&params);
        // Second row: x, x^2, x^4, x^8, x^16, 1, 0, 0.
        let want = [1, 2, 4, 8, 16, 0];
        for (i, &e) in want.iter().enumerate() {
            assert_eq!(h.get(1, i), Entry::Mono(e));
        }
        assert_eq!(h.get(1, 6), Entry::Zero);
        assert_eq!(h.get(1, 7), Entry::Zero);
        // Third row starts with the zero block.
        assert_eq!(h.get(2, 0), Entry::Zero);
        assert_eq!(h.get(2, 1), Entry::Zero);
        // Last row: raw exponent 3*16 = 48 reduces to 0 at column 4 and
        // 4*16 = 64 reduces to 16 at column 3 (mod p*tau = 48).
        assert_eq!(h.get(3, 4), Entry::Mono(0));
        assert_eq!(h.get(3, 3), Entry::Mono(16));
    }

    #[test]
    fn matrices_are_deterministic_and_reduced() {
        for (family, k, r, p) in [
            (Family::C1, 5, 3, 11),
            (Family::C1, 4, 5, 3),
            (Family::C2, 4, 4, 19),
            (Family::C2, 5, 6, 5),
        ] {
            let params = CodeParams::validate(family, k, r, p).unwrap();
            let (a, b) = match family {
                Family::C1 => (
                    build_encoding_matrix(&params),
                    build_encoding_matrix(&params),
                ),
                Family::C2 => (build_check_matrix(&params), build_check_matrix(&params)),
            };
            assert_eq!(a, b);
            for row in 0..a.rows() {
                for col in 0..a.cols() {
                    if let Entry::Mono(e) = a.get(row, col) {
                        assert!(e < params.modulus_len());
                    }
                }
            }
        }
    }

    #[test]
    fn c1_check_matrix_shape() {
        let params = CodeParams::validate(Family::C1, 4, 3, 3).unwrap();
        let h = params.check_matrix();
        assert_eq!((h.rows(), h.cols()), (3, 7));
        // Row j: column i < k carries P[i][j]; identity block afterwards.
        let p_mat = build_encoding_matrix(&params);
        for j in 0..3 {
            for i in 0..4 {
                assert_eq!(h.get(j, i), p_mat.get(i, j));
            }
            for jj in 0..3 {
                let want = if jj == j { Entry::Mono(0) } else { Entry::Zero };
                assert_eq!(h.get(j, 4 + jj), want);
            }
        }
    }
}
