//! Polynomials over GF(2), packed 64 coefficients per word.
//!
//! Bit `k` of the packed vector is the coefficient of `x^k` (least significant
//! bit first inside each word), so shifting left is multiplication by `x`.
//! Two multipliers live here: a per-bit shift-and-XOR schoolbook product, used
//! as the ground truth everywhere else, and word-level Karatsuba.

use std::fmt;
use std::ops::Add;

use crate::error::{Error, Result};

/// Carry-less product of two 32-bit words.
///
/// Each operand is split into four interleaved masks with three-bit holes.
/// An integer product of two such masks has at most eight terms per output
/// position, which fits in the hole, so no carry crosses into the next
/// position of the same residue class.
#[inline]
pub fn clmul32(a: u32, b: u32) -> u64 {
    const M0: u64 = 0x1111_1111_1111_1111;
    const M1: u64 = M0 << 1;
    const M2: u64 = M0 << 2;
    const M3: u64 = M0 << 3;
    let (a, b) = (a as u64, b as u64);
    let (a0, a1, a2, a3) = (a & M0, a & M1, a & M2, a & M3);
    let (b0, b1, b2, b3) = (b & M0, b & M1, b & M2, b & M3);
    let m = u64::wrapping_mul;
    let z0 = m(a0, b0) ^ m(a1, b3) ^ m(a2, b2) ^ m(a3, b1);
    let z1 = m(a0, b1) ^ m(a1, b0) ^ m(a2, b3) ^ m(a3, b2);
    let z2 = m(a0, b2) ^ m(a1, b1) ^ m(a2, b0) ^ m(a3, b3);
    let z3 = m(a0, b3) ^ m(a1, b2) ^ m(a2, b1) ^ m(a3, b0);
    (z0 & M0) | (z1 & M1) | (z2 & M2) | (z3 & M3)
}

/// Carry-less product of two 64-bit words (one Karatsuba step over [`clmul32`]).
#[inline]
pub fn clmul64(a: u64, b: u64) -> u128 {
    let (a0, a1) = (a as u32, (a >> 32) as u32);
    let (b0, b1) = (b as u32, (b >> 32) as u32);
    let lo = clmul32(a0, b0);
    let hi = clmul32(a1, b1);
    let mid = clmul32(a0 ^ a1, b0 ^ b1) ^ lo ^ hi;
    (lo as u128) ^ ((mid as u128) << 32) ^ ((hi as u128) << 64)
}

/// Degree of a polynomial; the zero polynomial sits below every finite degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInfinity,
    Finite(usize),
}

impl Degree {
    pub fn finite(self) -> Option<usize> {
        match self {
            Degree::NegInfinity => None,
            Degree::Finite(d) => Some(d),
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInfinity => f.write_str("-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// A polynomial over GF(2).
///
/// `len` is the logical length in coefficients; trailing zero coefficients are
/// allowed and ignored by equality. Bits at or above `len` are always zero.
#[derive(Clone, Default)]
pub struct BitPoly {
    words: Vec<u64>,
    len: usize,
}

#[inline]
fn words_for(bits: usize) -> usize {
    bits.div_ceil(64)
}

/// `out ^= src * x^shift`, where `out` is long enough to hold the result.
fn xor_shifted(out: &mut [u64], src: &[u64], shift: usize) {
    let (w, b) = (shift / 64, shift % 64);
    if b == 0 {
        for (o, &s) in out[w..].iter_mut().zip(src) {
            *o ^= s;
        }
    } else {
        for (i, &s) in src.iter().enumerate() {
            out[w + i] ^= s << b;
            if let Some(o) = out.get_mut(w + i + 1) {
                *o ^= s >> (64 - b);
            }
        }
    }
}

impl BitPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0)
    }

    /// `x^k`.
    pub fn monomial(k: usize) -> Self {
        let mut p = Self::with_len(k + 1);
        p.words[k / 64] = 1 << (k % 64);
        p
    }

    /// The zero polynomial with `len` (zero) coefficients allocated.
    pub fn with_len(len: usize) -> Self {
        Self {
            words: vec![0; words_for(len)],
            len,
        }
    }

    pub fn from_words(words: Vec<u64>) -> Self {
        let len = words.len() * 64;
        Self { words, len }
    }

    /// Keeps the first `len` coefficients of `words`.
    pub fn from_words_len(mut words: Vec<u64>, len: usize) -> Self {
        words.resize(words_for(len), 0);
        let mut p = Self { words, len };
        p.clear_tail();
        p
    }

    pub fn from_exponents(exps: &[usize]) -> Self {
        let len = exps.iter().max().map_or(0, |&e| e + 1);
        let mut p = Self::with_len(len);
        for &e in exps {
            p.words[e / 64] ^= 1 << (e % 64);
        }
        p
    }

    /// Coefficients from an iterator of bits, `x^0` first.
    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut words = Vec::new();
        let mut len = 0;
        for bit in bits {
            if len % 64 == 0 {
                words.push(0);
            }
            if bit {
                words[len / 64] |= 1 << (len % 64);
            }
            len += 1;
        }
        Self { words, len }
    }

    fn clear_tail(&mut self) {
        let r = self.len % 64;
        if r != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << r) - 1;
            }
        }
    }

    /// Logical length (may include trailing zeros).
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn coeff(&self, k: usize) -> bool {
        k < self.len && (self.words[k / 64] >> (k % 64)) & 1 == 1
    }

    pub fn degree(&self) -> Degree {
        match self.words.iter().rposition(|&w| w != 0) {
            None => Degree::NegInfinity,
            Some(i) => Degree::Finite(i * 64 + 63 - self.words[i].leading_zeros() as usize),
        }
    }

    /// Number of coefficients up to and including the leading one (0 for zero).
    pub fn significant_len(&self) -> usize {
        self.degree().finite().map_or(0, |d| d + 1)
    }

    pub fn trimmed(&self) -> Self {
        self.truncated(self.significant_len())
    }

    /// The first `n` coefficients, i.e. `self mod x^n`.
    pub fn truncated(&self, n: usize) -> Self {
        let n_words = words_for(n);
        let mut words: Vec<u64> = self.words.iter().take(n_words).copied().collect();
        words.resize(n_words, 0);
        let mut p = Self { words, len: n };
        p.clear_tail();
        p
    }

    /// `self * x^k`.
    pub fn shl(&self, k: usize) -> Self {
        let n = self.significant_len();
        if n == 0 {
            return Self::zero();
        }
        let mut out = Self::with_len(n + k);
        xor_shifted(&mut out.words, &self.words[..words_for(n)], k);
        out
    }

    /// Exponents of the nonzero coefficients, ascending.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + b)
            })
        })
    }

    pub fn add(&self, other: &Self) -> Self {
        let (long, short) = if self.words.len() >= other.words.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut words = long.words.clone();
        for (w, &s) in words.iter_mut().zip(&short.words) {
            *w ^= s;
        }
        Self {
            words,
            len: self.len.max(other.len),
        }
    }

    /// Shift-and-XOR convolution: one shifted copy of the longer operand per
    /// set bit of the sparser one. This is the reference product.
    pub fn mul_schoolbook(&self, other: &Self) -> Self {
        let (na, nb) = (self.significant_len(), other.significant_len());
        if na == 0 || nb == 0 {
            return Self::zero();
        }
        let (sparse, dense, nd) = if self.count_ones() <= other.count_ones() {
            (self, other, nb)
        } else {
            (other, self, na)
        };
        let mut out = vec![0u64; words_for(na + nb - 1) + 1];
        let src = &dense.words[..words_for(nd)];
        for e in sparse.ones() {
            xor_shifted(&mut out, src, e);
        }
        Self::from_words_len(out, na + nb - 1)
    }

    /// Karatsuba multiplication on 64-bit words; single words are multiplied
    /// with the carry-less word kernel.
    pub fn mul_karatsuba(&self, other: &Self) -> Self {
        let (na, nb) = (self.significant_len(), other.significant_len());
        if na == 0 || nb == 0 {
            return Self::zero();
        }
        let n = words_for(na).max(words_for(nb));
        let mut a = self.words[..words_for(na)].to_vec();
        let mut b = other.words[..words_for(nb)].to_vec();
        a.resize(n, 0);
        b.resize(n, 0);
        let mut out = vec![0u64; 2 * n];
        let mut scratch = vec![0u64; 8 * n + 64];
        karatsuba(&a, &b, &mut out, &mut scratch);
        Self::from_words_len(out, na + nb - 1)
    }

    fn count_ones(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    /// Long division: `(q, r)` with `self = q * divisor + r`, `deg r < deg divisor`.
    pub fn divrem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let dd = divisor
            .degree()
            .finite()
            .ok_or_else(|| Error::Parameter("division by the zero polynomial".into()))?;
        let d_words = &divisor.words[..words_for(dd + 1)];
        let n = self.significant_len();
        if n <= dd {
            return Ok((Self::zero(), self.trimmed()));
        }
        let mut r = self.words[..words_for(n)].to_vec();
        r.push(0);
        let mut q = Self::with_len(n - dd);
        for i in (dd..n).rev() {
            if (r[i / 64] >> (i % 64)) & 1 == 1 {
                xor_shifted(&mut r, d_words, i - dd);
                q.words[(i - dd) / 64] |= 1 << ((i - dd) % 64);
            }
        }
        Ok((q, Self::from_words_len(r, dd)))
    }

    /// Byte `i`, bit `j` (LSB first) is the coefficient of `x^(8i+j)`; bytes in
    /// increasing order, high nibble first.
    pub fn parse_hex(text: &str) -> Result<Self> {
        let mut nibbles = Vec::with_capacity(text.len());
        for (position, c) in text.chars().enumerate() {
            let v = c
                .to_digit(16)
                .ok_or(Error::HexDigit { position, found: c })?;
            nibbles.push(v as u8);
        }
        if nibbles.len() % 2 != 0 {
            return Err(Error::HexOddLength(nibbles.len()));
        }
        let n_bytes = nibbles.len() / 2;
        let mut words = vec![0u64; n_bytes.div_ceil(8)];
        for (i, pair) in nibbles.chunks_exact(2).enumerate() {
            let byte = (pair[0] << 4 | pair[1]) as u64;
            words[i / 8] |= byte << (8 * (i % 8));
        }
        Ok(Self {
            words,
            len: 8 * n_bytes,
        })
    }

    /// Canonical hex: the fewest bytes that hold every nonzero coefficient;
    /// the zero polynomial is `"00"`.
    pub fn format_hex(&self) -> String {
        let n_bytes = self.significant_len().div_ceil(8).max(1);
        let mut s = String::with_capacity(2 * n_bytes);
        for i in 0..n_bytes {
            let byte = self
                .words
                .get(i / 8)
                .map_or(0, |w| (w >> (8 * (i % 8))) as u8);
            s.push_str(&format!("{byte:02x}"));
        }
        s
    }
}

/// `out = a * b` for equal-length word slices; `out.len() == 2 * a.len()`.
fn karatsuba(a: &[u64], b: &[u64], out: &mut [u64], scratch: &mut [u64]) {
    let n = a.len();
    if n == 1 {
        let p = clmul64(a[0], b[0]);
        out[0] = p as u64;
        out[1] = (p >> 64) as u64;
        return;
    }
    let h = n / 2;
    let hn = n - h;
    {
        let (lo, hi) = out.split_at_mut(2 * h);
        karatsuba(&a[..h], &b[..h], lo, scratch);
        karatsuba(&a[h..], &b[h..], hi, scratch);
    }
    let (sa, rest) = scratch.split_at_mut(hn);
    let (sb, rest) = rest.split_at_mut(hn);
    let (mid, rest) = rest.split_at_mut(2 * hn);
    sa.copy_from_slice(&a[h..]);
    sb.copy_from_slice(&b[h..]);
    for i in 0..h {
        sa[i] ^= a[i];
        sb[i] ^= b[i];
    }
    karatsuba(sa, sb, mid, rest);
    for (m, &o) in mid.iter_mut().zip(&out[..2 * h]) {
        *m ^= o;
    }
    for (m, &o) in mid.iter_mut().zip(&out[2 * h..]) {
        *m ^= o;
    }
    for (o, &m) in out[h..h + 2 * hn].iter_mut().zip(mid.iter()) {
        *o ^= m;
    }
}

impl PartialEq for BitPoly {
    fn eq(&self, other: &Self) -> bool {
        let n = self.words.len().max(other.words.len());
        (0..n).all(|i| self.words.get(i).unwrap_or(&0) == other.words.get(i).unwrap_or(&0))
    }
}

impl Eq for BitPoly {}

impl std::hash::Hash for BitPoly {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        let n = self.significant_len();
        self.words[..words_for(n)].hash(state);
    }
}

impl Add for &BitPoly {
    type Output = BitPoly;

    fn add(self, rhs: &BitPoly) -> BitPoly {
        BitPoly::add(self, rhs)
    }
}

impl fmt::Display for BitPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_hex())
    }
}

impl fmt::Debug for BitPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitPoly({})", self.format_hex())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn naive_clmul(a: u64, b: u64) -> u128 {
        (0..64)
            .filter(|i| (b >> i) & 1 == 1)
            .fold(0u128, |acc, i| acc ^ ((a as u128) << i))
    }

    fn p(exps: &[usize]) -> BitPoly {
        BitPoly::from_exponents(exps)
    }

    proptest! {
        #[test]
        fn clmul64_matches_bitwise(a: u64, b: u64) {
            prop_assert_eq!(clmul64(a, b), naive_clmul(a, b));
        }

        #[test]
        fn hex_roundtrip(words in prop::collection::vec(any::<u64>(), 0..6)) {
            let f = BitPoly::from_words(words);
            let back = BitPoly::parse_hex(&f.format_hex()).unwrap();
            prop_assert_eq!(&back, &f);
            prop_assert_eq!(back.format_hex(), f.format_hex());
        }

        #[test]
        fn divrem_reconstructs(a in prop::collection::vec(any::<u64>(), 1..4),
                               b in prop::collection::vec(any::<u64>(), 1..3)) {
            let (a, b) = (BitPoly::from_words(a), BitPoly::from_words(b));
            prop_assume!(!b.is_zero());
            let (q, r) = a.divrem(&b).unwrap();
            prop_assert!(r.degree() < b.degree());
            prop_assert_eq!(q.mul_schoolbook(&b).add(&r), a);
        }
    }

    #[test]
    fn add_examples() {
        assert_eq!(p(&[2, 0]).add(&p(&[1, 0])), p(&[2, 1]));
        let f = p(&[7, 3, 0]);
        assert!(f.add(&f).is_zero());
        assert_eq!(&f + &BitPoly::zero(), f);
    }

    #[test]
    fn add_laws_exhaustive_below_degree_8() {
        let all: Vec<BitPoly> = (0u64..256).map(|w| BitPoly::from_words(vec![w])).collect();
        for a in &all {
            assert!(a.add(a).is_zero());
            for b in &all {
                assert_eq!(a.add(b), b.add(a));
            }
        }
        // associativity on a stride of triples keeps this under a second
        for a in all.iter().step_by(3) {
            for b in all.iter().step_by(5) {
                for c in all.iter().step_by(7) {
                    assert_eq!(a.add(b).add(c), a.add(&b.add(c)));
                }
            }
        }
    }

    #[test]
    fn schoolbook_examples() {
        assert_eq!(p(&[1, 0]).mul_schoolbook(&p(&[1, 0])), p(&[2, 0]));
        let f = p(&[9, 4, 1]);
        assert_eq!(BitPoly::one().mul_schoolbook(&f), f);
        assert_eq!(
            p(&[3, 1, 0]).mul_schoolbook(&p(&[3, 2, 0])),
            p(&[6, 5, 4, 3, 2, 1, 0])
        );
    }

    #[test]
    fn karatsuba_examples() {
        let f = p(&[63, 17, 0]);
        let g = p(&[40, 2]);
        assert_eq!(f.mul_karatsuba(&g), f.mul_schoolbook(&g));
        assert!(BitPoly::zero().mul_karatsuba(&f).is_zero());
        assert_eq!(
            p(&[3, 1, 0]).mul_karatsuba(&p(&[3, 2, 0])),
            p(&[6, 5, 4, 3, 2, 1, 0])
        );
    }

    #[test]
    fn karatsuba_matches_schoolbook_up_to_4096_coefficients() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for log_n in 0..=12 {
            let n = 1usize << log_n;
            for _ in 0..100 {
                let la = rng.random_range(1..=n);
                let lb = rng.random_range(1..=n);
                let f = BitPoly::from_bits((0..la).map(|_| rng.random::<bool>()));
                let g = BitPoly::from_bits((0..lb).map(|_| rng.random::<bool>()));
                assert_eq!(f.mul_karatsuba(&g), f.mul_schoolbook(&g), "n = {n}");
            }
        }
    }

    #[test]
    fn degree_is_additive() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let f =
                BitPoly::from_words((0..rng.random_range(1..5)).map(|_| rng.random()).collect());
            let g =
                BitPoly::from_words((0..rng.random_range(1..5)).map(|_| rng.random()).collect());
            if f.is_zero() || g.is_zero() {
                continue;
            }
            let (df, dg) = (f.degree().finite().unwrap(), g.degree().finite().unwrap());
            assert_eq!(f.mul_schoolbook(&g).degree(), Degree::Finite(df + dg));
        }
        assert_eq!(BitPoly::zero().degree(), Degree::NegInfinity);
        assert!(Degree::NegInfinity < Degree::Finite(0));
    }

    #[test]
    fn equality_ignores_trailing_zeros() {
        let a = BitPoly::parse_hex("0500").unwrap();
        let b = BitPoly::parse_hex("05").unwrap();
        assert_eq!(a.len(), 16);
        assert_eq!(a, b);
        assert_eq!(BitPoly::with_len(300), BitPoly::zero());
    }

    #[test]
    fn hex_examples() {
        assert_eq!(BitPoly::parse_hex("03").unwrap(), p(&[1, 0]));
        assert_eq!(BitPoly::parse_hex("0001").unwrap(), p(&[8]));
        assert_eq!(p(&[2, 0]).format_hex(), "05");
        assert_eq!(BitPoly::zero().format_hex(), "00");
        assert_eq!(BitPoly::parse_hex("A0ff").unwrap().format_hex(), "a0ff");
    }

    #[test]
    fn hex_errors() {
        assert_eq!(
            BitPoly::parse_hex("0g"),
            Err(Error::HexDigit {
                position: 1,
                found: 'g'
            })
        );
        assert_eq!(BitPoly::parse_hex("012"), Err(Error::HexOddLength(3)));
    }

    #[test]
    fn shl_and_truncate() {
        let f = p(&[0, 5]);
        assert_eq!(f.shl(70), p(&[70, 75]));
        assert_eq!(p(&[1, 64, 100]).truncated(65), p(&[1, 64]));
        assert_eq!(p(&[3, 130]).ones().collect::<Vec<_>>(), vec![3, 130]);
    }
}
