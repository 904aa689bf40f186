//! Additive Fourier transform over a Cantor-basis tower field.
//!
//! Evaluation (`evaluate_ea`) and remaindering (`remainder_ra`) call each
//! other recursively, as do interpolation (`interpolate_ia`) and dividend
//! reconstruction (`reconstruct_dra`). Every entry point returns an
//! [`OpCountReport`] with the field multiplications and additions it spent.
//!
//! Internally all transforms run in place on one buffer addressed by
//! `(offset, stride)`. The generalized Taylor expansion leaves coefficient `q`
//! of the `i`-th Gao–Mateer polynomial at position `q·t + i`, so evaluating
//! each of those polynomials with stride `t` puts the remainder modulo the
//! `j`-th coset polynomial contiguously in block `j`, ready for the next
//! recursion level without any transposition.

use std::ops::AddAssign;

use serde::Serialize;

use crate::error::{param, Error, Result};
use crate::tower::{FieldElement, TowerField};

/// Field operations spent by one call.
///
/// A multiplication is a product of two general field elements (shortcuts
/// for a zero operand are not counted). An addition is one element XOR.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct OpCountReport {
    pub field_mults: u64,
    pub field_adds: u64,
}

impl AddAssign for OpCountReport {
    fn add_assign(&mut self, rhs: Self) {
        self.field_mults += rhs.field_mults;
        self.field_adds += rhs.field_adds;
    }
}

/// A polynomial over a tower field; `coeffs[i]` multiplies `x^i`.
///
/// Equality ignores trailing zero coefficients.
#[derive(Debug, Clone, Default)]
pub struct FieldPoly {
    coeffs: Vec<FieldElement>,
}

impl FieldPoly {
    pub fn new(coeffs: Vec<FieldElement>) -> Self {
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_bits(bits: &[u64]) -> Self {
        Self::new(bits.iter().map(|&b| FieldElement::new(b)).collect())
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<FieldElement> {
        self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Length without trailing zeros.
    pub fn significant_len(&self) -> usize {
        self.coeffs
            .iter()
            .rposition(|c| !c.is_zero())
            .map_or(0, |i| i + 1)
    }

    pub fn trimmed(&self) -> Self {
        Self::new(self.coeffs[..self.significant_len()].to_vec())
    }

    /// Horner evaluation.
    pub fn eval(&self, field: &TowerField, x: FieldElement) -> FieldElement {
        self.coeffs
            .iter()
            .rev()
            .fold(FieldElement::ZERO, |acc, &c| field.mul(acc, x) + c)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.len().max(other.len());
        let get = |p: &Self, i: usize| p.coeffs.get(i).copied().unwrap_or_default();
        Self::new((0..n).map(|i| get(self, i) + get(other, i)).collect())
    }

    /// Quadratic convolution.
    pub fn mul_schoolbook(&self, field: &TowerField, other: &Self) -> Self {
        let (na, nb) = (self.significant_len(), other.significant_len());
        if na == 0 || nb == 0 {
            return Self::zero();
        }
        let mut out = vec![FieldElement::ZERO; na + nb - 1];
        for (i, &a) in self.coeffs[..na].iter().enumerate() {
            for (j, &b) in other.coeffs[..nb].iter().enumerate() {
                out[i + j] += field.mul(a, b);
            }
        }
        Self::new(out)
    }

    /// Remainder of long division by a monic polynomial.
    pub fn rem_monic(&self, field: &TowerField, modulus: &Self) -> Result<Self> {
        let d = modulus.significant_len();
        if d == 0 || modulus.coeffs[d - 1] != FieldElement::ONE {
            return Err(param("divisor must be monic"));
        }
        let deg = d - 1;
        let mut r = self.coeffs.clone();
        for top in (deg..r.len()).rev() {
            let c = r[top];
            if c.is_zero() {
                continue;
            }
            for (k, &m) in modulus.coeffs[..d].iter().enumerate() {
                r[top - deg + k] += field.mul(c, m);
            }
        }
        r.truncate(deg);
        Ok(Self::new(r))
    }
}

impl PartialEq for FieldPoly {
    fn eq(&self, other: &Self) -> bool {
        let n = self.significant_len();
        n == other.significant_len() && self.coeffs[..n] == other.coeffs[..n]
    }
}

impl Eq for FieldPoly {}

#[inline]
pub(crate) fn ceil_log2(m: u32) -> u32 {
    if m <= 1 {
        0
    } else {
        32 - (m - 1).leading_zeros()
    }
}

/// Forward generalized Taylor expansion at `x^(2^k) - x`, in place on the
/// `2^log_len` positions `off + stride·p`. Additions only.
fn taylor_forward(
    buf: &mut [FieldElement],
    off: usize,
    stride: usize,
    log_len: u32,
    k: u32,
    c: &mut OpCountReport,
) {
    // Block of size 2tΔ = f0 | f1 | f2 with |f0| = tΔ, |f1| = (t-1)Δ, |f2| = Δ:
    //   f1 += f2        (upper half becomes g1 = f1 + f2 + x^((t-1)Δ) f2)
    //   f0 += x^Δ (f1)  (lower half becomes g0)
    // then f = g0 + (x^t - x)^Δ g1.
    for s in (k + 1..=log_len).rev() {
        let half = 1usize << (s - 1);
        let delta = 1usize << (s - 1 - k);
        for block in 0..1usize << (log_len - s) {
            let base = off + stride * (block << s);
            for p in 0..delta {
                let v = buf[base + stride * (2 * half - delta + p)];
                buf[base + stride * (half + p)] += v;
            }
            for p in 0..half - delta {
                let v = buf[base + stride * (half + p)];
                buf[base + stride * (delta + p)] += v;
            }
            c.field_adds += half as u64;
        }
    }
}

/// Inverse of [`taylor_forward`].
fn taylor_inverse(
    buf: &mut [FieldElement],
    off: usize,
    stride: usize,
    log_len: u32,
    k: u32,
    c: &mut OpCountReport,
) {
    for s in k + 1..=log_len {
        let half = 1usize << (s - 1);
        let delta = 1usize << (s - 1 - k);
        for block in 0..1usize << (log_len - s) {
            let base = off + stride * (block << s);
            for p in 0..half - delta {
                let v = buf[base + stride * (half + p)];
                buf[base + stride * (delta + p)] += v;
            }
            for p in 0..delta {
                let v = buf[base + stride * (2 * half - delta + p)];
                buf[base + stride * (half + p)] += v;
            }
            c.field_adds += half as u64;
        }
    }
}

/// Recursion split for `m > 1`: `k = 2^(⌈log2 m⌉ - 1)`.
#[inline]
fn split(m: u32) -> u32 {
    1 << (ceil_log2(m) - 1)
}

/// Evaluates in place: on entry positions hold the `2^m` coefficients, on
/// exit `f(a + ϖ_p)` where `a = ϖ_{a_idx}` and the low `m` bits of `a_idx`
/// are zero.
fn ea_in_place(
    field: &TowerField,
    buf: &mut [FieldElement],
    off: usize,
    stride: usize,
    m: u32,
    a_idx: u64,
    c: &mut OpCountReport,
) {
    if m == 1 {
        let a = field.omega_unchecked(a_idx);
        let (c0, c1) = (buf[off], buf[off + stride]);
        let v0 = if a.is_zero() {
            c0
        } else {
            c.field_mults += 1;
            c.field_adds += 1;
            c0 + field.mul(c1, a)
        };
        buf[off] = v0;
        buf[off + stride] = v0 + c1;
        c.field_adds += 1;
        return;
    }
    let k = split(m);
    let t = 1usize << k;
    taylor_forward(buf, off, stride, m, k, c);
    // b = a^(2^(2^k')) - a shifts the index right by k
    let b_idx = a_idx >> k;
    for i in 0..t {
        ea_in_place(field, buf, off + stride * i, stride * t, m - k, b_idx, c);
    }
    for j in 0..1usize << (m - k) {
        let a_j = a_idx ^ ((j as u64) << k);
        ea_in_place(field, buf, off + stride * t * j, stride, k, a_j, c);
    }
}

/// Inverse of [`ea_in_place`].
fn ia_in_place(
    field: &TowerField,
    buf: &mut [FieldElement],
    off: usize,
    stride: usize,
    m: u32,
    a_idx: u64,
    c: &mut OpCountReport,
) {
    if m == 1 {
        let a = field.omega_unchecked(a_idx);
        let (v0, v1) = (buf[off], buf[off + stride]);
        let s = v0 + v1;
        c.field_adds += 1;
        buf[off] = if a.is_zero() {
            v0
        } else {
            c.field_mults += 1;
            c.field_adds += 1;
            v0 + field.mul(a, s)
        };
        buf[off + stride] = s;
        return;
    }
    let k = split(m);
    let t = 1usize << k;
    for j in 0..1usize << (m - k) {
        let a_j = a_idx ^ ((j as u64) << k);
        ia_in_place(field, buf, off + stride * t * j, stride, k, a_j, c);
    }
    let b_idx = a_idx >> k;
    for i in 0..t {
        ia_in_place(field, buf, off + stride * i, stride * t, m - k, b_idx, c);
    }
    taylor_inverse(buf, off, stride, m, k, c);
}

fn low_mask(bits: u32) -> u64 {
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

fn check_m(field: &TowerField, m: u32) -> Result<()> {
    if m == 0 {
        return Err(param("m must be at least 1"));
    }
    if m > field.width() {
        return Err(Error::FieldTooSmall {
            m,
            width: field.width(),
        });
    }
    if m >= usize::BITS - 1 {
        return Err(param(format!("2^{m} points do not fit in memory")));
    }
    Ok(())
}

/// Cantor index of `a`, requiring its coordinates `β_1..β_zero_bits` to vanish.
fn coset_index(field: &TowerField, a: FieldElement, zero_bits: u32) -> Result<u64> {
    let idx = field.index_of(a)?;
    if idx & low_mask(zero_bits) != 0 {
        return Err(param(format!(
            "shift {a} has nonzero Cantor coordinates among the first {zero_bits}"
        )));
    }
    Ok(idx)
}

fn padded(f: &[FieldElement], n: usize, what: &str) -> Result<Vec<FieldElement>> {
    if f.len() > n {
        return Err(param(format!("{what} has length {} > {n}", f.len())));
    }
    let mut buf = Vec::with_capacity(n);
    buf.extend_from_slice(f);
    buf.resize(n, FieldElement::ZERO);
    Ok(buf)
}

/// Gao–Mateer polynomials of `f` at `x^(2^k) - x`: parts `ĥ_0, …, ĥ_{2^k-1}`
/// with `f = Σ x^i ĥ_i(x^(2^k) - x)`, each of length `⌈len(f) / 2^k⌉`.
pub fn taylor_expand(f: &FieldPoly, k: u32) -> Result<(Vec<FieldPoly>, OpCountReport)> {
    if k == 0 {
        return Err(param("taylor_expand needs k >= 1"));
    }
    if k >= usize::BITS - 1 {
        return Err(param(format!("2^{k} parts do not fit in memory")));
    }
    let t = 1usize << k;
    let part_len = f.len().div_ceil(t);
    let log_len = k + ceil_log2(part_len.max(1) as u32);
    let mut buf = padded(&f.coeffs, 1 << log_len, "polynomial")?;
    let mut c = OpCountReport::default();
    taylor_forward(&mut buf, 0, 1, log_len, k, &mut c);
    let parts = (0..t)
        .map(|i| FieldPoly::new((0..part_len).map(|q| buf[q * t + i]).collect()))
        .collect();
    Ok((parts, c))
}

/// Inverse of [`taylor_expand`]: `Σ x^i parts[i](x^(2^k) - x)`.
pub fn taylor_compose(parts: &[FieldPoly], k: u32) -> Result<(FieldPoly, OpCountReport)> {
    if k == 0 || k >= usize::BITS - 1 {
        return Err(param(format!("invalid Taylor exponent {k}")));
    }
    let t = 1usize << k;
    if parts.len() != t {
        return Err(param(format!("expected {t} parts, got {}", parts.len())));
    }
    let part_len = parts.iter().map(FieldPoly::len).max().unwrap_or(0).max(1);
    let log_part = ceil_log2(part_len as u32);
    let log_len = k + log_part;
    let mut buf = vec![FieldElement::ZERO; 1 << log_len];
    for (i, p) in parts.iter().enumerate() {
        for (q, &v) in p.coeffs.iter().enumerate() {
            buf[q * t + i] = v;
        }
    }
    let mut c = OpCountReport::default();
    taylor_inverse(&mut buf, 0, 1, log_len, k, &mut c);
    Ok((FieldPoly::new(buf), c))
}

/// Values `f(a + ϖ_i)` for `0 <= i < 2^m`.
///
/// `a` must have zero Cantor coordinates on `β_1..β_m`; `len(f) <= 2^m`.
pub fn evaluate_ea(
    field: &TowerField,
    f: &FieldPoly,
    a: FieldElement,
    m: u32,
) -> Result<(Vec<FieldElement>, OpCountReport)> {
    check_m(field, m)?;
    let a_idx = coset_index(field, a, m)?;
    let mut buf = padded(&f.coeffs, 1 << m, "polynomial")?;
    let mut c = OpCountReport::default();
    ea_in_place(field, &mut buf, 0, 1, m, a_idx, &mut c);
    Ok((buf, c))
}

/// Remainders `r_j = f mod (x^(2^(2^(l-1))) - x - (b + ϖ_j))` for
/// `0 <= j < 2^(m - 2^(l-1))`, each of length `2^(2^(l-1))`.
pub fn remainder_ra(
    field: &TowerField,
    f: &FieldPoly,
    b: FieldElement,
    m: u32,
    l: u32,
) -> Result<(Vec<FieldPoly>, OpCountReport)> {
    let k = check_ra_params(field, m, l)?;
    let b_idx = coset_index(field, b, m - k)?;
    let mut buf = padded(&f.coeffs, 1 << m, "polynomial")?;
    let mut c = OpCountReport::default();
    let t = 1usize << k;
    taylor_forward(&mut buf, 0, 1, m, k, &mut c);
    for i in 0..t {
        ea_in_place(field, &mut buf, i, t, m - k, b_idx, &mut c);
    }
    let parts = buf
        .chunks_exact(t)
        .map(|r| FieldPoly::new(r.to_vec()))
        .collect();
    Ok((parts, c))
}

/// Returns `k = 2^(l-1)` after checking `2^(l-1) < m <= 2^l`.
fn check_ra_params(field: &TowerField, m: u32, l: u32) -> Result<u32> {
    check_m(field, m)?;
    if l == 0 || l > 31 {
        return Err(param(format!("invalid remaindering level l = {l}")));
    }
    let k = 1u32 << (l - 1);
    if !(k < m && m <= 2 * k) {
        return Err(param(format!(
            "need 2^(l-1) < m <= 2^l, got m = {m}, l = {l}"
        )));
    }
    Ok(k)
}

/// The unique `f` of length `<= 2^m` with `f(a + ϖ_i) = v[i]`.
pub fn interpolate_ia(
    field: &TowerField,
    v: &[FieldElement],
    a: FieldElement,
    m: u32,
) -> Result<(FieldPoly, OpCountReport)> {
    check_m(field, m)?;
    if v.len() != 1 << m {
        return Err(param(format!(
            "expected {} values, got {}",
            1usize << m,
            v.len()
        )));
    }
    if let Some(x) = v.iter().find(|x| !field.contains(**x)) {
        return Err(Error::ForeignElement(x.bits()));
    }
    let a_idx = coset_index(field, a, m)?;
    let mut buf = v.to_vec();
    let mut c = OpCountReport::default();
    ia_in_place(field, &mut buf, 0, 1, m, a_idx, &mut c);
    Ok((FieldPoly::new(buf), c))
}

/// The unique `f` of length `<= 2^m` whose remainder modulo
/// `x^(2^(2^(l-1))) - x - (b + ϖ_j)` is `r[j]`.
pub fn reconstruct_dra(
    field: &TowerField,
    r: &[FieldPoly],
    b: FieldElement,
    m: u32,
    l: u32,
) -> Result<(FieldPoly, OpCountReport)> {
    let k = check_ra_params(field, m, l)?;
    let b_idx = coset_index(field, b, m - k)?;
    let t = 1usize << k;
    let n_parts = 1usize << (m - k);
    if r.len() != n_parts {
        return Err(param(format!(
            "expected {n_parts} remainders, got {}",
            r.len()
        )));
    }
    let mut buf = Vec::with_capacity(1 << m);
    for rj in r {
        buf.extend(padded(&rj.coeffs, t, "remainder")?);
    }
    let mut c = OpCountReport::default();
    for i in 0..t {
        ia_in_place(field, &mut buf, i, t, m - k, b_idx, &mut c);
    }
    taylor_inverse(&mut buf, 0, 1, m, k, &mut c);
    Ok((FieldPoly::new(buf), c))
}

/// `f·g` for `len(f), len(g) <= 2^m`, by evaluation at `ϖ_0..ϖ_{2^(m+1)-1}`,
/// pointwise products and interpolation. Needs `m + 1 <= 2^L`.
pub fn multiply_ma(
    field: &TowerField,
    f: &FieldPoly,
    g: &FieldPoly,
    m: u32,
) -> Result<(FieldPoly, OpCountReport)> {
    let n = m + 1;
    if n > field.width() {
        return Err(Error::FieldTooSmall {
            m: n,
            width: field.width(),
        });
    }
    check_m(field, n)?;
    let half = 1usize << m;
    if f.len() > half || g.len() > half {
        return Err(param(format!("factors must have length <= {half}")));
    }
    let mut u = padded(&f.coeffs, 1 << n, "factor")?;
    let mut v = padded(&g.coeffs, 1 << n, "factor")?;
    let mut c = OpCountReport::default();
    ea_in_place(field, &mut u, 0, 1, n, 0, &mut c);
    ea_in_place(field, &mut v, 0, 1, n, 0, &mut c);
    for (x, &y) in u.iter_mut().zip(&v) {
        *x = field.mul(*x, y);
    }
    c.field_mults += u.len() as u64;
    ia_in_place(field, &mut u, 0, 1, n, 0, &mut c);
    Ok((FieldPoly::new(u), c))
}
