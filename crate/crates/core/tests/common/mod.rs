//! Reference implementations used as test oracles. None of them calls the
//! arithmetic under test: field products are shift-and-add modulo the
//! minimal polynomial, polynomial products are plain convolutions.

#![allow(dead_code)]

use binpoly::{BitPoly, FieldElement, FieldPoly, TowerField};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn mask(width: u32) -> u64 {
    if width == 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

pub fn fe(x: u64) -> FieldElement {
    FieldElement::new(x)
}

fn minpoly_bits(field: &TowerField) -> u128 {
    let w = field.minpoly().words();
    w[0] as u128 | (w.get(1).copied().unwrap_or(0) as u128) << 64
}

pub fn field_mul(field: &TowerField, x: FieldElement, y: FieldElement) -> FieldElement {
    let width = field.width();
    let modulus = minpoly_bits(field);
    let mut a = x.bits() as u128;
    let mut acc = 0u128;
    for k in 0..width {
        if (y.bits() >> k) & 1 == 1 {
            acc ^= a;
        }
        a <<= 1;
        if (a >> width) & 1 == 1 {
            a ^= modulus;
        }
    }
    fe(acc as u64)
}

/// `Σ_{k: bit k of i} β_{k+1}`.
pub fn omega(field: &TowerField, i: u64) -> FieldElement {
    field
        .cantor_basis()
        .iter()
        .enumerate()
        .filter(|(k, _)| (i >> k) & 1 == 1)
        .fold(FieldElement::ZERO, |acc, (_, &b)| acc + b)
}

pub fn horner(field: &TowerField, coeffs: &[FieldElement], x: FieldElement) -> FieldElement {
    coeffs
        .iter()
        .rev()
        .fold(FieldElement::ZERO, |acc, &c| field_mul(field, acc, x) + c)
}

pub fn poly_mul(field: &TowerField, f: &[FieldElement], g: &[FieldElement]) -> Vec<FieldElement> {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let mut out = vec![FieldElement::ZERO; f.len() + g.len() - 1];
    for (i, &a) in f.iter().enumerate() {
        for (j, &b) in g.iter().enumerate() {
            out[i + j] += field_mul(field, a, b);
        }
    }
    out
}

/// Remainder of `f` modulo a monic `modulus`, by long division.
pub fn rem_monic(
    field: &TowerField,
    f: &[FieldElement],
    modulus: &[FieldElement],
) -> Vec<FieldElement> {
    let d = modulus.len() - 1;
    assert_eq!(modulus[d], FieldElement::ONE);
    let mut r = f.to_vec();
    for i in (d..r.len()).rev() {
        let q = r[i];
        if !q.is_zero() {
            for (j, &c) in modulus.iter().enumerate() {
                r[i - d + j] += field_mul(field, q, c);
            }
        }
    }
    r.truncate(d);
    r.resize(d, FieldElement::ZERO);
    r
}

/// `x^(2^k) + x + c`, low coefficient first.
pub fn subspace_poly(k: u32, c: FieldElement) -> Vec<FieldElement> {
    let t = 1usize << k;
    let mut p = vec![FieldElement::ZERO; t + 1];
    p[0] = c;
    p[1] = FieldElement::ONE;
    p[t] = FieldElement::ONE;
    p
}

/// GF(2) convolution on bit vectors.
pub fn bit_convolution(f: &[bool], g: &[bool]) -> Vec<bool> {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let mut out = vec![false; f.len() + g.len() - 1];
    for (i, &a) in f.iter().enumerate() {
        if a {
            for (j, &b) in g.iter().enumerate() {
                out[i + j] ^= b;
            }
        }
    }
    out
}

pub fn bits_of(p: &BitPoly) -> Vec<bool> {
    (0..p.len()).map(|k| p.coeff(k)).collect()
}

pub fn trim(mut v: Vec<FieldElement>) -> Vec<FieldElement> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

pub fn random_element(rng: &mut ChaCha8Rng, field: &TowerField) -> FieldElement {
    fe(rng.random::<u64>() & mask(field.width()))
}

pub fn random_coeffs(rng: &mut ChaCha8Rng, field: &TowerField, len: usize) -> Vec<FieldElement> {
    (0..len).map(|_| random_element(rng, field)).collect()
}

pub fn random_field_poly(rng: &mut ChaCha8Rng, field: &TowerField, len: usize) -> FieldPoly {
    FieldPoly::new(random_coeffs(rng, field, len))
}

pub fn random_bit_poly(rng: &mut ChaCha8Rng, len: usize) -> BitPoly {
    BitPoly::from_bits((0..len).map(|_| rng.random::<bool>()))
}

/// Random polynomial with exactly `len` coefficients (top one set).
pub fn random_bit_poly_exact(rng: &mut ChaCha8Rng, len: usize) -> BitPoly {
    BitPoly::from_bits((0..len).map(|k| k + 1 == len || rng.random::<bool>()))
}

/// A random element whose Cantor coordinates on `β_1..β_m` vanish.
pub fn random_coset(rng: &mut ChaCha8Rng, field: &TowerField, m: u32) -> FieldElement {
    let low = if m >= 64 { u64::MAX } else { (1u64 << m) - 1 };
    omega(field, rng.random::<u64>() & mask(field.width()) & !low)
}
