//! Property tests for the transforms and the multiplier, each against an
//! oracle from `common`.

mod common;

use binpoly::bounds;
use binpoly::fft::{
    evaluate_ea, interpolate_ia, multiply_ma, reconstruct_dra, remainder_ra, taylor_compose,
    taylor_expand,
};
use binpoly::sma::{multiply_sma_with, tower, SmaConfig};
use binpoly::{multiply_sma, BitPoly, Degree, FieldPoly};
use common::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// `(level, m)` with `1 <= m <= 2^level`.
fn level_and_m(max_level: u32) -> impl Strategy<Value = (u32, u32)> {
    (1..=max_level).prop_flat_map(|l| (Just(l), 1..=(1u32 << l).min(10)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ea_matches_horner((level, m) in level_and_m(4), seed: u64) {
        let field = tower(level).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_coeffs(&mut rng, field, 1 << m);
        let a = random_coset(&mut rng, field, m);
        let (values, _) = evaluate_ea(field, &FieldPoly::new(f.clone()), a, m).unwrap();
        prop_assert_eq!(values.len(), 1 << m);
        for (i, &v) in values.iter().enumerate() {
            prop_assert_eq!(v, horner(field, &f, a + omega(field, i as u64)));
        }
    }

    #[test]
    fn ia_inverts_ea((level, m) in level_and_m(5), seed: u64) {
        let field = tower(level).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_field_poly(&mut rng, field, 1 << m);
        let a = random_coset(&mut rng, field, m);
        let (values, ea) = evaluate_ea(field, &f, a, m).unwrap();
        let (back, ia) = interpolate_ia(field, &values, a, m).unwrap();
        prop_assert_eq!(back, f);
        for c in [ea, ia] {
            prop_assert!(c.field_mults <= bounds::ea_mults(m));
            prop_assert!(c.field_adds <= bounds::ea_adds_tight(m));
        }
    }

    #[test]
    fn ra_matches_long_division_and_dra_inverts((level, m) in level_and_m(4), seed: u64) {
        prop_assume!(m >= 2);
        let field = tower(level).unwrap();
        let l = 32 - (m - 1).leading_zeros();
        let k = 1u32 << (l - 1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_coeffs(&mut rng, field, 1 << m);
        let b = random_coset(&mut rng, field, m - k);
        let (rems, _) = remainder_ra(field, &FieldPoly::new(f.clone()), b, m, l).unwrap();
        prop_assert_eq!(rems.len(), 1 << (m - k));
        for (j, r) in rems.iter().enumerate() {
            let modulus = subspace_poly(k, b + omega(field, j as u64));
            prop_assert_eq!(r, &FieldPoly::new(rem_monic(field, &f, &modulus)));
        }
        let (back, _) = reconstruct_dra(field, &rems, b, m, l).unwrap();
        prop_assert_eq!(back, FieldPoly::new(f));
    }

    #[test]
    fn taylor_expansion_recomposes(level in 1u32..=4, k in 1u32..=4, len in 1usize..100, seed: u64) {
        let field = tower(level).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_coeffs(&mut rng, field, len);
        let (parts, c) = taylor_expand(&FieldPoly::new(f.clone()), k).unwrap();
        prop_assert_eq!(c.field_mults, 0);
        // f = Σ x^i ĥ_i(q) with q = x^(2^k) + x
        let q = subspace_poly(k, binpoly::FieldElement::ZERO);
        let mut total = vec![];
        for (i, part) in parts.iter().enumerate() {
            let mut acc: Vec<binpoly::FieldElement> = vec![];
            for &coef in part.coeffs().iter().rev() {
                acc = poly_mul(field, &acc, &q);
                if acc.is_empty() {
                    acc.push(coef);
                } else {
                    acc[0] += coef;
                }
            }
            let mut shifted = vec![binpoly::FieldElement::ZERO; i];
            shifted.extend(acc);
            if total.len() < shifted.len() {
                total.resize(shifted.len(), binpoly::FieldElement::ZERO);
            }
            for (t, s) in total.iter_mut().zip(shifted) {
                *t += s;
            }
        }
        prop_assert_eq!(trim(total), trim(f.clone()));
        let (back, _) = taylor_compose(&parts, k).unwrap();
        prop_assert_eq!(back, FieldPoly::new(f));
    }

    #[test]
    fn ma_matches_convolution(level in 1u32..=4, m in 1u32..=7, seed: u64) {
        prop_assume!(m < 1 << level);
        let field = tower(level).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_coeffs(&mut rng, field, 1 << m);
        let g = random_coeffs(&mut rng, field, 1 << m);
        let (h, c) = multiply_ma(field, &FieldPoly::new(f.clone()), &FieldPoly::new(g.clone()), m).unwrap();
        prop_assert_eq!(h, FieldPoly::new(poly_mul(field, &f, &g)));
        prop_assert!(c.field_mults <= bounds::ma_mults(m));
        prop_assert!(c.field_adds <= bounds::ma_adds(m));
    }

    #[test]
    fn sma_matches_convolution(la in 0usize..600, lb in 0usize..600, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_bit_poly(&mut rng, la);
        let g = random_bit_poly(&mut rng, lb);
        let want = BitPoly::from_bits(bit_convolution(&bits_of(&f), &bits_of(&g)));
        prop_assert_eq!(&multiply_sma_with(&f, &g, &SmaConfig::forced()).product, &want);
        prop_assert_eq!(&multiply_sma(&f, &g), &want);
    }

    #[test]
    fn sma_ring_laws(la in 1usize..300, lb in 1usize..300, lc in 1usize..300, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_bit_poly(&mut rng, la);
        let g = random_bit_poly(&mut rng, lb);
        let h = random_bit_poly(&mut rng, lc);
        let cfg = SmaConfig::forced();
        let mul = |a: &BitPoly, b: &BitPoly| multiply_sma_with(a, b, &cfg).product;
        prop_assert_eq!(mul(&f, &g), mul(&g, &f));
        prop_assert_eq!(mul(&mul(&f, &g), &h), mul(&f, &mul(&g, &h)));
        prop_assert_eq!(mul(&f, &(&g + &h)), &mul(&f, &g) + &mul(&f, &h));
    }

    #[test]
    fn sma_degree_adds(la in 1usize..2000, lb in 1usize..2000, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_bit_poly_exact(&mut rng, la);
        let g = random_bit_poly_exact(&mut rng, lb);
        let p = multiply_sma_with(&f, &g, &SmaConfig::forced()).product;
        prop_assert_eq!(p.degree(), Degree::Finite(la + lb - 2));
    }

    #[test]
    fn sma_counters_within_bounds(m in 1u32..=12, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_bit_poly_exact(&mut rng, 1 << m);
        let g = random_bit_poly_exact(&mut rng, 1 << m);
        let run = multiply_sma_with(&f, &g, &SmaConfig::forced());
        let level = run.level.unwrap();
        prop_assert_eq!(run.m, m);
        prop_assert!(run.report.field_mults <= bounds::sma_mults(m, level));
        prop_assert!(run.report.field_adds <= bounds::sma_adds(m, level));
        prop_assert!(bounds::bit_op_estimate(&run.report, level) <= bounds::sma_bit_ops(m));
    }
}

#[test]
fn index_addition_identity_exhaustive() {
    for level in 1..=2u32 {
        let field = tower(level).unwrap();
        let n = 1u64 << field.width();
        for s in 0..=level {
            let step = 1u64 << (1u32 << s);
            for i in 0..step.min(n) {
                for j in 0..n.div_ceil(step) {
                    let lhs = field.omega(j * step).unwrap() + field.omega(i).unwrap();
                    assert_eq!(
                        lhs,
                        field.omega(i + j * step).unwrap(),
                        "L={level} s={s} i={i} j={j}"
                    );
                }
            }
        }
    }
}

#[test]
fn field_mul_matches_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for level in 1..=6 {
        let field = tower(level).unwrap();
        for _ in 0..2000 {
            let (x, y) = (
                random_element(&mut rng, field),
                random_element(&mut rng, field),
            );
            assert_eq!(field.mul(x, y), field_mul(field, x, y));
        }
    }
}

#[test]
fn omega_matches_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for level in 1..=6 {
        let field = tower(level).unwrap();
        for _ in 0..1000 {
            let i = rand::Rng::random::<u64>(&mut rng) & mask(field.width());
            assert_eq!(field.omega(i).unwrap(), omega(field, i));
        }
    }
}

#[test]
fn gf2_product_examples() {
    // (x³+x+1)(x³+x²+1) = x⁶+x⁵+x⁴+x³+x²+x+1
    let f = BitPoly::from_exponents(&[0, 1, 3]);
    let g = BitPoly::from_exponents(&[0, 2, 3]);
    let want = BitPoly::from_exponents(&[0, 1, 2, 3, 4, 5, 6]);
    assert_eq!(
        multiply_sma_with(&f, &g, &SmaConfig::forced()).product,
        want
    );
    assert_eq!(f.mul_karatsuba(&g), want);
    assert_eq!(f.mul_schoolbook(&g), want);
    let one = BitPoly::one();
    assert_eq!(multiply_sma(&one, &one), one);
    assert!(multiply_sma(&BitPoly::zero(), &f).is_zero());
}

#[test]
fn taylor_additions_within_budget() {
    let field = tower(3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for log_len in 1..=12u32 {
        for k in 1..=log_len {
            let f = random_field_poly(&mut rng, field, 1 << log_len);
            let (_, c) = taylor_expand(&f, k).unwrap();
            assert!(
                c.field_adds <= bounds::taylor_adds(log_len, k),
                "n = {log_len}, k = {k}"
            );
            // half of every block is touched: 2^(n-1)(n-k)
            assert_eq!(c.field_adds, (1u64 << (log_len - 1)) * (log_len - k) as u64);
        }
    }
}
