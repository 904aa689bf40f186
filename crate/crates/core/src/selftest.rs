//! Invariant suites behind `binpoly selftest`.
//!
//! Every suite walks its instances from small to large and stops at the
//! first failure, so the instance it reports is the smallest failing one.
//! Randomness comes from one ChaCha stream per suite, derived from the seed,
//! so equal seeds give byte-identical reports.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bounds;
use crate::error::{param, Result};
use crate::fft::{
    ceil_log2, evaluate_ea, interpolate_ia, multiply_ma, reconstruct_dra, remainder_ra,
    taylor_compose, taylor_expand, FieldPoly,
};
use crate::poly::BitPoly;
use crate::sma::{self, multiply_sma_with, SmaConfig};
use crate::tower::{FieldElement, TowerField, MAX_LEVEL};

pub const SUITES: [&str; 7] = [
    "cantor-chain",
    "index-shift",
    "taylor-identity",
    "ea-ia-roundtrip",
    "ra-dra-roundtrip",
    "oracle-equivalence",
    "counter-bounds",
];

/// `Err` carries a description of the failing instance.
pub type Check<T = ()> = std::result::Result<T, String>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteOutcome {
    pub suite: &'static str,
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelftestReport {
    pub outcomes: Vec<SuiteOutcome>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.failure.is_none())
    }

    pub fn outcome(&self, suite: &str) -> Option<&SuiteOutcome> {
        self.outcomes.iter().find(|o| o.suite == suite)
    }
}

/// One line per suite: `PASS <suite>` or `FAIL <suite>: <instance>`.
impl fmt::Display for SelftestReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for o in &self.outcomes {
            match &o.failure {
                None => writeln!(f, "PASS {}", o.suite)?,
                Some(why) => writeln!(f, "FAIL {}: {why}", o.suite)?,
            }
        }
        Ok(())
    }
}

/// Runs all suites over the shared towers of levels `1..=max_level`.
pub fn run_selftest(max_level: u32, seed: u64) -> Result<SelftestReport> {
    if !(1..=MAX_LEVEL).contains(&max_level) {
        return Err(param(format!(
            "max level {max_level} outside 1..={MAX_LEVEL}"
        )));
    }
    let fields = (1..=max_level)
        .map(sma::tower)
        .collect::<Result<Vec<_>>>()?;
    Ok(run_selftest_on(&fields, seed))
}

/// Runs all suites over the given fields, which need not be well formed.
pub fn run_selftest_on(fields: &[&TowerField], seed: u64) -> SelftestReport {
    let max_level = fields.iter().map(|f| f.level()).max().unwrap_or(1);
    let outcomes = SUITES
        .iter()
        .enumerate()
        .map(|(idx, &suite)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(idx as u64);
            let result = match suite {
                "cantor-chain" => fields.iter().try_for_each(|f| check_cantor_chain(f)),
                "index-shift" => fields.iter().try_for_each(|f| index_shift(f, &mut rng)),
                "taylor-identity" => fields.iter().try_for_each(|f| taylor_identity(f, &mut rng)),
                "ea-ia-roundtrip" => fields.iter().try_for_each(|f| ea_ia_roundtrip(f, &mut rng)),
                "ra-dra-roundtrip" => fields
                    .iter()
                    .try_for_each(|f| ra_dra_roundtrip(f, &mut rng)),
                "oracle-equivalence" => oracle_equivalence(max_level, &mut rng),
                "counter-bounds" => counter_bounds(fields, max_level, &mut rng),
                _ => unreachable!(),
            };
            SuiteOutcome {
                suite,
                failure: result.err(),
            }
        })
        .collect();
    SelftestReport { outcomes }
}

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn low_mask(bits: u32) -> u64 {
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

pub(crate) fn random_element(rng: &mut ChaCha8Rng, field: &TowerField) -> FieldElement {
    FieldElement::new(rng.random::<u64>() & low_mask(field.width()))
}

pub(crate) fn random_field_poly(rng: &mut ChaCha8Rng, field: &TowerField, len: usize) -> FieldPoly {
    FieldPoly::new((0..len).map(|_| random_element(rng, field)).collect())
}

pub(crate) fn random_bit_poly(rng: &mut ChaCha8Rng, len: usize) -> BitPoly {
    BitPoly::from_bits((0..len).map(|_| rng.random::<bool>()))
}

/// A random element whose Cantor coordinates `β_1..β_m` vanish.
fn random_coset(rng: &mut ChaCha8Rng, field: &TowerField, m: u32) -> Check<FieldElement> {
    let idx = rng.random::<u64>() & low_mask(field.width()) & !low_mask(m);
    field.omega(idx).map_err(|e| e.to_string())
}

/// `β_1 = 1`, `β_i² + β_i = β_{i-1}`, and the minimal polynomial of the top
/// element has full degree and vanishes there.
pub fn check_cantor_chain(field: &TowerField) -> Check {
    field
        .check_invariants()
        .map_err(|e| format!("level {}: {e}", field.level()))
}

fn index_shift(field: &TowerField, rng: &mut ChaCha8Rng) -> Check {
    let level = field.level();
    let width = field.width();
    let mut indices: Vec<u64> = if width <= 4 {
        (0..1u64 << width).collect()
    } else {
        (0..1000)
            .map(|_| rng.random::<u64>() & low_mask(width))
            .collect()
    };
    indices.sort_unstable();
    let err = |e: crate::Error| e.to_string();
    for &j in &indices {
        let w = field.omega(j).map_err(err)?;
        let got = field.index_of(field.psi(w)).map_err(err)?;
        ensure(got == j >> 1, || {
            format!(
                "level {level}: index_of(psi(omega({j}))) = {got}, expected {}",
                j >> 1
            )
        })?;
        for s in 0..=level {
            let shift = 1u32 << s;
            let got = field.index_of(field.phi(s, w).map_err(err)?).map_err(err)?;
            let want = j.checked_shr(shift).unwrap_or(0);
            ensure(got == want, || {
                format!("level {level}: index_of(phi({s}, omega({j}))) = {got}, expected {want}")
            })?;
        }
    }
    for pair in indices.windows(2) {
        let (i, j) = (pair[0], pair[1]);
        let sum = field.omega(i).map_err(err)? + field.omega(j).map_err(err)?;
        ensure(sum == field.omega(i ^ j).map_err(err)?, || {
            format!("level {level}: omega({i}) + omega({j}) != omega({})", i ^ j)
        })?;
    }
    Ok(())
}

/// `Σ_i x^i parts[i](x^(2^k) + x)`, by Horner's rule on full polynomials.
pub(crate) fn naive_taylor_compose(field: &TowerField, parts: &[FieldPoly], k: u32) -> FieldPoly {
    let t = 1usize << k;
    let mut q = vec![FieldElement::ZERO; t + 1];
    q[1] = FieldElement::ONE;
    q[t] = FieldElement::ONE;
    let q = FieldPoly::new(q);
    let mut total = FieldPoly::zero();
    for (i, part) in parts.iter().enumerate() {
        let mut acc = FieldPoly::zero();
        for &c in part.coeffs().iter().rev() {
            acc = acc.mul_schoolbook(field, &q).add(&FieldPoly::new(vec![c]));
        }
        let mut shifted = vec![FieldElement::ZERO; i];
        shifted.extend_from_slice(acc.coeffs());
        total = total.add(&FieldPoly::new(shifted));
    }
    total
}

fn taylor_identity(field: &TowerField, rng: &mut ChaCha8Rng) -> Check {
    let level = field.level();
    for k in 1..=3u32 {
        let t = 1usize << k;
        for len in [1, 2, 5, t, t + 1, 17, 64] {
            let f = random_field_poly(rng, field, len);
            let (parts, _) = taylor_expand(&f, k).map_err(|e| e.to_string())?;
            ensure(parts.len() == t, || {
                format!("level {level}: k = {k} gave {} parts", parts.len())
            })?;
            ensure(naive_taylor_compose(field, &parts, k) == f, || {
                format!("level {level}: k = {k}, len = {len}: expansion does not recompose")
            })?;
            let (back, _) = taylor_compose(&parts, k).map_err(|e| e.to_string())?;
            ensure(back == f, || {
                format!("level {level}: k = {k}, len = {len}: taylor_compose is not the inverse")
            })?;
        }
    }
    Ok(())
}

fn ea_ia_roundtrip(field: &TowerField, rng: &mut ChaCha8Rng) -> Check {
    let level = field.level();
    for m in 1..=field.width().min(8) {
        for _ in 0..3 {
            let f = random_field_poly(rng, field, 1 << m);
            let a = random_coset(rng, field, m)?;
            let (values, _) = evaluate_ea(field, &f, a, m).map_err(|e| e.to_string())?;
            for (i, &v) in values.iter().enumerate() {
                let x = a + field.omega(i as u64).map_err(|e| e.to_string())?;
                ensure(v == f.eval(field, x), || {
                    format!("level {level}, m = {m}, a = {a}: EA differs from Horner at point {i}")
                })?;
            }
            let (back, _) = interpolate_ia(field, &values, a, m).map_err(|e| e.to_string())?;
            ensure(back == f, || {
                format!("level {level}, m = {m}, a = {a}: IA(EA(f)) != f")
            })?;
        }
    }
    Ok(())
}

/// `x^(2^k) + x + c`.
pub(crate) fn subspace_modulus(k: u32, c: FieldElement) -> FieldPoly {
    let t = 1usize << k;
    let mut coeffs = vec![FieldElement::ZERO; t + 1];
    coeffs[0] = c;
    coeffs[1] = FieldElement::ONE;
    coeffs[t] = FieldElement::ONE;
    FieldPoly::new(coeffs)
}

fn ra_dra_roundtrip(field: &TowerField, rng: &mut ChaCha8Rng) -> Check {
    let level = field.level();
    for m in 2..=field.width().min(8) {
        let l = ceil_log2(m);
        let k = 1u32 << (l - 1);
        for _ in 0..3 {
            let f = random_field_poly(rng, field, 1 << m);
            let b = random_coset(rng, field, m - k)?;
            let (rems, _) = remainder_ra(field, &f, b, m, l).map_err(|e| e.to_string())?;
            for (j, r) in rems.iter().enumerate() {
                let c = b + field.omega(j as u64).map_err(|e| e.to_string())?;
                let want = f
                    .rem_monic(field, &subspace_modulus(k, c))
                    .map_err(|e| e.to_string())?;
                ensure(*r == want, || {
                    format!(
                        "level {level}, m = {m}, b = {b}: remainder {j} differs from long division"
                    )
                })?;
            }
            let (back, _) = reconstruct_dra(field, &rems, b, m, l).map_err(|e| e.to_string())?;
            ensure(back == f, || {
                format!("level {level}, m = {m}, b = {b}: DRA(RA(f)) != f")
            })?;
        }
    }
    Ok(())
}

fn oracle_equivalence(max_level: u32, rng: &mut ChaCha8Rng) -> Check {
    let forced = SmaConfig::forced();
    for a in 0u64..16 {
        for b in 0u64..16 {
            let (f, g) = (BitPoly::from_words(vec![a]), BitPoly::from_words(vec![b]));
            let got = multiply_sma_with(&f, &g, &forced).product;
            ensure(got == f.mul_schoolbook(&g), || format!("{f} * {g}"))?;
        }
    }
    let max_m = (2 * max_level + 2).min(12);
    for m in 1..=max_m {
        for _ in 0..4 {
            let lo = (1usize << (m - 1)) + 1;
            let la = rng.random_range(lo..=1 << m);
            let lb = rng.random_range(1..=1 << m);
            let f = random_bit_poly(rng, la);
            let g = random_bit_poly(rng, lb);
            let want = f.mul_schoolbook(&g);
            ensure(multiply_sma_with(&f, &g, &forced).product == want, || {
                format!("m = {m}: forced transform product of {f} and {g}")
            })?;
            ensure(
                multiply_sma_with(&f, &g, &SmaConfig::default()).product == want,
                || format!("m = {m}: default product of {f} and {g}"),
            )?;
        }
    }
    Ok(())
}

fn counter_bounds(fields: &[&TowerField], max_level: u32, rng: &mut ChaCha8Rng) -> Check {
    for field in fields.iter().filter(|f| f.level() <= 4) {
        let level = field.level();
        for m in 2..=field.width().min(8) {
            let f = random_field_poly(rng, field, 1 << m);
            let a = random_coset(rng, field, m)?;
            let (values, ea) = evaluate_ea(field, &f, a, m).map_err(|e| e.to_string())?;
            let (_, ia) = interpolate_ia(field, &values, a, m).map_err(|e| e.to_string())?;
            for (name, c) in [("EA", ea), ("IA", ia)] {
                ensure(c.field_mults <= bounds::ea_mults(m), || {
                    format!(
                        "level {level}, m = {m}: {name} used {} mults",
                        c.field_mults
                    )
                })?;
                ensure(c.field_adds <= bounds::ea_adds_tight(m), || {
                    format!("level {level}, m = {m}: {name} used {} adds", c.field_adds)
                })?;
            }
        }
        for m in 1..field.width().min(8) {
            let f = random_field_poly(rng, field, 1 << m);
            let g = random_field_poly(rng, field, 1 << m);
            let (_, c) = multiply_ma(field, &f, &g, m).map_err(|e| e.to_string())?;
            ensure(
                c.field_mults <= bounds::ma_mults(m) && c.field_adds <= bounds::ma_adds(m),
                || format!("level {level}, m = {m}: MA used {c:?}"),
            )?;
        }
    }
    for m in 7..=(6 + max_level).min(12) {
        let f = random_bit_poly(rng, 1 << m);
        let g = random_bit_poly(rng, 1 << m);
        let run = multiply_sma_with(&f, &g, &SmaConfig::forced());
        let Some(level) = run.level else {
            return Err(format!("m = {m}: forced product bypassed the transform"));
        };
        let c = run.report;
        ensure(c.field_mults <= bounds::sma_mults(run.m, level), || {
            format!("m = {}: SMA used {} mults", run.m, c.field_mults)
        })?;
        ensure(c.field_adds <= bounds::sma_adds(run.m, level), || {
            format!("m = {}: SMA used {} adds", run.m, c.field_adds)
        })?;
        ensure(
            bounds::bit_op_estimate(&c, level) <= bounds::sma_bit_ops(run.m),
            || {
                format!(
                    "m = {}: SMA bit-operation estimate exceeds its budget",
                    run.m
                )
            },
        )?;
    }
    Ok(())
}
