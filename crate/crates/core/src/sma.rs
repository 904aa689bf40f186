//! Multiplication in GF(2)[x] through the tower-field transform.
//!
//! Both factors are cut into chunks of `2^(L-1)` bits. Each chunk becomes one
//! field coefficient by reading its bits as coordinates on `1, β, …, β^(2^(L-1)-1)`
//! with `β = β_{2^L}`. Products of two chunks have degree below `2^L`, so the
//! coordinates of every coefficient of the field product are exactly the GF(2)
//! block products, which overlap by half a block when recombined.

use std::sync::OnceLock;

use crate::error::{param, Result};
use crate::fft::{ceil_log2, multiply_ma, FieldPoly, OpCountReport};
use crate::poly::BitPoly;
use crate::tower::{build_tower, FieldElement, TowerField, MAX_LEVEL};

/// Inputs of at most `2^DEFAULT_CROSSOVER` coefficients go to Karatsuba.
pub const DEFAULT_CROSSOVER: u32 = 6;

static TOWERS: [OnceLock<TowerField>; MAX_LEVEL as usize] =
    [const { OnceLock::new() }; MAX_LEVEL as usize];

/// Shared default-strategy tower of the given level, built on first use.
pub fn tower(level: u32) -> Result<&'static TowerField> {
    if !(1..=MAX_LEVEL).contains(&level) {
        return Err(param(format!(
            "tower level {level} outside 1..={MAX_LEVEL}"
        )));
    }
    let slot = &TOWERS[level as usize - 1];
    if let Some(f) = slot.get() {
        return Ok(f);
    }
    let f = build_tower(level)?;
    Ok(slot.get_or_init(|| f))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SmaConfig {
    /// Products with both inputs of length `<= 2^crossover` use Karatsuba.
    pub crossover: u32,
}

impl Default for SmaConfig {
    fn default() -> Self {
        Self {
            crossover: DEFAULT_CROSSOVER,
        }
    }
}

impl SmaConfig {
    /// Always take the transform path (except for constants).
    pub fn forced() -> Self {
        Self { crossover: 0 }
    }
}

/// Block layout for inputs of length `<= 2^m`.
#[derive(Debug, Clone, Copy)]
pub struct SmaPlan<'f> {
    m: u32,
    level: u32,
    field: &'f TowerField,
    chunk: usize,
    packed_len: usize,
}

/// `⌈log2(m + 1)⌉`, the tower level used for inputs of length `2^m`.
pub fn level_for(m: u32) -> u32 {
    ceil_log2(m + 1)
}

impl SmaPlan<'static> {
    pub fn new(m: u32) -> Result<Self> {
        let level = Self::check(m)?;
        SmaPlan::with_field(m, tower(level)?)
    }
}

impl<'f> SmaPlan<'f> {
    fn check(m: u32) -> Result<u32> {
        if m == 0 || m >= usize::BITS - 1 {
            return Err(param(format!(
                "special multiplication needs 1 <= m < {}",
                usize::BITS - 1
            )));
        }
        Ok(level_for(m))
    }

    /// Uses a caller-supplied field, which must have level `⌈log2(m + 1)⌉`.
    pub fn with_field(m: u32, field: &'f TowerField) -> Result<Self> {
        let level = Self::check(m)?;
        if field.level() != level {
            return Err(param(format!(
                "m = {m} needs tower level {level}, got {}",
                field.level()
            )));
        }
        Ok(Self {
            m,
            level,
            field,
            chunk: 1 << (level - 1),
            packed_len: 1 << (m - level + 1),
        })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn field(&self) -> &'f TowerField {
        self.field
    }

    /// Bits per packed coefficient, `2^(L-1)`.
    pub fn chunk(&self) -> usize {
        self.chunk
    }

    /// Coefficients per packed factor, `2^(m-L+1)`.
    pub fn packed_len(&self) -> usize {
        self.packed_len
    }

    /// Size exponent handed to the field multiplication, `m - L + 1`.
    pub fn ma_m(&self) -> u32 {
        self.m - self.level + 1
    }
}

/// Loads chunk `i` of `f` into the low bits of coefficient `i`.
pub fn pack(f: &BitPoly, plan: &SmaPlan<'_>) -> Result<FieldPoly> {
    let n = 1usize << plan.m;
    if f.significant_len() > n {
        return Err(param(format!(
            "input length {} exceeds 2^{}",
            f.significant_len(),
            plan.m
        )));
    }
    let chunk = plan.chunk;
    let mask = (1u64 << chunk) - 1;
    let words = f.words();
    let coeffs = (0..plan.packed_len)
        .map(|i| {
            let bit = chunk * i;
            let w = words.get(bit / 64).copied().unwrap_or(0);
            FieldElement::new((w >> (bit % 64)) & mask)
        })
        .collect();
    Ok(FieldPoly::new(coeffs))
}

/// Reads each coefficient's coordinates as a GF(2) block of `2^L` bits and
/// XORs block `i` in at offset `2^(L-1)·i`.
pub fn unpack_combine(h: &FieldPoly, plan: &SmaPlan<'_>) -> Result<BitPoly> {
    let mut c = OpCountReport::default();
    unpack_counted(h, plan, &mut c)
}

fn unpack_counted(h: &FieldPoly, plan: &SmaPlan<'_>, c: &mut OpCountReport) -> Result<BitPoly> {
    let max_len = 2 * plan.packed_len;
    if h.len() > max_len {
        return Err(param(format!(
            "packed product has {} > {max_len} coefficients",
            h.len()
        )));
    }
    let width = plan.field.width() as usize;
    let chunk = plan.chunk;
    let n_bits = chunk * h.len() + width;
    let mut out = vec![0u64; n_bits.div_ceil(64) + 1];
    for (i, &ci) in h.coeffs().iter().enumerate() {
        if !plan.field.contains(ci) {
            return Err(crate::Error::ForeignElement(ci.bits()));
        }
        let v = ci.bits();
        let bit = chunk * i;
        let (w, b) = (bit / 64, bit % 64);
        out[w] ^= v << b;
        if b != 0 && b + width > 64 {
            out[w + 1] ^= v >> (64 - b);
        }
    }
    c.field_adds += h.len() as u64;
    Ok(BitPoly::from_words_len(out, n_bits))
}

/// Product plus what it cost.
#[derive(Debug, Clone)]
pub struct SmaRun {
    pub product: BitPoly,
    pub report: OpCountReport,
    /// Smallest `m` with both inputs of length `<= 2^m`.
    pub m: u32,
    /// Tower level used, or `None` when the product bypassed the transform.
    pub level: Option<u32>,
}

/// Smallest `m` with `len(f), len(g) <= 2^m`.
pub fn size_exponent(f: &BitPoly, g: &BitPoly) -> u32 {
    let n = f.significant_len().max(g.significant_len());
    if n <= 1 {
        0
    } else {
        usize::BITS - (n - 1).leading_zeros()
    }
}

pub fn multiply_sma(f: &BitPoly, g: &BitPoly) -> BitPoly {
    multiply_sma_with(f, g, &SmaConfig::default()).product
}

pub fn multiply_sma_with(f: &BitPoly, g: &BitPoly, config: &SmaConfig) -> SmaRun {
    let (na, nb) = (f.significant_len(), g.significant_len());
    let m = size_exponent(f, g);
    let bypass = |product| SmaRun {
        product,
        report: OpCountReport::default(),
        m,
        level: None,
    };
    if na == 0 || nb == 0 {
        return bypass(BitPoly::zero());
    }
    if m == 0 {
        // both are the constant 1
        return bypass(BitPoly::one());
    }
    if m <= config.crossover {
        return bypass(f.mul_karatsuba(g));
    }
    let plan = SmaPlan::new(m).expect("m is bounded by the input length");
    let ff = pack(f, &plan).expect("length checked");
    let gg = pack(g, &plan).expect("length checked");
    let (h, mut report) =
        multiply_ma(plan.field, &ff, &gg, plan.ma_m()).expect("plan satisfies m - L + 2 <= 2^L");
    let product =
        unpack_counted(&h, &plan, &mut report).expect("product coefficients lie in the field");
    SmaRun {
        product: product.truncated(na + nb - 1),
        report,
        m,
        level: Some(plan.level),
    }
}

/// Carry-less product of two field coordinate words through the transform,
/// for the recursive field multiplication strategy.
pub(crate) fn coordinate_product(a: u64, b: u64) -> u128 {
    let run = multiply_sma_with(
        &BitPoly::from_words(vec![a]),
        &BitPoly::from_words(vec![b]),
        &SmaConfig::forced(),
    );
    let w = run.product.words();
    w.first().copied().unwrap_or(0) as u128 | (w.get(1).copied().unwrap_or(0) as u128) << 64
}
