//! Tower fields GF(2^(2^L)) carrying a Cantor basis.
//!
//! Elements are stored in the power basis of the top basis element
//! `β_{2^L}`: bit `j` of a [`FieldElement`] is the coefficient of `β_{2^L}^j`.
//! Multiplication is therefore a carry-less product followed by reduction
//! modulo the minimal polynomial of `β_{2^L}`.
//!
//! The index map `i ↦ ϖ_i` expands `i` in binary over the Cantor basis with
//! `β_1` as the least significant digit. With this choice the Artin–Schreier
//! map `x ↦ x² + x` acts on indices as a right shift by one.

use std::fmt;
use std::ops::{Add, AddAssign};

use crate::error::{param, Error, Result};
use crate::linalg::{ByteTables, XorBasis};
use crate::poly::{clmul32, clmul64, BitPoly};

pub const MAX_LEVEL: u32 = 6;

/// Irreducible polynomials used to realize GF(2^(2^L)) during construction,
/// indexed by `L - 1`, leading term included.
const AMBIENT: [u128; 6] = [
    0b111,
    0x13,
    0x11b,
    0x1_002b,
    0x1_0000_008d,
    0x1_0000_0000_0000_001b,
];

/// The fixed irreducible polynomial of degree `2^level` the construction starts from.
pub fn ambient_polynomial(level: u32) -> Result<BitPoly> {
    check_level(level)?;
    let m = AMBIENT[level as usize - 1];
    Ok(BitPoly::from_words(vec![m as u64, (m >> 64) as u64]).trimmed())
}

fn check_level(level: u32) -> Result<()> {
    if (1..=MAX_LEVEL).contains(&level) {
        Ok(())
    } else {
        Err(param(format!(
            "tower level {level} outside 1..={MAX_LEVEL}"
        )))
    }
}

/// An element of GF(2^(2^L)), as power-basis coordinates.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement(u64);

impl FieldElement {
    pub const ZERO: Self = Self(0);
    pub const ONE: Self = Self(1);

    pub const fn new(bits: u64) -> Self {
        Self(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

// addition in characteristic 2 is XOR of coordinates
#[allow(clippy::suspicious_arithmetic_impl)]
impl Add for FieldElement {
    type Output = Self;

    #[inline]
    fn add(self, rhs: Self) -> Self {
        Self(self.0 ^ rhs.0)
    }
}

#[allow(clippy::suspicious_op_assign_impl)]
impl AddAssign for FieldElement {
    #[inline]
    fn add_assign(&mut self, rhs: Self) {
        self.0 ^= rhs.0;
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}

/// How [`TowerField::mul`] computes products.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum MulStrategy {
    /// Full multiplication table; levels 1 and 2 only.
    Table,
    /// Word-level carry-less product plus table-driven reduction.
    #[default]
    PackedKaratsuba,
    /// The coordinate product is computed by the binary special multiplication
    /// over a smaller tower; levels 4 and up only.
    RecursiveSma,
}

/// Arithmetic modulo a polynomial of degree `width <= 64`, bit by bit.
#[derive(Clone, Copy)]
struct ModArith {
    width: u32,
    modulus: u128,
}

impl ModArith {
    fn reduce(&self, mut p: u128) -> u64 {
        let w = self.width;
        for i in (w..2 * w).rev() {
            if (p >> i) & 1 == 1 {
                p ^= self.modulus << (i - w);
            }
        }
        p as u64
    }

    fn mul(&self, a: u64, b: u64) -> u64 {
        self.reduce(clmul64(a, b))
    }

    fn square(&self, a: u64) -> u64 {
        self.mul(a, a)
    }

    /// Absolute trace, returned as a field element (0 or 1).
    fn trace(&self, x: u64) -> u64 {
        let mut acc = 0;
        let mut y = x;
        for _ in 0..self.width {
            acc ^= y;
            y = self.square(y);
        }
        acc
    }

    fn artin_schreier_columns(&self) -> Vec<u64> {
        (0..self.width)
            .map(|k| self.square(1 << k) ^ (1 << k))
            .collect()
    }
}

/// GF(2^(2^L)) with a verified Cantor basis `β_1, …, β_{2^L}`.
#[derive(Clone)]
pub struct TowerField {
    level: u32,
    width: u32,
    mask: u64,
    minpoly: BitPoly,
    arith: ModArith,
    basis: Vec<FieldElement>,
    strategy: MulStrategy,
    // images of x^(width + k) mod minpoly, applied to the high half of a product
    reduce_tables: ByteTables,
    omega_tables: ByteTables,
    index_tables: ByteTables,
    mul_table: Vec<u8>,
}

impl fmt::Debug for TowerField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TowerField")
            .field("level", &self.level)
            .field("minpoly", &self.minpoly)
            .field("strategy", &self.strategy)
            .finish_non_exhaustive()
    }
}

/// Builds GF(2^(2^level)) with the default multiplication strategy.
pub fn build_tower(level: u32) -> Result<TowerField> {
    build_tower_with(level, MulStrategy::default())
}

/// Builds GF(2^(2^level)) and its Cantor basis.
///
/// The basis is grown from `β_1 = 1` by solving `x² + x = β_{i-1}` in the
/// ambient representation, keeping the solution whose constant coordinate is
/// zero. Everything is then rewritten in the power basis of `β_{2^L}`.
pub fn build_tower_with(level: u32, strategy: MulStrategy) -> Result<TowerField> {
    check_level(level)?;
    let width = 1u32 << level;
    let amb = ModArith {
        width,
        modulus: AMBIENT[level as usize - 1],
    };
    let solver = XorBasis::new(&amb.artin_schreier_columns());

    let mut chain = vec![1u64];
    for i in 1..width as usize {
        let c = chain[i - 1];
        if amb.trace(c) != 0 {
            return Err(Error::Invariant(format!("trace obstruction at beta_{}", i)));
        }
        let x = solver
            .solve(c)
            .ok_or_else(|| Error::Invariant(format!("no Artin-Schreier root for beta_{i}")))?;
        let x = x.min(x ^ 1);
        if amb.square(x) ^ x != c {
            return Err(Error::Invariant(format!(
                "bad Artin-Schreier root for beta_{i}"
            )));
        }
        chain.push(x);
    }

    let top = chain[width as usize - 1];
    let mut powers = vec![1u64];
    for j in 0..width as usize {
        powers.push(amb.mul(powers[j], top));
    }
    let power_basis = XorBasis::new(&powers[..width as usize]);
    if power_basis.rank() != width as usize {
        return Err(Error::Invariant(format!(
            "minimal polynomial of beta_{width} has degree {} < {width}",
            power_basis.rank()
        )));
    }
    let low = power_basis
        .solve(powers[width as usize])
        .ok_or_else(|| Error::Invariant("minimal polynomial not found".into()))?;
    let mut minpoly_words = vec![low, 0];
    if width == 64 {
        minpoly_words[1] = 1;
    } else {
        minpoly_words[0] |= 1 << width;
    }
    let minpoly = BitPoly::from_words(minpoly_words).trimmed();

    let basis = chain
        .iter()
        .map(|&v| power_basis.solve(v).map(FieldElement))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::Invariant("basis element outside the power basis span".into()))?;

    let field = TowerField::from_parts(level, minpoly, basis, strategy)
        .map_err(|e| Error::Invariant(e.to_string()))?;
    field.check_invariants()?;
    Ok(field)
}

impl TowerField {
    /// Assembles a field from an explicit minimal polynomial and basis.
    ///
    /// Checks the minimal polynomial's degree, that the basis spans the
    /// field, and that the strategy is allowed at this level. The Cantor
    /// chain itself is not checked here; see [`TowerField::check_invariants`].
    pub fn from_parts(
        level: u32,
        minpoly: BitPoly,
        basis: Vec<FieldElement>,
        strategy: MulStrategy,
    ) -> Result<Self> {
        check_level(level)?;
        let width = 1u32 << level;
        let mask = if width == 64 {
            u64::MAX
        } else {
            (1u64 << width) - 1
        };
        match strategy {
            MulStrategy::Table if level > 2 => {
                return Err(param("table multiplication needs level <= 2"))
            }
            MulStrategy::RecursiveSma if level < 4 => {
                return Err(param("recursive multiplication needs level >= 4"))
            }
            _ => {}
        }
        if minpoly.degree().finite() != Some(width as usize) {
            return Err(param(format!(
                "minimal polynomial must have degree {width}"
            )));
        }
        if basis.len() != width as usize {
            return Err(param(format!("basis must have {width} elements")));
        }
        if let Some(e) = basis.iter().find(|e| e.0 & !mask != 0) {
            return Err(Error::ForeignElement(e.0));
        }
        let cols: Vec<u64> = basis.iter().map(|e| e.0).collect();
        let solver = XorBasis::new(&cols);
        if solver.rank() != width as usize {
            return Err(param("basis is linearly dependent"));
        }

        let w = minpoly.words();
        let modulus = w[0] as u128 | (w.get(1).copied().unwrap_or(0) as u128) << 64;
        let arith = ModArith { width, modulus };

        let reduce_images: Vec<u64> = (0..width - 1)
            .map(|k| arith.reduce(1u128 << (width + k)))
            .collect();
        let inverse_images: Vec<u64> = (0..width)
            .map(|k| solver.solve(1 << k).expect("full rank"))
            .collect();
        let mul_table = if strategy == MulStrategy::Table {
            let n = 1u64 << width;
            (0..n * n)
                .map(|xy| arith.mul(xy >> width, xy & mask) as u8)
                .collect()
        } else {
            Vec::new()
        };

        Ok(Self {
            level,
            width,
            mask,
            minpoly,
            arith,
            reduce_tables: ByteTables::from_images(&reduce_images),
            omega_tables: ByteTables::from_images(&cols),
            index_tables: ByteTables::from_images(&inverse_images),
            basis,
            strategy,
            mul_table,
        })
    }

    /// The same field and basis with a different multiplication strategy.
    pub fn with_strategy(&self, strategy: MulStrategy) -> Result<Self> {
        Self::from_parts(
            self.level,
            self.minpoly.clone(),
            self.basis.clone(),
            strategy,
        )
    }

    /// Verifies `β_1 = 1`, `β_i² + β_i = β_{i-1}`, and that the minimal
    /// polynomial has degree `2^L` and vanishes at `β_{2^L}`.
    pub fn check_invariants(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Invariant(msg));
        if self.basis[0] != FieldElement::ONE {
            return fail(format!("beta_1 = {} is not 1", self.basis[0]));
        }
        for i in 1..self.basis.len() {
            if self.psi(self.basis[i]) != self.basis[i - 1] {
                return fail(format!("psi(beta_{}) != beta_{}", i + 1, i));
            }
        }
        if self.minpoly.degree().finite() != Some(self.width as usize) {
            return fail(format!("minimal polynomial degree is not {}", self.width));
        }
        let top = self.basis[self.basis.len() - 1];
        if !self.eval_binary(&self.minpoly, top).is_zero() {
            return fail("minimal polynomial does not vanish at the top basis element".into());
        }
        Ok(())
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// Bits per element, `2^L`.
    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn minpoly(&self) -> &BitPoly {
        &self.minpoly
    }

    /// `[β_1, …, β_{2^L}]`.
    pub fn cantor_basis(&self) -> &[FieldElement] {
        &self.basis
    }

    pub fn strategy(&self) -> MulStrategy {
        self.strategy
    }

    pub fn contains(&self, x: FieldElement) -> bool {
        x.0 & !self.mask == 0
    }

    fn check(&self, x: FieldElement) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::ForeignElement(x.0))
        }
    }

    #[inline]
    fn reduce(&self, p: u128) -> u64 {
        (p as u64 & self.mask) ^ self.reduce_tables.apply((p >> self.width) as u64)
    }

    /// Product of two elements of this field. Operands are not checked; see
    /// [`TowerField::checked_mul`].
    #[inline]
    pub fn mul(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        debug_assert!(self.contains(x) && self.contains(y));
        match self.strategy {
            MulStrategy::Table => {
                FieldElement(self.mul_table[((x.0 << self.width) | y.0) as usize] as u64)
            }
            MulStrategy::PackedKaratsuba => {
                let p = if self.width <= 32 {
                    clmul32(x.0 as u32, y.0 as u32) as u128
                } else {
                    clmul64(x.0, y.0)
                };
                FieldElement(self.reduce(p))
            }
            MulStrategy::RecursiveSma => {
                FieldElement(self.reduce(crate::sma::coordinate_product(x.0, y.0)))
            }
        }
    }

    pub fn checked_mul(&self, x: FieldElement, y: FieldElement) -> Result<FieldElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.mul(x, y))
    }

    pub fn square(&self, x: FieldElement) -> FieldElement {
        self.mul(x, x)
    }

    /// The Artin–Schreier map `x² + x`.
    pub fn psi(&self, x: FieldElement) -> FieldElement {
        self.square(x) + x
    }

    /// `x^(2^(2^s)) + x`, by repeated squaring.
    pub fn phi(&self, s: u32, x: FieldElement) -> Result<FieldElement> {
        self.check_phi_level(s)?;
        self.check(x)?;
        let mut y = x;
        for _ in 0..1u32 << s {
            y = self.square(y);
        }
        Ok(y + x)
    }

    /// `psi` applied `2^s` times; equal to [`TowerField::phi`].
    pub fn phi_iterated(&self, s: u32, x: FieldElement) -> Result<FieldElement> {
        self.check_phi_level(s)?;
        self.check(x)?;
        Ok((0..1u32 << s).fold(x, |y, _| self.psi(y)))
    }

    fn check_phi_level(&self, s: u32) -> Result<()> {
        if s <= self.level {
            Ok(())
        } else {
            Err(param(format!(
                "phi exponent level {s} exceeds tower level {}",
                self.level
            )))
        }
    }

    /// `ϖ_i`: the sum of `β_{k+1}` over the set bits `k` of `i`.
    pub fn omega(&self, i: u64) -> Result<FieldElement> {
        if i & !self.mask != 0 {
            return Err(param(format!("index {i} outside GF(2^{})", self.width)));
        }
        Ok(self.omega_unchecked(i))
    }

    #[inline]
    pub(crate) fn omega_unchecked(&self, i: u64) -> FieldElement {
        FieldElement(self.omega_tables.apply(i))
    }

    /// Inverse of [`TowerField::omega`].
    pub fn index_of(&self, x: FieldElement) -> Result<u64> {
        self.check(x)?;
        Ok(self.index_tables.apply(x.0))
    }

    /// Absolute trace; `true` when it equals 1.
    pub fn trace(&self, x: FieldElement) -> bool {
        self.arith.trace(x.0 & self.mask) == 1
    }

    /// The smaller of the two roots of `x² + x = c`.
    pub fn solve_artin_schreier(&self, c: FieldElement) -> Result<FieldElement> {
        self.check(c)?;
        if self.trace(c) {
            return Err(Error::Unsolvable(c.0));
        }
        let solver = XorBasis::new(&self.arith.artin_schreier_columns());
        let x = solver
            .solve(c.0)
            .ok_or_else(|| Error::Invariant(format!("trace-0 element {c} has no root")))?;
        Ok(FieldElement(x.min(x ^ 1)))
    }

    /// Evaluates a GF(2) polynomial at `x`.
    pub fn eval_binary(&self, p: &BitPoly, x: FieldElement) -> FieldElement {
        let n = p.significant_len();
        (0..n).rev().fold(FieldElement::ZERO, |acc, k| {
            let acc = self.mul(acc, x);
            if p.coeff(k) {
                acc + FieldElement::ONE
            } else {
                acc
            }
        })
    }

    /// Hex of an element's coordinates, `max(1, 2^L / 8)` bytes, in the same
    /// byte layout as [`BitPoly::format_hex`].
    pub fn element_hex(&self, x: FieldElement) -> String {
        let n_bytes = (self.width as usize / 8).max(1);
        (0..n_bytes)
            .map(|i| format!("{:02x}", (x.0 >> (8 * i)) as u8))
            .collect()
    }

    /// Level, minimal polynomial and the Cantor basis, one item per line.
    pub fn dump(&self) -> String {
        let mut out = format!("{}\n{}\n", self.level, self.minpoly.format_hex());
        for b in &self.basis {
            out.push_str(&self.element_hex(*b));
            out.push('\n');
        }
        out
    }
}
