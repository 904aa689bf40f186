//! Closed-form operation-count bounds for the transform algorithms.
//!
//! Bounds with a `log2` factor are real numbers; the functions return their
//! floor, so `count <= bound` is an exact integer comparison.

use crate::fft::OpCountReport;

fn floor_u64(x: f64) -> u64 {
    x.floor() as u64
}

fn pow2(e: u32) -> f64 {
    (e as f64).exp2()
}

/// Evaluation (and interpolation) multiplications: `2^(m-1)·m`.
pub fn ea_mults(m: u32) -> u64 {
    (1u64 << (m - 1)) * m as u64
}

/// Evaluation (and interpolation) additions: `2^m·m·(1 + log2 m)`.
pub fn ea_adds(m: u32) -> u64 {
    floor_u64(pow2(m) * m as f64 * (1.0 + (m as f64).log2()))
}

/// Evaluation additions for `m = 2^l`: `2^(2^l)·2^l·(1 + l/2)`.
pub fn ea_adds_pow2(l: u32) -> u64 {
    floor_u64(pow2(1 << l) * pow2(l) * (1.0 + l as f64 / 2.0))
}

/// Tightest applicable evaluation addition bound.
pub fn ea_adds_tight(m: u32) -> u64 {
    if m.is_power_of_two() {
        ea_adds(m).min(ea_adds_pow2(m.trailing_zeros()))
    } else {
        ea_adds(m)
    }
}

/// Generalized Taylor expansion of `2^log_len` coefficients at
/// `x^(2^k) - x`: `2^log_len·(log_len - k)` additions.
pub fn taylor_adds(log_len: u32, k: u32) -> u64 {
    (1u64 << log_len) * log_len.saturating_sub(k) as u64
}

/// Field multiplication of two length-`2^m` polynomials: `2^m(3m+5)`.
pub fn ma_mults(m: u32) -> u64 {
    (1u64 << m) * (3 * m as u64 + 5)
}

/// `3·2^(m+1)(m+1)(1 + log2(m+1))`.
pub fn ma_adds(m: u32) -> u64 {
    let n = (m + 1) as f64;
    floor_u64(3.0 * pow2(m + 1) * n * (1.0 + n.log2()))
}

/// Binary multiplication of length-`2^m` inputs over level `level`:
/// `2^(m-L+1)(3m+9)`.
pub fn sma_mults(m: u32, level: u32) -> u64 {
    (1u64 << (m + 1 - level)) * (3 * m as u64 + 9)
}

/// `2^(m-L+2)(3m+7)(1 + log2(m+2))`.
pub fn sma_adds(m: u32, level: u32) -> u64 {
    floor_u64(pow2(m + 2 - level) * (3 * m + 7) as f64 * (1.0 + ((m + 2) as f64).log2()))
}

/// Bit-operation budget `2^(m+2)(3m+9)(4m+3+log2(m+2))`.
pub fn sma_bit_ops(m: u32) -> u64 {
    floor_u64(pow2(m + 2) * (3 * m + 9) as f64 * ((4 * m + 3) as f64 + ((m + 2) as f64).log2()))
}

/// Bit-operation estimate of a run over level `level`: each addition costs
/// `2^L` and each multiplication `2^(2L+2)` bit operations.
pub fn bit_op_estimate(report: &OpCountReport, level: u32) -> u64 {
    report.field_adds * (1u64 << level) + report.field_mults * (1u64 << (2 * level + 2))
}
