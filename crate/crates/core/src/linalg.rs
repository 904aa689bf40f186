//! Linear algebra over GF(2) on vectors of at most 64 coordinates.

/// Echelon form of the span of a list of columns, remembering which input
/// columns combine into each pivot row.
pub(crate) struct XorBasis {
    // indexed by pivot bit: (reduced vector, mask of contributing columns)
    pivots: [Option<(u64, u64)>; 64],
    rank: usize,
}

impl XorBasis {
    pub(crate) fn new(columns: &[u64]) -> Self {
        debug_assert!(columns.len() <= 64);
        let mut basis = Self {
            pivots: [None; 64],
            rank: 0,
        };
        for (k, &c) in columns.iter().enumerate() {
            let (v, combo) = basis.reduce(c);
            if v != 0 {
                let top = 63 - v.leading_zeros() as usize;
                basis.pivots[top] = Some((v, combo ^ (1 << k)));
                basis.rank += 1;
            }
        }
        basis
    }

    fn reduce(&self, mut v: u64) -> (u64, u64) {
        let mut combo = 0;
        for bit in (0..64).rev() {
            if (v >> bit) & 1 == 1 {
                if let Some((pv, pc)) = self.pivots[bit] {
                    v ^= pv;
                    combo ^= pc;
                }
            }
        }
        (v, combo)
    }

    pub(crate) fn rank(&self) -> usize {
        self.rank
    }

    /// Some `x` with `sum_{k: bit k of x} columns[k] == target`.
    pub(crate) fn solve(&self, target: u64) -> Option<u64> {
        match self.reduce(target) {
            (0, combo) => Some(combo),
            _ => None,
        }
    }
}

/// Lookup tables for a GF(2)-linear map on `width`-bit vectors, one table per
/// input byte.
#[derive(Clone)]
pub(crate) struct ByteTables(Vec<[u64; 256]>);

impl ByteTables {
    /// `images[k]` is the image of the unit vector `e_k`.
    pub(crate) fn from_images(images: &[u64]) -> Self {
        let n_tables = images.len().div_ceil(8);
        let mut tables = vec![[0u64; 256]; n_tables];
        for (t, table) in tables.iter_mut().enumerate() {
            for byte in 1..256usize {
                let low = byte.trailing_zeros() as usize;
                let k = 8 * t + low;
                let img = images.get(k).copied().unwrap_or(0);
                table[byte] = table[byte & (byte - 1)] ^ img;
            }
        }
        Self(tables)
    }

    #[inline]
    pub(crate) fn apply(&self, v: u64) -> u64 {
        let mut out = 0;
        for (t, table) in self.0.iter().enumerate() {
            out ^= table[((v >> (8 * t)) & 0xff) as usize];
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_identity_and_singular() {
        let cols: Vec<u64> = (0..8).map(|k| 1 << k).collect();
        let b = XorBasis::new(&cols);
        assert_eq!(b.rank(), 8);
        assert_eq!(b.solve(0b1010_0101), Some(0b1010_0101));
        let b = XorBasis::new(&[0b11, 0b01, 0b10]);
        assert_eq!(b.rank(), 2);
        let x = b.solve(0b10).unwrap();
        let got = (0..3)
            .filter(|k| (x >> k) & 1 == 1)
            .fold(0, |acc, k| acc ^ [0b11, 0b01, 0b10][k]);
        assert_eq!(got, 0b10);
        assert_eq!(XorBasis::new(&[0b01]).solve(0b10), None);
    }

    #[test]
    fn byte_tables_apply_linear_map() {
        let images: Vec<u64> = (0..20).map(|k| (k as u64 * 0x9e37) ^ (1 << k)).collect();
        let t = ByteTables::from_images(&images);
        let v = 0b1011_0000_1111_0000_0101u64;
        let want = (0..20)
            .filter(|k| (v >> k) & 1 == 1)
            .fold(0, |acc, k| acc ^ images[k]);
        assert_eq!(t.apply(v), want);
    }
}
