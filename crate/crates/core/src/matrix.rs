//! Square matrices over a prime field, addressed by a dense integer index.
//!
//! Entry `(i, j)` is the base-`q` digit at position `i * n + j`, least
//! significant digit first. Over GF(2) the index bits therefore *are* the
//! matrix: row `i` occupies bits `i*n .. i*n + n`, and column `j` of a row is
//! bit `j`. The GF(2) product works directly on these bit rows.

use serde::Serialize;

/// Largest dimension whose GF(2) index still fits in a `u32`.
pub const MAX_BINARY_DIMENSION: usize = 5;
const MAX_ENTRIES: usize = 25;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct MatrixShape {
    pub n: usize,
    pub q: u32,
}

pub fn is_prime(q: u32) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= q as u64 {
        if q % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl MatrixShape {
    pub fn new(n: usize, q: u32) -> Self {
        Self { n, q }
    }

    /// `q^(n^2)`, saturating at `u128::MAX`.
    pub fn order(&self) -> u128 {
        let mut acc: u128 = 1;
        for _ in 0..self.n * self.n {
            acc = acc.saturating_mul(self.q as u128);
        }
        acc
    }

    #[inline]
    fn row_mask(&self) -> u32 {
        (1u32 << self.n) - 1
    }

    pub fn decode(&self, index: u32) -> MatrixElement {
        let mut entries = vec![0u32; self.n * self.n];
        let mut rest = index;
        for e in entries.iter_mut() {
            *e = rest % self.q;
            rest /= self.q;
        }
        MatrixElement::from_entries(self.n, self.q, entries)
    }

    pub fn encode(&self, m: &MatrixElement) -> u32 {
        debug_assert_eq!((m.n, m.q), (self.n, self.q));
        let mut index = 0u32;
        for pos in (0..self.n * self.n).rev() {
            index = index * self.q + m.get(pos / self.n, pos % self.n);
        }
        index
    }

    fn digits(&self, index: u32) -> [u32; MAX_ENTRIES] {
        let mut out = [0u32; MAX_ENTRIES];
        let mut rest = index;
        for d in out.iter_mut().take(self.n * self.n) {
            *d = rest % self.q;
            rest /= self.q;
        }
        out
    }

    fn undigits(&self, digits: &[u32; MAX_ENTRIES]) -> u32 {
        let mut index = 0u32;
        for pos in (0..self.n * self.n).rev() {
            index = index * self.q + digits[pos];
        }
        index
    }

    /// Matrix product of two indices.
    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if self.q == 2 {
            self.mul_binary(a, b)
        } else {
            self.mul_dense(a, b)
        }
    }

    #[inline]
    fn mul_binary(&self, a: u32, b: u32) -> u32 {
        let n = self.n;
        let mask = self.row_mask();
        let mut out = 0u32;
        for i in 0..n {
            let mut selected = (a >> (i * n)) & mask;
            let mut acc = 0u32;
            while selected != 0 {
                let k = selected.trailing_zeros() as usize;
                acc ^= (b >> (k * n)) & mask;
                selected &= selected - 1;
            }
            out |= acc << (i * n);
        }
        out
    }

    fn mul_dense(&self, a: u32, b: u32) -> u32 {
        let n = self.n;
        let q = self.q as u64;
        let x = self.digits(a);
        let y = self.digits(b);
        let mut z = [0u32; MAX_ENTRIES];
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0u64;
                for k in 0..n {
                    acc += x[i * n + k] as u64 * y[k * n + j] as u64;
                }
                z[i * n + j] = (acc % q) as u32;
            }
        }
        self.undigits(&z)
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.q == 2 {
            return a ^ b;
        }
        let x = self.digits(a);
        let y = self.digits(b);
        let mut z = [0u32; MAX_ENTRIES];
        for pos in 0..self.n * self.n {
            z[pos] = (x[pos] + y[pos]) % self.q;
        }
        self.undigits(&z)
    }

    pub fn neg(&self, a: u32) -> u32 {
        if self.q == 2 {
            return a;
        }
        let mut x = self.digits(a);
        for d in x.iter_mut().take(self.n * self.n) {
            *d = (self.q - *d) % self.q;
        }
        self.undigits(&x)
    }

    /// Matrix unit with a single 1 at `(i, j)`.
    pub fn unit(&self, i: usize, j: usize) -> u32 {
        self.q.pow((i * self.n + j) as u32)
    }

    pub fn identity(&self) -> u32 {
        (0..self.n).map(|i| self.unit(i, i)).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Entries {
    /// One word per row, bit `j` is column `j`.
    Packed(Vec<u64>),
    Dense(Vec<u32>),
}

/// An explicit matrix, used where row operations are needed (rank, row
/// spaces). Products in the hot loops go through [`MatrixShape::mul`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MatrixElement {
    n: usize,
    q: u32,
    entries: Entries,
}

impl MatrixElement {
    pub fn from_entries(n: usize, q: u32, entries: Vec<u32>) -> Self {
        assert_eq!(entries.len(), n * n);
        assert!(entries.iter().all(|&e| e < q), "entries must lie in [0, q)");
        let entries = if q == 2 {
            Entries::Packed(
                (0..n)
                    .map(|i| {
                        (0..n).fold(0u64, |acc, j| acc | ((entries[i * n + j] as u64) << j))
                    })
                    .collect(),
            )
        } else {
            Entries::Dense(entries)
        };
        Self { n, q, entries }
    }

    pub fn zero(n: usize, q: u32) -> Self {
        Self::from_entries(n, q, vec![0; n * n])
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> u32 {
        self.q
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        match &self.entries {
            Entries::Packed(rows) => ((rows[i] >> j) & 1) as u32,
            Entries::Dense(e) => e[i * self.n + j],
        }
    }

    pub fn set(&mut self, i: usize, j: usize, value: u32) {
        let v = value % self.q;
        match &mut self.entries {
            Entries::Packed(rows) => {
                rows[i] = (rows[i] & !(1 << j)) | ((v as u64) << j);
            }
            Entries::Dense(e) => e[i * self.n + j] = v,
        }
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j)).collect())
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zero(self.n, self.q);
        for i in 0..self.n {
            for j in 0..self.n {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.n;
        let q = self.q as u64;
        let mut out = Self::zero(n, self.q);
        match (&self.entries, &other.entries) {
            (Entries::Packed(a), Entries::Packed(b)) => {
                let rows = a
                    .iter()
                    .map(|&row| {
                        let mut acc = 0u64;
                        for (k, brow) in b.iter().enumerate() {
                            if (row >> k) & 1 == 1 {
                                acc ^= brow;
                            }
                        }
                        acc
                    })
                    .collect();
                out.entries = Entries::Packed(rows);
            }
            _ => {
                for i in 0..n {
                    for j in 0..n {
                        let s: u64 = (0..n)
                            .map(|k| self.get(i, k) as u64 * other.get(k, j) as u64)
                            .sum();
                        out.set(i, j, (s % q) as u32);
                    }
                }
            }
        }
        out
    }

    /// Reduced row echelon basis of the row space. Two matrices have the same
    /// row space exactly when these bases are equal.
    pub fn row_space(&self) -> Vec<Vec<u32>> {
        reduced_echelon(self.rows(), self.q)
    }

    pub fn column_space(&self) -> Vec<Vec<u32>> {
        self.transpose().row_space()
    }

    pub fn rank(&self) -> usize {
        self.row_space().len()
    }
}

fn inverse_mod(a: u32, q: u32) -> u32 {
    // q is prime, so a^(q-2) is the inverse
    let mut result = 1u64;
    let mut base = a as u64 % q as u64;
    let mut exp = q - 2;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * base % q as u64;
        }
        base = base * base % q as u64;
        exp >>= 1;
    }
    result as u32
}

/// Reduced row echelon form over GF(q), zero rows dropped.
pub fn reduced_echelon(mut rows: Vec<Vec<u32>>, q: u32) -> Vec<Vec<u32>> {
    let width = rows.first().map_or(0, Vec::len);
    let qq = q as u64;
    let mut pivot_row = 0;
    for col in 0..width {
        let Some(found) = (pivot_row..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(pivot_row, found);
        let inv = inverse_mod(rows[pivot_row][col], q) as u64;
        for v in rows[pivot_row].iter_mut() {
            *v = (*v as u64 * inv % qq) as u32;
        }
        let pivot = rows[pivot_row].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != pivot_row && row[col] != 0 {
                let factor = row[col] as u64;
                for (v, p) in row.iter_mut().zip(&pivot) {
                    *v = ((*v as u64 + qq * qq - factor * *p as u64) % qq) as u32;
                }
            }
        }
        pivot_row += 1;
    }
    rows.truncate(pivot_row);
    rows
}

/// Gaussian binomial coefficient `[n choose r]_q`: the number of
/// `r`-dimensional subspaces of `GF(q)^n`.
pub fn gaussian_binomial(n: u32, r: u32, q: u64) -> u128 {
    if r > n {
        return 0;
    }
    let q = q as u128;
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..r {
        num *= q.pow(n - i) - 1;
        den *= q.pow(i + 1) - 1;
    }
    num / den
}

/// Number of subspaces of `GF(q)^n`.
pub fn subspace_count(n: u32, q: u64) -> u128 {
    (0..=n).map(|r| gaussian_binomial(n, r, q)).sum()
}

/// Idempotent count of `M_n(GF(q))`: one idempotent per ordered pair of
/// complementary subspaces (image, kernel).
pub fn idempotent_count(n: u32, q: u64) -> u128 {
    (0..=n)
        .map(|r| gaussian_binomial(n, r, q) * (q as u128).pow(r * (n - r)))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn primes() {
        let primes: Vec<u32> = (0..30).filter(|&q| is_prime(q)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    #[test]
    fn binary_layout_matches_digits() {
        let shape = MatrixShape::new(2, 2);
        assert_eq!(shape.unit(0, 0), 1);
        assert_eq!(shape.unit(1, 1), 8);
        assert_eq!(shape.identity(), 9);
        let m = shape.decode(0b0110);
        assert_eq!(m.rows(), vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(shape.mul(0b0110, 0b0110), 9);
    }

    #[test]
    fn gaussian_binomials() {
        assert_eq!(gaussian_binomial(4, 2, 2), 35);
        assert_eq!(gaussian_binomial(4, 1, 2), 15);
        assert_eq!(subspace_count(4, 2), 67);
        assert_eq!(subspace_count(3, 2), 16);
        assert_eq!(idempotent_count(4, 2), 802);
        assert_eq!(idempotent_count(3, 2), 58);
        assert_eq!(idempotent_count(2, 3), 14);
        assert_eq!(idempotent_count(2, 2), 8);
    }

    #[test]
    fn echelon_form_over_gf3() {
        let rows = vec![vec![2, 1], vec![1, 2]];
        // second row is 2 * first row mod 3
        assert_eq!(reduced_echelon(rows, 3), vec![vec![1, 2]]);
    }

    fn brute_force_product(shape: MatrixShape, a: u32, b: u32) -> u32 {
        let x = shape.decode(a);
        let y = shape.decode(b);
        let n = shape.n;
        let mut entries = vec![0u32; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut s = 0u32;
                for k in 0..n {
                    s += x.get(i, k) * y.get(k, j);
                }
                entries[i * n + j] = s % shape.q;
            }
        }
        shape.encode(&MatrixElement::from_entries(n, shape.q, entries))
    }

    proptest! {
        #[test]
        fn codec_round_trips(n in 1usize..=3, qi in 0usize..3, seed in any::<u32>()) {
            let q = [2u32, 3, 5][qi];
            let shape = MatrixShape::new(n, q);
            let index = seed % shape.order() as u32;
            prop_assert_eq!(shape.encode(&shape.decode(index)), index);
        }

        #[test]
        fn index_product_matches_entrywise(n in 1usize..=4, qi in 0usize..2, a in any::<u32>(), b in any::<u32>()) {
            let q = [2u32, 3][qi];
            let shape = MatrixShape::new(n, q);
            let order = shape.order() as u32;
            let (a, b) = (a % order, b % order);
            let expected = brute_force_product(shape, a, b);
            prop_assert_eq!(shape.mul(a, b), expected);
            let explicit = shape.decode(a).mul(&shape.decode(b));
            prop_assert_eq!(shape.encode(&explicit), expected);
        }

        #[test]
        fn negation_is_additive_inverse(n in 1usize..=3, a in any::<u32>()) {
            let shape = MatrixShape::new(n, 3);
            let a = a % shape.order() as u32;
            prop_assert_eq!(shape.add(a, shape.neg(a)), 0);
        }
    }
}
