//! Exact integer-matrix kernels: permanents (subset-sum formula with
//! Gray-code updates, plus a factorial-time oracle), determinants
//! (fraction-free elimination), even permanents, GF(2) rank/nullity,
//! derangement numbers and a sampler for regular 0-1 matrices.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Dense matrix of exact integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Parse {
                line: 0,
                msg: format!("expected {} entries, got {}", rows * cols, data.len()),
            });
        }
        Ok(IntMatrix { rows, cols, data })
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::Parse {
                    line: 0,
                    msg: "ragged matrix".into(),
                });
            }
            data.extend(row.iter().map(|&v| BigInt::from(v)));
        }
        IntMatrix::new(r, c, data)
    }

    pub fn zeros(n: usize) -> Self {
        IntMatrix {
            rows: n,
            cols: n,
            data: vec![BigInt::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// The all-ones square matrix.
    pub fn ones(n: usize) -> Self {
        IntMatrix {
            rows: n,
            cols: n,
            data: vec![BigInt::one(); n * n],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut data = Vec::with_capacity(self.rows * self.cols);
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.get(r, c).clone());
            }
        }
        IntMatrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn row_sums(&self) -> Vec<BigInt> {
        (0..self.rows)
            .map(|r| self.data[r * self.cols..(r + 1) * self.cols].iter().sum())
            .collect()
    }

    pub fn col_sums(&self) -> Vec<BigInt> {
        (0..self.cols)
            .map(|c| (0..self.rows).map(|r| self.get(r, c)).sum())
            .collect()
    }

    /// The submatrix left after deleting row `i` and column `j` (0-based).
    pub fn minor(&self, i: usize, j: usize) -> Result<IntMatrix> {
        if i >= self.rows {
            return Err(Error::IndexOutOfRange {
                what: "row",
                got: i + 1,
                max: self.rows,
            });
        }
        if j >= self.cols {
            return Err(Error::IndexOutOfRange {
                what: "column",
                got: j + 1,
                max: self.cols,
            });
        }
        let mut data = Vec::with_capacity((self.rows - 1) * (self.cols - 1));
        for r in (0..self.rows).filter(|&r| r != i) {
            for c in (0..self.cols).filter(|&c| c != j) {
                data.push(self.get(r, c).clone());
            }
        }
        IntMatrix::new(self.rows - 1, self.cols - 1, data)
    }

    /// J - A, defined for square matrices.
    pub fn complement_in_ones(&self) -> Result<IntMatrix> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let data = self.data.iter().map(|v| BigInt::one() - v).collect();
        IntMatrix::new(self.rows, self.cols, data)
    }

    pub fn is_zero_one(&self) -> bool {
        self.data.iter().all(|v| v.is_zero() || v.is_one())
    }

    fn as_i64(&self) -> Option<Vec<i64>> {
        self.data
            .iter()
            .map(|v| i64::try_from(v).ok())
            .collect()
    }

    /// Text form: header `rows cols`, then one line per row.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.rows, self.cols);
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }
}

/// Parses the matrix text format: first line `rows cols`, then integer rows.
pub fn parse_matrix(text: &str) -> Result<IntMatrix> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "empty input".into(),
    })?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| {
            t.parse().map_err(|_| Error::Parse {
                line: hline,
                msg: format!("bad dimension `{t}`"),
            })
        })
        .collect::<Result<_>>()?;
    let [rows, cols] = dims.as_slice() else {
        return Err(Error::Parse {
            line: hline,
            msg: "header must be `rows cols`".into(),
        });
    };
    let mut data = Vec::with_capacity(rows * cols);
    for r in 0..*rows {
        let (lno, line) = lines.next().ok_or(Error::Parse {
            line: hline,
            msg: format!("expected {rows} rows, found {r}"),
        })?;
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != *cols {
            return Err(Error::Parse {
                line: lno,
                msg: format!("expected {cols} entries, got {}", toks.len()),
            });
        }
        for t in toks {
            data.push(t.parse::<BigInt>().map_err(|_| Error::Parse {
                line: lno,
                msg: format!("bad integer `{t}`"),
            })?);
        }
    }
    IntMatrix::new(*rows, *cols, data)
}

fn require_square(a: &IntMatrix) -> Result<usize> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows,
            cols: a.cols,
        });
    }
    Ok(a.rows)
}

/// Exact permanent via the subset-sum formula
/// `per A = sum_S (-1)^{n-|S|} prod_i sum_{j in S} a_ij`,
/// walking subsets in Gray-code order so each step updates one column.
///
/// Works for any integer entries; a machine-word fast path covers entries
/// that fit in `i64` and spills into big integers only when partial sums
/// would overflow.
pub fn permanent(a: &IntMatrix) -> Result<BigInt> {
    let n = require_square(a)?;
    if n == 0 {
        return Ok(BigInt::one());
    }
    if n > 63 {
        return Err(Error::OrderGuard {
            op: "permanent",
            max: 63,
            got: n,
        });
    }
    match a.as_i64() {
        Some(flat) => Ok(ryser_i64(&flat, n)),
        None => Ok(ryser_big(a, n)),
    }
}

fn ryser_i64(flat: &[i64], n: usize) -> BigInt {
    let mut row_sums = vec![0i128; n];
    let mut zero_rows = n; // all sums start at 0
    let mut acc: i128 = 0;
    let mut big = BigInt::zero();
    let mut popcount = 0u32;

    for k in 1u64..(1u64 << n) {
        let j = k.trailing_zeros() as usize;
        let gray_bit_set = (k ^ (k >> 1)) >> j & 1 == 1;
        if gray_bit_set {
            popcount += 1;
        } else {
            popcount -= 1;
        }
        for i in 0..n {
            let v = flat[i * n + j] as i128;
            let before = row_sums[i];
            let after = if gray_bit_set { before + v } else { before - v };
            row_sums[i] = after;
            zero_rows -= usize::from(before == 0);
            zero_rows += usize::from(after == 0);
        }
        if zero_rows > 0 {
            continue;
        }
        let mut prod: i128 = 1;
        let mut fits = true;
        for &s in &row_sums {
            match prod.checked_mul(s) {
                Some(p) => prod = p,
                None => {
                    fits = false;
                    break;
                }
            }
        }
        let sign_neg = (n as u32 - popcount) % 2 == 1;
        if fits {
            let term = if sign_neg { -prod } else { prod };
            match acc.checked_add(term) {
                Some(v) => acc = v,
                None => {
                    big += BigInt::from(acc);
                    acc = term;
                }
            }
        } else {
            // rare: product itself exceeds i128
            let mut p = BigInt::one();
            for &s in &row_sums {
                p *= BigInt::from(s);
            }
            if sign_neg {
                big -= p;
            } else {
                big += p;
            }
        }
    }
    big + BigInt::from(acc)
}

fn ryser_big(a: &IntMatrix, n: usize) -> BigInt {
    let mut row_sums = vec![BigInt::zero(); n];
    let mut total = BigInt::zero();
    for k in 1u64..(1u64 << n) {
        let j = k.trailing_zeros() as usize;
        let add = (k ^ (k >> 1)) >> j & 1 == 1;
        for (i, rs) in row_sums.iter_mut().enumerate() {
            if add {
                *rs += a.get(i, j);
            } else {
                *rs -= a.get(i, j);
            }
        }
        let popcount = (k ^ (k >> 1)).count_ones();
        let mut prod = BigInt::one();
        for rs in &row_sums {
            if rs.is_zero() {
                prod = BigInt::zero();
                break;
            }
            prod *= rs;
        }
        if (n as u32 - popcount) % 2 == 1 {
            total -= prod;
        } else {
            total += prod;
        }
    }
    total
}

/// Permanent reduced modulo `m`, same subset walk but in modular arithmetic.
pub fn permanent_mod(a: &IntMatrix, m: u64) -> Result<u64> {
    let n = require_square(a)?;
    if m == 0 {
        return Err(Error::Parse {
            line: 0,
            msg: "modulus must be positive".into(),
        });
    }
    if n == 0 {
        return Ok(1 % m);
    }
    if n > 63 {
        return Err(Error::OrderGuard {
            op: "permanent_mod",
            max: 63,
            got: n,
        });
    }
    let mm = m as u128;
    let flat: Vec<u64> = a
        .data
        .iter()
        .map(|v| {
            let r = v % BigInt::from(m);
            let r = if r.is_negative() { r + BigInt::from(m) } else { r };
            u64::try_from(r).unwrap()
        })
        .collect();
    let mut row_sums = vec![0u64; n];
    let mut total: u64 = 0;
    for k in 1u64..(1u64 << n) {
        let j = k.trailing_zeros() as usize;
        let add = (k ^ (k >> 1)) >> j & 1 == 1;
        for i in 0..n {
            let v = flat[i * n + j];
            row_sums[i] = if add {
                (row_sums[i] + v) % m
            } else {
                (row_sums[i] + m - v) % m
            };
        }
        let popcount = (k ^ (k >> 1)).count_ones();
        let mut prod: u128 = 1;
        for &s in &row_sums {
            prod = prod * s as u128 % mm;
            if prod == 0 {
                break;
            }
        }
        if (n as u32 - popcount) % 2 == 1 {
            total = (total + m - prod as u64) % m;
        } else {
            total = (total + prod as u64) % m;
        }
    }
    Ok(total)
}

/// Factorial-time permanent by direct enumeration of all diagonals; the
/// oracle the fast path is checked against.
pub fn permanent_bruteforce(a: &IntMatrix) -> Result<BigInt> {
    let n = require_square(a)?;
    if n > 9 {
        return Err(Error::OrderGuard {
            op: "permanent_bruteforce",
            max: 9,
            got: n,
        });
    }
    fn rec(a: &IntMatrix, row: usize, used: u64, prod: &BigInt, total: &mut BigInt) {
        let n = a.rows();
        if row == n {
            *total += prod;
            return;
        }
        for c in 0..n {
            if used & (1 << c) != 0 {
                continue;
            }
            let v = a.get(row, c);
            if v.is_zero() {
                continue;
            }
            rec(a, row + 1, used | (1 << c), &(prod * v), total);
        }
    }
    let mut total = BigInt::zero();
    rec(a, 0, 0, &BigInt::one(), &mut total);
    Ok(total)
}

/// Sum over even diagonals only, by signed enumeration; oracle for
/// [`even_permanent`].
pub fn even_permanent_bruteforce(a: &IntMatrix) -> Result<BigInt> {
    let n = require_square(a)?;
    if n > 7 {
        return Err(Error::OrderGuard {
            op: "even_permanent_bruteforce",
            max: 7,
            got: n,
        });
    }
    fn rec(a: &IntMatrix, row: usize, used: u64, inv: u32, prod: &BigInt, total: &mut BigInt) {
        let n = a.rows();
        if row == n {
            if inv % 2 == 0 {
                *total += prod;
            }
            return;
        }
        for c in 0..n {
            if used & (1 << c) != 0 {
                continue;
            }
            let v = a.get(row, c);
            if v.is_zero() {
                continue;
            }
            let above = (used >> (c + 1)).count_ones();
            rec(a, row + 1, used | (1 << c), inv + above, &(prod * v), total);
        }
    }
    let mut total = BigInt::zero();
    rec(a, 0, 0, 0, &BigInt::one(), &mut total);
    Ok(total)
}

/// Exact determinant via fraction-free (Bareiss) elimination. Entries that
/// fit machine words use an `i128` pass with overflow checks, falling back
/// to big integers.
pub fn determinant(a: &IntMatrix) -> Result<BigInt> {
    let n = require_square(a)?;
    if n == 0 {
        return Ok(BigInt::one());
    }
    if let Some(flat) = a.as_i64() {
        let m: Vec<i128> = flat.iter().map(|&v| v as i128).collect();
        if let Some(d) = bareiss_i128(m, n) {
            return Ok(BigInt::from(d));
        }
    }
    Ok(bareiss_big(a.data.clone(), n))
}

pub(crate) fn bareiss_i128(mut m: Vec<i128>, n: usize) -> Option<i128> {
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k * n + k] == 0 {
            let Some(pivot) = (k + 1..n).find(|&r| m[r * n + k] != 0) else {
                return Some(0);
            };
            for c in 0..n {
                m.swap(k * n + c, pivot * n + c);
            }
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t1 = m[i * n + j].checked_mul(m[k * n + k])?;
                let t2 = m[i * n + k].checked_mul(m[k * n + j])?;
                m[i * n + j] = t1.checked_sub(t2)? / prev;
            }
            m[i * n + k] = 0;
        }
        prev = m[k * n + k];
    }
    Some(sign * m[n * n - 1])
}

fn bareiss_big(mut m: Vec<BigInt>, n: usize) -> BigInt {
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k * n + k].is_zero() {
            let Some(pivot) = (k + 1..n).find(|&r| !m[r * n + k].is_zero()) else {
                return BigInt::zero();
            };
            for c in 0..n {
                m.swap(k * n + c, pivot * n + c);
            }
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &m[i * n + j] * &m[k * n + k] - &m[i * n + k] * &m[k * n + j];
                m[i * n + j] = t / &prev;
            }
            m[i * n + k] = BigInt::zero();
        }
        prev = m[k * n + k].clone();
    }
    let d = m[n * n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

/// Sum of the diagonal products over even permutations only. Computed as
/// `(per A + det A) / 2`; the sum is always even, which is asserted.
pub fn even_permanent(a: &IntMatrix) -> Result<BigInt> {
    let per = permanent(a)?;
    let det = determinant(a)?;
    let sum = per + det;
    assert!(
        (&sum % BigInt::from(2)).is_zero(),
        "per + det must be even"
    );
    Ok(sum / BigInt::from(2))
}

/// Permanent of the submatrix with row `i` and column `j` removed.
pub fn permanental_minor(a: &IntMatrix, i: usize, j: usize) -> Result<BigInt> {
    require_square(a)?;
    permanent(&a.minor(i, j)?)
}

/// Rank over GF(2), by elimination on rows packed into 64-bit words.
pub fn gf2_rank(a: &IntMatrix) -> usize {
    let words = a.cols.div_ceil(64).max(1);
    let mut rows: Vec<Vec<u64>> = (0..a.rows)
        .map(|r| {
            let mut w = vec![0u64; words];
            for c in 0..a.cols {
                let bit = u64::from(a.get(r, c).bit(0));
                w[c / 64] |= bit << (c % 64);
            }
            w
        })
        .collect();
    let mut rank = 0;
    for col in 0..a.cols {
        let (wi, bi) = (col / 64, col % 64);
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][wi] >> bi & 1 == 1) else {
            continue;
        };
        rows.swap(rank, pivot);
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[wi] >> bi & 1 == 1 {
                for (w, p) in row.iter_mut().zip(&pivot_row) {
                    *w ^= p;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// GF(2) nullity: number of columns minus the GF(2) rank.
pub fn gf2_nullity(a: &IntMatrix) -> usize {
    a.cols - gf2_rank(a)
}

/// Number of fixed-point-free permutations of an n-set, from the recurrence
/// d_n = n d_{n-1} + (-1)^n with d_0 = 1.
pub fn derangement(n: usize) -> BigInt {
    let mut d = BigInt::one();
    for i in 1..=n {
        d = BigInt::from(i) * d + if i % 2 == 0 { BigInt::one() } else { -BigInt::one() };
    }
    d
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// A 0-1 matrix of order `n` with every row and column summing to `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularZeroOne {
    n: usize,
    k: usize,
    matrix: IntMatrix,
}

impl RegularZeroOne {
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> IntMatrix {
        self.matrix
    }

    /// Validates membership: 0-1 entries, all row and column sums equal `k`.
    pub fn validate(m: &IntMatrix, k: usize) -> bool {
        m.is_square()
            && m.is_zero_one()
            && m.row_sums().iter().all(|s| *s == BigInt::from(k))
            && m.col_sums().iter().all(|s| *s == BigInt::from(k))
    }
}

/// Draws a member of the k-regular 0-1 matrices of order n as a union of
/// `k` disjoint permutation matrices, each found by a randomized matching
/// over the still-free cells. No uniformity over the class is claimed.
pub fn sample_regular(n: usize, k: usize, seed: u64) -> Result<RegularZeroOne> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_regular_with(n, k, &mut rng)
}

pub fn sample_regular_with(n: usize, k: usize, rng: &mut impl Rng) -> Result<RegularZeroOne> {
    if k > n {
        return Err(Error::IndexOutOfRange {
            what: "degree",
            got: k,
            max: n,
        });
    }
    if n > 63 {
        return Err(Error::OrderGuard {
            op: "sample_regular",
            max: 63,
            got: n,
        });
    }
    const ATTEMPTS: usize = 100;
    for _ in 0..ATTEMPTS {
        if let Some(cells) = try_sample(n, k, rng) {
            let data = cells.into_iter().map(BigInt::from).collect();
            let matrix = IntMatrix::new(n, n, data)?;
            debug_assert!(RegularZeroOne::validate(&matrix, k));
            return Ok(RegularZeroOne { n, k, matrix });
        }
    }
    Err(Error::SamplingFailed {
        what: "regular 0-1 matrix",
        attempts: ATTEMPTS,
    })
}

fn try_sample(n: usize, k: usize, rng: &mut impl Rng) -> Option<Vec<u8>> {
    let mut used = vec![0u64; n]; // used[r] bit c: cell already taken
    let mut cells = vec![0u8; n * n];
    for _ in 0..k {
        let assignment = random_matching(n, &used, rng)?;
        for (r, c) in assignment.into_iter().enumerate() {
            used[r] |= 1 << c;
            cells[r * n + c] = 1;
        }
    }
    Some(cells)
}

/// Perfect matching on the complement of `used`, rows matched to columns by
/// backtracking over randomly ordered candidates. The remaining graph is
/// regular, so a matching always exists; backtracking finds one.
fn random_matching(n: usize, used: &[u64], rng: &mut impl Rng) -> Option<Vec<usize>> {
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut order: Vec<Vec<usize>> = (0..n)
        .map(|r| {
            let mut cols: Vec<usize> = (0..n).filter(|&c| used[r] & (1 << c) == 0).collect();
            cols.shuffle(rng);
            cols
        })
        .collect();
    // light shuffle of row order too, for variety between draws
    let mut row_order: Vec<usize> = (0..n).collect();
    row_order.shuffle(rng);

    fn rec(
        idx: usize,
        row_order: &[usize],
        order: &mut [Vec<usize>],
        free_cols: u64,
        out: &mut [usize],
    ) -> bool {
        if idx == row_order.len() {
            return true;
        }
        let r = row_order[idx];
        for i in 0..order[r].len() {
            let c = order[r][i];
            if free_cols & (1 << c) == 0 {
                continue;
            }
            out[r] = c;
            if rec(idx + 1, row_order, order, free_cols & !(1 << c), out) {
                return true;
            }
        }
        false
    }

    let mut out = vec![0usize; n];
    rec(0, &row_order, &mut order, full, &mut out).then_some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm_matrix(images: &[usize]) -> IntMatrix {
        let n = images.len();
        let mut m = IntMatrix::zeros(n);
        for (r, &c) in images.iter().enumerate() {
            m.set(r, c, BigInt::one());
        }
        m
    }

    #[test]
    fn permanent_identity_and_ones() {
        for n in 0..6 {
            assert_eq!(permanent(&IntMatrix::identity(n)).unwrap(), BigInt::one());
        }
        assert_eq!(permanent(&IntMatrix::ones(3)).unwrap(), BigInt::from(6));
        assert_eq!(permanent(&IntMatrix::ones(5)).unwrap(), BigInt::from(120));
    }

    #[test]
    fn permanent_rejects_rectangles() {
        let m = IntMatrix::from_i64_rows(&[vec![1, 2, 3], vec![4, 5, 6]]).unwrap();
        assert!(matches!(permanent(&m), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn bruteforce_basics() {
        assert_eq!(
            permanent_bruteforce(&IntMatrix::zeros(3)).unwrap(),
            BigInt::zero()
        );
        let m = IntMatrix::from_i64_rows(&[vec![1, 1], vec![1, 1]]).unwrap();
        assert_eq!(permanent_bruteforce(&m).unwrap(), BigInt::from(2));
        let m = IntMatrix::from_i64_rows(&[vec![1, 1, 1], vec![1, 1, 1], vec![1, 1, 1]]).unwrap();
        assert_eq!(permanent_bruteforce(&m).unwrap(), BigInt::from(6));
    }

    #[test]
    fn ones_minus_identity_counts_derangements() {
        for n in 2..=7 {
            let mut m = IntMatrix::ones(n);
            for i in 0..n {
                m.set(i, i, BigInt::zero());
            }
            assert_eq!(permanent_bruteforce(&m).unwrap(), derangement(n));
            assert_eq!(permanent(&m).unwrap(), derangement(n));
        }
        assert_eq!(derangement(4), BigInt::from(9));
    }

    #[test]
    fn permanent_matches_bruteforce_on_random_entries() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..60 {
            let n = rng.random_range(1..=5);
            let rows: Vec<Vec<i64>> = (0..n)
                .map(|_| (0..n).map(|_| rng.random_range(-4..=4)).collect())
                .collect();
            let m = IntMatrix::from_i64_rows(&rows).unwrap();
            assert_eq!(permanent(&m).unwrap(), permanent_bruteforce(&m).unwrap());
        }
    }

    #[test]
    fn permanent_mod_agrees_with_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let n = rng.random_range(1..=5);
            let rows: Vec<Vec<i64>> = (0..n)
                .map(|_| (0..n).map(|_| rng.random_range(-3..=6)).collect())
                .collect();
            let m = IntMatrix::from_i64_rows(&rows).unwrap();
            let exact = permanent(&m).unwrap();
            for modulus in [2u64, 3, 4, 6, 63] {
                let r = (&exact % BigInt::from(modulus) + BigInt::from(modulus))
                    % BigInt::from(modulus);
                assert_eq!(
                    BigInt::from(permanent_mod(&m, modulus).unwrap()),
                    r,
                    "n={n} modulus={modulus}"
                );
            }
        }
    }

    #[test]
    fn determinant_basics() {
        for n in 1..6 {
            assert_eq!(determinant(&IntMatrix::identity(n)).unwrap(), BigInt::one());
        }
        for n in 2..6 {
            assert_eq!(determinant(&IntMatrix::ones(n)).unwrap(), BigInt::zero());
        }
        let m = IntMatrix::from_i64_rows(&[vec![2, 1], vec![7, 4]]).unwrap();
        assert_eq!(determinant(&m).unwrap(), BigInt::one());
    }

    /// Expansion-by-minors oracle.
    fn det_oracle(m: &IntMatrix) -> BigInt {
        let n = m.rows();
        if n == 0 {
            return BigInt::one();
        }
        if n == 1 {
            return m.get(0, 0).clone();
        }
        let mut d = BigInt::zero();
        for c in 0..n {
            let term = m.get(0, c) * det_oracle(&m.minor(0, c).unwrap());
            if c % 2 == 0 {
                d += term;
            } else {
                d -= term;
            }
        }
        d
    }

    #[test]
    fn determinant_matches_minor_expansion() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let n = rng.random_range(1..=5);
            let rows: Vec<Vec<i64>> = (0..n)
                .map(|_| (0..n).map(|_| rng.random_range(-5..=5)).collect())
                .collect();
            let m = IntMatrix::from_i64_rows(&rows).unwrap();
            assert_eq!(determinant(&m).unwrap(), det_oracle(&m));
        }
    }

    #[test]
    fn per_det_parity_and_transpose() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..40 {
            let n = rng.random_range(1..=5);
            let rows: Vec<Vec<i64>> = (0..n)
                .map(|_| (0..n).map(|_| rng.random_range(0..=3)).collect())
                .collect();
            let m = IntMatrix::from_i64_rows(&rows).unwrap();
            let per = permanent(&m).unwrap();
            let det = determinant(&m).unwrap();
            assert_eq!(&per % 2, ((&det % 2) + 2) % 2);
            let t = m.transpose();
            assert_eq!(permanent(&t).unwrap(), per);
            assert_eq!(determinant(&t).unwrap(), det);
        }
    }

    #[test]
    fn even_permanent_of_permutation_matrices() {
        // identity is even; a single swap is odd
        assert_eq!(
            even_permanent(&perm_matrix(&[0, 1, 2, 3])).unwrap(),
            BigInt::one()
        );
        assert_eq!(
            even_permanent(&perm_matrix(&[1, 0, 2, 3])).unwrap(),
            BigInt::zero()
        );
        for n in 1..6 {
            assert_eq!(
                even_permanent(&IntMatrix::identity(n)).unwrap(),
                BigInt::one()
            );
        }
    }

    #[test]
    fn even_permanent_matches_alternating_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..40 {
            let n = rng.random_range(1..=6);
            let rows: Vec<Vec<i64>> = (0..n)
                .map(|_| (0..n).map(|_| rng.random_range(0..=2)).collect())
                .collect();
            let m = IntMatrix::from_i64_rows(&rows).unwrap();
            assert_eq!(
                even_permanent(&m).unwrap(),
                even_permanent_bruteforce(&m).unwrap()
            );
        }
    }

    #[test]
    fn even_permanent_of_complemented_permutation() {
        // per^ev(J - P_even) = (d_n + 1 - n) / 2 for even n
        for n in [4usize, 6] {
            let p0 = perm_matrix(&(0..n).collect::<Vec<_>>());
            let m = p0.complement_in_ones().unwrap();
            let expect = (derangement(n) + BigInt::one() - BigInt::from(n)) / BigInt::from(2);
            assert_eq!(even_permanent(&m).unwrap(), expect);
        }
    }

    #[test]
    fn permanental_minor_basics() {
        let one = IntMatrix::identity(1);
        assert_eq!(permanental_minor(&one, 0, 0).unwrap(), BigInt::one());
        assert_eq!(
            permanental_minor(&IntMatrix::ones(3), 0, 0).unwrap(),
            BigInt::from(2)
        );
        assert!(matches!(
            permanental_minor(&one, 1, 0),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn gf2_basics() {
        assert_eq!(gf2_nullity(&IntMatrix::identity(5)), 0);
        assert_eq!(gf2_nullity(&IntMatrix::ones(2)), 1);
        // all row sums even forces nullity >= 1
        let m = IntMatrix::from_i64_rows(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]]).unwrap();
        assert!(gf2_nullity(&m) >= 1);
    }

    #[test]
    fn gf2_rectangular() {
        let m = IntMatrix::from_i64_rows(&[vec![1, 0, 1, 0], vec![0, 1, 1, 0]]).unwrap();
        assert_eq!(gf2_rank(&m), 2);
        assert_eq!(gf2_nullity(&m), 2);
    }

    #[test]
    fn derangement_values_and_mod_four() {
        let expect = [1u64, 0, 1, 2, 9, 44, 265, 1854, 14833];
        for (n, &e) in expect.iter().enumerate() {
            assert_eq!(derangement(n), BigInt::from(e));
        }
        // inclusion-exclusion oracle: d_n = sum (-1)^k n!/k!
        for n in 0..=20 {
            let mut alt = BigInt::zero();
            for k in 0..=n {
                let term = factorial(n) / factorial(k);
                alt += if k % 2 == 0 { term } else { -term };
            }
            assert_eq!(derangement(n), alt);
        }
        for n in (2..=20).step_by(2) {
            assert_eq!(derangement(n) % 4, BigInt::one());
        }
    }

    #[test]
    fn sample_regular_edges_and_membership() {
        let z = sample_regular(4, 0, 1).unwrap();
        assert_eq!(z.matrix(), &IntMatrix::zeros(4));
        let j = sample_regular(4, 4, 1).unwrap();
        assert_eq!(j.matrix(), &IntMatrix::ones(4));
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..1000 {
            let s = sample_regular_with(5, 2, &mut rng).unwrap();
            assert!(RegularZeroOne::validate(s.matrix(), 2));
        }
        assert!(sample_regular(3, 4, 0).is_err());
    }

    #[test]
    fn matrix_text_round_trip() {
        let m = IntMatrix::from_i64_rows(&[vec![1, -2, 3], vec![0, 5, -6]]).unwrap();
        assert_eq!(parse_matrix(&m.to_text()).unwrap(), m);
    }

    #[test]
    fn zero_column_determinant() {
        let m = IntMatrix::from_i64_rows(&[vec![0, 1], vec![0, 2]]).unwrap();
        assert_eq!(determinant(&m).unwrap(), BigInt::zero());
    }
}
