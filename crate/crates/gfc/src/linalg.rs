//! Exact linear algebra over ℚ with arbitrary-precision integers.
//!
//! Matrices are sparse maps (row, col) ↦ reduced rational. Rank is computed
//! by fraction-free (Bareiss) elimination over ℤ after clearing denominators
//! row by row; a plain rational Gauss-Jordan pass backs kernel bases and
//! linear solves. Pivoting is "first admissible entry in row-major order":
//! exact arithmetic needs no stability heuristics and a fixed rule keeps
//! every echelon form reproducible across runs and platforms.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Zero};

use crate::{GfcError, Result};

/// Exact rational scalar used throughout the engine.
pub type Rat = BigRational;

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Sparse matrix over ℚ. Stored entries are nonzero and fully reduced
/// (`BigRational` keeps numerator/denominator coprime with positive
/// denominator).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), Rat>,
}

impl RatMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RatMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Sets entry (i, j); zero values erase the slot.
    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        assert!(i < self.rows && j < self.cols, "entry out of range");
        if v.is_zero() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), v);
        }
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: &Rat) {
        if v.is_zero() {
            return;
        }
        let cur = self.get(i, j) + v;
        self.set(i, j, cur);
    }

    pub fn get(&self, i: usize, j: usize) -> Rat {
        self.entries.get(&(i, j)).cloned().unwrap_or_else(Rat::zero)
    }

    /// Iterates nonzero entries in (row, col) order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &Rat)> {
        self.entries.iter().map(|(&(i, j), v)| (i, j, v))
    }

    pub fn transpose(&self) -> RatMatrix {
        let mut t = RatMatrix::zero(self.cols, self.rows);
        for (i, j, v) in self.iter() {
            t.set(j, i, v.clone());
        }
        t
    }

    /// Matrix product self · other.
    pub fn mul(&self, other: &RatMatrix) -> Result<RatMatrix> {
        if self.cols != other.rows {
            return Err(GfcError::DimensionMismatch(format!(
                "product of {}x{} with {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = RatMatrix::zero(self.rows, other.cols);
        // group rhs by row for sparse traversal
        let mut rhs_rows: Vec<Vec<(usize, &Rat)>> = vec![Vec::new(); other.rows];
        for (i, j, v) in other.iter() {
            rhs_rows[i].push((j, v));
        }
        for (i, k, a) in self.iter() {
            for &(j, b) in &rhs_rows[k] {
                out.add_to(i, j, &(a * b));
            }
        }
        Ok(out)
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Rat]) -> Result<Vec<Rat>> {
        if v.len() != self.cols {
            return Err(GfcError::DimensionMismatch(format!(
                "apply {}x{} to vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let mut out = vec![Rat::zero(); self.rows];
        for (i, j, a) in self.iter() {
            if !v[j].is_zero() {
                out[i] += a * &v[j];
            }
        }
        Ok(out)
    }

    fn to_dense(&self) -> Vec<Vec<Rat>> {
        let mut rows = vec![vec![Rat::zero(); self.cols]; self.rows];
        for (i, j, v) in self.iter() {
            rows[i][j] = v.clone();
        }
        rows
    }

    /// Exact rank over ℚ by fraction-free (Bareiss) elimination.
    ///
    /// Denominators are cleared row by row first; every division in the
    /// elimination is then exact over ℤ, which keeps intermediate entries
    /// at the size of minors instead of products of pivots.
    pub fn rank(&self) -> usize {
        let mut m = self.to_cleared_integer_rows();
        bareiss_echelon(&mut m).len()
    }

    /// Rank by straightforward rational Gauss-Jordan elimination.
    ///
    /// Slower growth of intermediate fractions than Bareiss; kept as an
    /// independent elimination strategy to cross-check ranks.
    pub fn rank_rational(&self) -> usize {
        let mut m = self.to_dense();
        rref_in_place(&mut m).len()
    }

    /// Rank of the matrix reduced modulo a fixed word-sized prime.
    ///
    /// A lower bound on the exact rank (strict inequality only when the
    /// prime divides a pivot minor). Entries whose denominator vanishes
    /// mod p make the reduction undefined and yield `None`. Computed by
    /// sparse elimination with fill-reducing pivoting.
    pub fn rank_mod_p(&self, p: u64) -> Option<usize> {
        let pb = BigInt::from(p);
        let mut rows: Vec<HashMap<usize, u64>> = vec![HashMap::new(); self.rows];
        for (i, j, v) in self.iter() {
            let d = v.denom().mod_floor(&pb);
            if d.is_zero() {
                return None;
            }
            let d: u64 = u64::try_from(&d).ok()?;
            let n: u64 = u64::try_from(&v.numer().mod_floor(&pb)).ok()?;
            let value = mulmod(n, modinv(d, p)?, p);
            if value != 0 {
                rows[i].insert(j, value);
            }
        }
        Some(sparse_rank_mod_p(rows, self.cols, p))
    }

    fn to_cleared_integer_rows(&self) -> Vec<Vec<BigInt>> {
        let mut m: Vec<Vec<BigInt>> = Vec::with_capacity(self.rows);
        for row in self.to_dense() {
            let lcm = row
                .iter()
                .filter(|v| !v.is_zero())
                .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
            m.push(
                row.into_iter()
                    .map(|v| v.numer() * (&lcm / v.denom()))
                    .collect(),
            );
        }
        m
    }

    /// Echelonized basis of the right kernel {v : self·v = 0}.
    ///
    /// Length is cols − rank. The elimination is sparse with fill-reducing
    /// pivoting (the condition matrices this serves have a handful of
    /// entries per row); back-substitution in reverse pivot order yields the
    /// kernel vectors and a final reduced-echelon pass normalizes them
    /// (leading coefficient 1 in coordinate order), so the output does not
    /// depend on the pivot sequence.
    pub fn kernel_basis(&self) -> Vec<Vec<Rat>> {
        let mut rows: Vec<BTreeMap<usize, Rat>> = vec![BTreeMap::new(); self.rows];
        for (i, j, v) in self.iter() {
            rows[i].insert(j, v.clone());
        }
        let pivots = sparse_eliminate(&mut rows, self.cols);
        let mut pivot_set = vec![false; self.cols];
        for &(_, c) in &pivots {
            pivot_set[c] = true;
        }
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set[free] {
                continue;
            }
            let mut v = vec![Rat::zero(); self.cols];
            v[free] = Rat::one();
            // rows were eliminated against earlier pivots, so in reverse
            // order every non-pivot coordinate of a row is already known
            for &(r, c) in pivots.iter().rev() {
                let mut acc = Rat::zero();
                for (&j, value) in &rows[r] {
                    if j != c && !v[j].is_zero() {
                        acc += value * &v[j];
                    }
                }
                if !acc.is_zero() {
                    v[c] = -acc / &rows[r][&c];
                }
            }
            basis.push(v);
        }
        echelonize(&mut basis);
        basis
    }

    /// Whether the matrix has full column rank, certified modulo p: the
    /// mod-p rank is a lower bound for the exact rank, so a full-rank
    /// reduction is conclusive (`Some(false)` is merely "unknown here").
    pub fn full_column_rank_mod_p(&self, p: u64) -> Option<bool> {
        Some(self.rank_mod_p(p)? == self.cols)
    }

    /// Solves self·x = v, returning the certificate coefficients when v is
    /// in the column span (free variables set to zero).
    pub fn in_column_span(&self, v: &[Rat]) -> Result<Option<Vec<Rat>>> {
        if v.len() != self.rows {
            return Err(GfcError::DimensionMismatch(format!(
                "span test: vector length {} vs {} rows",
                v.len(),
                self.rows
            )));
        }
        let mut aug = self.to_dense();
        for (i, row) in aug.iter_mut().enumerate() {
            row.push(v[i].clone());
        }
        let pivots = rref_in_place(&mut aug);
        // pivot in the augmented column means inconsistent
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![Rat::zero(); self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug[r][self.cols].clone();
        }
        Ok(Some(x))
    }

    /// Text export: header "rows cols", then one "i j p/q" line per nonzero
    /// entry, sorted by (i, j). Indices are 0-based.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} {}", self.rows, self.cols);
        for (i, j, v) in self.iter() {
            let _ = writeln!(s, "{} {} {}/{}", i, j, v.numer(), v.denom());
        }
        s
    }

    pub fn from_text(text: &str) -> Result<RatMatrix> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| GfcError::DimensionMismatch("empty matrix text".into()))?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| GfcError::DimensionMismatch(format!("bad header: {e}")))?;
        if dims.len() != 2 {
            return Err(GfcError::DimensionMismatch("header must be 'rows cols'".into()));
        }
        let mut m = RatMatrix::zero(dims[0], dims[1]);
        for line in lines {
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != 3 {
                return Err(GfcError::DimensionMismatch(format!("bad entry line: {line}")));
            }
            let i: usize = toks[0]
                .parse()
                .map_err(|e| GfcError::DimensionMismatch(format!("bad row index: {e}")))?;
            let j: usize = toks[1]
                .parse()
                .map_err(|e| GfcError::DimensionMismatch(format!("bad col index: {e}")))?;
            m.set(i, j, parse_rat(toks[2])?);
        }
        Ok(m)
    }
}

/// Parses "p/q" or "p" into a reduced rational.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let numer: BigInt = n
        .parse()
        .map_err(|e| GfcError::DimensionMismatch(format!("bad rational {s}: {e}")))?;
    let denom: BigInt = d
        .parse()
        .map_err(|e| GfcError::DimensionMismatch(format!("bad rational {s}: {e}")))?;
    if denom.is_zero() {
        return Err(GfcError::DimensionMismatch(format!("zero denominator in {s}")));
    }
    Ok(Rat::new(numer, denom))
}

/// Formats a rational as "p/q" (always with the denominator, q > 0, reduced).
pub fn rat_str(v: &Rat) -> String {
    format!("{}/{}", v.numer(), v.denom())
}

/// Reduced row echelon form in place; returns pivot column per pivot row.
/// First admissible pivot in row-major order, pivot rows normalized to 1.
pub fn rref_in_place(m: &mut [Vec<Rat>]) -> Vec<usize> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let inv = m[r][c].recip();
        for j in c..cols {
            let v = &m[r][j] * &inv;
            m[r][j] = v;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let v = &m[i][j] - &f * &m[r][j];
                    m[i][j] = v;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

/// Echelonizes a set of vectors in place (RREF of the stacked matrix),
/// dropping zero vectors. Leading coefficients become 1 in coordinate order.
pub fn echelonize(vecs: &mut Vec<Vec<Rat>>) {
    if vecs.is_empty() {
        return;
    }
    rref_in_place(vecs.as_mut_slice());
    vecs.retain(|v| v.iter().any(|x| !x.is_zero()));
}

/// Fraction-free row echelon form in place; returns the pivot columns.
/// After the pass, rows beyond the rank are identically zero and row i has
/// zeros left of its pivot column.
fn bareiss_echelon(m: &mut [Vec<BigInt>]) -> Vec<usize> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    for c in 0..cols {
        let rank = pivots.len();
        let Some(pr) = (rank..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(rank, pr);
        let pivot = m[rank][c].clone();
        for i in rank + 1..rows {
            for j in c + 1..cols {
                let num = &pivot * &m[i][j] - &m[i][c] * &m[rank][j];
                m[i][j] = num / &prev; // exact by the Bareiss identity
            }
            m[i][c] = BigInt::zero();
        }
        prev = pivot;
        pivots.push(c);
        if pivots.len() == rows {
            break;
        }
    }
    pivots
}

/// Sparse forward elimination over ℚ with fill-reducing pivoting: pivot
/// column = fewest active nonzeros, then pivot row = fewest entries, index
/// tiebreaks. Deterministic. Returns the pivot (row, col) pairs in
/// elimination order; pivot rows are frozen once chosen.
fn sparse_eliminate(rows: &mut [BTreeMap<usize, Rat>], cols: usize) -> Vec<(usize, usize)> {
    let mut col_rows: Vec<std::collections::BTreeSet<usize>> = vec![Default::default(); cols];
    for (i, row) in rows.iter().enumerate() {
        for &j in row.keys() {
            col_rows[j].insert(i);
        }
    }
    let mut active = vec![true; rows.len()];
    let mut pivoted = vec![false; cols];
    let mut pivots = Vec::new();
    loop {
        // cheapest remaining column
        let Some(c) = (0..cols)
            .filter(|&c| !pivoted[c] && !col_rows[c].is_empty())
            .min_by_key(|&c| (col_rows[c].len(), c))
        else {
            break;
        };
        let r = *col_rows[c]
            .iter()
            .min_by_key(|&&r| (rows[r].len(), r))
            .expect("nonempty column");
        // freeze the pivot row
        active[r] = false;
        for &j in rows[r].keys() {
            col_rows[j].remove(&r);
        }
        pivoted[c] = true;
        pivots.push((r, c));

        let pivot_value = rows[r][&c].clone();
        let pivot_row = rows[r].clone();
        let victims: Vec<usize> = col_rows[c].iter().copied().collect();
        for v in victims {
            debug_assert!(active[v]);
            let factor = &rows[v][&c] / &pivot_value;
            let row = &mut rows[v];
            for (j, value) in &pivot_row {
                let updated = row.get(j).cloned().unwrap_or_else(Rat::zero) - &factor * value;
                if updated.is_zero() {
                    if row.remove(j).is_some() {
                        col_rows[*j].remove(&v);
                    }
                } else if row.insert(*j, updated).is_none() {
                    col_rows[*j].insert(v);
                }
            }
            debug_assert!(!row.contains_key(&c));
        }
    }
    pivots
}

/// Sparse elimination over GF(p) used by the rank lower bound.
fn sparse_rank_mod_p(mut rows: Vec<HashMap<usize, u64>>, cols: usize, p: u64) -> usize {
    let mut col_rows: Vec<std::collections::BTreeSet<usize>> = vec![Default::default(); cols];
    for (i, row) in rows.iter().enumerate() {
        for &j in row.keys() {
            col_rows[j].insert(i);
        }
    }
    let mut pivoted = vec![false; cols];
    let mut rank = 0;
    loop {
        let Some(c) = (0..cols)
            .filter(|&c| !pivoted[c] && !col_rows[c].is_empty())
            .min_by_key(|&c| (col_rows[c].len(), c))
        else {
            break;
        };
        let r = *col_rows[c].iter().min_by_key(|&&r| (rows[r].len(), r)).unwrap();
        for &j in rows[r].keys() {
            col_rows[j].remove(&r);
        }
        pivoted[c] = true;
        rank += 1;
        let inv = modinv(rows[r][&c], p).expect("nonzero pivot");
        let pivot_row = rows[r].clone();
        let victims: Vec<usize> = col_rows[c].iter().copied().collect();
        for v in victims {
            let factor = mulmod(rows[v][&c], inv, p);
            for (&j, &value) in &pivot_row {
                let sub = mulmod(factor, value, p);
                let entry = rows[v].entry(j).or_insert(0);
                *entry = (*entry + p - sub) % p;
                if *entry == 0 {
                    rows[v].remove(&j);
                    col_rows[j].remove(&v);
                } else {
                    col_rows[j].insert(v);
                }
            }
        }
    }
    rank
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn modinv(a: u64, p: u64) -> Option<u64> {
    if a == 0 {
        return None;
    }
    // fermat: p prime
    let mut result = 1u64;
    let mut base = a % p;
    let mut exp = p - 2;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mulmod(result, base, p);
        }
        base = mulmod(base, base, p);
        exp >>= 1;
    }
    Some(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: usize, cols: usize, data: &[i64]) -> RatMatrix {
        assert_eq!(data.len(), rows * cols);
        let mut out = RatMatrix::zero(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out.set(i, j, rat(data[i * cols + j]));
            }
        }
        out
    }

    #[test]
    fn rank_of_zero_matrix_is_zero() {
        assert_eq!(RatMatrix::zero(5, 7).rank(), 0);
        assert_eq!(RatMatrix::zero(0, 0).rank(), 0);
    }

    #[test]
    fn identity_has_empty_kernel() {
        let id = RatMatrix::identity(4);
        assert_eq!(id.rank(), 4);
        assert!(id.kernel_basis().is_empty());
    }

    #[test]
    fn kernel_vectors_are_killed_exactly() {
        let a = m(2, 4, &[1, 2, 3, 4, 2, 4, 6, 8]);
        assert_eq!(a.rank(), 1);
        let ker = a.kernel_basis();
        assert_eq!(ker.len(), 3);
        for v in &ker {
            for x in a.apply(v).unwrap() {
                assert!(x.is_zero());
            }
        }
    }

    #[test]
    fn span_test_with_certificate() {
        let a = m(3, 2, &[1, 0, 0, 1, 1, 1]);
        // v = 3*c0 - 2*c1
        let v = vec![rat(3), rat(-2), rat(1)];
        let cert = a.in_column_span(&v).unwrap().expect("in span");
        assert_eq!(cert, vec![rat(3), rat(-2)]);
        let w = vec![rat(1), rat(0), rat(0)];
        assert!(a.in_column_span(&w).unwrap().is_none());
        // zero vector has the zero certificate
        let z = vec![rat(0); 3];
        assert_eq!(a.in_column_span(&z).unwrap().unwrap(), vec![rat(0), rat(0)]);
    }

    #[test]
    fn scalar_multiple_of_single_column() {
        let a = m(3, 1, &[2, -4, 6]);
        let v = vec![rat(6), rat(-12), rat(18)];
        assert_eq!(a.in_column_span(&v).unwrap().unwrap(), vec![rat(3)]);
    }

    #[test]
    fn span_test_rejects_wrong_length() {
        let a = m(2, 2, &[1, 0, 0, 1]);
        assert!(a.in_column_span(&[rat(1)]).is_err());
    }

    #[test]
    fn text_round_trip() {
        let a = m(2, 3, &[1, 0, -2, 0, 3, 0]);
        let mut b = a.clone();
        b.set(1, 1, Rat::new(BigInt::from(3), BigInt::from(7)));
        let text = b.to_text();
        assert!(text.starts_with("2 3\n"));
        assert!(text.contains("1 1 3/7"));
        assert_eq!(RatMatrix::from_text(&text).unwrap(), b);
    }

    #[test]
    fn mod_p_rank_matches_on_small_integers() {
        let a = m(3, 3, &[2, 1, 0, 0, 1, 5, 2, 2, 5]);
        assert_eq!(a.rank_mod_p(2_147_483_647), Some(a.rank()));
    }

    proptest! {
        #[test]
        fn rank_equals_rank_of_transpose(data in proptest::collection::vec(-6i64..=6, 20)) {
            let a = m(4, 5, &data);
            prop_assert_eq!(a.rank(), a.transpose().rank());
        }

        #[test]
        fn bareiss_and_rational_ranks_agree(data in proptest::collection::vec(-9i64..=9, 30)) {
            let a = m(5, 6, &data);
            prop_assert_eq!(a.rank(), a.rank_rational());
        }

        #[test]
        fn rank_nullity(data in proptest::collection::vec(-5i64..=5, 24)) {
            let a = m(4, 6, &data);
            prop_assert_eq!(a.rank() + a.kernel_basis().len(), 6);
        }
    }
}
