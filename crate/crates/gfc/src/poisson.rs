//! Monomial bases of the symmetric powers SᵏH for H = ℝ²ⁿ, the Poisson
//! bracket as integer structure constants, and the sl₂ generator actions
//! for n = 1.
//!
//! A polynomial Hamiltonian of degree k is a vector in SᵏH, spanned by
//! monomials in x₁…xₙ, y₁…yₙ. The monomial order is graded lexicographic
//! with x₁ > … > xₙ > y₁ > … > yₙ, fixed once and used everywhere: all
//! matrices downstream depend on it.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use crate::{GfcError, Result};

/// A monomial x^a y^b in 2n variables, stored as its exponent vector
/// (x₁…xₙ first, then y₁…yₙ).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Monomial {
    exponents: Vec<u32>,
}

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial { exponents }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn degree(&self) -> usize {
        self.exponents.iter().map(|&e| e as usize).sum()
    }

    /// For n = 1: the sl₂ h-weight a − b of xᵃyᵇ.
    pub fn sl2_weight(&self) -> i64 {
        assert_eq!(self.exponents.len(), 2, "sl2 weight is an n = 1 notion");
        self.exponents[0] as i64 - self.exponents[1] as i64
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.exponents.len() / 2;
        let mut wrote = false;
        for (i, &e) in self.exponents.iter().enumerate() {
            if e == 0 {
                continue;
            }
            wrote = true;
            let name = if n == 1 {
                if i == 0 { "x".to_string() } else { "y".to_string() }
            } else if i < n {
                format!("x{}", i + 1)
            } else {
                format!("y{}", i - n + 1)
            };
            write!(f, "{}", name)?;
            if e > 1 {
                write!(f, "^{}", e)?;
            }
        }
        if !wrote {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// All monomials of total degree k in 2n variables, in graded lexicographic
/// order (x₁ > … > xₙ > y₁ > … > yₙ). Length is C(k + 2n − 1, 2n − 1).
pub fn enumerate_monomials(n: usize, k: usize) -> Vec<Monomial> {
    assert!(n >= 1, "need at least one pair of variables");
    let vars = 2 * n;
    let mut out = Vec::new();
    let mut current = vec![0u32; vars];
    fill(&mut out, &mut current, 0, k as u32, vars);
    out
}

fn fill(out: &mut Vec<Monomial>, current: &mut Vec<u32>, pos: usize, remaining: u32, vars: usize) {
    if pos == vars - 1 {
        current[pos] = remaining;
        out.push(Monomial::new(current.clone()));
        current[pos] = 0;
        return;
    }
    // lex-descending: highest exponent on the earliest variable first
    for e in (0..=remaining).rev() {
        current[pos] = e;
        fill(out, current, pos + 1, remaining - e, vars);
    }
    current[pos] = 0;
}

/// Index of a monomial within `enumerate_monomials(n, degree)`.
///
/// For n = 1 this is just the y-exponent; the general case walks the
/// enumeration order combinatorially.
pub fn monomial_index(m: &Monomial) -> usize {
    let vars = m.exponents.len();
    if vars == 2 {
        return m.exponents[1] as usize;
    }
    let mut remaining = m.degree() as u32;
    let mut index = 0usize;
    for pos in 0..vars - 1 {
        let e = m.exponents[pos];
        // monomials with a larger exponent here come first
        for higher in (e + 1..=remaining).rev() {
            index += compositions(remaining - higher, vars - pos - 1);
        }
        remaining -= e;
    }
    index
}

/// Number of ways to write `total` as an ordered sum of `parts` non-negative
/// integers: C(total + parts − 1, parts − 1).
fn compositions(total: u32, parts: usize) -> usize {
    let mut num = 1usize;
    let mut den = 1usize;
    for i in 1..parts {
        num *= (total as usize) + i;
        den *= i;
    }
    num / den
}

/// Poisson bracket of two monomials, expanded over the monomial basis of
/// S^{k+ℓ−2}H as (index, coefficient) pairs with integer coefficients.
///
/// {f, g} = Σᵢ (∂f/∂xᵢ ∂g/∂yᵢ − ∂f/∂yᵢ ∂g/∂xᵢ).
pub fn poisson_bracket(f: &Monomial, g: &Monomial, n: usize) -> Result<Vec<(usize, i64)>> {
    let k = f.degree();
    let l = g.degree();
    if k + l < 2 {
        return Err(GfcError::DegreeUnderflow { k, l });
    }
    let mut acc: HashMap<Vec<u32>, i64> = HashMap::new();
    for i in 0..n {
        let (ax, ay) = (f.exponents[i] as i64, f.exponents[n + i] as i64);
        let (bx, by) = (g.exponents[i] as i64, g.exponents[n + i] as i64);
        let coeff = ax * by - ay * bx;
        if coeff == 0 {
            continue;
        }
        let mut exps = vec![0u32; 2 * n];
        for j in 0..2 * n {
            exps[j] = f.exponents[j] + g.exponents[j];
        }
        exps[i] -= 1;
        exps[n + i] -= 1;
        *acc.entry(exps).or_insert(0) += coeff;
    }
    let mut out: Vec<(usize, i64)> = acc
        .into_iter()
        .filter(|(_, c)| *c != 0)
        .map(|(exps, c)| (monomial_index(&Monomial::new(exps)), c))
        .collect();
    out.sort_unstable();
    Ok(out)
}

/// Structure constants of the bracket SᵏH ⊗ SˡH → S^{k+ℓ−2}H, indexed by
/// pairs of monomial indices. Entries are antisymmetric under swapping the
/// arguments (with k ↔ ℓ).
pub struct BracketTable {
    pub k: usize,
    pub l: usize,
    entries: Vec<Vec<Vec<(usize, i64)>>>,
}

impl BracketTable {
    pub fn build(n: usize, k: usize, l: usize) -> Result<BracketTable> {
        let fs = enumerate_monomials(n, k);
        let gs = enumerate_monomials(n, l);
        let mut entries = Vec::with_capacity(fs.len());
        for f in &fs {
            let mut row = Vec::with_capacity(gs.len());
            for g in &gs {
                row.push(poisson_bracket(f, g, n)?);
            }
            entries.push(row);
        }
        Ok(BracketTable { k, l, entries })
    }

    /// Bracket of the i-th degree-k monomial with the j-th degree-ℓ one.
    pub fn entry(&self, i: usize, j: usize) -> &[(usize, i64)] {
        &self.entries[i][j]
    }
}

/// Process-wide cache of n = 1 bracket tables; contents are deterministic
/// functions of (k, ℓ), so sharing across threads is harmless.
pub fn bracket_table(k: usize, l: usize) -> &'static BracketTable {
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize), &'static BracketTable>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap();
    if let Some(t) = guard.get(&(k, l)) {
        return t;
    }
    let table = Box::leak(Box::new(BracketTable::build(1, k, l).expect("k+l >= 2")));
    guard.insert((k, l), table);
    table
}

/// The sp(2) = S²H generator actions on the monomial basis of SᵏH (n = 1),
/// as dense integer matrices. Built from Poisson brackets against the
/// quadratic Hamiltonians: e = −{x²/2, ·}, f = {y²/2, ·}, h = [e, f], so
/// that h has eigenvalue a − b on xᵃyᵇ and e raises that weight by 2.
pub struct Sl2Action {
    pub k: usize,
    pub e: Vec<Vec<i64>>,
    pub f: Vec<Vec<i64>>,
    pub h: Vec<Vec<i64>>,
}

impl Sl2Action {
    pub fn dim(&self) -> usize {
        self.k + 1
    }
}

/// sl₂ action on SᵏH for n = 1. Matrices satisfy [e,f] = h, [h,e] = 2e,
/// [h,f] = −2f exactly.
pub fn sl2_action(k: usize) -> Sl2Action {
    let dim = k + 1;
    let basis = enumerate_monomials(1, k);

    // brackets with x²/2 and y²/2 have half-integer coefficients only
    // superficially: {x², m} and {y², m} are even, so halving stays integral
    let mut e = vec![vec![0i64; dim]; dim];
    let mut f = vec![vec![0i64; dim]; dim];
    let x2 = Monomial::new(vec![2, 0]);
    let y2 = Monomial::new(vec![0, 2]);
    for (j, m) in basis.iter().enumerate() {
        for (i, c) in poisson_bracket(&x2, m, 1).expect("degree >= 2") {
            debug_assert_eq!(c % 2, 0);
            e[i][j] = -c / 2;
        }
        for (i, c) in poisson_bracket(&y2, m, 1).expect("degree >= 2") {
            debug_assert_eq!(c % 2, 0);
            f[i][j] = c / 2;
        }
    }
    let h = commutator(&e, &f);
    Sl2Action { k, e, f, h }
}

pub fn commutator(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    let mut out = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut v = 0i64;
            for t in 0..n {
                v += a[i][t] * b[t][j] - b[i][t] * a[t][j];
            }
            out[i][j] = v;
        }
    }
    out
}

/// Column j of one of the generator matrices as sparse (row, coeff) pairs.
pub fn column(m: &[Vec<i64>], j: usize) -> Vec<(usize, i64)> {
    (0..m.len()).filter(|&i| m[i][j] != 0).map(|i| (i, m[i][j])).collect()
}
