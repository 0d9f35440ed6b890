//! Euler-characteristic generating functions by the constant-term product
//! formula, cross-checked against chain-level dimensions.
//!
//! For each k ≥ 0 the factor group p_k collects one binomial (1 − tᵏ x^{a−b})
//! per pair of multi-indices a, b ∈ ℕⁿ with |a+b| = 2+k (for k = 0 only the
//! pairs with a ≠ b). The constant term in the x variables of Π p_k equals
//! n!·2ⁿ times Σ_w χ(H*(HAM0)_w) t^w; multiplying one more factor group with
//! k = −1 (|a+b| = 1, t-exponent −1) gives the corresponding HAM series,
//! which starts at t^{−2n}.
//!
//! Truncation keeps every x-exponent alive; only t is truncated. Terms are
//! pruned by a provable reachability bound: a binomial from group k ≥ 1
//! shifts the x-exponent by at most |a−b|₁ ≤ k+2 ≤ 3k per t-degree k, so
//! future shifts from those groups are bounded by 3·(remaining t-budget);
//! the finitely many group-0 and group-(−1) binomials are each usable once
//! and contribute a fixed slack on top. A term beyond the bound can never
//! reach the constant term at or below the truncation order.

use std::collections::{BTreeMap, HashMap};

use num::bigint::BigInt;
use num::{One, Signed, Zero};

use crate::complex::{build_slice, BuildOptions, Variant};
use crate::linalg::{rat_str, Rat};
use crate::{GfcError, Result};

/// A t-truncated series with exact rational coefficients. Coefficients of
/// exponents above the truncation order are undefined, not zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentSeries {
    pub truncation: i64,
    coeffs: BTreeMap<i64, Rat>,
}

impl LaurentSeries {
    pub fn new(truncation: i64) -> Self {
        LaurentSeries { truncation, coeffs: BTreeMap::new() }
    }

    pub fn set(&mut self, exp: i64, value: Rat) {
        assert!(exp <= self.truncation, "coefficient beyond truncation");
        if value.is_zero() {
            self.coeffs.remove(&exp);
        } else {
            self.coeffs.insert(exp, value);
        }
    }

    pub fn coeff(&self, exp: i64) -> Rat {
        self.coeffs.get(&exp).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rat)> {
        self.coeffs.iter().map(|(&e, v)| (e, v))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Equality coefficient-for-coefficient up to the smaller truncation.
    pub fn agrees_with(&self, other: &LaurentSeries) -> bool {
        let bound = self.truncation.min(other.truncation);
        let lo = self
            .coeffs
            .keys()
            .chain(other.coeffs.keys())
            .copied()
            .min()
            .unwrap_or(0);
        (lo..=bound).all(|e| self.coeff(e) == other.coeff(e))
    }

    /// One-line polynomial form, ascending exponents: "t^-2 + 2 - t^8".
    pub fn to_polynomial_string(&self) -> String {
        if self.coeffs.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (&exp, v)) in self.coeffs.iter().enumerate() {
            let negative = v.is_negative();
            if i == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let abs = v.abs();
            let coeff_part = if abs.is_one() && exp != 0 {
                String::new()
            } else if abs.denom().is_one() {
                abs.numer().to_string()
            } else {
                format!("({}/{})", abs.numer(), abs.denom())
            };
            let var_part = match exp {
                0 => String::new(),
                1 => "t".to_string(),
                e => format!("t^{e}"),
            };
            out.push_str(&coeff_part);
            out.push_str(&var_part);
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let coefficients: Vec<serde_json::Value> = self
            .coeffs
            .iter()
            .map(|(&e, v)| serde_json::json!({ "exp": e, "value": rat_str(v) }))
            .collect();
        serde_json::json!({
            "variable": "t",
            "truncation": self.truncation,
            "coefficients": coefficients,
        })
    }
}

/// Key of one term in the product expansion: t-degree and x-exponent vector.
type TermKey = (i64, Vec<i32>);

/// One factor group p_k: the binomials (1 − tᵏ x^{a−b}) over all pairs
/// with |a+b| = 2+k (a ≠ b when k ≤ 0; k = −1 uses |a+b| = 1).
#[derive(Clone, Debug)]
pub struct PerchikFactor {
    pub k: i64,
    /// x-exponent vectors a−b, one per (a, b) pair, with multiplicity.
    pub shifts: Vec<Vec<i32>>,
}

impl PerchikFactor {
    pub fn build(n: usize, k: i64) -> PerchikFactor {
        assert!(k >= -1);
        let total = (2 + k) as u32;
        let mut shifts = Vec::new();
        let mut joint = vec![0u32; 2 * n];
        fn rec(
            joint: &mut Vec<u32>,
            pos: usize,
            remaining: u32,
            n: usize,
            out: &mut Vec<Vec<i32>>,
            exclude_equal: bool,
        ) {
            if pos == 2 * n {
                if remaining == 0 {
                    let (a, b) = joint.split_at(n);
                    if exclude_equal && a == b {
                        return;
                    }
                    out.push((0..n).map(|i| a[i] as i32 - b[i] as i32).collect());
                }
                return;
            }
            for e in 0..=remaining {
                joint[pos] = e;
                rec(joint, pos + 1, remaining - e, n, out, exclude_equal);
            }
            joint[pos] = 0;
        }
        rec(&mut joint, 0, total, n, &mut shifts, k <= 0);
        shifts.sort();
        PerchikFactor { k, shifts }
    }
}

/// Sparse multivariate accumulator for the truncated product.
struct ProductState {
    n: usize,
    /// t-truncation for intermediate terms.
    tmax: i64,
    terms: HashMap<TermKey, BigInt>,
    /// L1 x-shift still obtainable from one-shot factor groups (0 and −1).
    slack: i64,
    budget_terms: usize,
}

impl ProductState {
    fn new(n: usize, tmax: i64, slack: i64, budget_terms: usize) -> Self {
        let mut terms = HashMap::new();
        terms.insert((0i64, vec![0i32; n]), BigInt::one());
        ProductState { n, tmax, terms, slack, budget_terms }
    }

    fn reachable(&self, tdeg: i64, x: &[i32]) -> bool {
        let l1: i64 = x.iter().map(|&e| e.abs() as i64).sum();
        l1 <= 3 * (self.tmax - tdeg) + self.slack
    }

    /// Multiplies by (1 − tᵏ x^shift), pruning unreachable terms.
    fn mul_binomial(&mut self, k: i64, shift: &[i32]) -> Result<()> {
        let mut updates: Vec<(TermKey, BigInt)> = Vec::new();
        for ((tdeg, x), c) in self.terms.iter() {
            let nt = tdeg + k;
            if nt > self.tmax {
                continue;
            }
            let nx: Vec<i32> = x.iter().zip(shift).map(|(a, b)| a + b).collect();
            if !self.reachable(nt, &nx) {
                continue;
            }
            updates.push(((nt, nx), -c.clone()));
        }
        for (key, delta) in updates {
            let entry = self.terms.entry(key).or_insert_with(BigInt::zero);
            *entry += delta;
        }
        self.terms.retain(|_, c| !c.is_zero());
        if self.terms.len() > self.budget_terms {
            return Err(GfcError::BudgetExceeded {
                what: format!("constant-term product over {} x-variables", self.n),
                size: self.terms.len(),
                budget: self.budget_terms,
            });
        }
        Ok(())
    }

    fn constant_x_series(&self, truncation: i64) -> LaurentSeries {
        let zero_x = vec![0i32; self.n];
        let mut s = LaurentSeries::new(truncation);
        for ((tdeg, x), c) in self.terms.iter() {
            if *x == zero_x && *tdeg <= truncation {
                s.set(*tdeg, Rat::from_integer(c.clone()));
            }
        }
        s
    }
}

/// Shared driver: expands the truncated product of the factor groups,
/// extracts the constant x-term, and divides by n!·2ⁿ.
fn constant_term_series(
    n: usize,
    tmax: i64,
    include_minus_one: bool,
    truncation: i64,
    budget_terms: usize,
) -> Result<LaurentSeries> {
    if n == 0 {
        return Err(GfcError::Unsupported("n must be positive".into()));
    }
    let group0 = PerchikFactor::build(n, 0);
    let minus1 = include_minus_one.then(|| PerchikFactor::build(n, -1));
    // one-shot slack: each group-0 binomial can shift |x|₁ by ≤ 2, each
    // group-(−1) binomial by ≤ 1
    let slack0 = 2 * group0.shifts.len() as i64;
    let slack_minus = minus1.as_ref().map_or(0, |f| f.shifts.len() as i64);

    let mut state = ProductState::new(n, tmax, slack0 + slack_minus, budget_terms);

    // factor groups with k > tmax cannot contribute at or below t^tmax
    for k in 1..=tmax.max(0) {
        let factor = PerchikFactor::build(n, k);
        for shift in &factor.shifts {
            state.mul_binomial(k, shift)?;
        }
    }
    // group 0: slack shrinks as its binomials are consumed
    for (i, shift) in group0.shifts.iter().enumerate() {
        state.slack = 2 * (group0.shifts.len() - 1 - i) as i64 + slack_minus;
        state.mul_binomial(0, shift)?;
    }
    if let Some(minus1) = &minus1 {
        for (i, shift) in minus1.shifts.iter().enumerate() {
            state.slack = (minus1.shifts.len() - 1 - i) as i64;
            state.mul_binomial(-1, shift)?;
        }
    }

    let raw = state.constant_x_series(truncation);
    // divide by n!·2ⁿ; every quotient must be an integer
    let scale =
        BigInt::from((1..=n as u64).product::<u64>().max(1)) * BigInt::from(2u64).pow(n as u32);
    let mut out = LaurentSeries::new(truncation);
    for (e, v) in raw.terms() {
        let scaled = v / Rat::from_integer(scale.clone());
        if !scaled.denom().is_one() {
            return Err(GfcError::Inconsistency(format!(
                "constant term at t^{e} is not divisible by n!·2^n: {}",
                rat_str(&scaled)
            )));
        }
        out.set(e, scaled);
    }
    Ok(out)
}

/// Σ_w χ(H*(HAM0)_w) t^w by the constant-term product formula, exact to
/// the truncation order.
pub fn perchik_series(n: usize, tmax: i64) -> Result<LaurentSeries> {
    perchik_series_with_budget(n, tmax, 50_000_000)
}

pub fn perchik_series_with_budget(
    n: usize,
    tmax: i64,
    budget_terms: usize,
) -> Result<LaurentSeries> {
    if tmax < 0 {
        return Err(GfcError::Unsupported("truncation must be ≥ 0".into()));
    }
    constant_term_series(n, tmax, false, tmax, budget_terms)
}

/// The HAM variant of the series (weights from −2n up), obtained by the
/// extra k = −1 factor group. Built for n = 1.
pub fn perchik_full_series(n: usize, tmax: i64) -> Result<LaurentSeries> {
    if n != 1 {
        return Err(GfcError::Unsupported(
            "the full series with the k = −1 factor is built for n = 1".into(),
        ));
    }
    if tmax < -2 {
        return Err(GfcError::Unsupported("truncation must be ≥ −2".into()));
    }
    // the two k = −1 binomials can lower the t-degree by 2 in total, so the
    // base product must be exact two orders higher
    constant_term_series(n, tmax + 2, true, tmax, 50_000_000)
}

/// Σ_w χ(slice(variant, w)) t^w from chain-level dimensions: the fully
/// independent oracle the product formula is checked against. Odd weights
/// vanish at chain level.
pub fn complex_euler_series(
    variant: Variant,
    tmax: i64,
    opts: &BuildOptions,
) -> Result<LaurentSeries> {
    let start = match variant {
        Variant::Ham => -2,
        Variant::Ham0 => 0,
    };
    let mut out = LaurentSeries::new(tmax);
    for w in start..=tmax {
        if w.rem_euclid(2) == 1 {
            continue;
        }
        let chi = build_slice(variant, w, opts)?.euler_characteristic();
        if chi != 0 {
            out.set(w, Rat::from_integer(BigInt::from(chi)));
        }
    }
    Ok(out)
}

/// Per-coefficient comparison of the product series across ranks n, next to
/// the trivalent-graph-algebra series 1 + t² + 2t⁴ + 3t⁶ + 6t⁸ + 9t¹⁰ +
/// 16t¹², for the stabilization report.
#[derive(Clone, Debug)]
pub struct StabilizationReport {
    pub tmax: i64,
    pub ranks: Vec<usize>,
    /// rows: exponent, per-rank coefficient, agreement across all ranks
    pub rows: Vec<(i64, Vec<Rat>, bool)>,
    /// the comparison series coefficients on even exponents ≤ 12
    pub graph_algebra_series: Vec<(i64, i64)>,
}

pub fn stabilization_report(ranks: &[usize], tmax: i64) -> Result<StabilizationReport> {
    let series: Vec<LaurentSeries> = ranks
        .iter()
        .map(|&n| perchik_series(n, tmax))
        .collect::<Result<_>>()?;
    let mut rows = Vec::new();
    for e in 0..=tmax {
        let values: Vec<Rat> = series.iter().map(|s| s.coeff(e)).collect();
        let stable = values.len() >= 2 && values.windows(2).all(|w| w[0] == w[1]);
        rows.push((e, values, stable));
    }
    let graph_algebra_series = [(0, 1), (2, 1), (4, 2), (6, 3), (8, 6), (10, 9), (12, 16)]
        .into_iter()
        .filter(|&(e, _)| e <= tmax)
        .collect();
    Ok(StabilizationReport { tmax, ranks: ranks.to_vec(), rows, graph_algebra_series })
}

impl StabilizationReport {
    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|(e, values, stable)| {
                serde_json::json!({
                    "exp": e,
                    "values": values.iter().map(rat_str).collect::<Vec<_>>(),
                    "stable": stable,
                })
            })
            .collect();
        serde_json::json!({
            "ranks": self.ranks,
            "tmax": self.tmax,
            "coefficients": rows,
            "graph_algebra_series": self.graph_algebra_series
                .iter()
                .map(|&(e, c)| serde_json::json!({ "exp": e, "value": c.to_string() }))
                .collect::<Vec<_>>(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    fn int_series(truncation: i64, terms: &[(i64, i64)]) -> LaurentSeries {
        let mut s = LaurentSeries::new(truncation);
        for &(e, c) in terms {
            s.set(e, rat(c));
        }
        s
    }

    #[test]
    fn trivial_truncation_gives_one() {
        let s = perchik_series(1, 0).unwrap();
        assert_eq!(s, int_series(0, &[(0, 1)]));
    }

    #[test]
    fn low_order_product_series() {
        let s = perchik_series(1, 12).unwrap();
        assert_eq!(s, int_series(12, &[(0, 1), (2, 1), (10, -1), (12, 1)]));
    }

    #[test]
    fn product_series_to_twenty_six() {
        let s = perchik_series(1, 26).unwrap();
        let expected = int_series(
            26,
            &[
                (0, 1),
                (2, 1),
                (10, -1),
                (12, 1),
                (14, -1),
                (16, -1),
                (18, 1),
                (24, -3),
                (26, 2),
            ],
        );
        assert_eq!(s, expected);
    }

    #[test]
    fn full_series_to_thirty_two() {
        let s = perchik_full_series(1, 32).unwrap();
        let expected = int_series(
            32,
            &[
                (-2, 1),
                (0, 2),
                (8, -1),
                (14, -1),
                (22, -1),
                (28, -1),
                (30, 1),
                (32, -1),
            ],
        );
        assert_eq!(s, expected);
    }

    #[test]
    fn complex_series_matches_product_to_ten() {
        let opts = BuildOptions::default();
        let complex = complex_euler_series(Variant::Ham0, 10, &opts).unwrap();
        assert_eq!(complex, int_series(10, &[(0, 1), (2, 1), (10, -1)]));
        let product = perchik_series(1, 10).unwrap();
        assert!(product.agrees_with(&complex));
    }

    #[test]
    fn ham_complex_series_matches_full_product_to_eight() {
        let opts = BuildOptions::default();
        let complex = complex_euler_series(Variant::Ham, 8, &opts).unwrap();
        assert_eq!(complex, int_series(8, &[(-2, 1), (0, 2), (8, -1)]));
        let product = perchik_full_series(1, 8).unwrap();
        assert!(product.agrees_with(&complex));
    }

    #[test]
    fn odd_weight_coefficients_vanish() {
        let opts = BuildOptions::default();
        let s = complex_euler_series(Variant::Ham0, 9, &opts).unwrap();
        for e in [1i64, 3, 5, 7, 9] {
            assert!(s.coeff(e).is_zero());
        }
        let p = perchik_series(1, 9).unwrap();
        for e in [1i64, 3, 5, 7, 9] {
            assert!(p.coeff(e).is_zero());
        }
    }

    #[test]
    fn rank_two_series_is_computable_and_integral() {
        let s = perchik_series(2, 6).unwrap();
        assert_eq!(s.coeff(0), rat(1));
        // every stored coefficient is an integer after the n!·2ⁿ division
        for (_, v) in s.terms() {
            assert!(v.denom().is_one());
        }
    }

    #[test]
    fn stabilization_report_runs() {
        let r = stabilization_report(&[1, 2], 6).unwrap();
        assert_eq!(r.ranks, vec![1, 2]);
        // the constant coefficient is 1 for every rank
        let row0 = &r.rows[0];
        assert!(row0.2);
        assert_eq!(r.graph_algebra_series[0], (0, 1));
        let json = r.to_json();
        assert_eq!(json["ranks"][0], 1);
    }

    #[test]
    fn polynomial_formatting() {
        let s = int_series(12, &[(0, 1), (2, 1), (10, -1), (12, 1)]);
        assert_eq!(s.to_polynomial_string(), "1 + t^2 - t^10 + t^12");
        let f = int_series(8, &[(-2, 1), (0, 2), (8, -1)]);
        assert_eq!(f.to_polynomial_string(), "t^-2 + 2 - t^8");
        let m = int_series(26, &[(24, -3), (26, 2)]);
        assert_eq!(m.to_polynomial_string(), "-3t^24 + 2t^26");
        assert_eq!(LaurentSeries::new(5).to_polynomial_string(), "0");
    }

    #[test]
    fn factor_group_shapes() {
        // n=1, k=0: pairs (2,0) and (0,2) give shifts ±2
        let f0 = PerchikFactor::build(1, 0);
        assert_eq!(f0.shifts, vec![vec![-2], vec![2]]);
        // n=1, k=1: a+b=3 gives shifts −3, −1, 1, 3
        let f1 = PerchikFactor::build(1, 1);
        assert_eq!(f1.shifts, vec![vec![-3], vec![-1], vec![1], vec![3]]);
        // n=1, k=2: a+b=4 includes a=b=2 (shift 0)
        let f2 = PerchikFactor::build(1, 2);
        assert_eq!(f2.shifts, vec![vec![-4], vec![-2], vec![0], vec![2], vec![4]]);
        // n=1, k=−1: |a+b|=1 gives shifts ±1
        let fm = PerchikFactor::build(1, -1);
        assert_eq!(fm.shifts, vec![vec![-1], vec![1]]);
    }
}
