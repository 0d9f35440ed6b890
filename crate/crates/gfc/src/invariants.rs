//! Sp(2,ℝ)-invariant subspaces of tensor products of exterior powers of
//! symmetric powers, for n = 1.
//!
//! A profile records how many wedge factors are drawn from each (SᵏH)*.
//! Since Sp(2,ℝ) is connected, invariance is equivalent to being killed by
//! the sl₂ generators, so the invariant subspace is computed as
//! ker(e) ∩ ker(f) restricted to the h-weight-0 span of wedge monomials.
//! An independent character oracle counts the same dimension by expanding
//! exterior-power characters as Laurent polynomials in one variable.
//!
//! Sign conventions: the generators act on a wedge product as degree-0
//! derivations (Leibniz rule, no Koszul signs across factors); re-sorting a
//! slot's index tuple into strictly increasing order contributes the usual
//! alternating sign. Every matrix downstream inherits these signs.

use std::collections::HashMap;
use std::fmt;


use num::Zero;

use crate::linalg::{rat, Rat, RatMatrix};
use crate::poisson::{column, sl2_action};

/// A multiset of symmetric-power slots {Sᵏ : multiplicity}, the unit of
/// enumeration for cochain spaces. Stored as the weakly increasing slot
/// sequence, e.g. [3,3,3,4,7]; the derived order (lexicographic on the
/// sequence) is the canonical profile order used everywhere.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Profile {
    slots: Vec<usize>,
}

impl Profile {
    pub fn new(mut slots: Vec<usize>) -> Self {
        slots.sort_unstable();
        Profile { slots }
    }

    pub fn empty() -> Self {
        Profile { slots: Vec::new() }
    }

    pub fn slots(&self) -> &[usize] {
        &self.slots
    }

    /// (k, multiplicity) pairs, k ascending.
    pub fn multiplicities(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &k in &self.slots {
            match out.last_mut() {
                Some((kk, m)) if *kk == k => *m += 1,
                _ => out.push((k, 1)),
            }
        }
        out
    }

    pub fn degree(&self) -> usize {
        self.slots.len()
    }

    /// Σ m_k (k − 2): the weight of every cochain in this summand.
    pub fn weight(&self) -> i64 {
        self.slots.iter().map(|&k| k as i64 - 2).sum()
    }

    /// Σ m_k k: total polynomial degree; invariants vanish when this is odd.
    pub fn total_polynomial_degree(&self) -> usize {
        self.slots.iter().sum()
    }

    /// A slot space Λ^m(SᵏH)* vanishes once m exceeds dim SᵏH = k + 1.
    pub fn is_valid(&self) -> bool {
        self.multiplicities().iter().all(|&(k, m)| m <= k + 1)
    }

    /// Number of wedge monomials: Π_k C(k+1, m_k) for n = 1.
    pub fn wedge_count(&self) -> usize {
        self.multiplicities()
            .iter()
            .map(|&(k, m)| binomial(k + 1, m))
            .product()
    }
}

impl fmt::Display for Profile {
    /// Compact symbol, e.g. (3^3.4.7) for {S³:3, S⁴:1, S⁷:1}.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.slots.is_empty() {
            return write!(f, "()");
        }
        write!(f, "(")?;
        for (i, (k, m)) in self.multiplicities().into_iter().enumerate() {
            if i > 0 {
                write!(f, ".")?;
            }
            write!(f, "{}", k)?;
            if m > 1 {
                write!(f, "^{}", m)?;
            }
        }
        write!(f, ")")
    }
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut num = 1usize;
    for i in 0..k {
        num = num * (n - i) / (i + 1);
    }
    num
}

/// A wedge monomial: one basis element of Λ^{m₁}(S¹H)* ⊗ Λ^{m₃}(S³H)* ⊗ ….
/// Factors are (slot degree, monomial index) pairs, strictly increasing; the
/// derived order over a fixed profile is the canonical wedge-monomial order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct WedgeMonomial {
    factors: Vec<(usize, usize)>,
}

impl WedgeMonomial {
    pub fn new(factors: Vec<(usize, usize)>) -> Self {
        debug_assert!(factors.windows(2).all(|w| w[0] < w[1]));
        WedgeMonomial { factors }
    }

    pub fn factors(&self) -> &[(usize, usize)] {
        &self.factors
    }

    pub fn degree(&self) -> usize {
        self.factors.len()
    }

    pub fn profile(&self) -> Profile {
        Profile::new(self.factors.iter().map(|&(k, _)| k).collect())
    }

    /// Total sl₂ h-weight of the underlying monomials: Σ (k − 2·index).
    pub fn sl2_weight(&self) -> i64 {
        self.factors.iter().map(|&(k, i)| k as i64 - 2 * i as i64).sum()
    }

    /// Inserts a factor, returning the signed result or None when the factor
    /// is already present. The sign is (−1)^position for moving the new
    /// factor from the front past the existing ones.
    pub fn insert(&self, factor: (usize, usize)) -> Option<(WedgeMonomial, i64)> {
        match self.factors.binary_search(&factor) {
            Ok(_) => None,
            Err(pos) => {
                let mut factors = self.factors.clone();
                factors.insert(pos, factor);
                let sign = if pos % 2 == 0 { 1 } else { -1 };
                Some((WedgeMonomial::new(factors), sign))
            }
        }
    }

    /// Removes the factors at two positions (i < j).
    pub fn without_pair(&self, i: usize, j: usize) -> WedgeMonomial {
        debug_assert!(i < j);
        let mut factors = self.factors.clone();
        factors.remove(j);
        factors.remove(i);
        WedgeMonomial { factors }
    }

    /// Replaces the factor at `pos` with (same slot, new index), re-sorting
    /// with sign; None when the result repeats a factor.
    fn replace_index(&self, pos: usize, new_index: usize) -> Option<(WedgeMonomial, i64)> {
        let (k, _) = self.factors[pos];
        let mut factors = self.factors.clone();
        factors.remove(pos);
        let removal_sign = if pos % 2 == 0 { 1 } else { -1 };
        let interim = WedgeMonomial { factors };
        let (out, insert_sign) = interim.insert((k, new_index))?;
        Some((out, removal_sign * insert_sign))
    }
}

impl fmt::Display for WedgeMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, (k, idx)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "S{k}:{idx}")?;
        }
        write!(f, "]")
    }
}

/// All wedge monomials of a profile in canonical order: per slot degree k
/// ascending, strictly increasing m_k-subsets of the SᵏH monomial basis in
/// lexicographic order.
pub fn wedge_basis(profile: &Profile) -> Vec<WedgeMonomial> {
    let mults = profile.multiplicities();
    let mut out = Vec::with_capacity(profile.wedge_count());
    let mut current: Vec<(usize, usize)> = Vec::with_capacity(profile.degree());
    fn rec(
        mults: &[(usize, usize)],
        current: &mut Vec<(usize, usize)>,
        out: &mut Vec<WedgeMonomial>,
    ) {
        match mults.split_first() {
            None => out.push(WedgeMonomial::new(current.clone())),
            Some((&(k, m), rest)) => {
                let dim = k + 1;
                let mut subset: Vec<usize> = (0..m).collect();
                if m > dim {
                    return;
                }
                loop {
                    for &i in &subset {
                        current.push((k, i));
                    }
                    rec(rest, current, out);
                    current.truncate(current.len() - m);
                    // next lexicographic m-subset of {0..dim}
                    let mut pos = m;
                    loop {
                        if pos == 0 {
                            return;
                        }
                        pos -= 1;
                        if subset[pos] + 1 <= dim - (m - pos) {
                            subset[pos] += 1;
                            for t in pos + 1..m {
                                subset[t] = subset[t - 1] + 1;
                            }
                            break;
                        }
                    }
                }
            }
        }
    }
    if profile.is_valid() {
        rec(&mults, &mut current, &mut out);
    }
    out
}

/// The invariant subspace of one profile: the weight-0 wedge monomials that
/// index its coordinates, and an echelonized basis of Sp-invariant vectors
/// over them.
#[derive(Clone, Debug)]
pub struct InvariantBasis {
    pub profile: Profile,
    /// Canonically ordered h-weight-0 wedge monomials; invariant vectors are
    /// coordinate vectors over exactly these.
    pub monomials: Vec<WedgeMonomial>,
    /// Echelonized invariant vectors (leading coefficient 1 in monomial
    /// order), each annihilated by e and f exactly.
    pub vectors: Vec<Vec<Rat>>,
}

impl InvariantBasis {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    /// Expresses a functional (dense over this profile's weight-0
    /// monomials) in the invariant basis, or None when it lies outside.
    ///
    /// The basis is in reduced echelon form, so the coefficients are just
    /// the coordinates at the leading positions; one reconstruction pass
    /// certifies membership exactly.
    pub fn express(&self, local: &[Rat]) -> Option<Vec<Rat>> {
        debug_assert_eq!(local.len(), self.monomials.len());
        let coeffs: Vec<Rat> = self
            .vectors
            .iter()
            .map(|v| {
                let lead = v.iter().position(|x| !x.is_zero()).expect("echelon vector");
                local[lead].clone()
            })
            .collect();
        let mut reconstructed = vec![Rat::zero(); local.len()];
        for (c, v) in coeffs.iter().zip(&self.vectors) {
            if c.is_zero() {
                continue;
            }
            for (slot, value) in reconstructed.iter_mut().zip(v) {
                if !value.is_zero() {
                    *slot += c * value;
                }
            }
        }
        if reconstructed == local {
            Some(coeffs)
        } else {
            None
        }
    }
}

/// Word-sized prime for the zero-kernel fast path; a mod-p full column
/// rank certifies an exactly trivial kernel.
const FAST_PATH_PRIME: u64 = 2_147_483_647;

/// Expands ξ·v over weight-(w+2s) wedge monomials, where ξ shifts each
/// monomial index by ∓1 (s = +1 for e, −1 for f) and acts by the Leibniz
/// rule. `action` maps a slot degree to the generator's matrix column.
fn generator_image(
    v: &WedgeMonomial,
    action: &dyn Fn(usize, usize) -> Vec<(usize, i64)>,
) -> Vec<(WedgeMonomial, i64)> {
    let mut out: HashMap<WedgeMonomial, i64> = HashMap::new();
    for pos in 0..v.degree() {
        let (k, idx) = v.factors()[pos];
        for (new_idx, coeff) in action(k, idx) {
            if let Some((w, sign)) = v.replace_index(pos, new_idx) {
                *out.entry(w).or_insert(0) += sign * coeff;
            }
        }
    }
    out.into_iter().filter(|(_, c)| *c != 0).collect()
}

/// Computes the invariant basis of a profile by the kernel method:
/// the joint kernel of e and f on the h-weight-0 subspace.
pub fn invariant_basis(profile: &Profile) -> InvariantBasis {
    let all = wedge_basis(profile);
    let monomials: Vec<WedgeMonomial> =
        all.iter().filter(|m| m.sl2_weight() == 0).cloned().collect();
    // odd total polynomial degree: no weight-0 monomials at all
    if monomials.is_empty() {
        return InvariantBasis {
            profile: profile.clone(),
            monomials,
            vectors: Vec::new(),
        };
    }
    let index: HashMap<&WedgeMonomial, usize> =
        monomials.iter().enumerate().map(|(i, m)| (m, i)).collect();

    let max_k = profile.slots().last().copied().unwrap_or(0);
    let actions: Vec<_> = (0..=max_k).map(sl2_action).collect();
    let e_of = |k: usize, idx: usize| column(&actions[k].e, idx);
    let f_of = |k: usize, idx: usize| column(&actions[k].f, idx);

    // φ is invariant iff φ(e·v) = 0 for every weight −2 monomial v and
    // φ(f·w) = 0 for every weight +2 monomial w
    let minus2: Vec<&WedgeMonomial> = all.iter().filter(|m| m.sl2_weight() == -2).collect();
    let plus2: Vec<&WedgeMonomial> = all.iter().filter(|m| m.sl2_weight() == 2).collect();

    let mut cond = RatMatrix::zero(minus2.len() + plus2.len(), monomials.len());
    for (r, v) in minus2.iter().enumerate() {
        for (w, c) in generator_image(v, &e_of) {
            if let Some(&col) = index.get(&w) {
                cond.add_to(r, col, &rat(c));
            }
        }
    }
    for (r, v) in plus2.iter().enumerate() {
        for (w, c) in generator_image(v, &f_of) {
            if let Some(&col) = index.get(&w) {
                cond.add_to(minus2.len() + r, col, &rat(c));
            }
        }
    }

    // fast path: full column rank mod p bounds the exact rank from below,
    // so it proves the kernel is exactly zero
    if cond.full_column_rank_mod_p(FAST_PATH_PRIME) == Some(true) {
        return InvariantBasis {
            profile: profile.clone(),
            monomials,
            vectors: Vec::new(),
        };
    }

    InvariantBasis {
        profile: profile.clone(),
        monomials,
        vectors: cond.kernel_basis(),
    }
}

/// Dimension of the Sp-invariant subspace of a profile.
///
/// Short-circuits to 0 on the h-weight parity obstruction (odd total
/// polynomial degree); otherwise counts the kernel-method basis.
pub fn invariant_dim(profile: &Profile) -> usize {
    if !profile.is_valid() {
        return 0;
    }
    if profile.total_polynomial_degree() % 2 == 1 {
        return 0;
    }
    invariant_basis(profile).dim()
}

/// Character oracle: multiplicity of the trivial representation in the
/// product of exterior-power characters, as the difference of the q⁰ and q²
/// coefficients. Fully independent of the kernel method.
pub fn character_dim_oracle(profile: &Profile) -> usize {
    if !profile.is_valid() {
        return 0;
    }
    // characters are Laurent polynomials in q, stored shifted by an offset
    let mut char_product: Vec<i64> = vec![1];
    let mut offset: i64 = 0; // exponent of the first coefficient
    for (k, m) in profile.multiplicities() {
        let (ext, ext_off) = exterior_power_character(k, m);
        let mut next = vec![0i64; char_product.len() + ext.len() - 1];
        for (i, a) in char_product.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in ext.iter().enumerate() {
                next[i + j] += a * b;
            }
        }
        char_product = next;
        offset += ext_off;
    }
    let coeff = |e: i64| -> i64 {
        let pos = e - offset;
        if pos < 0 || pos as usize >= char_product.len() {
            0
        } else {
            char_product[pos as usize]
        }
    };
    let mult = coeff(0) - coeff(2);
    debug_assert!(mult >= 0);
    mult as usize
}

/// Character of Λᵐ(SᵏH) as coefficients plus the exponent offset of the
/// first entry: e_m evaluated at q^k, q^{k−2}, …, q^{−k}.
fn exterior_power_character(k: usize, m: usize) -> (Vec<i64>, i64) {
    let weights: Vec<i64> = (0..=k).map(|b| k as i64 - 2 * b as i64).collect();
    // DP over elementary symmetric polynomials; track e_0..e_m as Laurent
    // polynomials with a common offset large enough for all of them
    let min_exp: i64 = weights.iter().filter(|&&w| w < 0).sum();
    let max_exp: i64 = weights.iter().filter(|&&w| w > 0).sum();
    let width = (max_exp - min_exp + 1) as usize;
    let mut e: Vec<Vec<i64>> = vec![vec![0i64; width]; m + 1];
    e[0][(0 - min_exp) as usize] = 1;
    for &w in &weights {
        for j in (1..=m).rev() {
            // e_j += q^w · e_{j−1}
            let prev = e[j - 1].clone();
            for (pos, c) in prev.into_iter().enumerate() {
                if c != 0 {
                    let newpos = pos as i64 + w;
                    e[j][newpos as usize] += c;
                }
            }
        }
    }
    (e[m].clone(), min_exp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::One;

    fn p(slots: &[usize]) -> Profile {
        Profile::new(slots.to_vec())
    }

    #[test]
    fn profile_order_matches_table_conventions() {
        let mut profiles = vec![
            p(&[3, 3, 4, 4, 6]),
            p(&[4, 4, 4, 4, 4]),
            p(&[3, 3, 3, 5, 6]),
            p(&[3, 4, 4, 4, 5]),
            p(&[3, 3, 3, 4, 7]),
            p(&[3, 3, 4, 5, 5]),
        ];
        profiles.sort();
        let symbols: Vec<String> = profiles.iter().map(|q| q.to_string()).collect();
        assert_eq!(
            symbols,
            vec!["(3^3.4.7)", "(3^3.5.6)", "(3^2.4^2.6)", "(3^2.4.5^2)", "(3.4^3.5)", "(4^5)"]
        );
    }

    #[test]
    fn profile_weight_formula() {
        assert_eq!(p(&[1, 1]).weight(), -2);
        assert_eq!(p(&[3, 3]).weight(), 2);
        assert_eq!(p(&[3, 3, 3, 4, 7]).weight(), 10);
        assert_eq!(Profile::empty().weight(), 0);
    }

    #[test]
    fn wedge_count_examples() {
        assert_eq!(p(&[3, 3]).wedge_count(), 6);
        assert_eq!(p(&[3, 3, 5, 5]).wedge_count(), 90);
        assert_eq!(p(&[7, 7]).wedge_count(), 28);
    }

    #[test]
    fn wedge_basis_is_ordered_and_complete() {
        let basis = wedge_basis(&p(&[3, 3, 5, 5]));
        assert_eq!(basis.len(), 90);
        let mut sorted = basis.clone();
        sorted.sort();
        assert_eq!(basis, sorted);
        // strictly increasing within slots
        for m in &basis {
            assert!(m.factors().windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn oversaturated_slot_vanishes() {
        // Λ³ of the 2-dimensional S¹H is zero
        assert_eq!(wedge_basis(&p(&[1, 1, 1])).len(), 0);
        assert_eq!(invariant_dim(&p(&[1, 1, 1])), 0);
    }

    #[test]
    fn known_invariant_dimensions() {
        assert_eq!(invariant_dim(&p(&[3, 3])), 1);
        assert_eq!(invariant_dim(&p(&[3])), 0);
        assert_eq!(invariant_dim(&p(&[3, 3, 5, 5])), 2);
        assert_eq!(invariant_dim(&p(&[4, 4, 6])), 1);
        assert_eq!(invariant_dim(&p(&[7, 7])), 1);
        assert_eq!(invariant_dim(&p(&[1, 1])), 1);
        assert_eq!(invariant_dim(&p(&[1, 3])), 0);
        // weight 4, degree 4 line
        assert_eq!(invariant_dim(&p(&[3, 3, 3, 3])), 1);
        // the empty profile carries the constants
        assert_eq!(invariant_dim(&Profile::empty()), 1);
    }

    #[test]
    fn invariant_of_two_cubic_slots() {
        // weight-0 monomials of Λ²S³H are x³∧y³ and x²y∧xy²; the invariant
        // functional has coordinates proportional to (3, −1)
        let inv = invariant_basis(&p(&[3, 3]));
        assert_eq!(inv.dim(), 1);
        assert_eq!(inv.monomials.len(), 2);
        assert_eq!(
            inv.monomials[0],
            WedgeMonomial::new(vec![(3, 0), (3, 3)])
        );
        assert_eq!(
            inv.monomials[1],
            WedgeMonomial::new(vec![(3, 1), (3, 2)])
        );
        let v = &inv.vectors[0];
        assert_eq!(v[0], rat(1));
        assert_eq!(&v[1] * rat(3), rat(-1));
    }

    #[test]
    fn invariants_are_killed_by_both_generators() {
        for slots in [
            vec![3usize, 3],
            vec![3, 3, 5, 5],
            vec![4, 4, 6],
            vec![3, 3, 3, 4, 7],
            vec![1, 1, 3, 3],
        ] {
            let profile = p(&slots);
            let inv = invariant_basis(&profile);
            let all = wedge_basis(&profile);
            let index: HashMap<&WedgeMonomial, usize> =
                inv.monomials.iter().enumerate().map(|(i, m)| (m, i)).collect();
            let max_k = profile.slots().last().copied().unwrap();
            let actions: Vec<_> = (0..=max_k).map(sl2_action).collect();
            for v in &inv.vectors {
                // φ(e·w) = 0 for every weight −2 monomial w, and dually for f
                for w in all.iter().filter(|m| m.sl2_weight() == -2) {
                    let img = generator_image(w, &|k, idx| column(&actions[k].e, idx));
                    let mut total = Rat::zero();
                    for (m, c) in img {
                        if let Some(&i) = index.get(&m) {
                            total += &v[i] * rat(c);
                        }
                    }
                    assert!(total.is_zero());
                }
                for w in all.iter().filter(|m| m.sl2_weight() == 2) {
                    let img = generator_image(w, &|k, idx| column(&actions[k].f, idx));
                    let mut total = Rat::zero();
                    for (m, c) in img {
                        if let Some(&i) = index.get(&m) {
                            total += &v[i] * rat(c);
                        }
                    }
                    assert!(total.is_zero());
                }
            }
        }
    }

    #[test]
    fn echelon_form_is_deterministic() {
        let a = invariant_basis(&p(&[3, 3, 5, 5]));
        let b = invariant_basis(&p(&[3, 3, 5, 5]));
        assert_eq!(a.vectors, b.vectors);
        assert_eq!(a.dim(), 2);
        for v in &a.vectors {
            let lead = v.iter().position(|x| !x.is_zero()).unwrap();
            assert_eq!(v[lead], Rat::one());
        }
    }

    #[test]
    fn odd_total_degree_has_no_invariants() {
        assert_eq!(invariant_dim(&p(&[3, 4])), 0);
        assert_eq!(invariant_dim(&p(&[1, 3, 5])), 0);
        assert_eq!(character_dim_oracle(&p(&[3, 4])), 0);
    }

    #[test]
    fn character_oracle_agrees_with_kernel_method_small() {
        // all profiles with slots in {1,3,4,...,10}, degree <= 5, |weight| <= 10
        let mut profiles: Vec<Profile> = vec![Profile::empty()];
        fn extend(base: &Profile, from_k: usize, out: &mut Vec<Profile>) {
            for k in from_k..=10 {
                if k == 2 {
                    continue;
                }
                let mut slots = base.slots().to_vec();
                slots.push(k);
                let q = Profile::new(slots);
                if q.degree() <= 5 && q.weight().abs() <= 10 && q.is_valid() {
                    out.push(q.clone());
                    extend(&q, k, out);
                }
            }
        }
        extend(&Profile::empty(), 1, &mut profiles);
        assert!(profiles.len() > 100);
        for q in &profiles {
            assert_eq!(
                invariant_dim(q),
                character_dim_oracle(q),
                "mismatch on {q}"
            );
        }
    }
}
