//! The distinguished cocycles ω, γ₁, p₁, η and the ∧ω chain map.
//!
//! ω and p₁ are assembled from tautological 1-forms: δⁱ_{j₁…j_k} extracts a
//! Taylor coefficient of the i-th component of a formal vector field at the
//! origin. For Hamiltonian fields these forms are functionals on symmetric
//! powers, so wedges of them expand over the same wedge-monomial bases as
//! everything else. The transverse symplectic cocycle is ω = δ¹∧δ², the
//! universal curvature is Ω^i_j = Σ_k δᵏ∧δⁱ_{jk}, and p₁ = tr(Ω∧Ω) up to a
//! nonzero scalar.
//!
//! Wedging with ω embeds the degree-d weight-w cochains of HAM0 into the
//! degree-(d+2) weight-(w−2) cochains of HAM; on invariant bases this is an
//! injective chain map, and in cohomology it carries 1 ↦ ω, γ₁ ↦ p₁, and
//! η ↦ GKF, the degree-7 weight-8 exotic class.

use std::collections::BTreeMap;

use num::{One, Zero};
use serde::Serialize;

use crate::complex::{build_slice, BuildOptions, DegreeData, Variant, WeightSlice};
use crate::invariants::{wedge_basis, Profile, WedgeMonomial};
use crate::linalg::{rat, rat_str, Rat, RatMatrix};
use crate::{GfcError, Result};

/// A cochain: sparse rational coordinates over the canonical invariant
/// basis of one (variant, weight, degree) space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    pub variant: Variant,
    pub weight: i64,
    pub degree: usize,
    pub coords: BTreeMap<usize, Rat>,
}

impl Cochain {
    pub fn from_dense(variant: Variant, weight: i64, degree: usize, dense: &[Rat]) -> Self {
        let coords = dense
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, v)| (i, v.clone()))
            .collect();
        Cochain { variant, weight, degree, coords }
    }

    pub fn to_dense(&self, dim: usize) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); dim];
        for (&i, v) in &self.coords {
            out[i] = v.clone();
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    /// Divides by the leading (first nonzero) coefficient; returns the old
    /// leading value.
    pub fn normalize_leading(&mut self) -> Rat {
        let Some((_, lead)) = self.coords.iter().next() else {
            return Rat::one();
        };
        let lead = lead.clone();
        for v in self.coords.values_mut() {
            *v /= &lead;
        }
        lead
    }

    /// Profiles of the slice basis vectors this cochain touches.
    pub fn support_profiles(&self, slice: &WeightSlice) -> Vec<Profile> {
        let data = &slice.degrees[self.degree];
        let mut out: Vec<Profile> = Vec::new();
        for block in &data.blocks {
            let lo = block.basis_offset;
            let hi = lo + block.invariants.dim();
            if self.coords.range(lo..hi).next().is_some() {
                out.push(block.profile().clone());
            }
        }
        out
    }
}

/// Tautological 1-form δⁱ_{j₁…j_k}: on a field X = Σ fᵢ ∂/∂xᵢ it evaluates
/// to (−1)^k ∂^k f_i/∂x_{j₁}…∂x_{j_k}(0). Symmetric in the lower indices.
/// For n = 1 the coordinates are (x₁, x₂) = (x, y).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TautologicalForm {
    pub upper: usize,
    pub lower: Vec<usize>,
}

impl TautologicalForm {
    pub fn new(upper: usize, mut lower: Vec<usize>) -> Self {
        assert!(upper == 1 || upper == 2);
        assert!(lower.iter().all(|&j| j == 1 || j == 2));
        lower.sort_unstable();
        TautologicalForm { upper, lower }
    }

    /// Slot degree of the Hamiltonians this form pairs with: a k-th Taylor
    /// coefficient of the field comes from a degree-(k+1) Hamiltonian.
    pub fn slot(&self) -> usize {
        self.lower.len() + 1
    }

    /// Dense values over the monomial basis of S^{slot}H (n = 1).
    ///
    /// The Hamiltonian field of H is (−H_y)∂/∂x + (H_x)∂/∂y, so for
    /// H = xᵃyᵇ the form reads off one monomial coefficient with the
    /// factorials of repeated differentiation.
    pub fn functional(&self) -> Vec<Rat> {
        let k = self.lower.len();
        let r = self.lower.iter().filter(|&&j| j == 1).count();
        let s = k - r;
        let slot = self.slot();
        let sign = if k % 2 == 0 { 1i64 } else { -1 };
        let factorials = (factorial(r) * factorial(s)) as i64;
        let mut out = vec![Rat::zero(); slot + 1];
        if self.upper == 1 {
            // f₁ = −H_y: hits H = x^r y^{s+1}, index = y-exponent = s+1
            out[s + 1] = rat(-((s as i64) + 1) * factorials * sign);
        } else {
            // f₂ = H_x: hits H = x^{r+1} y^s
            out[s] = rat(((r as i64) + 1) * factorials * sign);
        }
        out
    }
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product::<u64>().max(1)
}

/// Wedge of 1-forms, each living on one symmetric-power slot, expanded over
/// the wedge-monomial basis of the resulting profile.
///
/// The forms are stably grouped by slot degree (the permutation sign of
/// that regrouping multiplies everything); within the canonical basis the
/// value on a wedge monomial is the product over slots of the pairing
/// determinants.
pub fn wedge_of_one_forms(forms: &[(usize, Vec<Rat>)]) -> (Profile, BTreeMap<WedgeMonomial, Rat>) {
    let profile = Profile::new(forms.iter().map(|&(k, _)| k).collect());
    // permutation sign of the stable sort by slot degree
    let mut order: Vec<usize> = (0..forms.len()).collect();
    order.sort_by_key(|&i| forms[i].0);
    let mut sign = 1i64;
    {
        let mut perm = order.clone();
        for i in 0..perm.len() {
            while perm[i] != i {
                let j = perm[i];
                perm.swap(i, j);
                sign = -sign;
            }
        }
    }
    let grouped: Vec<&(usize, Vec<Rat>)> = order.iter().map(|&i| &forms[i]).collect();

    let mut out = BTreeMap::new();
    for monomial in wedge_basis(&profile) {
        let mut value = rat(sign);
        let mut pos = 0usize;
        for (k, m) in profile.multiplicities() {
            let indices: Vec<usize> = monomial.factors()[pos..pos + m]
                .iter()
                .map(|&(_, idx)| idx)
                .collect();
            let block: Vec<&Vec<Rat>> = grouped[pos..pos + m].iter().map(|f| &f.1).collect();
            debug_assert!(grouped[pos..pos + m].iter().all(|f| f.0 == k));
            value *= det(&block, &indices);
            if value.is_zero() {
                break;
            }
            pos += m;
        }
        if !value.is_zero() {
            out.insert(monomial, value);
        }
    }
    (profile, out)
}

/// Determinant of the pairing matrix [form_r(e_{indices[s]})].
fn det(forms: &[&Vec<Rat>], indices: &[usize]) -> Rat {
    let n = forms.len();
    let mut m: Vec<Vec<Rat>> = (0..n)
        .map(|r| indices.iter().map(|&i| forms[r][i].clone()).collect())
        .collect();
    let mut result = Rat::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return Rat::zero();
        };
        if p != c {
            m.swap(p, c);
            result = -result;
        }
        result *= m[c][c].clone();
        let inv = m[c][c].recip();
        for r in c + 1..n {
            if m[r][c].is_zero() {
                continue;
            }
            let f = &m[r][c] * &inv;
            for j in c..n {
                let v = &m[r][j] - &f * &m[c][j];
                m[r][j] = v;
            }
        }
    }
    result
}

/// Expresses a functional given over a degree's wedge monomials in the
/// canonical invariant basis. Errors when it is not invariant.
pub fn express_in_basis(
    data: &DegreeData,
    by_monomial: &BTreeMap<WedgeMonomial, Rat>,
    what: &str,
) -> Result<Vec<Rat>> {
    let mut dense = vec![Rat::zero(); data.dim];
    let mut weight0_nonzero = 0usize;
    for block in &data.blocks {
        let inv = &block.invariants;
        let local: Vec<Rat> = inv
            .monomials
            .iter()
            .map(|m| by_monomial.get(m).cloned().unwrap_or_else(Rat::zero))
            .collect();
        weight0_nonzero += local.iter().filter(|v| !v.is_zero()).count();
        if local.iter().all(|v| v.is_zero()) {
            continue;
        }
        let coeffs = inv.express(&local).ok_or_else(|| {
            GfcError::Inconsistency(format!("{what} is not invariant on {}", inv.profile))
        })?;
        for (r, coeff) in coeffs.into_iter().enumerate() {
            dense[block.basis_offset + r] = coeff;
        }
    }
    // coordinates on monomials outside the h-weight-0 set must vanish
    let nonzero_keys = by_monomial.values().filter(|v| !v.is_zero()).count();
    if nonzero_keys != weight0_nonzero {
        return Err(GfcError::Inconsistency(format!(
            "{what} has coordinates off the weight-0 monomials"
        )));
    }
    Ok(dense)
}

/// Named distinguished cocycles.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ClassName {
    Omega,
    Gamma1,
    P1,
    Eta,
    Gkf,
}

impl ClassName {
    pub fn as_str(self) -> &'static str {
        match self {
            ClassName::Omega => "omega",
            ClassName::Gamma1 => "gamma1",
            ClassName::P1 => "p1",
            ClassName::Eta => "eta",
            ClassName::Gkf => "gkf",
        }
    }
}

/// A named class with its normalized cochain representative. Classes are
/// projective: the normalization note records the scalar that was divided
/// out (the leading coefficient in echelon order).
#[derive(Clone, Debug)]
pub struct NamedClass {
    pub name: ClassName,
    pub cochain: Cochain,
    pub normalization: String,
}

/// ω = δ¹∧δ² in the (HAM, w = −2, d = 2) basis; spans that line and pairs
/// to +1 with the wedge x∧y of linear Hamiltonians.
pub fn build_omega(ham_minus2: &WeightSlice) -> Result<NamedClass> {
    assert_eq!(ham_minus2.variant, Variant::Ham);
    assert_eq!(ham_minus2.weight, -2);
    let d1 = TautologicalForm::new(1, vec![]);
    let d2 = TautologicalForm::new(2, vec![]);
    let (_, by_monomial) = wedge_of_one_forms(&[(1, d1.functional()), (1, d2.functional())]);
    let dense = express_in_basis(&ham_minus2.degrees[2], &by_monomial, "omega")?;
    let mut cochain = Cochain::from_dense(Variant::Ham, -2, 2, &dense);
    if cochain.is_zero() {
        return Err(GfcError::Inconsistency("omega vanished".into()));
    }
    let lead = cochain.normalize_leading();
    Ok(NamedClass {
        name: ClassName::Omega,
        cochain,
        normalization: format!("delta^1 ^ delta^2 = {} * representative", rat_str(&lead)),
    })
}

/// γ₁: the generator of C²(HAM0)₂ = (Λ²S³H*)^Sp, closed for weight reasons.
pub fn build_gamma1(ham0_w2: &WeightSlice) -> Result<NamedClass> {
    assert_eq!(ham0_w2.variant, Variant::Ham0);
    assert_eq!(ham0_w2.weight, 2);
    if ham0_w2.dim(2) != 1 {
        return Err(GfcError::Inconsistency(format!(
            "C^2(ham0)_2 should be a line, found dim {}",
            ham0_w2.dim(2)
        )));
    }
    let mut coords = BTreeMap::new();
    coords.insert(0usize, Rat::one());
    Ok(NamedClass {
        name: ClassName::Gamma1,
        cochain: Cochain { variant: Variant::Ham0, weight: 2, degree: 2, coords },
        normalization: "echelon generator of the (3^2) invariant line".into(),
    })
}

/// p₁ from the universal curvature: Ω^i_j = Σ_k δᵏ∧δⁱ_{jk} restricted to
/// Hamiltonian fields, p₁ = tr(Ω∧Ω) normalized to leading coefficient 1.
pub fn build_p1(ham_w0: &WeightSlice) -> Result<NamedClass> {
    assert_eq!(ham_w0.variant, Variant::Ham);
    assert_eq!(ham_w0.weight, 0);
    let delta = |i: usize| TautologicalForm::new(i, vec![]).functional();
    let delta2 = |i: usize, j: usize, k: usize| TautologicalForm::new(i, vec![j, k]).functional();

    let mut total: BTreeMap<WedgeMonomial, Rat> = BTreeMap::new();
    for i in 1..=2usize {
        for j in 1..=2usize {
            for k in 1..=2usize {
                for l in 1..=2usize {
                    // Ω^i_j ∧ Ω^j_i term: δᵏ∧δⁱ_{jk} ∧ δˡ∧δʲ_{il}
                    let forms = [
                        (1usize, delta(k)),
                        (3usize, delta2(i, j, k)),
                        (1usize, delta(l)),
                        (3usize, delta2(j, i, l)),
                    ];
                    let (_, term) = wedge_of_one_forms(&forms);
                    for (m, v) in term {
                        let entry = total.entry(m).or_insert_with(Rat::zero);
                        *entry += v;
                    }
                }
            }
        }
    }
    total.retain(|_, v| !v.is_zero());
    let dense = express_in_basis(&ham_w0.degrees[4], &total, "p1")?;
    let mut cochain = Cochain::from_dense(Variant::Ham, 0, 4, &dense);
    if cochain.is_zero() {
        return Err(GfcError::Inconsistency("tr(curvature^2) vanished".into()));
    }
    let lead = cochain.normalize_leading();
    Ok(NamedClass {
        name: ClassName::P1,
        cochain,
        normalization: format!("tr(curvature^2) = {} * representative", rat_str(&lead)),
    })
}

/// The per-degree matrices of ∧ω: Cᵈ(HAM0)_w → C^{d+2}(HAM)_{w−2} over the
/// invariant bases. Exact chain map, injective degree by degree.
pub struct WedgeOmegaMap {
    /// maps[d]: matrix for source degree d (rows: target invariant basis of
    /// degree d+2, cols: source basis of degree d).
    pub maps: Vec<RatMatrix>,
}

pub fn wedge_omega_map(source: &WeightSlice, target: &WeightSlice) -> Result<WedgeOmegaMap> {
    assert_eq!(source.variant, Variant::Ham0);
    assert_eq!(target.variant, Variant::Ham);
    if target.weight != source.weight - 2 {
        return Err(GfcError::DimensionMismatch(format!(
            "wedge-omega weights: source {} target {}",
            source.weight, target.weight
        )));
    }
    let mut maps = Vec::new();
    let top = source.max_degree.min(target.max_degree.saturating_sub(2));
    for d in 0..=top {
        let src = &source.degrees[d];
        let tgt = &target.degrees[d + 2];
        let mut m = RatMatrix::zero(tgt.dim, src.dim);
        for block in &src.blocks {
            for (c, vec) in block.invariants.vectors.iter().enumerate() {
                // φ∧ω = ω∧φ: prepend the S¹ pair to every monomial,
                // coefficientwise (slot 1 precedes every HAM0 slot)
                let mut by_monomial: BTreeMap<WedgeMonomial, Rat> = BTreeMap::new();
                for (local, val) in vec.iter().enumerate() {
                    if val.is_zero() {
                        continue;
                    }
                    let mut factors = vec![(1usize, 0usize), (1, 1)];
                    factors.extend_from_slice(block.invariants.monomials[local].factors());
                    by_monomial.insert(WedgeMonomial::new(factors), val.clone());
                }
                let dense = express_in_basis(tgt, &by_monomial, "wedge with omega")?;
                for (r, coeff) in dense.into_iter().enumerate() {
                    if !coeff.is_zero() {
                        m.set(r, block.basis_offset + c, coeff);
                    }
                }
            }
        }
        maps.push(m);
    }
    Ok(WedgeOmegaMap { maps })
}

impl WedgeOmegaMap {
    /// Applies the degree-d map to a cochain.
    pub fn apply(&self, cochain: &Cochain, source: &WeightSlice) -> Result<Cochain> {
        let d = cochain.degree;
        let m = self.maps.get(d).ok_or_else(|| {
            GfcError::DimensionMismatch(format!("no wedge-omega map at degree {d}"))
        })?;
        let dense = m.apply(&cochain.to_dense(source.dim(d)))?;
        Ok(Cochain::from_dense(Variant::Ham, cochain.weight - 2, d + 2, &dense))
    }

    /// Chain-map defect δ∘Λ_d − Λ_{d+1}∘δ; zero for every degree.
    pub fn chain_map_defect(
        &self,
        source: &WeightSlice,
        target: &WeightSlice,
        d: usize,
    ) -> Result<RatMatrix> {
        let lhs = target.coboundaries[d + 2].mul(&self.maps[d])?;
        let rhs = self.maps[d + 1].mul(&source.coboundaries[d])?;
        let mut defect = lhs;
        for (i, j, v) in rhs.iter() {
            defect.add_to(i, j, &(-v.clone()));
        }
        Ok(defect)
    }

    /// Every Λ_d is injective on cochains: rank equals source dimension.
    pub fn injective_everywhere(&self, source: &WeightSlice) -> bool {
        self.maps
            .iter()
            .enumerate()
            .all(|(d, m)| m.rank() == source.dim(d))
    }
}

/// Rank data of the map induced in cohomology at one degree by ∧ω.
pub struct InducedMapRank {
    pub source_betti: usize,
    pub target_betti: usize,
    pub rank: usize,
}

impl InducedMapRank {
    pub fn injective(&self) -> bool {
        self.rank == self.source_betti
    }
    pub fn isomorphism(&self) -> bool {
        self.injective() && self.rank == self.target_betti
    }
}

/// Computes the rank of Hᵈ(source) → H^{d+2}(target) induced by Λ:
/// rank([B_t | Λ·Z_s]) − rank(B_t) with Z_s a cocycle basis and B_t the
/// target coboundary image.
pub fn induced_map_rank(
    source: &WeightSlice,
    target: &WeightSlice,
    lambda: &WedgeOmegaMap,
    d: usize,
) -> Result<InducedMapRank> {
    let zs: Vec<Vec<Rat>> = if source.dim(d) == 0 {
        Vec::new()
    } else if d < source.coboundaries.len() {
        source.coboundaries[d].kernel_basis()
    } else {
        (0..source.dim(d))
            .map(|i| {
                let mut v = vec![Rat::zero(); source.dim(d)];
                v[i] = Rat::one();
                v
            })
            .collect()
    };
    let rank_prev_source = if d == 0 { 0 } else { source.coboundaries[d - 1].rank() };
    let source_betti = zs.len() - rank_prev_source;

    let td = d + 2;
    let bt = &target.coboundaries[td - 1];
    let target_dim = target.dim(td);
    let rank_bt = bt.rank();
    let kernel_t = if td < target.coboundaries.len() {
        target.dim(td) - target.coboundaries[td].rank()
    } else {
        target.dim(td)
    };
    let target_betti = kernel_t - rank_bt;

    // stack [B_t | Λ z_1 | … ] and measure the rank jump
    let mut aug = RatMatrix::zero(target_dim, bt.cols() + zs.len());
    for (i, j, v) in bt.iter() {
        aug.set(i, j, v.clone());
    }
    for (c, z) in zs.iter().enumerate() {
        let img = lambda.maps[d].apply(z)?;
        for (r, v) in img.into_iter().enumerate() {
            if !v.is_zero() {
                aug.set(r, bt.cols() + c, v);
            }
        }
    }
    let rank = aug.rank() - rank_bt;
    Ok(InducedMapRank { source_betti, target_betti, rank })
}

/// η: the generator of H⁵(HAM0)₁₀, reduced toward a representative
/// supported on the profiles (3^3.4.7), (3^2.4^2.6), (3^2.4.5^2).
pub struct EtaExtraction {
    pub eta: NamedClass,
    /// Set when no cocycle representative with the stated support exists;
    /// η then falls back to the plain echelon cocycle.
    pub support_obstruction: Option<String>,
}

pub fn extract_eta(ham0_w10: &WeightSlice) -> Result<EtaExtraction> {
    assert_eq!(ham0_w10.variant, Variant::Ham0);
    assert_eq!(ham0_w10.weight, 10);
    let betti = ham0_w10.cohomology_dims();
    if betti.get(&5) != Some(&1) {
        return Err(GfcError::Inconsistency(format!(
            "H^5(ham0)_10 should be a line, found {betti:?}"
        )));
    }
    let d5 = &ham0_w10.coboundaries[5];
    let d4 = &ham0_w10.coboundaries[4];

    let allowed: Vec<Profile> = vec![
        Profile::new(vec![3, 3, 3, 4, 7]),
        Profile::new(vec![3, 3, 4, 4, 6]),
        Profile::new(vec![3, 3, 4, 5, 5]),
    ];
    let data = &ham0_w10.degrees[5];
    let mut disallowed_indices: Vec<usize> = Vec::new();
    for block in &data.blocks {
        if !allowed.contains(block.profile()) {
            for r in 0..block.invariants.dim() {
                disallowed_indices.push(block.basis_offset + r);
            }
        }
    }

    // cocycles with zero coordinates on the disallowed profile blocks
    let mut stacked = RatMatrix::zero(d5.rows() + disallowed_indices.len(), data.dim);
    for (i, j, v) in d5.iter() {
        stacked.set(i, j, v.clone());
    }
    for (r, &idx) in disallowed_indices.iter().enumerate() {
        stacked.set(d5.rows() + r, idx, Rat::one());
    }
    let candidates = stacked.kernel_basis();

    let mut chosen: Option<Vec<Rat>> = None;
    for cand in &candidates {
        if d4.in_column_span(cand)?.is_none() {
            chosen = Some(cand.clone());
            break;
        }
    }

    let (vector, support_obstruction) = match chosen {
        Some(v) => (v, None),
        None => {
            // report the obstruction and fall back to any non-exact cocycle
            let reason = if candidates.is_empty() {
                "no cocycle is supported on the three stated profiles".to_string()
            } else {
                "every supported cocycle is a coboundary".to_string()
            };
            let fallback = d5
                .kernel_basis()
                .into_iter()
                .find(|z| matches!(d4.in_column_span(z), Ok(None)))
                .ok_or_else(|| {
                    GfcError::Inconsistency("no non-exact cocycle in degree 5".into())
                })?;
            (fallback, Some(reason))
        }
    };

    let mut cochain = Cochain::from_dense(Variant::Ham0, 10, 5, &vector);
    let lead = cochain.normalize_leading();
    Ok(EtaExtraction {
        eta: NamedClass {
            name: ClassName::Eta,
            cochain,
            normalization: format!("echelon cocycle scaled by {}", rat_str(&lead)),
        },
        support_obstruction,
    })
}

/// One certified isomorphism Hᵈ(HAM0)_w → H^{d+2}(HAM)_{w−2}.
#[derive(Clone, Debug, Serialize)]
pub struct IsoReport {
    pub source_weight: i64,
    pub degree: usize,
    pub source_betti: usize,
    pub target_betti: usize,
    pub rank: usize,
    pub isomorphism: bool,
}

/// Certifies that ∧ω induces an isomorphism in cohomology at the relevant
/// degree for source weight w ∈ {0, 2, 10}.
pub fn verify_iso_in_cohomology(w_source: i64, opts: &BuildOptions) -> Result<IsoReport> {
    let degree = match w_source {
        0 => 0,
        2 => 2,
        10 => 5,
        _ => {
            return Err(GfcError::Unsupported(format!(
                "isomorphism certification covers source weights 0, 2, 10; got {w_source}"
            )))
        }
    };
    let source = build_slice(Variant::Ham0, w_source, opts)?;
    let target = build_slice(Variant::Ham, w_source - 2, opts)?;
    let lambda = wedge_omega_map(&source, &target)?;
    let induced = induced_map_rank(&source, &target, &lambda, degree)?;
    Ok(IsoReport {
        source_weight: w_source,
        degree,
        source_betti: induced.source_betti,
        target_betti: induced.target_betti,
        rank: induced.rank,
        isomorphism: induced.isomorphism(),
    })
}

/// The full factorization certificate: η, GKF = η∧ω, and the checks the
/// report carries (closedness, non-exactness, chain map, isomorphisms).
#[derive(Clone, Debug)]
pub struct FactorizationReport {
    pub eta: NamedClass,
    pub gkf: NamedClass,
    pub eta_support: Vec<Profile>,
    pub support_obstruction: Option<String>,
    pub closed: bool,
    pub non_exact: bool,
    pub chain_map: bool,
    pub injective: bool,
    pub iso: bool,
    pub gamma1_maps_to_p1: bool,
    pub omega_line: bool,
}

impl FactorizationReport {
    pub fn all_pass(&self) -> bool {
        self.closed
            && self.non_exact
            && self.chain_map
            && self.injective
            && self.iso
            && self.gamma1_maps_to_p1
            && self.omega_line
            && self.support_obstruction.is_none()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let coeffs = |c: &Cochain| -> Vec<serde_json::Value> {
            c.coords
                .iter()
                .map(|(i, v)| serde_json::json!([i, rat_str(v)]))
                .collect()
        };
        serde_json::json!({
            "eta": {
                "degree": self.eta.cochain.degree,
                "weight": self.eta.cochain.weight,
                "support_profiles": self.eta_support.iter().map(|p| p.slots().to_vec()).collect::<Vec<_>>(),
                "coefficients": coeffs(&self.eta.cochain),
                "support_obstruction": self.support_obstruction,
            },
            "gkf": {
                "degree": self.gkf.cochain.degree,
                "weight": self.gkf.cochain.weight,
                "coefficients": coeffs(&self.gkf.cochain),
            },
            "checks": {
                "closed": self.closed,
                "non_exact": self.non_exact,
                "chain_map": self.chain_map,
                "injective": self.injective,
                "iso": self.iso,
                "gamma1_wedge_omega_spans_p1": self.gamma1_maps_to_p1,
                "omega_line": self.omega_line,
            },
        })
    }
}

/// Runs the whole factorization pipeline: builds the slices, the ∧ω maps,
/// the named classes, and every certificate.
pub fn factorize(opts: &BuildOptions) -> Result<FactorizationReport> {
    let ham0_w10 = build_slice(Variant::Ham0, 10, opts)?;
    let ham_w8 = build_slice(Variant::Ham, 8, opts)?;
    let lambda = wedge_omega_map(&ham0_w10, &ham_w8)?;

    // chain map and injectivity, degree by degree
    let mut chain_map = true;
    for d in 0..lambda.maps.len().saturating_sub(1) {
        if !lambda.chain_map_defect(&ham0_w10, &ham_w8, d)?.is_zero() {
            chain_map = false;
        }
    }
    let injective = lambda.injective_everywhere(&ham0_w10);

    let extraction = extract_eta(&ham0_w10)?;
    let eta = extraction.eta;
    let eta_support = eta.cochain.support_profiles(&ham0_w10);

    // GKF = η∧ω
    let mut gkf_cochain = lambda.apply(&eta.cochain, &ham0_w10)?;
    let gkf_lead = gkf_cochain.normalize_leading();
    let closed = {
        let eta_dense = eta.cochain.to_dense(ham0_w10.dim(5));
        let gkf_dense = gkf_cochain.to_dense(ham_w8.dim(7));
        ham0_w10.coboundaries[5].apply(&eta_dense)?.iter().all(|v| v.is_zero())
            && ham_w8.coboundaries[7].apply(&gkf_dense)?.iter().all(|v| v.is_zero())
    };
    let non_exact = ham_w8.coboundaries[6]
        .in_column_span(&gkf_cochain.to_dense(ham_w8.dim(7)))?
        .is_none();
    let gkf = NamedClass {
        name: ClassName::Gkf,
        cochain: gkf_cochain,
        normalization: format!("eta wedge omega scaled by {}", rat_str(&gkf_lead)),
    };

    // the three isomorphisms
    let iso = [0i64, 2, 10]
        .into_iter()
        .map(|w| verify_iso_in_cohomology(w, opts).map(|r| r.isomorphism))
        .collect::<Result<Vec<bool>>>()?
        .into_iter()
        .all(|b| b);

    // γ₁∧ω spans the p₁ line modulo coboundaries
    let gamma1_maps_to_p1 = {
        let ham0_w2 = build_slice(Variant::Ham0, 2, opts)?;
        let ham_w0 = build_slice(Variant::Ham, 0, opts)?;
        let lam2 = wedge_omega_map(&ham0_w2, &ham_w0)?;
        let gamma1 = build_gamma1(&ham0_w2)?;
        let p1 = build_p1(&ham_w0)?;
        let image = lam2.apply(&gamma1.cochain, &ham0_w2)?;
        // solve [δ₃ | p₁]·z = Λγ₁ and demand a nonzero p₁ coefficient
        let d3 = &ham_w0.coboundaries[3];
        let dim4 = ham_w0.dim(4);
        let mut aug = RatMatrix::zero(dim4, d3.cols() + 1);
        for (i, j, v) in d3.iter() {
            aug.set(i, j, v.clone());
        }
        for (i, v) in p1.cochain.to_dense(dim4).into_iter().enumerate() {
            aug.set(i, d3.cols(), v);
        }
        match aug.in_column_span(&image.to_dense(dim4))? {
            Some(cert) => !cert[d3.cols()].is_zero(),
            None => false,
        }
    };

    // ω spans H²(HAM)₋₂ and is the image of the unit under ∧ω
    let omega_line = {
        let ham_m2 = build_slice(Variant::Ham, -2, opts)?;
        let omega = build_omega(&ham_m2)?;
        let ham0_w0 = build_slice(Variant::Ham0, 0, opts)?;
        let lam0 = wedge_omega_map(&ham0_w0, &ham_m2)?;
        let unit = Cochain {
            variant: Variant::Ham0,
            weight: 0,
            degree: 0,
            coords: BTreeMap::from([(0usize, Rat::one())]),
        };
        let image = lam0.apply(&unit, &ham0_w0)?;
        ham_m2.dim(2) == 1 && image == omega.cochain
    };

    Ok(FactorizationReport {
        eta,
        gkf,
        eta_support,
        support_obstruction: extraction.support_obstruction,
        closed,
        non_exact,
        chain_map,
        injective,
        iso,
        gamma1_maps_to_p1,
        omega_line,
    })
}

/// Opt-in long-running experiment: does the weight-14 degree-9 class also
/// factor through ∧ω from (HAM0, w=16, d=7)? Reports the data, asserts
/// nothing beyond it.
#[derive(Clone, Debug, Serialize)]
pub struct MetokiReport {
    pub ham0_w16_betti: BTreeMap<usize, usize>,
    pub ham_w14_betti: BTreeMap<usize, usize>,
    pub induced_rank_degree7: usize,
    pub source_betti: usize,
    pub target_betti: usize,
    pub factors_through_wedge_omega: bool,
}

pub fn metoki_experiment(opts: &BuildOptions) -> Result<MetokiReport> {
    let source = build_slice(Variant::Ham0, 16, opts)?;
    let target = build_slice(Variant::Ham, 14, opts)?;
    let lambda = wedge_omega_map(&source, &target)?;
    let induced = induced_map_rank(&source, &target, &lambda, 7)?;
    Ok(MetokiReport {
        ham0_w16_betti: source.cohomology_dims(),
        ham_w14_betti: target.cohomology_dims(),
        induced_rank_degree7: induced.rank,
        source_betti: induced.source_betti,
        target_betti: induced.target_betti,
        factors_through_wedge_omega: induced.isomorphism(),
    })
}
