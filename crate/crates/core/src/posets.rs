//! Finite naturally labeled posets, their (set-valued) linear extensions,
//! the ϑ weight on (extension, cut) pairs, and the identities tying them to
//! the set-valued comajor index.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::biject::{compose, decompose, ideal_below, multisets, triples};
use crate::domain::{
    bits, DomainError, LinearExtension, OrderMasks, Partition, SetValuedFilling, SkewShape,
};
use crate::enumerate::PlacementEngine;
use crate::poly::QPoly;
use crate::stats::{comaj_plus_k, ddeg, descent_set_plus_k};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PosetError {
    #[error("cover ({0}, {1}) breaks the natural labeling")]
    NotNatural(usize, usize),
    #[error("sets do not form a set-valued linear extension")]
    InvalidExtension,
    #[error(transparent)]
    Domain(#[from] DomainError),
}

/// A poset on `0..n` whose labels are natural: `a < b` in the order implies
/// `a < b` as integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    covers: Vec<(usize, usize)>,
    order: OrderMasks,
}

/// Serialized form used by the poset catalog.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetSpec {
    pub name: String,
    pub n: usize,
    pub covers: Vec<(usize, usize)>,
}

impl Poset {
    pub fn new(n: usize, covers: &[(usize, usize)]) -> Result<Self, PosetError> {
        if let Some(&(a, b)) = covers.iter().find(|(a, b)| a >= b) {
            return Err(PosetError::NotNatural(a, b));
        }
        let order = OrderMasks::from_covers(n, covers)?;
        // Keep only genuine covers, sorted, so equal posets compare equal.
        let mut reduced: Vec<(usize, usize)> = Vec::new();
        for b in 0..n {
            for a in bits(order.below(b)) {
                let between = order.above(a) & order.below(b);
                if between == 0 {
                    reduced.push((a, b));
                }
            }
        }
        reduced.sort_unstable();
        Ok(Poset { covers: reduced, order })
    }

    pub fn from_spec(spec: &PosetSpec) -> Result<Self, PosetError> {
        Poset::new(spec.n, &spec.covers)
    }

    pub fn chain(n: usize) -> Self {
        let covers: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Poset::new(n, &covers).expect("chain is natural")
    }

    pub fn antichain(n: usize) -> Self {
        Poset::new(n, &[]).expect("antichain is natural")
    }

    /// Cells of a Young diagram under the row-major labeling.
    pub fn young(shape: &Partition) -> Self {
        let order = SkewShape::straight(shape.clone()).order();
        let n = order.len();
        let covers: Vec<_> = (0..n).flat_map(|b| bits(order.below(b)).map(move |a| (a, b))).collect();
        Poset::new(n, &covers).expect("row-major labeling is natural")
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn order(&self) -> &OrderMasks {
        &self.order
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    /// Applies a relabeling `new_label[old]`; fails if the result is not
    /// natural.
    pub fn relabel(&self, new_label: &[usize]) -> Result<Poset, PosetError> {
        let covers: Vec<_> = self.covers.iter().map(|&(a, b)| (new_label[a], new_label[b])).collect();
        Poset::new(self.len(), &covers)
    }

    /// Every distinct natural labeling of the same underlying poset. Each
    /// comes from a linear extension read as a relabeling.
    pub fn natural_labelings(&self) -> Vec<Poset> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for ext in linear_extensions(self) {
            let relabeled = self.relabel(&ext.values().iter().map(|v| v - 1).collect::<Vec<_>>()).unwrap();
            if seen.insert(relabeled.covers.clone()) {
                out.push(relabeled);
            }
        }
        out
    }

    pub fn to_spec(&self, name: &str) -> PosetSpec {
        PosetSpec {
            name: name.to_string(),
            n: self.len(),
            covers: self.covers.clone(),
        }
    }
}

/// A set-valued linear extension, stored by element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetValuedLinearExtension {
    sets: Vec<Vec<u32>>,
}

impl SetValuedLinearExtension {
    pub fn new(poset: &Poset, mut sets: Vec<Vec<u32>>) -> Result<Self, PosetError> {
        if sets.len() != poset.len() || sets.iter().any(Vec::is_empty) {
            return Err(PosetError::InvalidExtension);
        }
        sets.iter_mut().for_each(|s| s.sort_unstable());
        let total: usize = sets.iter().map(Vec::len).sum();
        let mut seen = vec![false; total + 1];
        for &v in sets.iter().flatten() {
            if v == 0 || v as usize > total || std::mem::replace(&mut seen[v as usize], true) {
                return Err(PosetError::InvalidExtension);
            }
        }
        for b in 0..poset.len() {
            for a in bits(poset.order.below(b)) {
                if sets[a].last() >= sets[b].first() {
                    return Err(PosetError::InvalidExtension);
                }
            }
        }
        Ok(SetValuedLinearExtension { sets })
    }

    pub fn sets(&self) -> &[Vec<u32>] {
        &self.sets
    }

    pub fn k(&self) -> usize {
        self.entry_count() - self.sets.len()
    }
}

impl SetValuedFilling for SetValuedLinearExtension {
    fn label_sets(&self) -> Vec<&[u32]> {
        self.sets.iter().map(Vec::as_slice).collect()
    }
}

/// A weakly increasing sequence of order ideals.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Multichain(pub Vec<u64>);

impl Multichain {
    pub fn ddeg_product(&self, order: &OrderMasks) -> usize {
        self.0.iter().map(|&i| ddeg(order, i)).product()
    }
}

/// All linear extensions, lexicographic in the element word.
pub fn linear_extensions(p: &Poset) -> impl Iterator<Item = LinearExtension> {
    let n = p.len();
    PlacementEngine::iter(p.order.clone(), n).map(move |sets| {
        let mut word = vec![0; n];
        for (e, s) in sets.iter().enumerate() {
            word[s[0] as usize - 1] = e;
        }
        LinearExtension(word)
    })
}

/// `Lin^{+k}(P)` straight from the definition.
pub fn sv_linear_extensions(p: &Poset, k: usize) -> impl Iterator<Item = SetValuedLinearExtension> {
    PlacementEngine::iter(p.order.clone(), p.len() + k).map(|sets| SetValuedLinearExtension { sets })
}

/// `Lin^{+k}(P)` by composing every triple, sorted.
pub fn sv_linear_extensions_via_triples(p: &Poset, k: usize) -> Vec<SetValuedLinearExtension> {
    let exts: Vec<LinearExtension> = linear_extensions(p).collect();
    let mut out: Vec<SetValuedLinearExtension> = triples(&p.order, &exts, k)
        .map(|tr| SetValuedLinearExtension {
            sets: compose(&p.order, &tr).expect("enumerated triples are valid"),
        })
        .collect();
    out.sort();
    out
}

/// Both generation routes agree as sets.
pub fn sv_routes_agree(p: &Poset, k: usize) -> bool {
    let mut direct: Vec<_> = sv_linear_extensions(p, k).collect();
    direct.sort();
    direct == sv_linear_extensions_via_triples(p, k)
}

/// Every multichain `I_1 ⊆ ... ⊆ I_k` of order ideals.
pub fn multichains(p: &Poset, k: usize) -> Vec<Multichain> {
    let ideals = p.order.ideals();
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(ideals: &[u64], k: usize, floor: u64, current: &mut Vec<u64>, out: &mut Vec<Multichain>) {
        if current.len() == k {
            out.push(Multichain(current.clone()));
            return;
        }
        for &i in ideals {
            if i & floor == floor {
                current.push(i);
                rec(ideals, k, i, current, out);
                current.pop();
            }
        }
    }
    rec(&ideals, k, 0, &mut current, &mut out);
    out
}

/// `π(X, t) = #{j ∈ X : j < t} + (n - t if t ∉ X)`, for `X ⊆ {0..n}`
/// given as a bitmask.
pub fn pi_perm(x: u64, t: usize, n: usize) -> usize {
    let below = (x & crate::domain::low_mask(t)).count_ones() as usize;
    below + if x >> t & 1 == 1 { 0 } else { n - t }
}

fn descent_mask(ext: &LinearExtension) -> u64 {
    ext.descents().iter().fold(0, |m, &j| m | 1 << j)
}

/// The exact ϑ exponent of `(T, t̄)`:
/// `C(k,2) + sum_i (n - t_i) + sum over j in Des(T) not in t̄ of (n - j + #{i : t_i > j})`.
/// For `t_1 >= 1` this equals `comaj^{+k}` of every filling built from the
/// pair.
pub fn vartheta_exponent(ext: &LinearExtension, cuts: &[usize]) -> usize {
    let n = ext.len();
    let k = cuts.len();
    let mut e = k * k.saturating_sub(1) / 2 + cuts.iter().map(|&t| n - t).sum::<usize>();
    for j in ext.descents() {
        if !cuts.contains(&j) {
            e += n - j + cuts.iter().filter(|&&t| t > j).count();
        }
    }
    e
}

pub fn vartheta(ext: &LinearExtension, cuts: &[usize]) -> QPoly {
    QPoly::monomial(vartheta_exponent(ext, cuts))
}

/// The product form `q^{comaj(T) + C(k,2)} prod_i q^{π(Des T, t_i)}`. It
/// agrees with [`vartheta`] when `k <= 1`, and both satisfy the summation
/// identity.
pub fn vartheta_product_form(ext: &LinearExtension, cuts: &[usize]) -> QPoly {
    let n = ext.len();
    let k = cuts.len();
    let d = descent_mask(ext);
    let e = ext.comaj() + k * k.saturating_sub(1) / 2 + cuts.iter().map(|&t| pi_perm(d, t, n)).sum::<usize>();
    QPoly::monomial(e)
}

/// `sum over T` of `q^{comaj(T)}`.
pub fn comaj_generating(p: &Poset) -> QPoly {
    let mut out = QPoly::default();
    for ext in linear_extensions(p) {
        out.add_monomial(ext.comaj(), 1);
    }
    out
}

/// Both sides of
/// `sum_T sum_{0 <= t_1 <= ... <= t_k <= n} ϑ(T, t̄) = q^{C(k,2)} [n+k, k]_q sum_T q^{comaj T}`.
pub fn sum_identity_check(
    p: &Poset,
    k: usize,
    weight: fn(&LinearExtension, &[usize]) -> QPoly,
) -> (QPoly, QPoly) {
    let n = p.len();
    let mut lhs = QPoly::default();
    for ext in linear_extensions(p) {
        for cuts in multisets(0, n, k) {
            lhs += &weight(&ext, &cuts);
        }
    }
    (lhs, normalizer(p, k))
}

/// `q^{C(k,2)} [n+k, n]_q sum_T q^{comaj T}`.
pub fn normalizer(p: &Poset, k: usize) -> QPoly {
    let n = p.len();
    let shift = QPoly::monomial(k * k.saturating_sub(1) / 2);
    &(&shift * &QPoly::q_binomial(n + k, k)) * &comaj_generating(p)
}

/// Both sides of the expected down-degree identity as unreduced fractions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpectedDdeg {
    /// `sum over multichains of μ-weight times prod ddeg`, from the definition.
    pub lhs_num: QPoly,
    /// `sum over multichains of μ-weight`.
    pub lhs_den: QPoly,
    /// `sum over Lin^{+k}(P) of q^{comaj^{+k}}`, by direct enumeration.
    pub rhs_num: QPoly,
    /// `q^{C(k,2)} [n+k, n]_q sum_T q^{comaj T}`.
    pub rhs_den: QPoly,
}

impl ExpectedDdeg {
    /// Equality as rational functions, by cross-multiplication.
    pub fn holds(&self) -> bool {
        !self.lhs_den.coeffs().is_empty()
            && !self.rhs_den.coeffs().is_empty()
            && &self.lhs_num * &self.rhs_den == &self.rhs_num * &self.lhs_den
    }
}

pub fn expected_ddeg(p: &Poset, k: usize) -> ExpectedDdeg {
    let n = p.len();
    // μ-weight of each multichain: sum of ϑ over the (T, t̄) that cut it out.
    let mut weights: HashMap<Multichain, QPoly> = HashMap::new();
    for ext in linear_extensions(p) {
        for cuts in multisets(0, n, k) {
            let chain = Multichain(cuts.iter().map(|&t| ideal_below(&ext, t)).collect());
            *weights.entry(chain).or_default() += &vartheta(&ext, &cuts);
        }
    }
    let mut lhs_num = QPoly::default();
    let mut lhs_den = QPoly::default();
    for chain in multichains(p, k) {
        if let Some(w) = weights.get(&chain) {
            lhs_den += w;
            lhs_num += &(w * &QPoly::from_coeffs([chain.ddeg_product(&p.order) as i64]));
        }
    }
    let mut rhs_num = QPoly::default();
    for s in sv_linear_extensions(p, k) {
        rhs_num.add_monomial(comaj_plus_k(&s), 1);
    }
    ExpectedDdeg {
        lhs_num,
        lhs_den,
        rhs_num,
        rhs_den: normalizer(p, k),
    }
}

/// For every `(T, t̄)` reached by decomposing `Lin^{+k}(P)`, the number of
/// fillings sharing it equals `prod_j ddeg(T^{-1}({1..t_j}))`.
pub fn triples_per_multichain_check(p: &Poset, k: usize) -> bool {
    let mut tally: BTreeMap<(LinearExtension, Vec<usize>), usize> = BTreeMap::new();
    for s in sv_linear_extensions(p, k) {
        let tr = decompose(&s);
        *tally.entry((tr.extension, tr.cuts)).or_default() += 1;
    }
    let expected_pairs: usize = linear_extensions(p)
        .map(|ext| {
            multisets(1, p.len(), k)
                .filter(|cuts| cuts.iter().all(|&t| ddeg(&p.order, ideal_below(&ext, t)) > 0))
                .count()
        })
        .sum();
    tally.len() == expected_pairs
        && tally.iter().all(|((ext, cuts), &count)| {
            count == cuts.iter().map(|&t| ddeg(&p.order, ideal_below(ext, t))).product::<usize>()
        })
}

/// For every fixed `(T, t̄)` with `t_1 >= 1`, the ϑ exponent equals
/// `comaj^{+k}` of every filling composed from it.
pub fn vartheta_matches_comaj(p: &Poset, k: usize) -> bool {
    let exts: Vec<LinearExtension> = linear_extensions(p).collect();
    let ok = triples(&p.order, &exts, k).all(|tr| {
        let sets = compose(&p.order, &tr).expect("valid triple");
        comaj_plus_k(&SetValuedLinearExtension { sets }) == vartheta_exponent(&tr.extension, &tr.cuts)
    });
    ok
}

/// Count of fillings by descent set.
pub type DescentTable = BTreeMap<BTreeSet<usize>, usize>;

pub fn descent_table(shape: &Partition, k: usize) -> DescentTable {
    let mut table = DescentTable::new();
    for s in PlacementEngine::iter(SkewShape::straight(shape.clone()).order(), shape.size() + k) {
        *table.entry(descent_set_plus_k(&SetValuedLinearExtension { sets: s })).or_default() += 1;
    }
    table
}

/// Descent-set tables for `λ` and its conjugate, and whether they agree.
pub fn equidistribution_check(shape: &Partition, k: usize) -> (bool, DescentTable, DescentTable) {
    let a = descent_table(shape, k);
    let b = descent_table(&shape.conjugate(), k);
    (a == b, a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn young(p: &[usize]) -> Poset {
        Poset::young(&Partition::new(p.to_vec()).unwrap())
    }

    #[test]
    fn construction() {
        assert!(matches!(Poset::new(2, &[(1, 0)]), Err(PosetError::NotNatural(1, 0))));
        // Transitive edges are dropped from the stored covers.
        let p = Poset::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(p.covers(), &[(0, 1), (1, 2)]);
        assert_eq!(young(&[2, 2]).covers(), &[(0, 1), (0, 2), (1, 3), (2, 3)]);
        assert_eq!(young(&[2, 2]).natural_labelings().len(), 1);
        assert_eq!(young(&[3, 1]).natural_labelings().len(), 3);
    }

    #[test]
    fn extension_counts() {
        assert_eq!(linear_extensions(&Poset::chain(5)).count(), 1);
        assert_eq!(linear_extensions(&Poset::antichain(4)).count(), 24);
        assert_eq!(linear_extensions(&young(&[2, 2])).count(), 2);
        assert_eq!(sv_linear_extensions(&Poset::chain(2), 1).count(), 2);
        assert_eq!(sv_linear_extensions(&young(&[3, 1]), 0).count(), 3);
        assert_eq!(sv_linear_extensions(&Poset::antichain(1), 4).count(), 1);
    }

    #[test]
    fn validation_of_set_valued_extensions() {
        let p = Poset::chain(2);
        assert!(SetValuedLinearExtension::new(&p, vec![vec![1, 2], vec![3]]).is_ok());
        assert!(SetValuedLinearExtension::new(&p, vec![vec![1, 3], vec![2]]).is_err());
        assert!(SetValuedLinearExtension::new(&p, vec![vec![1], vec![1]]).is_err());
    }

    #[test]
    fn pi_is_a_permutation() {
        for n in 0..=6usize {
            for x in 0..(1u64 << (n + 1)) {
                let mut values: Vec<usize> = (0..=n).map(|t| pi_perm(x, t, n)).collect();
                values.sort_unstable();
                assert_eq!(values, (0..=n).collect::<Vec<_>>());
            }
        }
        assert_eq!((0..=3).map(|t| pi_perm(0, t, 3)).collect::<Vec<_>>(), vec![3, 2, 1, 0]);
        assert_eq!((0..=3).map(|t| pi_perm(0b1111, t, 3)).collect::<Vec<_>>(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn vartheta_small_cases() {
        let ext = LinearExtension(vec![0, 1]);
        assert_eq!(vartheta(&ext, &[1]), QPoly::monomial(1));
        assert_eq!(vartheta_product_form(&ext, &[1]), QPoly::monomial(1));
        assert_eq!(vartheta(&ext, &[]), QPoly::monomial(0));
        for p in [Poset::chain(3), young(&[2, 2]), young(&[3, 1]), Poset::antichain(3)] {
            for k in 0..=3 {
                assert!(vartheta_matches_comaj(&p, k));
            }
        }
    }

    #[test]
    fn sum_identity_small() {
        for p in [Poset::chain(3), young(&[2, 2]), Poset::antichain(2)] {
            for k in 0..=2 {
                let (l, r) = sum_identity_check(&p, k, vartheta);
                assert_eq!(l, r);
                let (l, r) = sum_identity_check(&p, k, vartheta_product_form);
                assert_eq!(l, r);
            }
        }
    }

    #[test]
    fn expected_ddeg_small() {
        let e = expected_ddeg(&Poset::chain(2), 0);
        assert!(e.holds());
        assert_eq!(e.lhs_num, e.lhs_den);
        let e = expected_ddeg(&Poset::chain(2), 1);
        assert!(e.holds());
        assert!(expected_ddeg(&Poset::antichain(2), 1).holds());
        assert!(expected_ddeg(&young(&[2, 2]), 2).holds());
    }

    #[test]
    fn routes_and_triple_counts() {
        for p in [young(&[2, 1]), young(&[2, 2]), Poset::antichain(3), Poset::new(4, &[(0, 2), (1, 2), (1, 3)]).unwrap()] {
            for k in 0..=3 {
                assert!(sv_routes_agree(&p, k));
                assert!(triples_per_multichain_check(&p, k));
            }
        }
    }

    #[test]
    fn equidistribution_examples() {
        for (shape, k) in [(vec![2, 1], 1), (vec![3, 1], 1), (vec![4, 2], 2)] {
            let (ok, a, _) = equidistribution_check(&Partition::new(shape).unwrap(), k);
            assert!(ok);
            assert!(!a.is_empty());
        }
    }

    #[test]
    fn multichain_counts() {
        // Chains of ideals in a 2-chain: ideals {∅, {0}, {0,1}}, so C(3+k-1, k).
        assert_eq!(multichains(&Poset::chain(2), 2).len(), 6);
        assert_eq!(multichains(&Poset::antichain(2), 1).len(), 4);
    }
}
