//! Statistics on tableaux, permutations and paths, plus the q-analog
//! aggregators over the two-row union.

use std::collections::{BTreeMap, BTreeSet};

use crate::domain::{OrderMasks, Partition, Permutation, SetValuedFilling, SetValuedTableau};
use crate::enumerate::gen_svsyt;
use crate::poly::QPoly;

/// The piecewise descent data of a set-valued filling over `1..=N`.
///
/// The non-minimal entries `d_1 < ... < d_k` cut the value range into
/// pieces `[d_{i-1}, d_i - 1]` (with `d_0 = 1`, `d_{k+1} = N + 1`). A value
/// `j` is a descent when `j` and `j + 1` share a piece and `j + 1` sits at a
/// smaller label than `j`. Every `d_i` is a descent as well.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DescentData {
    pub total: usize,
    pub non_minimal: Vec<usize>,
    /// Value ranges of the pieces, inclusive.
    pub pieces: Vec<(usize, usize)>,
    pub descents: BTreeSet<usize>,
}

impl DescentData {
    pub fn new<F: SetValuedFilling + ?Sized>(s: &F) -> Self {
        let placement = s.placement();
        let total = placement.len();
        let non_minimal: Vec<usize> = (1..=total).filter(|&v| !placement[v - 1].1).collect();
        let mut bounds = vec![1];
        bounds.extend(&non_minimal);
        bounds.push(total + 1);
        let pieces: Vec<(usize, usize)> = bounds.windows(2).map(|w| (w[0], w[1] - 1)).collect();
        let mut piece_of = vec![0; total + 2];
        for (i, &(lo, hi)) in pieces.iter().enumerate() {
            for v in lo..=hi {
                piece_of[v] = i;
            }
        }
        let mut descents: BTreeSet<usize> = non_minimal.iter().copied().collect();
        for j in 1..total {
            if piece_of[j] == piece_of[j + 1] && placement[j].0 < placement[j - 1].0 {
                descents.insert(j);
            }
        }
        DescentData {
            total,
            non_minimal,
            pieces,
            descents,
        }
    }

    pub fn comaj(&self) -> usize {
        self.descents.iter().map(|&j| self.total - j).sum()
    }
}

/// `Des^{+k}(S)`, using label comparison (row-major labels for tableaux).
pub fn descent_set_plus_k<F: SetValuedFilling + ?Sized>(s: &F) -> BTreeSet<usize> {
    DescentData::new(s).descents
}

/// `sum over Des^{+k}(S) of (N - j)` with `N = n + k` entries.
pub fn comaj_plus_k<F: SetValuedFilling + ?Sized>(s: &F) -> usize {
    DescentData::new(s).comaj()
}

/// 1-based positions `j` with `1 < j < m` and `π_{j-1} > π_j < π_{j+1}`.
pub fn inner_valleys(p: &Permutation) -> Vec<usize> {
    let w = p.as_slice();
    (1..w.len().saturating_sub(1))
        .filter(|&i| w[i - 1] > w[i] && w[i] < w[i + 1])
        .map(|i| i + 1)
        .collect()
}

/// 1-based positions of inner peaks `π_{j-1} < π_j > π_{j+1}`.
pub fn inner_peaks(p: &Permutation) -> Vec<usize> {
    let w = p.as_slice();
    (1..w.len().saturating_sub(1))
        .filter(|&i| w[i - 1] < w[i] && w[i] > w[i + 1])
        .map(|i| i + 1)
        .collect()
}

/// Values smaller than everything to their right, increasing.
pub fn rl_minima(p: &Permutation) -> Vec<u32> {
    let mut out = Vec::new();
    let mut best = u32::MAX;
    for &v in p.as_slice().iter().rev() {
        if v < best {
            out.push(v);
            best = v;
        }
    }
    out.reverse();
    out
}

/// Dyck type of a two-row tableau: the top-row entries `a_1 < ... < a_m`,
/// gaps `c_i = a_{i+1} - a_i` with `a_{m+1} = N`, and their multiplicities.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DyckType {
    pub m: usize,
    pub composition: Vec<usize>,
    pub mu: BTreeMap<usize, usize>,
}

pub fn dyck_type(t: &SetValuedTableau) -> DyckType {
    let top = t.row_entries(0);
    let n = t.entry_count() as u32;
    let composition: Vec<usize> = top
        .iter()
        .zip(top.iter().skip(1).chain(std::iter::once(&n)))
        .map(|(a, b)| (b - a) as usize)
        .collect();
    let mut mu = BTreeMap::new();
    for &c in &composition {
        *mu.entry(c).or_insert(0) += 1;
    }
    DyckType {
        m: top.len(),
        composition,
        mu,
    }
}

/// Sum of `q^{comaj^{+k}}` over the two-row union with `n + 1` entries,
/// grouped by the number of top-row entries.
pub fn two_row_comaj_by_top(n: usize) -> BTreeMap<usize, QPoly> {
    let total = n + 1;
    let mut out: BTreeMap<usize, QPoly> = BTreeMap::new();
    for b in 1..=total / 2 {
        let shape = Partition::new(vec![b, b]).expect("rectangle");
        for t in gen_svsyt(&shape, total - 2 * b) {
            let m = t.rows()[0].iter().map(Vec::len).sum();
            out.entry(m).or_default().add_monomial(comaj_plus_k(&t), 1);
        }
    }
    out
}

/// The q-Catalan analog: `sum over 2b + k = n + 1, S in SYT^{+k}(2 x b)`
/// of `q^{comaj^{+k}(S)}`.
pub fn q_catalan_tilde(n: usize) -> QPoly {
    two_row_comaj_by_top(n).into_values().sum()
}

/// The same sum restricted to tableaux with `m` top-row entries.
pub fn q_narayana_tilde(n: usize, m: usize) -> QPoly {
    two_row_comaj_by_top(n).remove(&m).unwrap_or_default()
}

/// Number of maximal elements of an order ideal.
pub fn ddeg(order: &OrderMasks, ideal: u64) -> usize {
    order.maximal(ideal).count_ones() as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closedform::catalan;
    use crate::domain::SkewShape;

    fn tab(rows: Vec<Vec<Vec<u32>>>) -> SetValuedTableau {
        SetValuedTableau::from_rows(rows).unwrap()
    }

    fn q(c: &[i64]) -> QPoly {
        QPoly::from_coeffs(c.iter().copied())
    }

    #[test]
    fn small_descent_sets() {
        let a = tab(vec![vec![vec![1, 2]], vec![vec![3]]]);
        let b = tab(vec![vec![vec![1]], vec![vec![2, 3]]]);
        assert_eq!(descent_set_plus_k(&a), BTreeSet::from([2]));
        assert_eq!(descent_set_plus_k(&b), BTreeSet::from([3]));
        assert_eq!((comaj_plus_k(&a), comaj_plus_k(&b)), (1, 0));
        assert!(descent_set_plus_k(&tab(vec![vec![vec![1]], vec![vec![2]]])).is_empty());
        assert_eq!(comaj_plus_k(&tab(vec![vec![vec![1], vec![2], vec![3]]])), 0);
    }

    #[test]
    fn three_by_four_example() {
        let t = tab(vec![
            vec![vec![1], vec![2], vec![7], vec![8]],
            vec![vec![3], vec![4, 5], vec![11], vec![13]],
            vec![vec![6, 9, 10], vec![12], vec![14, 15], vec![16]],
        ]);
        assert_eq!(descent_set_plus_k(&t), BTreeSet::from([5, 6, 9, 10, 12, 15]));
        assert_eq!(comaj_plus_k(&t), 39);
    }

    #[test]
    fn standard_two_row_descents_are_row_jumps() {
        for b in 1..=4 {
            for t in gen_svsyt(&Partition::new(vec![b, b]).unwrap(), 0) {
                let placement = t.placement();
                let expected: BTreeSet<usize> = (1..2 * b)
                    .filter(|&j| (placement[j].0 >= b) != (placement[j - 1].0 >= b) && placement[j].0 < b)
                    .collect();
                assert_eq!(descent_set_plus_k(&t), expected);
            }
        }
    }

    #[test]
    fn permutation_statistics() {
        let p: Permutation = "3 5 1 2 7 8 4 10 11 6 9".parse().unwrap();
        let valley_values: Vec<u32> = inner_valleys(&p).iter().map(|&j| p.as_slice()[j - 1]).collect();
        assert_eq!(valley_values, vec![1, 4, 6]);
        assert_eq!(rl_minima(&p), vec![1, 2, 4, 6, 9]);
        assert!(inner_valleys(&Permutation::identity(5)).is_empty());
        assert_eq!(inner_valleys(&"2 1 3".parse().unwrap()), vec![2]);
        assert_eq!(rl_minima(&Permutation::identity(4)), vec![1, 2, 3, 4]);
        assert_eq!(rl_minima(&"2 1".parse().unwrap()), vec![1]);
        assert_eq!(inner_peaks(&"1 3 2".parse().unwrap()), vec![2]);
    }

    #[test]
    fn dyck_types() {
        let t = tab(vec![
            vec![vec![1], vec![2, 4], vec![6], vec![9]],
            vec![vec![3, 5], vec![7, 8], vec![10, 11], vec![12]],
        ]);
        let d = dyck_type(&t);
        assert_eq!(d.composition, vec![1, 2, 2, 3, 3]);
        assert_eq!(d.mu, BTreeMap::from([(1, 1), (2, 2), (3, 2)]));
        let single = dyck_type(&tab(vec![vec![vec![1]], vec![vec![2, 3, 4]]]));
        assert_eq!((single.m, single.composition), (1, vec![3]));
    }

    #[test]
    fn q_catalan_table() {
        assert_eq!(q_catalan_tilde(1), q(&[1]));
        assert_eq!(q_catalan_tilde(2), q(&[1, 1]));
        assert_eq!(q_catalan_tilde(3), q(&[1, 1, 2, 1]));
        assert_eq!(q_catalan_tilde(4), q(&[1, 2, 2, 3, 3, 2, 1]));
        assert_eq!(q_catalan_tilde(5), q(&[1, 1, 3, 7, 6, 5, 6, 7, 3, 2, 1]));
        for n in 1..=8 {
            assert_eq!(q_catalan_tilde(n).at_one(), catalan(n));
        }
    }

    #[test]
    fn q_narayana_rows() {
        assert_eq!(q_narayana_tilde(3, 2), q(&[1, 0, 2]));
        assert_eq!(q_narayana_tilde(4, 2), q(&[1, 1, 1, 1, 2]));
        for n in 1..=6 {
            let sum: QPoly = (1..=n).map(|m| q_narayana_tilde(n, m)).sum();
            assert_eq!(sum, q_catalan_tilde(n));
        }
    }

    #[test]
    fn down_degree() {
        let square = SkewShape::straight(Partition::new(vec![2, 2]).unwrap()).order();
        assert_eq!(ddeg(&square, 0), 0);
        assert_eq!(ddeg(&square, square.full_mask()), 1);
        let anti = OrderMasks::from_covers(3, &[]).unwrap();
        assert_eq!(ddeg(&anti, 0b111), 3);
        assert_eq!(ddeg(&anti, 0b101), 2);
    }
}
