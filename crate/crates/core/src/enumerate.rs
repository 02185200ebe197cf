//! Exhaustive generators for every object family. These are the oracles the
//! closed forms are checked against, so they stay deliberately literal:
//! backtracking over one choice per position, with emission order fixed by
//! the order in which choices are tried.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::domain::{
    bits, ColoredPath, OrderMasks, Partition, PathTag, Permutation, SetValuedTableau,
    SkewShape, Step,
};

/// A depth-first search over words, one choice index per position.
/// Implementors keep whatever incremental state they need in `push`/`pop`.
pub trait Search {
    type Item;

    /// Length of a complete word.
    fn target(&self) -> usize;
    fn depth(&self) -> usize;
    /// Number of choice indices to try at the current depth.
    fn choices(&self) -> usize;
    /// Applies choice `c` if it keeps the partial word extendable.
    fn try_push(&mut self, c: usize) -> bool;
    /// Undoes the last push and returns its choice index.
    fn pop(&mut self) -> usize;
    fn emit(&self) -> Self::Item;
}

/// Lazy iterator over the complete words of a [`Search`], in lexicographic
/// order of choice indices.
pub struct DfsIter<S: Search> {
    search: S,
    cursor: usize,
    done: bool,
}

impl<S: Search> DfsIter<S> {
    pub fn new(search: S) -> Self {
        DfsIter {
            search,
            cursor: 0,
            done: false,
        }
    }

    /// Backtracks one level; false when the search is exhausted.
    fn backtrack(&mut self) -> bool {
        if self.search.depth() == 0 {
            return false;
        }
        self.cursor = self.search.pop() + 1;
        true
    }
}

impl<S: Search> Iterator for DfsIter<S> {
    type Item = S::Item;

    fn next(&mut self) -> Option<S::Item> {
        if self.done {
            return None;
        }
        if self.search.target() == 0 {
            self.done = true;
            return Some(self.search.emit());
        }
        loop {
            if self.search.depth() == self.search.target() {
                if !self.backtrack() {
                    self.done = true;
                    return None;
                }
                continue;
            }
            let limit = self.search.choices();
            let found = (self.cursor..limit).find(|&c| self.search.try_push(c));
            match found {
                Some(_) => {
                    self.cursor = 0;
                    if self.search.depth() == self.search.target() {
                        return Some(self.search.emit());
                    }
                }
                None => {
                    if !self.backtrack() {
                        self.done = true;
                        return None;
                    }
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Set-valued fillings of an order
// ---------------------------------------------------------------------------

/// Places the values `1..=total` one at a time. Each value either opens an
/// element whose strict down-set is already open, or joins an open element
/// with nothing open above it. The word of chosen elements determines the
/// filling, and fillings are emitted in lexicographic order of that word.
#[derive(Clone, Debug)]
pub struct PlacementEngine {
    order: OrderMasks,
    total: usize,
    word: Vec<usize>,
    opened: u64,
    counts: Vec<u32>,
}

impl PlacementEngine {
    pub fn new(order: OrderMasks, total: usize) -> Self {
        let n = order.len();
        PlacementEngine {
            order,
            total: if total < n { usize::MAX } else { total },
            word: Vec::with_capacity(total),
            opened: 0,
            counts: vec![0; n],
        }
    }

    /// Iterator over label-indexed sets.
    pub fn iter(order: OrderMasks, total: usize) -> DfsIter<PlacementEngine> {
        DfsIter::new(PlacementEngine::new(order, total))
    }

    fn unopened(&self) -> usize {
        self.order.len() - self.opened.count_ones() as usize
    }
}

impl Search for PlacementEngine {
    type Item = Vec<Vec<u32>>;

    fn target(&self) -> usize {
        self.total
    }

    fn depth(&self) -> usize {
        self.word.len()
    }

    fn choices(&self) -> usize {
        if self.total == usize::MAX {
            0
        } else {
            self.order.len()
        }
    }

    fn try_push(&mut self, e: usize) -> bool {
        let left_after = self.total - self.word.len() - 1;
        let ok = if self.counts[e] == 0 {
            self.order.below(e) & !self.opened == 0 && left_after + 1 >= self.unopened()
        } else {
            self.order.above(e) & self.opened == 0 && left_after >= self.unopened()
        };
        if ok {
            self.counts[e] += 1;
            self.opened |= 1 << e;
            self.word.push(e);
        }
        ok
    }

    fn pop(&mut self) -> usize {
        let e = self.word.pop().expect("pop below depth zero");
        self.counts[e] -= 1;
        if self.counts[e] == 0 {
            self.opened &= !(1 << e);
        }
        e
    }

    fn emit(&self) -> Vec<Vec<u32>> {
        let mut sets = vec![Vec::new(); self.order.len()];
        for (v, &e) in self.word.iter().enumerate() {
            sets[e].push(v as u32 + 1);
        }
        sets
    }
}

/// Counts set-valued fillings with `total` values without building them.
/// The reachable state after any prefix is just the set of opened
/// elements, so this is a memoized walk over order ideals.
pub fn count_fillings(order: &OrderMasks, total: usize) -> BigUint {
    fn walk(order: &OrderMasks, mask: u64, left: usize, memo: &mut HashMap<(u64, usize), BigUint>) -> BigUint {
        let full = order.full_mask();
        if left == 0 {
            return if mask == full { BigUint::one() } else { BigUint::zero() };
        }
        let unopened = (full & !mask).count_ones() as usize;
        if unopened > left {
            return BigUint::zero();
        }
        if let Some(v) = memo.get(&(mask, left)) {
            return v.clone();
        }
        let mut total = BigUint::zero();
        for e in bits(full & !mask) {
            if order.below(e) & !mask == 0 {
                total += walk(order, mask | 1 << e, left - 1, memo);
            }
        }
        let appendable = order.maximal(mask).count_ones();
        if appendable > 0 {
            total += walk(order, mask, left - 1, memo) * appendable;
        }
        memo.insert((mask, left), total.clone());
        total
    }
    walk(order, 0, total, &mut HashMap::new())
}

/// `SYT^{+k}` of a straight shape, in lexicographic order of the placement
/// word (value ↦ row-major cell label).
pub fn gen_svsyt(shape: &Partition, k: usize) -> impl Iterator<Item = SetValuedTableau> {
    gen_svsyt_skew(&SkewShape::straight(shape.clone()), k)
}

pub fn gen_svsyt_skew(shape: &SkewShape, k: usize) -> impl Iterator<Item = SetValuedTableau> {
    let shape = shape.clone();
    let total = shape.num_cells() + k;
    PlacementEngine::iter(shape.order(), total).map(move |sets| {
        SetValuedTableau::from_label_sets(shape.clone(), sets).expect("engine emits valid tableaux")
    })
}

pub fn count_svsyt(shape: &SkewShape, k: usize) -> BigUint {
    count_fillings(&shape.order(), shape.num_cells() + k)
}

/// All `SYT^{+k}(2 x b)` with `2b + k = n`, by increasing `b`.
pub fn gen_two_row_union(n: usize) -> impl Iterator<Item = SetValuedTableau> {
    (1..=n / 2).flat_map(move |b| {
        let shape = Partition::new(vec![b, b]).expect("rectangle");
        gen_svsyt(&shape, n - 2 * b)
    })
}

/// All `SYT^{+k}(b+1, b)` with `2b + k + 1 = n`, `b >= 0`.
pub fn gen_near_rectangle_union(n: usize) -> impl Iterator<Item = SetValuedTableau> {
    (0..=(n.saturating_sub(1)) / 2).flat_map(move |b| {
        let shape = Partition::from_rows(vec![b + 1, b]).expect("near rectangle");
        gen_svsyt(&shape, n - 2 * b - 1)
    })
}

/// All `SYT^{+k}(b, b-i)` with `2b + k - i = n`.
pub fn gen_ballot_tableaux(n: usize, i: usize) -> impl Iterator<Item = SetValuedTableau> {
    (i..=n).filter(move |b| 2 * b <= n + i).flat_map(move |b| {
        let shape = Partition::from_rows(vec![b, b - i]).expect("two-row shape");
        gen_svsyt(&shape, n + i - 2 * b)
    })
}

// ---------------------------------------------------------------------------
// 321-avoiding permutations
// ---------------------------------------------------------------------------

/// Builds permutations left to right. A 321-avoider is one where every
/// value below the running maximum exceeds every earlier such value, so a
/// choice is allowed only if no unused value would be stranded below the
/// new "middle" maximum.
#[derive(Clone, Debug)]
pub struct Avoid321Search {
    m: usize,
    word: Vec<u32>,
    used: Vec<bool>,
    /// `(running_max, middle_max)` before each push.
    history: Vec<(u32, u32)>,
    running_max: u32,
    middle_max: u32,
}

impl Avoid321Search {
    pub fn new(m: usize) -> Self {
        Avoid321Search {
            m,
            word: Vec::with_capacity(m),
            used: vec![false; m + 1],
            history: Vec::with_capacity(m),
            running_max: 0,
            middle_max: 0,
        }
    }
}

impl Search for Avoid321Search {
    type Item = Permutation;

    fn target(&self) -> usize {
        self.m
    }

    fn depth(&self) -> usize {
        self.word.len()
    }

    fn choices(&self) -> usize {
        self.m
    }

    fn try_push(&mut self, c: usize) -> bool {
        let v = c as u32 + 1;
        if self.used[v as usize] || v < self.middle_max {
            return false;
        }
        let middle = if v < self.running_max { v } else { self.middle_max };
        // The smallest unused value other than v must not fall below `middle`.
        let stranded = (1..middle).any(|x| x != v && !self.used[x as usize]);
        if stranded {
            return false;
        }
        self.history.push((self.running_max, self.middle_max));
        self.used[v as usize] = true;
        self.word.push(v);
        self.running_max = self.running_max.max(v);
        self.middle_max = middle;
        true
    }

    fn pop(&mut self) -> usize {
        let v = self.word.pop().expect("pop below depth zero");
        self.used[v as usize] = false;
        (self.running_max, self.middle_max) = self.history.pop().unwrap();
        v as usize - 1
    }

    fn emit(&self) -> Permutation {
        Permutation::new(self.word.clone()).expect("search emits permutations")
    }
}

/// All 321-avoiding permutations of `[m]` in lexicographic order.
pub fn gen_avoid321(m: usize) -> DfsIter<Avoid321Search> {
    DfsIter::new(Avoid321Search::new(m))
}

// ---------------------------------------------------------------------------
// Colored paths
// ---------------------------------------------------------------------------

/// Which constraints a path search enforces.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PathRules {
    pub no_umber_on_axis: bool,
    pub no_early_denim: bool,
    /// Required final height, or `None` for any.
    pub end_height: Option<usize>,
}

impl PathRules {
    pub fn for_family(tag: PathTag) -> Self {
        let (r1, r2) = match tag {
            PathTag::Motz => (false, false),
            PathTag::MotzE => (true, false),
            PathTag::MotzT => (false, true),
            PathTag::MotzET | PathTag::Ballotlike => (true, true),
        };
        PathRules {
            no_umber_on_axis: r1,
            no_early_denim: r2,
            end_height: (tag != PathTag::Ballotlike).then_some(0),
        }
    }
}

#[derive(Clone, Debug)]
pub struct PathSearch {
    len: usize,
    rules: PathRules,
    steps: Vec<Step>,
    heights: Vec<usize>,
    downs: usize,
}

impl PathSearch {
    pub fn new(len: usize, rules: PathRules) -> Self {
        PathSearch {
            len,
            rules,
            steps: Vec::with_capacity(len),
            heights: vec![0],
            downs: 0,
        }
    }
}

impl Search for PathSearch {
    type Item = ColoredPath;

    fn target(&self) -> usize {
        self.len
    }

    fn depth(&self) -> usize {
        self.steps.len()
    }

    fn choices(&self) -> usize {
        4
    }

    fn try_push(&mut self, c: usize) -> bool {
        let step = Step::ALL[c];
        let h = *self.heights.last().unwrap();
        let next = match step {
            Step::Up => h + 1,
            Step::Down if h == 0 => return false,
            Step::Down => h - 1,
            Step::Umber if self.rules.no_umber_on_axis && h == 0 => return false,
            Step::Denim if self.rules.no_early_denim && self.downs == 0 => return false,
            _ => h,
        };
        let left = self.len - self.steps.len() - 1;
        if let Some(end) = self.rules.end_height {
            if next.abs_diff(end) > left {
                return false;
            }
        }
        self.steps.push(step);
        self.heights.push(next);
        if step == Step::Down {
            self.downs += 1;
        }
        true
    }

    fn pop(&mut self) -> usize {
        let step = self.steps.pop().expect("pop below depth zero");
        self.heights.pop();
        if step == Step::Down {
            self.downs -= 1;
        }
        step as usize
    }

    fn emit(&self) -> ColoredPath {
        ColoredPath::new(self.steps.clone()).expect("search emits valid paths")
    }
}

/// Paths of length `n` in a family, lexicographic with `U < D < u < d`.
/// For [`PathTag::Ballotlike`] every final height is included.
pub fn gen_paths(tag: PathTag, n: usize) -> DfsIter<PathSearch> {
    DfsIter::new(PathSearch::new(n, PathRules::for_family(tag)))
}

/// Ballotlike paths of length `n` ending at height `i`.
pub fn gen_ballotlike(n: usize, i: usize) -> DfsIter<PathSearch> {
    let rules = PathRules {
        end_height: Some(i),
        ..PathRules::for_family(PathTag::Ballotlike)
    };
    DfsIter::new(PathSearch::new(n, rules))
}

/// Every word of length `n` that stays weakly above the axis, unfiltered.
pub fn gen_all_paths(n: usize) -> DfsIter<PathSearch> {
    let rules = PathRules {
        no_umber_on_axis: false,
        no_early_denim: false,
        end_height: None,
    };
    DfsIter::new(PathSearch::new(n, rules))
}

/// A family of objects addressable from the command line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilySpec {
    Svsyt { shape: Partition, k: usize },
    Syt { shape: Partition },
    TwoRowUnion { n: usize },
    Avoid321 { m: usize },
    Path { family: PathTag, n: usize },
    PathEnd { n: usize, i: usize },
}

/// One enumerated object of any family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilyItem {
    Tableau(SetValuedTableau),
    Permutation(Permutation),
    Path(ColoredPath),
}

impl FamilySpec {
    pub fn iter(&self) -> Box<dyn Iterator<Item = FamilyItem>> {
        match self.clone() {
            FamilySpec::Svsyt { shape, k } => Box::new(gen_svsyt(&shape, k).map(FamilyItem::Tableau)),
            FamilySpec::Syt { shape } => Box::new(gen_svsyt(&shape, 0).map(FamilyItem::Tableau)),
            FamilySpec::TwoRowUnion { n } => Box::new(gen_two_row_union(n).map(FamilyItem::Tableau)),
            FamilySpec::Avoid321 { m } => Box::new(gen_avoid321(m).map(FamilyItem::Permutation)),
            FamilySpec::Path { family, n } => Box::new(gen_paths(family, n).map(FamilyItem::Path)),
            FamilySpec::PathEnd { n, i } => Box::new(gen_ballotlike(n, i).map(FamilyItem::Path)),
        }
    }

    /// Size of the family; tableau families are counted without
    /// materializing them.
    pub fn count(&self) -> BigUint {
        match self {
            FamilySpec::Svsyt { shape, k } => count_svsyt(&SkewShape::straight(shape.clone()), *k),
            FamilySpec::Syt { shape } => count_svsyt(&SkewShape::straight(shape.clone()), 0),
            FamilySpec::TwoRowUnion { n } => (1..=n / 2)
                .map(|b| count_svsyt(&SkewShape::straight(Partition::new(vec![b, b]).unwrap()), n - 2 * b))
                .sum(),
            _ => BigUint::from(self.iter().count()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closedform::catalan;
    use std::collections::HashSet;

    fn part(p: &[usize]) -> Partition {
        Partition::new(p.to_vec()).unwrap()
    }

    #[test]
    fn small_tableau_families() {
        assert_eq!(gen_svsyt(&part(&[3, 1]), 0).count(), 3);
        assert_eq!(gen_svsyt(&part(&[2, 2]), 0).count(), 2);
        let rows: Vec<String> = gen_svsyt(&part(&[2]), 2).map(|t| t.to_string()).collect();
        assert_eq!(rows, vec!["{1,2,3} {4}", "{1,2} {3,4}", "{1} {2,3,4}"]);
        assert_eq!(gen_svsyt(&part(&[1]), 3).count(), 1);
    }

    #[test]
    fn counting_matches_streaming() {
        for shape in [vec![2, 2], vec![3, 1], vec![2, 1, 1], vec![3, 2]] {
            for k in 0..4 {
                let s = SkewShape::straight(part(&shape));
                assert_eq!(count_svsyt(&s, k), BigUint::from(gen_svsyt_skew(&s, k).count()));
            }
        }
    }

    #[test]
    fn two_row_union_is_catalan() {
        for n in 2..=9 {
            assert_eq!(num_bigint::BigInt::from(gen_two_row_union(n).count()), catalan(n - 1));
        }
    }

    #[test]
    fn avoiders() {
        let three: Vec<String> = gen_avoid321(3).map(|p| p.to_string()).collect();
        assert_eq!(three, vec!["1 2 3", "1 3 2", "2 1 3", "2 3 1", "3 1 2"]);
        assert_eq!(gen_avoid321(1).count(), 1);
        assert_eq!(gen_avoid321(0).count(), 1);
        assert_eq!(gen_avoid321(10).count(), 16796);
    }

    #[test]
    fn motzkin_families() {
        let mut et: Vec<String> = gen_paths(PathTag::MotzET, 4).map(|p| p.to_string()).collect();
        et.sort();
        assert_eq!(et, vec!["UDUD", "UDdd", "UUDD", "UuDd", "UuuD"]);
        assert_eq!(gen_paths(PathTag::Motz, 2).count(), 5);
        assert_eq!(gen_paths(PathTag::MotzE, 3).count(), 5);
        assert_eq!(gen_paths(PathTag::MotzET, 0).count(), 1);
    }

    #[test]
    fn ballotlike_paths() {
        assert_eq!(gen_ballotlike(4, 2).count(), 6);
        assert_eq!(gen_ballotlike(5, 5).map(|p| p.to_string()).collect::<Vec<_>>(), vec!["UUUUU"]);
        assert_eq!(gen_ballotlike(8, 0).count(), 429);
    }

    #[test]
    fn streams_have_no_duplicates() {
        let t: HashSet<_> = gen_two_row_union(8).collect();
        assert_eq!(t.len(), 429);
        let p: HashSet<_> = gen_paths(PathTag::Motz, 7).collect();
        assert_eq!(p.len(), gen_paths(PathTag::Motz, 7).count());
    }

    #[test]
    fn family_spec_counts() {
        let spec = FamilySpec::TwoRowUnion { n: 6 };
        assert_eq!(spec.count(), BigUint::from(42u32));
        assert_eq!(spec.iter().count(), 42);
    }
}
