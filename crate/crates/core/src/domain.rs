//! Exact domain types shared by every other module: partitions and skew
//! shapes, set-valued tableaux, permutations, colored lattice paths and the
//! bitmask order used by the enumeration engines.
//!
//! Coordinates are zero-based `(row, col)` pairs, with `col` measured from
//! the left edge of the outer diagram (so skew cells start at `inner[row]`).

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest number of elements an [`OrderMasks`] can hold.
pub const MAX_ELEMENTS: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DomainError {
    #[error("partition parts must be positive and weakly decreasing, got {0:?}")]
    InvalidPartition(Vec<usize>),
    #[error("inner shape {inner:?} does not fit inside outer shape {outer:?}")]
    InnerNotContained { outer: Vec<usize>, inner: Vec<usize> },
    #[error("{0:?} is not a permutation of 1..=n")]
    InvalidPermutation(Vec<u32>),
    #[error("path goes below height zero at step {0}")]
    NegativeHeight(usize),
    #[error("unknown path step {0:?}")]
    UnknownStep(char),
    #[error("cannot parse {0:?}")]
    Parse(String),
    #[error("order has {0} elements, at most {MAX_ELEMENTS} are supported")]
    TooLarge(usize),
    #[error("relation is not a partial order (cycle through element {0})")]
    Cyclic(usize),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TableauError {
    #[error("row {row} has {found} cells but the shape has {expected}")]
    ShapeMismatch {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("cell ({row}, {col}) is empty")]
    EmptyCell { row: usize, col: usize },
    #[error("cell entries do not form a set partition of 1..={0}")]
    NotAPartitionOfRange(usize),
    #[error("max of cell {upper:?} is not below min of cell {lower:?}")]
    OrderViolation {
        upper: (usize, usize),
        lower: (usize, usize),
    },
    #[error(transparent)]
    Domain(#[from] DomainError),
}

// ---------------------------------------------------------------------------
// Partitions and shapes
// ---------------------------------------------------------------------------

/// An integer partition, stored as weakly decreasing positive parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self, DomainError> {
        if parts.contains(&0) || parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(DomainError::InvalidPartition(parts));
        }
        Ok(Partition(parts))
    }

    /// Like [`Partition::new`] but drops trailing zero rows, so `(b, 0)` is
    /// the one-row partition `(b)`.
    pub fn from_rows(mut rows: Vec<usize>) -> Result<Self, DomainError> {
        while rows.last() == Some(&0) {
            rows.pop();
        }
        Partition::new(rows)
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    /// Row length, zero past the last row.
    pub fn part(&self, row: usize) -> usize {
        self.0.get(row).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn conjugate(&self) -> Partition {
        let width = self.part(0);
        Partition((0..width).map(|c| self.0.iter().filter(|&&p| p > c).count()).collect())
    }

    /// All partitions of `n` in reverse lexicographic order.
    pub fn all(n: usize) -> Vec<Partition> {
        fn rec(n: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if n == 0 {
                out.push(Partition(prefix.clone()));
                return;
            }
            for p in (1..=n.min(max)).rev() {
                prefix.push(p);
                rec(n - p, p, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, n, &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for Partition {
    type Err = DomainError;

    /// Parses a comma-separated list such as `3,1`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        if s.is_empty() {
            return Ok(Partition::empty());
        }
        let parts = s
            .split(',')
            .map(|p| p.trim().parse::<usize>().map_err(|_| DomainError::Parse(s.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Partition::from_rows(parts)
    }
}

/// A skew shape `outer / inner`; a straight shape has an empty inner
/// partition.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SkewShape {
    outer: Partition,
    inner: Partition,
}

impl SkewShape {
    pub fn new(outer: Partition, inner: Partition) -> Result<Self, DomainError> {
        if inner.len() > outer.len() || (0..inner.len()).any(|r| inner.part(r) > outer.part(r)) {
            return Err(DomainError::InnerNotContained {
                outer: outer.0,
                inner: inner.0,
            });
        }
        Ok(SkewShape { outer, inner })
    }

    pub fn straight(outer: Partition) -> Self {
        SkewShape {
            outer,
            inner: Partition::empty(),
        }
    }

    pub fn outer(&self) -> &Partition {
        &self.outer
    }

    pub fn inner(&self) -> &Partition {
        &self.inner
    }

    pub fn is_straight(&self) -> bool {
        self.inner.is_empty()
    }

    pub fn rows(&self) -> usize {
        self.outer.len()
    }

    /// Columns occupied in `row`, as a half-open range.
    pub fn row_range(&self, row: usize) -> std::ops::Range<usize> {
        self.inner.part(row)..self.outer.part(row)
    }

    pub fn contains(&self, row: usize, col: usize) -> bool {
        self.row_range(row).contains(&col)
    }

    pub fn num_cells(&self) -> usize {
        self.outer.size() - self.inner.size()
    }

    /// Cells in row-major order; position in this list is the cell's
    /// natural label minus one.
    pub fn cells(&self) -> Vec<(usize, usize)> {
        (0..self.rows())
            .flat_map(|r| self.row_range(r).map(move |c| (r, c)))
            .collect()
    }

    /// Zero-based natural label of a cell.
    pub fn label_of(&self, row: usize, col: usize) -> Option<usize> {
        if !self.contains(row, col) {
            return None;
        }
        let before: usize = (0..row).map(|r| self.row_range(r).len()).sum();
        Some(before + col - self.inner.part(row))
    }

    /// The cell poset (u ≤ v iff u is weakly northwest of v) under the
    /// row-major natural labeling.
    pub fn order(&self) -> OrderMasks {
        let cells = self.cells();
        let mut covers = Vec::new();
        for (i, &(r, c)) in cells.iter().enumerate() {
            if r > 0 && self.contains(r - 1, c) {
                covers.push((self.label_of(r - 1, c).unwrap(), i));
            }
            if c > 0 && self.contains(r, c - 1) {
                covers.push((i - 1, i));
            }
        }
        OrderMasks::from_covers(cells.len(), &covers).expect("diagram order is acyclic")
    }
}

impl fmt::Display for SkewShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_straight() {
            write!(f, "{}", self.outer)
        } else {
            write!(f, "{}/{}", self.outer, self.inner)
        }
    }
}

// ---------------------------------------------------------------------------
// Bitmask orders
// ---------------------------------------------------------------------------

/// A finite partial order on `0..n` (n ≤ 64) stored as strict
/// down-set/up-set bitmasks of the transitive closure.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrderMasks {
    below: Vec<u64>,
    above: Vec<u64>,
}

impl OrderMasks {
    /// Builds the transitive closure of the cover pairs `(lower, upper)`.
    pub fn from_covers(n: usize, covers: &[(usize, usize)]) -> Result<Self, DomainError> {
        if n > MAX_ELEMENTS {
            return Err(DomainError::TooLarge(n));
        }
        let mut below = vec![0u64; n];
        for &(a, b) in covers {
            if a >= n || b >= n {
                return Err(DomainError::Parse(format!("cover ({a}, {b}) out of range")));
            }
            below[b] |= 1 << a;
        }
        // Warshall-style closure.
        for mid in 0..n {
            for e in 0..n {
                if below[e] >> mid & 1 == 1 {
                    below[e] |= below[mid];
                }
            }
        }
        if let Some(e) = (0..n).find(|&e| below[e] >> e & 1 == 1) {
            return Err(DomainError::Cyclic(e));
        }
        let mut above = vec![0u64; n];
        for (e, &mask) in below.iter().enumerate() {
            for x in bits(mask) {
                above[x] |= 1 << e;
            }
        }
        Ok(OrderMasks { below, above })
    }

    pub fn len(&self) -> usize {
        self.below.len()
    }

    pub fn is_empty(&self) -> bool {
        self.below.is_empty()
    }

    pub fn full_mask(&self) -> u64 {
        low_mask(self.len())
    }

    /// Elements strictly below `e`.
    pub fn below(&self, e: usize) -> u64 {
        self.below[e]
    }

    /// Elements strictly above `e`.
    pub fn above(&self, e: usize) -> u64 {
        self.above[e]
    }

    pub fn less(&self, a: usize, b: usize) -> bool {
        self.below[b] >> a & 1 == 1
    }

    pub fn is_ideal(&self, mask: u64) -> bool {
        bits(mask).all(|e| self.below[e] & !mask == 0)
    }

    /// Maximal elements of `mask`.
    pub fn maximal(&self, mask: u64) -> u64 {
        bits(mask)
            .filter(|&e| self.above[e] & mask == 0)
            .fold(0, |acc, e| acc | 1 << e)
    }

    /// Every order ideal, in increasing numeric order of the mask.
    pub fn ideals(&self) -> Vec<u64> {
        let mut out = Vec::new();
        let mut stack = vec![0u64];
        let mut seen = std::collections::HashSet::new();
        seen.insert(0u64);
        while let Some(mask) = stack.pop() {
            out.push(mask);
            for e in 0..self.len() {
                if mask >> e & 1 == 0 && self.below[e] & !mask == 0 {
                    let next = mask | 1 << e;
                    if seen.insert(next) {
                        stack.push(next);
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }
}

pub(crate) fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Indices of the set bits of `mask`, ascending.
pub fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(i)
        }
    })
}

// ---------------------------------------------------------------------------
// Set-valued tableaux
// ---------------------------------------------------------------------------

/// Anything that assigns a nonempty sorted set of integers to each element
/// of a labeled order. Sets are indexed by zero-based natural label.
pub trait SetValuedFilling {
    fn label_sets(&self) -> Vec<&[u32]>;

    /// Total number of entries, `n + k`.
    fn entry_count(&self) -> usize {
        self.label_sets().iter().map(|s| s.len()).sum()
    }

    /// For each value `1..=n+k` (index `value - 1`), the label holding it
    /// and whether it is the minimum of its set.
    fn placement(&self) -> Vec<(usize, bool)> {
        let sets = self.label_sets();
        let mut out = vec![(0, false); sets.iter().map(|s| s.len()).sum()];
        for (label, set) in sets.iter().enumerate() {
            for (i, &v) in set.iter().enumerate() {
                out[v as usize - 1] = (label, i == 0);
            }
        }
        out
    }
}

/// A standard set-valued tableau of a (possibly skew) shape.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetValuedTableau {
    shape: SkewShape,
    rows: Vec<Vec<Vec<u32>>>,
    k: usize,
}

/// Validates a raw row-major cell filling against `shape`. Cell lists are
/// sorted before checking.
pub fn validate_svsyt(
    rows: Vec<Vec<Vec<u32>>>,
    shape: SkewShape,
) -> Result<SetValuedTableau, TableauError> {
    SetValuedTableau::new(shape, rows)
}

impl SetValuedTableau {
    pub fn new(shape: SkewShape, mut rows: Vec<Vec<Vec<u32>>>) -> Result<Self, TableauError> {
        // A tableau of a one-row shape may be given with an empty second row.
        while rows.len() > shape.rows() && rows.last().is_some_and(|r| r.is_empty()) {
            rows.pop();
        }
        if rows.len() != shape.rows() {
            return Err(TableauError::ShapeMismatch {
                row: rows.len().min(shape.rows()),
                expected: shape.row_range(rows.len().min(shape.rows())).len(),
                found: rows.get(shape.rows()).map_or(0, |r| r.len()),
            });
        }
        let mut entries = 0usize;
        for (r, row) in rows.iter_mut().enumerate() {
            let expected = shape.row_range(r).len();
            if row.len() != expected {
                return Err(TableauError::ShapeMismatch {
                    row: r,
                    expected,
                    found: row.len(),
                });
            }
            for (i, cell) in row.iter_mut().enumerate() {
                if cell.is_empty() {
                    return Err(TableauError::EmptyCell {
                        row: r,
                        col: shape.inner.part(r) + i,
                    });
                }
                cell.sort_unstable();
                entries += cell.len();
            }
        }
        let mut seen = vec![false; entries + 1];
        for &v in rows.iter().flatten().flatten() {
            let v = v as usize;
            if v == 0 || v > entries || seen[v] {
                return Err(TableauError::NotAPartitionOfRange(entries));
            }
            seen[v] = true;
        }
        let tableau = SetValuedTableau {
            k: entries - shape.num_cells(),
            shape,
            rows,
        };
        tableau.check_order()?;
        Ok(tableau)
    }

    fn check_order(&self) -> Result<(), TableauError> {
        for (r, c) in self.shape.cells() {
            let cell = self.cell(r, c).unwrap();
            let min = cell[0];
            let neighbours = [
                (r > 0).then(|| (r - 1, c)),
                (c > 0).then(|| (r, c - 1)),
            ];
            for (ur, uc) in neighbours.into_iter().flatten() {
                if let Some(upper) = self.cell(ur, uc) {
                    if *upper.last().unwrap() >= min {
                        return Err(TableauError::OrderViolation {
                            upper: (ur, uc),
                            lower: (r, c),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Builds a tableau from sets indexed by row-major label.
    pub fn from_label_sets(shape: SkewShape, sets: Vec<Vec<u32>>) -> Result<Self, TableauError> {
        let mut it = sets.into_iter();
        let rows = (0..shape.rows())
            .map(|r| it.by_ref().take(shape.row_range(r).len()).collect())
            .collect();
        SetValuedTableau::new(shape, rows)
    }

    /// Parses a nested list of rows, e.g. `[[[1,2],[3]],[[4]]]`, as a
    /// straight-shape tableau.
    pub fn from_rows(rows: Vec<Vec<Vec<u32>>>) -> Result<Self, TableauError> {
        let shape = SkewShape::straight(Partition::from_rows(rows.iter().map(|r| r.len()).collect())?);
        SetValuedTableau::new(shape, rows)
    }

    pub fn shape(&self) -> &SkewShape {
        &self.shape
    }

    pub fn rows(&self) -> &[Vec<Vec<u32>>] {
        &self.rows
    }

    /// Number of extra entries, entries minus cells.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn cell_count(&self) -> usize {
        self.shape.num_cells()
    }

    /// Entries of the cell at absolute position `(row, col)`.
    pub fn cell(&self, row: usize, col: usize) -> Option<&[u32]> {
        if !self.shape.contains(row, col) {
            return None;
        }
        Some(&self.rows[row][col - self.shape.inner.part(row)])
    }

    /// Number of columns of the outer shape.
    pub fn columns(&self) -> usize {
        self.shape.outer.part(0)
    }

    /// All entries of one row, ascending.
    pub fn row_entries(&self, row: usize) -> Vec<u32> {
        let mut v: Vec<u32> = self.rows.get(row).into_iter().flatten().flatten().copied().collect();
        v.sort_unstable();
        v
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(TableauJson::from(self)).expect("tableau serializes")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self, TableauError> {
        let raw: TableauJson = serde_json::from_value(value.clone())
            .map_err(|e| DomainError::Parse(e.to_string()))?;
        raw.try_into()
    }
}

impl SetValuedFilling for SetValuedTableau {
    fn label_sets(&self) -> Vec<&[u32]> {
        self.rows.iter().flatten().map(|c| c.as_slice()).collect()
    }
}

impl fmt::Display for SetValuedTableau {
    /// Rows separated by ` / `, cells by spaces: `{1,2} {3} / {4}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows
            .iter()
            .enumerate()
            .map(|(r, row)| {
                let pad = std::iter::repeat_n("_".to_string(), self.shape.inner.part(r));
                let cells = row.iter().map(|c| {
                    let inner: Vec<String> = c.iter().map(|v| v.to_string()).collect();
                    format!("{{{}}}", inner.join(","))
                });
                pad.chain(cells).collect::<Vec<_>>().join(" ")
            })
            .collect();
        write!(f, "{}", rows.join(" / "))
    }
}

impl FromStr for SetValuedTableau {
    type Err = TableauError;

    /// Parses the display form. Leading `_` tokens mark cells of the inner
    /// shape.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || TableauError::from(DomainError::Parse(s.to_string()));
        let mut inner = Vec::new();
        let mut rows = Vec::new();
        for row in s.split('/') {
            let mut pad = 0;
            let mut cells = Vec::new();
            for token in row.split_whitespace() {
                if token == "_" {
                    if !cells.is_empty() {
                        return Err(bad());
                    }
                    pad += 1;
                    continue;
                }
                let body = token.strip_prefix('{').and_then(|t| t.strip_suffix('}')).ok_or_else(bad)?;
                let cell = body
                    .split(',')
                    .map(|v| v.trim().parse::<u32>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|_| bad())?;
                cells.push(cell);
            }
            inner.push(pad);
            rows.push(cells);
        }
        let outer: Vec<usize> = inner.iter().zip(&rows).map(|(p, r)| p + r.len()).collect();
        let shape = SkewShape::new(Partition::from_rows(outer)?, Partition::from_rows(inner)?)?;
        SetValuedTableau::new(shape, rows)
    }
}

/// Wire form of a tableau: `{"outer":[..], "inner":[..], "rows":[[[..]..]..]}`
/// with sorted cell lists in row-major order.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TableauJson {
    pub outer: Vec<usize>,
    #[serde(default)]
    pub inner: Vec<usize>,
    pub rows: Vec<Vec<Vec<u32>>>,
}

impl From<&SetValuedTableau> for TableauJson {
    fn from(t: &SetValuedTableau) -> Self {
        TableauJson {
            outer: t.shape.outer.0.clone(),
            inner: t.shape.inner.0.clone(),
            rows: t.rows.clone(),
        }
    }
}

impl TryFrom<TableauJson> for SetValuedTableau {
    type Error = TableauError;

    fn try_from(raw: TableauJson) -> Result<Self, Self::Error> {
        let shape = SkewShape::new(Partition::from_rows(raw.outer)?, Partition::from_rows(raw.inner)?)?;
        SetValuedTableau::new(shape, raw.rows)
    }
}

// ---------------------------------------------------------------------------
// Permutations
// ---------------------------------------------------------------------------

/// A permutation in one-line notation over `1..=m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<u32>);

impl Permutation {
    pub fn new(word: Vec<u32>) -> Result<Self, DomainError> {
        let m = word.len();
        let mut seen = vec![false; m + 1];
        for &v in &word {
            let v = v as usize;
            if v == 0 || v > m || seen[v] {
                return Err(DomainError::InvalidPermutation(word));
            }
            seen[v] = true;
        }
        Ok(Permutation(word))
    }

    pub fn identity(m: usize) -> Self {
        Permutation((1..=m as u32).collect())
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_vec(self) -> Vec<u32> {
        self.0
    }

    /// True when no `i < j < l` has `w[i] > w[j] > w[l]`.
    pub fn avoids_321(&self) -> bool {
        // Track the largest value that already has a larger value before it.
        let mut running_max = 0;
        let mut middle_max = 0;
        for &v in &self.0 {
            if v < middle_max {
                return false;
            }
            if v < running_max {
                middle_max = middle_max.max(v);
            }
            running_max = running_max.max(v);
        }
        true
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl FromStr for Permutation {
    type Err = DomainError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let word = s
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|p| !p.is_empty())
            .map(|p| p.parse::<u32>().map_err(|_| DomainError::Parse(s.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Permutation::new(word)
    }
}

// ---------------------------------------------------------------------------
// Colored paths
// ---------------------------------------------------------------------------

/// Path steps, ordered `U < D < u < d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Step {
    Up,
    Down,
    Umber,
    Denim,
}

impl Step {
    pub const ALL: [Step; 4] = [Step::Up, Step::Down, Step::Umber, Step::Denim];

    pub fn symbol(self) -> char {
        match self {
            Step::Up => 'U',
            Step::Down => 'D',
            Step::Umber => 'u',
            Step::Denim => 'd',
        }
    }

    pub fn from_symbol(c: char) -> Result<Self, DomainError> {
        match c {
            'U' => Ok(Step::Up),
            'D' => Ok(Step::Down),
            'u' => Ok(Step::Umber),
            'd' => Ok(Step::Denim),
            other => Err(DomainError::UnknownStep(other)),
        }
    }

    pub fn delta(self) -> i64 {
        match self {
            Step::Up => 1,
            Step::Down => -1,
            Step::Umber | Step::Denim => 0,
        }
    }

    pub fn is_horizontal(self) -> bool {
        matches!(self, Step::Umber | Step::Denim)
    }
}

/// A word over `{U, D, u, d}` whose running height never goes negative.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColoredPath(Vec<Step>);

impl ColoredPath {
    pub fn new(steps: Vec<Step>) -> Result<Self, DomainError> {
        let mut h = 0i64;
        for (i, s) in steps.iter().enumerate() {
            h += s.delta();
            if h < 0 {
                return Err(DomainError::NegativeHeight(i + 1));
            }
        }
        Ok(ColoredPath(steps))
    }

    pub fn steps(&self) -> &[Step] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn final_height(&self) -> usize {
        self.0.iter().map(|s| s.delta()).sum::<i64>() as usize
    }

    /// Step counts in the order `[U, D, u, d]`.
    pub fn step_counts(&self) -> [usize; 4] {
        let mut c = [0; 4];
        for &s in &self.0 {
            c[s as usize] += 1;
        }
        c
    }
}

impl fmt::Display for ColoredPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|s| write!(f, "{}", s.symbol()))
    }
}

impl FromStr for ColoredPath {
    type Err = DomainError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let steps = s.trim().chars().map(Step::from_symbol).collect::<Result<Vec<_>, _>>()?;
        ColoredPath::new(steps)
    }
}

/// Membership tags for the colored path families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PathTag {
    Motz,
    MotzE,
    MotzT,
    MotzET,
    Ballotlike,
}

impl PathTag {
    pub fn name(self) -> &'static str {
        match self {
            PathTag::Motz => "motz",
            PathTag::MotzE => "motzE",
            PathTag::MotzT => "motzT",
            PathTag::MotzET => "motzET",
            PathTag::Ballotlike => "ballotlike",
        }
    }
}

impl fmt::Display for PathTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PathTag {
    type Err = DomainError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "motz" => Ok(PathTag::Motz),
            "motzE" => Ok(PathTag::MotzE),
            "motzT" => Ok(PathTag::MotzT),
            "motzET" => Ok(PathTag::MotzET),
            "ballotlike" | "bal" => Ok(PathTag::Ballotlike),
            other => Err(DomainError::Parse(other.to_string())),
        }
    }
}

/// Which families a path belongs to.
///
/// Restriction (1) forbids `u` at height zero and restriction (2) forbids
/// `d` before the first `D`. The four Motzkin families also require the path
/// to end at height zero; ballotlike paths may end anywhere.
pub fn path_family(p: &ColoredPath) -> BTreeSet<PathTag> {
    let mut h = 0i64;
    let mut seen_down = false;
    let mut umber_on_axis = false;
    let mut denim_early = false;
    for &s in p.steps() {
        match s {
            Step::Up => h += 1,
            Step::Down => {
                h -= 1;
                seen_down = true;
            }
            Step::Umber => umber_on_axis |= h == 0,
            Step::Denim => denim_early |= !seen_down,
        }
    }
    let (r1, r2) = (!umber_on_axis, !denim_early);
    let mut tags = BTreeSet::new();
    if h == 0 {
        tags.insert(PathTag::Motz);
        if r1 {
            tags.insert(PathTag::MotzE);
        }
        if r2 {
            tags.insert(PathTag::MotzT);
        }
        if r1 && r2 {
            tags.insert(PathTag::MotzET);
        }
    }
    if r1 && r2 {
        tags.insert(PathTag::Ballotlike);
    }
    tags
}

/// A linear extension, listed as the element at each position: `order[v-1]`
/// is the element receiving value `v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearExtension(pub Vec<usize>);

impl LinearExtension {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Value assigned to each element.
    pub fn values(&self) -> Vec<usize> {
        let mut v = vec![0; self.0.len()];
        for (pos, &e) in self.0.iter().enumerate() {
            v[e] = pos + 1;
        }
        v
    }

    /// Descents under label comparison: `j` with the element at `j+1`
    /// carrying a smaller label than the element at `j`.
    pub fn descents(&self) -> Vec<usize> {
        (1..self.0.len()).filter(|&j| self.0[j] < self.0[j - 1]).collect()
    }

    pub fn comaj(&self) -> usize {
        let n = self.0.len();
        self.descents().iter().map(|&j| n - j).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(parts: &[usize]) -> SkewShape {
        SkewShape::straight(Partition::new(parts.to_vec()).unwrap())
    }

    #[test]
    fn two_by_four_tableau_is_valid() {
        let rows = vec![
            vec![vec![1, 2], vec![3, 4, 6], vec![7], vec![10]],
            vec![vec![5, 8], vec![9], vec![11, 12], vec![13, 14]],
        ];
        let t = validate_svsyt(rows, shape(&[4, 4])).unwrap();
        assert_eq!(t.k(), 6);
    }

    #[test]
    fn tableau_text_roundtrip() {
        for text in ["{1,2} {3,4,6} {7} {10} / {5,8} {9} {11,12} {13,14}", "_ {2} / {1} {3}", "{1,2,3} {4}"] {
            let t: SetValuedTableau = text.parse().unwrap();
            assert_eq!(t.to_string(), text);
        }
        assert_eq!("_ {2} / {1} {3}".parse::<SetValuedTableau>().unwrap().shape().to_string(), "(2,2)/(1)");
        assert!("{1} _ {2}".parse::<SetValuedTableau>().is_err());
        assert!("{2} / {1}".parse::<SetValuedTableau>().is_err());
        assert!("{1,x}".parse::<SetValuedTableau>().is_err());
    }

    #[test]
    fn column_tableaux() {
        let ok = validate_svsyt(vec![vec![vec![1]], vec![vec![2]]], shape(&[1, 1])).unwrap();
        assert_eq!(ok.k(), 0);
        let err = validate_svsyt(vec![vec![vec![2]], vec![vec![1]]], shape(&[1, 1])).unwrap_err();
        assert_eq!(
            err,
            TableauError::OrderViolation {
                upper: (0, 0),
                lower: (1, 0)
            }
        );
    }

    #[test]
    fn validation_errors() {
        let empty = validate_svsyt(vec![vec![vec![1], vec![]]], shape(&[2])).unwrap_err();
        assert!(matches!(empty, TableauError::EmptyCell { row: 0, col: 1 }));
        let gap = validate_svsyt(vec![vec![vec![1], vec![3]]], shape(&[2])).unwrap_err();
        assert_eq!(gap, TableauError::NotAPartitionOfRange(2));
        let dup = validate_svsyt(vec![vec![vec![1, 2], vec![2]]], shape(&[2])).unwrap_err();
        assert_eq!(dup, TableauError::NotAPartitionOfRange(3));
        let row = validate_svsyt(vec![vec![vec![1]]], shape(&[2])).unwrap_err();
        assert!(matches!(row, TableauError::ShapeMismatch { .. }));
        // Two cells in the same row: max of the left cell must stay below.
        let left = validate_svsyt(vec![vec![vec![1, 3], vec![2]]], shape(&[2])).unwrap_err();
        assert!(matches!(left, TableauError::OrderViolation { .. }));
    }

    #[test]
    fn skew_validation_ignores_missing_cells() {
        let skew = SkewShape::new(Partition::new(vec![2, 2]).unwrap(), Partition::new(vec![1]).unwrap()).unwrap();
        // Cells (0,1) and (1,0) are incomparable.
        let t = validate_svsyt(vec![vec![vec![2]], vec![vec![1], vec![3]]], skew.clone()).unwrap();
        assert_eq!(t.cell(0, 1), Some(&[2][..]));
        assert_eq!(t.cell(0, 0), None);
        assert!(validate_svsyt(vec![vec![vec![3]], vec![vec![1], vec![2]]], skew).is_err());
    }

    #[test]
    fn json_roundtrip() {
        let t = SetValuedTableau::from_rows(vec![vec![vec![1, 2], vec![4]], vec![vec![3], vec![5]]]).unwrap();
        let json = t.to_json();
        assert_eq!(json, serde_json::json!({"outer":[2,2],"inner":[],"rows":[[[1,2],[4]],[[3],[5]]]}));
        assert_eq!(SetValuedTableau::from_json(&json).unwrap(), t);
    }

    #[test]
    fn partitions_and_conjugates() {
        assert!(Partition::new(vec![1, 2]).is_err());
        assert!(Partition::new(vec![2, 0]).is_err());
        assert_eq!(Partition::from_rows(vec![3, 0]).unwrap().parts(), &[3]);
        assert_eq!(Partition::new(vec![4, 2]).unwrap().conjugate().parts(), &[2, 2, 1, 1]);
        let counts: Vec<usize> = (0..8).map(|n| Partition::all(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15]);
        assert_eq!("3,1".parse::<Partition>().unwrap().parts(), &[3, 1]);
    }

    #[test]
    fn diagram_order() {
        let o = shape(&[2, 2]).order();
        assert!(o.less(0, 3) && o.less(0, 1) && o.less(2, 3));
        assert!(!o.less(1, 2) && !o.less(2, 1));
        assert_eq!(o.ideals().len(), 6);
        assert_eq!(o.maximal(0b0111), 0b0110);
        assert!(OrderMasks::from_covers(2, &[(0, 1), (1, 0)]).is_err());
    }

    #[test]
    fn path_tags_on_worked_examples() {
        use PathTag::*;
        let tags = |s: &str| path_family(&s.parse().unwrap());
        assert_eq!(tags("UuDUUDD"), BTreeSet::from([Motz, MotzE, MotzT, MotzET, Ballotlike]));
        assert_eq!(tags("UD"), BTreeSet::from([Motz, MotzE, MotzT, MotzET, Ballotlike]));
        assert_eq!(tags("Ud"), BTreeSet::new());
        assert_eq!(tags("uUD"), BTreeSet::from([Motz, MotzT]));
        assert_eq!(tags("dUD"), BTreeSet::from([Motz, MotzE]));
        assert_eq!(tags("UU"), BTreeSet::from([Ballotlike]));
        assert!("uD".parse::<ColoredPath>().is_err());
    }

    #[test]
    fn permutation_parsing_and_avoidance() {
        let p: Permutation = "3 5 1 2 7 8 4 10 11 6 9".parse().unwrap();
        assert!(p.avoids_321());
        assert!(!"3 2 1".parse::<Permutation>().unwrap().avoids_321());
        assert!("1 1".parse::<Permutation>().is_err());
        assert_eq!(p.to_string(), "3 5 1 2 7 8 4 10 11 6 9");
    }
}
