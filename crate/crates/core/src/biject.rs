//! Structure-preserving maps and their inverses: tableaux to 321-avoiding
//! permutations (α), tableaux to colored paths (β), the path contraction φ,
//! the triple decomposition of set-valued fillings, and the half-turn
//! complement used for near-rectangular shapes.

use thiserror::Error;

use crate::domain::{
    bits, path_family, ColoredPath, DomainError, LinearExtension, OrderMasks, Partition, PathTag,
    Permutation, SetValuedFilling, SetValuedTableau, SkewShape, Step, TableauError,
};
use crate::stats::{inner_valleys, rl_minima};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BijectError {
    #[error("tableau shape {0} is not a two-row rectangle")]
    ShapeNotTwoRowRectangular(String),
    #[error("tableau shape {0} has more than two rows or is skew")]
    ShapeNotTwoRow(String),
    #[error("tableau needs at least two entries")]
    TooSmall,
    #[error("permutation {0} contains the pattern 321")]
    Not321Avoiding(String),
    #[error("path {0} is not in {1}")]
    NotInFamily(String, PathTag),
    #[error("pick {pick} is not a maximal element of the ideal cut at {cut}")]
    InvalidPick { pick: usize, cut: usize },
    #[error("cut vector {0:?} must be weakly increasing within 1..=n")]
    InvalidCut(Vec<usize>),
    #[error("expected shape {expected}, found {found}")]
    ShapeMismatch { expected: String, found: String },
    #[error(transparent)]
    Tableau(#[from] TableauError),
    #[error(transparent)]
    Domain(#[from] DomainError),
}

fn require_two_row_rectangle(t: &SetValuedTableau) -> Result<usize, BijectError> {
    let outer = t.shape().outer().parts();
    if !t.shape().is_straight() || outer.len() != 2 || outer[0] != outer[1] {
        return Err(BijectError::ShapeNotTwoRowRectangular(t.shape().to_string()));
    }
    Ok(outer[0])
}

// ---------------------------------------------------------------------------
// α
// ---------------------------------------------------------------------------

/// Removes the largest entry (always in the bottom-right cell) and reads
/// each column as: top cell without its maximum, bottom cell, top maximum.
pub fn alpha(t: &SetValuedTableau) -> Result<Permutation, BijectError> {
    let b = require_two_row_rectangle(t)?;
    let n = t.entry_count() as u32;
    let mut word = Vec::with_capacity(n as usize - 1);
    for c in 0..b {
        let top = t.cell(0, c).unwrap();
        let (top_max, top_rest) = top.split_last().unwrap();
        word.extend_from_slice(top_rest);
        word.extend(t.cell(1, c).unwrap().iter().filter(|&&v| v != n));
        word.push(*top_max);
    }
    Ok(Permutation::new(word)?)
}

/// Cuts the permutation after each inner valley; within each segment the
/// right-to-left minima form the top cell and the rest the bottom cell.
/// The largest value `|π| + 1` joins the last bottom cell.
pub fn alpha_inv(p: &Permutation) -> Result<SetValuedTableau, BijectError> {
    if !p.avoids_321() {
        return Err(BijectError::Not321Avoiding(p.to_string()));
    }
    let w = p.as_slice();
    if w.is_empty() {
        return Err(BijectError::TooSmall);
    }
    let n = w.len() as u32 + 1;
    let minima = rl_minima(p);
    let is_min = |v: &u32| minima.binary_search(v).is_ok();
    let mut ends: Vec<usize> = inner_valleys(p).into_iter().map(|j| j - 1).collect();
    ends.push(w.len() - 1);
    let (mut top, mut bottom) = (Vec::new(), Vec::new());
    let mut start = 0;
    for end in ends {
        let (mins, rest): (Vec<u32>, Vec<u32>) = w[start..=end].iter().partition(|v| is_min(v));
        top.push(mins);
        bottom.push(rest);
        start = end + 1;
    }
    bottom.last_mut().unwrap().push(n);
    let b = top.len();
    let shape = SkewShape::straight(Partition::new(vec![b, b])?);
    Ok(SetValuedTableau::new(shape, vec![top, bottom])?)
}

// ---------------------------------------------------------------------------
// β
// ---------------------------------------------------------------------------

/// Reads the values in order: a cell minimum in the top (bottom) row is an
/// up (down) step, any other top (bottom) entry is an umber (denim) step.
/// Defined on every straight shape with at most two rows.
pub fn beta_ballot(t: &SetValuedTableau) -> Result<ColoredPath, BijectError> {
    if !t.shape().is_straight() || t.shape().rows() > 2 {
        return Err(BijectError::ShapeNotTwoRow(t.shape().to_string()));
    }
    let mut steps = vec![Step::Up; t.entry_count()];
    for (r, row) in t.rows().iter().enumerate() {
        for cell in row {
            for (i, &v) in cell.iter().enumerate() {
                steps[v as usize - 1] = match (r, i == 0) {
                    (0, true) => Step::Up,
                    (0, false) => Step::Umber,
                    (_, true) => Step::Down,
                    (_, false) => Step::Denim,
                };
            }
        }
    }
    Ok(ColoredPath::new(steps)?)
}

/// β on two-row rectangles, landing in the doubly restricted Motzkin family.
pub fn beta(t: &SetValuedTableau) -> Result<ColoredPath, BijectError> {
    require_two_row_rectangle(t)?;
    beta_ballot(t)
}

/// Inverse of [`beta_ballot`]: `U`/`D` open a new top/bottom cell, `u`/`d`
/// join the newest top/bottom cell. The shape is `(#U, #D)`.
pub fn beta_inv_ballot(p: &ColoredPath) -> Result<SetValuedTableau, BijectError> {
    if !path_family(p).contains(&PathTag::Ballotlike) {
        return Err(BijectError::NotInFamily(p.to_string(), PathTag::Ballotlike));
    }
    let mut rows: [Vec<Vec<u32>>; 2] = [Vec::new(), Vec::new()];
    for (i, s) in p.steps().iter().enumerate() {
        let v = i as u32 + 1;
        match s {
            Step::Up => rows[0].push(vec![v]),
            Step::Down => rows[1].push(vec![v]),
            Step::Umber => rows[0].last_mut().expect("umber after an up step").push(v),
            Step::Denim => rows[1].last_mut().expect("denim after a down step").push(v),
        }
    }
    let shape = SkewShape::straight(Partition::from_rows(vec![rows[0].len(), rows[1].len()])?);
    let [top, bottom] = rows;
    Ok(SetValuedTableau::new(shape, vec![top, bottom])?)
}

pub fn beta_inv(p: &ColoredPath) -> Result<SetValuedTableau, BijectError> {
    if p.len() < 2 || !path_family(p).contains(&PathTag::MotzET) {
        return Err(BijectError::NotInFamily(p.to_string(), PathTag::MotzET));
    }
    beta_inv_ballot(p)
}

// ---------------------------------------------------------------------------
// φ
// ---------------------------------------------------------------------------

/// Contracts the pair of steps ending at the first down step: `UD ↦ d` and
/// `uD ↦ D`. A path without down steps is all umber and loses one step.
pub fn phi(p: &ColoredPath) -> Result<ColoredPath, BijectError> {
    if p.is_empty() || !path_family(p).contains(&PathTag::MotzT) {
        return Err(BijectError::NotInFamily(p.to_string(), PathTag::MotzT));
    }
    let mut steps = p.steps().to_vec();
    match steps.iter().position(|&s| s == Step::Down) {
        None => {
            steps.pop();
        }
        Some(j) => {
            let replacement = match steps[j - 1] {
                Step::Up => Step::Denim,
                Step::Umber => Step::Down,
                other => panic!("step {other:?} before the first down step of a restricted path"),
            };
            steps.splice(j - 1..=j, [replacement]);
        }
    }
    Ok(ColoredPath::new(steps)?)
}

/// Expands the first `D` or `d`: `D ↦ uD`, `d ↦ UD`; with neither present
/// the path is all umber and gains one step.
pub fn phi_inv(p: &ColoredPath) -> Result<ColoredPath, BijectError> {
    if !path_family(p).contains(&PathTag::Motz) {
        return Err(BijectError::NotInFamily(p.to_string(), PathTag::Motz));
    }
    let mut steps = p.steps().to_vec();
    match steps.iter().position(|&s| s == Step::Down || s == Step::Denim) {
        None => steps.push(Step::Umber),
        Some(j) => {
            let pair = match steps[j] {
                Step::Down => [Step::Umber, Step::Down],
                _ => [Step::Up, Step::Down],
            };
            steps.splice(j..=j, pair);
        }
    }
    Ok(ColoredPath::new(steps)?)
}

// ---------------------------------------------------------------------------
// Triples
// ---------------------------------------------------------------------------

/// A standard linear extension, a weakly increasing cut vector with entries
/// in `1..=n`, and for each cut a maximal element of the ideal it cuts off.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    pub extension: LinearExtension,
    pub cuts: Vec<usize>,
    pub picks: Vec<usize>,
}

/// The ideal `T^{-1}({1..=t})` as a mask.
pub fn ideal_below(ext: &LinearExtension, t: usize) -> u64 {
    ext.0[..t].iter().fold(0, |m, &e| m | 1 << e)
}

/// Rebuilds the set-valued filling. Extra value `t_i + i` is added to `p_i`
/// and everything outside the cut ideal moves up by one.
pub fn compose(order: &OrderMasks, tr: &Triple) -> Result<Vec<Vec<u32>>, BijectError> {
    let n = order.len();
    let ext = &tr.extension;
    if tr.cuts.len() != tr.picks.len()
        || tr.cuts.windows(2).any(|w| w[0] > w[1])
        || tr.cuts.iter().any(|&t| t == 0 || t > n)
    {
        return Err(BijectError::InvalidCut(tr.cuts.clone()));
    }
    let values = ext.values();
    let mut sets: Vec<Vec<u32>> = values.iter().map(|&v| vec![v as u32]).collect();
    for (i, (&t, &p)) in tr.cuts.iter().zip(&tr.picks).enumerate() {
        let ideal = ideal_below(ext, t);
        if p >= n || order.maximal(ideal) >> p & 1 == 0 {
            return Err(BijectError::InvalidPick { pick: p, cut: t });
        }
        for e in 0..n {
            if ideal >> e & 1 == 0 {
                sets[e].iter_mut().for_each(|v| *v += 1);
            }
        }
        sets[p].push((t + i + 1) as u32);
    }
    Ok(sets)
}

/// Peels off the largest non-minimal entry `k` times; the element holding
/// it is the pick and the entry minus its round number is the cut.
pub fn decompose<F: SetValuedFilling + ?Sized>(s: &F) -> Triple {
    let mut sets: Vec<Vec<u32>> = s.label_sets().into_iter().map(<[u32]>::to_vec).collect();
    let k = s.entry_count() - sets.len();
    let (mut cuts, mut picks) = (Vec::with_capacity(k), Vec::with_capacity(k));
    for i in (1..=k).rev() {
        let (p, x) = sets
            .iter()
            .enumerate()
            .filter(|(_, set)| set.len() > 1)
            .map(|(e, set)| (e, *set.last().unwrap()))
            .max_by_key(|&(_, x)| x)
            .expect("an extra entry remains");
        sets[p].pop();
        for v in sets.iter_mut().flatten() {
            if *v > x {
                *v -= 1;
            }
        }
        cuts.push(x as usize - i);
        picks.push(p);
    }
    cuts.reverse();
    picks.reverse();
    let mut order = vec![0; sets.len()];
    for (e, set) in sets.iter().enumerate() {
        order[set[0] as usize - 1] = e;
    }
    Triple {
        extension: LinearExtension(order),
        cuts,
        picks,
    }
}

/// Triple decomposition of a tableau, with picks reported as cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableauTriple {
    pub standard: SetValuedTableau,
    pub cuts: Vec<usize>,
    pub picks: Vec<(usize, usize)>,
}

pub fn decompose_tableau(t: &SetValuedTableau) -> TableauTriple {
    let tr = decompose(t);
    let cells = t.shape().cells();
    let sets = tr.extension.values().into_iter().map(|v| vec![v as u32]).collect();
    TableauTriple {
        standard: SetValuedTableau::from_label_sets(t.shape().clone(), sets).expect("standard part is valid"),
        cuts: tr.cuts,
        picks: tr.picks.iter().map(|&p| cells[p]).collect(),
    }
}

pub fn compose_tableau(tt: &TableauTriple) -> Result<SetValuedTableau, BijectError> {
    let shape = tt.standard.shape();
    let mut order = vec![0; shape.num_cells()];
    for (label, set) in tt.standard.label_sets().iter().enumerate() {
        order[set[0] as usize - 1] = label;
    }
    let picks = tt
        .picks
        .iter()
        .map(|&(r, c)| shape.label_of(r, c).ok_or(BijectError::InvalidPick { pick: usize::MAX, cut: 0 }))
        .collect::<Result<Vec<_>, _>>()?;
    let triple = Triple {
        extension: LinearExtension(order),
        cuts: tt.cuts.clone(),
        picks,
    };
    let sets = compose(&shape.order(), &triple)?;
    Ok(SetValuedTableau::from_label_sets(shape.clone(), sets)?)
}

/// Every triple over `order` with `k` cuts, in lexicographic order of
/// (extension, cuts, picks) as produced by the given extension list.
pub fn triples<'a>(
    order: &'a OrderMasks,
    extensions: &'a [LinearExtension],
    k: usize,
) -> impl Iterator<Item = Triple> + 'a {
    let n = order.len();
    extensions.iter().flat_map(move |ext| {
        multisets(1, n, k).flat_map(move |cuts| {
            let choices: Vec<Vec<usize>> =
                cuts.iter().map(|&t| bits(order.maximal(ideal_below(ext, t))).collect()).collect();
            cartesian(&choices).into_iter().map({
                let cuts = cuts.clone();
                move |picks| Triple {
                    extension: ext.clone(),
                    cuts: cuts.clone(),
                    picks,
                }
            })
        })
    })
}

/// Weakly increasing sequences of length `k` over `lo..=hi`.
pub fn multisets(lo: usize, hi: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut current: Option<Vec<usize>> = if k == 0 || lo <= hi { Some(vec![lo; k]) } else { None };
    std::iter::from_fn(move || {
        let out = current.clone()?;
        // Advance: bump the rightmost entry below `hi`, reset the tail to it.
        let next = (0..k).rev().find(|&i| out[i] < hi).map(|i| {
            let mut v = out.clone();
            let bumped = v[i] + 1;
            v[i..].iter_mut().for_each(|x| *x = bumped);
            v
        });
        current = next;
        Some(out)
    })
}

fn cartesian(choices: &[Vec<usize>]) -> Vec<Vec<usize>> {
    choices.iter().fold(vec![Vec::new()], |acc, opts| {
        acc.iter()
            .flat_map(|prefix| {
                opts.iter().map(move |&o| {
                    let mut v = prefix.clone();
                    v.push(o);
                    v
                })
            })
            .collect()
    })
}

// ---------------------------------------------------------------------------
// Half-turn complement
// ---------------------------------------------------------------------------

/// Rotates a tableau of shape `(b+1, b)` by a half turn and replaces each
/// entry `i` by `N + 1 - i`, giving a filling of `(b+1, b+1)/(1)`.
pub fn rotate_complement(t: &SetValuedTableau) -> Result<SetValuedTableau, BijectError> {
    let outer = t.shape().outer().parts();
    let b = outer.get(1).copied().unwrap_or(0);
    if !t.shape().is_straight() || outer.len() > 2 || outer[0] != b + 1 {
        return Err(BijectError::ShapeMismatch {
            expected: "(b+1,b)".into(),
            found: t.shape().to_string(),
        });
    }
    let total = t.entry_count() as u32;
    let flip = |cell: &Vec<u32>| -> Vec<u32> {
        let mut c: Vec<u32> = cell.iter().map(|&v| total + 1 - v).collect();
        c.sort_unstable();
        c
    };
    let bottom_row: Vec<Vec<u32>> = t.rows()[0].iter().rev().map(flip).collect();
    let top_row: Vec<Vec<u32>> = t.rows().get(1).into_iter().flatten().rev().map(flip).collect();
    let shape = SkewShape::new(Partition::new(vec![b + 1, b + 1])?, Partition::new(vec![1])?)?;
    Ok(SetValuedTableau::new(shape, vec![top_row, bottom_row])?)
}

/// Inverse of [`rotate_complement`].
pub fn rotate_complement_inv(t: &SetValuedTableau) -> Result<SetValuedTableau, BijectError> {
    let outer = t.shape().outer().parts();
    let inner = t.shape().inner().parts();
    if outer.len() != 2 || outer[0] != outer[1] || inner != [1] {
        return Err(BijectError::ShapeMismatch {
            expected: "(b+1,b+1)/(1)".into(),
            found: t.shape().to_string(),
        });
    }
    let b = outer[0] - 1;
    let total = t.entry_count() as u32;
    let flip = |cell: &Vec<u32>| -> Vec<u32> {
        let mut c: Vec<u32> = cell.iter().map(|&v| total + 1 - v).collect();
        c.sort_unstable();
        c
    };
    let top: Vec<Vec<u32>> = t.rows()[1].iter().rev().map(flip).collect();
    let bottom: Vec<Vec<u32>> = t.rows()[0].iter().rev().map(flip).collect();
    let shape = SkewShape::straight(Partition::from_rows(vec![b + 1, b])?);
    Ok(SetValuedTableau::new(shape, vec![top, bottom])?)
}
