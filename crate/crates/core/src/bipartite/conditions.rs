use std::collections::VecDeque;

use itertools::Itertools;
use serde::Serialize;

use super::{maximum_matching, BipartiteMask, IndexSet, Matching, Side};
use crate::error::{Error, Result};

/// Largest n accepted by the exhaustive subset searches.
pub const MAX_EXHAUSTIVE_N: usize = 12;

/// A vertex set whose neighborhood is too small for a perfect matching.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeficiencyWitness {
    pub side: Side,
    pub set: IndexSet,
    pub gamma: IndexSet,
}

/// A witness (k, I, J) for `condition_4_11` or `condition_5_3`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructuralWitness {
    pub side: Side,
    pub k: usize,
    pub set: IndexSet,
    pub gamma: IndexSet,
}

/// Some principal subgraph of order n or n−1 has a perfect matching.
///
/// With a maximum matching of size n−1 leaving row r and column c free, the
/// rows that some maximum matching leaves free are those reachable from r by
/// alternating paths, and likewise for columns from c. Deleting row j and
/// column j leaves a perfect matching iff j is in both sets.
pub fn condition_4_1(g: &BipartiteMask) -> bool {
    // two empty rows or columns already force a deficiency of two
    let (rows, cols) = g.isolated_points();
    if rows.len() >= 2 || cols.len() >= 2 {
        return false;
    }
    let m = maximum_matching(g);
    m.is_perfect() || removable_index(g, &m).is_some()
}

/// Smallest j such that G[{0..n}∖{j}] has a perfect matching, given a
/// maximum matching of G that is not perfect.
fn removable_index(g: &BipartiteMask, m: &Matching) -> Option<usize> {
    let n = g.n();
    if m.size() + 1 < n {
        return None;
    }
    let r = m.unmatched_left().next().expect("one free row");
    let c = m.unmatched_right().next().expect("one free column");
    let rows = exposable_rows(g, m, r);
    let cols = exposable_cols(g, m, c);
    (0..n).find(|&j| rows[j] && cols[j])
}

/// Why `condition_4_1` holds: a perfect matching of G, or of G with index
/// `removed` deleted on both sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub removed: Option<usize>,
    /// `assignment[j]` is the column matched to row j; `None` only at `removed`.
    pub assignment: Vec<Option<usize>>,
}

pub fn condition_4_1_certificate(g: &BipartiteMask) -> Option<Certificate> {
    let n = g.n();
    let m = maximum_matching(g);
    if m.is_perfect() {
        let assignment = (0..n).map(|j| m.partner_of_left(j)).collect();
        return Some(Certificate {
            removed: None,
            assignment,
        });
    }
    let removed = removable_index(g, &m)?;
    let keep: Vec<usize> = (0..n).filter(|&i| i != removed).collect();
    let sub = maximum_matching(&g.without_index(removed));
    debug_assert!(sub.is_perfect());
    let mut assignment = vec![None; n];
    for (a, b) in sub.pairs() {
        assignment[keep[a]] = Some(keep[b]);
    }
    Some(Certificate {
        removed: Some(removed),
        assignment,
    })
}

/// Rows reachable from free row r along non-matching then matching edges.
fn exposable_rows(g: &BipartiteMask, m: &Matching, r: usize) -> Vec<bool> {
    let n = g.n();
    let mut seen = vec![false; n];
    let mut col_seen = vec![false; n];
    seen[r] = true;
    let mut queue = VecDeque::from([r]);
    while let Some(j) = queue.pop_front() {
        for l in g.row_iter(j) {
            if col_seen[l] {
                continue;
            }
            col_seen[l] = true;
            if let Some(k) = m.partner_of_right(l) {
                if !seen[k] {
                    seen[k] = true;
                    queue.push_back(k);
                }
            }
        }
    }
    seen
}

fn exposable_cols(g: &BipartiteMask, m: &Matching, c: usize) -> Vec<bool> {
    let n = g.n();
    let col_adj: Vec<Vec<usize>> = {
        let mut adj = vec![Vec::new(); n];
        for (j, l) in g.edges() {
            adj[l].push(j);
        }
        adj
    };
    let mut seen = vec![false; n];
    let mut row_seen = vec![false; n];
    seen[c] = true;
    let mut queue = VecDeque::from([c]);
    while let Some(l) = queue.pop_front() {
        for &j in &col_adj[l] {
            if row_seen[j] {
                continue;
            }
            row_seen[j] = true;
            if let Some(k) = m.partner_of_left(j) {
                if !seen[k] {
                    seen[k] = true;
                    queue.push_back(k);
                }
            }
        }
    }
    seen
}

/// A set A with |Γ(A)| < |A|, or `None` when a perfect matching exists.
///
/// The fast mode grows A by alternating reachability from a free row, which
/// yields |Γ(A)| = |A| − 1. The exhaustive mode returns a violator of minimum
/// size, lexicographically smallest, rows before columns.
pub fn hall_violation_witness(
    g: &BipartiteMask,
    exhaustive: bool,
) -> Result<Option<DeficiencyWitness>> {
    let n = g.n();
    if exhaustive && n > MAX_EXHAUSTIVE_N {
        return Err(Error::SearchTooLarge {
            n,
            max: MAX_EXHAUSTIVE_N,
        });
    }
    let m = maximum_matching(g);
    if m.is_perfect() {
        return Ok(None);
    }
    if exhaustive {
        return Ok(minimum_violator(g));
    }
    let r = m.unmatched_left().next().expect("free row");
    let rows = exposable_rows(g, &m, r);
    let set: IndexSet = (0..n).filter(|&j| rows[j]).collect();
    let gamma = g.neighborhood(&set, Side::Left)?;
    let side = if g.is_symmetric() {
        Side::Identified
    } else {
        Side::Left
    };
    Ok(Some(DeficiencyWitness { side, set, gamma }))
}

fn minimum_violator(g: &BipartiteMask) -> Option<DeficiencyWitness> {
    let n = g.n();
    let sides: &[Side] = if g.is_symmetric() {
        &[Side::Identified]
    } else {
        &[Side::Left, Side::Right]
    };
    for k in 1..=n {
        for combo in (0..n).combinations(k) {
            let set: IndexSet = combo.into_iter().collect();
            for &side in sides {
                let gamma = g.neighborhood(&set, side).expect("in range");
                if gamma.len() < set.len() {
                    return Some(DeficiencyWitness { side, set, gamma });
                }
            }
        }
    }
    None
}

/// Some I of size k, 2 ≤ k ≤ (n+1)/2, on either side, whose neighborhood J
/// has size k − 1 and every vertex of J has at least two neighbors in I.
pub fn condition_4_11(g: &BipartiteMask) -> Result<Option<StructuralWitness>> {
    let sides: &[Side] = if g.is_symmetric() {
        &[Side::Identified]
    } else {
        &[Side::Left, Side::Right]
    };
    structural_search(g, sides, false)
}

/// The symmetric analog of `condition_4_11` using Γ̃ and additionally I ∩ J = ∅.
pub fn condition_5_3(g: &BipartiteMask) -> Result<Option<StructuralWitness>> {
    if !g.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    structural_search(g, &[Side::Identified], true)
}

fn structural_search(
    g: &BipartiteMask,
    sides: &[Side],
    disjoint: bool,
) -> Result<Option<StructuralWitness>> {
    let n = g.n();
    if n > MAX_EXHAUSTIVE_N {
        return Err(Error::SearchTooLarge {
            n,
            max: MAX_EXHAUSTIVE_N,
        });
    }
    for k in 2..=n.div_ceil(2) {
        for combo in (0..n).combinations(k) {
            let set: IndexSet = combo.into_iter().collect();
            for &side in sides {
                let gamma = g.neighborhood(&set, side)?;
                if gamma.len() + 1 != k {
                    continue;
                }
                if disjoint && !set.is_disjoint(&gamma) {
                    continue;
                }
                let doubly_covered = gamma.iter().all(|&w| {
                    set.iter()
                        .filter(|&&v| match side {
                            Side::Right => g.contains(w, v),
                            _ => g.contains(v, w),
                        })
                        .count()
                        >= 2
                });
                if doubly_covered {
                    return Ok(Some(StructuralWitness {
                        side,
                        k,
                        set,
                        gamma,
                    }));
                }
            }
        }
    }
    Ok(None)
}
