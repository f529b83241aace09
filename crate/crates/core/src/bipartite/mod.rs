//! Bipartite graphs between n row-vertices and n column-vertices, stored as
//! bit-set adjacency. The same object is the sparsity pattern of a square
//! matrix: bit (j, ℓ) is set when entry (j, ℓ) may be nonzero.
//!
//! Indices are 0-based throughout.

mod conditions;
mod matching;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

pub use conditions::{
    condition_4_1, condition_4_11, condition_4_1_certificate, condition_5_3,
    hall_violation_witness, Certificate, DeficiencyWitness, StructuralWitness, MAX_EXHAUSTIVE_N,
};
pub use matching::{has_perfect_matching, maximum_matching, Matching};

pub type IndexSet = BTreeSet<usize>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
    /// Rows and columns identified, as for symmetric masks.
    Identified,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BipartiteMask {
    n: usize,
    words: usize,
    bits: Vec<u64>,
    symmetric: bool,
}

impl BipartiteMask {
    pub fn empty(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        Self {
            n,
            words,
            bits: vec![0; n * words],
            symmetric: false,
        }
    }

    pub fn empty_symmetric(n: usize) -> Self {
        Self {
            symmetric: true,
            ..Self::empty(n)
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut m = Self::empty(n);
        for j in 0..n {
            for l in 0..n {
                m.insert(j, l);
            }
        }
        m
    }

    pub fn complete_symmetric(n: usize) -> Self {
        Self {
            symmetric: true,
            ..Self::complete(n)
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::empty(n);
        for j in 0..n {
            m.insert(j, j);
        }
        m
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut m = Self::empty(n);
        for &(j, l) in edges {
            m.check_index(j)?;
            m.check_index(l)?;
            m.insert(j, l);
        }
        Ok(m)
    }

    /// Symmetric mask from unordered pairs; (j, j) sets a diagonal bit.
    pub fn symmetric_from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut m = Self::empty_symmetric(n);
        for &(j, l) in pairs {
            m.check_index(j)?;
            m.check_index(l)?;
            m.insert_symmetric(j, l);
        }
        Ok(m)
    }

    /// Asymmetric mask whose n² bits are the low bits of `code`, row-major.
    pub fn from_code(n: usize, code: u64) -> Self {
        let mut m = Self::empty(n);
        for j in 0..n {
            for l in 0..n {
                if code >> (j * n + l) & 1 == 1 {
                    m.insert(j, l);
                }
            }
        }
        m
    }

    /// Symmetric mask whose upper-triangle bits (including the diagonal) are
    /// the low bits of `code`, row-major.
    pub fn symmetric_from_code(n: usize, code: u64) -> Self {
        let mut m = Self::empty_symmetric(n);
        let mut bit = 0;
        for j in 0..n {
            for l in j..n {
                if code >> bit & 1 == 1 {
                    m.insert_symmetric(j, l);
                }
                bit += 1;
            }
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn contains(&self, j: usize, l: usize) -> bool {
        self.bits[j * self.words + l / 64] >> (l % 64) & 1 == 1
    }

    /// Sets bit (j, ℓ). On a symmetric mask use `insert_symmetric`.
    pub fn insert(&mut self, j: usize, l: usize) {
        self.bits[j * self.words + l / 64] |= 1 << (l % 64);
    }

    pub fn remove(&mut self, j: usize, l: usize) {
        self.bits[j * self.words + l / 64] &= !(1 << (l % 64));
    }

    pub fn insert_symmetric(&mut self, j: usize, l: usize) {
        self.insert(j, l);
        self.insert(l, j);
    }

    /// Adds an edge, mirrored when the mask is symmetric.
    pub fn with_edge(&self, j: usize, l: usize) -> Self {
        let mut m = self.clone();
        if m.symmetric {
            m.insert_symmetric(j, l);
        } else {
            m.insert(j, l);
        }
        m
    }

    /// Same bits with the symmetric flag cleared.
    pub fn as_asymmetric(&self) -> Self {
        Self {
            symmetric: false,
            ..self.clone()
        }
    }

    /// Marks the mask symmetric after checking bit symmetry.
    pub fn into_symmetric(self) -> Result<Self> {
        for j in 0..self.n {
            for l in j + 1..self.n {
                if self.contains(j, l) != self.contains(l, j) {
                    return Err(Error::NotSymmetric);
                }
            }
        }
        Ok(Self {
            symmetric: true,
            ..self
        })
    }

    pub fn row_words(&self, j: usize) -> &[u64] {
        &self.bits[j * self.words..(j + 1) * self.words]
    }

    /// Column indices set in row j, ascending.
    pub fn row_iter(&self, j: usize) -> impl Iterator<Item = usize> + '_ {
        self.row_words(j).iter().enumerate().flat_map(|(w, &word)| {
            let mut rest = word;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let b = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(w * 64 + b)
            })
        })
    }

    pub fn degree(&self, j: usize) -> usize {
        self.row_words(j)
            .iter()
            .map(|w| w.count_ones() as usize)
            .sum()
    }

    pub fn edge_count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |j| self.row_iter(j).map(move |l| (j, l)))
    }

    pub fn adjacency_lists(&self) -> Vec<Vec<usize>> {
        (0..self.n).map(|j| self.row_iter(j).collect()).collect()
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i < self.n {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: i,
                n: self.n,
            })
        }
    }

    fn check_set(&self, a: &IndexSet) -> Result<()> {
        a.iter().try_for_each(|&i| self.check_index(i))
    }

    /// Γ_G(A): vertices on the opposite side adjacent to some vertex of A.
    pub fn neighborhood(&self, a: &IndexSet, side: Side) -> Result<IndexSet> {
        self.check_set(a)?;
        Ok(match side {
            Side::Left | Side::Identified => a.iter().flat_map(|&j| self.row_iter(j)).collect(),
            Side::Right => (0..self.n)
                .filter(|&j| a.iter().any(|&l| self.contains(j, l)))
                .collect(),
        })
    }

    /// Γ̃_G(A) on a symmetric mask: every ℓ with ⟨j, ℓ⟩ an edge for some j ∈ A.
    pub fn tilde_neighborhood(&self, a: &IndexSet) -> Result<IndexSet> {
        if !self.symmetric {
            return Err(Error::NotSymmetric);
        }
        self.neighborhood(a, Side::Identified)
    }

    /// Row and column vertices with no incident edge.
    pub fn isolated_points(&self) -> (IndexSet, IndexSet) {
        let left = (0..self.n).filter(|&j| self.degree(j) == 0).collect();
        let mut seen = vec![0u64; self.words];
        for j in 0..self.n {
            for (s, w) in seen.iter_mut().zip(self.row_words(j)) {
                *s |= w;
            }
        }
        let right = (0..self.n)
            .filter(|&l| seen[l / 64] >> (l % 64) & 1 == 0)
            .collect();
        (left, right)
    }

    /// Isolated-point count: both sides for asymmetric masks, identified
    /// vertices for symmetric ones.
    pub fn isolated_count(&self) -> usize {
        if self.symmetric {
            (0..self.n).filter(|&j| self.degree(j) == 0).count()
        } else {
            let (l, r) = self.isolated_points();
            l.len() + r.len()
        }
    }

    /// G[S]: both sides restricted to S and relabeled 0..|S| in order.
    pub fn principal_subgraph(&self, s: &IndexSet) -> Result<Self> {
        self.check_set(s)?;
        let idx: Vec<usize> = s.iter().copied().collect();
        let mut m = Self::empty(idx.len());
        m.symmetric = self.symmetric;
        for (a, &j) in idx.iter().enumerate() {
            for (b, &l) in idx.iter().enumerate() {
                if self.contains(j, l) {
                    m.insert(a, b);
                }
            }
        }
        Ok(m)
    }

    /// Everything except vertex j on both sides.
    pub fn without_index(&self, j: usize) -> Self {
        let s: IndexSet = (0..self.n).filter(|&i| i != j).collect();
        self.principal_subgraph(&s).expect("indices in range")
    }
}

impl fmt::Display for BipartiteMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.n)?;
        if self.symmetric {
            write!(f, " sym")?;
        }
        for j in 0..self.n {
            writeln!(f)?;
            for l in 0..self.n {
                f.write_str(if self.contains(j, l) { "1" } else { "0" })?;
            }
        }
        writeln!(f)
    }
}

impl fmt::Debug for BipartiteMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for BipartiteMask {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("missing header line".into()))?;
        let mut parts = header.split_whitespace();
        let n: usize = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad header {header:?}")))?;
        let symmetric = match parts.next() {
            None => false,
            Some("sym") => true,
            Some(other) => return Err(Error::Parse(format!("unknown header flag {other:?}"))),
        };
        let mut m = Self::empty(n);
        for j in 0..n {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse(format!("expected {n} rows, found {j}")))?;
            if line.len() != n {
                return Err(Error::Parse(format!(
                    "row {j} has width {}, expected {n}",
                    line.len()
                )));
            }
            for (l, ch) in line.chars().enumerate() {
                match ch {
                    '1' => m.insert(j, l),
                    '0' => {}
                    _ => return Err(Error::Parse(format!("row {j}: unexpected {ch:?}"))),
                }
            }
        }
        if lines.next().is_some() {
            return Err(Error::Parse("trailing rows after mask".into()));
        }
        if symmetric {
            m.into_symmetric()
        } else {
            Ok(m)
        }
    }
}
