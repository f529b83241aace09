use std::collections::VecDeque;

use super::BipartiteMask;

const NIL: usize = usize::MAX;

/// A matching stored from both ends.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    left: Vec<usize>,
    right: Vec<usize>,
    size: usize,
}

impl Matching {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_perfect(&self) -> bool {
        self.size == self.left.len()
    }

    pub fn partner_of_left(&self, j: usize) -> Option<usize> {
        Some(self.left[j]).filter(|&x| x != NIL)
    }

    pub fn partner_of_right(&self, l: usize) -> Option<usize> {
        Some(self.right[l]).filter(|&x| x != NIL)
    }

    /// Matched (left, right) pairs in left order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.left
            .iter()
            .enumerate()
            .filter(|(_, &r)| r != NIL)
            .map(|(j, &r)| (j, r))
    }

    pub fn unmatched_left(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.left.len()).filter(|&j| self.left[j] == NIL)
    }

    pub fn unmatched_right(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.right.len()).filter(|&l| self.right[l] == NIL)
    }
}

/// Row adjacency in compressed form: row j's columns are
/// `targets[offsets[j]..offsets[j + 1]]`, ascending.
fn csr(g: &BipartiteMask) -> (Vec<usize>, Vec<usize>) {
    let n = g.n();
    let mut offsets = Vec::with_capacity(n + 1);
    let mut targets = Vec::with_capacity(g.edge_count());
    offsets.push(0);
    for j in 0..n {
        for (w, &word) in g.row_words(j).iter().enumerate() {
            let mut rest = word;
            while rest != 0 {
                targets.push(w * 64 + rest.trailing_zeros() as usize);
                rest &= rest - 1;
            }
        }
        offsets.push(targets.len());
    }
    (offsets, targets)
}

/// Hopcroft–Karp: shortest augmenting paths in phases, O(E√V).
pub fn maximum_matching(g: &BipartiteMask) -> Matching {
    let n = g.n();
    let (offsets, targets) = csr(g);
    let adj = |j: usize| &targets[offsets[j]..offsets[j + 1]];
    let mut left = vec![NIL; n];
    let mut right = vec![NIL; n];
    let mut size = 0;

    // greedy warm start
    for (j, slot) in left.iter_mut().enumerate() {
        if let Some(&l) = adj(j).iter().find(|&&l| right[l] == NIL) {
            *slot = l;
            right[l] = j;
            size += 1;
        }
    }

    let mut dist = vec![0usize; n];
    let mut queue = VecDeque::with_capacity(n);
    let mut cursor = vec![0usize; n];
    let mut stack: Vec<usize> = Vec::new();
    loop {
        // layer the free left vertices and everything alternating from them
        queue.clear();
        for j in 0..n {
            if left[j] == NIL {
                dist[j] = 0;
                queue.push_back(j);
            } else {
                dist[j] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(j) = queue.pop_front() {
            for &l in adj(j) {
                let k = right[l];
                if k == NIL {
                    found = true;
                } else if dist[k] == usize::MAX {
                    dist[k] = dist[j] + 1;
                    queue.push_back(k);
                }
            }
        }
        if !found {
            break;
        }

        // vertex-disjoint augmenting paths along the layers
        cursor.iter_mut().for_each(|c| *c = 0);
        for root in 0..n {
            if left[root] != NIL {
                continue;
            }
            stack.clear();
            stack.push(root);
            while let Some(&j) = stack.last() {
                if cursor[j] == adj(j).len() {
                    dist[j] = usize::MAX;
                    stack.pop();
                    continue;
                }
                let l = adj(j)[cursor[j]];
                cursor[j] += 1;
                let k = right[l];
                if k == NIL {
                    // flip the path recorded on the stack
                    let mut col = l;
                    while let Some(v) = stack.pop() {
                        let prev = left[v];
                        left[v] = col;
                        right[col] = v;
                        col = prev;
                    }
                    size += 1;
                    break;
                }
                if dist[k] == dist[j] + 1 {
                    stack.push(k);
                }
            }
        }
    }
    Matching { left, right, size }
}

pub fn has_perfect_matching(g: &BipartiteMask) -> bool {
    let (rows, cols) = g.isolated_points();
    rows.is_empty() && cols.is_empty() && maximum_matching(g).is_perfect()
}
