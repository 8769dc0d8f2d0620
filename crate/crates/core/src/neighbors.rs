//! Exact nearest-row search over a dense row-major matrix.
//!
//! Both generators reduce to the same problem: for every row of an
//! `n x width` matrix, list the `k` rows at the smallest Euclidean distance.
//! Ordering rules:
//!
//! * with `include_self`, row `i` itself always comes first (distance 0),
//!   even when other rows are exact duplicates;
//! * remaining rows are ordered by distance, ties by ascending row index.

use rayon::prelude::*;

/// Sorted neighbor lists, stored flat (`n * k`).
#[derive(Clone, Debug, PartialEq)]
pub struct NeighborTable {
    pub(crate) indices: Vec<usize>,
    pub(crate) distances: Vec<f64>,
    pub(crate) k: usize,
    pub(crate) include_self: bool,
}

impl NeighborTable {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.indices.len() / self.k
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn include_self(&self) -> bool {
        self.include_self
    }

    /// Source indices of the neighbors of row `i`, nearest first.
    pub fn indices(&self, i: usize) -> &[usize] {
        &self.indices[i * self.k..(i + 1) * self.k]
    }

    /// Euclidean distances matching [`indices`](Self::indices).
    pub fn distances(&self, i: usize) -> &[f64] {
        &self.distances[i * self.k..(i + 1) * self.k]
    }
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Caller guarantees `k <= n` (or `k <= n - 1` without self) and `k >= 1`.
pub(crate) fn nearest_rows(matrix: &[f64], width: usize, k: usize, include_self: bool) -> NeighborTable {
    let n = matrix.len() / width;
    debug_assert!(k >= 1 && k <= if include_self { n } else { n - 1 });

    let per_row: Vec<(Vec<usize>, Vec<f64>)> = (0..n)
        .into_par_iter()
        .map_init(Vec::new, |scratch: &mut Vec<(f64, usize)>, i| {
            let row = &matrix[i * width..(i + 1) * width];
            scratch.clear();
            scratch.extend(
                matrix
                    .chunks_exact(width)
                    .enumerate()
                    .filter(|(j, _)| *j != i)
                    .map(|(j, other)| (squared_distance(row, other), j)),
            );
            let take = if include_self { k - 1 } else { k };
            let cmp = |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
            if take > 0 && take < scratch.len() {
                scratch.select_nth_unstable_by(take - 1, cmp);
            }
            scratch.truncate(take);
            scratch.sort_unstable_by(cmp);

            let mut idx = Vec::with_capacity(k);
            let mut dist = Vec::with_capacity(k);
            if include_self {
                idx.push(i);
                dist.push(0.0);
            }
            for &(d2, j) in scratch.iter() {
                idx.push(j);
                dist.push(d2.sqrt());
            }
            (idx, dist)
        })
        .collect();

    let mut indices = Vec::with_capacity(n * k);
    let mut distances = Vec::with_capacity(n * k);
    for (idx, dist) in per_row {
        indices.extend(idx);
        distances.extend(dist);
    }
    NeighborTable {
        indices,
        distances,
        k,
        include_self,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn self_first_even_with_duplicates() {
        // rows 0 and 2 are identical
        let m = [1.0, 5.0, 1.0, 3.0];
        let t = nearest_rows(&m, 1, 2, true);
        assert_eq!(t.indices(2), &[2, 0]);
        assert_eq!(t.indices(0), &[0, 2]);
        assert_eq!(t.distances(0), &[0.0, 0.0]);
    }

    #[test]
    fn ties_break_by_index() {
        let m = [0.0, 1.0, -1.0, 1.0];
        let t = nearest_rows(&m, 1, 3, false);
        assert_eq!(t.indices(0), &[1, 2, 3]);
    }

    #[test]
    fn constant_matrix_takes_smallest_indices() {
        let m = [2.0; 12];
        let t = nearest_rows(&m, 2, 3, false);
        assert_eq!(t.indices(4), &[0, 1, 2]);
        assert_eq!(t.indices(0), &[1, 2, 3]);
    }
}
