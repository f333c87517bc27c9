//! Reverse Cuthill–McKee ordering for envelope reduction.

use std::collections::VecDeque;

use crate::sparse::CsrMatrix;

fn bfs_levels(adj: &CsrMatrix, start: usize, level: &mut [usize], stamp: &mut [usize], mark: usize) -> (usize, usize) {
    // Returns (eccentricity, a node of minimum degree in the last level).
    let mut queue = VecDeque::new();
    queue.push_back(start);
    stamp[start] = mark;
    level[start] = 0;
    let mut depth = 0;
    let mut last = vec![start];
    while let Some(v) = queue.pop_front() {
        for (u, _) in adj.row(v) {
            if stamp[u] != mark {
                stamp[u] = mark;
                level[u] = level[v] + 1;
                if level[u] > depth {
                    depth = level[u];
                    last.clear();
                }
                if level[u] == depth {
                    last.push(u);
                }
                queue.push_back(u);
            }
        }
    }
    let degree = |v: usize| adj.indptr[v + 1] - adj.indptr[v];
    let far = *last.iter().min_by_key(|&&v| (degree(v), v)).unwrap();
    (depth, far)
}

/// Permutation `perm` (new index → old index) of the symmetric pattern of `a`.
pub fn reverse_cuthill_mckee(a: &CsrMatrix) -> Vec<usize> {
    let n = a.n;
    let degree = |v: usize| a.indptr[v + 1] - a.indptr[v];
    let mut visited = vec![false; n];
    let mut level = vec![0usize; n];
    let mut stamp = vec![usize::MAX; n];
    let mut mark = 0;
    let mut order = Vec::with_capacity(n);
    for seed in 0..n {
        if visited[seed] {
            continue;
        }
        // Pseudo-peripheral start node (George–Liu).
        let mut start = seed;
        mark += 1;
        let (mut ecc, mut far) = bfs_levels(a, start, &mut level, &mut stamp, mark);
        for _ in 0..8 {
            mark += 1;
            let (e2, f2) = bfs_levels(a, far, &mut level, &mut stamp, mark);
            if e2 <= ecc {
                break;
            }
            start = far;
            ecc = e2;
            far = f2;
        }
        let begin = order.len();
        visited[start] = true;
        order.push(start);
        let mut head = begin;
        let mut nbrs = Vec::new();
        while head < order.len() {
            let v = order[head];
            head += 1;
            nbrs.clear();
            nbrs.extend(a.row(v).map(|(u, _)| u).filter(|&u| !visited[u]));
            nbrs.sort_by_key(|&u| (degree(u), u));
            for &u in &nbrs {
                visited[u] = true;
                order.push(u);
            }
        }
    }
    order.reverse();
    order
}

/// Sum over rows of (i − first column in row i) under the permutation.
pub fn envelope_size(a: &CsrMatrix, perm: &[usize]) -> usize {
    let mut inv = vec![0; a.n];
    for (new, &old) in perm.iter().enumerate() {
        inv[old] = new;
    }
    (0..a.n)
        .map(|new| {
            let old = perm[new];
            let first = a.row(old).map(|(j, _)| inv[j]).min().unwrap_or(new).min(new);
            new - first
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid_laplacian(nx: usize, ny: usize) -> CsrMatrix {
        let id = |i: usize, j: usize| i * ny + j;
        let mut t = Vec::new();
        for i in 0..nx {
            for j in 0..ny {
                t.push((id(i, j), id(i, j), 4.0));
                if i + 1 < nx {
                    t.push((id(i, j), id(i + 1, j), -1.0));
                    t.push((id(i + 1, j), id(i, j), -1.0));
                }
                if j + 1 < ny {
                    t.push((id(i, j), id(i, j + 1), -1.0));
                    t.push((id(i, j + 1), id(i, j), -1.0));
                }
            }
        }
        CsrMatrix::from_triplets(nx * ny, &t)
    }

    #[test]
    fn rcm_is_a_permutation_and_reduces_envelope() {
        // Long thin grid numbered along the long direction first.
        let a = grid_laplacian(5, 60);
        let perm = reverse_cuthill_mckee(&a);
        let mut seen = perm.clone();
        seen.sort();
        assert_eq!(seen, (0..a.n).collect::<Vec<_>>());
        let natural: Vec<usize> = (0..a.n).collect();
        assert!(envelope_size(&a, &perm) < envelope_size(&a, &natural) / 5);
    }
}
