//! Sort-and-sweep kernels for the componentwise order in up to three dimensions.
//!
//! `a` weakly dominates `b` when `a[i] <= b[i]` for every `i`. Inputs must be
//! free of NaN; all rows of one call share the same length.

use std::cmp::Ordering;
use std::collections::BTreeMap;

pub(crate) const MAX_DIM: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq)]
struct Key(f64);

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

fn lex(a: &[f64], b: &[f64]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

/// Minimal points of a set in the plane, stored by first coordinate with the
/// second strictly decreasing.
#[derive(Default)]
struct Staircase {
    steps: BTreeMap<Key, f64>,
}

impl Staircase {
    fn dominates(&self, a: f64, b: f64) -> bool {
        self.steps
            .range(..=Key(a))
            .next_back()
            .is_some_and(|(_, &s)| s <= b)
    }

    fn insert(&mut self, a: f64, b: f64) {
        if self.dominates(a, b) {
            return;
        }
        let stale: Vec<Key> = self
            .steps
            .range(Key(a)..)
            .take_while(|(_, &s)| s >= b)
            .map(|(k, _)| *k)
            .collect();
        for k in stale {
            self.steps.remove(&k);
        }
        self.steps.insert(Key(a), b);
    }
}

/// Indices, ascending, of the rows not weakly dominated by another row; of equal
/// rows only the first survives. `None` when the dimension is above [`MAX_DIM`].
pub(crate) fn minimal_indices(rows: &[Vec<f64>]) -> Option<Vec<usize>> {
    let m = rows.first().map_or(1, Vec::len);
    if m > MAX_DIM || m == 0 {
        return None;
    }
    let mut order: Vec<usize> = (0..rows.len()).collect();
    order.sort_by(|&i, &j| lex(&rows[i], &rows[j]).then(i.cmp(&j)));

    let mut kept = Vec::new();
    match m {
        1 => kept.extend(order.first().copied()),
        2 => {
            let mut best = f64::INFINITY;
            for i in order {
                if rows[i][1] < best {
                    best = rows[i][1];
                    kept.push(i);
                }
            }
        }
        _ => {
            let mut stairs = Staircase::default();
            for i in order {
                let r = &rows[i];
                if !stairs.dominates(r[1], r[2]) {
                    stairs.insert(r[1], r[2]);
                    kept.push(i);
                }
            }
        }
    }
    kept.sort_unstable();
    Some(kept)
}

/// For every query, whether some stored row weakly dominates it. `None` when
/// the dimension is above [`MAX_DIM`].
pub(crate) fn dominated(stored: &[Vec<f64>], queries: &[Vec<f64>]) -> Option<Vec<bool>> {
    let m = stored
        .first()
        .or(queries.first())
        .map_or(1, Vec::len);
    if m > MAX_DIM || m == 0 {
        return None;
    }
    if stored.is_empty() {
        return Some(vec![false; queries.len()]);
    }
    let mut by_first: Vec<usize> = (0..stored.len()).collect();
    by_first.sort_by(|&i, &j| stored[i][0].total_cmp(&stored[j][0]));

    let out = match m {
        1 => {
            let low = stored[by_first[0]][0];
            queries.iter().map(|q| low <= q[0]).collect()
        }
        2 => {
            let firsts: Vec<f64> = by_first.iter().map(|&i| stored[i][0]).collect();
            let mut prefix_min = Vec::with_capacity(firsts.len());
            let mut best = f64::INFINITY;
            for &i in &by_first {
                best = best.min(stored[i][1]);
                prefix_min.push(best);
            }
            queries
                .iter()
                .map(|q| {
                    let n = firsts.partition_point(|&a| a <= q[0]);
                    n > 0 && prefix_min[n - 1] <= q[1]
                })
                .collect()
        }
        _ => {
            let mut q_order: Vec<usize> = (0..queries.len()).collect();
            q_order.sort_by(|&i, &j| queries[i][0].total_cmp(&queries[j][0]));
            let mut out = vec![false; queries.len()];
            let mut stairs = Staircase::default();
            let mut next = 0;
            for qi in q_order {
                let q = &queries[qi];
                while next < by_first.len() && stored[by_first[next]][0] <= q[0] {
                    let s = &stored[by_first[next]];
                    stairs.insert(s[1], s[2]);
                    next += 1;
                }
                out[qi] = stairs.dominates(q[1], q[2]);
            }
            out
        }
    };
    Some(out)
}
